"""Symbolic spectra, order rules, claim checkers, brute crosschecks."""

import itertools

from atomcat.generators import (gen_noatom, gen_realization_acc,
                                gen_realization_general, preset)
from atomcat.ordertop import normalize_poset, poset_isomorphic
from atomcat.predictor import (DiffReport, atom_spectrum_point,
                               check_infinite_descent, check_max_not_open,
                               check_min_not_closed, check_no_minimal_atom,
                               check_preset_claims, crosscheck,
                               noatom_absorption_check, predict_chain,
                               predict_disjoint_union, predict_noatom,
                               predict_preset, predict_realization)
from atomcat.quiver import GeneratedQuiver, TruncationSpec, make_quiver

CHAIN2 = normalize_poset([("p0", "p1")], ["p0", "p1"])
DIAMOND = normalize_poset([("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
                          ["a", "b", "c", "d"])


def point(label):
    return atom_spectrum_point(label, "simple")


class TestDisjointUnion:
    def test_two_distinct_loop_points(self):
        out = predict_disjoint_union([point("S(c0)"), point("S(c1)")])
        assert out.labels() == ("S(c0)", "S(c1)")
        assert not out.order.lt("S(c0)", "S(c1)")

    def test_identical_blocks_merge(self):
        out = predict_disjoint_union([point("S(c)"), point("S(c)")])
        assert out.labels() == ("S(c)",)

    def test_empty(self):
        out = predict_disjoint_union([])
        assert out.labels() == ()


class TestChain:
    def test_infinite_repetition_adds_limit_below(self):
        out = predict_chain([point("S(c)")], "lim", infinite=True)
        assert set(out.labels()) == {"S(c)", "lim"}
        assert out.order.lt("lim", "S(c)")
        assert out.kind_of("lim") == "chain_limit"

    def test_finite_chain_has_no_limit(self):
        out = predict_chain([point("S(c)")] * 3, "lim", infinite=False)
        assert out.labels() == ("S(c)",)
        # brute force confirms: a finite 3-chain of one loop point has a
        # single atom and nothing below it
        from atomcat.atomspec import spectrum
        from atomcat.quiver import chain, make_quiver
        blk = make_quiver(["v"], ["c"], [("v", "v", "c")])
        rep = spectrum(chain([blk] * 3).quiver)
        assert rep.atoms.labels() == ("S(c)",)

    def test_repeating_part_of_two_blocks(self):
        out = predict_chain([point("A"), point("B")], "lim", infinite=True,
                            cycle_start=0)
        assert out.order.lt("lim", "A") and out.order.lt("lim", "B")

    def test_prefix_blocks_do_not_receive_the_limit(self):
        out = predict_chain([point("A"), point("B")], "lim", infinite=True,
                            cycle_start=1)
        assert not out.order.lt("lim", "A")
        assert out.order.lt("lim", "B")

    def test_limit_is_minimal(self):
        out = predict_chain([point("A"), point("B")], "lim", infinite=True)
        assert "lim" in out.order.minimal_elements()


def all_posets_up_to(n):
    """Every poset on <= n labeled elements via upward-closed pair sets."""
    out = []
    for size in range(1, n + 1):
        elements = [f"e{i}" for i in range(size)]
        idx_pairs = [(i, j) for i in range(size) for j in range(i + 1, size)]
        for keep in itertools.product([0, 1], repeat=len(idx_pairs)):
            pairs = [(elements[i], elements[j])
                     for (i, j), k in zip(idx_pairs, keep) if k]
            try:
                out.append(normalize_poset(pairs, elements))
            except Exception:
                continue
    # dedupe up to equality of relations (labeled)
    seen = {}
    for p in out:
        seen[(p.elements, p.le)] = p
    return list(seen.values())


class TestRealizationPrediction:
    def test_single_point(self):
        res = predict_realization(normalize_poset([], ["p"]), "acc")
        assert res.spectrum.labels() == ("simple(p)",)

    def test_chain2_acc_order(self):
        res = predict_realization(CHAIN2, "acc")
        assert set(res.spectrum.labels()) == {"chain(p0)", "simple(p1)"}
        assert res.spectrum.order.lt("chain(p0)", "simple(p1)")

    def test_acc_order_isomorphic_spot_checks(self):
        for p in (CHAIN2, DIAMOND,
                  normalize_poset([], ["x", "y", "z"])):
            res = predict_realization(p, "acc")
            w = res.witness
            for a in p.elements:
                for b in p.elements:
                    assert p.leq(a, b) == res.spectrum.order.leq(w[a], w[b])

    def test_general_diamond(self):
        res = predict_realization(DIAMOND, "general")
        assert len(res.spectrum.labels()) == 4
        w = res.witness
        for a in DIAMOND.elements:
            for b in DIAMOND.elements:
                assert DIAMOND.leq(a, b) == \
                    res.spectrum.order.leq(w[a], w[b])
        # the pre-quotient window also carries the non-maximal simples
        assert set(res.pre_quotient.labels()) >= set(res.spectrum.labels())

    def test_general_witness_isomorphism_via_backtracker(self):
        res = predict_realization(DIAMOND, "general")
        assert poset_isomorphic(DIAMOND, res.spectrum.order) is not None

    def test_chain_limits_minimal_in_their_chain(self):
        res = predict_realization(DIAMOND, "acc")
        for fam in res.spectrum.chain_families:
            limit = fam["limit"]
            for b in fam["recurring"]:
                assert res.spectrum.order.leq(limit, b)


class TestCrosscheck:
    def test_chain2_acc_depth3(self):
        g = gen_realization_acc(CHAIN2, TruncationSpec(depth=3))
        res = predict_realization(CHAIN2, "acc")
        diff = crosscheck(res.pre_quotient, g)
        assert diff.matched == ("simple(p1)",)
        assert diff.missing_in_brute == ("chain(p0)",)
        assert diff.unexpected == () and diff.order_violations == ()

    def test_finite_loops_chain_all_matched(self):
        q = make_quiver(
            ["v1", "v2", "v3"], ["c1", "c2", "c3", "b1", "b2"],
            [("v1", "v1", "c1"), ("v2", "v2", "c2"), ("v3", "v3", "c3"),
             ("v1", "v2", "b1"), ("v2", "v3", "b2")])
        table = {f"delta({i})": {"kind": "simple",
                                 "atom_label": f"delta({i})",
                                 "loop_colors": [f"c{i}"],
                                 "vertices": [f"v{i}"]}
                 for i in (1, 2, 3)}
        gen = GeneratedQuiver(q, table)
        sym = predict_disjoint_union([point(f"delta({i})")
                                      for i in (1, 2, 3)])
        diff = crosscheck(sym, gen)
        assert set(diff.matched) == {"delta(1)", "delta(2)", "delta(3)"}
        assert diff.missing_in_brute == () and diff.unexpected == ()

    def test_corrupted_atom_table_yields_unexpected(self):
        g = gen_realization_acc(CHAIN2, TruncationSpec(depth=2))
        bad_table = {k: dict(v) for k, v in g.atom_table.items()}
        bad_table["simple(p1)"]["loop_colors"] = ["c(WRONG)"]
        bad = GeneratedQuiver(g.quiver, bad_table)
        res = predict_realization(CHAIN2, "acc")
        diff = crosscheck(res.pre_quotient, bad)
        assert diff.unexpected != ()

    def test_general_mode_smallest_window(self):
        g = gen_realization_general(DIAMOND, TruncationSpec(depth=3,
                                                            ladder_range=(0, 0)))
        res = predict_realization(DIAMOND, "general")
        diff = crosscheck(res.pre_quotient, g)
        assert diff.unexpected == () and diff.order_violations == ()

    def test_monotone_matched_sets(self):
        res = predict_realization(DIAMOND, "acc")
        matched = []
        for d in (1, 2, 3):
            g = gen_realization_acc(DIAMOND, TruncationSpec(depth=d))
            matched.append(set(crosscheck(res.pre_quotient, g).matched))
        assert matched[0] <= matched[1] <= matched[2]


class TestNoAtomPrediction:
    def test_post_quotient_empty_pre_nonzero(self):
        tr = TruncationSpec(depth=2, ladder_range=(0, 2))
        pred = predict_noatom(tr)
        assert pred.post_quotient_empty
        assert len(pred.pre_spectrum.labels()) > 0
        gen = gen_noatom(tr)
        assert len(gen.quiver.vertices) > 0  # nonzero module witness

    def test_absorption_at_depths(self):
        for d in (1, 2, 3):
            tr = TruncationSpec(depth=d, ladder_range=(0, d))
            pred = predict_noatom(tr)
            gen = gen_noatom(tr)
            results = noatom_absorption_check(pred, gen)
            assert results and all(results.values())

    def test_crosscheck_matches_deltas(self):
        tr = TruncationSpec(depth=1, ladder_range=(0, 1))
        diff = crosscheck(predict_noatom(tr).pre_spectrum, gen_noatom(tr))
        assert set(diff.matched) == {"delta(0)", "delta(1)"}
        assert diff.unexpected == ()


class TestPresetPredictions:
    def test_infinite_chain_order(self):
        sym = predict_preset("infinite-chain", 4)
        assert sym.order.lt("gamma", "delta")

    def test_aass_vs_asupp_claims(self):
        sym = predict_preset("aass-vs-asupp", 3)
        checks = check_preset_claims("aass-vs-asupp", sym, 3)
        assert all(checks.values())

    def test_no_minimal_atom(self):
        sym = predict_preset("no-minimal-atom", 4)
        assert check_no_minimal_atom(sym)
        # negative control: a spectrum with an honest minimal atom
        assert not check_no_minimal_atom(
            predict_realization(CHAIN2, "acc").spectrum)

    def test_no_dcc(self):
        sym = predict_preset("no-dcc", 4)
        assert check_infinite_descent(sym, 4)
        assert not check_infinite_descent(predict_preset("no-dcc", 2), 4)

    def test_max_not_open(self):
        sym = predict_preset("max-not-open", 4)
        assert check_max_not_open(sym)
        # negative control: discrete spectra have open maximal sets
        assert not check_max_not_open(
            predict_disjoint_union([point("A"), point("B")]))

    def test_min_not_closed(self):
        sym = predict_preset("min-not-closed", 4)
        assert check_min_not_closed(sym)
        assert not check_min_not_closed(
            predict_disjoint_union([point("A"), point("B")]))
        # minimal set: outer limit plus every loop simple
        minimal = set(sym.order.minimal_elements())
        assert "gamma" in minimal
        assert all(f"delta({i})" in minimal for i in range(4))
        assert "gamma'" not in minimal

    def test_all_presets_crosscheck_at_depths(self):
        for name in ("infinite-chain", "aass-vs-asupp", "no-minimal-atom",
                     "no-dcc", "max-not-open", "min-not-closed"):
            for depth in (1, 2, 3, 4):
                diff = crosscheck(predict_preset(name, depth),
                                  preset(name, depth))
                assert diff.unexpected == (), (name, depth)
                assert diff.order_violations == (), (name, depth)

    def test_preset_missing_atoms_are_chain_limits(self):
        for name in ("infinite-chain", "max-not-open", "min-not-closed"):
            sym = predict_preset(name, 2)
            diff = crosscheck(sym, preset(name, 2))
            for lbl in diff.missing_in_brute:
                assert sym.kind_of(lbl) == "chain_limit", (name, lbl)


def test_diffreport_json_roundtrip():
    from atomcat.predictor import diff_from_json
    d = DiffReport(("a",), ("b",), (), (("x", "y"),))
    data = d.to_json()
    assert data["matched"] == ["a"] and data["missing_in_brute"] == ["b"]
    assert not d.ok()
    assert diff_from_json(data) == d
    assert DiffReport((), (), (), ()).ok()


def test_symbolic_json_roundtrip():
    import json
    from atomcat.predictor import symbolic_from_json
    for name in ("max-not-open", "min-not-closed", "no-dcc"):
        sym = predict_preset(name, 3)
        data = json.loads(json.dumps(sym.to_json()))
        back = symbolic_from_json(data)
        assert back.to_json() == sym.to_json()
        assert back.order.le == sym.order.le
