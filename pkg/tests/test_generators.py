"""Generators: truncation shapes, color discipline, atom tables."""

import pytest

from atomcat.errors import DepthTooSmall, UnknownPreset, WindowTooSmall
from atomcat.generators import (gen_noatom, gen_realization_acc,
                                gen_realization_general, preset)
from atomcat.ordertop import normalize_poset
from atomcat.quiver import (TruncationSpec, generated_from_json,
                            loop_stripped_topo_order, make_quiver)


def poset(pairs, elems):
    return normalize_poset(pairs, elems)


POINT = poset([], ["p"])
CHAIN2 = poset([("p0", "p1")], ["p0", "p1"])
CHAIN4 = poset([("p0", "p1"), ("p1", "p2"), ("p2", "p3")],
               ["p0", "p1", "p2", "p3"])
ANTICHAIN2 = poset([], ["a", "b"])
DIAMOND = poset([("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
                ["a", "b", "c", "d"])


def loops_of(quiver):
    return [a for a in quiver.arrows if a.src == a.dst]


class TestRealizationAcc:
    def test_single_point(self):
        g = gen_realization_acc(POINT, TruncationSpec(depth=2))
        assert len(g.quiver.vertices) == 1
        assert len(loops_of(g.quiver)) == 1
        assert set(g.atom_table) == {"simple(p)"}

    def test_chain2_depth3_is_three_block_chain(self):
        g = gen_realization_acc(CHAIN2, TruncationSpec(depth=3))
        # p1 block: one loop point; p0 block: three copies chained
        p1 = [v for v in g.quiver.vertices if v.startswith("p1/")]
        p0 = [v for v in g.quiver.vertices if v.startswith("p0/")]
        assert len(p1) == 1 and len(p0) == 3
        bundles = [a for a in g.quiver.arrows if a.color.startswith("!(")]
        assert len(bundles) == 2
        tags = {a.color.split(";")[0] for a in bundles}
        assert tags == {"!((p0"}

    def test_antichain_two_loop_points(self):
        g = gen_realization_acc(ANTICHAIN2, TruncationSpec(depth=2))
        assert len(g.quiver.vertices) == 2
        assert len(g.quiver.arrows) == 2
        assert {a.color for a in g.quiver.arrows} == {"c(a)", "c(b)"}

    def test_diamond_depth2_block_sizes(self):
        # derived: J(a) = {b, c}, each pass contributes one copy of each;
        # blocks of b and c are depth-2 chains over the loop point d
        g = gen_realization_acc(DIAMOND, TruncationSpec(depth=2))
        sizes = {p: len([v for v in g.quiver.vertices
                         if v.startswith(f"{p}/")])
                 for p in "abcd"}
        assert sizes == {"d": 1, "b": 2, "c": 2, "a": 8}

    def test_monotone_truncation(self):
        for p in (CHAIN2, CHAIN4, DIAMOND):
            shallow = set(gen_realization_acc(p, TruncationSpec(depth=2))
                          .quiver.vertices)
            deep = set(gen_realization_acc(p, TruncationSpec(depth=3))
                       .quiver.vertices)
            assert shallow <= deep

    def test_depth_too_small(self):
        with pytest.raises(DepthTooSmall):
            gen_realization_acc(CHAIN2, TruncationSpec(depth=0))

    def test_loop_stripped_dag(self):
        for p in (CHAIN4, DIAMOND):
            g = gen_realization_acc(p, TruncationSpec(depth=3))
            assert loop_stripped_topo_order(g.quiver) is not None

    def test_atom_table_partitions_vertices(self):
        g = gen_realization_acc(DIAMOND, TruncationSpec(depth=2))
        simple_vs = set()
        for key, entry in g.atom_table.items():
            if entry["kind"] == "simple":
                simple_vs |= set(entry["vertices"])
        # every vertex realizes exactly one maximal element's loop point
        assert simple_vs == set(g.quiver.vertices)

    def test_json_roundtrip(self):
        g = gen_realization_acc(CHAIN2, TruncationSpec(depth=2))
        g2 = generated_from_json(g.to_json())
        assert g2.quiver == g.quiver and g2.atom_table == g.atom_table


class TestRealizationGeneral:
    def test_single_point(self):
        g = gen_realization_general(POINT, TruncationSpec(depth=1,
                                                          ladder_range=(0, 0)))
        assert list(g.quiver.vertices) == ["v(p)"]
        assert len(loops_of(g.quiver)) == 1

    def test_chain2_window3_vertex_count(self):
        # derived oracle: words are (p0), (p1), (p0,i,p1) for each i
        g = gen_realization_general(CHAIN2, TruncationSpec(depth=2,
                                                           ladder_range=(-1, 1)))
        assert len(g.quiver.vertices) == 2 + 3

    def test_vertex_count_matches_word_enumeration_oracle(self):
        # independent count: alternating words over strictly increasing
        # chains with one window integer per step
        def count_words(poset, depth, window_size):
            def chains_from(e, length):
                if length == 0:
                    return 1
                return sum(chains_from(e2, length - 1)
                           for e2 in poset.elements if poset.lt(e, e2))
            total = 0
            for e in poset.elements:
                for l in range(depth + 1):
                    total += chains_from(e, l) * window_size ** l
            return total

        for poset, trunc in ((CHAIN2, TruncationSpec(2, (-1, 1))),
                             (CHAIN4, TruncationSpec(2, (0, 1))),
                             (DIAMOND, TruncationSpec(3, (0, 0)))):
            g = gen_realization_general(poset, trunc)
            lo, hi = trunc.ladder_range
            assert len(g.quiver.vertices) == \
                count_words(poset, trunc.depth, hi - lo + 1)

    def test_same_position_arrows_descend_the_well_order(self):
        vee = poset([("a", "b"), ("a", "c")], ["a", "b", "c"])
        g = gen_realization_general(vee, TruncationSpec(depth=1,
                                                        ladder_range=(0, 0)))
        zero_family = [x for x in g.quiver.arrows if x.color.startswith("0c")]
        assert [(x.src, x.dst) for x in zero_family] == \
            [("v(a,0,c)", "v(a,0,b)")]

    def test_every_vertex_has_one_loop(self):
        g = gen_realization_general(CHAIN4, TruncationSpec(depth=2,
                                                           ladder_range=(0, 1)))
        per_vertex = {}
        for a in loops_of(g.quiver):
            per_vertex[a.src] = per_vertex.get(a.src, 0) + 1
        assert set(per_vertex) == set(g.quiver.vertices)
        assert all(n == 1 for n in per_vertex.values())

    def test_step_colors_shared_skip_colors_positional(self):
        g = gen_realization_general(CHAIN2, TruncationSpec(depth=1,
                                                           ladder_range=(-1, 1)))
        steps = [a for a in g.quiver.arrows if a.color.startswith("1c")]
        skips = [a for a in g.quiver.arrows if a.color.startswith("2c")]
        assert len(steps) == 2 and len({a.color for a in steps}) == 1
        assert len(skips) == 1
        # skip colors appear once per enclosing context
        assert len({a.color for a in skips}) == len(skips)

    def test_loop_colors_shared_across_copies(self):
        g = gen_realization_general(CHAIN2, TruncationSpec(depth=1,
                                                           ladder_range=(0, 1)))
        loops = loops_of(g.quiver)
        by_color = {}
        for a in loops:
            by_color.setdefault(a.color, []).append(a.src)
        # p1's loop sits on the bare word and on every nested copy
        assert len(by_color["loop[p1]"]) == 3

    def test_window_required(self):
        with pytest.raises(WindowTooSmall):
            gen_realization_general(CHAIN2, TruncationSpec(depth=1,
                                                           ladder_range=None))

    def test_dag(self):
        g = gen_realization_general(CHAIN4, TruncationSpec(depth=3,
                                                           ladder_range=(0, 0)))
        assert loop_stripped_topo_order(g.quiver) is not None


class TestNoAtom:
    def test_depth1_window01(self):
        g = gen_noatom(TruncationSpec(depth=1, ladder_range=(0, 1)))
        assert sorted(g.quiver.vertices) == ["v(0)", "v(0,1)", "v(1)"]
        steps = [a for a in g.quiver.arrows if a.color.startswith("1c")]
        fans = [a for a in g.quiver.arrows if a.color.startswith("ic")]
        assert len(steps) == 2 and len(fans) == 1

    def test_every_vertex_one_loop_keyed_by_last_entry(self):
        g = gen_noatom(TruncationSpec(depth=2, ladder_range=(0, 2)))
        for v in g.quiver.vertices:
            loops = [a for a in g.quiver.arrows
                     if a.src == a.dst and a.src == v]
            assert len(loops) == 1
            last = v[2:-1].split(",")[-1]
            assert loops[0].color == f"loop[{last}]"

    def test_vertex_count_is_nonempty_subsets(self):
        # window {0..d}, any length: strictly increasing words are
        # exactly the nonempty subsets
        for d in (1, 2, 3):
            g = gen_noatom(TruncationSpec(depth=d, ladder_range=(0, d)))
            assert len(g.quiver.vertices) == (1 << (d + 1)) - 1

    def test_empty_window_rejected(self):
        with pytest.raises(DepthTooSmall):
            gen_noatom(TruncationSpec(depth=1, ladder_range=(1, 0)))

    def test_noetherian_family_lists_loops_and_chains(self):
        g = gen_noatom(TruncationSpec(depth=1, ladder_range=(0, 1)))
        kinds = {f["kind"] for f in g.noetherian_family}
        assert kinds == {"loop_simple", "chain"}
        loop_labels = {f["label"] for f in g.noetherian_family
                       if f["kind"] == "loop_simple"}
        assert loop_labels == {"noeth-loop(0)", "noeth-loop(1)"}

    def test_monotone(self):
        small = set(gen_noatom(TruncationSpec(depth=1, ladder_range=(0, 1)))
                    .quiver.vertices)
        big = set(gen_noatom(TruncationSpec(depth=2, ladder_range=(0, 2)))
                  .quiver.vertices)
        assert small <= big

    def test_dag(self):
        g = gen_noatom(TruncationSpec(depth=3, ladder_range=(0, 3)))
        assert loop_stripped_topo_order(g.quiver) is not None


class TestPresets:
    def test_infinite_chain_depth4(self):
        g = preset("infinite-chain", 4)
        assert len(g.quiver.vertices) == 4
        assert len(g.quiver.arrows) == 3
        assert len({a.color for a in g.quiver.arrows}) == 3

    def test_aass_vs_asupp_depth3(self):
        g = preset("aass-vs-asupp", 3)
        assert len(g.quiver.vertices) == 4
        bundles = [a for a in g.quiver.arrows if a.color.startswith("!(")]
        assert len(bundles) == 3  # 3 chain vertices x 1 terminal

    def test_max_not_open_depth2(self):
        g = preset("max-not-open", 2)
        assert len(g.quiver.vertices) == 4
        assert {a.color for a in loops_of(g.quiver)} == {"c(0)", "c(1)"}

    def test_min_not_closed_shifted_blocks_share_colors(self):
        g = preset("min-not-closed", 2)
        # blocks are shifts 0..1 of length 2: vertices v(0),v(1) | v(1),v(2)
        assert len(g.quiver.vertices) == 4
        c1_loops = [a for a in loops_of(g.quiver) if a.color == "c(1)"]
        assert len(c1_loops) == 2  # same loop color in both shifted copies
        assert set(g.atom_table) >= {"delta(0)", "delta(1)", "delta(2)",
                                     "gamma", "gamma'"}

    def test_no_minimal_and_no_dcc_generate(self):
        for name in ("no-minimal-atom", "no-dcc"):
            g = preset(name, 2)
            assert len(g.quiver.vertices) >= 3
            assert loop_stripped_topo_order(g.quiver) is not None

    def test_unknown_and_depth_errors(self):
        with pytest.raises(UnknownPreset):
            preset("nope", 2)
        with pytest.raises(DepthTooSmall):
            preset("infinite-chain", 0)


def test_chain_cyclic_generation_ignores_trailing_blocks():
    # in a chain of blocks with fresh bundle colors, a vector's cyclic
    # submodule is decided by its leading-block part alone
    from atomcat.linmod import FieldSpec, cyclic_submodule, module_of_quiver
    from atomcat.quiver import chain
    blk = make_quiver(["u", "w"], ["cl"], [("u", "u", "cl"), ("w", "w", "cl")])
    g = chain([blk, blk, blk], tags=["t0", "t1"])
    m = module_of_quiver(g.quiver, FieldSpec(2))
    idx = {v: i for i, v in enumerate(m.basis_labels)}
    lead = [v for v in m.basis_labels if v.startswith("b0/")]
    trail = [v for v in m.basis_labels if v.startswith("b1/")]
    for lead_v in lead:
        for trail_v in trail:
            x = m.ops.add(m.ops.unit_vec(idx[lead_v], m.dim),
                          m.ops.unit_vec(idx[trail_v], m.dim))
            xp = m.ops.unit_vec(idx[lead_v], m.dim)
            assert cyclic_submodule(m, x).key() == \
                cyclic_submodule(m, xp).key()


def test_spectrum_dag_path_agrees_with_generic_on_realization():
    from atomcat.atomspec import _dedupe_simples, spectrum
    from atomcat.linmod import FieldSpec, composition_factors, \
        module_of_quiver
    g = gen_realization_acc(DIAMOND, TruncationSpec(depth=2))
    dag_labels = set(spectrum(g.quiver).atoms.labels())
    m = module_of_quiver(g.quiver, FieldSpec(2))
    generic = _dedupe_simples(list(composition_factors(m)))
    assert set(generic.labels()) == dag_labels


def test_all_generated_quivers_revalidate():
    gens = [
        gen_realization_acc(DIAMOND, TruncationSpec(depth=2)),
        gen_realization_general(CHAIN2, TruncationSpec(depth=2,
                                                       ladder_range=(0, 1))),
        gen_noatom(TruncationSpec(depth=2, ladder_range=(0, 2))),
    ] + [preset(n, 2) for n in ("infinite-chain", "aass-vs-asupp",
                                "no-minimal-atom", "no-dcc",
                                "max-not-open", "min-not-closed")]
    for g in gens:
        q = g.quiver
        rebuilt = make_quiver(q.vertices, q.colors, q.arrows)
        assert rebuilt == q
