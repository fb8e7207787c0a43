"""Poset / finite-topology layer: examples plus round-trip properties."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atomcat.errors import (CycleDetected, NotKolmogorov, SizeBudgetExceeded,
                            UnknownElement)
from atomcat.ordertop import (FiniteTopology, alexandroff_of_poset,
                              is_kolmogorov, normalize_poset,
                              poset_from_json, poset_invariants,
                              poset_isomorphic, poset_of_topology,
                              topology_from_json)


def brute_up_sets(elements, le_pairs):
    """Independent oracle: enumerate all subsets, keep the up-closed ones."""
    le = set(le_pairs)
    out = []
    for r in range(len(elements) + 1):
        for sub in itertools.combinations(elements, r):
            s = set(sub)
            if all(q in s for p in s for (a, q) in le if a == p):
                out.append(frozenset(s))
    return set(out)


def chain(*names):
    return normalize_poset([(names[i], names[i + 1])
                            for i in range(len(names) - 1)], list(names))


def antichain(*names):
    return normalize_poset([], list(names))


DIAMOND = normalize_poset([("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
                          ["a", "b", "c", "d"])


class TestNormalize:
    def test_transitivity(self):
        p = normalize_poset([("a", "b"), ("b", "c")], ["a", "b", "c"])
        assert p.leq("a", "c")

    def test_singleton(self):
        p = normalize_poset([], ["a"])
        assert p.le == frozenset({("a", "a")})

    def test_cycle_rejected(self):
        with pytest.raises(CycleDetected):
            normalize_poset([("a", "b"), ("b", "a")], ["a", "b"])

    def test_unknown_element(self):
        with pytest.raises(UnknownElement):
            normalize_poset([("a", "x")], ["a"])

    def test_covers_regenerate_relation(self):
        p = chain("a", "b", "c")
        q = normalize_poset(p.covers, p.elements)
        assert q.le == p.le


class TestAlexandroff:
    def test_antichain_discrete(self):
        topo = alexandroff_of_poset(antichain("a", "b"))
        assert len(topo.opens) == 4

    def test_chain_opens(self):
        # oracle: hand enumeration of up-sets of a < b
        p = chain("a", "b")
        topo = alexandroff_of_poset(p)
        got = {frozenset(topo.subset_of(m)) for m in topo.opens}
        assert got == brute_up_sets(p.elements, p.le)
        assert got == {frozenset(), frozenset({"b"}), frozenset({"a", "b"})}

    def test_single_element(self):
        topo = alexandroff_of_poset(antichain("a"))
        assert len(topo.opens) == 2

    def test_output_is_valid_and_kolmogorov(self):
        topo = alexandroff_of_poset(DIAMOND)
        assert topo.validate()
        assert is_kolmogorov(topo)

    def test_cap(self):
        big = antichain(*[f"e{i}" for i in range(20)])
        with pytest.raises(SizeBudgetExceeded):
            alexandroff_of_poset(big)


class TestKolmogorov:
    def test_discrete_true(self):
        topo = FiniteTopology(("a", "b"), (0, 1, 2, 3))
        assert is_kolmogorov(topo)

    def test_indiscrete_false(self):
        topo = FiniteTopology(("a", "b"), (0, 3))
        assert not is_kolmogorov(topo)

    def test_sierpinski(self):
        # opens over (a, b): {}, {b}, {a, b}; both pairs get separated
        topo = FiniteTopology(("a", "b"), (0, 2, 3))
        assert is_kolmogorov(topo)


class TestSpecialization:
    def test_discrete_gives_antichain(self):
        topo = FiniteTopology(("a", "b"), (0, 1, 2, 3))
        p = poset_of_topology(topo)
        assert not p.lt("a", "b") and not p.lt("b", "a")

    def test_sierpinski_order(self):
        # closure of {b} is {a, b}: complement scan of opens missing b
        topo = FiniteTopology(("a", "b"), (0, 2, 3))
        p = poset_of_topology(topo)
        assert p.lt("a", "b")

    def test_indiscrete_rejected(self):
        with pytest.raises(NotKolmogorov):
            poset_of_topology(FiniteTopology(("a", "b"), (0, 3)))


class TestInvariants:
    def test_3chain(self):
        assert poset_invariants(chain("a", "b", "c")).has_3chain
        assert not poset_invariants(DIAMOND.restrict(("a", "b"))).has_3chain

    def test_antichain(self):
        rep = poset_invariants(antichain("a", "b"))
        assert set(rep.maximal) == {"a", "b"}
        assert set(rep.minimal) == {"a", "b"}
        assert all(j == () for j in rep.j_sets.values())

    def test_diamond_j_set(self):
        # oracle: V(a)\{a} = {b, c, d} = V(b) u V(c)
        rep = poset_invariants(DIAMOND)
        assert set(rep.j_sets["a"]) == {"b", "c"}
        assert rep.covering_ok

    def test_covering_identity_everywhere(self):
        for p in (chain("a", "b", "c", "d"), DIAMOND, antichain("x", "y", "z")):
            assert poset_invariants(p).covering_ok


class TestIsomorphism:
    def test_identity_like(self):
        w = poset_isomorphic(chain("a", "b"), chain("a", "b"))
        assert w == {"a": "a", "b": "b"}

    def test_chain_vs_antichain(self):
        assert poset_isomorphic(chain("a", "b"), antichain("a", "b")) is None

    def test_diamond_relabeled(self):
        other = normalize_poset([("w", "x"), ("w", "y"), ("x", "z"), ("y", "z")],
                                ["w", "x", "y", "z"])
        w = poset_isomorphic(DIAMOND, other)
        assert w is not None
        for a, b in DIAMOND.le:
            assert other.leq(w[a], w[b])

    def test_size_cap(self):
        big = antichain(*[f"e{i}" for i in range(9)])
        with pytest.raises(SizeBudgetExceeded):
            poset_isomorphic(big, big)


@st.composite
def random_posets(draw):
    n = draw(st.integers(1, 5))
    elements = [f"p{i}" for i in range(n)]
    pairs = []
    # pairs only go upward in index: guarantees acyclicity
    for i in range(n):
        for j in range(i + 1, n):
            if draw(st.booleans()):
                pairs.append((elements[i], elements[j]))
    return normalize_poset(pairs, elements)


@settings(max_examples=120, deadline=None)
@given(random_posets())
def test_roundtrip_is_identity(p):
    topo = alexandroff_of_poset(p)
    assert topo.validate()
    assert is_kolmogorov(topo)
    back = poset_of_topology(topo)
    assert back.le == p.le


@settings(max_examples=80, deadline=None)
@given(random_posets())
def test_singleton_open_iff_maximal(p):
    topo = alexandroff_of_poset(p)
    for x in p.elements:
        assert topo.is_open([x]) == (x in p.maximal_elements())
        assert topo.is_closed([x]) == (x in p.minimal_elements())


def test_json_roundtrip():
    p = DIAMOND
    q = poset_from_json(p.to_json())
    assert q.le == p.le and q.elements == p.elements
    topo = alexandroff_of_poset(p)
    topo2 = topology_from_json(topo.to_json())
    assert topo2.opens == topo.opens


def test_dot_export_mentions_covers():
    dot = chain("a", "b", "c").to_dot()
    assert '"a" -> "b"' in dot and '"b" -> "c"' in dot and '"a" -> "c"' not in dot
