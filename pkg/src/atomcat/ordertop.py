"""Finite posets, finite topologies, and the up-set correspondence.

A finite poset is stored as its full relation (reflexive-transitive
closure); a finite topology stores its points plus the open-set family
as bitmasks over the sorted point list.  Both are immutable values and
every operation here is a pure function.

The two directions of the correspondence: a poset yields the topology
whose opens are the up-closed subsets, and a Kolmogorov topology yields
the specialization order x <= y iff every open set containing x also
contains y.  On finite inputs these are mutually inverse.
"""

import json
from dataclasses import dataclass

from .errors import (CycleDetected, InvalidTopology, NotKolmogorov,
                     SizeBudgetExceeded, UnknownElement)

# enumerating up-sets or validating a topology is exponential in the
# point count; refuse beyond this many points unless the caller raises it
DEFAULT_POINT_CAP = 16


@dataclass(frozen=True)
class Poset:
    """Finite poset: sorted element ids plus the full <= relation."""

    elements: tuple
    le: frozenset  # pairs (a, b) with a <= b, reflexive + transitive

    def leq(self, a, b):
        return (a, b) in self.le

    def lt(self, a, b):
        return a != b and (a, b) in self.le

    def up_set(self, p):
        """V(p) = every element above-or-equal p."""
        return tuple(q for q in self.elements if self.leq(p, q))

    def down_set(self, p):
        return tuple(q for q in self.elements if self.leq(q, p))

    @property
    def covers(self):
        """Hasse edges: pairs (a, b) with a < b and nothing in between."""
        out = []
        for a, b in sorted(self.le):
            if a == b:
                continue
            if any(self.lt(a, c) and self.lt(c, b) for c in self.elements):
                continue
            out.append((a, b))
        return tuple(out)

    def maximal_elements(self):
        return tuple(p for p in self.elements
                     if not any(self.lt(p, q) for q in self.elements))

    def minimal_elements(self):
        return tuple(p for p in self.elements
                     if not any(self.lt(q, p) for q in self.elements))

    def restrict(self, subset):
        keep = tuple(sorted(subset))
        missing = set(keep) - set(self.elements)
        if missing:
            raise UnknownElement("restriction outside poset",
                                 elements=sorted(missing))
        return Poset(keep, frozenset((a, b) for (a, b) in self.le
                                     if a in subset and b in subset))

    def to_json(self):
        return {"elements": list(self.elements),
                "le": [[a, b] for (a, b) in sorted(self.le) if a != b]}

    def to_dot(self):
        lines = ["digraph hasse {", "  rankdir=BT;"]
        for p in self.elements:
            lines.append(f'  "{p}";')
        for a, b in self.covers:
            lines.append(f'  "{a}" -> "{b}";')
        lines.append("}")
        return "\n".join(lines)


@dataclass(frozen=True)
class FiniteTopology:
    """Finite topology: sorted points, opens as sorted bitmasks."""

    points: tuple
    opens: tuple  # ints; bit i refers to points[i]

    def index(self, p):
        try:
            return self.points.index(p)
        except ValueError:
            raise UnknownElement("point not in topology", point=p)

    def mask_of(self, subset):
        m = 0
        for p in subset:
            m |= 1 << self.index(p)
        return m

    def subset_of(self, mask):
        return tuple(p for i, p in enumerate(self.points) if mask >> i & 1)

    def is_open(self, subset):
        return self.mask_of(subset) in set(self.opens)

    def is_closed(self, subset):
        full = (1 << len(self.points)) - 1
        return (full ^ self.mask_of(subset)) in set(self.opens)

    def validate(self, cap=DEFAULT_POINT_CAP):
        """Check the topology axioms; O(|opens|^2) union/intersection scan."""
        n = len(self.points)
        if n > cap:
            raise SizeBudgetExceeded("too many points to validate",
                                     points=n, cap=cap)
        full = (1 << n) - 1
        fam = set(self.opens)
        if 0 not in fam or full not in fam:
            return False
        for a in fam:
            for b in fam:
                if (a | b) not in fam or (a & b) not in fam:
                    return False
        return True

    def to_json(self):
        return {"points": list(self.points),
                "opens": [list(self.subset_of(m)) for m in self.opens]}


def normalize_poset(raw_pairs, elements):
    """Reflexive-transitive closure of raw <= pairs; rejects cycles."""
    elems = tuple(sorted(set(elements)))
    index = {p: i for i, p in enumerate(elems)}
    for a, b in raw_pairs:
        if a not in index or b not in index:
            raise UnknownElement("pair references undeclared element",
                                 pair=[a, b])
    n = len(elems)
    adj = [set() for _ in range(n)]
    for i in range(n):
        adj[i].add(i)
    for a, b in raw_pairs:
        adj[index[a]].add(index[b])
    # Warshall closure
    for k in range(n):
        for i in range(n):
            if k in adj[i]:
                adj[i] |= adj[k]
    for i in range(n):
        for j in adj[i]:
            if j != i and i in adj[j]:
                raise CycleDetected("antisymmetry violated",
                                    between=[elems[i], elems[j]])
    le = frozenset((elems[i], elems[j]) for i in range(n) for j in adj[i])
    return Poset(elems, le)


def poset_from_json(data):
    return normalize_poset([tuple(p) for p in data["le"]], data["elements"])


def topology_from_json(data, cap=DEFAULT_POINT_CAP):
    points = tuple(sorted(set(data["points"])))
    topo = FiniteTopology(points, ())
    masks = sorted({topo.mask_of(sub) for sub in data["opens"]})
    topo = FiniteTopology(points, tuple(masks))
    if not topo.validate(cap=cap):
        raise InvalidTopology("open family violates the topology axioms")
    return topo


def alexandroff_of_poset(poset, cap=DEFAULT_POINT_CAP):
    """Topology of all up-closed subsets of the poset."""
    n = len(poset.elements)
    if n > cap:
        raise SizeBudgetExceeded("too many elements to enumerate up-sets",
                                 elements=n, cap=cap)
    idx = {p: i for i, p in enumerate(poset.elements)}
    up_masks = []
    for p in poset.elements:
        m = 0
        for q in poset.up_set(p):
            m |= 1 << idx[q]
        up_masks.append(m)
    opens = []
    for mask in range(1 << n):
        ok = True
        for i in range(n):
            if mask >> i & 1 and (mask & up_masks[i]) != up_masks[i]:
                ok = False
                break
        if ok:
            opens.append(mask)
    return FiniteTopology(poset.elements, tuple(sorted(opens)))


def is_kolmogorov(topology):
    """True iff every pair of distinct points is separated by some open."""
    n = len(topology.points)
    for i in range(n):
        for j in range(i + 1, n):
            if not any(bool(m >> i & 1) != bool(m >> j & 1)
                       for m in topology.opens):
                return False
    return True


def poset_of_topology(topology):
    """Specialization order of a finite Kolmogorov topology."""
    if not is_kolmogorov(topology):
        raise NotKolmogorov("points are not pairwise separated")
    n = len(topology.points)
    # minimal neighborhood of each point: intersection of opens containing it
    min_nbhd = []
    for i in range(n):
        m = (1 << n) - 1
        for o in topology.opens:
            if o >> i & 1:
                m &= o
        min_nbhd.append(m)
    pairs = []
    for i in range(n):
        for j in range(n):
            # x <= y iff every open containing x contains y
            if min_nbhd[i] >> j & 1:
                pairs.append((topology.points[i], topology.points[j]))
    return normalize_poset(pairs, topology.points)


@dataclass(frozen=True)
class InvariantReport:
    maximal: tuple
    minimal: tuple
    has_3chain: bool
    j_sets: dict
    covering_ok: bool


def poset_invariants(poset):
    """Maximal/minimal elements, 3-chain existence, and canonical J(p).

    J(p) is fixed as the minimal elements of V(p) minus p itself; on a
    finite poset that choice always satisfies the covering identity
    V(p) \\ {p} = union of V(p') over p' in J(p), which is re-checked
    and reported.
    """
    has_3chain = any(poset.lt(x, y) and poset.lt(y, z)
                     for x in poset.elements
                     for y in poset.elements
                     for z in poset.elements)
    j_sets = {}
    covering_ok = True
    for p in poset.elements:
        strict_up = [q for q in poset.up_set(p) if q != p]
        sub = poset.restrict(strict_up) if strict_up else None
        j = sub.minimal_elements() if sub else ()
        j_sets[p] = j
        covered = set()
        for q in j:
            covered.update(poset.up_set(q))
        if covered != set(strict_up):
            covering_ok = False
    return InvariantReport(
        maximal=poset.maximal_elements(),
        minimal=poset.minimal_elements(),
        has_3chain=has_3chain,
        j_sets=j_sets,
        covering_ok=covering_ok,
    )


def poset_isomorphic(p, q, size_cap=8):
    """Order isomorphism p -> q as a dict, or None.

    Exhaustive backtracking with degree-profile pruning; intended for
    small posets, refuses above size_cap.
    """
    if len(p.elements) != len(q.elements):
        return None
    n = len(p.elements)
    if n > size_cap:
        raise SizeBudgetExceeded("poset too large for isomorphism search",
                                 size=n, cap=size_cap)

    def profile(poset, x):
        return (len(poset.up_set(x)), len(poset.down_set(x)))

    p_prof = {x: profile(p, x) for x in p.elements}
    q_prof = {y: profile(q, y) for y in q.elements}
    if sorted(p_prof.values()) != sorted(q_prof.values()):
        return None

    order = sorted(p.elements, key=lambda x: p_prof[x])
    mapping = {}
    used = set()

    def consistent(x, y):
        for x2, y2 in mapping.items():
            if p.leq(x, x2) != q.leq(y, y2) or p.leq(x2, x) != q.leq(y2, y):
                return False
        return True

    def backtrack(i):
        if i == n:
            return True
        x = order[i]
        for y in q.elements:
            if y in used or q_prof[y] != p_prof[x]:
                continue
            if not consistent(x, y):
                continue
            mapping[x] = y
            used.add(y)
            if backtrack(i + 1):
                return True
            del mapping[x]
            used.discard(y)
        return False

    if backtrack(0):
        return dict(mapping)
    return None


def topology_json_roundtrip(topology):
    return topology_from_json(json.loads(json.dumps(topology.to_json())))
