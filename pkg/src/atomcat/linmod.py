"""Finite-dimensional modules over the free algebra on a color set.

An FdModule is a GF(p) vector space with one square action matrix per
color; colors absent from the map act as zero, so the color alphabet is
implicitly infinite.  A module built from a colored quiver has one
basis line per vertex, and a color acts by summing along the arrows of
that color.

Submodules are action-invariant row spaces kept in reduced row-echelon
form; the whole submodule lattice of a module is enumerated by closing
the set of cyclic submodules (one per nonzero vector, all p^dim - 1 of
them) under pairwise sums.  That enumeration is exact and exponential,
so it is budget-guarded; the cheaper entry points (one minimal
submodule, composition factors) avoid it where the structure allows.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import linalg
from .errors import BudgetExceeded, NotNested

DEFAULT_BUDGET = 50_000
DEFAULT_ISO_CAP = 1 << 16


class Tristate(Enum):
    YES = "yes"
    NO = "no"
    UNDECIDED = "undecided"

    def __bool__(self):
        raise TypeError("tristate answers must be compared explicitly")


@dataclass(frozen=True)
class FieldSpec:
    """Prime field GF(p); every value in the package reduces through it."""

    p: int = 2

    def __post_init__(self):
        if not linalg.is_prime(self.p):
            raise ValueError(f"field characteristic must be prime: {self.p}")

    @property
    def ops(self):
        return linalg.ops_for(self.p)


class FdModule:
    """Immutable-by-convention module: never mutate after construction."""

    def __init__(self, field, dim, basis_labels, actions, provenance=None):
        self.field = field
        self.dim = dim
        self.basis_labels = tuple(basis_labels)
        assert len(self.basis_labels) == dim
        self.actions = dict(actions)  # color -> (dim x dim) internal matrix
        self.provenance = provenance
        self._cache = {}

    @property
    def ops(self):
        return self.field.ops

    @property
    def colors(self):
        return tuple(sorted(self.actions))

    def action(self, color):
        return self.actions[color]

    def act(self, vec, color):
        if color not in self.actions:
            return self.ops.zero_vec(self.dim)
        return self.ops.vec_mat(vec, self.actions[color], self.dim)

    def action_stack(self):
        return [self.actions[c] for c in self.colors]

    def key(self):
        parts = [self.field.p, self.dim]
        for c in self.colors:
            parts.append((c, self.ops.mat_key(self.actions[c])))
        return tuple(parts)

    def dense_actions(self):
        return {c: self.ops.unpack(self.actions[c], self.dim)[:self.dim].tolist()
                for c in self.colors}

    def to_json(self):
        return {"p": self.field.p, "dim": self.dim,
                "labels": list(self.basis_labels),
                "actions": self.dense_actions()}

    def __repr__(self):
        return f"FdModule(p={self.field.p}, dim={self.dim}, colors={len(self.actions)})"


def module_from_json(data):
    field = FieldSpec(data["p"])
    dim = data["dim"]
    ops = field.ops
    actions = {c: ops.pack(np.array(rows, dtype=np.int64), dim)
               for c, rows in data["actions"].items()}
    return FdModule(field, dim, data["labels"], actions)


def module_of_quiver(quiver, field=FieldSpec(2)):
    """One basis line x_v per vertex; color c maps x_v to the sum of
    value * x_w over arrows (v, w, c)."""
    ops = field.ops
    n = len(quiver.vertices)
    index = {v: i for i, v in enumerate(quiver.vertices)}
    dense = {}
    for a in quiver.arrows:
        if a.color not in dense:
            dense[a.color] = np.zeros((n, n), dtype=np.int64)
        dense[a.color][index[a.src], index[a.dst]] += a.value
    actions = {}
    for c, mat in dense.items():
        mat %= field.p
        if mat.any():
            actions[c] = ops.pack(mat, n)
    return FdModule(field, n, quiver.vertices, actions,
                    provenance={"kind": "quiver"})


class Submodule:
    """Action-invariant row space of a parent module, in rref."""

    def __init__(self, parent, basis, pivots):
        self.parent = parent
        self.basis = basis
        self.pivots = pivots

    @property
    def dim(self):
        return self.basis.shape[0]

    def key(self):
        return (self.dim, self.parent.ops.mat_key(self.basis))

    def contains_vec(self, vec):
        return linalg.in_span(self.parent.ops, vec, self.basis, self.pivots)

    def contains(self, other):
        return linalg.span_contains(self.parent.ops, self.basis, self.pivots,
                                    other.basis, other.pivots)

    def is_action_closed(self):
        for i in range(self.dim):
            for c in self.parent.colors:
                if not self.contains_vec(self.parent.act(self.basis[i], c)):
                    return False
        return True

    def __eq__(self, other):
        return (isinstance(other, Submodule) and self.parent is other.parent
                and self.key() == other.key())

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Submodule(dim={self.dim} of {self.parent.dim})"


def zero_submodule(module):
    ops = module.ops
    return Submodule(module, ops.empty_mat(module.dim),
                     np.empty(0, dtype=np.int64))


def full_submodule(module):
    n = module.dim
    if n == 0:
        return zero_submodule(module)
    basis = module.ops.pack(np.eye(n, dtype=np.int64), n)
    return Submodule(module, basis, np.arange(n, dtype=np.int64))


def submodule_span(module, rows, check=True):
    """Submodule spanned by given packed rows; rows must already be
    action-closed as a set (checked unless told otherwise)."""
    ops = module.ops
    basis, piv = ops.rref(rows, module.dim)
    sub = Submodule(module, basis, piv)
    if check and not sub.is_action_closed():
        raise ValueError("row span is not action-invariant")
    return sub


def cyclic_submodule(module, vec):
    """Smallest action-closed subspace containing vec (breadth-first)."""
    ops = module.ops
    basis, piv = ops.cyclic_closure(vec, module.action_stack(), module.dim)
    return Submodule(module, basis, piv)


def sum_submodules(a, b):
    ops = a.parent.ops
    basis, piv = ops.rref(ops.vstack([a.basis, b.basis], a.parent.dim),
                          a.parent.dim)
    return Submodule(a.parent, basis, piv)


def intersect_submodules(a, b):
    """Intersection of two invariant row spaces (itself invariant).

    Coefficient rows (x, y) with x . A + y . B = 0 parametrize the
    intersection through x . A.
    """
    m = a.parent
    ops = m.ops
    ka, kb = a.dim, b.dim
    if ka == 0 or kb == 0:
        return zero_submodule(m)
    stacked = ops.vstack([a.basis, b.basis], m.dim)
    ker = ops.left_nullspace(stacked, ka + kb, m.dim)
    rows = []
    for i in range(ker.shape[0]):
        coeffs = ops.unpack_vec(ker[i], ka + kb)
        vec = ops.zero_vec(m.dim)
        for j in range(ka):
            cj = int(coeffs[j]) % m.field.p
            for _ in range(cj):
                vec = ops.add(vec, a.basis[j])
        rows.append(vec)
    if not rows:
        return zero_submodule(m)
    basis, piv = ops.rref(ops.vstack([r[None, :] for r in rows], m.dim), m.dim)
    return Submodule(m, basis, piv)


@dataclass
class SubmoduleSet:
    members: tuple  # canonically sorted by (dim, basis bytes)
    complete: bool

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def nonzero(self):
        return [s for s in self.members if s.dim > 0]

    def proper_nonzero(self):
        return [s for s in self.members
                if 0 < s.dim < self.members[-1].parent.dim]


def _distinct_cyclic(module, budget):
    ops = module.ops
    n = module.dim
    if ops.count_nonzero_vectors(n) > budget:
        raise BudgetExceeded("too many seed vectors",
                             seeds=ops.count_nonzero_vectors(n),
                             budget=budget, partial=None)
    acts = module.action_stack()
    seen = {}
    for vec in ops.enumerate_nonzero(n):
        basis, piv = ops.cyclic_closure(vec, acts, n)
        key = ops.mat_key(basis)
        if key not in seen:
            seen[key] = Submodule(module, basis, piv)
    return list(seen.values())


def submodule_lattice(module, budget=DEFAULT_BUDGET):
    """Every submodule: cyclic submodules closed under pairwise sums.

    Any submodule is the sum of the cyclic submodules of its elements,
    so this closure is the complete lattice (and thus automatically
    closed under intersections as well).  Raises BudgetExceeded with
    the partial set attached when the member count passes the budget.
    """
    cache_key = ("lattice", budget)
    if cache_key in module._cache:
        return module._cache[cache_key]
    if module.dim == 0:
        out = SubmoduleSet((zero_submodule(module),), True)
        module._cache[cache_key] = out
        return out
    members = {zero_submodule(module).key(): zero_submodule(module)}
    cyclics = _distinct_cyclic(module, budget)
    for s in cyclics:
        members[s.key()] = s

    def overflow():
        part = SubmoduleSet(tuple(sorted(members.values(),
                                         key=lambda s: s.key())), False)
        return BudgetExceeded("lattice larger than budget",
                              budget=budget, partial=part)

    if len(members) > budget:
        raise overflow()
    worklist = list(members.values())
    while worklist:
        s = worklist.pop()
        for t in list(members.values()):
            u = sum_submodules(s, t)
            k = u.key()
            if k not in members:
                members[k] = u
                worklist.append(u)
                if len(members) > budget:
                    raise overflow()
    out = SubmoduleSet(tuple(sorted(members.values(), key=lambda s: s.key())),
                       True)
    module._cache[cache_key] = out
    return out


def subquotient(module, lower, upper):
    """Module structure on upper/lower with induced color actions.

    Synthetic basis labels carry the parent label of each quotient
    basis vector's pivot coordinate, so provenance survives peeling.
    """
    if not upper.contains(lower):
        raise NotNested("lower is not contained in upper")
    ops = module.ops
    n = module.dim
    ext_rows = []
    for i in range(upper.dim):
        r = ops.reduce_row(upper.basis[i], lower.basis, lower.pivots)
        if not ops.is_zero(r):
            ext_rows.append(r)
    if not ext_rows:
        return FdModule(module.field, 0, (), {},
                        provenance={"kind": "subquotient", "of": module.provenance})
    stacked = ops.vstack([r[None, :] if r.ndim == 1 else r for r in ext_rows], n)
    ebasis, epiv = ops.rref(stacked, n)
    k = ebasis.shape[0]
    labels = tuple(module.basis_labels[int(p)] for p in epiv)
    actions = {}
    for c in module.colors:
        dense = np.zeros((k, k), dtype=np.int64)
        nontrivial = False
        for i in range(k):
            w = module.act(ebasis[i], c)
            w = ops.reduce_row(w, lower.basis, lower.pivots)
            coeffs = ops.coords(w, ebasis, epiv, n)
            assert coeffs is not None, "upper must be action-closed"
            if coeffs.any():
                nontrivial = True
                dense[i, :len(coeffs)] = coeffs
        if nontrivial:
            actions[c] = ops.pack(dense, k)
    return FdModule(module.field, k, labels, actions,
                    provenance={"kind": "subquotient",
                                "pivot_labels": list(labels)})


def submodule_as_module(sub):
    """The submodule itself as an abstract module (basis = its rref rows)."""
    return subquotient(sub.parent, zero_submodule(sub.parent), sub)


def quotient_module(module, sub):
    return subquotient(module, sub, full_submodule(module))


def hom_basis(m, n):
    """Basis of {F : F intertwines every color action}, maps as dense
    (dim_m x dim_n) row-convention matrices (f(v) = v @ F)."""
    if m.field.p != n.field.p:
        raise ValueError("modules live over different prime fields")
    p = m.field.p
    ops = m.ops
    dm, dn = m.dim, n.dim
    if dm == 0 or dn == 0:
        return []
    colors = sorted(set(m.colors) | set(n.colors))
    if not colors:
        # no actions anywhere: every linear map intertwines
        out = []
        for i in range(dm):
            for j in range(dn):
                f = np.zeros((dm, dn), dtype=np.int64)
                f[i, j] = 1
                out.append(f)
        return out
    blocks = []
    eye_m = np.eye(dm, dtype=np.int64)
    eye_n = np.eye(dn, dtype=np.int64)
    for c in colors:
        am = (m.ops.unpack(m.actions[c], dm)[:dm].astype(np.int64)
              if c in m.actions else np.zeros((dm, dm), dtype=np.int64))
        an = (n.ops.unpack(n.actions[c], dn)[:dn].astype(np.int64)
              if c in n.actions else np.zeros((dn, dn), dtype=np.int64))
        blocks.append((np.kron(am, eye_n) - np.kron(eye_m, an.T)) % p)
    constraint = np.vstack(blocks) % p
    if p == 2:
        packed = ops.pack(constraint.astype(np.int64), dm * dn)
        ns = ops.nullspace(packed, dm * dn)
        rows = [ops.unpack_vec(ns[i], dm * dn) for i in range(ns.shape[0])]
    else:
        from . import modp
        ns = modp.nullspace(constraint, p)
        rows = [ns[i] for i in range(ns.shape[0])]
    return [np.array(r, dtype=np.int64).reshape(dm, dn) for r in rows]


def _is_invertible(dense, field):
    ops = field.ops
    k = dense.shape[0]
    basis, _ = ops.rref(ops.pack(dense % field.p, k), k)
    return basis.shape[0] == k


def is_isomorphic(m, n, cap=DEFAULT_ISO_CAP):
    """Tristate isomorphism test by exhaustive scan of the hom space."""
    if m.field.p != n.field.p:
        return Tristate.NO
    if m.dim != n.dim:
        return Tristate.NO
    if m.dim == 0:
        return Tristate.YES
    if m.dim == 1:
        # a scalar map commutes with everything: compare action scalars
        scal = lambda mod, c: (int(mod.ops.unpack(mod.actions[c], 1)[0, 0])
                               if c in mod.actions else 0)
        colors = set(m.colors) | set(n.colors)
        same = all(scal(m, c) == scal(n, c) for c in colors)
        return Tristate.YES if same else Tristate.NO
    homs = hom_basis(m, n)
    if not homs or not hom_basis(n, m):
        return Tristate.NO
    p = m.field.p
    k = len(homs)
    total = p ** k - 1
    count = 0
    coeffs = np.zeros(k, dtype=np.int64)
    while count < min(total, cap):
        count += 1
        x = count
        for j in range(k):
            coeffs[j] = x % p
            x //= p
        f = sum(int(coeffs[j]) * homs[j] for j in range(k)) % p
        if _is_invertible(f, m.field):
            return Tristate.YES
    if total > cap:
        return Tristate.UNDECIDED
    return Tristate.NO


# -- minimal submodules and composition factors ------------------------------

def _eigen_leaves(module):
    """Common-eigenvector subspaces: maximal subspaces on which every
    color acts as a scalar.  Every 1-dim invariant line lies in one."""
    ops = module.ops
    p = module.field.p
    n = module.dim
    if n == 0:
        return []
    full = full_submodule(module)
    leaves = [(full.basis, full.pivots)]
    for c in module.colors:
        new = []
        for basis, piv in leaves:
            k = basis.shape[0]
            if k == 0:
                continue
            images = [module.act(basis[i], c) for i in range(k)]
            for lam in range(p):
                if lam == 0:
                    target_rows = images
                elif p == 2:
                    target_rows = [images[i] ^ basis[i] for i in range(k)]
                else:
                    target_rows = [(images[i] - lam * basis[i]) % p
                                   for i in range(k)]
                target = ops.vstack([r[None, :] for r in target_rows], n)
                ker = ops.left_nullspace(target, k, n)
                if ker.shape[0] == 0:
                    continue
                rows = []
                for i in range(ker.shape[0]):
                    coeffs = ops.unpack_vec(ker[i], k)
                    vec = ops.zero_vec(n)
                    for j in range(k):
                        cj = int(coeffs[j]) % p
                        for _ in range(cj):
                            vec = ops.add(vec, basis[j])
                    rows.append(vec)
                sub_basis, sub_piv = ops.rref(
                    ops.vstack([r[None, :] for r in rows], n), n)
                if sub_basis.shape[0]:
                    new.append((sub_basis, sub_piv))
        leaves = new
        if not leaves:
            break
    return leaves


def find_one_minimal(module, budget=DEFAULT_BUDGET):
    """Some minimal (simple) submodule, or None for the zero module.

    Fast path: common-eigenvector lines, which cover every construction
    in this package.  Fallback: scan all cyclic submodules (budgeted);
    a smallest one is minimal.
    """
    if module.dim == 0:
        return None
    leaves = _eigen_leaves(module)
    if leaves:
        basis, _ = min(leaves, key=lambda bp: module.ops.mat_key(bp[0]))
        line = basis[0]
        b, piv = module.ops.rref(line[None, :] if line.ndim == 1 else line,
                                 module.dim)
        return Submodule(module, b, piv)
    cyclics = _distinct_cyclic(module, budget)
    return min(cyclics, key=lambda s: s.key())


def minimal_submodules(module, budget=DEFAULT_BUDGET):
    """All minimal nonzero submodules (budgeted full scan).

    Minimal submodules are cyclic, and minimality among the distinct
    cyclic submodules is the same as minimality among all submodules.
    """
    if module.dim == 0:
        return []
    cyclics = sorted(_distinct_cyclic(module, budget), key=lambda s: s.key())
    out = []
    for s in cyclics:
        minimal = True
        for t in cyclics:
            if t.dim >= s.dim:
                break  # sorted by (dim, key): nothing smaller remains
            if s.contains(t):
                minimal = False
                break
        if minimal:
            out.append(s)
    return out


def composition_factors(module, budget=DEFAULT_BUDGET):
    """Multiset of simple factors, peeled minimal submodule by minimal
    submodule.  Returns (factor module, pivot label) pairs."""
    out = []
    current = module
    while current.dim > 0:
        k = find_one_minimal(current, budget)
        factor = submodule_as_module(k)
        out.append((factor, factor.basis_labels[0] if factor.dim else "?"))
        current = quotient_module(current, k)
    return out


def is_essential(sub, module, budget=DEFAULT_BUDGET):
    """True iff sub meets every nonzero submodule, i.e. contains every
    minimal submodule."""
    if module.dim == 0:
        return True
    if sub.dim == 0:
        return False
    return all(sub.contains(k) for k in minimal_submodules(module, budget))


@dataclass
class StructureReport:
    is_simple: bool
    composition_length: int
    socle: Submodule
    radical_series_lengths: tuple


def structure_report(module, budget=DEFAULT_BUDGET):
    """Exact structural summary from the full lattice."""
    lat = submodule_lattice(module, budget)
    nonzero = lat.nonzero()
    minimal = [s for s in nonzero
               if not any(t.dim and t.dim < s.dim and s.contains(t)
                          for t in nonzero)]
    socle = zero_submodule(module)
    for s in minimal:
        socle = sum_submodules(socle, s)
    # composition length: longest chain through the lattice
    by_key = sorted(lat, key=lambda s: s.dim)
    longest = {}
    for s in by_key:
        best = 0
        for t in by_key:
            if t.dim < s.dim and s.contains(t):
                best = max(best, longest[t.key()])
        longest[s.key()] = best + 1
    comp_len = max(longest.values()) - 1 if longest else 0

    rad_layers = []
    current = full_submodule(module)
    while current.dim > 0:
        members = [s for s in lat
                   if s.dim < current.dim and current.contains(s)]
        maximal_in = [s for s in members
                      if not any(t.dim > s.dim and t.contains(s)
                                 for t in members)]
        if not maximal_in:
            rad_layers.append(current.dim)
            break
        rad = maximal_in[0]
        for s in maximal_in[1:]:
            rad = intersect_submodules(rad, s)
        rad_layers.append(current.dim - rad.dim)
        current = rad
    return StructureReport(
        is_simple=(module.dim > 0 and len(lat) == 2),
        composition_length=comp_len,
        socle=socle,
        radical_series_lengths=tuple(rad_layers),
    )
