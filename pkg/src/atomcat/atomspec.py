"""Atoms: equivalence classes of monoform modules, and their spectra.

A module H is monoform when no nonzero submodule of H is isomorphic to
a submodule of a proper quotient H/L; two monoform modules are
equivalent when they share a nonzero submodule (up to isomorphism).
On finite-dimensional modules the following reductions hold and drive
every implementation here; the exhaustive nested-pair definitions stay
available in the test suite as oracles.

* A common nonzero subobject of M and N exists iff some minimal
  submodule of M is isomorphic to a minimal submodule of N: any common
  subobject contains a simple one, and a simple common subobject is a
  minimal submodule on both sides.
* A uniform module has exactly one minimal submodule (its socle); a
  monoform module is uniform, and its class equals the class of its
  socle, so every atom of a finite-dimensional module is represented
  by a simple module.
* The atom support of a finite-length module is exactly the set of
  classes of its composition factors: simples are monoform
  subquotients, and conversely the socle of any monoform subquotient
  is a simple subquotient, hence a composition factor.
"""

import hashlib
import itertools
from dataclasses import dataclass

import numpy as np

from . import linmod
from .errors import (BudgetExceeded, IsoUndecided, NotMonoform, UnknownAtom,
                     ZeroModule)
from .linmod import (FdModule, FieldSpec, Tristate, composition_factors,
                     is_isomorphic, minimal_submodules, module_of_quiver,
                     quotient_module, submodule_as_module, submodule_lattice)
from .ordertop import FiniteTopology, Poset, poset_of_topology
from .quiver import loop_stripped_topo_order

# explicit open-set families get unwieldy fast; 2^MAX_TOPOLOGY_ATOMS masks
MAX_TOPOLOGY_ATOMS = 16


# -- canonical representatives and labels ------------------------------------

_GL_CACHE = {}
_GL_ENUM_CAP = 1 << 16


def _mat_inverse(t, p):
    k = t.shape[0]
    aug = np.concatenate([t % p, np.eye(k, dtype=np.int64)], axis=1)
    from . import modp
    red, piv = modp.rref(aug, p)
    assert list(piv[:k]) == list(range(k))
    return red[:, k:]


def _gl_elements(k, p):
    """All invertible k x k matrices over GF(p), paired with their
    inverses (cached; small k only)."""
    key = (k, p)
    if key not in _GL_CACHE:
        ops = linmod.FieldSpec(p).ops
        out = []
        for entries in itertools.product(range(p), repeat=k * k):
            t = np.array(entries, dtype=np.int64).reshape(k, k)
            basis, _ = ops.rref(ops.pack(t, k), k)
            if basis.shape[0] == k:
                out.append((t, _mat_inverse(t, p)))
        _GL_CACHE[key] = out
    return _GL_CACHE[key]


def _serialize_actions(dense_actions):
    return tuple(sorted((c, m.tobytes()) for c, m in dense_actions.items()))


_CANON_CACHE = {}


def canonical_simple_form(simple):
    """Basis-independent canonical copy of a simple module, plus label.

    Dimension 1 is canonical already (the action scalars are the class).
    Small higher dimensions minimize the serialized actions over all
    base changes; beyond the GL enumeration cap the label degrades to a
    digest of the raw actions and is only unique per report (class
    comparison never relies on labels).
    """
    cache_key = simple.key()
    if cache_key in _CANON_CACHE:
        return _CANON_CACHE[cache_key]
    p = simple.field.p
    k = simple.dim
    ops = simple.ops
    dense = {c: np.array(simple.ops.unpack(simple.actions[c], k)[:k],
                         dtype=np.int64) % p
             for c in simple.colors}
    if k == 1:
        parts = []
        for c in sorted(dense):
            v = int(dense[c][0, 0])
            if v:
                parts.append(c if v == 1 else f"{c}={v}")
        label = "S(" + ",".join(parts) + ")"
        rep = FdModule(simple.field, 1, ("s0",),
                       {c: ops.pack(dense[c], 1) for c in dense if dense[c].any()})
    elif p ** (k * k) <= _GL_ENUM_CAP:
        best = None
        best_dense = None
        for t, tinv in _gl_elements(k, p):
            cand = {c: (tinv @ dense[c] @ t) % p for c in dense}
            ser = _serialize_actions(cand)
            if best is None or ser < best:
                best = ser
                best_dense = cand
        rep = FdModule(simple.field, k, tuple(f"s{i}" for i in range(k)),
                       {c: ops.pack(m, k) for c, m in best_dense.items()
                        if m.any()})
        digest = hashlib.blake2b(repr(best).encode(), digest_size=6).hexdigest()
        label = f"S[{k}]{digest}"
    else:
        digest = hashlib.blake2b(repr(_serialize_actions(dense)).encode(),
                                 digest_size=6).hexdigest()
        label, rep = f"S[{k}]?{digest}", simple
    _CANON_CACHE[cache_key] = (label, rep)
    return label, rep


@dataclass(frozen=True)
class Atom:
    """Equivalence class of monoform modules, named by a canonical
    simple representative."""

    label: str
    representative: FdModule
    source: tuple = ()

    def to_json(self):
        return {"label": self.label,
                "dim": self.representative.dim,
                "actions": self.representative.dense_actions(),
                "source": list(self.source)}


@dataclass(frozen=True)
class AtomSet:
    atoms: tuple  # pairwise non-equivalent, sorted by label

    def labels(self):
        return tuple(a.label for a in self.atoms)

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)


def _simple_class_key(simple):
    """Cheap invariant that decides equality for 1-dim simples and
    pre-groups the rest."""
    if simple.dim == 1:
        dense = simple.dense_actions()
        return (1, tuple(sorted((c, dense[c][0][0]) for c in dense)))
    return (simple.dim, tuple(simple.colors))


def _dedupe_simples(simples_with_sources, iso_cap=linmod.DEFAULT_ISO_CAP):
    """Partition simple modules into isomorphism classes -> AtomSet."""
    groups = {}
    order = []
    for simple, src in simples_with_sources:
        key = _simple_class_key(simple)
        if simple.dim == 1:
            if key not in groups:
                groups[key] = (simple, [])
                order.append(key)
            groups[key][1].append(src)
            continue
        # higher dimension: compare against existing group representatives
        placed = False
        for existing_key in order:
            rep = groups[existing_key][0]
            if rep.dim != simple.dim:
                continue
            verdict = is_isomorphic(rep, simple, iso_cap)
            if verdict is Tristate.UNDECIDED:
                raise IsoUndecided("simple class comparison exceeded the cap")
            if verdict is Tristate.YES:
                groups[existing_key][1].append(src)
                placed = True
                break
        if not placed:
            key = (simple.dim, tuple(simple.colors), len(order))
            groups[key] = (simple, [src])
            order.append(key)

    atoms = []
    used_labels = set()
    for key in order:
        rep, sources = groups[key]
        label, canon = canonical_simple_form(rep)
        while label in used_labels:  # digest fallback collisions only
            label += "'"
        used_labels.add(label)
        atoms.append(Atom(label, canon,
                          tuple(sorted(set(s for s in sources if s is not None)))))
    return AtomSet(tuple(sorted(atoms, key=lambda a: a.label)))


# -- the defining predicates --------------------------------------------------

def has_common_nonzero_subobject(m, n, budget=linmod.DEFAULT_BUDGET,
                                 iso_cap=linmod.DEFAULT_ISO_CAP):
    """Whether a nonzero module embeds in both m and n.

    Equivalent to: some minimal submodule of m is isomorphic to a
    minimal submodule of n (see the module docstring).  An undecided
    isomorphism aborts with IsoUndecided rather than guessing.
    """
    if m.dim == 0 or n.dim == 0:
        return False
    mins_m = [submodule_as_module(s) for s in minimal_submodules(m, budget)]
    mins_n = [submodule_as_module(s) for s in minimal_submodules(n, budget)]
    undecided = False
    for a in mins_m:
        for b in mins_n:
            verdict = is_isomorphic(a, b, iso_cap)
            if verdict is Tristate.YES:
                return True
            if verdict is Tristate.UNDECIDED:
                undecided = True
    if undecided:
        raise IsoUndecided("minimal submodule comparison exceeded the cap")
    return False


def is_uniform(module, budget=linmod.DEFAULT_BUDGET):
    """Any two nonzero submodules intersect, i.e. one minimal submodule."""
    if module.dim == 0:
        raise ZeroModule("uniformity is undefined for the zero module")
    return len(minimal_submodules(module, budget)) == 1


def is_monoform(module, budget=linmod.DEFAULT_BUDGET,
                iso_cap=linmod.DEFAULT_ISO_CAP):
    """No nonzero submodule of H embeds into any proper quotient H/L.

    Non-uniform modules fail immediately: disjoint L1, L2 make L1 a
    common subobject of H and H/L2.  For uniform H it suffices to test
    whether the socle embeds into H/L, for every nonzero L in the
    lattice.
    """
    if module.dim == 0:
        raise ZeroModule("monoformness is undefined for the zero module")
    mins = minimal_submodules(module, budget)
    if len(mins) != 1:
        return False
    socle = submodule_as_module(mins[0])
    lat = submodule_lattice(module, budget)
    undecided = False
    for sub in lat.nonzero():
        quot = quotient_module(module, sub)
        if quot.dim == 0:
            continue
        for k in minimal_submodules(quot, budget):
            verdict = is_isomorphic(socle, submodule_as_module(k), iso_cap)
            if verdict is Tristate.YES:
                return False
            if verdict is Tristate.UNDECIDED:
                undecided = True
    if undecided:
        raise IsoUndecided("socle embedding test exceeded the cap")
    return True


def atom_equivalent(h1, h2, budget=linmod.DEFAULT_BUDGET,
                    iso_cap=linmod.DEFAULT_ISO_CAP):
    for h in (h1, h2):
        if not is_monoform(h, budget, iso_cap):
            raise NotMonoform("atom equivalence needs monoform arguments")
    return has_common_nonzero_subobject(h1, h2, budget, iso_cap)


def atom_of(module, budget=linmod.DEFAULT_BUDGET):
    """The atom of a monoform finite-dimensional module: the class of
    its socle."""
    mins = minimal_submodules(module, budget)
    if len(mins) != 1:
        raise NotMonoform("module is not uniform")
    label, rep = canonical_simple_form(submodule_as_module(mins[0]))
    return Atom(label, rep, tuple(module.basis_labels[:1]))


# -- supports -----------------------------------------------------------------

def asupp(module, budget=linmod.DEFAULT_BUDGET):
    """Atom support: classes of monoform subquotients = classes of
    composition factors (finite length)."""
    factors = composition_factors(module, budget)
    return _dedupe_simples([(f, lbl) for f, lbl in factors])


def aass(module, budget=linmod.DEFAULT_BUDGET):
    """Associated atoms: classes of monoform submodules = classes of
    minimal submodules."""
    mins = minimal_submodules(module, budget)
    simples = []
    for s in mins:
        as_mod = submodule_as_module(s)
        simples.append((as_mod, as_mod.basis_labels[0] if as_mod.dim else None))
    return _dedupe_simples(simples)


# -- spectra ------------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumReport:
    atoms: AtomSet
    opens: FiniteTopology
    order: Poset
    flags: dict  # label -> {maximal, minimal, represented_by_simple, ...}

    def to_json(self):
        p = (self.atoms.atoms[0].representative.field.p
             if len(self.atoms) else 2)
        return {"p": p,
                "atoms": [a.to_json() for a in self.atoms],
                "opens": [list(self.opens.subset_of(m))
                          for m in self.opens.opens],
                "order": [[a, b] for (a, b) in sorted(self.order.le)
                          if a != b],
                "flags": {k: dict(v) for k, v in self.flags.items()}}


def _power_set_topology(labels):
    pts = tuple(sorted(labels))
    n = len(pts)
    if n > MAX_TOPOLOGY_ATOMS:
        raise BudgetExceeded("too many atoms for an explicit open family",
                             atoms=n, cap=MAX_TOPOLOGY_ATOMS)
    return FiniteTopology(pts, tuple(range(1 << n)))


def _flags_from(order, topo):
    flags = {}
    maximal = set(order.maximal_elements())
    minimal = set(order.minimal_elements())
    for lbl in order.elements:
        flags[lbl] = {
            "maximal": lbl in maximal,
            "minimal": lbl in minimal,
            "represented_by_simple": True,
            "open_point": topo.is_open([lbl]),
            "closed_point": topo.is_closed([lbl]),
        }
    return flags


def _dag_vertex_simples(quiver, field, order):
    """Composition factors of a quiver module read off a loop-free
    topological order: the coordinate line of each vertex, in reverse
    order, is an invariant layer, and the layer's action scalars are
    the vertex's loop values."""
    ops = field.ops
    out = []
    for v in order:
        actions = {}
        for a in quiver.loops_at(v):
            val = a.value % field.p
            if val:
                actions[a.color] = ops.pack(
                    np.array([[val]], dtype=np.int64), 1)
        out.append((FdModule(field, 1, (v,), actions), v))
    return out


def spectrum(quiver, field=FieldSpec(2), budget=linmod.DEFAULT_BUDGET):
    """Atom spectrum of the category generated by the quiver module.

    Why subquotients of the single module suffice: every atom of the
    generated category is the class of a monoform subquotient of a
    direct sum of copies of the module, any such class already has a
    representative among subquotients of the module itself (project to
    a summand it meets), and atom supports of subquotients are unions
    of supports of composition factors.  Since the module here is
    finite dimensional, every object involved has finite length, each
    atom is the class of a simple subquotient, singleton atom sets are
    therefore open, and the topology is discrete: the open family is
    the full power set and the specialization order is trivial.  The
    non-discrete spectra of the infinite constructions live in the
    symbolic predictor, not here.
    """
    topo_order = loop_stripped_topo_order(quiver)
    if topo_order is not None:
        simples = _dag_vertex_simples(quiver, field, topo_order)
    else:
        module = module_of_quiver(quiver, field)
        simples = [(f, lbl) for f, lbl in composition_factors(module, budget)]
    atoms = _dedupe_simples(simples)
    topo = _power_set_topology(atoms.labels())
    order = poset_of_topology(topo)
    return SpectrumReport(atoms, topo, order, _flags_from(order, topo))


def report_from_json(data):
    """Rebuild a SpectrumReport from its JSON form (order and flags are
    rederived from the open family, which defines them)."""
    field = FieldSpec(data.get("p", 2))
    ops = field.ops
    atoms = []
    for entry in data["atoms"]:
        dim = entry["dim"]
        actions = {c: ops.pack(np.array(rows, dtype=np.int64), dim)
                   for c, rows in entry["actions"].items()}
        rep = FdModule(field, dim, tuple(f"s{i}" for i in range(dim)),
                       actions)
        atoms.append(Atom(entry["label"], rep, tuple(entry["source"])))
    return report_from_parts(atoms, [tuple(s) for s in data["opens"]])


def report_from_parts(atoms, open_label_sets):
    """Assemble a SpectrumReport from atoms plus an explicit open
    family (used for hand-built and symbolic-window reports)."""
    labels = tuple(sorted(a.label for a in atoms))
    proto = FiniteTopology(labels, ())
    masks = sorted({proto.mask_of(s) for s in open_label_sets})
    topo = FiniteTopology(labels, tuple(masks))
    order = poset_of_topology(topo)
    aset = AtomSet(tuple(sorted(atoms, key=lambda a: a.label)))
    return SpectrumReport(aset, topo, order, _flags_from(order, topo))


def localize(report, label):
    """Restrict the spectrum to the closed subset of classes at or
    below the given atom; the atom becomes the greatest element."""
    if label not in report.order.elements:
        raise UnknownAtom("label not in the spectrum", label=label)
    keep = {b for b in report.order.elements if report.order.leq(b, label)}
    atoms = [a for a in report.atoms if a.label in keep]
    induced = {frozenset(set(report.opens.subset_of(m)) & keep)
               for m in report.opens.opens}
    return report_from_parts(atoms, [tuple(s) for s in induced])


def localizing_subcategories(report):
    """Open subsets stand in for localizing subcategories; list them."""
    return [tuple(report.opens.subset_of(m)) for m in report.opens.opens]


def membership(module, open_labels, budget=linmod.DEFAULT_BUDGET):
    """Does the module's atom support sit inside the given open set?"""
    support = asupp(module, budget)
    return set(support.labels()) <= set(open_labels)
