"""Symbolic spectra for the infinite constructions, and crosschecks.

A SymbolicSpectrum is a finite window onto the atom spectrum of an
infinite construction: atoms with kinds (simple versus chain limit),
the specialization order on the window, and enough structure to
evaluate topology claims that no finite window can state directly:

* chain_families record, per chain construction, the limit atom, the
  atom sets of the materialized blocks, and which atoms recur in
  infinitely many blocks.  The order rule is uniform: the limit sits
  strictly below exactly the recurring atoms.
* continued_below marks window atoms that have further atoms below
  them in the full object (pure truncation artifacts).

Brute-force agreement: `crosscheck` computes the honest spectrum of a
truncated quiver and aligns it with the window through the generator's
atom table.  Chain-limit atoms are invisible at any finite truncation
(finite length forces discreteness), so they land in `missing`; any
brute atom with no symbolic counterpart, or any order pair the window
contradicts, is a violation.
"""

from dataclasses import dataclass, field

import numpy as np

from .atomspec import FieldSpec, atom_equivalent, spectrum
from .errors import NotFinite, UnknownPreset
from .generators import PRESET_NAMES, _simple_label, gen_noatom
from .linmod import DEFAULT_BUDGET, FdModule
from .ordertop import Poset, normalize_poset, poset_invariants


@dataclass(frozen=True)
class SymAtom:
    label: str
    kind: str  # "simple" | "chain_limit" | "block"


@dataclass
class SymbolicSpectrum:
    atoms: tuple
    order: Poset
    provenance: dict
    chain_families: tuple = ()
    continued_below: frozenset = frozenset()
    claims: dict = field(default_factory=dict)

    def labels(self):
        return tuple(a.label for a in self.atoms)

    def kind_of(self, label):
        for a in self.atoms:
            if a.label == label:
                return a.kind
        return None

    def to_json(self):
        return {"atoms": [{"label": a.label, "kind": a.kind}
                          for a in self.atoms],
                "order": [[a, b] for (a, b) in sorted(self.order.le)
                          if a != b],
                "provenance": dict(self.provenance),
                "chain_families": [
                    {"limit": f["limit"],
                     "block_atom_sets": [list(s)
                                         for s in f["block_atom_sets"]],
                     "recurring": list(f["recurring"])}
                    for f in self.chain_families],
                "continued_below": sorted(self.continued_below),
                "claims": {k: v for k, v in self.claims.items()}}


def symbolic_from_json(data):
    atoms = tuple(SymAtom(a["label"], a["kind"]) for a in data["atoms"])
    labels = sorted(a.label for a in atoms)
    order = _mk_order(labels, [tuple(p) for p in data["order"]])
    families = tuple(
        {"limit": f["limit"],
         "block_atom_sets": tuple(tuple(s) for s in f["block_atom_sets"]),
         "recurring": tuple(f["recurring"])}
        for f in data.get("chain_families", ()))
    return SymbolicSpectrum(tuple(sorted(atoms, key=lambda a: a.label)),
                            order, dict(data.get("provenance", {})),
                            families,
                            frozenset(data.get("continued_below", ())),
                            dict(data.get("claims", {})))


def _mk_order(labels, pairs):
    return normalize_poset(pairs, labels)


def atom_spectrum_point(label, kind="simple", provenance=""):
    atom = SymAtom(label, kind)
    return SymbolicSpectrum((atom,), _mk_order([label], []),
                            {label: provenance})


def predict_disjoint_union(specs):
    """Union of the component spectra; atoms with equal labels are the
    same atom (labels encode the defining colors, so equal blocks with
    shared colors merge and disjointly colored ones stay apart)."""
    atoms = {}
    pairs = []
    prov = {}
    families = []
    continued = set()
    claims = {}
    for s in specs:
        for a in s.atoms:
            atoms.setdefault(a.label, a)
        pairs.extend((x, y) for (x, y) in s.order.le if x != y)
        prov.update(s.provenance)
        families.extend(s.chain_families)
        continued |= set(s.continued_below)
        claims.update(s.claims)
    labels = sorted(atoms)
    return SymbolicSpectrum(tuple(atoms[l] for l in labels),
                            _mk_order(labels, pairs), prov,
                            tuple(families), frozenset(continued), claims)


def predict_chain(blocks, limit_label, infinite=True, cycle_start=0,
                  recurring=None, provenance=""):
    """Spectrum of a chain of blocks joined by fresh bundles.

    blocks are the block spectra in window order.  When infinite, a
    chain-limit atom is added below exactly the recurring atoms; by
    default those are the atoms of blocks[cycle_start:], the repeating
    part.  cycle_start = len(blocks) expresses a window of pairwise
    distinct blocks none of which repeats.
    """
    merged = predict_disjoint_union(blocks)
    if not infinite:
        return merged
    if recurring is None:
        recurring = set()
        for b in blocks[cycle_start:]:
            recurring |= set(b.labels())
    recurring = frozenset(recurring)
    atoms = dict((a.label, a) for a in merged.atoms)
    if limit_label in atoms:
        raise ValueError(f"limit label collides with a block atom: {limit_label}")
    atoms[limit_label] = SymAtom(limit_label, "chain_limit")
    pairs = [(x, y) for (x, y) in merged.order.le if x != y]
    pairs.extend((limit_label, b) for b in recurring)
    labels = sorted(atoms)
    prov = dict(merged.provenance)
    prov[limit_label] = provenance or "chain limit"
    family = {"limit": limit_label,
              "block_atom_sets": tuple(tuple(sorted(b.labels()))
                                       for b in blocks),
              "recurring": tuple(sorted(recurring))}
    return SymbolicSpectrum(tuple(atoms[l] for l in labels),
                            _mk_order(labels, pairs), prov,
                            merged.chain_families + (family,),
                            merged.continued_below, dict(merged.claims))


@dataclass
class RealizationResult:
    spectrum: SymbolicSpectrum      # the realized spectrum (post-quotient)
    witness: dict                   # poset element -> atom label
    pre_quotient: SymbolicSpectrum  # what a truncation gets compared to


def _acc_spectrum(poset, inv, p, memo):
    if p in memo:
        return memo[p]
    if p in set(inv.maximal):
        out = atom_spectrum_point(f"simple({p})", "simple",
                                  provenance=f"loop point of {p}")
    else:
        blocks = [_acc_spectrum(poset, inv, q, memo)
                  for q in sorted(inv.j_sets[p])]
        out = predict_chain(blocks, f"chain({p})", infinite=True,
                            cycle_start=0,
                            provenance=f"chain over J({p})")
    memo[p] = out
    return out


def predict_realization(poset, mode="acc"):
    """Symbolic spectrum of the realization of a finite poset.

    acc mode: recursive chain-over-J(p) blocks, disjoint union over the
    poset.  general mode: one chain-limit atom per element plus one
    simple atom per non-maximal element, with the maximal elements'
    limits identified with their loop simples, then the quotient
    removing the non-maximal simples.
    """
    if not isinstance(poset, Poset):
        raise NotFinite("expected a finite poset value")
    inv = poset_invariants(poset)
    if mode == "acc":
        memo = {}
        spec = predict_disjoint_union(
            [_acc_spectrum(poset, inv, p, memo) for p in poset.elements])
        maximal = set(inv.maximal)
        witness = {p: (f"simple({p})" if p in maximal else f"chain({p})")
                   for p in poset.elements}
        return RealizationResult(spec, witness, spec)
    if mode != "general":
        raise ValueError(f"unknown realization mode: {mode}")

    maximal = set(inv.maximal)
    atoms = {}
    pairs = []
    prov = {}
    for p in poset.elements:
        g = f"gamma({p})"
        atoms[g] = SymAtom(g, "simple" if p in maximal else "chain_limit")
        prov[g] = f"block limit of {p}" + \
            (" (= its loop simple)" if p in maximal else "")
        if p not in maximal:
            d = f"delta({p})"
            atoms[d] = SymAtom(d, "simple")
            prov[d] = f"loop simple of {p}"
    for p in poset.elements:
        for q in poset.elements:
            if poset.leq(p, q):
                pairs.append((f"gamma({p})", f"gamma({q})"))
            if poset.lt(p, q) and q not in maximal:
                pairs.append((f"gamma({p})", f"delta({q})"))
    labels = sorted(atoms)
    pre = SymbolicSpectrum(tuple(atoms[l] for l in labels),
                           _mk_order(labels, pairs), prov)
    post_labels = sorted(l for l in labels if not l.startswith("delta("))
    post_pairs = [(a, b) for (a, b) in pairs
                  if not a.startswith("delta(") and not b.startswith("delta(")]
    post = SymbolicSpectrum(tuple(atoms[l] for l in post_labels),
                            _mk_order(post_labels, post_pairs),
                            {l: prov[l] for l in post_labels})
    witness = {p: f"gamma({p})" for p in poset.elements}
    return RealizationResult(post, witness, pre)


@dataclass
class NoAtomPrediction:
    pre_spectrum: SymbolicSpectrum
    post_quotient_empty: bool
    nonzero_witness: str
    absorption: dict  # symbolic simple label -> noetherian family label


def predict_noatom(trunc):
    """Before the quotient: loop simples per window integer plus the
    designated noetherian chain atoms, pairwise incomparable.  The
    quotient absorbs everything: post-quotient spectrum empty, while
    the module of the first block stays nonzero."""
    gen = gen_noatom(trunc)
    atoms = {}
    prov = {}
    absorption = {}
    for key, entry in gen.atom_table.items():
        atoms[key] = SymAtom(key, "simple")
        prov[key] = "loop simple " + ",".join(entry["loop_colors"])
        idx = key[key.index("(") + 1:-1]
        absorption[key] = f"noeth-loop({idx})"
    for fam in gen.noetherian_family or ():
        if fam["kind"] == "chain":
            lbl = fam["label"]
            atoms[lbl] = SymAtom(lbl, "chain_limit")
            prov[lbl] = "designated noetherian chain"
    labels = sorted(atoms)
    pre = SymbolicSpectrum(tuple(atoms[l] for l in labels),
                           _mk_order(labels, []), prov,
                           claims={"post_quotient_empty": True})
    return NoAtomPrediction(pre, True, "module of the first block",
                            absorption)


# -- presets -------------------------------------------------------------------

def predict_preset(name, depth):
    """Windowed symbolic spectrum of a named counter-example preset."""
    if name == "infinite-chain":
        delta = atom_spectrum_point("delta", "simple", "point class")
        return predict_chain([delta], "gamma", infinite=True, cycle_start=0,
                             provenance="chain of points")
    if name == "aass-vs-asupp":
        delta = atom_spectrum_point("beta", "simple", "point class")
        inner = predict_chain([delta], "alpha", infinite=True, cycle_start=0,
                              provenance="infinite chain of points")
        out = predict_disjoint_union([inner, delta])
        out.claims.update({"aass": ["beta"], "asupp": ["alpha", "beta"]})
        return out
    if name == "no-minimal-atom":
        window = max(depth, 2)
        poset = _descending(window)
        res = predict_realization(poset, "acc")
        bottom = res.witness[f"p{window - 1}"]
        out = _with_continued(res.spectrum, {bottom})
        out.claims["no_minimal_atom"] = True
        return out
    if name == "no-dcc":
        window = max(depth, 2)
        poset = _descending(window, with_bottom=True)
        res = predict_realization(poset, "acc")
        descent = [res.witness[f"p{i}"] for i in range(window)]
        res.spectrum.claims["infinite_descent"] = descent
        return res.spectrum
    if name == "max-not-open":
        blocks = [predict_chain([atom_spectrum_point(f"delta({i})", "simple")],
                                f"gamma({i})", infinite=True, cycle_start=0)
                  for i in range(depth)]
        return predict_chain(blocks, "gamma", infinite=True,
                             cycle_start=len(blocks),
                             provenance="chain of pairwise distinct blocks")
    if name == "min-not-closed":
        # shifted copies of one chain of distinct loop points: the inner
        # limit gamma' is the only atom recurring in every outer block,
        # each delta eventually drops out of the shifted windows
        n_delta = 2 * depth - 1
        delta_labels = [f"delta({i})" for i in range(n_delta)]
        atoms = {"gamma": SymAtom("gamma", "chain_limit"),
                 "gamma'": SymAtom("gamma'", "chain_limit")}
        for d in delta_labels:
            atoms[d] = SymAtom(d, "simple")
        prov = {"gamma": "outer chain limit over shifted copies",
                "gamma'": "inner chain limit, shared by all shifts"}
        prov.update({d: "loop simple" for d in delta_labels})
        inner_family = {"limit": "gamma'",
                        "block_atom_sets": tuple((d,) for d in delta_labels),
                        "recurring": ()}
        outer_family = {"limit": "gamma",
                        "block_atom_sets": tuple(
                            tuple(sorted(["gamma'"] +
                                         delta_labels[j:j + depth]))
                            for j in range(depth)),
                        "recurring": ("gamma'",)}
        labels = sorted(atoms)
        order = _mk_order(labels, [("gamma", "gamma'")])
        return SymbolicSpectrum(tuple(atoms[l] for l in labels), order, prov,
                                (inner_family, outer_family))
    raise UnknownPreset("no such preset", name=name, known=list(PRESET_NAMES))


def _descending(n, with_bottom=False):
    elems = [f"p{i}" for i in range(n)]
    pairs = [(elems[i + 1], elems[i]) for i in range(n - 1)]
    if with_bottom:
        elems.append("pinf")
        pairs.append(("pinf", elems[n - 1]))
    return normalize_poset(pairs, elems)


def _with_continued(spec, extra):
    return SymbolicSpectrum(spec.atoms, spec.order, spec.provenance,
                            spec.chain_families,
                            spec.continued_below | frozenset(extra),
                            spec.claims)


# -- claim checkers ------------------------------------------------------------

def check_no_minimal_atom(sym):
    """Every window-minimal atom is a truncation artifact that the full
    object continues below."""
    minimal = set(sym.order.minimal_elements())
    return bool(minimal) and minimal <= set(sym.continued_below)


def check_infinite_descent(sym, min_length=4):
    """The claimed family is a strictly descending chain in the window,
    long enough to witness the failure of the descending chain
    condition."""
    descent = sym.claims.get("infinite_descent", [])
    if len(descent) < min_length:
        return False
    return all(sym.order.lt(descent[i + 1], descent[i])
               for i in range(len(descent) - 1))


def check_max_not_open(sym):
    """The maximal atoms do not form an open set: the outermost chain
    limit is maximal, but each of its basic neighborhoods (tails of the
    block family) contains a non-maximal atom."""
    maximal = set(sym.order.maximal_elements())
    for fam in sym.chain_families:
        if fam["limit"] not in maximal:
            continue
        sets = fam["block_atom_sets"]
        if sets and all(any(a not in maximal for a in s) for s in sets):
            return True
    return False


def check_min_not_closed(sym):
    """The minimal atoms do not form a closed set: some non-minimal
    chain limit has every basic neighborhood meeting the minimal set,
    hence lies in its closure."""
    minimal = set(sym.order.minimal_elements())
    for fam in sym.chain_families:
        limit = fam["limit"]
        if limit in minimal:
            continue
        sets = fam["block_atom_sets"]
        if sets and all(any(a in minimal for a in s) for s in sets):
            return True
    return False


def check_preset_claims(name, sym, depth):
    """Evaluate the structural claims a preset's window must witness."""
    if name == "no-minimal-atom":
        return {"no_minimal_atom": check_no_minimal_atom(sym)}
    if name == "no-dcc":
        return {"no_dcc": check_infinite_descent(sym,
                                                 min_length=min(4, depth))}
    if name == "max-not-open":
        return {"max_not_open": check_max_not_open(sym)}
    if name == "min-not-closed":
        return {"min_not_closed": check_min_not_closed(sym)}
    if name == "aass-vs-asupp":
        aass_l = set(sym.claims.get("aass", ()))
        asupp_l = set(sym.claims.get("asupp", ()))
        return {"aass_strictly_inside_asupp": aass_l < asupp_l,
                "two_atom_chain": sym.order.lt("alpha", "beta")}
    if name == "infinite-chain":
        return {"limit_below_simple": sym.order.lt("gamma", "delta")}
    raise UnknownPreset("no such preset", name=name)


# -- brute-force crosscheck ------------------------------------------------------

@dataclass
class DiffReport:
    matched: tuple
    missing_in_brute: tuple
    unexpected: tuple
    order_violations: tuple

    def ok(self):
        return not self.unexpected and not self.order_violations

    def to_json(self):
        return {"matched": list(self.matched),
                "missing_in_brute": list(self.missing_in_brute),
                "unexpected": list(self.unexpected),
                "order_violations": [list(v) for v in self.order_violations]}


def diff_from_json(data):
    return DiffReport(tuple(data["matched"]),
                      tuple(data["missing_in_brute"]),
                      tuple(data["unexpected"]),
                      tuple(tuple(v) for v in data["order_violations"]))


def crosscheck(sym, gen, field=FieldSpec(2), budget=DEFAULT_BUDGET):
    """Align the brute-force spectrum of a truncation with a symbolic
    window through the generator's atom table."""
    report = spectrum(gen.quiver, field, budget)
    brute_labels = set(report.atoms.labels())
    credit = {}  # brute label -> symbolic labels it witnesses
    for key, entry in gen.atom_table.items():
        if entry.get("kind") != "simple":
            continue
        lbl = _simple_label(entry["loop_colors"])
        credit.setdefault(lbl, set()).add(entry.get("atom_label", key))

    sym_labels = set(sym.labels())
    matched = set()
    unexpected = []
    for b in sorted(brute_labels):
        hits = credit.get(b, set()) & sym_labels
        if hits:
            matched |= hits
        else:
            unexpected.append(b)
    missing = sorted(sym_labels - matched)

    violations = []
    brute_to_sym = {b: sorted(credit.get(b, set()) & matched)
                    for b in brute_labels}
    for (x, y) in report.order.le:
        if x == y:
            continue
        for sx in brute_to_sym.get(x, ()):
            for sy in brute_to_sym.get(y, ()):
                if not sym.order.leq(sx, sy):
                    violations.append((sx, sy))
    return DiffReport(tuple(sorted(matched)), tuple(missing),
                      tuple(unexpected), tuple(sorted(set(violations))))


def noatom_absorption_check(prediction, gen, field=FieldSpec(2),
                            budget=DEFAULT_BUDGET):
    """Every brute-force atom of the truncation must be atom-equivalent
    to a designated noetherian loop simple."""
    report = spectrum(gen.quiver, field, budget)
    fam_by_label = {}
    for fam in gen.noetherian_family or ():
        if fam["kind"] == "loop_simple":
            fam_by_label[_simple_label(fam["loop_colors"])] = fam
    results = {}
    for atom in report.atoms:
        fam = fam_by_label.get(atom.label)
        if fam is None:
            results[atom.label] = False
            continue
        ops = field.ops
        actions = {c: ops.pack(np.array([[1]], dtype=np.int64), 1)
                   for c in fam["loop_colors"]}
        rep = FdModule(field, 1, ("f0",), actions)
        results[atom.label] = atom_equivalent(atom.representative, rep,
                                              budget)
    return results
