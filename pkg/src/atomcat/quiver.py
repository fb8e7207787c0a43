"""Colored quivers and their combinators.

A colored quiver is a finite directed graph whose arrows carry a color
and a field value (an integer, reduced mod p only when a module is
built from the quiver).  The single structural invariant beyond
declaredness is that no two arrows share (source, target, color); a
color may well label many arrows, and that sharing is what later glues
simple modules together.

Combinators: full subquivers, target-closed splitting, disjoint unions,
substitution of blocks into a skeleton quiver (complete bipartite
bundles of freshly colored arrows per skeleton arrow), finite chains,
and a two-step ladder.  Substitution mints the fresh color for a bundle
arrow from (skeleton color, source block vertex, target block vertex),
so identical blocks hanging off equally colored skeleton arrows share
bundle colors, and regeneration is deterministic.
"""

from dataclasses import dataclass

import numpy as np

from . import modp
from .errors import (ColorClash, DuplicateArrow, EmptyRange, MissingBlock,
                     NotAssociative, NotTargetClosed, NotUnital,
                     UnknownColor, UnknownVertex)


@dataclass(frozen=True)
class Arrow:
    src: str
    dst: str
    color: str
    value: int = 1

    def to_json(self):
        return {"src": self.src, "dst": self.dst,
                "color": self.color, "value": self.value}


@dataclass(frozen=True)
class ColoredQuiver:
    vertices: tuple
    colors: tuple
    arrows: tuple

    def arrows_from(self, v):
        return tuple(a for a in self.arrows if a.src == v)

    def loops_at(self, v):
        return tuple(a for a in self.arrows if a.src == v and a.dst == v)

    def to_json(self):
        return {"vertices": list(self.vertices),
                "colors": list(self.colors),
                "arrows": [a.to_json() for a in self.arrows]}

    def to_dot(self):
        lines = ["digraph quiver {"]
        for v in self.vertices:
            lines.append(f'  "{v}";')
        for a in self.arrows:
            label = a.color if a.value == 1 else f"{a.color}={a.value}"
            lines.append(f'  "{a.src}" -> "{a.dst}" [label="{label}"];')
        lines.append("}")
        return "\n".join(lines)


@dataclass(frozen=True)
class TruncationSpec:
    """Finite materialization bounds for the infinite constructions.

    depth counts whole construction stages (chain passes, word length);
    ladder_range is the inclusive integer interval for ladder-style
    indices.
    """

    depth: int = 2
    ladder_range: tuple = None

    def ladder_values(self):
        if self.ladder_range is None:
            return None
        lo, hi = self.ladder_range
        return range(lo, hi + 1)


@dataclass(frozen=True)
class GeneratedQuiver:
    """A truncated quiver plus bookkeeping for its expected atoms.

    atom_table maps a symbolic atom label to a descriptor dict with at
    least "kind" ("simple" or "chain_limit") and "vertices"; simple
    descriptors also carry "loop_colors", the loop colors every vertex
    of that class wears, which is what brute-force matching keys on.
    """

    quiver: ColoredQuiver
    atom_table: dict
    noetherian_family: tuple = None

    def to_json(self):
        data = self.quiver.to_json()
        data["atom_table"] = {k: dict(v) for k, v in self.atom_table.items()}
        if self.noetherian_family is not None:
            data["noetherian_family"] = [dict(d) for d in self.noetherian_family]
        return data


def make_quiver(vertices, colors, arrows):
    """Validated colored quiver; arrows given as (src, dst, color[, value])."""
    vs = tuple(sorted(set(vertices)))
    cs = tuple(sorted(set(colors)))
    vset, cset = set(vs), set(cs)
    seen = set()
    out = []
    for a in arrows:
        if not isinstance(a, Arrow):
            a = Arrow(*a)
        if a.src not in vset:
            raise UnknownVertex("arrow source not declared", vertex=a.src)
        if a.dst not in vset:
            raise UnknownVertex("arrow target not declared", vertex=a.dst)
        if a.color not in cset:
            raise UnknownColor("arrow color not declared", color=a.color)
        key = (a.src, a.dst, a.color)
        if key in seen:
            raise DuplicateArrow("two arrows share (src, dst, color)",
                                 src=a.src, dst=a.dst, color=a.color)
        seen.add(key)
        out.append(a)
    out.sort(key=lambda a: (a.src, a.dst, a.color))
    return ColoredQuiver(vs, cs, tuple(out))


def normalize(vertices, colors, arrows, p=2):
    """Merge colliding (src, dst, color) arrows by summing values mod p.

    Zero-valued arrows (after reduction) are dropped, so the result
    always satisfies the no-shared-triple invariant.
    """
    sums = {}
    for a in arrows:
        if not isinstance(a, Arrow):
            a = Arrow(*a)
        key = (a.src, a.dst, a.color)
        sums[key] = (sums.get(key, 0) + a.value) % p
    merged = [Arrow(s, d, c, v) for (s, d, c), v in sums.items() if v != 0]
    return make_quiver(vertices, colors, merged)


def full_subquiver(quiver, vertex_subset):
    """Keep exactly the arrows with both ends inside the subset."""
    keep = set(vertex_subset)
    missing = keep - set(quiver.vertices)
    if missing:
        raise UnknownVertex("subset not inside the quiver",
                            vertices=sorted(missing))
    arrows = [a for a in quiver.arrows if a.src in keep and a.dst in keep]
    return make_quiver(sorted(keep), quiver.colors, arrows)


def split_by_closed(quiver, vertex_subset):
    """Split along a target-closed vertex subset.

    The subset spans an action-invariant coordinate subspace of the
    quiver module, so downstream this yields a short exact sequence
    submodule -> module -> quotient.
    """
    keep = set(vertex_subset)
    missing = keep - set(quiver.vertices)
    if missing:
        raise UnknownVertex("subset not inside the quiver",
                            vertices=sorted(missing))
    for a in quiver.arrows:
        if a.src in keep and a.dst not in keep:
            raise NotTargetClosed("arrow escapes the subset",
                                  src=a.src, dst=a.dst, color=a.color)
    rest = [v for v in quiver.vertices if v not in keep]
    return full_subquiver(quiver, sorted(keep)), full_subquiver(quiver, rest)


def disjoint_union(quivers, names=None):
    """Disjoint union; vertices get a block prefix, colors are shared.

    Sharing colors (rather than renaming them per block) is deliberate:
    equal blocks in different positions must stay isomorphic as
    modules.
    """
    if names is None:
        names = [str(i) for i in range(len(quivers))]
    vertices, arrows = [], []
    colors = set()
    for name, q in zip(names, quivers):
        ren = {v: f"{name}/{v}" for v in q.vertices}
        vertices.extend(ren.values())
        colors.update(q.colors)
        arrows.extend(Arrow(ren[a.src], ren[a.dst], a.color, a.value)
                      for a in q.arrows)
    return make_quiver(vertices, sorted(colors), arrows)


def bundle_color(skeleton_color, src_vertex, dst_vertex):
    """Fresh color minted by substitution for one bundle arrow."""
    return f"!({skeleton_color};{src_vertex},{dst_vertex})"


def substitute(omega, blocks):
    """Replace each skeleton vertex by a block quiver.

    Block-internal arrows are kept (colors untouched); each skeleton
    arrow of color mu becomes the complete bipartite bundle between the
    two block vertex sets, arrow (v, v') colored bundle_color(mu, v, v').
    Freshness of the minted colors against all block colors is
    enforced, mirroring the disjointness in the construction.
    """
    block_colors = set()
    for w in omega.vertices:
        if w not in blocks:
            raise MissingBlock("skeleton vertex without a block", vertex=w)
        block_colors.update(blocks[w].colors)

    vertices, arrows = [], []
    colors = set(block_colors)
    for w in omega.vertices:
        q = blocks[w]
        ren = {v: f"{w}/{v}" for v in q.vertices}
        vertices.extend(ren.values())
        arrows.extend(Arrow(ren[a.src], ren[a.dst], a.color, a.value)
                      for a in q.arrows)
    for rho in omega.arrows:
        src_block, dst_block = blocks[rho.src], blocks[rho.dst]
        for v in src_block.vertices:
            for v2 in dst_block.vertices:
                c = bundle_color(rho.color, v, v2)
                if c in block_colors:
                    raise ColorClash("bundle color already used by a block",
                                     color=c)
                colors.add(c)
                arrows.append(Arrow(f"{rho.src}/{v}", f"{rho.dst}/{v2}", c))
    return make_quiver(vertices, sorted(colors), arrows)


def path_skeleton(n_blocks, tags):
    """Path quiver b0 -> b1 -> ... with the given arrow colors."""
    vertices = [f"b{i}" for i in range(n_blocks)]
    arrows = [Arrow(f"b{i}", f"b{i+1}", tags[i]) for i in range(n_blocks - 1)]
    return make_quiver(vertices, sorted(set(tags[:max(0, n_blocks - 1)])), arrows)


def chain(blocks, tags=None):
    """Finite chain of blocks joined by pairwise distinctly colored bundles.

    tags supplies the skeleton arrow colors; nested chains must pass
    tags that stay clear of the colors minted inside the blocks.
    """
    if not blocks:
        raise EmptyRange("chain needs at least one block")
    if tags is None:
        tags = [f"(chain;{i})" for i in range(len(blocks) - 1)]
    if len(tags) != len(blocks) - 1:
        raise ValueError(f"need {len(blocks) - 1} tags, got {len(tags)}")
    if len(set(tags)) != len(tags):
        raise ColorClash("chain tags must be pairwise distinct", tags=list(tags))
    skel = path_skeleton(len(blocks), list(tags))
    q = substitute(skel, {f"b{i}": b for i, b in enumerate(blocks)})
    table = {"chain(inf)": {"kind": "chain_limit",
                            "vertices": list(q.vertices)}}
    for i, b in enumerate(blocks):
        table[f"block{i}"] = {"kind": "block",
                              "vertices": [f"b{i}/{v}" for v in b.vertices]}
    return GeneratedQuiver(q, table)


def ladder(block, interval):
    """Integer-indexed ladder of block copies with step and skip bundles.

    Step arrows (i, v) -> (i-1, w) share the position-independent color
    1c(v,w); skip arrows (i, v) -> (i-2, w) get per-position colors
    2c[i](v,w).  Only arrows with both endpoints inside the interval are
    materialized.
    """
    lo, hi = interval
    if hi < lo:
        raise EmptyRange("ladder interval is empty", interval=list(interval))
    positions = list(range(lo, hi + 1))
    vertices, arrows = [], []
    colors = set(block.colors)
    for i in positions:
        ren = {v: f"{i}/{v}" for v in block.vertices}
        vertices.extend(ren.values())
        arrows.extend(Arrow(ren[a.src], ren[a.dst], a.color, a.value)
                      for a in block.arrows)
    for i in positions:
        for v in block.vertices:
            for w in block.vertices:
                if i - 1 >= lo:
                    c = f"1c({v},{w})"
                    colors.add(c)
                    arrows.append(Arrow(f"{i}/{v}", f"{i-1}/{w}", c))
                if i - 2 >= lo:
                    c = f"2c[{i}]({v},{w})"
                    colors.add(c)
                    arrows.append(Arrow(f"{i}/{v}", f"{i-2}/{w}", c))
    q = make_quiver(vertices, sorted(colors), arrows)
    table = {f"pos({i})": {"kind": "block",
                           "vertices": [f"{i}/{v}" for v in block.vertices]}
             for i in positions}
    return GeneratedQuiver(q, table)


def quiver_of_algebra(basis, structure, p=2, assoc_cap=4096):
    """Quiver whose module is the right regular representation.

    basis: list of basis element names.  structure maps (b, b'') to a
    dict {b': coeff} expressing b * b'' in the basis.  Associativity and
    the existence of a two-sided identity are checked (the former only
    while len(basis)^3 <= assoc_cap).
    """
    basis = list(basis)
    n = len(basis)
    idx = {b: i for i, b in enumerate(basis)}
    right = {}  # right[b''] as an n x n matrix, row = source basis element
    for b2 in basis:
        mat = np.zeros((n, n), dtype=np.int64)
        for b in basis:
            for b1, coeff in structure.get((b, b2), {}).items():
                mat[idx[b], idx[b1]] = coeff % p
        right[b2] = mat

    def mul_vec(vec, b2):
        return (vec @ right[b2]) % p

    if n ** 3 <= assoc_cap:
        for a in basis:
            va = np.zeros(n, dtype=np.int64)
            va[idx[a]] = 1
            for b in basis:
                ab = mul_vec(va, b)
                for c in basis:
                    lhs = mul_vec(ab, c)
                    bc = mul_vec(np.eye(n, dtype=np.int64)[idx[b]], c)
                    rhs = np.zeros(n, dtype=np.int64)
                    for k in range(n):
                        if bc[k]:
                            rhs = rhs + int(bc[k]) * mul_vec(va, basis[k])
                    rhs %= p
                    if not np.array_equal(lhs, rhs % p):
                        raise NotAssociative("structure constants violate "
                                             "associativity", triple=[a, b, c])

    # two-sided identity: solve e * b = b and b * e = b for all b
    rows, rhs = [], []
    for b in basis:
        for j in range(n):
            rows.append([right[b][i, j] for i in range(n)])
            rhs.append(1 if j == idx[b] else 0)
    for b in basis:
        for j in range(n):
            rows.append([right[bi][idx[b], j] for bi in basis])
            rhs.append(1 if j == idx[b] else 0)
    aug = np.column_stack([np.array(rows, dtype=np.int64) % p,
                           np.array(rhs, dtype=np.int64)])
    red, piv = modp.rref(aug, p)
    if n in set(int(q) for q in piv):
        raise NotUnital("no two-sided identity in the span of the basis")

    vertices = [f"v[{b}]" for b in basis]
    colors = [f"c[{b}]" for b in basis]
    arrows = []
    for b2 in basis:
        for b in basis:
            for b1 in basis:
                val = int(right[b2][idx[b], idx[b1]])
                if val % p:
                    arrows.append(Arrow(f"v[{b}]", f"v[{b1}]",
                                        f"c[{b2}]", val % p))
    return make_quiver(vertices, colors, arrows)


def quiver_from_json(data):
    return make_quiver(data["vertices"], data["colors"],
                       [Arrow(a["src"], a["dst"], a["color"],
                              a.get("value", 1))
                        for a in data["arrows"]])


def generated_from_json(data):
    fam = data.get("noetherian_family")
    return GeneratedQuiver(quiver_from_json(data),
                           {k: dict(v) for k, v in data["atom_table"].items()},
                           tuple(dict(d) for d in fam) if fam is not None else None)


def loop_stripped_topo_order(quiver):
    """Topological order of the quiver with loops removed, or None.

    When this succeeds the module of the quiver is triangular in that
    vertex order, which downstream turns composition factor extraction
    into a read-off.
    """
    order_in = {v: 0 for v in quiver.vertices}
    outs = {v: [] for v in quiver.vertices}
    for a in quiver.arrows:
        if a.src == a.dst:
            continue
        outs[a.src].append(a.dst)
        order_in[a.dst] += 1
    ready = sorted(v for v, d in order_in.items() if d == 0)
    out = []
    while ready:
        v = ready.pop()
        out.append(v)
        added = []
        for w in outs[v]:
            order_in[w] -= 1
            if order_in[w] == 0:
                added.append(w)
        ready.extend(sorted(added))
    if len(out) != len(quiver.vertices):
        return None
    return out
