"""Homomorphism complexes of posets and the cubical cell-word model for chain products.

A cell of Hom_M(A, B) is a tuple of nonempty subsets of B, one per element
of A, all of whose representative systems lie in M; cells are keyed by
tuples of sorted tuples.  For a product of chains the complex is cubical and
cells are keyed by parenthesized multiset permutations (CellWord).
"""

from __future__ import annotations

import itertools
import json
from collections import defaultdict
from dataclasses import dataclass

from .posets import CapExceeded, GradedPoset, chain, delete_element, find_folds
from .words import (
    DEFAULT_CAP,
    CellWord,
    as_spec,
    check_content,
    enumerate_cellwords,
    release,
    render_cellword,
)
from . import chains as _chains


class CellComplex:
    """A polyhedral cell complex: canonical cell keys per dimension plus signed facets."""

    def __init__(self, cells, boundary, spec=None, target=None):
        self.cells = {d: tuple(cells[d]) for d in sorted(cells)}
        self.boundary = boundary
        self.spec = spec
        self.target = target
        index = set()
        for d, cs in self.cells.items():
            index.update(cs)
        for cell, faces in boundary.items():
            for face, _sign in faces:
                if face not in index:
                    raise ValueError(f"face {face!r} missing from the complex")

    @property
    def dim(self):
        return max(self.cells) if self.cells else -1

    def f_vector(self):
        return tuple(len(self.cells[d]) for d in range(self.dim + 1))

    def n_cells(self):
        return sum(len(v) for v in self.cells.values())

    def euler_characteristic(self):
        return sum((-1) ** d * len(cs) for d, cs in self.cells.items())

    def cover_pairs(self):
        """All (face, cell) cover pairs of the face poset."""
        for d in range(1, self.dim + 1):
            for cell in self.cells[d]:
                for face, _ in self.boundary[cell]:
                    yield face, cell

    def render_key(self, key):
        if isinstance(key, CellWord):
            return render_cellword(key)
        return render_multihom(key, self.target)

    def to_json_dict(self):
        faces = {}
        for d in range(1, self.dim + 1):
            for cell in self.cells[d]:
                faces[self.render_key(cell)] = [
                    [self.render_key(f), s] for f, s in self.boundary[cell]]
        return {
            "dims": list(range(self.dim + 1)),
            "cells": {str(d): [self.render_key(c) for c in self.cells[d]]
                      for d in range(self.dim + 1)},
            "faces": faces,
        }

    def to_json(self):
        return json.dumps(self.to_json_dict(), sort_keys=True)

    def __repr__(self):
        return f"CellComplex(f={self.f_vector()})"


def render_multihom(mh, target=None):
    def one(coord):
        names = [target.label(x) if target is not None and isinstance(x, int)
                 else _render_atom(x) for x in coord]
        return names[0] if len(names) == 1 else "{" + ",".join(names) + "}"

    return "(" + ",".join(one(c) for c in mh) + ")"


def _render_atom(x):
    if isinstance(x, tuple):
        if not x:
            return "{}"
        if max(x) <= 9:
            return "".join(str(v) for v in x)
        return "{" + ",".join(str(v) for v in x) + "}"
    return str(x)


# -- the cubical model for products of chains -------------------------------


def faces(cw):
    """Codimension-1 faces of a cell word: each pair released in both orders."""
    out = []
    for t in range(1, len(cw.pairs) + 1):
        out.append((release(cw, t, "alpha"), "alpha"))
        out.append((release(cw, t, "beta"), "beta"))
    return out


def _signed_faces(cw):
    out = []
    for t in range(1, len(cw.pairs) + 1):
        sa = -1 if t % 2 else 1
        out.append((release(cw, t, "alpha"), sa))
        out.append((release(cw, t, "beta"), -sa))
    return tuple(out)


def chain_product_complex(spec, cap=DEFAULT_CAP):
    """Hom of a product of chains, built directly from parenthesized words."""
    spec = as_spec(spec)
    cells = defaultdict(list)
    boundary = {}
    for cw in enumerate_cellwords(spec, cap=cap):
        cells[cw.dim].append(cw)
        boundary[cw] = _signed_faces(cw)
    return CellComplex({d: sorted(v) for d, v in cells.items()}, boundary, spec=spec)


def cellword_to_multihom(cw, spec):
    """The ideal chain in J of a disjoint union of chains encoded by a cell word.

    Ideals are rendered as sorted tuples of 1-based positions under the block
    linear extension (all of chain 1 bottom-to-top, then chain 2, ...); the
    s-th occurrence of letter t contributes position offset_t + s.
    """
    spec = as_spec(spec)
    check_content(cw, spec)
    offsets = [0] * (spec.n + 1)
    for t in range(2, spec.n + 1):
        offsets[t] = offsets[t - 1] + spec.i[t - 2]
    seen = [0] * (spec.n + 1)
    pairset = set(cw.pairs)
    ideal = []
    assign = [(tuple(ideal),)]
    p = 1
    ell = spec.ell
    while p <= ell:
        if p in pairset:
            beta, alpha = cw.word[p - 1], cw.word[p]
            eb = offsets[beta] + seen[beta] + 1
            ea = offsets[alpha] + seen[alpha] + 1
            lo = tuple(sorted(ideal + [ea]))
            hi = tuple(sorted(ideal + [eb]))
            assign.append((lo, hi))
            ideal = sorted(ideal + [ea, eb])
            assign.append((tuple(ideal),))
            seen[beta] += 1
            seen[alpha] += 1
            p += 2
        else:
            t = cw.word[p - 1]
            ideal = sorted(ideal + [offsets[t] + seen[t] + 1])
            assign.append((tuple(ideal),))
            seen[t] += 1
            p += 1
    return tuple(assign)


def cellword_from_multihom(mh, spec):
    """Inverse of cellword_to_multihom."""
    spec = as_spec(spec)
    ell = spec.ell
    if len(mh) != ell + 1:
        raise ValueError("multihom length does not match the chain spec")
    if len(mh[0]) != 1 or tuple(mh[0][0]) != ():
        raise ValueError("chain must start at the empty ideal")
    offsets = [0] * (spec.n + 1)
    for t in range(1, spec.n + 1):
        offsets[t] = offsets[t - 1] + spec.i[t - 1]

    def block_of(pos):
        for t in range(1, spec.n + 1):
            if pos <= offsets[t]:
                return t
        raise ValueError(f"position {pos} out of range")

    word = []
    pairs = []
    cur = set()
    k = 1
    while k <= ell:
        coord = mh[k]
        if len(coord) == 1:
            added = set(coord[0]) - cur
            if len(added) != 1 or len(coord[0]) != len(cur) + 1:
                raise ValueError("coordinates do not form an ideal chain")
            word.append(block_of(added.pop()))
            cur = set(coord[0])
            k += 1
        elif len(coord) == 2:
            if set(coord[0]) & set(coord[1]) != cur:
                raise ValueError("doubled coordinate must meet in the previous ideal")
            xs = sorted((set(coord[0]) | set(coord[1])) - cur)
            if len(xs) != 2:
                raise ValueError("bad doubled coordinate")
            lo, hi = xs
            word.append(block_of(hi))
            word.append(block_of(lo))
            pairs.append(k)
            cur = cur | set(xs)
            if k + 1 > ell or len(mh[k + 1]) != 1 or set(mh[k + 1][0]) != cur:
                raise ValueError("coordinate after a doubled one must be the union")
            k += 2
        else:
            raise ValueError("coordinate of size > 2 is not cubical")
    cw = CellWord(tuple(word), tuple(pairs))
    return check_content(cw, spec)


# -- generic homomorphism complexes -----------------------------------------


def _strict_maps(A, B):
    """All strictly order-preserving maps A -> B, as tuples indexed by A's ids."""
    order = A.linear_extension()
    preds = [tuple(a for a in A.down_covers[x]) for x in range(A.n)]
    out = []
    f = [None] * A.n

    def rec(k):
        if k == len(order):
            out.append(tuple(f))
            return
        x = order[k]
        for b in range(B.n):
            if all(B.lt(f[a], b) for a in preds[x]):
                f[x] = b
                rec(k + 1)
        f[x] = None

    rec(0)
    return out


def hom_complex_generic(A, B, maps="strict", cap=DEFAULT_CAP):
    """Hom_M(A, B): all multihoms whose representative systems lie in M.

    `maps` is either 'strict' (strictly order-preserving maps) or a predicate
    on tuples indexed by A's ids.  Cells are built bottom-up: vertices are
    the homomorphisms, and a candidate cell enters when all its facets are
    present (equivalent to the representative-system condition).
    """
    if callable(maps):
        if B.n ** A.n > cap:
            raise CapExceeded(f"|B|^|A| = {B.n}^{A.n} exceeds the cap {cap}")
        verts = [f for f in itertools.product(range(B.n), repeat=A.n) if maps(f)]
    elif maps == "strict":
        verts = _strict_maps(A, B)
    else:
        raise ValueError("maps must be 'strict' or a predicate")
    if len(verts) > cap:
        raise CapExceeded(f"{len(verts)} homomorphisms exceed the cap {cap}")
    m = A.n
    level = sorted(tuple((f[i],) for i in range(m)) for f in verts)
    cells = {0: tuple(level)}
    boundary = {v: () for v in level}
    total = len(level)
    d = 0
    while level:
        prev = set(level)
        nxt = set()
        for X in level:
            for i in range(m):
                have = set(X[i])
                for b in range(B.n):
                    if b in have:
                        continue
                    coord = tuple(sorted(have | {b}))
                    X2 = X[:i] + (coord,) + X[i + 1:]
                    if X2 in nxt:
                        continue
                    if all(f in prev for f, _ in _generic_signed_faces(X2)):
                        nxt.add(X2)
        level = sorted(nxt)
        if not level:
            break
        d += 1
        total += len(level)
        if total > cap:
            raise CapExceeded(f"cell count exceeds the cap {cap}")
        cells[d] = tuple(level)
        for X in level:
            boundary[X] = _generic_signed_faces(X)
    return CellComplex(cells, boundary, target=B)


def _generic_signed_faces(X):
    out = []
    for t, coord in enumerate(X):
        if len(coord) < 2:
            continue
        before = sum(len(X[j]) for j in range(t))
        for idx, v in enumerate(coord):
            face = X[:t] + (coord[:idx] + coord[idx + 1:],) + X[t + 1:]
            sign = -1 if (t + idx + before) % 2 else 1
            out.append((face, sign))
    return tuple(out)


def maximal_chain_complex(P, cap=DEFAULT_CAP, method="auto"):
    """Hom(P) = Hom(C_m, P) for a graded poset P of rank m.

    Vertices are the maximal chains of P.  For a product of chains
    (chain_spec tag with nondecreasing lengths) the cubical cell-word model
    is used; otherwise the complex is built generically from strict maps.
    """
    if not isinstance(P, GradedPoset):
        raise ValueError("maximal_chain_complex needs a graded poset")
    spec = getattr(P, "chain_spec", None)
    use_words = spec is not None and all(a <= b for a, b in zip(spec, spec[1:]))
    if method == "words" and not use_words:
        raise ValueError("poset is not tagged as a product of chains")
    if method == "auto":
        method = "words" if use_words else "generic"
    if method == "words":
        cx = chain_product_complex(as_spec(spec), cap=cap)
        cx.target = P
        return cx
    if method != "generic":
        raise ValueError(f"unknown method {method!r}")
    m = P.top_rank
    cx = hom_complex_generic(chain(m), P, maps="strict", cap=cap)
    if getattr(P, "ideal_masks", None) is not None or spec is not None:
        _assert_cubical(cx)
    return cx


def _assert_cubical(cx):
    # Hom of a distributive lattice: coordinate sizes 1 or 2, no adjacent 2s
    for d, cs in cx.cells.items():
        for X in cs:
            sizes = [len(c) for c in X]
            if any(s not in (1, 2) for s in sizes):
                raise AssertionError(f"non-cubical cell {X!r}")
            if any(a == 2 and b == 2 for a, b in zip(sizes, sizes[1:])):
                raise AssertionError(f"adjacent doubled coordinates in {X!r}")


def product_cell_to_cellword(X, P):
    """Translate a generic Hom(C_m, P) cell over a chain-product poset to a CellWord.

    P's elements must decode to coordinate tuples (mixed-radix over the factor
    sizes); the letter of a chain step is the factor whose coordinate grew.
    """
    spec = P.chain_spec
    sizes = [v + 1 for v in spec]
    k = len(sizes)
    strides = [1] * k
    for j in range(k - 2, -1, -1):
        strides[j] = strides[j + 1] * sizes[j + 1]

    def decode(e):
        return tuple((e // strides[j]) % sizes[j] for j in range(k))

    word = []
    pairs = []
    p = 0
    prev = decode(X[0][0])
    for coord in X[1:]:
        if len(coord) == 1:
            cur = decode(coord[0])
            jj = [j for j in range(k) if cur[j] != prev[j]]
            if len(jj) == 1 and cur[jj[0]] == prev[jj[0]] + 1:
                word.append(jj[0] + 1)
                p += 1
                prev = cur
                continue
            if not jj:
                continue  # repeated singleton after a doubled coordinate
            raise ValueError("not a saturated chain step")
        if len(coord) != 2:
            raise ValueError("cell is not cubical")
        a, b = (decode(e) for e in coord)
        ja = [j for j in range(k) if a[j] != prev[j]]
        jb = [j for j in range(k) if b[j] != prev[j]]
        if len(ja) != 1 or len(jb) != 1:
            raise ValueError("bad doubled coordinate")
        hi, lo = max(ja[0], jb[0]), min(ja[0], jb[0])
        word.append(hi + 1)
        word.append(lo + 1)
        pairs.append(p + 1)
        p += 2
        step = [prev[j] for j in range(k)]
        step[ja[0]] += 1
        step[jb[0]] += 1
        prev = tuple(step)
    cw = CellWord(tuple(word), tuple(pairs))
    return check_content(cw, as_spec(spec))


# -- fold consequences -------------------------------------------------------


@dataclass(frozen=True)
class FoldReport:
    """Homology comparison of Hom(Q, P) and Hom(Q, P - x) for a fold removal."""

    removed: int
    witnesses: tuple
    before: object
    after: object
    agree: bool


def verify_fold_consequence(Q, P, x, cap=DEFAULT_CAP):
    """Check the homological consequence of the collapse Hom(Q,P) -> Hom(Q,P-x).

    P - x must be a fold of P (witnessed by some y); builds both strict-map
    homomorphism complexes and reports whether all Betti numbers and torsion
    agree.
    """
    witnesses = tuple(y for xx, y in find_folds(P) if xx == x)
    if not witnesses:
        raise ValueError(f"removing element {x} is not a fold of P")
    before = _chains.homology(hom_complex_generic(Q, P, maps="strict", cap=cap))
    P2, _ = delete_element(P, x)
    after = _chains.homology(hom_complex_generic(Q, P2, maps="strict", cap=cap))
    width = max(len(before.betti), len(after.betti))

    def pad(t, fill):
        return tuple(t) + (fill,) * (width - len(t))

    agree = (pad(before.betti, 0) == pad(after.betti, 0)
             and pad(before.torsion, ()) == pad(after.torsion, ()))
    return FoldReport(x, witnesses, before, after, agree)
