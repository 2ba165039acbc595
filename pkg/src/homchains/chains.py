"""Integer cellular chain complexes: incidence numbers, boundary matrices,
Smith-normal-form homology, and Morse-complex incidences via alternating paths.

Sign conventions follow the tensor-product orientation of a product of
simplices, with target vertices listed in ascending canonical order (for
ideal lattices this is graded lexicographic order under the fixed linear
extension).  Releasing a joined pair with q pairs to its left therefore has
incidence (-1)^q for the order-preserving (beta) release and (-1)^(q+1) for
the swapped (alpha) release.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from typing import NamedTuple

from .words import CellWord, release


# -- incidence numbers ----------------------------------------------------


def pair_incidence(cw, t, order):
    """Incidence of the face releasing the t-th joined pair (1-based) of cw.

    'beta' keeps the descending order, 'alpha' swaps; the two signs are
    always opposite.
    """
    if not 1 <= t <= len(cw.pairs):
        raise ValueError(f"no joined pair #{t}")
    if order == "beta":
        return -1 if (t - 1) % 2 else 1
    if order == "alpha":
        return -1 if t % 2 else 1
    raise ValueError(f"order must be 'alpha' or 'beta', not {order!r}")


def _atom_key(a):
    # ideals (tuples) sort by size then lexicographically; plain ids by value
    if isinstance(a, tuple):
        return (len(a), a)
    return a


def incidence(tau, eta):
    """Signed incidence [tau:eta] between multihoms; 0 unless tau is a facet of eta.

    tau must equal eta except at one coordinate t, where one element was
    deleted; the sign is (-1)^(t + idx + sum of |eta(j)| over j < t) with
    coordinates 0-based and idx the deleted element's position within eta(t).
    """
    if len(tau) != len(eta):
        raise ValueError("multihoms of different lengths")
    diff = [k for k in range(len(eta)) if tuple(tau[k]) != tuple(eta[k])]
    if len(diff) != 1:
        return 0
    t = diff[0]
    big, small = tuple(eta[t]), tuple(tau[t])
    if len(big) != len(small) + 1 or not set(small) <= set(big):
        return 0
    removed = (set(big) - set(small)).pop()
    order = sorted(big, key=_atom_key)
    idx = order.index(removed)
    before = sum(len(eta[j]) for j in range(t))
    return -1 if (t + idx + before) % 2 else 1


# -- sparse integer matrices ----------------------------------------------


class SparseIntMatrix:
    """Integer matrix stored as {(row, col): value}; exact arithmetic throughout."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows, ncols, entries=None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries = dict(entries) if entries else {}

    @classmethod
    def from_dense(cls, rows):
        rows = [list(r) for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        entries = {}
        for r, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            for c, v in enumerate(row):
                if v:
                    entries[(r, c)] = int(v)
        return cls(nrows, ncols, entries)

    def to_dense(self):
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    @property
    def nnz(self):
        return len(self.entries)

    def is_zero(self):
        return not self.entries

    def mul(self, other):
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        by_col = defaultdict(list)
        for (r, c), v in other.entries.items():
            by_col[c].append((r, v))
        rows_of = defaultdict(list)
        for (r, c), v in self.entries.items():
            rows_of[c].append((r, v))
        entries = {}
        for c, col in by_col.items():
            acc = defaultdict(int)
            for k, v in col:
                for r, w in rows_of.get(k, ()):
                    acc[r] += v * w
            for r, v in acc.items():
                if v:
                    entries[(r, c)] = v
        return SparseIntMatrix(self.nrows, other.ncols, entries)

    def row_dicts(self):
        rows = defaultdict(dict)
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return dict(rows)

    def coordinate_lines(self):
        """Text export: `nrows ncols` then `row col value` per nonzero."""
        lines = [f"{self.nrows} {self.ncols}"]
        for (r, c) in sorted(self.entries):
            lines.append(f"{r} {c} {self.entries[(r, c)]}")
        return "\n".join(lines)

    def __repr__(self):
        return f"SparseIntMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


# -- Smith normal form ----------------------------------------------------


class SNFResult(NamedTuple):
    factors: tuple  # nonzero invariant factors d_1 | d_2 | ...
    rank: int


def _eliminate_unit(rowdata, cols, units, r0, c0):
    v = rowdata[r0][c0]  # +-1
    row0 = rowdata.pop(r0)
    for c in row0:
        cols[c].discard(r0)
    for r in list(cols[c0]):
        row = rowdata[r]
        a = row.pop(c0)
        cols[c0].discard(r)
        f = a * v
        for c, w in row0.items():
            if c == c0:
                continue
            nv = row.get(c, 0) - f * w
            if nv:
                row[c] = nv
                cols[c].add(r)
                if nv in (1, -1):
                    units[(r, c)] = None
            elif c in row:
                del row[c]
                cols[c].discard(r)
        if not row:
            del rowdata[r]
    cols.pop(c0, None)


def _dense_snf(A):
    """Textbook SNF of a small dense integer matrix; returns nonzero invariant factors."""
    m = len(A)
    n = len(A[0]) if m else 0
    t = 0
    out = []
    while True:
        piv = None
        pv = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (pv is None or abs(v) < pv):
                    piv, pv = (i, j), abs(v)
        if piv is None:
            break
        i0, j0 = piv
        A[t], A[i0] = A[i0], A[t]
        for row in A:
            row[t], row[j0] = row[j0], row[t]
        while True:
            if A[t][t] < 0:
                A[t] = [-x for x in A[t]]
            restart = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        restart = True
                        break
            if restart:
                continue
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j]:
                        for row in A:
                            row[t], row[j] = row[j], row[t]
                        restart = True
                        break
            if restart:
                continue
            d = A[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % d:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
        out.append(A[t][t])
        t += 1
        if t == min(m, n):
            break
    return out


def smith_normal_form(matrix):
    """Invariant factors d_1 | d_2 | ... (nonzero only) and the rank.

    Elementary row/column reduction with pivots chosen by minimal absolute
    value; unit pivots are eliminated sparsely (with a bounded Markowitz
    fill heuristic), any non-unit residue falls back to dense reduction.
    """
    if isinstance(matrix, SparseIntMatrix):
        rowdata = matrix.row_dicts()
    else:
        rowdata = SparseIntMatrix.from_dense(matrix).row_dicts()
    cols = defaultdict(set)
    units = {}
    for r, row in rowdata.items():
        for c, v in row.items():
            cols[c].add(r)
            if v in (1, -1):
                units[(r, c)] = None
    n_units = 0
    while units:
        best = None
        best_cost = None
        stale = []
        scanned = 0
        for key in units:
            r, c = key
            row = rowdata.get(r)
            v = row.get(c) if row else None
            if v not in (1, -1):
                stale.append(key)
                continue
            scanned += 1
            cost = (len(row) - 1) * (len(cols[c]) - 1)
            if best_cost is None or cost < best_cost:
                best, best_cost = key, cost
                if cost == 0:
                    break
            if scanned >= 32:
                break
        for key in stale:
            del units[key]
        if best is None:
            if scanned == 0 and not stale:
                break
            continue
        del units[best]
        _eliminate_unit(rowdata, cols, units, *best)
        n_units += 1
    # dense residue (no +-1 entries left)
    rest = []
    if rowdata:
        act_rows = sorted(rowdata)
        act_cols = sorted({c for row in rowdata.values() for c in row})
        dense = [[rowdata[r].get(c, 0) for c in act_cols] for r in act_rows]
        rest = _dense_snf(dense)
    factors = [1] * n_units + [abs(d) for d in rest]
    # insurance: normalize the divisibility chain
    import math

    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            a, b = factors[i], factors[j]
            if b % a:
                g = math.gcd(a, b)
                factors[i], factors[j] = g, a * b // g
    factors.sort()
    return SNFResult(tuple(factors), len(factors))


# -- chain complexes ------------------------------------------------------


@dataclass(frozen=True)
class IntegerChainComplex:
    """Per-dimension integer boundary matrices over canonical cell bases."""

    bases: dict  # dim -> tuple of cell keys
    mats: dict   # dim -> SparseIntMatrix mapping dim-cells to (dim-1)-cells

    @property
    def dim(self):
        return max(self.bases) if self.bases else -1

    def f_vector(self):
        return tuple(len(self.bases[d]) for d in range(self.dim + 1))

    def check_boundary_squared(self):
        for d in range(2, self.dim + 1):
            if d in self.mats and (d - 1) in self.mats:
                if not self.mats[d - 1].mul(self.mats[d]).is_zero():
                    raise ArithmeticError(f"boundary squared is nonzero at dimension {d}")


def boundary_matrices(cx):
    """Assemble the integer boundary matrices of a cell complex and verify d o d = 0."""
    bases = {d: tuple(cx.cells[d]) for d in sorted(cx.cells)}
    index = {d: {cell: i for i, cell in enumerate(cells)} for d, cells in bases.items()}
    mats = {}
    for d in sorted(bases):
        if d == 0:
            continue
        entries = {}
        for j, cell in enumerate(bases[d]):
            for face, sign in cx.boundary[cell]:
                key = (index[d - 1][face], j)
                if key in entries:
                    raise ArithmeticError("repeated facet in boundary")
                entries[key] = sign
        mats[d] = SparseIntMatrix(len(bases[d - 1]), len(bases[d]), entries)
    icc = IntegerChainComplex(bases, mats)
    icc.check_boundary_squared()
    return icc


@dataclass(frozen=True)
class HomologyReport:
    """Betti numbers and torsion invariant factors per dimension."""

    betti: tuple
    torsion: tuple  # per dimension: tuple of invariant factors > 1
    euler: int

    @property
    def torsion_free(self):
        return all(not t for t in self.torsion)

    def to_json_dict(self):
        return {
            "betti": list(self.betti),
            "torsion": [list(t) for t in self.torsion],
            "euler": self.euler,
        }


def homology(obj):
    """Integer homology via Smith normal form of the boundary matrices."""
    icc = obj if isinstance(obj, IntegerChainComplex) else boundary_matrices(obj)
    top = icc.dim
    ranks = {}
    factors = {}
    for d in range(1, top + 1):
        snf = smith_normal_form(icc.mats[d])
        ranks[d] = snf.rank
        factors[d] = snf.factors
    betti = []
    torsion = []
    for d in range(top + 1):
        nd = len(icc.bases[d])
        betti.append(nd - ranks.get(d, 0) - ranks.get(d + 1, 0))
        torsion.append(tuple(f for f in factors.get(d + 1, ()) if f > 1))
    euler = sum((-1) ** d * b for d, b in enumerate(betti))
    return HomologyReport(tuple(betti), tuple(torsion), euler)


# -- Morse complex via alternating paths ----------------------------------


@dataclass(frozen=True)
class AlternatingPath:
    """(sigma, a_1, u(a_1), ..., a_t, u(a_t), tau); length is t."""

    cells: tuple

    @property
    def t(self):
        return (len(self.cells) - 2) // 2

    @property
    def source(self):
        return self.cells[0]

    @property
    def target(self):
        return self.cells[-1]


class ComplexMatchContext:
    """Facet/matching oracle over a built complex and a Morse matching."""

    def __init__(self, cx, matching):
        self._boundary = cx.boundary
        self.cx = cx
        self.matching = matching
        self._signs = {}
        self._dim = None

    def facets(self, cell):
        return self._boundary[cell]

    def dim_of(self, cell):
        if self._dim is None:
            self._dim = {c: d for d, cells in self.cx.cells.items() for c in cells}
        return self._dim[cell]

    def facet_sign(self, face, cell):
        d = self._signs.get(cell)
        if d is None:
            d = dict(self._boundary[cell])
            self._signs[cell] = d
        return d[face]

    def up(self, cell):
        return self.matching.up.get(cell)

    def down(self, cell):
        return self.matching.down.get(cell)


def path_weight(path, ctx):
    """w(c) = (-1)^t [a_1:sigma][tau:u(a_t)] prod [a_i:u(a_i)] prod [a_{i+1}:u(a_i)]."""
    cells = path.cells
    t = path.t
    if t < 1:
        raise ValueError("alternating path needs at least one matched step")
    sign = -1 if t % 2 else 1
    sign *= ctx.facet_sign(cells[1], cells[0])          # [a_1 : sigma]
    sign *= ctx.facet_sign(cells[-1], cells[-2])        # [tau : u(a_t)]
    for i in range(t):
        a, u = cells[1 + 2 * i], cells[2 + 2 * i]
        sign *= ctx.facet_sign(a, u)                    # [a_i : u(a_i)]
        if i + 1 < t:
            sign *= ctx.facet_sign(cells[3 + 2 * i], u)  # [a_{i+1} : u(a_i)]
    return sign


def alternating_paths_from(sigma, ctx, targets, reachable=None):
    """All alternating paths from sigma to any target, plus direct facet signs.

    Returns (paths_by_target, direct_by_target).  When a `reachable` set is
    given, the walk is pruned to cells from which a target is reachable.
    """
    paths = {tau: [] for tau in targets}
    direct = {}

    def walk(a, trail):
        u = ctx.up(a)
        t2 = trail + (a, u)
        for f, _sign in ctx.facets(u):
            if f == a:
                continue
            if f in paths:
                paths[f].append(AlternatingPath(t2 + (f,)))
            elif ctx.up(f) is not None and (reachable is None or f in reachable):
                walk(f, t2)

    for f, sign in ctx.facets(sigma):
        if f in paths:
            direct[f] = direct.get(f, 0) + sign
        if ctx.up(f) is not None and (reachable is None or f in reachable):
            walk(f, (sigma,))
    return paths, direct


def _pair_change(lower, upper):
    """Left position of the single joined pair present in upper but not in lower."""
    extra = set(upper.pairs) - set(lower.pairs)
    if len(extra) != 1:
        raise ValueError("cells do not differ by one joined pair")
    return extra.pop()


def _is_swap(a, u, nxt):
    """True when nxt is obtained from a by exchanging the two entries joined in u."""
    return _pair_change(a, u) == _pair_change(nxt, u)


def _release_at(cell, p, order):
    t = cell.pairs.index(p) + 1
    return release(cell, t, order)


def involution_partner(path, ctx):
    """The sign-reversing partner path: re-release the pivot pair in the other order.

    The pivot is the last non-swap step (the initial release from sigma when
    every matched step is a swap, as always happens between dimensions 1 and
    0); after it the partner path is forced, each matched join being undone
    by the swap release, until the target critical cell is reached.
    """
    cells = path.cells
    t = path.t
    tau = cells[-1]
    j = 0  # pivot 0 means the release from sigma itself
    for i in range(1, t + 1):
        a, u = cells[2 * i - 1], cells[2 * i]
        nxt = cells[2 * i + 1]
        if not _is_swap(a, u, nxt):
            j = i
    u_j = cells[2 * j]
    a_next = cells[2 * j + 1]
    p = _pair_change(a_next, u_j)
    # released in the opposite order: beta keeps the word of u_j, alpha swaps
    order = "beta" if a_next.word != u_j.word else "alpha"
    out = list(cells[: 2 * j + 1])
    x = _release_at(u_j, p, order)
    limit = 4 * len(tau.word) ** 2 + 4
    for _ in range(limit):
        out.append(x)
        if x == tau:
            return AlternatingPath(tuple(out))
        u = ctx.up(x)
        if u is None:
            raise ValueError("partner walk left the matched region")
        out.append(u)
        # joining never changes the word, so the swap release is always alpha
        x = _release_at(u, _pair_change(x, u), "alpha")
    raise ValueError("partner walk did not terminate")


@dataclass(frozen=True)
class PathCensus:
    """Alternating paths between one critical pair, with the sign-reversing pairing."""

    paths: tuple
    weights: tuple
    pairing: tuple  # index pairs (i, j), i < j, or None when no involution exists
    total: int

    @property
    def count(self):
        return len(self.paths)


def _build_census(paths, ctx):
    weights = tuple(path_weight(p, ctx) for p in paths)
    total = sum(weights)
    # the sign-reversing pairing is defined on parenthesized-word cells only
    if paths and not isinstance(paths[0].cells[0], CellWord):
        return PathCensus(tuple(paths), weights, None, total)
    index = {p.cells: k for k, p in enumerate(paths)}
    pairing = []
    seen = set()
    ok = True
    for k, p in enumerate(paths):
        if k in seen:
            continue
        try:
            q = involution_partner(p, ctx)
        except ValueError:
            ok = False
            break
        m = index.get(q.cells)
        if m is None or m == k or m in seen:
            ok = False
            break
        back = involution_partner(q, ctx)
        if back.cells != p.cells or weights[k] * weights[m] != -1:
            ok = False
            break
        seen.add(k)
        seen.add(m)
        pairing.append((min(k, m), max(k, m)))
    return PathCensus(tuple(paths), weights, tuple(sorted(pairing)) if ok else None, total)


def morse_incidence(sigma, tau, ctx, census=True):
    """Morse-complex incidence between critical cells, with a path census.

    The value sums w(c) over all alternating paths plus the direct facet
    incidence when tau is a facet of sigma.
    """
    if ctx.up(sigma) is not None or ctx.down(sigma) is not None:
        raise ValueError("sigma is not critical")
    if ctx.up(tau) is not None or ctx.down(tau) is not None:
        raise ValueError("tau is not critical")
    dim_of = getattr(ctx, "dim_of", None)
    if dim_of is not None and dim_of(sigma) != dim_of(tau) + 1:
        raise ValueError("dim(sigma) must equal dim(tau) + 1")
    paths, direct = alternating_paths_from(sigma, ctx, (tau,))
    plist = paths[tau]
    value = direct.get(tau, 0) + sum(path_weight(p, ctx) for p in plist)
    if not census:
        return value, None
    return value, _build_census(plist, ctx)


def _reachable_to(targets, cx, matching, d):
    """Cells of dims d-1, d from which some target is reachable in the matched digraph."""
    cofacets = defaultdict(list)
    for cell in cx.cells[d]:
        down = matching.down.get(cell)
        for f, _ in cx.boundary[cell]:
            if f != down:
                cofacets[f].append(cell)
    reach = set(targets)
    queue = deque(targets)
    while queue:
        f = queue.popleft()
        for u in cofacets.get(f, ()):
            if u not in reach:
                reach.add(u)
                queue.append(u)
            a = matching.down.get(u)
            if a is not None and a not in reach:
                reach.add(a)
                queue.append(a)
    return reach


def morse_complex(cx, matching, certificate, with_census=False):
    """The chain complex on critical cells with alternating-path incidences.

    Requires the acyclicity certificate produced by validate_acyclic; its
    homology equals the homology of the underlying complex.

    Returns (IntegerChainComplex, censuses) where censuses maps
    (sigma, tau) -> PathCensus when with_census is set (else empty dict).
    """
    if certificate is None:
        raise ValueError("matching must be validated acyclic first")
    certificate.check_matches(matching)
    ctx = ComplexMatchContext(cx, matching)
    crit = {d: tuple(matching.critical.get(d, ())) for d in range(max(cx.cells) + 1)}
    bases = {d: crit[d] for d in range(max(cx.cells) + 1)}
    index = {d: {cell: i for i, cell in enumerate(cells)} for d, cells in bases.items()}
    mats = {}
    censuses = {}
    for d in range(1, max(cx.cells) + 1):
        entries = {}
        targets = set(bases[d - 1])
        if targets and bases[d]:
            reach = _reachable_to(targets, cx, matching, d)
            for j, sigma in enumerate(bases[d]):
                paths, direct = alternating_paths_from(sigma, ctx, targets, reachable=reach)
                acc = dict(direct)
                for tau, plist in paths.items():
                    if plist:
                        acc[tau] = acc.get(tau, 0) + sum(path_weight(p, ctx) for p in plist)
                    if with_census:
                        censuses[(sigma, tau)] = _build_census(plist, ctx)
                for tau, v in acc.items():
                    if v:
                        entries[(index[d - 1][tau], j)] = v
        mats[d] = SparseIntMatrix(len(bases[d - 1]), len(bases[d]), entries)
    icc = IntegerChainComplex(bases, mats)
    icc.check_boundary_squared()
    return icc, censuses
