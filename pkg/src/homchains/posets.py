"""Finite graded posets: chains, products, disjoint unions, ideal lattices, folds.

Elements carry dense integer ids assigned at construction; all outward
references use these ids.  Instances are immutable after construction and
safe to share across threads.
"""

from __future__ import annotations

import itertools


class CapExceeded(RuntimeError):
    """A construction or enumeration would exceed its configured size cap."""


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FinitePoset:
    """A finite poset on elements ``0..n-1`` described by its cover relations.

    ``covers`` holds pairs ``(a, b)`` with ``b`` covering ``a``.  The cover
    digraph must be acyclic and transitively irredundant; both are checked.
    """

    def __init__(self, n, covers, labels=None, chain_blocks=None):
        self.n = int(n)
        seen = set()
        for a, b in covers:
            if not (0 <= a < self.n and 0 <= b < self.n) or a == b:
                raise ValueError(f"bad cover ({a}, {b})")
            if (a, b) in seen:
                raise ValueError(f"duplicate cover ({a}, {b})")
            seen.add((a, b))
        self.covers = tuple(sorted(seen))
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != self.n:
                raise ValueError("labels length mismatch")
        self.labels = labels
        # When this poset is a disjoint union of chains, chain_blocks lists
        # the element ids of each chain bottom-to-top (the block order used
        # as the canonical linear extension downstream).
        self.chain_blocks = chain_blocks

        up = [[] for _ in range(self.n)]
        down = [[] for _ in range(self.n)]
        for a, b in self.covers:
            up[a].append(b)
            down[b].append(a)
        self.up_covers = tuple(tuple(sorted(v)) for v in up)
        self.down_covers = tuple(tuple(sorted(v)) for v in down)

        order = self._toposort()
        above = [0] * self.n
        for x in reversed(order):
            m = 0
            for b in self.up_covers[x]:
                m |= above[b] | (1 << b)
            above[x] = m
        below = [0] * self.n
        for x in order:
            m = 0
            for a in self.down_covers[x]:
                m |= below[a] | (1 << a)
            below[x] = m
        self._above = tuple(above)
        self._below = tuple(below)
        for a, b in self.covers:
            if above[a] & below[b]:
                raise ValueError(f"({a}, {b}) is not a cover: an element lies between")

    def _toposort(self):
        indeg = [len(self.down_covers[x]) for x in range(self.n)]
        ready = sorted(x for x in range(self.n) if indeg[x] == 0)
        out = []
        import heapq

        heapq.heapify(ready)
        while ready:
            x = heapq.heappop(ready)
            out.append(x)
            for b in self.up_covers[x]:
                indeg[b] -= 1
                if indeg[b] == 0:
                    heapq.heappush(ready, b)
        if len(out) != self.n:
            raise ValueError("cover relation contains a cycle")
        self._linext = tuple(out)
        return out

    # -- order queries ----------------------------------------------------

    def above(self, x):
        """Bitmask of all elements strictly above x."""
        return self._above[x]

    def below(self, x):
        return self._below[x]

    def lt(self, a, b):
        return bool(self._above[a] >> b & 1)

    def le(self, a, b):
        return a == b or self.lt(a, b)

    def minimals(self):
        return tuple(x for x in range(self.n) if not self.down_covers[x])

    def maximals(self):
        return tuple(x for x in range(self.n) if not self.up_covers[x])

    def linear_extension(self):
        """A fixed linear extension (smallest-id-first topological order)."""
        return self._linext

    def label(self, x):
        return self.labels[x] if self.labels is not None else str(x)

    @property
    def is_chain_poset(self):
        """True when the ids 0..n-1 form a chain in that order."""
        return self.covers == tuple((i, i + 1) for i in range(self.n - 1))

    def maximal_chains(self, cap=None):
        """All maximal chains, as tuples of ids, by DFS from the minimal elements."""
        chains = []
        up = self.up_covers

        def dfs(x, acc):
            if not up[x]:
                chains.append(tuple(acc))
                if cap is not None and len(chains) > cap:
                    raise CapExceeded(f"more than {cap} maximal chains")
                return
            for b in up[x]:
                acc.append(b)
                dfs(b, acc)
                acc.pop()

        for m in self.minimals():
            dfs(m, [m])
        return chains

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, covers={len(self.covers)})"


class GradedPoset(FinitePoset):
    """A finite poset with a rank function making every maximal chain the same length.

    Validated on construction: covers raise rank by exactly one, all minimal
    elements have rank 0 and all maximal elements share the top rank.
    """

    def __init__(self, n, covers, rank, labels=None, chain_blocks=None,
                 chain_spec=None, ideal_masks=None, base=None):
        super().__init__(n, covers, labels=labels, chain_blocks=chain_blocks)
        self.rank = tuple(int(r) for r in rank)
        if len(self.rank) != self.n:
            raise ValueError("rank length mismatch")
        if any(r < 0 for r in self.rank):
            raise ValueError("ranks must be nonnegative")
        for a, b in self.covers:
            if self.rank[b] != self.rank[a] + 1:
                raise ValueError(f"cover ({a}, {b}) does not raise rank by one")
        if self.n:
            if any(self.rank[x] != 0 for x in self.minimals()):
                raise ValueError("not graded: a minimal element has nonzero rank")
            top = max(self.rank)
            if any(self.rank[x] != top for x in self.maximals()):
                raise ValueError("not graded: maximal elements of unequal rank")
        # chain_spec tags a product of chains (factor lengths, in factor order).
        self.chain_spec = chain_spec
        # ideal_masks maps lattice element -> bitmask of base-poset elements.
        self.ideal_masks = ideal_masks
        self.base = base

    @property
    def top_rank(self):
        return max(self.rank) if self.n else 0


# -- constructors ---------------------------------------------------------


def chain(m):
    """The chain C_m = 0 < 1 < ... < m, with rank(i) = i."""
    if m < 0:
        raise ValueError("chain length must be nonnegative")
    return GradedPoset(
        m + 1,
        [(i, i + 1) for i in range(m)],
        rank=range(m + 1),
        labels=[str(i) for i in range(m + 1)],
        chain_blocks=(tuple(range(m + 1)),),
        chain_spec=(m,) if m >= 1 else None,
    )


def antichain(k):
    """k pairwise incomparable elements."""
    return FinitePoset(k, [], labels=[str(i) for i in range(k)],
                       chain_blocks=tuple((i,) for i in range(k)))


def product(ps):
    """Componentwise-order product of graded posets; rank of a tuple is the rank sum."""
    ps = list(ps)
    if not ps:
        raise ValueError("product of an empty list of posets")
    for p in ps:
        if not isinstance(p, GradedPoset):
            raise ValueError("product factors must be graded posets")
    sizes = [p.n for p in ps]
    k = len(ps)
    strides = [1] * k
    for j in range(k - 2, -1, -1):
        strides[j] = strides[j + 1] * sizes[j + 1]
    n = strides[0] * sizes[0]
    ranks = [0] * n
    labels = [None] * n
    covers = []
    for tup in itertools.product(*(range(s) for s in sizes)):
        i = sum(t * strides[j] for j, t in enumerate(tup))
        ranks[i] = sum(ps[j].rank[t] for j, t in enumerate(tup))
        labels[i] = "(" + ",".join(ps[j].label(t) for j, t in enumerate(tup)) + ")"
        for j, p in enumerate(ps):
            for b in p.up_covers[tup[j]]:
                covers.append((i, i + (b - tup[j]) * strides[j]))
    spec = None
    if all(p.is_chain_poset and p.n >= 2 for p in ps):
        spec = tuple(p.n - 1 for p in ps)
    return GradedPoset(n, covers, rank=ranks, labels=labels, chain_spec=spec)


def product_of_chains(lengths):
    """The lattice C_{i_1} x ... x C_{i_n} for positive lengths i_j."""
    lengths = tuple(int(v) for v in lengths)
    if not lengths or any(v < 1 for v in lengths):
        raise ValueError("chain lengths must be positive")
    return product([chain(v) for v in lengths])


def disjoint_union(ps):
    """Side-by-side union with no relations between components (not rank-validated)."""
    ps = list(ps)
    n = sum(p.n for p in ps)
    covers = []
    labels = []
    blocks = []
    off = 0
    for p in ps:
        covers.extend((a + off, b + off) for a, b in p.covers)
        labels.extend(p.label(x) for x in range(p.n))
        blocks.append(tuple(range(off, off + p.n)))
        off += p.n
    all_chains = all(p.is_chain_poset for p in ps)
    return FinitePoset(n, covers, labels=labels,
                       chain_blocks=tuple(blocks) if all_chains else None)


def _render_ideal(positions):
    if not positions:
        return "{}"
    if max(positions) <= 9:
        return "".join(str(p) for p in positions)
    return "{" + ",".join(str(p) for p in positions) + "}"


def ideal_lattice(P, max_base=20):
    """The distributive lattice J(P) of lower order ideals of P, ordered by inclusion.

    Elements are materialized as bitsets over P and listed in graded
    lexicographic order under the canonical linear extension of P; the rank
    of an ideal is its cardinality.
    """
    if P.n > max_base:
        raise CapExceeded(f"|P| = {P.n} exceeds the ideal-lattice guard {max_base}")
    ext = P.linear_extension()
    pos = {el: i for i, el in enumerate(ext)}
    down_masks = [0] * P.n
    for x in range(P.n):
        for a in P.down_covers[x]:
            down_masks[x] |= 1 << a
    levels = [[0]]
    for _size in range(P.n):
        nxt = set()
        for I in levels[-1]:
            for x in range(P.n):
                if not (I >> x) & 1 and down_masks[x] & I == down_masks[x]:
                    nxt.add(I | (1 << x))
        levels.append(sorted(nxt, key=lambda I: tuple(sorted(pos[e] for e in _bits(I)))))
    masks = [I for level in levels for I in level]
    index = {I: i for i, I in enumerate(masks)}
    covers = []
    for J in masks:
        for x in _bits(J):
            if P.above(x) & J == 0:  # x maximal in J, so J - x is an ideal
                covers.append((index[J ^ (1 << x)], index[J]))
    ranks = [bin(I).count("1") for I in masks]
    labels = [_render_ideal(tuple(sorted(pos[e] + 1 for e in _bits(I)))) for I in masks]
    spec = None
    if P.chain_blocks is not None and all(len(b) >= 1 for b in P.chain_blocks):
        spec = tuple(len(b) for b in P.chain_blocks)
    return GradedPoset(len(masks), covers, rank=ranks, labels=labels,
                       chain_spec=spec, ideal_masks=tuple(masks), base=P)


# -- folds ----------------------------------------------------------------


def find_folds(P):
    """All ordered pairs (x, y), x != y, with cover-up-set and cover-down-set containment.

    For any reported pair, P - x is a fold of P.
    """
    out = []
    up = [set(v) for v in P.up_covers]
    down = [set(v) for v in P.down_covers]
    for x in range(P.n):
        for y in range(P.n):
            if y != x and up[x] <= up[y] and down[x] <= down[y]:
                out.append((x, y))
    return out


def delete_element(P, x):
    """The induced subposet P - x with dense ids; returns (poset, old_id -> new_id)."""
    if not 0 <= x < P.n:
        raise ValueError(f"no element {x}")
    keep = [i for i in range(P.n) if i != x]
    remap = {old: new for new, old in enumerate(keep)}
    above = []
    for a in keep:
        m = 0
        for b in _bits(P.above(a)):
            if b != x:
                m |= 1 << remap[b]
        above.append(m)
    below = [0] * len(keep)
    for a, m in enumerate(above):
        for b in _bits(m):
            below[b] |= 1 << a
    covers = []
    for a in range(len(keep)):
        for b in _bits(above[a]):
            if above[a] & below[b] == 0:
                covers.append((a, b))
    labels = [P.label(i) for i in keep] if P.labels is not None else None
    return FinitePoset(len(keep), covers, labels=labels), remap


def is_chain(P):
    """True when P is a single totally ordered chain."""
    if P.n <= 1:
        return True
    if len(P.covers) != P.n - 1:
        return False
    return all(len(P.up_covers[x]) <= 1 and len(P.down_covers[x]) <= 1
               for x in range(P.n)) and len(P.minimals()) == 1


def fold_collapse_sequence(P):
    """A sequence of fold removals reducing P to a chain, found by backtracking search.

    Returns a list of steps (x_label, y_label, poset_after); raises ValueError
    if no fold sequence reaches a chain.
    """
    steps = []

    def rec(cur):
        if is_chain(cur):
            return True
        for x, y in find_folds(cur):
            nxt, _ = delete_element(cur, x)
            steps.append((cur.label(x), cur.label(y), nxt))
            if rec(nxt):
                return True
            steps.pop()
        return False

    if not rec(P):
        raise ValueError("no fold sequence reduces this poset to a chain")
    return steps


# -- text format ----------------------------------------------------------


def parse_poset_text(text):
    """Parse the CLI poset format: lines `id rank` for elements, then `lower upper` covers.

    Element ids must appear in order 0, 1, 2, ...; the cover section starts at
    the first line whose leading token is an already-defined id.
    """
    ranks = []
    covers = []
    in_covers = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected two integers")
        a, b = int(parts[0]), int(parts[1])
        if not in_covers and a == len(ranks):
            ranks.append(b)
            continue
        in_covers = True
        if not (0 <= a < len(ranks) and 0 <= b < len(ranks)):
            raise ValueError(f"line {lineno}: cover references undefined element")
        covers.append((a, b))
    return GradedPoset(len(ranks), covers, rank=ranks)


def format_poset_text(P):
    lines = [f"{x} {P.rank[x]}" for x in range(P.n)]
    lines += [f"{a} {b}" for a, b in P.covers]
    return "\n".join(lines) + "\n"
