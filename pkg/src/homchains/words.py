"""Multiset permutations, descent statistics, and parenthesized cell words.

Positions are 1-based throughout.  A cell of the maximal-chain complex of a
product of chains is a word over {1, ..., n} (letter j appearing i_j times)
together with disjoint joined pairs of adjacent positions, each pair holding
a strictly descending pair of letters.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import NamedTuple

from .posets import CapExceeded

DEFAULT_CAP = 10_000_000


@dataclass(frozen=True)
class ChainSpec:
    """Nondecreasing positive chain lengths (i_1, ..., i_n)."""

    i: tuple

    def __post_init__(self):
        object.__setattr__(self, "i", tuple(int(v) for v in self.i))
        if not self.i:
            raise ValueError("empty chain spec")
        if any(v < 1 for v in self.i):
            raise ValueError("chain lengths must be positive")
        if any(a > b for a, b in zip(self.i, self.i[1:])):
            raise ValueError("chain lengths must be nondecreasing")

    @property
    def n(self):
        return len(self.i)

    @property
    def ell(self):
        return sum(self.i)

    def multinomial(self):
        out = math.factorial(self.ell)
        for v in self.i:
            out //= math.factorial(v)
        return out

    def sorted_word(self):
        return tuple(j for j, v in enumerate(self.i, start=1) for _ in range(v))

    def __str__(self):
        return ",".join(str(v) for v in self.i)


def as_spec(spec):
    if isinstance(spec, ChainSpec):
        return spec
    return ChainSpec(tuple(spec))


class CellWord(NamedTuple):
    """A parenthesized multiset permutation: word plus left endpoints of joined pairs."""

    word: tuple
    pairs: tuple

    @property
    def dim(self):
        return len(self.pairs)

    def render(self):
        return render_cellword(self)


def cellword(word, pairs=()):
    """Validated CellWord constructor."""
    word = tuple(int(x) for x in word)
    pairs = tuple(sorted(int(p) for p in pairs))
    ell = len(word)
    prev = None
    for p in pairs:
        if not 1 <= p <= ell - 1:
            raise ValueError(f"pair position {p} out of range")
        if prev is not None and p - prev < 2:
            raise ValueError(f"pairs at {prev} and {p} overlap")
        if not word[p - 1] > word[p]:
            raise ValueError(f"pair at {p} is not strictly descending")
        prev = p
    return CellWord(word, pairs)


def check_content(cw, spec):
    spec = as_spec(spec)
    counts = [0] * (spec.n + 1)
    for x in cw.word:
        if not 1 <= x <= spec.n:
            raise ValueError(f"letter {x} outside alphabet 1..{spec.n}")
        counts[x] += 1
    if tuple(counts[1:]) != spec.i:
        raise ValueError("word content does not match the chain spec")
    return cw


def _render_letter(x):
    return str(x) if x <= 9 else f"[{x}]"


def render_cellword(cw):
    out = []
    pairset = set(cw.pairs)
    p = 1
    ell = len(cw.word)
    while p <= ell:
        if p in pairset:
            out.append("(" + _render_letter(cw.word[p - 1]) + _render_letter(cw.word[p]) + ")")
            p += 2
        else:
            out.append(_render_letter(cw.word[p - 1]))
            p += 1
    return "".join(out)


_TOKEN = re.compile(r"\[(\d+)\]|(\d)|(\()|(\))")


def parse_cellword(s):
    """Inverse of render_cellword, e.g. '3(51)42' or '(21)1(32)344'."""
    letters = []
    pairs = []
    open_at = None
    pos = 0
    for m in _TOKEN.finditer(s):
        if m.group(1) or m.group(2):
            letters.append(int(m.group(1) or m.group(2)))
            pos += 1
        elif m.group(3):
            if open_at is not None:
                raise ValueError("nested parenthesis")
            open_at = pos + 1
        else:
            if open_at is None or pos - open_at != 1:
                raise ValueError("parenthesis must enclose exactly two letters")
            pairs.append(open_at)
            open_at = None
    if open_at is not None:
        raise ValueError("unclosed parenthesis")
    if sum(1 for c in s if not c.isspace()) != sum(len(_render_letter(x)) for x in letters) + 2 * len(pairs):
        raise ValueError(f"cannot parse cell word {s!r}")
    return cellword(letters, pairs)


def release(cw, t, order):
    """Release the t-th joined pair (1-based) in the given order ('alpha' or 'beta').

    The beta face keeps the descending arrangement (same underlying word);
    the alpha face swaps the two entries into ascending order.
    """
    if not 1 <= t <= len(cw.pairs):
        raise ValueError(f"no joined pair #{t}")
    p = cw.pairs[t - 1]
    rest = cw.pairs[:t - 1] + cw.pairs[t:]
    if order == "beta":
        return CellWord(cw.word, rest)
    if order == "alpha":
        w = list(cw.word)
        w[p - 1], w[p] = w[p], w[p - 1]
        return CellWord(tuple(w), rest)
    raise ValueError(f"order must be 'alpha' or 'beta', not {order!r}")


# -- descents -------------------------------------------------------------


def descent_set(word):
    """Positions j (1-based) with word[j] > word[j+1]."""
    return frozenset(j for j in range(1, len(word)) if word[j - 1] > word[j])


@dataclass(frozen=True)
class DescentDecomposition:
    """Des(w) as maximal runs {m_t, ..., m_t + q_t} of consecutive descents."""

    intervals: tuple
    valid: bool

    @property
    def starts(self):
        return tuple(m for m, _ in self.intervals)


def decompose_descents(word):
    """Maximal-run decomposition; valid iff every run length q_t is 1 or 2 mod 3."""
    des = sorted(descent_set(word))
    intervals = []
    k = 0
    while k < len(des):
        m = des[k]
        q = 0
        while k + 1 < len(des) and des[k + 1] == des[k] + 1:
            q += 1
            k += 1
        intervals.append((m, q))
        k += 1
    valid = all(q % 3 != 0 for _, q in intervals)
    return DescentDecomposition(tuple(intervals), valid)


def critical_dimension(dec):
    """Sum of ceil(q_t / 3) over the runs of a valid decomposition."""
    if not dec.valid:
        raise ValueError("descent decomposition is not of critical form")
    return sum(-(-q // 3) for _, q in dec.intervals)


def critical_cellword_from_word(word):
    """The critical cell with the given underlying word: pairs at m_t + 3j + 1.

    Requires a valid descent decomposition; within each run the joined pairs
    sit at positions (m_t + 3j + 1, m_t + 3j + 2), leaving every third entry
    free, matching the structure forced by the matching algorithm.
    """
    dec = decompose_descents(word)
    if not dec.valid:
        raise ValueError("word has no critical cell: invalid descent decomposition")
    pairs = []
    for m, q in dec.intervals:
        for j in range(-(-q // 3)):
            pairs.append(m + 3 * j + 1)
    return cellword(word, pairs)


def is_critical_word(word):
    return decompose_descents(word).valid


# -- enumeration ----------------------------------------------------------


def enumerate_words(spec, cap=DEFAULT_CAP):
    """All multiset permutations for the spec, lexicographically."""
    spec = as_spec(spec)
    if spec.multinomial() > cap:
        raise CapExceeded(f"{spec.multinomial()} words exceed the cap {cap}")
    counts = list(spec.i)
    n = spec.n
    ell = spec.ell
    prefix = []

    def gen():
        if len(prefix) == ell:
            yield tuple(prefix)
            return
        for letter in range(1, n + 1):
            if counts[letter - 1]:
                counts[letter - 1] -= 1
                prefix.append(letter)
                yield from gen()
                prefix.pop()
                counts[letter - 1] += 1

    yield from gen()


def _pair_placements(descents):
    """All tuples of pairwise non-adjacent positions drawn from the sorted descent list."""
    out = [()]
    k = len(descents)

    def rec(start, acc):
        for idx in range(start, k):
            p = descents[idx]
            if acc and p - acc[-1] < 2:
                continue
            acc.append(p)
            out.append(tuple(acc))
            rec(idx + 1, acc)
            acc.pop()

    rec(0, [])
    return out


def enumerate_cellwords(spec, cap=DEFAULT_CAP):
    """All cells of Hom(spec): every word with every non-overlapping descent pairing."""
    spec = as_spec(spec)
    total = 0
    for w in enumerate_words(spec, cap=cap):
        des = sorted(descent_set(w))
        placements = _pair_placements(des)
        total += len(placements)
        if total > cap:
            raise CapExceeded(f"cell enumeration exceeds the cap {cap}")
        for pairs in placements:
            yield CellWord(w, pairs)


def count_cellwords(spec, cap=DEFAULT_CAP):
    spec = as_spec(spec)
    total = 0
    for w in enumerate_words(spec, cap=cap):
        des = sorted(descent_set(w))
        total += len(_pair_placements(des))
        if total > cap:
            raise CapExceeded(f"cell count exceeds the cap {cap}")
    return total


# -- critical cells of Hom(r, s, t) ---------------------------------------


def count_critical_rst(r, s, t, k):
    """Number of critical k-cells in Hom(r, s, t): C(r,k) C(s,k) C(t,k)."""
    if not (0 <= k <= r <= s <= t):
        raise ValueError("need 0 <= k <= r <= s <= t")
    return math.comb(r, k) * math.comb(s, k) * math.comb(t, k)


def rst_cell_from_selections(r, s, t, ones, twos, threes):
    """The critical cell built from k-element selections of 1's, 2's and 3's.

    The n-th selected 1 and 2 form the n-th joined pair (2 1); the n-th
    selected 3 is the free entry immediately before that pair; unselected
    letters fill the weakly increasing free runs in occurrence order.
    """
    ones, twos, threes = tuple(sorted(ones)), tuple(sorted(twos)), tuple(sorted(threes))
    k = len(ones)
    if not (len(twos) == len(threes) == k):
        raise ValueError("selections must have equal size")
    for sel, bound in ((ones, r), (twos, s), (threes, t)):
        if sel and not (1 <= sel[0] and sel[-1] <= bound):
            raise ValueError("selection index out of range")
        if len(set(sel)) != len(sel):
            raise ValueError("repeated selection index")
    word = []
    pairs = []
    a0 = b0 = c0 = 0
    for a, b, c in zip(ones, twos, threes):
        word += [1] * (a - a0 - 1) + [2] * (b - b0 - 1) + [3] * (c - c0)
        pairs.append(len(word) + 1)
        word += [2, 1]
        a0, b0, c0 = a, b, c
    word += [1] * (r - a0) + [2] * (s - b0) + [3] * (t - c0)
    return cellword(word, pairs)


def rst_selections_from_cell(cw):
    """Inverse of rst_cell_from_selections; requires a 3(21)-shaped critical cell."""
    word = cw.word
    ones = []
    twos = []
    threes = []
    for p in cw.pairs:
        if word[p - 1] != 2 or word[p] != 1:
            raise ValueError("joined pair is not (2 1)")
        if p < 2 or word[p - 2] != 3:
            raise ValueError("pair is not preceded by a free 3")
        twos.append(sum(1 for x in word[:p] if x == 2))
        ones.append(sum(1 for x in word[:p + 1] if x == 1))
        threes.append(sum(1 for x in word[:p - 1] if x == 3))
    return tuple(ones), tuple(twos), tuple(threes)
