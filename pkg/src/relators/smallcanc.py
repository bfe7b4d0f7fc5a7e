"""Piece enumeration and metric small-cancellation checking.

A *piece* of a relator tuple is a reduced word occurring as a cyclic subword
at two distinct positions, where a position is (relator, orientation, cyclic
offset): occurrences inside inverses and self-overlaps at distinct offsets
all count.  One deliberate boundary case: an occurrence whose length equals
the whole relator is counted once per oriented copy regardless of offset
(every rotation of the full word "occurs" at every offset, which would
otherwise make any relator a piece of itself).

The C'(lambda) check demands |w| < lambda * |r| for every piece w and *both*
relators r carrying the two occurrences; lambda is an exact rational and the
comparison is done in integers.

The search runs on a suffix array over the doubled oriented relator texts
(with distinct separators), so relator tuples with hundreds of thousands of
letters stay tractable; the quadratic window scan it replaces is kept as a
test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .words import CyclicWord, Word, letter_order


@dataclass(frozen=True)
class PieceLocation:
    """One occurrence: relator index, whether it lies in the inverse copy,
    and the cyclic start offset within that oriented copy."""

    relator: int
    inverted: bool
    offset: int


@dataclass(frozen=True)
class PieceReport:
    longest_piece_length: int
    subword: Word | None
    location_a: PieceLocation | None
    location_b: PieceLocation | None

    @property
    def witness(self) -> tuple[Word, PieceLocation, PieceLocation] | None:
        if self.subword is None:
            return None
        return (self.subword, self.location_a, self.location_b)


def _suffix_array(codes: list[int]) -> list[int]:
    """Suffix array by prefix doubling on numpy lexsort; O(n log n)."""
    n = len(codes)
    if n == 0:
        return []
    arr = np.asarray(codes, dtype=np.int64)
    rank = np.unique(arr, return_inverse=True)[1].astype(np.int64)
    sa = np.argsort(rank, kind="stable")
    if int(rank[sa[-1]]) == n - 1:
        return sa.tolist()
    k = 1
    while True:
        key2 = np.full(n, -1, dtype=np.int64)
        key2[: n - k] = rank[k:]
        sa = np.lexsort((key2, rank))
        pair = np.stack([rank[sa], key2[sa]], axis=1)
        boundary = np.empty(n, dtype=np.int64)
        boundary[0] = 0
        if n > 1:
            boundary[1:] = (np.diff(pair, axis=0) != 0).any(axis=1)
        new = np.empty(n, dtype=np.int64)
        new[sa] = np.cumsum(boundary)
        rank = new
        if int(rank[sa[-1]]) == n - 1:
            return sa.tolist()
        k *= 2


def _lcp_array(codes: list[int], sa: list[int]) -> list[int]:
    """Kasai: lcp[i] = longest common prefix of suffixes sa[i-1], sa[i]."""
    n = len(sa)
    rank = [0] * n
    for i, p in enumerate(sa):
        rank[p] = i
    lcp = [0] * n
    h = 0
    for i in range(n):
        r = rank[i]
        if r > 0:
            j = sa[r - 1]
            while i + h < n and j + h < n and codes[i + h] == codes[j + h]:
                h += 1
            lcp[r] = h
            if h:
                h -= 1
        else:
            h = 0
    return lcp


def _pair_maxima(relators: Sequence[CyclicWord]):
    """For each unordered pair of oriented texts (2 per relator), the longest
    common cyclic subword length after the full-length collapsing rule, plus
    a witness offset pair.  Returns (lengths_per_text, best, witness_offsets)
    with dict keys (text_a, text_b), text = 2*relator + (1 if inverted)."""
    texts: list[tuple[int, ...]] = []
    for r in relators:
        texts.append(r.letters)
        texts.append(r.inverse().letters)
    tcount = len(texts)
    lengths = [len(t) for t in texts]

    codes: list[int] = []
    text_id: list[int] = []
    offsets: list[int] = []
    sep = -1
    for tid, t in enumerate(texts):
        doubled = t + t[: len(t) - 1]
        for off, a in enumerate(doubled):
            codes.append(letter_order(a) + 1)
            text_id.append(tid)
            offsets.append(off)
        codes.append(sep)  # distinct separators: no match spans two texts
        text_id.append(-1)
        offsets.append(-1)
        sep -= 1

    sa = _suffix_array(codes)
    lcp = _lcp_array(codes, sa)

    inf = 1 << 60
    best: dict[tuple[int, int], int] = {}
    wit: dict[tuple[int, int], tuple[int, int]] = {}
    cur = [-1] * tcount  # running min LCP since each text's last occurrence
    last_off = [-1] * tcount
    gap_min = inf
    for idx, p in enumerate(sa):
        gap_min = min(gap_min, lcp[idx])
        tid = text_id[p]
        if tid < 0 or offsets[p] >= lengths[tid]:
            continue  # separator, or a start inside the doubled tail
        off = offsets[p]
        for t in range(tcount):
            if cur[t] >= 0 and gap_min < cur[t]:
                cur[t] = gap_min
        for t in range(tcount):
            c = cur[t]
            if c <= 0:
                continue
            if t == tid:
                c = min(c, lengths[tid] - 1)
            else:
                c = min(c, lengths[t], lengths[tid])
            key = (t, tid) if t <= tid else (tid, t)
            if c > best.get(key, 0):
                best[key] = c
                wit[key] = (last_off[t], off) if t <= tid else (off, last_off[t])
        cur[tid] = inf
        last_off[tid] = off
        gap_min = inf
    return lengths, best, wit


def _location(text: int, offset: int) -> PieceLocation:
    return PieceLocation(relator=text // 2, inverted=bool(text % 2), offset=offset)


def _report_for(
    relators: Sequence[CyclicWord], key: tuple[int, int], offs: tuple[int, int], length: int
) -> PieceReport:
    a, b = key
    ra = relators[a // 2]
    oriented = ra if a % 2 == 0 else ra.inverse()
    sub = oriented.cyclic_subword(offs[0], length)
    return PieceReport(length, sub, _location(a, offs[0]), _location(b, offs[1]))


def _validate(relators: Sequence[CyclicWord]) -> None:
    if len(relators) == 0:
        raise ValueError("need at least one relator")
    rank = relators[0].rank
    if any(r.rank != rank for r in relators):
        raise ValueError("relators must share a rank")


def longest_piece(relators: Sequence[CyclicWord]) -> PieceReport:
    """Longest piece over the tuple, with a witnessing occurrence pair.

    >>> from .words import parse_cyclic_word as pc
    >>> longest_piece((pc("x1 x1 x1"),)).longest_piece_length
    2
    >>> longest_piece((pc("x1 x2"), pc("x2 x1"))).longest_piece_length
    2
    """
    _validate(relators)
    _, best, wit = _pair_maxima(relators)
    top = 0
    top_key = None
    for key in sorted(best):
        if best[key] > top:
            top = best[key]
            top_key = key
    if top_key is None:
        return PieceReport(0, None, None, None)
    return _report_for(relators, top_key, wit[top_key], top)


def check_small_cancellation(
    relators: Sequence[CyclicWord], lam: Fraction
) -> tuple[bool, PieceReport]:
    """Exact C'(lam) test: every piece shorter than lam times the length of
    each relator carrying it.  On failure the report holds a violating
    occurrence pair; on success it is the overall longest-piece report.

    >>> from .words import parse_cyclic_word as pc
    >>> check_small_cancellation((pc("x1 x2 X1 X2"),), Fraction(1, 6))[0]
    False
    >>> check_small_cancellation((pc("x1 x2 X1 X2"),), Fraction(1, 3))[0]
    True
    """
    lam = Fraction(lam)
    if not (0 < lam <= 1):
        raise ValueError("lambda must satisfy 0 < lambda <= 1")
    _validate(relators)
    lengths, best, wit = _pair_maxima(relators)
    worst_key = None
    worst_len = -1
    for key in sorted(best):
        pair_min = min(lengths[key[0]], lengths[key[1]])
        # violation: piece length * den >= num * relator length, exactly
        if best[key] * lam.denominator >= lam.numerator * pair_min:
            if best[key] > worst_len:
                worst_len = best[key]
                worst_key = key
    if worst_key is not None:
        return False, _report_for(relators, worst_key, wit[worst_key], worst_len)
    return True, longest_piece(relators)
