"""Permutations of ``range(n)`` in one-line, Lehmer and single-cycle form.

All three representations are immutable tuple subclasses, so they hash,
compare and index like tuples. Constructors validate their input; the
module-internal ``_trusted`` helpers skip validation for values that are
correct by construction.
"""

from __future__ import annotations

import hashlib
import os
from bisect import bisect_left, insort

from .errors import (
    EntropyExhausted,
    InvalidCodeword,
    InvalidPermutation,
    NotSingleCycle,
    OrderMismatch,
)

MAX_ORDER = 1 << 16


def _check_order(n):
    if not 1 <= n <= MAX_ORDER:
        raise ValueError(f"order must be in [1, {MAX_ORDER}], got {n}")


class Permutation(tuple):
    """One-line notation: ``p[j]`` is the symbol at position ``j``."""

    __slots__ = ()

    def __new__(cls, seq):
        self = tuple.__new__(cls, seq)
        _check_order(len(self))
        seen = bytearray(len(self))
        for v in self:
            if not (isinstance(v, int) and 0 <= v < len(self)) or seen[v]:
                raise InvalidPermutation(f"not a permutation of range({len(self)}): {tuple(self)!r}")
            seen[v] = 1
        return self

    @classmethod
    def _trusted(cls, seq):
        return tuple.__new__(cls, seq)

    @classmethod
    def identity(cls, n):
        _check_order(n)
        return cls._trusted(range(n))

    @property
    def order(self):
        return len(self)

    def __repr__(self):
        return f"Permutation({' '.join(map(str, self))})"


class LehmerCode(tuple):
    """Lehmer codeword; digit ``i`` lies in ``[0, n - i)``, so the last digit is 0.

    Read big end first, the digits are also a factoradic numeral whose
    digit ``i`` has place value ``(n - 1 - i)!``.
    """

    __slots__ = ()

    def __new__(cls, digits):
        self = tuple.__new__(cls, digits)
        n = len(self)
        _check_order(n)
        for i, d in enumerate(self):
            if not (isinstance(d, int) and 0 <= d < n - i):
                raise InvalidCodeword(f"digit {i} = {d!r} outside [0, {n - i})")
        return self

    @classmethod
    def _trusted(cls, digits):
        return tuple.__new__(cls, digits)

    @classmethod
    def zeros(cls, n):
        _check_order(n)
        return cls._trusted((0,) * n)

    @property
    def order(self):
        return len(self)

    def __repr__(self):
        return f"LehmerCode({' '.join(map(str, self))})"


class SingleCycle(tuple):
    """A permutation with exactly one cycle, stored as its cyclic sequence.

    The stored rotation always starts at symbol 0, so ``c[j]`` is the
    symbol ``j`` steps along the cycle from 0 and equality is structural.
    """

    __slots__ = ()

    def __new__(cls, cycle):
        seq = tuple(cycle)
        n = len(seq)
        _check_order(n)
        seen = bytearray(n)
        for v in seq:
            if not (isinstance(v, int) and 0 <= v < n) or seen[v]:
                raise InvalidPermutation(f"not a cycle over range({n}): {seq!r}")
            seen[v] = 1
        return cls._trusted(_rotate_to_zero(seq))

    @classmethod
    def _trusted(cls, seq):
        return tuple.__new__(cls, seq)

    @property
    def order(self):
        return len(self)

    def __repr__(self):
        return f"SingleCycle(({' '.join(map(str, self))}))"


def _rotate_to_zero(seq):
    k = seq.index(0)
    return seq[k:] + seq[:k]


def same_cycle(a, b):
    """Rotation-insensitive equality of two cyclic sequences."""
    a, b = tuple(a), tuple(b)
    if len(a) != len(b) or 0 not in a or 0 not in b:
        return False
    return _rotate_to_zero(a) == _rotate_to_zero(b)


def oneline_to_lehmer(p):
    """Lehmer codeword of ``p``.

    Symbols are placed from the largest down; the digit of symbol ``i``
    counts the larger symbols already standing to its left.
    """
    n = len(p)
    pos = [0] * n
    for j, v in enumerate(p):
        pos[v] = j
    placed = []
    digits = [0] * n
    for i in range(n - 1, -1, -1):
        digits[i] = bisect_left(placed, pos[i])
        insort(placed, pos[i])
    return LehmerCode._trusted(digits)


def lehmer_to_oneline(w):
    """Rebuild the permutation by inserting symbols ``n-1, ..., 0`` at their digit offsets."""
    seq = []
    for i in range(len(w) - 1, -1, -1):
        seq.insert(w[i], i)
    return Permutation._trusted(seq)


def _check_same_order(a, b):
    if len(a) != len(b):
        raise OrderMismatch(f"orders differ: {len(a)} vs {len(b)}")


def compose(a, b):
    """``(a o b)[j] = a[b[j]]``."""
    _check_same_order(a, b)
    return Permutation._trusted([a[x] for x in b])


def invert(a):
    inv = [0] * len(a)
    for j, v in enumerate(a):
        inv[v] = j
    return Permutation._trusted(inv)


def cycle_count(a):
    """Number of disjoint cycles, fixed points included."""
    n = len(a)
    seen = bytearray(n)
    count = 0
    for start in range(n):
        if seen[start]:
            continue
        count += 1
        x = start
        while not seen[x]:
            seen[x] = 1
            x = a[x]
    return count


def is_single_cycle(a):
    n = len(a)
    x = a[0]
    steps = 1
    while x != 0:
        x = a[x]
        steps += 1
    return steps == n


def cayley_distance(a, b):
    """Minimum number of transpositions taking ``b`` to ``a``."""
    _check_same_order(a, b)
    n = len(a)
    # cycles of a o b^-1, computed without materialising the product
    b_inv = [0] * n
    for j, v in enumerate(b):
        b_inv[v] = j
    seen = bytearray(n)
    cycles = 0
    for start in range(n):
        if seen[start]:
            continue
        cycles += 1
        x = start
        while not seen[x]:
            seen[x] = 1
            x = a[b_inv[x]]
    return n - cycles


def single_cycle_to_oneline(c):
    n = len(c)
    p = [0] * n
    for j in range(n):
        p[c[j]] = c[(j + 1) % n]
    return Permutation._trusted(p)


def oneline_to_single_cycle(p):
    """Cyclic sequence of ``p`` starting at 0; raises if ``p`` has several cycles."""
    n = len(p)
    seq = [0]
    x = p[0]
    while x != 0:
        seq.append(x)
        x = p[x]
    if len(seq) != n:
        raise NotSingleCycle(f"permutation has {cycle_count(p)} cycles")
    return SingleCycle._trusted(seq)


class SeededStream:
    """Deterministic byte stream from SHAKE-256 in counter mode.

    For tests and reproducible fixtures only: anyone holding the seed
    can regenerate every key drawn from it.
    """

    _BLOCK = 64

    def __init__(self, seed: bytes):
        self._seed = bytes(seed)
        self._counter = 0
        self._buf = b""

    def __call__(self, n: int) -> bytes:
        while len(self._buf) < n:
            h = hashlib.shake_256(self._seed + self._counter.to_bytes(8, "big"))
            self._buf += h.digest(self._BLOCK)
            self._counter += 1
        out, self._buf = self._buf[:n], self._buf[n:]
        return out


class LimitedStream:
    """Wraps a byte source and stops after ``limit`` bytes."""

    def __init__(self, source, limit):
        self._source = source
        self.remaining = limit

    def __call__(self, n):
        take = min(n, self.remaining)
        self.remaining -= take
        return self._source(take) if take else b""


def random_digit(bound, entropy=os.urandom):
    """Uniform integer in ``[0, bound)`` by rejection on the covering power of two."""
    if bound == 1:
        return 0
    bits = (bound - 1).bit_length()
    nbytes = (bits + 7) // 8
    mask = (1 << bits) - 1
    while True:
        raw = entropy(nbytes)
        if len(raw) < nbytes:
            raise EntropyExhausted("entropy source returned too few bytes")
        v = int.from_bytes(raw, "big") & mask
        if v < bound:
            return v


def random_lehmer(n, entropy=os.urandom):
    """Uniformly random codeword of order ``n``; digits are drawn big end first."""
    _check_order(n)
    return LehmerCode._trusted([random_digit(n - i, entropy) for i in range(n)])


def random_permutation(n, entropy=os.urandom):
    return lehmer_to_oneline(random_lehmer(n, entropy))
