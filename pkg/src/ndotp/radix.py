"""Conversions between bit strings, integers and factoradic codewords.

Python's ``int`` is the arbitrary-precision natural throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

from .errors import CapacityExceeded, DecodeOverflow
from .perm import LehmerCode, _check_order


@lru_cache(maxsize=64)
def place_values(n):
    """Factorial place values ``(n-1)!, (n-2)!, ..., 0!``, big end first."""
    values = [1] * n
    for i in range(n - 2, -1, -1):
        values[i] = values[i + 1] * (n - 1 - i)
    return tuple(values)


def capacity_bits(n):
    """Largest ``b`` with ``2**b <= n!``."""
    _check_order(n)
    return factorial(n).bit_length() - 1


def int_to_factoradic(v, n):
    """Digits of ``v`` in the factoradic system of length ``n``."""
    _check_order(n)
    if v < 0:
        raise ValueError("value must be nonnegative")
    if v >= factorial(n):
        raise CapacityExceeded(f"{v} does not fit in {n} factoradic digits")
    digits = []
    for pv in place_values(n):
        q, v = divmod(v, pv)
        digits.append(q)
    return LehmerCode._trusted(digits)


def factoradic_to_int(w):
    return sum(d * pv for d, pv in zip(w, place_values(len(w))))


@dataclass(frozen=True)
class BitMessage:
    """A bit string of ``length`` bits; ``value`` reads it most significant bit first."""

    value: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("length must be nonnegative")
        if not 0 <= self.value < (1 << self.length) or (self.length == 0 and self.value):
            raise ValueError(f"value does not fit in {self.length} bits")

    @classmethod
    def from_bitstring(cls, s):
        s = s.strip()
        if s and set(s) - {"0", "1"}:
            raise ValueError(f"not a bit string: {s!r}")
        return cls(int(s, 2) if s else 0, len(s))

    @classmethod
    def from_bytes(cls, data):
        return cls(int.from_bytes(data, "big"), 8 * len(data))

    def to_bitstring(self):
        return format(self.value, f"0{self.length}b") if self.length else ""

    def to_bytes(self):
        """Big-endian bytes, zero-padded at the most significant end to whole bytes."""
        return self.value.to_bytes((self.length + 7) // 8, "big")


def bits_to_codeword(m, n):
    """Codeword of order ``n`` with the same numeric value as ``m``."""
    cap = capacity_bits(n)
    if m.length > cap:
        raise CapacityExceeded(f"{m.length} bits exceed the {cap}-bit capacity of order {n}")
    return int_to_factoradic(m.value, n)


def codeword_to_bits(w, length):
    v = factoradic_to_int(w)
    if v >> length:
        raise DecodeOverflow(f"codeword value needs more than {length} bits")
    return BitMessage(v, length)

