"""Pseudo-Hadamard transform over Chinese remainders.

The first ``s`` digits of an order-``n`` codeword form a mixed-radix
number ``W`` in ``[0, Z)`` with ``Z = n!/(n-s)!``. Writing ``Z`` as a
product of prime powers ``m_j``, the digit at position ``n - 1 - m_j`` is
read as the residue of some ``R`` in ``[0, Z)`` modulo ``m_j``. The pair
``(W, R)`` is mixed by ``R* = W + R``, ``W* = W + R*`` (mod ``Z``) and
written back, so that any change to the big end also moves the scattered
remainder digits near the little end.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import RemainderOutOfRange
from .perm import LehmerCode, _check_order


@lru_cache(maxsize=None)
def _primes_upto(n):
    sieve = bytearray([1]) * (n + 1)
    for i in range(min(2, n + 1)):
        sieve[i] = 0
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, n + 1, p)))
    return tuple(p for p in range(n + 1) if sieve[p])


def _factor_small(x, primes):
    out = {}
    for p in primes:
        if p * p > x:
            break
        while x % p == 0:
            out[p] = out.get(p, 0) + 1
            x //= p
    if x > 1:
        out[x] = out.get(x, 0) + 1
    return out


def falling_factorial_factors(n, s):
    """``{prime: exponent}`` of ``n (n-1) ... (n-s+1)`` by trial division."""
    primes = _primes_upto(n)
    exps = {}
    for t in range(n - s + 1, n + 1):
        for p, e in _factor_small(t, primes).items():
            exps[p] = exps.get(p, 0) + e
    return exps


def crt_combine(remainders, moduli):
    """Unique ``R < prod(moduli)`` with ``R % m == r`` for pairwise coprime moduli."""
    Z = 1
    for m in moduli:
        Z *= m
    R = 0
    for r, m in zip(remainders, moduli):
        if not 0 <= r < m:
            raise ValueError(f"remainder {r} outside [0, {m})")
        b = Z // m
        R += r * b * pow(b, -1, m)
    return R % Z


@dataclass(frozen=True)
class PreconditionConfig:
    order: int
    s: int
    factors: tuple  # prime powers m_j, ascending
    positions: tuple  # n - 1 - m_j, aligned with factors
    modulus: int  # Z = n!/(n-s)!
    crt_coeffs: tuple  # b_j * (b_j^-1 mod m_j) mod Z
    radices: tuple  # n, n-1, ..., n-s+1

    @property
    def touched(self):
        """Every codeword index the transform may rewrite."""
        return frozenset(range(self.s)) | frozenset(self.positions)


def _valid(n, s, exps):
    limit = n - s + 1
    for p, e in exps.items():
        if e >= limit.bit_length() or p**e >= limit:
            return False
        if n - 1 - p**e < s:
            return False
    return True


def make_config(n, s):
    """Config for block size ``s``; raises ``ValueError`` if ``(n, s)`` is not admissible."""
    _check_order(n)
    if not 1 <= s < n:
        raise ValueError(f"block size s={s} outside [1, {n})")
    exps = falling_factorial_factors(n, s)
    if not _valid(n, s, exps):
        raise ValueError(f"(n={n}, s={s}) has a prime-power factor too large for the remainder positions")
    factors = tuple(sorted(p**e for p, e in exps.items()))
    Z = 1
    for m in factors:
        Z *= m
    coeffs = []
    for m in factors:
        b = Z // m
        coeffs.append(b * pow(b, -1, m) % Z)
    return PreconditionConfig(
        order=n,
        s=s,
        factors=factors,
        positions=tuple(n - 1 - m for m in factors),
        modulus=Z,
        crt_coeffs=tuple(coeffs),
        radices=tuple(range(n, n - s, -1)),
    )


def max_block_size(n):
    """Largest admissible ``s`` for order ``n``, or 0 if none is.

    Admissibility is monotone in ``s``: prime-power factors only grow and
    the bound ``n - s + 1`` only shrinks, so the scan stops at the first
    failure.
    """
    primes = _primes_upto(n)
    exps = {}
    best = 0
    for s in range(1, n):
        for p, e in _factor_small(n - s + 1, primes).items():
            exps[p] = exps.get(p, 0) + e
        if not _valid(n, s, exps):
            break
        best = s
    return best


def search_config(n):
    """Config with the largest admissible block size, or None."""
    s = max_block_size(n)
    return make_config(n, s) if s else None


def pack_big_end(w, cfg):
    W = 0
    for d, r in zip(w[: cfg.s], cfg.radices):
        W = W * r + d
    return W


def unpack_big_end(W, cfg, w):
    if not 0 <= W < cfg.modulus:
        raise ValueError(f"W={W} outside [0, {cfg.modulus})")
    out = list(w)
    for i in range(cfg.s - 1, -1, -1):
        W, out[i] = divmod(W, cfg.radices[i])
    return LehmerCode._trusted(out)


def remainders_to_R(w, cfg):
    R = 0
    for g, m, coeff in zip(cfg.positions, cfg.factors, cfg.crt_coeffs):
        r = w[g]
        if r >= m:
            raise RemainderOutOfRange(f"digit {r} at position {g} is not a residue mod {m}", position=g)
        R += r * coeff
    return R % cfg.modulus


def R_to_remainders(R, cfg, w):
    if not 0 <= R < cfg.modulus:
        raise ValueError(f"R={R} outside [0, {cfg.modulus})")
    out = list(w)
    for g, m in zip(cfg.positions, cfg.factors):
        out[g] = R % m
    return LehmerCode._trusted(out)


def _check_pht(Z, *xs):
    for x in xs:
        if not 0 <= x < Z:
            raise ValueError(f"{x} outside [0, {Z})")


def pht_forward(W, R, Z):
    _check_pht(Z, W, R)
    R_star = (W + R) % Z
    return (W + R_star) % Z, R_star


def pht_inverse(W_star, R_star, Z):
    _check_pht(Z, W_star, R_star)
    W = (W_star - R_star) % Z
    return W, (R_star - W) % Z


def _check_config(w, cfg):
    if len(w) != cfg.order:
        raise ValueError(f"codeword order {len(w)} != config order {cfg.order}")


def precondition(w, cfg):
    """Mix the big-end block with the remainder digits.

    Raises :class:`RemainderOutOfRange` when a remainder digit equals its
    modulus; such codewords have no preimage-preserving encoding.
    """
    _check_config(w, cfg)
    W = pack_big_end(w, cfg)
    R = remainders_to_R(w, cfg)
    W_star, R_star = pht_forward(W, R, cfg.modulus)
    return R_to_remainders(R_star, cfg, unpack_big_end(W_star, cfg, w))


def deprecondition(w, cfg):
    _check_config(w, cfg)
    W_star = pack_big_end(w, cfg)
    R_star = remainders_to_R(w, cfg)
    W, R = pht_inverse(W_star, R_star, cfg.modulus)
    return R_to_remainders(R, cfg, unpack_big_end(W, cfg, w))


def is_preconditionable(w, cfg):
    return all(w[g] < m for g, m in zip(cfg.positions, cfg.factors))
