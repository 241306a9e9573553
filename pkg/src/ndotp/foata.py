"""Pseudo Foata injection: read a one-line permutation as a single cycle.

``inject`` maps ``p`` in S_n to the permutation of S_{n+1} whose only
cycle is ``(p_0, ..., p_{n-1}, n)``. Its image is the set of single
cycles, a fraction ``1/(n+1)`` of S_{n+1}; ``extract`` is the partial
inverse and is what detects forgeries.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .errors import NotSingleCycle
from .perm import Permutation


def _inject(p):
    n = len(p)
    q = [0] * (n + 1)
    for m in range(n - 1):
        q[p[m]] = p[m + 1]
    q[p[n - 1]] = n
    q[n] = p[0]
    return q


def _extract(q):
    """List form of the inverse injection, or None when ``q`` has several cycles."""
    n = len(q) - 1
    p = [0] * n
    x = q[n]
    for m in range(n):
        if x == n:
            return None
        p[m] = x
        x = q[x]
    return p if x == n else None


def inject(p):
    return Permutation._trusted(_inject(p))


def extract(q):
    if len(q) < 2:
        raise NotSingleCycle("order-1 permutation has no inverse injection")
    p = _extract(q)
    if p is None:
        raise NotSingleCycle("permutation is not a single cycle")
    return Permutation._trusted(p)


def inject_k(p, k):
    q = list(p)
    for _ in range(k):
        q = _inject(q)
    return Permutation._trusted(q)


def extract_k(q, k):
    """Undo ``k`` injections.

    On failure the raised :class:`NotSingleCycle` carries ``depth``, the
    number of inverse injections that succeeded first.
    """
    if k > len(q) - 1:
        raise ValueError(f"cannot extract {k} times from order {len(q)}")
    p = list(q)
    for depth in range(k):
        p = _extract(p)
        if p is None:
            raise NotSingleCycle(f"not a single cycle after {depth} extractions", depth=depth)
    return Permutation._trusted(p)


def penetration_depth(q, k):
    """Number of successful inverse injections, at most ``k``."""
    p = list(q)
    for depth in range(k):
        p = _extract(p)
        if p is None:
            return depth
    return k


def forgery_bound(n, k):
    """Density ``n!/(n+k)!`` of the image of ``k`` injections, as an exact fraction."""
    return Fraction(factorial(n), factorial(n + k))


def below_bits(ratio, m):
    """True when ``ratio < 2**-m``."""
    return ratio < Fraction(1, 1 << m)
