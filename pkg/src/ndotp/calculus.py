"""First derivative of a Lehmer codeword and its inverse.

Differentiation runs from the little end towards the big end, carrying a
running state ``p*``; integration runs the other way, so a change in one
derivative digit spreads to every later (higher-index) plaintext digit.
Python's ``%`` already yields the nonnegative residue the recurrences need.
"""

from __future__ import annotations

from .perm import LehmerCode


def differentiate(p):
    """Derivative codeword of ``p``; digit ranges are preserved."""
    n = len(p)
    if n <= 2:
        return LehmerCode(p)
    d = [0] * n
    star = p[n - 2]
    for i in range(2, n):
        nxt = p[n - i - 1]
        d[n - i] = (star - nxt) % i
        star = (nxt - d[n - i] - 1) % (i + 1)
    d[0] = star
    return LehmerCode._trusted(d)


def integrate(d):
    """Inverse of :func:`differentiate`."""
    n = len(d)
    if n <= 2:
        return LehmerCode(d)
    p = [0] * n
    star = d[0]
    for i in range(n - 2):
        p[i] = (star + d[i + 1] + 1) % (n - i)
        star = (p[i] + d[i + 1]) % (n - i - 1)
    p[n - 2] = star
    return LehmerCode._trusted(p)
