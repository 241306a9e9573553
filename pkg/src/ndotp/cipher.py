"""Non-degenerate one-time pad over Lehmer codewords.

Component ``i`` (``1 <= i < n``) of plaintext, key and ciphertext is the
codeword digit at index ``n - 1 - i`` and ranges over ``[0, i + 1)``. Each
component is enciphered as ``c_i = pi_i**k_i [p_i]`` where ``pi_i`` is a
single cycle over ``range(i + 1)``. The cycle evolves from ``pi_{i-1}`` by
relabelling its symbols through a cut-and-riffle shuffle keyed on the
previous plaintext component and inserting the new symbol ``i`` at the
position given by the previous key component.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidCodeword, OrderMismatch
from .perm import LehmerCode, Permutation, SingleCycle, _check_order

# pi_1, the only single cycle over range(2)
FIRST_GENERATOR = SingleCycle._trusted((0, 1))


@dataclass(frozen=True)
class KeyMaterial:
    """Pad components ``k_1 .. k_{n-1}`` with ``0 <= k_i <= i``."""

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        _check_order(len(comps) + 1)
        for i, k in enumerate(comps, start=1):
            if not (isinstance(k, int) and 0 <= k <= i):
                raise InvalidCodeword(f"key component k_{i} = {k!r} outside [0, {i}]")

    @property
    def order(self):
        return len(self.components) + 1

    @classmethod
    def from_lehmer(cls, w):
        """Read a codeword as a key: ``k_i`` is the digit at index ``n - 1 - i``."""
        n = len(w)
        return cls(tuple(w[n - 1 - i] for i in range(1, n)))

    def to_lehmer(self):
        n = self.order
        return LehmerCode._trusted([self.components[n - 2 - j] for j in range(n - 1)] + [0])

    def __getitem__(self, i):
        """``key[i]`` is ``k_i``, 1-based like the components themselves."""
        if not 1 <= i < self.order:
            raise IndexError(i)
        return self.components[i - 1]


def _check_cycle_range(pi, *values):
    r = len(pi)
    for v in values:
        if not 0 <= v < r:
            raise ValueError(f"{v} outside [0, {r})")


def elementary_encrypt(pi, k, p):
    """Symbol ``k`` steps along the cycle from ``p``."""
    _check_cycle_range(pi, k, p)
    return pi[(pi.index(p) + k) % len(pi)]


def elementary_decrypt(pi, k, c):
    _check_cycle_range(pi, k, c)
    return pi[(pi.index(c) - k) % len(pi)]


def inverse_riffle(i):
    half = (i + 1) // 2
    return Permutation._trusted([j // 2 if j % 2 == 0 else (j - 1) // 2 + half for j in range(i)])


def cut(i, p):
    return Permutation._trusted([(j + p) % i for j in range(i)])


def _psi_table(i, p, cut_first=False):
    half = (i + 1) // 2
    if cut_first:
        # rho[(j + p) mod i]: cut first, then riffle
        out = []
        for j in range(i):
            x = (j + p) % i
            out.append(x // 2 if x % 2 == 0 else (x - 1) // 2 + half)
        return out
    return [((j // 2 if j % 2 == 0 else (j - 1) // 2 + half) + p) % i for j in range(i)]


def psi(i, p, cut_first=False):
    """Cut-and-riffle shuffle of a deck of ``i`` cards at distance ``p``.

    The default order (riffle, then cut) reproduces the worked vector
    ``psi(5, 2) == 2 0 3 1 4``. ``cut_first=True`` selects the
    cut-then-riffle reading ``rho[(j + p) mod i]``.
    """
    if not 0 <= p < i:
        raise ValueError(f"cut distance {p} outside [0, {i})")
    return Permutation._trusted(_psi_table(i, p, cut_first))


def _next_cycle(cyc, k_prev, p_prev, cut_first=False):
    i = len(cyc)
    table = _psi_table(i, p_prev, cut_first)
    out = [table[x] for x in cyc]
    out.insert(k_prev, i)
    z = out.index(0)
    return out[z:] + out[:z] if z else out


def next_generator(pi, k_prev, p_prev, cut_first=False):
    """Grow ``pi`` (a single cycle over ``range(i)``) to a single cycle over ``range(i + 1)``.

    Symbols are relabelled through ``psi(i, p_prev)`` (conjugation), then
    ``i`` is inserted at cyclic position ``k_prev`` counted from symbol 0.
    """
    _check_cycle_range(pi, k_prev, p_prev)
    return SingleCycle._trusted(_next_cycle(list(pi), k_prev, p_prev, cut_first))


def _check_operands(w, key):
    if not isinstance(w, LehmerCode):
        w = LehmerCode(w)
    if len(w) != key.order:
        raise OrderMismatch(f"codeword order {len(w)} != key order {key.order}")
    if w[-1] != 0:
        raise InvalidCodeword("last codeword digit must be 0")
    return w


def ndotp_encrypt(p, key, cut_first=False):
    """Encipher codeword ``p`` under ``key``, little end first."""
    p = _check_operands(p, key)
    n = len(p)
    comps = key.components
    out = list(p)
    cyc = [0, 1]
    for i in range(1, n):
        if i > 1:
            cyc = _next_cycle(cyc, comps[i - 2], p[n - i], cut_first)
        pi_ = p[n - 1 - i]
        out[n - 1 - i] = cyc[(cyc.index(pi_) + comps[i - 1]) % (i + 1)]
    return LehmerCode._trusted(out)


def ndotp_decrypt(c, key, cut_first=False):
    """Inverse of :func:`ndotp_encrypt`; each cycle is rebuilt from plaintext already recovered."""
    c = _check_operands(c, key)
    n = len(c)
    comps = key.components
    out = list(c)
    cyc = [0, 1]
    for i in range(1, n):
        if i > 1:
            cyc = _next_cycle(cyc, comps[i - 2], out[n - i], cut_first)
        ci = c[n - 1 - i]
        out[n - 1 - i] = cyc[(cyc.index(ci) - comps[i - 1]) % (i + 1)]
    return LehmerCode._trusted(out)


def generators(p, key, cut_first=False):
    """The cycles ``pi_1 .. pi_{n-1}`` used while enciphering ``p``."""
    p = _check_operands(p, key)
    n = len(p)
    cyc = [0, 1]
    result = [SingleCycle._trusted(cyc)]
    for i in range(2, n):
        cyc = _next_cycle(cyc, key.components[i - 2], p[n - i], cut_first)
        result.append(SingleCycle._trusted(cyc))
    return result
