import itertools
from math import factorial, prod

import pytest

from ndotp.errors import RemainderOutOfRange
from ndotp.perm import LehmerCode, SeededStream, random_lehmer
from ndotp.precondition import (
    PreconditionConfig,
    R_to_remainders,
    crt_combine,
    deprecondition,
    falling_factorial_factors,
    is_preconditionable,
    make_config,
    max_block_size,
    pack_big_end,
    pht_forward,
    pht_inverse,
    precondition,
    remainders_to_R,
    search_config,
    unpack_big_end,
)

TABLE = {
    22: (3, (3, 5, 7, 8, 11)),
    36: (4, (5, 7, 8, 11, 17, 27)),
    78: (5, (7, 9, 11, 13, 16, 19, 25, 37)),
    95: (6, (7, 13, 16, 19, 23, 25, 27, 31, 47)),
    147: (7, (5, 11, 13, 29, 47, 49, 64, 71, 73, 81)),
    207: (8, (7, 17, 23, 29, 41, 67, 81, 101, 103, 125, 128)),
    303: (9, (7, 11, 13, 23, 37, 43, 59, 101, 125, 128, 149, 151, 243)),
}


def brute_admissible(n, s):
    """Oracle: factor Z by naive trial division and test every prime power."""
    Z = prod(range(n - s + 1, n + 1))
    powers, x, p = [], Z, 2
    while x > 1:
        if x % p == 0:
            q = 1
            while x % p == 0:
                x //= p
                q *= p
            powers.append(q)
        p += 1
    return all(q < n - s + 1 and n - 1 - q >= s for q in powers), sorted(powers)


def random_preconditionable(cfg, stream):
    while True:
        w = random_lehmer(cfg.order, stream)
        if is_preconditionable(w, cfg):
            return w


@pytest.mark.parametrize("n", sorted(TABLE))
def test_table_rows(n):
    s, factors = TABLE[n]
    cfg = search_config(n)
    assert (cfg.s, cfg.factors) == (s, factors)
    assert cfg.modulus == factorial(n) // factorial(n - s) == prod(factors)


def test_max_block_size_against_brute_force():
    for n in range(2, 60):
        s = max_block_size(n)
        if s:
            assert brute_admissible(n, s)[0]
            assert sorted(make_config(n, s).factors) == brute_admissible(n, s)[1]
        if s + 1 < n:
            assert not brute_admissible(n, s + 1)[0]


def test_no_config_for_five():
    assert search_config(5) is None
    with pytest.raises(ValueError):
        make_config(5, 1)


def test_falling_factorial_factors():
    assert falling_factorial_factors(22, 3) == {2: 3, 3: 1, 5: 1, 7: 1, 11: 1}


class TestPack:
    cfg = PreconditionConfig(order=5, s=2, factors=(4, 5), positions=(0, 0), modulus=20, crt_coeffs=(0, 0), radices=(5, 4))

    def test_examples(self):
        base = LehmerCode((0, 0, 0, 0, 0))
        assert pack_big_end((3, 2, 0, 0, 0), self.cfg) == 14
        assert pack_big_end(base, self.cfg) == 0
        assert pack_big_end((4, 3, 2, 1, 0), self.cfg) == 19

    def test_exhaustive(self):
        base = LehmerCode((0, 0, 2, 1, 0))
        seen = set()
        for a, b in itertools.product(range(5), range(4)):
            w = LehmerCode((a, b, 2, 1, 0))
            W = pack_big_end(w, self.cfg)
            assert unpack_big_end(W, self.cfg, base) == w
            seen.add(W)
        assert seen == set(range(20))


class TestCrt:
    def test_toy(self):
        assert crt_combine((2, 3), (3, 5)) == 8
        assert crt_combine((0, 0), (3, 5)) == 0

    def test_config_round_trip_22(self):
        cfg = make_config(22, 3)
        base = LehmerCode.zeros(22)
        for R in range(cfg.modulus):
            w = R_to_remainders(R, cfg, base)
            assert remainders_to_R(w, cfg) == R

    def test_out_of_range(self):
        cfg = make_config(22, 3)
        w = list(LehmerCode.zeros(22))
        w[cfg.positions[0]] = cfg.factors[0]
        with pytest.raises(RemainderOutOfRange) as info:
            remainders_to_R(w, cfg)
        assert info.value.position == cfg.positions[0]


class TestPht:
    def test_examples(self):
        assert pht_forward(0, 0, 7) == (0, 0)
        assert pht_forward(3, 4, 10) == (0, 7)
        assert pht_inverse(0, 7, 10) == (3, 4)

    def test_bijection_12(self):
        image = {pht_forward(W, R, 12) for W in range(12) for R in range(12)}
        assert len(image) == 144
        for W, R in itertools.product(range(12), repeat=2):
            assert pht_inverse(*pht_forward(W, R, 12), 12) == (W, R)

    def test_range(self):
        with pytest.raises(ValueError):
            pht_forward(10, 0, 10)


class TestPrecondition:
    def test_zero_codeword_fixed(self):
        cfg = search_config(95)
        w = LehmerCode.zeros(95)
        assert precondition(w, cfg) == w

    def test_touched_95(self):
        cfg = search_config(95)
        assert cfg.positions == tuple(94 - m for m in cfg.factors)
        assert cfg.touched == set(range(6)) | {47, 63, 67, 69, 71, 75, 78, 81, 87}

    def test_round_trip_95_and_untouched(self):
        cfg = search_config(95)
        stream = SeededStream(b"precondition-95")
        for _ in range(10_000):
            w = random_preconditionable(cfg, stream)
            v = precondition(w, cfg)
            assert deprecondition(v, cfg) == w
            assert all(v[i] == w[i] for i in range(95) if i not in cfg.touched)

    def test_exhaustive_over_block_22(self):
        cfg = make_config(22, 3)
        stream = SeededStream(b"block-22")
        template = random_preconditionable(cfg, stream)
        images = set()
        for W in range(cfg.modulus):
            # every big-end block, remainder digits spread over [0, Z) as W varies
            w = R_to_remainders((W * 7919) % cfg.modulus, cfg, unpack_big_end(W, cfg, template))
            v = precondition(w, cfg)
            assert deprecondition(v, cfg) == w
            images.add(v)
        assert len(images) == cfg.modulus

    def test_big_end_change_moves_remainders(self):
        cfg = search_config(95)
        stream = SeededStream(b"entangle")
        for _ in range(200):
            w = list(random_preconditionable(cfg, stream))
            a = precondition(w, cfg)
            w[0] = (w[0] + 1) % 95
            b = precondition(w, cfg)
            assert any(a[g] != b[g] for g in cfg.positions)
