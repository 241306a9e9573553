"""Monte Carlo experiments on derivative diffusion and injection robustness.

Every trial draws its randomness from ``numpy.random.default_rng([seed,
trial])``, so results depend only on the seed and never on how trials are
split between worker processes.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .calculus import differentiate, integrate
from .foata import inject_k
from .perm import LehmerCode, cayley_distance, lehmer_to_oneline

LN60 = math.log(60)


@dataclass(frozen=True)
class Histogram:
    """Integer tallies keyed by integer bins."""

    bins: tuple
    counts: tuple
    total: int

    def __post_init__(self):
        if len(self.bins) != len(self.counts):
            raise ValueError("bins and counts differ in length")
        if sum(self.counts) != self.total:
            raise ValueError("counts do not sum to total")

    @classmethod
    def from_counter(cls, counter, bins=None):
        if bins is None:
            bins = sorted(counter)
        counts = tuple(int(counter.get(b, 0)) for b in bins)
        return cls(tuple(bins), counts, sum(counts))

    def as_counter(self):
        return Counter(dict(zip(self.bins, self.counts)))

    def merge(self, other):
        bins = sorted(set(self.bins) | set(other.bins))
        return Histogram.from_counter(self.as_counter() + other.as_counter(), bins)

    def mean(self):
        return sum(b * c for b, c in zip(self.bins, self.counts)) / self.total

    def rates(self):
        return [c / self.total for c in self.counts]

    def survival(self):
        """Fraction of trials whose bin value is at least each bin."""
        out, tail = [], 0
        for c in reversed(self.counts):
            tail += c
            out.append(tail / self.total)
        return out[::-1]


@dataclass(frozen=True)
class ExperimentSpec:
    """``samples`` is the trial count for diff-metric and the plaintext count for pfi-depth."""

    name: str
    nu: int = 95
    n: int = 50
    k: int = 10
    samples: int = 10_000
    triples: str = "sampled:10000"
    seed: int = 0
    workers: int = 1
    dedup: bool = False
    digit: int = 0


def trial_rng(seed, index):
    return np.random.default_rng([seed, index])


def _chunks(total, workers):
    step = -(-total // workers)
    return [(lo, min(total, lo + step)) for lo in range(0, total, step)]


def _run_parallel(fn, total, workers, *args):
    ranges = _chunks(total, max(1, workers))
    if workers <= 1 or len(ranges) == 1:
        parts = [fn(lo, hi, *args) for lo, hi in ranges]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(fn, lo, hi, *args) for lo, hi in ranges]
            parts = [f.result() for f in futures]
    merged = Counter()
    for part in parts:
        merged.update(part)
    return merged


def _random_codeword(rng, nu):
    return LehmerCode._trusted(rng.integers(0, np.arange(nu, 0, -1)).tolist())


def _diff_metric_range(lo, hi, nu, seed, digit):
    tally = Counter()
    for t in range(lo, hi):
        rng = trial_rng(seed, t)
        w = _random_codeword(rng, nu)
        d = list(differentiate(w))
        v = int(rng.integers(0, nu - digit - 1))
        d[digit] = v + 1 if v >= d[digit] else v
        a = lehmer_to_oneline(w)
        b = lehmer_to_oneline(integrate(LehmerCode._trusted(d)))
        tally[cayley_distance(a, b)] += 1
    return tally


def _random_pair_range(lo, hi, nu, seed):
    tally = Counter()
    for t in range(lo, hi):
        rng = trial_rng(seed, t)
        a = lehmer_to_oneline(_random_codeword(rng, nu))
        b = lehmer_to_oneline(_random_codeword(rng, nu))
        tally[cayley_distance(a, b)] += 1
    return tally


def diff_metric_experiment(nu, samples, seed=0, workers=1, digit=0):
    """Distance between a random permutation and the one obtained by
    re-drawing one digit of its derivative (uniformly among the other
    legal values) and integrating back.

    Bins run over every possible distance ``0 .. nu - 1``. Re-drawing
    digit 0 turns out to rotate the one-line sequence cyclically, so with
    the default ``digit=0`` every distance has the form ``nu - gcd(shift, nu)``.
    """
    if nu < 3:
        raise ValueError("nu must be at least 3")
    if not 0 <= digit < nu - 2:
        raise ValueError(f"digit must be in [0, {nu - 2})")
    tally = _run_parallel(_diff_metric_range, samples, workers, nu, seed, digit)
    return Histogram.from_counter(tally, range(nu))


def random_pair_baseline(nu, samples, seed=0, workers=1):
    """Distance between two independent uniform permutations."""
    tally = _run_parallel(_random_pair_range, samples, workers, nu, seed)
    return Histogram.from_counter(tally, range(nu))


def expected_random_distance(nu):
    """Exact mean Cayley distance of two uniform permutations: ``nu - H_nu``."""
    return nu - sum(1.0 / j for j in range(1, nu + 1))


def sample_triples(rng, size, count):
    """``count`` uniform ordered triples of distinct positions in ``range(size)``."""
    i = rng.integers(0, size, count)
    j = rng.integers(0, size - 1, count)
    j += j >= i
    lo, hi = np.minimum(i, j), np.maximum(i, j)
    l = rng.integers(0, size - 2, count)
    l += l >= lo
    l += l >= hi
    return np.stack([i, j, l], axis=1)


def all_triples(size, dedup=False):
    """Every ordered triple of distinct positions; with ``dedup`` one per 3-cycle."""
    idx = np.arange(size)
    i, j, l = np.meshgrid(idx, idx, idx, indexing="ij")
    keep = (i != j) & (j != l) & (i != l)
    if dedup:
        keep &= (i < j) & (i < l)
    return np.stack([i[keep], j[keep], l[keep]], axis=1)


def rotate_triples(q, triples):
    """Rows of ``q`` with values at each triple's positions rotated abc -> bca."""
    rows = np.broadcast_to(np.asarray(q), (len(triples), len(q))).copy()
    r = np.arange(len(triples))
    i, j, l = triples[:, 0], triples[:, 1], triples[:, 2]
    a, b, c = rows[r, i], rows[r, j], rows[r, l]
    rows[r, i], rows[r, j], rows[r, l] = b, c, a
    return rows


def penetration_depths(perms, k):
    """Vectorised penetration depth of each row, capped at ``k``."""
    depth = np.zeros(len(perms), dtype=np.int64)
    alive = np.arange(len(perms))
    cur = np.asarray(perms)
    for _ in range(k):
        if not len(alive):
            break
        m = cur.shape[1] - 1
        r = np.arange(len(cur))
        out = np.empty((len(cur), m), dtype=cur.dtype)
        ok = np.ones(len(cur), dtype=bool)
        x = cur[:, m]
        for step in range(m):
            ok &= x != m
            out[:, step] = x
            x = cur[r, x]
        ok &= x == m
        alive = alive[ok]
        depth[alive] += 1
        cur = out[ok]
    return depth


def _pfi_range(lo, hi, n, k, mode, seed, dedup):
    tally = Counter()
    size = n + k
    fixed = all_triples(size, dedup) if mode == "exhaustive" else None
    for t in range(lo, hi):
        rng = trial_rng(seed, t)
        p = rng.permutation(n).tolist()
        q = np.asarray(inject_k(p, k), dtype=np.int64)
        triples = fixed if fixed is not None else sample_triples(rng, size, mode)
        depths = penetration_depths(rotate_triples(q, triples), k)
        for d, c in enumerate(np.bincount(depths, minlength=k + 1).tolist()):
            if c:
                tally[d] += c
    return tally


def parse_triples(text):
    if text == "exhaustive":
        return "exhaustive"
    kind, _, count = text.partition(":")
    if kind != "sampled" or not count.isdigit() or int(count) < 1:
        raise ValueError(f"triples must be 'exhaustive' or 'sampled:<count>', got {text!r}")
    return int(count)


def pfi_penetration_experiment(n, k, plaintexts, triples="sampled:10000", seed=0, workers=1, dedup=False):
    """Histogram of penetration depth after a 3-cycle perturbation of ``inject_k(p, k)``.

    Bin ``d`` counts perturbed permutations on which exactly ``d`` inverse
    injections succeeded.
    """
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    mode = parse_triples(triples) if isinstance(triples, str) else int(triples)
    tally = _run_parallel(_pfi_range, plaintexts, workers, n, k, mode, seed, dedup)
    return Histogram.from_counter(tally, range(k + 1))


def random_baseline_rates(n, k):
    """Chance that a uniform permutation of order ``n + k`` survives at least ``d`` extractions."""
    rates, r = [1.0], 1.0
    for d in range(k):
        r /= n + k - d
        rates.append(r)
    return rates


def single_cycle_rate(m, trials, seed=0, chunk=20_000):
    """Count uniform permutations of order ``m`` that are a single cycle."""
    rng = np.random.default_rng(seed)
    hits = 0
    done = 0
    while done < trials:
        size = min(chunk, trials - done)
        perms = rng.permuted(np.tile(np.arange(m), (size, 1)), axis=1)
        r = np.arange(size)
        x = perms[:, 0]
        length = np.ones(size, dtype=np.int64)
        open_ = x != 0
        for _ in range(m - 1):
            length += open_
            x = np.where(open_, perms[r, x], x)
            open_ &= x != 0
        hits += int(np.count_nonzero(length == m))
        done += size
    return hits, trials


def emit_csv(h, path):
    lines = ["bin,count,rate,log60_rate"]
    for b, c in zip(h.bins, h.counts):
        rate = c / h.total
        log60 = math.log(rate) / LN60 if c else float("-inf")
        lines.append(f"{b},{c},{rate:.12g},{log60:.12g}")
    text = "\n".join(lines) + "\n"
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return text


def emit_svg(h, path, title="", log60=False, width=640, height=360, baseline=None):
    """Bar chart of ``h``; with ``log60`` the bars show ``log60(rate)`` and
    ``baseline`` (rates per bin) is drawn as a polyline."""
    pad = 40
    rates = h.rates()
    if log60:
        values = [math.log(r) / LN60 if r > 0 else None for r in rates]
        lowest = min([v for v in values if v is not None] + [math.log(b) / LN60 for b in baseline or [] if b > 0] + [-1])
        span = -lowest or 1.0
        heights = [0 if v is None else (v - lowest) / span for v in values]
    else:
        top = max(rates) or 1.0
        heights = [r / top for r in rates]
    nb = len(h.bins)
    bw = (width - 2 * pad) / max(nb, 1)
    ph = height - 2 * pad
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<title>{escape(title)}</title>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
    ]
    for idx, (b, hgt) in enumerate(zip(h.bins, heights)):
        x = pad + idx * bw
        y = height - pad - hgt * ph
        parts.append(
            f'<rect x="{x:.2f}" y="{y:.2f}" width="{max(bw - 1, 0.5):.2f}" height="{hgt * ph:.2f}" fill="steelblue"/>'
        )
    if log60 and baseline:
        pts = []
        for idx, r in enumerate(baseline[:nb]):
            if r <= 0:
                continue
            v = (math.log(r) / LN60 - lowest) / span
            pts.append(f"{pad + (idx + 0.5) * bw:.2f},{height - pad - v * ph:.2f}")
        parts.append(f'<polyline points="{" ".join(pts)}" fill="none" stroke="red"/>')
    step = max(1, nb // 10)
    for idx in range(0, nb, step):
        parts.append(
            f'<text x="{pad + (idx + 0.5) * bw:.2f}" y="{height - pad + 14}" font-size="10" text-anchor="middle">{h.bins[idx]}</text>'
        )
    parts.append("</svg>")
    text = "\n".join(parts) + "\n"
    with open(path, "w") as fh:
        fh.write(text)
    return text


def run(spec):
    """Dispatch an :class:`ExperimentSpec` by name."""
    if spec.name == "diff-metric":
        return diff_metric_experiment(spec.nu, spec.samples, spec.seed, spec.workers, spec.digit)
    if spec.name == "pfi-depth":
        return pfi_penetration_experiment(spec.n, spec.k, spec.samples, spec.triples, spec.seed, spec.workers, spec.dedup)
    raise ValueError(f"unknown experiment {spec.name!r}")
