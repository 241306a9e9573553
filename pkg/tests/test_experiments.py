import math
import xml.etree.ElementTree as ET
from collections import Counter

import numpy as np
import pytest

from ndotp.experiments import (
    ExperimentSpec,
    Histogram,
    all_triples,
    diff_metric_experiment,
    emit_csv,
    emit_svg,
    expected_random_distance,
    parse_triples,
    penetration_depths,
    pfi_penetration_experiment,
    random_baseline_rates,
    random_pair_baseline,
    rotate_triples,
    run,
    sample_triples,
    single_cycle_rate,
)
from ndotp.foata import inject_k, penetration_depth
from ndotp.perm import Permutation, SeededStream, random_permutation


class TestHistogram:
    def test_total_invariant(self):
        with pytest.raises(ValueError):
            Histogram((0, 1), (1, 2), 4)

    def test_merge_associative_commutative(self):
        a = Histogram.from_counter(Counter({0: 1, 2: 3}))
        b = Histogram.from_counter(Counter({1: 5}))
        c = Histogram.from_counter(Counter({2: 1, 3: 1}))
        assert a.merge(b) == b.merge(a)
        assert a.merge(b).merge(c) == a.merge(b.merge(c))

    def test_survival(self):
        h = Histogram((0, 1, 2), (2, 1, 1), 4)
        assert h.survival() == [1.0, 0.5, 0.25]
        assert h.mean() == 0.75


def test_golden_csv(tmp_path):
    h = Histogram((0, 1, 2), (6, 3, 0), 9)
    text = emit_csv(h, tmp_path / "h.csv")
    assert text == (
        "bin,count,rate,log60_rate\n"
        "0,6,0.666666666667,-0.0990305290496\n"
        "1,3,0.333333333333,-0.268324336648\n"
        "2,0,0,-inf\n"
    )
    assert (tmp_path / "h.csv").read_text() == text


def test_log60_column_matches_definition(tmp_path):
    h = Histogram((0, 1, 2, 3), (50, 30, 15, 5), 100)
    emit_csv(h, tmp_path / "h.csv")
    for line in (tmp_path / "h.csv").read_text().splitlines()[1:]:
        _, count, rate, log60 = line.split(",")
        assert float(log60) == pytest.approx(math.log(int(count) / 100) / math.log(60), rel=1e-10)


@pytest.mark.parametrize("log60", [False, True])
def test_svg_is_xml(tmp_path, log60):
    h = Histogram((0, 1, 2), (6, 3, 0), 9)
    emit_svg(h, tmp_path / "h.svg", title="a < b & c", log60=log60, baseline=[1, 0.1, 0.01])
    root = ET.parse(tmp_path / "h.svg").getroot()
    assert root.tag.endswith("svg")
    assert len(root.findall("{http://www.w3.org/2000/svg}rect")) == 3


class TestDiffMetric:
    def test_small_order_smoke(self):
        h = diff_metric_experiment(3, 200, seed=1)
        assert h.bins == (0, 1, 2)
        assert h.total == 200

    def test_deterministic_and_worker_independent(self):
        a = diff_metric_experiment(30, 400, seed=5, workers=1)
        assert a == diff_metric_experiment(30, 400, seed=5, workers=1)
        assert a == diff_metric_experiment(30, 400, seed=5, workers=3)
        assert a != diff_metric_experiment(30, 400, seed=6, workers=1)

    def test_distances_are_rotation_distances(self):
        nu = 24
        h = diff_metric_experiment(nu, 500, seed=2)
        allowed = {nu - math.gcd(s, nu) for s in range(1, nu)}
        assert {b for b, c in zip(h.bins, h.counts) if c} <= allowed

    def test_later_digit(self):
        h = diff_metric_experiment(30, 300, seed=3, digit=10)
        assert h.total == 300

    def test_random_pair_baseline(self):
        h = random_pair_baseline(40, 4000, seed=4)
        assert abs(h.mean() - expected_random_distance(40)) < 0.15


class TestTriples:
    def test_sampled_are_distinct_and_uniform(self):
        rng = np.random.default_rng(0)
        t = sample_triples(rng, 6, 60_000)
        assert ((t[:, 0] != t[:, 1]) & (t[:, 1] != t[:, 2]) & (t[:, 0] != t[:, 2])).all()
        keys = Counter(map(tuple, t.tolist()))
        assert len(keys) == 120
        assert max(keys.values()) / min(keys.values()) < 1.5

    def test_exhaustive_counts(self):
        assert len(all_triples(60)) == 60 * 59 * 58
        assert len(all_triples(6, dedup=True)) == 6 * 5 * 4 // 3

    def test_rotation(self):
        q = np.array([10, 11, 12, 13, 14])
        rows = rotate_triples(q, np.array([[0, 2, 4], [3, 1, 0]]))
        assert rows.tolist() == [[12, 11, 14, 13, 10], [13, 10, 12, 11, 14]]

    def test_parse(self):
        assert parse_triples("exhaustive") == "exhaustive"
        assert parse_triples("sampled:25") == 25
        with pytest.raises(ValueError):
            parse_triples("sampled:")


def test_vectorised_depth_matches_scalar():
    stream = SeededStream(b"depths")
    rows = []
    for _ in range(300):
        p = random_permutation(10, stream)
        rows.append(inject_k(p, 4))
        rows.append(random_permutation(14, stream))
    rng = np.random.default_rng(1)
    rows = np.array(rows)
    perturbed = rotate_triples(rows[0], sample_triples(rng, 14, 300))
    for batch in (rows, perturbed):
        got = penetration_depths(batch, 4)
        assert got.tolist() == [penetration_depth(Permutation(r.tolist()), 4) for r in batch]


def test_transposition_control_reaches_depth_zero():
    stream = SeededStream(b"transposition")
    for _ in range(200):
        q = list(inject_k(random_permutation(12, stream), 3))
        q[2], q[7] = q[7], q[2]
        assert penetration_depth(q, 3) == 0


class TestPfiExperiment:
    def test_deterministic_and_worker_independent(self):
        a = pfi_penetration_experiment(10, 3, 12, "sampled:40", seed=9, workers=1)
        assert a.bins == (0, 1, 2, 3)
        assert a.total == 480
        assert a == pfi_penetration_experiment(10, 3, 12, "sampled:40", seed=9, workers=4)

    def test_exhaustive_total(self):
        h = pfi_penetration_experiment(5, 2, 3, "exhaustive")
        assert h.total == 3 * 7 * 6 * 5

    def test_run_dispatch(self):
        spec = ExperimentSpec("pfi-depth", n=6, k=2, samples=4, triples="sampled:10")
        assert run(spec).total == 40
        with pytest.raises(ValueError):
            run(ExperimentSpec("nope"))


def test_random_baseline_rates():
    r = random_baseline_rates(50, 10)
    assert r[0] == 1.0
    assert r[1] == pytest.approx(1 / 60)
    assert r[2] == pytest.approx(1 / (60 * 59))


def test_single_cycle_rate_small_exact():
    # 2 of the 6 permutations of S_3 are single cycles
    hits, trials = single_cycle_rate(3, 60_000, seed=1)
    sigma = math.sqrt(trials / 3 * (2 / 3))
    assert abs(hits - trials / 3) < 4 * sigma
