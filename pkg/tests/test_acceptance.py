"""Acceptance runs at full size.

Each test prints one ``PASS``/``FAIL`` line with its runtime, straight to the
terminal so the lines survive pytest's output capture.
"""

import time

import pytest

from treegraded import conelab, suites
from treegraded.numeric import Mode

pytestmark = pytest.mark.slow

SEED = 20240611
NS = [16, 64, 256, 1024, 4096]


@pytest.fixture
def report(capsys):
    def emit(label, ok, elapsed, detail=""):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} {label} ({elapsed:.1f} s){' ' + detail if detail else ''}")
    return emit


def timed(fn, *args, **kw):
    start = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - start


def failed(res, checks=None):
    names = checks or sorted(res.checks)
    return {c: res.checks[c].first_failure for c in names if res.checks[c].violations}


@pytest.fixture(scope="module")
def metric_run():
    return timed(suites.run_suite, "metric", SEED, 10_000)


def test_1_metric_axioms(metric_run, report):
    res, elapsed = metric_run
    bad = failed(res, ["symmetry", "identity", "triangle"])
    ok = not bad and res.checks["triangle"].cases == 10_000 and elapsed <= 60
    report("1 metric axioms on 10^4 triples", ok, elapsed)
    assert not bad, bad
    assert res.checks["triangle"].cases == 10_000
    assert elapsed <= 60


def test_2_length_inequalities_and_concatenation(metric_run, report):
    res, elapsed = metric_run
    names = ["length_lower", "length_upper", "case1_positive", "concat_invariance"]
    bad = failed(res, names)
    cases = res.checks["concat_invariance"].cases
    ok = not bad and cases >= 1000 and res.checks["case1_positive"].cases > 0
    report("2 length inequalities and concatenation", ok, elapsed, f"concatenations={cases}")
    assert not bad, bad
    assert cases >= 1000


def test_3_isometries(report):
    res, elapsed = timed(suites.run_suite, "isometry", SEED, 10_000)
    report("3 isometry suite on 10^4 triples", res.ok, elapsed)
    assert res.ok, failed(res)
    assert res.checks["inverse_round_trip"].cases == 10_000


def test_4_geodesics(report):
    exact, t1 = timed(suites.run_suite, "geodesic", SEED, 1000)
    rounded, t2 = timed(suites.run_suite, "geodesic", SEED, 1000, Mode.FLOAT)
    dev = rounded.checks["unit_speed"].max_deviation
    ok = exact.ok and exact.checks["unit_speed"].max_deviation == 0 and rounded.ok and dev <= 1e-9
    report("4 geodesic unit speed, 10^3 pairs x 10 parameters", ok, t1 + t2, f"float max deviation={dev:.1e}")
    assert exact.ok, failed(exact)
    assert exact.checks["unit_speed"].max_deviation == 0
    assert rounded.ok and dev <= 1e-9, failed(rounded)


def test_5_tree_graded_structure(report):
    res, elapsed = timed(suites.run_suite, "bigon", SEED, 1000)
    counts = {c: res.checks[c].cases for c in ("coincide_outside", "confined_to_placement", "median_additive",
                                                 "transversal_closed")}
    report("5 bigons, medians and transversal trees on 10^3 samples", res.ok, elapsed)
    assert res.ok, failed(res)
    assert all(n >= 1000 for n in counts.values()), counts


def test_6_universality_witnesses(report):
    res, elapsed = timed(suites.run_suite, "types", SEED, 1000)
    detail = f"points={res.checks['components_pairwise_different'].cases}"
    report("6 type round trips and 100 witnesses at 10 points", res.ok, elapsed, detail)
    assert res.ok, failed(res)
    assert res.checks["round_trip"].cases == 1000
    assert res.checks["components_pairwise_different"].cases == 10


def test_7_word_metric_oracle(report):
    start = time.perf_counter()
    ball = conelab.bfs_oracle(8)
    mismatches = sum(1 for g, d in ball.items() if conelab.word_length(g) != d)
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed <= 120
    report("7 syllable length equals BFS on the radius-8 ball", ok, elapsed, f"elements={len(ball)}")
    assert mismatches == 0
    assert elapsed <= 120


def test_8_convergence(report):
    start = time.perf_counter()
    corpus = conelab.descriptor_corpus(42, 50)
    reports = [conelab.converge_check(f, g, NS, pair_id=i) for i, (f, g) in enumerate(corpus)]
    elapsed = time.perf_counter() - start
    over = [r for rep in reports for r in rep.rows if r.abs_error * r.n > r.bound_C]
    slopes = [s for i, rep in enumerate(reports) if (s := rep.slopes()[i]) is not None]
    off = [s for s in slopes if abs(s + 1) > 0.2]
    ok = not over and not off and elapsed <= 120
    detail = f"pairs with nonzero error={len(slopes)}, slopes in [{min(slopes):.3f}, {max(slopes):.3f}]"
    report("8 convergence of the word metric at 50 pairs", ok, elapsed, detail)
    assert len(corpus) == 50
    assert not over, over[:3]
    assert not off
    assert elapsed <= 120
