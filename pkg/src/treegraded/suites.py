"""Seeded property suites over random descriptors.

Each suite counts cases and violations per named check and reports the largest
deviation seen.  ``corrupt=True`` injects a known fault (a distance that drops the in-piece
term, or a single repeated witness salt for the types suite) so the runner can
be shown to catch it.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List

from . import geom, pieces, qtypes
from .numeric import Mode, close, leq, lt
from .sampling import Sampler
from .treeprod import (
    CASE1,
    EMPTY,
    Alpha,
    Descriptor,
    divergence,
    dist,
    equal,
    is_transversal_base,
    is_valid,
    total_length,
    try_concat_raw,
)

SUITES = ("metric", "isometry", "geodesic", "types", "bigon", "ble")


@dataclass
class CheckStats:
    cases: int = 0
    violations: int = 0
    max_deviation: float = 0.0
    first_failure: str = ""


@dataclass
class SuiteResult:
    name: str
    seed: int
    mode: Mode
    checks: Dict[str, CheckStats] = field(default_factory=dict)
    elapsed: float = 0.0

    def record(self, check: str, ok: bool, deviation=0, detail: Callable[[], str] = None) -> None:
        st = self.checks.setdefault(check, CheckStats())
        st.cases += 1
        dev = abs(float(deviation))
        if dev > st.max_deviation:
            st.max_deviation = dev
        if not ok:
            st.violations += 1
            if not st.first_failure and detail is not None:
                st.first_failure = detail()

    @property
    def violations(self) -> int:
        return sum(c.violations for c in self.checks.values())

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def csv_rows(self) -> List[list]:
        return [
            [self.name, check, st.cases, st.violations, f"{st.max_deviation:.3e}"]
            for check, st in sorted(self.checks.items())
        ]


WITNESS_SPECS = (pieces.L1_PLANE, pieces.L2_PLANE, pieces.PieceSpec.plane(2, "Linf"))
CSV_HEADER = ["suite", "check", "cases", "violations", "max_deviation"]


def _corrupt_dist(f, g):
    # drops the in-piece term of the shared-piece case
    dv = divergence(f, g)
    if dv.case == CASE1:
        return total_length(f) - dv.a_f + total_length(g) - dv.a_g
    return dist(f, g)


def _sampler(rng, mode: Mode, **kw) -> Sampler:
    specs = (pieces.L1_PLANE,) if mode is Mode.EXACT else (pieces.L1_PLANE, pieces.L2_PLANE)
    kw.setdefault("specs", specs)
    return Sampler(rng, mode=mode, **kw)


def run_metric(seed: int, samples: int, mode: Mode = Mode.EXACT, corrupt: bool = False) -> SuiteResult:
    """Metric axioms and the elementary inequalities of the metric."""
    rng = random.Random(seed)
    sm = _sampler(rng, mode)
    D = _corrupt_dist if corrupt else dist
    res = SuiteResult("metric", seed, mode)
    for _ in range(samples):
        f, g, h = sm.triple()
        fg, gf, gh, fh = D(f, g), D(g, f), D(g, h), D(f, h)
        res.record("symmetry", close(fg, gf), fg - gf)
        res.record("identity", close(fg, 0) == equal(f, g), 0, lambda: f"{f} {g}")
        res.record("triangle", leq(fh, fg + gh), max(0, fh - fg - gh), lambda: f"{f} {g} {h}")
        dv = divergence(f, g)
        df, dg = total_length(f), total_length(g)
        res.record("length_lower", leq(abs(df - dg), fg))
        res.record("length_upper", leq(fg, df + dg - 2 * dv.s))
        if dv.case == CASE1:
            res.record("case1_positive", lt(0, fg))
    wanted = max(1, samples // 10)
    got = 0
    attempts = 0
    while got < wanted and attempts < 50 * wanted:
        attempts += 1
        f, g1, g2 = sm.descriptor(), sm.descriptor(), sm.descriptor()
        fg1, fg2 = try_concat_raw(f, g1), try_concat_raw(f, g2)
        if not (isinstance(fg1, Descriptor) and isinstance(fg2, Descriptor)):
            continue
        got += 1
        a, b = D(fg1, fg2), D(g1, g2)
        res.record("concat_invariance", close(a, b), a - b)
    return res


def run_isometry(seed: int, samples: int, mode: Mode = Mode.EXACT, corrupt: bool = False) -> SuiteResult:
    rng = random.Random(seed)
    sm = _sampler(rng, mode)
    D = _corrupt_dist if corrupt else dist
    res = SuiteResult("isometry", seed, mode)
    for _ in range(samples):
        f, g, h = sm.triple()
        a, b = D(geom.phi(f, g), geom.phi(f, h)), D(g, h)
        res.record("preserves_distance", close(a, b), a - b, lambda: f"{f} {g} {h}")
        res.record("sends_f_to_base", geom.phi(f, f).is_empty)
        back = geom.phi(f, geom.phi_inv(f, g))
        res.record("inverse_round_trip", equal(back, g), 0, lambda: f"{f} {g}")
        res.record("inverse_valid", is_valid(geom.phi_inv(f, g)))
    return res


def run_geodesic(seed: int, samples: int, mode: Mode = Mode.EXACT, corrupt: bool = False,
                 params: int = 10) -> SuiteResult:
    rng = random.Random(seed)
    sm = _sampler(rng, mode)
    D = _corrupt_dist if corrupt else dist
    res = SuiteResult("geodesic", seed, mode)
    for _ in range(samples):
        f, g = sm.pair()
        d = D(f, g)
        ts = [d * Fraction(rng.randint(0, 16), 16) for _ in range(params)]
        if mode is Mode.FLOAT:
            ts = [float(t) for t in ts]
        pts = [geom.geodesic_point(f, g, t) for t in ts]
        res.record("start", equal(geom.geodesic_point(f, g, 0), f))
        res.record("end", equal(geom.geodesic_point(f, g, d), g))
        for i in range(params):
            res.record("valid", is_valid(pts[i]))
            j = (i + 1) % params
            dev = D(pts[i], pts[j]) - abs(ts[i] - ts[j])
            res.record("unit_speed", close(dev, 0), dev, lambda: f"{f} {g} {ts[i]} {ts[j]}")
    return res


def _random_type(sm: Sampler, rng: random.Random):
    """A random finite type over the plane specs of ``sm``."""
    pos = sm.positive()
    intervals = []
    for _ in range(rng.randint(1, 3)):
        spec = rng.choice(sm.specs)
        x = pieces.base_point(spec)
        while True:
            y = sm.plane_point(spec)
            if not pieces.points_equal(spec, x, y):
                break
        cp = pieces.canonical_pair(spec, x, y)
        intervals.append(qtypes.Interval(pos, pos + cp.length, cp))
        pos = pos + cp.length
        if rng.random() < 0.7:
            pos = pos + sm.positive()
    return qtypes.QType(pos, tuple(intervals))


def run_types(seed: int, samples: int, mode: Mode = Mode.EXACT, corrupt: bool = False,
              multiplicity: int = 100, points: int = 10) -> SuiteResult:
    rng = random.Random(seed)
    sm = _sampler(rng, mode)
    res = SuiteResult("types", seed, mode)
    for i in range(samples):
        t = _random_type(sm, rng)
        at = sm.descriptor()
        g = qtypes.realize_type(at, t, f"s{i}")
        image = geom.phi(at, g)
        back = qtypes.type_of(image)
        ok = isinstance(back, qtypes.QType) and qtypes.types_equal(back, t)
        res.record("round_trip", ok, 0, lambda: f"{t} {back}")
        res.record("valid", is_valid(g))
        res.record("self_equivalent", qtypes.types_equivalent(t, t))
    for _ in range(points):
        t = _random_type(sm, rng)
        at = sm.descriptor()
        if corrupt:
            # a salt that never changes collapses every witness into one component
            comps = [qtypes.realize_type(at, t, "w") for _ in range(multiplicity)]
        else:
            comps = qtypes.distinct_components(at, t, multiplicity)
        images = [geom.phi(at, c) for c in comps]
        typed = all(qtypes.types_equal(qtypes.type_of(x), t) for x in images)
        res.record("components_typed", typed)
        different = len(set(geom.component_classes(at, comps))) == len(comps)
        res.record("components_pairwise_different", different)
        for spec in WITNESS_SPECS:
            placed = qtypes.distinct_pieces(at, spec, multiplicity)
            witnesses = [w for _, w in placed]
            res.record("pieces_pairwise_case2", qtypes.pairwise_case2(at, witnesses))
            sums = all(
                close(dist(witnesses[a], witnesses[b]),
                      dist(at, witnesses[a]) + dist(at, witnesses[b]))
                for a in range(len(witnesses)) for b in range(a + 1, min(len(witnesses), a + 5))
            )
            res.record("pieces_distance_sum", sums)
            res.record("pieces_contain_witness", all(p.contains(w) for p, w in placed))
    return res


def _skewed_l1_step(sm: Sampler, rng: random.Random, previous):
    """An L1 step whose displacement is nonzero in both coordinates."""
    while True:
        s = sm.step(previous, alpha=Alpha(pieces.L1_PLANE, rng.choice(sm.copies)))
        if all(a != b for a, b in zip(s.entry, s.exit)):
            return s


def run_bigon(seed: int, samples: int, mode: Mode = Mode.EXACT, corrupt: bool = False,
              params: int = 9) -> SuiteResult:
    """Tree-graded structure: bigons, medians, transversal trees."""
    rng = random.Random(seed)
    sm = _sampler(rng, Mode.EXACT, specs=(pieces.L1_PLANE,))
    D = _corrupt_dist if corrupt else dist
    res = SuiteResult("bigon", seed, mode)
    # two geodesic selectors differ only inside the skewed L1 steps
    for _ in range(samples):
        f = sm.descriptor()
        h = sm.descriptor(2)
        h = Descriptor(h.steps + (_skewed_l1_step(sm, rng, h[-1] if len(h) else None),))
        h = sm.extend(h, rng.randint(0, 2))
        g = geom.phi_inv(f, h)
        image = geom.phi(f, g)
        d = total_length(image)
        breaks = image.breaks
        skewed = [
            i for i, s in enumerate(image.steps)
            if s.alpha.spec.norm == "L1" and sum(1 for a, b in zip(s.entry, s.exit) if a != b) > 1
        ]
        ts = sorted({d * Fraction(k, params - 1) for k in range(params)} | {
            (breaks[i] + breaks[i + 1]) / 2 for i in skewed})
        for t in ts:
            p1 = geom.geodesic_point(f, g, t, "forward")
            p2 = geom.geodesic_point(f, g, t, "reverse")
            inside = [i for i in skewed if breaks[i] < t < breaks[i + 1]]
            for p in (p1, p2):
                dev = D(f, p) - t
                res.record("both_geodesic", close(dev, 0) and close(D(p, g), d - t), dev)
            if not inside:
                res.record("coincide_outside", equal(p1, p2), 0, lambda: f"{f} {g} {t}")
                continue
            i = inside[0]
            s = image[i]
            pl = geom.placement(geom.phi_inv(f, image[:i]), s.alpha, s.entry)
            res.record("confined_to_placement", pl.contains(p1) and pl.contains(p2),
                       0, lambda: f"{f} {g} {t}")
            if t == (breaks[i] + breaks[i + 1]) / 2:
                res.record("selectors_differ_inside", not equal(p1, p2))
    # median decomposition
    for _ in range(samples):
        f, g, h = sm.triple()
        m = geom.median(f, g, h)
        ga, gb, gc = m.gate_points()
        for (x, gx), (y, gy), gate_pair in (
            ((f, ga), (g, gb), (0, 1)), ((f, ga), (h, gc), (0, 2)), ((g, gb), (h, gc), (1, 2))
        ):
            total = D(x, gx) + D(gx, gy) + D(gy, y)
            dev = D(x, y) - total
            res.record("median_additive", close(dev, 0), dev, lambda: f"{f} {g} {h}")
            if m.point is None:
                spec = m.placement.alpha.spec
                inner = pieces.piece_dist(spec, m.gates[gate_pair[0]], m.gates[gate_pair[1]])
                res.record("median_gates_in_piece", close(D(gx, gy), inner))
        if m.point is None:
            res.record("median_gates_placed", all(m.placement.contains(p) for p in (ga, gb, gc)))
    # transversal trees are closed under geodesics
    for _ in range(samples):
        x = sm.descriptor()
        a, b = sm.transversal(), sm.transversal()
        g, h = geom.phi_inv(x, a), geom.phi_inv(x, b)
        d = D(g, h)
        ok = True
        for k in range(params):
            t = d * Fraction(k, params - 1)
            p = geom.geodesic_point(g, h, t)
            ok = ok and is_transversal_base(geom.phi(x, p))
        res.record("transversal_closed", ok, 0, lambda: f"{x} {a} {b}")
    return res


def run_ble(seed: int, samples: int, mode: Mode = Mode.EXACT, corrupt: bool = False) -> SuiteResult:
    rng = random.Random(seed)
    sm = _sampler(rng, Mode.EXACT, specs=(pieces.L1_PLANE,))
    D = _corrupt_dist if corrupt else dist
    res = SuiteResult("ble", seed, mode)
    pm = geom.L1_TO_L2
    k = pm[pieces.L1_PLANE].lipschitz
    for _ in range(samples):
        f, g = sm.pair()
        src = D(f, g)
        tgt = dist(geom.map_pieces(f, pm), geom.map_pieces(g, pm))
        lo, hi = float(src) / k, float(src) * k
        ok = leq(lo, tgt) and leq(tgt, hi)
        res.record("bi_lipschitz", ok, 0 if ok else min(abs(tgt - lo), abs(tgt - hi)))
        res.record("base_fixed", geom.map_pieces(EMPTY, pm).is_empty)
    return res


RUNNERS = {
    "metric": run_metric,
    "isometry": run_isometry,
    "geodesic": run_geodesic,
    "types": run_types,
    "bigon": run_bigon,
    "ble": run_ble,
}


def run_suite(name: str, seed: int, samples: int, mode: Mode = Mode.EXACT, corrupt: bool = False) -> SuiteResult:
    if name not in RUNNERS:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    start = time.perf_counter()
    res = RUNNERS[name](seed, samples, mode, corrupt)
    res.elapsed = time.perf_counter() - start
    return res
