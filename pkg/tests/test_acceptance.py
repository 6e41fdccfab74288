"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""
import math

import numpy as np
import pytest

from latnet import cli
from latnet.bounds import (InterferenceQuery, interference_oracle, radial_upper_bound, ring_averaging_lower_bound,
                           valid_radii, voronoi_upper_bound)
from latnet.lattice import Lattice, PathLoss
from latnet.line import (excess_coefficient_1d, line_interference_upper, optimal_link_distance, tdma_balanced,
                         tdma_balanced_opt, tdma_unidirectional, tdma_unidirectional_opt)
from latnet.specfun import hurwitz_zeta_ref, riemann_zeta, zeta_bound
from latnet.square import (LOWER_VARIANTS, UPPER_VARIANTS, near8_interference, packing_ratio, square_exact,
                           square_lower, square_tdma_balanced, square_tdma_scheme, square_tdma_simple, square_upper)
from latnet.triangular import (near6_interference, tri_lower, tri_lower_ring, tri_tdma_scheme, tri_upper,
                               triangular_exact)

SQ, TRI, LINE = Lattice.square(), Lattice.triangular(), Lattice.line()


def oracle(lat, alpha, z=None, rtol=1e-9, R=None):
    return interference_oracle(InterferenceQuery(lat, PathLoss(alpha), z), R, rtol=rtol)


def curvature(f, h=1e-3):
    """Half the second derivative at 0 by a Richardson-extrapolated central difference."""
    d = lambda k: (f(k) - 2 * f(0.0) + f(-k)) / (k * k)  # noqa: E731
    return (4 * d(h / 2) - d(h)) / 6


def test_01_square_exact(record_acceptance):
    target = 2 * math.pi**2 * 0.9159655942 / 3
    rel = abs(square_exact(4.0) - target) / target
    b = oracle(SQ, 4.0, R=200.0)
    ok = rel <= 1e-9 and b.lo <= square_exact(4.0) <= b.hi
    record_acceptance(1, ok, f"square_exact(4)={square_exact(4.0):.12f} rel={rel:.1e}; R=200 bracket [{b.lo:.10f}, {b.hi:.10f}]")
    assert ok


def test_02_square_ladder(record_acceptance):
    q = InterferenceQuery(SQ, PathLoss(4.0))
    v = {
        "simple_c": square_lower(4.0, "simple_c"),
        "closed_form": square_lower(4.0, "closed_form"),
        "rectangle": square_upper(4.0, "rectangle"),
        "radial_3_2": radial_upper_bound(q, 1.5).value,
        "radial_3_sqrt2": radial_upper_bound(q, 3 / math.sqrt(2)).value,
    }
    checks = [
        abs(v["simple_c"] - 5.76) <= 0.01,
        abs(v["closed_form"] - 5.83) <= 0.01,
        v["rectangle"] <= 6.14 + 0.005,
        abs(v["radial_3_2"] - 6.40) <= 0.01,
        6.0268 < v["radial_3_sqrt2"] < 6.40,
        v["radial_3_sqrt2"] == pytest.approx(square_upper(4.0, "radial_3_sqrt2"), rel=1e-12),
    ]
    ok = all(checks)
    record_acceptance(2, ok, ", ".join(f"{k}={x:.5f}" for k, x in v.items()))
    assert ok


def test_03_zeta_suite(record_acceptance):
    checks = {
        "zeta2": abs(riemann_zeta(2.0) - math.pi**2 / 6) <= 1e-12,
        "bounds_5/3": (abs(zeta_bound("hurwitz_upper", 2.0) - 5 / 3) <= 1e-12
                       and abs(zeta_bound("std_upper_rational", 2.0) - 5 / 3) <= 1e-12),
        "gap": abs(zeta_bound("hurwitz_upper", 2.0) - riemann_zeta(2.0) - (10 - math.pi**2) / 6) <= 1e-12,
        "half_shift": all(abs(hurwitz_zeta_ref(a, 0.5) / ((2**a - 1) * riemann_zeta(a)) - 1) <= 1e-10
                          for a in (1.5, 2, 3, 4, 6)),
    }
    grid = np.linspace(2, 4, 2001)
    worst = max((zeta_bound("std_upper_rational", a) - riemann_zeta(a)) / riemann_zeta(a) for a in grid)
    checks["rational_1.5%"] = worst <= 0.015
    ok = all(checks.values())
    record_acceptance(3, ok, f"{sum(checks.values())}/{len(checks)} checks; max rational-bound error on [2,4] = {worst:.4%}")
    assert ok


def _sandwich_cases():
    """Yield (label, lower values, oracle bracket, upper values)."""
    for a in (1.5, 2.0, 3.0, 4.0, 6.0):
        for z in (0.0, 0.1, 0.25, 0.5, -0.5):
            lo = [zeta_bound("hurwitz_lower", a, z) + zeta_bound("hurwitz_lower", a, -z)]
            hi = [line_interference_upper(a, z)]
            if z == 0.0:
                lo += [2 * zeta_bound("std_lower_rational", a), 2 * zeta_bound("std_lower_loose", a)]
                hi += [2 * zeta_bound("std_upper_rational", a)]
            yield f"line a={a} z={z}", lo, oracle(LINE, a, (z,)), hi
    for a in (2.5, 3.0, 4.0, 5.0, 6.0):
        q = InterferenceQuery(SQ, PathLoss(a))
        lo = [square_lower(a, v) for v in LOWER_VARIANTS] + [ring_averaging_lower_bound(q).value]
        hi = [square_upper(a, v) for v in UPPER_VARIANTS] + [radial_upper_bound(q, r).value for r in valid_radii(q, 3.0)]
        if a >= 3:
            hi.append(voronoi_upper_bound(q, 1.5).value)
        yield f"square a={a}", lo, oracle(SQ, a, rtol=1e-8), hi
        q = InterferenceQuery(TRI, PathLoss(a))
        lo = [tri_lower(a), tri_lower_ring(a), ring_averaging_lower_bound(q).value]
        hi = [tri_upper(a, "near6"), tri_upper(a, "near18")] + [radial_upper_bound(q, r).value for r in valid_radii(q, 3.0)]
        if a >= 3:
            hi.append(voronoi_upper_bound(q, 1.5).value)
        yield f"triangular a={a}", lo, oracle(TRI, a, rtol=1e-8), hi
    for a in (3.0, 4.0, 5.0):
        for z in ((0.1, 0.0), (0.25, 0.25), (0.4, 0.1)):
            q = InterferenceQuery(SQ, PathLoss(a), z)
            hi = [voronoi_upper_bound(q, 1.5).value] + [radial_upper_bound(q, r).value for r in valid_radii(q, 3.0)]
            yield f"square a={a} z={z}", [ring_averaging_lower_bound(q).value], oracle(SQ, a, z), hi
    for a in (3.0, 3.5, 4.0, 5.0):
        for r in (0.1, 0.25, 0.45):
            z = (r, 0.0)
            q = InterferenceQuery(TRI, PathLoss(a), z)
            lo = [tri_lower(a) + 1.5 * a * a * r * r, ring_averaging_lower_bound(q).value]
            hi = [voronoi_upper_bound(q, 1.5).value] + [radial_upper_bound(q, rb).value for rb in valid_radii(q, 3.0)]
            yield f"triangular a={a} r={r}", lo, oracle(TRI, a, z), hi
    for a in (2.0, 3.0, 4.0):
        for m in range(2, 13):
            u = tdma_unidirectional(a, m)
            yield f"unidirectional a={a} m={m}", [u.lower], u.interference, [u.upper]
            b = tdma_balanced(a, m)
            yield (f"balanced a={a} m={m}", [b.lower, b.extras["lower_rational"]], b.interference,
                   [b.upper, b.extras["upper_hurwitz"] * (1 + 1e-13)])
    for m in range(3, 13):
        s = square_tdma_simple(4.0, m)
        yield f"square simple m={m}", [], s.interference, [s.radial_bound.value]
        s = square_tdma_balanced(4.0, m)
        yield f"square balanced m={m}", [], s.interference, [s.radial_bound.value]


def test_04_sandwich(record_acceptance):
    n, bad = 0, []
    for label, lows, b, highs in _sandwich_cases():
        n += len(lows) + len(highs)
        bad += [f"{label} lower {x}" for x in lows if not x <= b.lo]
        bad += [f"{label} upper {x}" for x in highs if not x >= b.hi]
    ok = not bad
    record_acceptance(4, ok, f"{n} bound evaluations, {len(bad)} violations" + (f": {bad[:3]}" if bad else ""))
    assert ok


def test_05_one_dimensional_optima(record_acceptance):
    z2, z4 = optimal_link_distance(2.0)[0], optimal_link_distance(4.0)[0]
    uni = {a: tdma_unidirectional_opt(a) for a in (1.5, 2, 3, 4, 6, 10, 20)}
    m_real = [tdma_balanced_opt(a)[0] for a in np.arange(2.0, 6.95, 0.1)]
    t5 = tdma_unidirectional(2.0, 5).approx_throughput
    t4 = tdma_balanced(2.0, 4).approx_throughput
    checks = [abs(z2 - 0.224) <= 0.003, abs(z4 - 0.222) <= 0.003, all(v in (4, 5) for v in uni.values()),
              all(3 <= x <= 4 for x in m_real), abs(t5 - 0.60) <= 0.05, abs(t4 - 0.64) <= 0.05]
    ok = all(checks)
    record_acceptance(5, ok, f"z_opt={z2:.5f},{z4:.5f}; argmax={sorted(set(uni.values()))}; "
                             f"m_real in [{min(m_real):.3f},{max(m_real):.3f}]; T5={t5:.4f}; T4={t4:.4f}")
    assert ok


def test_06_balanced_closed_forms(record_acceptance):
    worst, lower_ok = 0.0, True
    for a in (2.0, 3.0, 4.0):
        for m in (2, 3):
            r = tdma_balanced(a, m)
            worst = max(worst, abs(r.extras["closed_form"] - r.interference.value) / r.interference.value)
        for m in range(2, 13):
            r = tdma_balanced(a, m)
            lower_ok &= 2 * m**-a * riemann_zeta(a) < r.interference.lo
    ok = worst <= 1e-8 and lower_ok
    record_acceptance(6, ok, f"max closed-form vs oracle rel diff {worst:.1e}; lower bound below oracle: {lower_ok}")
    assert ok


def test_07_offset_coefficients(record_acceptance):
    errs = []
    for a in (2.0, 3.0, 4.0):
        fd = curvature(lambda z: line_interference_upper(a, z))
        errs.append(abs(fd / excess_coefficient_1d(a).c2 - 1))
    for a in (3.0, 4.0, 5.0):
        c8 = a * a * (1 + 2 ** (-a / 2 - 1))
        for d in ("axial", "diagonal"):
            errs.append(abs(curvature(lambda r: near8_interference(a, r, d)) / c8 - 1))
        errs.append(abs(curvature(lambda r: near6_interference(a, r)) / (1.5 * a * a) - 1))
    ok = max(errs) <= 1e-6
    record_acceptance(7, ok, f"{len(errs)} finite-difference curvatures, max rel error {max(errs):.1e}")
    assert ok


def test_08_normalization_limits(record_acceptance):
    ex = square_exact(4.0)
    r_simple = square_tdma_simple(4.0, 16).normalized / ex
    r_bal = square_tdma_balanced(4.0, 16).normalized / ex
    u = tdma_unidirectional(4.0, 16)
    r_line = 16**4 * u.interference.value / (2 * riemann_zeta(4.0))
    ratios = {"square simple": r_simple, "square balanced": r_bal, "line unidirectional": r_line}
    ok = all(abs(x - 1) <= 0.02 for x in ratios.values())
    record_acceptance(8, ok, "; ".join(f"{k} {x:.4f}" for k, x in ratios.items()))
    assert ok


def test_09_triangular_crossover(record_acceptance):
    rs = np.round(np.arange(0.0, 0.905, 0.01), 2)
    curves = {a: [oracle(TRI, a, (r, 0.0), rtol=1e-8) for r in rs] for a in (3.0, 3.5, 4.0, 5.0)}
    diff = [b.value - c.value for b, c in zip(curves[5.0], curves[3.0])]
    cross = [r for r, d in zip(rs, diff) if d > 0]
    viol = [(a, r) for a, cur in curves.items() for r, b in zip(rs, cur)
            if r <= 0.45 and b.lo < tri_lower(a) + 1.5 * a * a * r * r]
    ok = diff[0] < 0 and bool(cross) and cross[0] < 0.9 and not viol
    record_acceptance(9, ok, f"I5<I3 at r=0: {diff[0] < 0}; first reversal r*={cross[0] if cross else None}; "
                             f"quadratic-bound violations {len(viol)}")
    assert ok


def test_10_constructions(record_acceptance):
    sq_ok = all(np.allclose(square_tdma_scheme("balanced", m).nearest_distances(4), math.sqrt(m * m + 1))
                for m in range(2, 13))
    tri_ok = True
    for m in (2, 4, 6, 8):
        d = tri_tdma_scheme("balanced_rows", m).nearest_distances(6)
        tri_ok &= np.allclose(d[:4], m) and np.allclose(d[4:], math.sqrt((m / 2 + 1) ** 2 + 3 * m * m / 4))
    rh_ok = all(abs(tri_tdma_scheme("rhombus", m).nearest_distances(1)[0] - (m - 1)) < 1e-12 for m in (4, 6, 8))
    excess = {m: packing_ratio(m) - 1 for m in range(2, 31)}
    outside = [m for m, e in excess.items() if not 0.03 <= e <= 0.05]
    ok = sq_ok and tri_ok and rh_ok and not outside
    record_acceptance(10, ok, f"square sqrt(m^2+1): {sq_ok}; triangular balanced: {tri_ok}; rhombus m-1: {rh_ok}; "
                              f"mean-six excess outside 3%-5% for m={outside} "
                              f"(range {min(excess.values()):.2%}..{max(excess.values()):.2%})")
    assert ok


def test_11_determinism(record_acceptance, tmp_path, monkeypatch):
    grid = cli.parse_grid("0..0.6:0.05")
    fixed = {"lattice": "triangular", "alpha": [3.0, 4.0], "tolerance": 1e-8}
    paths = []
    for i, threads in enumerate(("4", "4", "1")):
        monkeypatch.setenv("LATNET_THREADS", threads)
        p = tmp_path / f"run{i}.csv"
        cli.cmd_sweep("offset-curve", "r", grid, fixed, "csv", p)
        paths.append(p.read_bytes())
    monkeypatch.setenv("LATNET_THREADS", "1")
    j1 = cli.cmd_sweep("interference", "alpha", [2.5, 3.0, 4.0], {"lattice": "square"}, "json")
    monkeypatch.setenv("LATNET_THREADS", "8")
    j8 = cli.cmd_sweep("interference", "alpha", [2.5, 3.0, 4.0], {"lattice": "square"}, "json")
    repeat, threads = paths[0] == paths[1], paths[0] == paths[2] and j1 == j8
    ok = repeat and threads
    record_acceptance(11, ok, f"repeated runs identical: {repeat}; 1 vs 4/8 threads bit-identical: {threads}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
