import math

import mpmath
import numpy as np
import pytest

from latnet.bounds import InterferenceQuery, interference_oracle
from latnet.errors import DomainError
from latnet.lattice import Lattice, PathLoss, ring
from latnet.triangular import (TRI_DENSITY, near6_interference, tri_lower, tri_lower_ring, tri_offset, tri_tdma,
                               tri_tdma_scheme, tri_upper, triangular_exact)

TRI = Lattice.triangular()


def oracle(alpha, z=(0.0, 0.0), rtol=1e-9):
    return interference_oracle(InterferenceQuery(TRI, PathLoss(alpha), z), rtol=rtol)


@pytest.mark.parametrize("alpha", [2.5, 3.0, 4.0, 6.0])
def test_exact_against_mpmath(alpha):
    s = alpha / 2
    ref = float(6 * mpmath.zeta(s) * mpmath.dirichlet(s, [0, 1, -1]))
    assert triangular_exact(alpha) == pytest.approx(ref, rel=1e-13)


def test_values_alpha4():
    assert triangular_exact(4.0) == pytest.approx(7.71114573, abs=1e-8)
    assert tri_lower(4.0) == pytest.approx(7.583, abs=1e-3)
    assert tri_upper(4.0, "near18") == pytest.approx(7.879, abs=1e-3)
    assert tri_upper(4.0, "near6") == pytest.approx(6 + (4 * math.pi / math.sqrt(3)) * 0.75 / 2, rel=1e-12)


@pytest.mark.parametrize("alpha", [2.5, 3.0, 3.5, 4.0, 5.0, 6.0])
def test_sandwich(alpha):
    o = oracle(alpha)
    assert tri_lower(alpha) <= tri_lower_ring(alpha) < o.lo
    assert o.hi < tri_upper(alpha, "near18") <= tri_upper(alpha, "near6")


@pytest.mark.parametrize("k", range(1, 41))
def test_ring_count(k):
    assert ring(TRI, k).count == 6 * k


def test_near6_closed_form():
    a, r = 3.5, 0.3
    ref = ((1 - r) ** -a + (1 + r) ** -a + 2 * (1 - r * (1 - r)) ** (-a / 2) + 2 * (1 + r * (1 + r)) ** (-a / 2))
    assert near6_interference(a, r) == pytest.approx(ref, rel=1e-14)


@pytest.mark.parametrize("alpha", [3.0, 4.0, 5.0])
def test_near6_curvature(alpha):
    f = lambda r: near6_interference(alpha, r)  # noqa: E731
    d = lambda h: (f(h) - 2 * f(0.0) + f(-h)) / (h * h)  # noqa: E731
    fd = (4 * d(5e-4) - d(1e-3)) / 3 / 2
    assert fd == pytest.approx(1.5 * alpha**2, rel=1e-6)


@pytest.mark.parametrize("alpha", [3.0, 3.5, 4.0, 5.0])
def test_offset_bound(alpha):
    for r in np.arange(0.0, 0.46, 0.05):
        exact, quad = tri_offset(alpha, r)
        assert exact.lo >= quad
    with pytest.raises(DomainError):
        tri_offset(alpha, 0.5)


def _spread(alpha, r):
    vals = [oracle(alpha, tuple(r * np.array([math.cos(t), math.sin(t)])), 1e-8).value
            for t in np.linspace(0, math.pi / 6, 4)]
    return (max(vals) - min(vals)) / min(vals)


@pytest.mark.parametrize("alpha", [3.0, 4.0, 5.0])
def test_direction_insensitivity(alpha):
    assert _spread(alpha, 0.1) <= 1e-4
    assert _spread(alpha, 0.15) <= 1e-3
    # hexagonal symmetry leaves the sixth order as the first anisotropic term
    assert _spread(alpha, 0.2) / _spread(alpha, 0.1) == pytest.approx(64, rel=0.3)


def test_crossover():
    rs = np.round(np.arange(0.0, 0.91, 0.01), 2)
    d = [oracle(5.0, (r, 0.0), 1e-7).value - oracle(3.0, (r, 0.0), 1e-7).value for r in rs]
    assert d[0] < 0
    assert any(x > 0 for x in d)


def test_scheme_generators():
    m = 5
    rh = tri_tdma_scheme("rhombus", m)
    assert np.allclose(rh.transmitter_generator, ((m, -0.5), (0, m * math.sqrt(3) / 2)))
    par = tri_tdma_scheme("parallelogram", m)
    assert np.allclose(par.transmitter_generator, ((m + 1, -m / 2), (0, m * math.sqrt(3) / 2)))
    for s in (rh, par, tri_tdma_scheme("balanced_rows", m)):
        det = abs(np.linalg.det(np.array(s.transmitter_generator))) / len(s.offsets)
        assert 1 / det == pytest.approx(s.density)
    assert rh.density == pytest.approx(TRI_DENSITY / m**2)
    assert par.density == pytest.approx(TRI_DENSITY / (m * (m + 1)))


def test_patterns_live_on_the_lattice():
    for kind in ("rhombus", "parallelogram", "balanced_rows"):
        for m in (2, 3, 4):
            s = tri_tdma_scheme(kind, m)
            pts = s.point_set.points(5.0 * m)
            assert all(TRI.contains(p) for p in pts)


@pytest.mark.parametrize("m", [4, 6, 8])
def test_rhombus_nearest(m):
    assert tri_tdma_scheme("rhombus", m).nearest_distances(1)[0] == pytest.approx(m - 1)


@pytest.mark.parametrize("m", [2, 3, 4, 6, 8])
def test_balanced_rows(m):
    d = tri_tdma_scheme("balanced_rows", m).nearest_distances(6)
    assert np.allclose(d[:4], m)
    assert np.allclose(d[4:6], math.sqrt((m / 2 + 1) ** 2 + 3 * m * m / 4))


@pytest.mark.parametrize("m", [2, 4, 6])
def test_normalized_ordering(m):
    r = {k: tri_tdma(4.0, tri_tdma_scheme(k, m)).normalized for k in ("rhombus", "parallelogram", "balanced_rows")}
    assert r["balanced_rows"] <= r["parallelogram"] <= r["rhombus"]


def test_random_packing_density():
    # points kept at mutual distance >= 1 never beat the triangular density
    rng = np.random.default_rng(7)
    L = 12.0
    pts = []
    for p in rng.uniform(0, L, size=(20000, 2)):
        if not pts or np.min(np.linalg.norm(np.array(pts) - p, axis=1)) >= 1.0:
            pts.append(p)
    assert len(pts) <= TRI_DENSITY * (L + 1) ** 2
