"""Generic interference bounds and the brute-force lattice-sum oracle.

All routines evaluate ``I(z) = sum_{x in S, x != o} |x - z|**-alpha`` for a
lattice or periodic point set ``S`` that contains the origin (the desired
transmitter) and a receiver offset ``z``.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, InvalidNearSetError
from .lattice import (
    DEFAULT_POINT_LIMIT,
    Lattice,
    PathLoss,
    PeriodicSet,
    _origin_cell,
    cell_distances,
)

__all__ = [
    "BoundedValue",
    "InterferenceQuery",
    "interference_oracle",
    "voronoi_upper_bound",
    "radial_upper_bound",
    "averaging_lower_bound",
    "ring_averaging_lower_bound",
    "valid_radii",
    "poisson_mean_interference",
    "disk_complement_integral",
    "thread_count",
]

KINDS = ("upper", "lower", "approximation", "bracketed", "exact")


@dataclass(frozen=True)
class BoundedValue:
    """A number together with what is known about it.

    ``kind`` is one of ``upper``, ``lower``, ``approximation``, ``exact`` or
    ``bracketed``. Bracketed values carry a certified interval
    ``(lo, hi)`` containing the true quantity; ``value`` is its midpoint.
    """

    value: float
    kind: str
    bracket: tuple[float, float] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if not math.isfinite(self.value):
            raise ValueError("value must be finite")
        if self.kind == "bracketed":
            if self.bracket is None:
                raise ValueError("bracketed values need a bracket")
            lo, hi = self.bracket
            if not lo <= self.value <= hi:
                raise ValueError(f"value {self.value} outside bracket {self.bracket}")

    @property
    def lo(self) -> float:
        return self.bracket[0] if self.bracket else self.value

    @property
    def hi(self) -> float:
        return self.bracket[1] if self.bracket else self.value

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @classmethod
    def from_bracket(cls, lo: float, hi: float) -> "BoundedValue":
        return cls(0.5 * (lo + hi), "bracketed", (lo, hi))


@dataclass(frozen=True)
class InterferenceQuery:
    """Interference at offset ``z`` from a point set, excluding the origin.

    Parameters
    ----------
    lattice : Lattice or PeriodicSet
        The transmitters; must contain the origin.
    loss : PathLoss
    z : sequence of float, optional
        Receiver position; defaults to the origin.
    r_b : float, optional
        Radius for the radial bound, validated by ``radial_upper_bound``.
    """

    lattice: Lattice | PeriodicSet
    loss: PathLoss
    z: tuple[float, ...] | None = None
    r_b: float | None = None

    def __post_init__(self):
        d = self.lattice.dimension
        z = (0.0,) * d if self.z is None else tuple(float(c) for c in np.atleast_1d(self.z))
        if len(z) != d:
            raise DomainError(f"offset must have {d} components")
        if not all(math.isfinite(c) for c in z):
            raise DomainError("offset must be finite")
        object.__setattr__(self, "z", z)
        self.loss.check_dimension(d)
        pset = self.points
        if not any(np.allclose(o, 0.0) for o in pset.offset_array):
            raise DomainError("the point set must contain the origin")
        if isinstance(self.lattice, Lattice) and self.znorm >= self.lattice.min_norm:
            raise DomainError(f"|z| = {self.znorm} must be below the minimum lattice norm {self.lattice.min_norm}")
        near = pset.points(self.znorm + 1e-9 + pset.lattice.min_norm)
        if len(near) and np.min(np.linalg.norm(near - self.zvec, axis=1)) == 0.0:
            raise DomainError("the receiver coincides with an interferer")

    @property
    def points(self) -> PeriodicSet:
        return PeriodicSet.of(self.lattice)

    @property
    def zvec(self) -> np.ndarray:
        return np.array(self.z, dtype=float)

    @property
    def znorm(self) -> float:
        return float(np.linalg.norm(self.zvec))

    @property
    def alpha(self) -> float:
        return self.loss.alpha


def thread_count() -> int:
    """Worker threads for the oracle, capped by ``LATNET_THREADS``."""
    n = os.cpu_count() or 1
    env = os.environ.get("LATNET_THREADS")
    if env:
        try:
            n = min(n, max(1, int(env)))
        except ValueError:
            raise DomainError(f"LATNET_THREADS must be an integer, got {env!r}") from None
    return n


# ---------------------------------------------------------------------------
# tail integrals


def disk_complement_integral(alpha: float, s: float, A: float) -> float:
    """``int_{|y| > A} |y - z|**-alpha dy`` in the plane with ``|z| = s < A``.

    The circular mean of ``|y - z|**-alpha`` over ``|y| = r`` is
    ``r**-alpha 2F1(alpha/2, alpha/2; 1; s**2/r**2)``; integrating the
    hypergeometric series term by term gives a rapidly convergent sum.
    """
    if not (alpha > 2 and 0 <= s < A):
        raise DomainError("need alpha > 2 and |z| < A")
    q = (s / A) ** 2
    h = 0.5 * alpha
    coef, qn, total = 1.0, 1.0, []
    for n in range(200):
        term = coef * coef * qn / (alpha - 2.0 + 2.0 * n)
        total.append(term)
        if term < 1e-18 * total[0]:
            break
        coef *= (h + n) / (n + 1.0)
        qn *= q
    return 2.0 * math.pi * A ** (2.0 - alpha) * math.fsum(total)


def _jensen_gap_tail(alpha: float, second_moment: float, volume: float, A: float, c: float) -> float:
    """Bound on the summed cell-average defects beyond radius ``A``.

    For a centrally symmetric cell the mean of ``f`` over the cell differs
    from ``f`` at the centre by at most ``sup|Hess f| * E|U - x|^2 / 2``.
    Summing ``(r - c)**-(alpha + 2)`` over the far points is bounded by an
    integral with ``A = R - rho`` and ``c = 2 rho + |z|``.
    """
    beta = alpha + 2.0
    a = A - c
    integral = a ** (2.0 - beta) / (beta - 2.0) + c * a ** (1.0 - beta) / (beta - 1.0)
    return 0.5 * second_moment * alpha * (alpha + 1.0) * 2.0 * math.pi * integral / volume


def _polar_moment(poly: np.ndarray) -> float:
    """``int |y|^2 dy`` over a polygon containing the origin."""
    x, y = poly[:, 0], poly[:, 1]
    x1, y1 = np.roll(x, -1), np.roll(y, -1)
    cr = x * y1 - x1 * y
    return float(np.sum(cr * (x * x + x * x1 + x1 * x1 + y * y + y * y1 + y1 * y1)) / 12.0)


# ---------------------------------------------------------------------------
# truncated sums


def _rows_2d(lat: Lattice, c: np.ndarray, R: float):
    """Row descriptors (w, u_lo, u_hi) covering coset points with |x| <= R."""
    b = lat.reduced_basis()
    b1, b2 = b[:, 0], b[:, 1]
    n1 = float(b1 @ b1)
    cross = float(b1[0] * b2[1] - b1[1] * b2[0])
    cc = float(b1[0] * c[1] - b1[1] * c[0])
    span = R * math.sqrt(n1)
    v_a, v_b = sorted(((-span - cc) / cross, (span - cc) / cross))
    rows = []
    for v in range(math.floor(v_a), math.ceil(v_b) + 1):
        w = v * b2 + c
        bb = float(b1 @ w)
        disc = bb * bb - n1 * (float(w @ w) - R * R)
        if disc < 0:
            continue
        sq = math.sqrt(disc)
        rows.append((w, math.floor((-bb - sq) / n1) - 1, math.ceil((-bb + sq) / n1) + 1))
    return b1, rows


def _row_sum(b1, w, u0, u1, z, alpha, R2):
    u = np.arange(u0, u1 + 1, dtype=float)
    x = u[:, None] * b1[None, :] + w[None, :]
    n2 = np.einsum("ij,ij->i", x, x)
    keep = (n2 <= R2) & (n2 > 0.0)
    d = x[keep] - z
    d2 = np.einsum("ij,ij->i", d, d)
    return float(np.sum(np.power(d2, -0.5 * alpha))), int(np.count_nonzero(n2 <= R2))


def _partial_sum_2d(pset: PeriodicSet, z: np.ndarray, alpha: float, R: float, threads: int):
    """Sum over points with norm <= R and the per-coset point counts."""
    tasks, counts_idx = [], []
    for ci, c in enumerate(pset.offset_array):
        b1, rows = _rows_2d(pset.lattice, c, R)
        for w, u0, u1 in rows:
            tasks.append((b1, w, u0, u1))
            counts_idx.append(ci)
    R2 = R * R
    run = lambda t: _row_sum(t[0], t[1], t[2], t[3], z, alpha, R2)
    if threads > 1 and len(tasks) > 64:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(run, tasks))
    else:
        results = [run(t) for t in tasks]
    # fsum is correctly rounded, so the total does not depend on scheduling
    total = math.fsum(r[0] for r in results)
    counts = np.zeros(len(pset.offsets), dtype=np.int64)
    for ci, r in zip(counts_idx, results):
        counts[ci] += r[1]
    return total, counts


_CHUNK_1D = 1 << 16


def _partial_sum_1d(pset: PeriodicSet, z: float, alpha: float, R: float, threads: int):
    P = pset.lattice.cell_volume
    tasks = []
    for c in pset.offset_array[:, 0]:
        k0, k1 = math.ceil((-R - c) / P), math.floor((R - c) / P)
        for s in range(k0, k1 + 1, _CHUNK_1D):
            tasks.append((c, s, min(s + _CHUNK_1D - 1, k1)))

    def run(t):
        c, s, e = t
        x = c + P * np.arange(s, e + 1, dtype=float)
        x = x[(x != 0.0) & (np.abs(x) <= R)]
        return float(np.sum(np.abs(x - z) ** -alpha))

    if threads > 1 and len(tasks) > 4:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(run, tasks))
    else:
        parts = [run(t) for t in tasks]
    return math.fsum(parts)


def _tail_1d(pset: PeriodicSet, z: float, alpha: float, R: float) -> tuple[float, float]:
    """Bracket for the sum over points with ``|x| > R`` in one dimension."""
    P = pset.lattice.cell_volume
    lo = hi = 0.0
    a1 = alpha - 1.0
    for c in pset.offset_array[:, 0]:
        # right side: t0 is the first coset point beyond R
        t0 = c + P * (math.floor((R - c) / P) + 1)
        # left side: mirror the first point below -R
        t1 = -(c + P * (math.ceil((-R - c) / P) - 1))
        for t, zz in ((t0, z), (t1, -z)):
            lo += (t - zz) ** -a1 / (a1 * P)
            # convexity: each term is at most the mean over its centred cell
            hi += (t - 0.5 * P - zz) ** -a1 / (a1 * P)
    return lo, hi


def _tail_2d(pset: PeriodicSet, znorm: float, alpha: float, R: float, counts) -> tuple[float, float]:
    """Bracket for the sum over points with ``|x| > R`` in the plane."""
    lat = pset.lattice
    V = lat.cell_volume
    cell = _origin_cell(lat)
    rho = float(np.max(np.linalg.norm(cell, axis=1)))
    m2 = _polar_moment(cell) / V
    if R - rho - znorm <= 2 * rho:
        raise DomainError("truncation radius too small for a certified tail")
    j_out = disk_complement_integral(alpha, znorm, R + rho)
    f_hi = (R - rho - znorm) ** -alpha
    f_lo = (R + rho + znorm) ** -alpha
    gap = _jensen_gap_tail(alpha, m2, V, R - rho, 2 * rho + znorm)
    lo = hi = 0.0
    for n in counts:
        shell = max(math.pi * (R + rho) ** 2 - V * float(n), 0.0)
        lo += (shell * f_lo + j_out) / V - gap
        hi += (shell * f_hi + j_out) / V + gap
    return max(lo, 0.0), hi


def _oracle_at(q: InterferenceQuery, R: float, threads: int) -> tuple[float, float]:
    pset = q.points
    alpha = q.alpha
    if q.lattice.dimension == 1:
        partial = _partial_sum_1d(pset, q.z[0], alpha, R, threads)
        lo, hi = _tail_1d(pset, q.z[0], alpha, R)
    else:
        partial, counts = _partial_sum_2d(pset, q.zvec, alpha, R, threads)
        lo, hi = _tail_2d(pset, q.znorm, alpha, R, counts)
    # allowance for rounding in the powers and the chunked sums
    slack = 64.0 * np.finfo(float).eps * partial
    return partial + lo - slack, partial + hi + slack


def _point_budget_radius(pset: PeriodicSet, limit: float) -> float:
    if pset.dimension == 1:
        return 0.5 * limit * pset.cell_volume
    return math.sqrt(limit * pset.cell_volume / math.pi)


def interference_oracle(q: InterferenceQuery, truncation_radius: float | None = None,
                        rtol: float = 1e-8, threads: int | None = None,
                        max_points: float = 4e7) -> BoundedValue:
    """Brute-force interference with a certified truncation bracket.

    Points with norm at most ``R`` are summed directly. The remaining points
    are bracketed by integrals over their Voronoi cells: the region outside
    ``R + rho`` (``rho`` the covering radius) is integrated in closed form,
    the thin shell between is bounded by its exact area times the extreme
    loss values, and a second-order bound on the cell-average defect is
    added on both sides.

    Parameters
    ----------
    q : InterferenceQuery
    truncation_radius : float, optional
        Fixed ``R``. When omitted ``R`` grows until the bracket width is at
        most ``rtol`` times the value or the point budget is exhausted.
    rtol : float
        Target relative width for the adaptive mode.
    threads : int, optional
        Worker threads; defaults to ``thread_count()``. The result is
        bit-identical for any thread count.
    max_points : float
        Point budget for the adaptive mode.

    Returns
    -------
    BoundedValue
        Kind ``bracketed`` whose interval contains ``I(z)``.
    """
    if threads is None:
        threads = thread_count()
    pset = q.points
    scale = math.sqrt(pset.lattice.cell_volume) if pset.dimension == 2 else pset.lattice.cell_volume
    rmin = 10.0 * max(1.0, q.znorm)
    if truncation_radius is not None:
        R = float(truncation_radius)
        if R < rmin:
            raise DomainError(f"truncation radius must be at least {rmin}")
        if pset.dimension == 1 and 2 * R / pset.cell_volume * len(pset.offsets) > DEFAULT_POINT_LIMIT:
            from .errors import CapacityError
            raise CapacityError("truncation radius exceeds the point limit")
        return BoundedValue.from_bracket(*_oracle_at(q, R, threads))

    R = max(rmin, 32.0 * scale)
    rmax = max(R, _point_budget_radius(pset, max_points / len(pset.offsets)))
    while True:
        lo, hi = _oracle_at(q, R, threads)
        width, target = hi - lo, rtol * 0.5 * (lo + hi)
        if width <= target or R >= rmax:
            return BoundedValue.from_bracket(lo, hi)
        # the width decays roughly like R**-alpha
        grow = (width / (0.5 * target)) ** (1.0 / q.alpha)
        R = min(rmax, R * max(1.5, min(grow, 16.0)))


# ---------------------------------------------------------------------------
# Voronoi and radial upper bounds


def _polygon_rule(poly: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Collapsed Gauss-Legendre rule on a convex polygon star-shaped about 0."""
    t, w = np.polynomial.legendre.leggauss(n)
    t, w = 0.5 * (t + 1.0), 0.5 * w
    S, T = np.meshgrid(t, t, indexing="ij")
    WS, WT = np.meshgrid(w, w, indexing="ij")
    S, T, W = S.ravel(), T.ravel(), (WS * WT).ravel()
    nodes, weights = [], []
    for p, q in zip(poly, np.roll(poly, -1, axis=0)):
        jac = abs(p[0] * q[1] - p[1] * q[0])
        nodes.append(S[:, None] * p[None, :] + (S * T)[:, None] * (q - p)[None, :])
        weights.append(W * S * jac)
    return np.concatenate(nodes), np.concatenate(weights)


def _cell_integrals(X: np.ndarray, z: np.ndarray, alpha: float, rule) -> np.ndarray:
    nodes, weights = rule
    out = np.empty(len(X))
    step = max(1, 2_000_000 // len(nodes))
    for s in range(0, len(X), step):
        d = X[s:s + step, None, :] + nodes[None, :, :] - z
        d2 = np.einsum("ijk,ijk->ij", d, d)
        out[s:s + step] = np.power(d2, -0.5 * alpha) @ weights
    return out


def voronoi_upper_bound(q: InterferenceQuery, near_set_radius: float,
                        cutoff: float | None = None, order: int = 8) -> BoundedValue:
    """Upper bound from exact near terms plus averages over far cells.

    Points with norm at most ``near_set_radius`` are summed exactly. Every
    other point is replaced by the mean loss over its Voronoi cell. Cells of
    points up to ``cutoff`` are integrated numerically (order ``order`` and
    ``2 order``, the difference is added as error); the cells beyond are
    bounded through the disk-complement integral and the area of the shell
    they leave inside ``cutoff + rho``.
    """
    if q.lattice.dimension != 2:
        raise DomainError("the Voronoi bound is implemented for planar point sets")
    pset, z, alpha = q.points, q.zvec, q.alpha
    lat = pset.lattice
    V = lat.cell_volume
    cell = _origin_cell(lat)
    rho = float(np.max(np.linalg.norm(cell, axis=1)))
    r_near = float(near_set_radius) * (1 + 1e-12)
    if cutoff is None:
        # overestimate of the shell term is about 2 pi alpha rho^2 Rc^-alpha / V
        cutoff = max(40.0 * max(r_near, rho), (2e7 * math.pi * alpha * rho**2 / V) ** (1 / alpha))
        cutoff = min(cutoff, math.sqrt(1e5 * V / math.pi))
    cutoff = max(float(cutoff), r_near + 4 * rho, 10 * q.znorm)

    pts = pset.points(cutoff)
    near = pts[np.linalg.norm(pts, axis=1) <= r_near]
    far = pts[np.linalg.norm(pts, axis=1) > r_near]
    clearance = q.loss.r_c + q.znorm
    if len(far) and np.min(cell_distances(lat, far, np.zeros(2))) < clearance - 1e-12:
        raise InvalidNearSetError("a far cell intersects the exclusion ball around the origin")
    near_sum = math.fsum(np.linalg.norm(near - z, axis=1) ** -alpha)

    dist = np.linalg.norm(far, axis=1)
    close = dist <= 20 * rho
    totals, err = [], 0.0
    for mask, n in ((close, max(order, 12)), (~close, max(order // 2, 3))):
        X = far[mask]
        if not len(X):
            continue
        a = _cell_integrals(X, z, alpha, _polygon_rule(cell, n))
        b = _cell_integrals(X, z, alpha, _polygon_rule(cell, 2 * n))
        totals.append(math.fsum(b))
        err += float(np.sum(np.abs(a - b)))
    mid = math.fsum(totals) / V

    # cells of every point within the cutoff (origin included) are accounted
    # for, so the rest of the disk of radius cutoff + rho has this area
    n_in = len(pts) + 1
    shell = max(math.pi * (cutoff + rho) ** 2 * len(pset.offsets) - V * n_in, 0.0)
    tail = (shell * (cutoff - rho - q.znorm) ** -alpha
            + len(pset.offsets) * disk_complement_integral(alpha, q.znorm, cutoff + rho)) / V
    return BoundedValue(near_sum + mid + tail + err / V + 1e-12 * (near_sum + mid), "upper")


def valid_radii(q: InterferenceQuery, radius: float) -> np.ndarray:
    """Sorted distinct cell distances ``rho_x`` up to ``radius`` that are admissible radii."""
    pset = q.points
    pts = pset.points(radius + 2 * pset.lattice.covering_radius)
    rho = np.unique(np.round(cell_distances(pset.lattice, pts, np.zeros(pset.dimension)), 12))
    return rho[(rho > q.loss.r_c + q.znorm) & (rho <= radius)]


def radial_upper_bound(q: InterferenceQuery, r_b: float | None = None) -> BoundedValue:
    """Exact near terms plus a continuum of equal density outside ``r_b``.

    Points whose cells come closer than ``r_b`` to the origin are summed
    exactly; the cells of all other points lie outside the disk of radius
    ``r_b``, so their contribution is at most
    ``(2 pi / V) (r_b - |z|)**(2 - alpha) / (alpha - 2)`` with ``V`` the
    area per point.
    """
    if q.lattice.dimension != 2:
        raise DomainError("the radial bound is defined for planar point sets")
    r_b = q.r_b if r_b is None else r_b
    if r_b is None:
        raise DomainError("a radius r_b is required")
    r_b = float(r_b)
    pset, z, alpha = q.points, q.zvec, q.alpha
    if r_b - q.znorm <= 0:
        raise DomainError(f"r_b = {r_b} must exceed |z| = {q.znorm}")
    if r_b < q.loss.r_c + q.znorm - 1e-9:
        raise DomainError("r_b must be at least r_c + |z|")
    rho_cov = pset.lattice.covering_radius
    pts = pset.points(r_b + 2 * rho_cov)
    rho = cell_distances(pset.lattice, pts, np.zeros(2))
    if not np.any(np.abs(rho - r_b) <= 1e-9):
        raise DomainError(f"r_b = {r_b} is not the cell distance of any point")
    near = pts[rho < r_b - 1e-9]
    near_sum = math.fsum(np.linalg.norm(near - z, axis=1) ** -alpha)
    tail = q.loss.radial_tail(r_b - q.znorm, 2) / pset.cell_volume
    return BoundedValue(near_sum + tail, "upper")


def poisson_mean_interference(density: float, r_b: float, alpha: float) -> float:
    """Mean interference at the origin from a Poisson field outside radius ``r_b``.

    Campbell's theorem gives ``density * int_{|y|>r_b} |y|**-alpha dy``.
    """
    if alpha <= 2:
        raise DomainError("alpha must exceed 2")
    return density * 2.0 * math.pi * r_b ** (2.0 - alpha) / (alpha - 2.0)


# ---------------------------------------------------------------------------
# averaging lower bounds


def averaging_lower_bound(points, loss: PathLoss, z, groups: Sequence[Sequence[int]] = ()) -> BoundedValue:
    """Lower bound replacing each group by copies of its mean distance.

    The radial loss is convex, so for a group ``L`` the sum of
    ``l(|x - z|)`` over ``L`` is at least ``|L| l(mean |x - z|)``. Points not
    in any group contribute exactly.

    Parameters
    ----------
    points : array_like, shape (n, d)
    loss : PathLoss
    z : array_like, shape (d,)
    groups : sequence of index sequences
        Disjoint subsets of ``range(n)``.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    z = np.asarray(z, dtype=float).reshape(pts.shape[1])
    d = np.linalg.norm(pts - z, axis=1)
    used = np.zeros(len(pts), dtype=bool)
    parts = []
    clearance = loss.r_c + float(np.linalg.norm(z))
    for g in groups:
        idx = np.asarray(list(g), dtype=int)
        if len(idx) == 0:
            continue
        if np.any(used[idx]) or len(np.unique(idx)) != len(idx):
            raise DomainError("groups must be disjoint")
        used[idx] = True
        if np.any(np.linalg.norm(pts[idx], axis=1) < clearance):
            raise DomainError("grouped points must lie outside the ball of radius r_c + |z|")
        parts.append(len(idx) * float(loss(math.fsum(d[idx]) / len(idx))))
    parts.extend(np.asarray(loss(d[~used]), dtype=float).tolist())
    return BoundedValue(math.fsum(parts), "lower")


def ring_averaging_lower_bound(q: InterferenceQuery, n_rings: int = 60,
                               exact_rings: int = 1) -> BoundedValue:
    """Averaging bound for square or triangular lattices with each ring as a group.

    The first ``exact_rings`` rings, and any ring whose points come closer
    to the origin than ``r_c + |z|``, are summed exactly instead of grouped.
    """
    from .lattice import ring

    lat = q.lattice
    if not isinstance(lat, Lattice) or lat.family not in ("square", "triangular"):
        raise DomainError("ring averaging needs a square or triangular lattice")
    rings = [ring(lat, k).points for k in range(1, n_rings + 1)]
    pts = np.concatenate(rings)
    groups, start = [], 0
    clearance = q.loss.r_c + q.znorm
    for k, r in enumerate(rings, start=1):
        if k > exact_rings and np.min(np.linalg.norm(r, axis=1)) >= clearance:
            groups.append(range(start, start + len(r)))
        start += len(r)
    return averaging_lower_bound(pts, q.loss, q.zvec, groups)
