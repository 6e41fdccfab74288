"""Triangular lattice: closed-form bounds, receiver offset and TDMA patterns."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import BoundedValue, InterferenceQuery, interference_oracle
from .errors import ConstructionError, DomainError
from .lattice import G_TRI, Lattice, PathLoss, PeriodicSet
from .specfun import hurwitz_zeta_ref, riemann_zeta

__all__ = [
    "TRI_DENSITY",
    "triangular_exact",
    "tri_lower",
    "tri_lower_ring",
    "tri_upper",
    "near6_interference",
    "tri_offset",
    "TriTdmaScheme",
    "TriTdmaResult",
    "tri_tdma_scheme",
    "tri_tdma",
]

SQRT3 = math.sqrt(3.0)
TRI_DENSITY = 2.0 / SQRT3
_RING_RATIO = 4.0 / (2.0 + SQRT3)


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 2.0:
        raise DomainError(f"alpha must exceed 2, got {alpha}")
    return alpha


def triangular_exact(alpha: float) -> float:
    """Interference at the origin, ``6 zeta(s) L(s, chi_-3)`` with ``s = alpha/2``.

    ``L(s, chi_-3) = 3**-s (zeta(s, 1/3) - zeta(s, 2/3))`` is the Dirichlet
    L-function of the nontrivial character modulo 3.
    """
    s = _check_alpha(alpha) / 2.0
    ell = 3.0**-s * (hurwitz_zeta_ref(s, 1.0 / 3.0) - hurwitz_zeta_ref(s, 2.0 / 3.0))
    return 6.0 * riemann_zeta(s) * ell


def tri_lower_ring(alpha: float) -> float:
    """Hexagonal-ring lower bound ``6 + 6 (4/(2 + sqrt 3))**alpha (zeta(alpha - 1) - 1)``."""
    alpha = _check_alpha(alpha)
    return 6.0 + 6.0 * _RING_RATIO**alpha * (riemann_zeta(alpha - 1.0) - 1.0)


def tri_lower(alpha: float) -> float:
    """Closed-form lower bound: the ring bound with a rational bound on ``zeta(alpha - 1)``."""
    alpha = _check_alpha(alpha)
    b = alpha - 1.0
    # 6 (zeta_lower(b) - 1) written with powers scaled by 6**-b
    t3, t2, t6 = 2.0**-b, 3.0**-b, 6.0**-b
    return 6.0 + _RING_RATIO**alpha * 6.0 * (t3 + t2 + t6) / (1.0 - t3 - t2 - t6)


def tri_upper(alpha: float, variant: str = "near18") -> float:
    """Radial upper bounds.

    ``near6`` sums the six nearest points and integrates outside
    ``2/sqrt 3``; ``near18`` sums two rings and integrates outside
    ``sqrt(13/3)``.
    """
    alpha = _check_alpha(alpha)
    k = 2.0 * math.pi * TRI_DENSITY / (alpha - 2.0)
    if variant == "near6":
        return 6.0 + k * (2.0 / SQRT3) ** (2.0 - alpha)
    if variant == "near18":
        return 6.0 * (1.0 + 2.0**-alpha + 3.0 ** (-alpha / 2.0)) + k * (13.0 / 3.0) ** (1.0 - alpha / 2.0)
    raise DomainError(f"unknown variant {variant!r}; choose near6 or near18")


_HEX6 = np.array([[math.cos(k * math.pi / 3), math.sin(k * math.pi / 3)] for k in range(6)])


def _unit(direction) -> np.ndarray:
    if np.ndim(direction) == 0:
        return np.array([math.cos(direction), math.sin(direction)])
    u = np.asarray(direction, dtype=float)
    n = np.linalg.norm(u)
    if n == 0:
        raise DomainError("direction must be nonzero")
    return u / n


def near6_interference(alpha: float, r: float, direction=0.0) -> float:
    """Interference from the six nearest points at ``z = r u``.

    ``direction`` is an angle in radians or a vector.
    """
    d = np.linalg.norm(_HEX6 - r * _unit(direction), axis=1)
    return math.fsum(d**-alpha)


def tri_offset(alpha: float, r: float, direction=0.0,
               truncation_radius: float | None = None) -> tuple[BoundedValue, float]:
    """Interference at ``z = r u`` and the quadratic lower bound.

    Returns the oracle bracket and ``tri_lower(alpha) + 1.5 alpha**2 r**2``.
    """
    alpha = _check_alpha(alpha)
    if not 0.0 <= r < 0.5:
        raise DomainError(f"r must lie in [0, 0.5), got {r}")
    z = r * _unit(direction)
    q = InterferenceQuery(Lattice.triangular(), PathLoss(alpha), tuple(z))
    return interference_oracle(q, truncation_radius), tri_lower(alpha) + 1.5 * alpha * alpha * r * r


# ---------------------------------------------------------------------------
# TDMA

_GT = np.array(G_TRI)


@dataclass(frozen=True)
class TriTdmaScheme:
    """Transmitter pattern on the triangular lattice.

    ``transmitter_generator`` is the Cartesian generator of the period
    lattice and ``offsets`` the Cartesian positions of the transmitters in
    one period (the desired one at the origin). ``slots`` is the number of
    lattice points per transmitter. The receiver sits at ``(1, 0)``.
    """

    kind: str
    m: int
    transmitter_generator: tuple[tuple[float, float], tuple[float, float]]
    offsets: tuple[tuple[float, float], ...]
    slots: int
    shifts: tuple[int, ...] | None = None
    receiver: tuple[float, float] = (1.0, 0.0)

    @property
    def point_set(self) -> PeriodicSet:
        return PeriodicSet(Lattice.custom(self.transmitter_generator), self.offsets)

    @property
    def density(self) -> float:
        return TRI_DENSITY / self.slots

    @property
    def cell_area(self) -> float:
        return 1.0 / self.density

    def nearest_distances(self, n: int = 8) -> np.ndarray:
        pts = self.point_set.points(3.0 * self.m + 3.0)
        return np.sort(np.linalg.norm(pts - np.array(self.receiver), axis=1))[:n]


ROW_PERIOD = 3


def _balanced_rows(m: int, shifts: tuple[int, ...]) -> TriTdmaScheme:
    # lattice coordinates (u, v): active rows v = j m, row j holds the
    # one-dimensional balanced pattern u = shifts[j] + {0, m + 1} mod 2m;
    # the shift sequence repeats every ROW_PERIOD active rows
    p = len(shifts)
    basis = np.array([[2 * m, 0], [0, p * m]], dtype=float)
    g = _GT @ basis
    off = []
    for j, sj in enumerate(shifts):
        for u in (sj, sj + m + 1):
            off.append(tuple(_GT @ np.array([u % (2 * m), j * m], dtype=float)))
    return TriTdmaScheme("balanced_rows", m, tuple(map(tuple, g)), tuple(off), m * m, tuple(shifts))


def tri_tdma_scheme(kind: str, m: int) -> TriTdmaScheme:
    """Build a ``rhombus``, ``parallelogram`` or ``balanced_rows`` pattern.

    ``balanced_rows`` repeats the one-dimensional balanced pattern of
    period ``2m`` on every ``m``-th row. The row shifts follow a sequence
    of period three starting at zero; the other two shifts are found by
    exhaustive search maximizing the sorted distances from the receiver to
    its eight nearest interferers, smallest shifts first on ties. A single
    shear, or shifts alternating with row parity, cannot bring both
    neighbouring rows to distance ``m``. The search lands on four
    interferers at ``m`` and two at ``sqrt(m**2 + m + 1)``.
    """
    if int(m) != m or m < 2:
        raise DomainError(f"m must be an integer >= 2, got {m}")
    m = int(m)
    h = m * SQRT3 / 2.0
    if kind == "rhombus":
        g = ((float(m), -0.5 * (m % 2)), (0.0, h))
        return TriTdmaScheme("rhombus", m, g, ((0.0, 0.0),), m * m)
    if kind == "parallelogram":
        g = ((float(m + 1), -0.5 * m), (0.0, h))
        return TriTdmaScheme("parallelogram", m, g, ((0.0, 0.0),), m * (m + 1))
    if kind != "balanced_rows":
        raise DomainError(f"unknown triangular scheme {kind!r}")
    best, key = None, None
    for s1 in range(2 * m):
        for s2 in range(2 * m):
            cand = _balanced_rows(m, (0, s1, s2))
            k = tuple(np.round(cand.nearest_distances(8), 9))
            if key is None or k > key:
                best, key = cand, k
    d = best.nearest_distances(4)
    if np.any(d < m - 1e-9):
        raise ConstructionError(f"balanced rows for m={m}: nearest four at {d.tolist()}")
    return best


@dataclass(frozen=True)
class TriTdmaResult:
    """Interference of a triangular TDMA pattern and its scale-free form."""

    scheme: TriTdmaScheme
    alpha: float
    interference: BoundedValue

    @property
    def normalized(self) -> float:
        """``I lambda**(-alpha/2)``, invariant under scaling of the network."""
        return self.interference.value * self.scheme.density ** (-self.alpha / 2.0)


def tri_tdma(alpha: float, scheme: TriTdmaScheme, truncation_radius: float | None = None) -> TriTdmaResult:
    """Oracle interference at the receiver ``(1, 0)`` of a pattern."""
    alpha = _check_alpha(alpha)
    q = InterferenceQuery(scheme.point_set, PathLoss(alpha), scheme.receiver)
    return TriTdmaResult(scheme, alpha, interference_oracle(q, truncation_radius))
