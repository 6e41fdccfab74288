"""Square lattice ``Z^2``: exact sum, closed-form bounds, offsets and TDMA."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .bounds import (
    BoundedValue,
    InterferenceQuery,
    interference_oracle,
    radial_upper_bound,
    valid_radii,
)
from .errors import ConstructionError, DomainError
from .lattice import SQUARE_RING_C, Lattice, PathLoss, PeriodicSet
from .specfun import dirichlet_beta, riemann_zeta, zeta_bound

__all__ = [
    "LOWER_VARIANTS",
    "UPPER_VARIANTS",
    "square_exact",
    "square_lower",
    "square_upper",
    "rectangle_complement_integral",
    "near8_interference",
    "SquareOffsetExpansion",
    "square_offset_expansion",
    "SquareTdmaScheme",
    "SquareTdmaResult",
    "square_tdma_scheme",
    "square_tdma_simple",
    "square_tdma_balanced",
    "packing_ratio",
]

LOWER_VARIANTS = ("simple_c", "sharp_c", "closed_form")
UPPER_VARIANTS = ("rectangle", "radial_3_2", "radial_3_sqrt2")
SIMPLE_C = (1.0 + math.sqrt(2.0)) / 2.0


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 2.0:
        raise DomainError(f"alpha must exceed 2, got {alpha}")
    return alpha


def _near8(alpha: float) -> float:
    return 4.0 * (1.0 + 2.0 ** (-alpha / 2.0))


def square_exact(alpha: float) -> float:
    """Interference at the origin of ``Z^2``: ``4 zeta(alpha/2) beta(alpha/2)``."""
    alpha = _check_alpha(alpha)
    return 4.0 * riemann_zeta(alpha / 2.0) * dirichlet_beta(alpha / 2.0)


def square_lower(alpha: float, variant: str = "closed_form") -> float:
    """Ring-averaging lower bounds.

    The eight nearest terms are kept; ring ``k >= 2`` holds ``8k`` points
    whose mean distance is at most ``c k``, which gives
    ``8 c**-alpha (zeta(alpha - 1) - 1)`` for the rest. ``simple_c`` uses
    ``c = (1 + sqrt 2)/2``, ``sharp_c`` the exact mean over a square
    boundary, and ``closed_form`` additionally replaces ``zeta(alpha - 1)``
    by its rational lower bound.
    """
    alpha = _check_alpha(alpha)
    if variant not in LOWER_VARIANTS:
        raise DomainError(f"unknown lower variant {variant!r}; choose from {LOWER_VARIANTS}")
    if variant == "simple_c":
        return _near8(alpha) + 8.0 * SIMPLE_C**-alpha * (riemann_zeta(alpha - 1.0) - 1.0)
    if variant == "sharp_c":
        return _near8(alpha) + 8.0 * SQUARE_RING_C**-alpha * (riemann_zeta(alpha - 1.0) - 1.0)
    b = alpha - 1.0
    tail = (3.0**b + 2.0**b + 1.0) / (6.0**b - 3.0**b - 2.0**b - 1.0)
    if not math.isfinite(tail):
        tail = zeta_bound("std_lower_rational", b) - 1.0
    return _near8(alpha) + 8.0 * SQUARE_RING_C**-alpha * tail


def rectangle_complement_integral(alpha: float, a: float = 1.5) -> float:
    """``int |y|**-alpha`` over the plane minus the square ``[-a, a]^2``.

    In polar form the integral is ``8 a**(2 - alpha)/(alpha - 2)`` times
    ``int_0^{pi/4} cos(t)**(alpha - 2) dt``; the angular integral is an
    incomplete beta function.
    """
    alpha = _check_alpha(alpha)
    n = alpha - 2.0
    p = 0.5 * (n + 1.0)
    angular = 0.5 * special.beta(0.5, p) * special.betainc(0.5, p, 0.5)
    return 8.0 * a ** (2.0 - alpha) / (alpha - 2.0) * angular


_RECTANGLE_CLOSED = {
    3.0: 8.0 * math.sqrt(2.0) / 3.0,
    4.0: 2.0 * (2.0 + math.pi) / 9.0,
    5.0: 80.0 * math.sqrt(2.0) / 243.0,
}


def square_upper(alpha: float, variant: str = "radial_3_sqrt2") -> float:
    """Upper bounds from exact near terms plus an integral over the rest.

    ``rectangle`` integrates over the union of the far Voronoi cells,
    the complement of ``[-3/2, 3/2]^2``. ``radial_3_2`` and
    ``radial_3_sqrt2`` integrate over the outside of a disk of radius
    ``3/2`` (8 near points) or ``3/sqrt 2`` (20 near points).
    """
    alpha = _check_alpha(alpha)
    if variant not in UPPER_VARIANTS:
        raise DomainError(f"unknown upper variant {variant!r}; choose from {UPPER_VARIANTS}")
    if variant == "rectangle":
        tail = _RECTANGLE_CLOSED.get(alpha)
        if tail is None:
            tail = rectangle_complement_integral(alpha)
        return _near8(alpha) + tail
    if variant == "radial_3_2":
        return _near8(alpha) + 2.0 * math.pi * 1.5 ** (2.0 - alpha) / (alpha - 2.0)
    near20 = 4.0 * (1.0 + 2.0 ** (-alpha / 2.0) + 2.0**-alpha + 2.0 * 5.0 ** (-alpha / 2.0))
    return near20 + 2.0 * math.pi * (3.0 / math.sqrt(2.0)) ** (2.0 - alpha) / (alpha - 2.0)


# ---------------------------------------------------------------------------
# receiver offset

_NEAR8 = np.array([[1, 0], [0, 1], [-1, 0], [0, -1], [1, 1], [-1, 1], [-1, -1], [1, -1]], dtype=float)


def near8_interference(alpha: float, r: float, direction: str = "axial") -> float:
    """Interference from the eight nearest points at ``z = r u``.

    ``u`` is ``(1, 0)`` for ``axial`` and ``(1, 1)/sqrt 2`` for ``diagonal``.
    """
    u = {"axial": np.array([1.0, 0.0]), "diagonal": np.array([1.0, 1.0]) / math.sqrt(2.0)}.get(direction)
    if u is None:
        raise DomainError(f"direction must be axial or diagonal, got {direction!r}")
    d = np.linalg.norm(_NEAR8 - r * u, axis=1)
    return math.fsum(d**-alpha)


@dataclass(frozen=True)
class SquareOffsetExpansion:
    """Quadratic growth ``I(z) ~ I(o) + c |z|^2`` for the square lattice.

    ``c8`` is the coefficient of the eight nearest points. ``c_ex_quoted``
    holds the published totals for ``alpha`` in {3, 4}; ``c_far_rect`` is
    the curvature of the rectangle-complement integral and ``c_far_lattice``
    the curvature of the exact sum over all other points.
    """

    alpha: float
    near8_base: float
    c8: float
    direction: str
    c_far_rect: float
    c_far_lattice: float
    c_ex_quoted: float | None = None

    @property
    def c_ex_rect(self) -> float:
        return self.c8 + self.c_far_rect

    @property
    def c_ex_lattice(self) -> float:
        return self.c8 + self.c_far_lattice


def square_offset_expansion(alpha: float, direction: str = "axial") -> SquareOffsetExpansion:
    """Offset coefficients for an axial or diagonal receiver displacement.

    Any point set with the symmetry of the square has an isotropic Hessian
    sum, so the ``r**2`` coefficient is ``(alpha**2/4) sum |x|**-(alpha+2)``
    in every direction.
    """
    alpha = _check_alpha(alpha)
    if direction not in ("axial", "diagonal"):
        raise DomainError(f"direction must be axial or diagonal, got {direction!r}")
    k = alpha * alpha / 4.0
    c8 = alpha * alpha * (1.0 + 2.0 ** (-alpha / 2.0 - 1.0))
    quoted = {
        3.0: 9.0 * (1.0 + 2.0**-2.5) + 20.0 * math.sqrt(2.0) / 27.0 + 32.0 / 27.0,
        4.0: 18.0 + 4.0 * math.pi / 9.0 + 32.0 / 81.0,
    }.get(alpha)
    return SquareOffsetExpansion(
        alpha=alpha,
        near8_base=_near8(alpha),
        c8=c8,
        direction=direction,
        c_far_rect=k * rectangle_complement_integral(alpha + 2.0),
        c_far_lattice=k * (square_exact(alpha + 2.0) - _near8(alpha + 2.0)),
        c_ex_quoted=quoted,
    )


# ---------------------------------------------------------------------------
# TDMA


@dataclass(frozen=True)
class SquareTdmaScheme:
    """Transmitter pattern ``offsets + G Z^2`` with the receiver at ``receiver``.

    The desired transmitter is the origin. ``slots`` is the number of
    lattice points per transmitter.
    """

    kind: str
    m: int
    transmitter_generator: tuple[tuple[int, int], tuple[int, int]]
    offsets: tuple[tuple[int, int], ...]
    receiver_offset: tuple[int, int] = (0, 1)

    @property
    def point_set(self) -> PeriodicSet:
        return PeriodicSet(Lattice.custom(self.transmitter_generator), self.offsets)

    @property
    def slots(self) -> int:
        g = np.array(self.transmitter_generator)
        return int(round(abs(np.linalg.det(g)))) // len(self.offsets)

    @property
    def density(self) -> float:
        return 1.0 / self.slots

    def nearest_distances(self, n: int = 8) -> np.ndarray:
        """Sorted distances from the receiver to the ``n`` nearest interferers."""
        pts = self.point_set.points(3.0 * self.m + 2.0)
        d = np.sort(np.linalg.norm(pts - np.array(self.receiver_offset, float), axis=1))
        return d[:n]


def square_tdma_scheme(kind: str, m: int) -> SquareTdmaScheme:
    """Build the ``simple`` or ``balanced`` pattern with one transmitter per ``m x m`` box.

    ``simple`` uses ``(m Z)^2``. ``balanced`` uses the period ``2m`` in
    both directions with the four transmitters
    ``(0, 0), (m, 2), (m - 1, m + 1), (2m - 1, m + 1)``; with the receiver at
    ``(0, 1)`` its four nearest interferers are at ``sqrt(m^2 + 1)``.
    """
    if int(m) != m or m < 2:
        raise DomainError(f"m must be an integer >= 2, got {m}")
    m = int(m)
    if kind == "simple":
        return SquareTdmaScheme("simple", m, ((m, 0), (0, m)), ((0, 0),))
    if kind != "balanced":
        raise DomainError(f"unknown square TDMA scheme {kind!r}; choose simple or balanced")
    p = 2 * m
    scheme = SquareTdmaScheme("balanced", m, ((p, 0), (0, p)),
                              ((0, 0), (m, 2), (m - 1, m + 1), (2 * m - 1, m + 1)))
    d4 = scheme.nearest_distances(4)
    if not np.allclose(d4, math.sqrt(m * m + 1.0), rtol=0, atol=1e-12):
        raise ConstructionError(f"balanced pattern for m={m} has nearest four at {d4.tolist()}")
    return scheme


@dataclass(frozen=True)
class SquareTdmaResult:
    """Interference at the receiver of a square TDMA scheme."""

    scheme: SquareTdmaScheme
    alpha: float
    interference: BoundedValue
    radial_bound: BoundedValue
    radial_estimate: BoundedValue
    nearest8: tuple[float, ...]
    extras: dict = field(default_factory=dict)

    @property
    def normalized(self) -> float:
        return self.scheme.m**self.alpha * self.interference.value


def _tdma_query(scheme: SquareTdmaScheme, alpha: float) -> InterferenceQuery:
    return InterferenceQuery(scheme.point_set, PathLoss(alpha), scheme.receiver_offset)


def square_tdma_simple(alpha: float, m: int, truncation_radius: float | None = None) -> SquareTdmaResult:
    """Transmitters on ``(m Z)^2`` with the receiver at ``(0, 1)``.

    The radial bound keeps the eight points whose cells come within
    ``3m/2`` of the transmitter, leaving ``3m/2 - 1`` from the receiver.
    """
    alpha = _check_alpha(alpha)
    scheme = square_tdma_scheme("simple", m)
    q = _tdma_query(scheme, alpha)
    oracle = interference_oracle(q, truncation_radius)
    radial = radial_upper_bound(q, 1.5 * scheme.m)
    d8 = scheme.nearest_distances(8)
    m = scheme.m
    listed = np.sort([m - 1.0, math.hypot(1, m), math.hypot(1, m), math.hypot(m - 1, m),
                      math.hypot(m - 1, m), m + 1.0, math.hypot(m + 1, m), math.hypot(m + 1, m)])
    return SquareTdmaResult(scheme, alpha, oracle, radial, radial, tuple(d8), {"listed_nearest8": tuple(listed)})


def square_tdma_balanced(alpha: float, m: int, truncation_radius: float | None = None) -> SquareTdmaResult:
    """Balanced pattern from ``square_tdma_scheme``.

    ``radial_bound`` is a rigorous radial bound built from the Voronoi cells
    of the ``2m`` period lattice. ``radial_estimate`` is the cheaper
    estimate that sums the eight nearest interferers and assumes all other
    transmitters (density ``1/m^2``) lie at least ``3m/2`` from the
    receiver; it is labelled an approximation.
    """
    alpha = _check_alpha(alpha)
    scheme = square_tdma_scheme("balanced", m)
    q = _tdma_query(scheme, alpha)
    oracle = interference_oracle(q, truncation_radius)
    m = scheme.m
    radii = valid_radii(q, 3.0 * m)
    radial = min((radial_upper_bound(q, r) for r in radii[-3:]), key=lambda b: b.value)
    d8 = scheme.nearest_distances(8)
    estimate = math.fsum(d8**-alpha) + 2.0 * math.pi * (1.5 * m) ** (2.0 - alpha) / ((alpha - 2.0) * m * m)
    return SquareTdmaResult(scheme, alpha, oracle, radial, BoundedValue(estimate, "approximation"), tuple(d8))


def packing_ratio(m: int) -> float:
    """Mean distance of the six nearest balanced interferers over ``sqrt(2/sqrt 3) m``."""
    d6 = square_tdma_scheme("balanced", m).nearest_distances(6)
    return float(np.mean(d6)) / (math.sqrt(2.0 / math.sqrt(3.0)) * m)
