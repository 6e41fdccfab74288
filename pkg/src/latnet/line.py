"""One-dimensional lattice networks on the integers.

Interference with a transmitter-receiver offset, the offset coefficient,
transport capacity and the two TDMA families (unidirectional ``m Z`` and the
balanced pattern with alternating link directions).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .bounds import BoundedValue, InterferenceQuery, interference_oracle
from .errors import DomainError
from .lattice import Lattice, PathLoss, PeriodicSet
from .specfun import hurwitz_zeta_ref, lambert_w0, riemann_zeta

__all__ = [
    "OffsetExpansion",
    "TdmaResult1D",
    "line_interference",
    "line_interference_upper",
    "excess_coefficient_1d",
    "transport_capacity",
    "optimal_link_distance",
    "g_bound",
    "tdma_unidirectional",
    "tdma_unidirectional_opt",
    "balanced_interferer_set",
    "balanced_point_set",
    "balanced_closed_form",
    "tdma_balanced",
    "tdma_balanced_opt",
    "c_alpha",
    "M_SEARCH_MAX",
]

M_SEARCH_MAX = 64


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 1.0:
        raise DomainError(f"alpha must exceed 1, got {alpha}")
    return alpha


def _check_m(m: int) -> int:
    if int(m) != m or m < 2:
        raise DomainError(f"m must be an integer >= 2, got {m}")
    return int(m)


def line_interference(alpha: float, z: float) -> float:
    """Interference at ``z`` from all nonzero integers, ``zeta(a, 1-z) + zeta(a, 1+z)``."""
    alpha = _check_alpha(alpha)
    if abs(z) >= 1:
        raise DomainError(f"|z| must be below 1, got {z}")
    return hurwitz_zeta_ref(alpha, 1.0 - z) + hurwitz_zeta_ref(alpha, 1.0 + z)


def line_interference_upper(alpha: float, z: float) -> float:
    """Closed-form upper bound on ``line_interference``.

    Each side keeps its nearest term and replaces the rest by an integral
    starting half a step early.
    """
    alpha = _check_alpha(alpha)
    if abs(z) >= 1:
        raise DomainError(f"|z| must be below 1, got {z}")
    a1 = alpha - 1.0
    return ((1 - z) ** -alpha + (1 + z) ** -alpha
            + ((1.5 - z) ** -a1 + (1.5 + z) ** -a1) / a1)


@dataclass(frozen=True)
class OffsetExpansion:
    """Even expansion ``I(z) ~ base + c2 z**2 + c4 z**4``.

    ``c2`` is the curvature of the closed-form upper bound and ``c4`` the
    quartic approximation. ``c2_exact`` is the curvature of the exact sum,
    ``alpha (alpha + 1) zeta(alpha + 2)``, kept for comparison.
    """

    alpha: float
    base: float
    c2: float
    c4: float | None = None
    c2_lower: float = 0.0
    c2_approx: float = 0.0
    c2_exact: float = 0.0

    def __call__(self, z: float, order: int = 2) -> float:
        v = self.base + self.c2 * z * z
        if order >= 4 and self.c4 is not None:
            v += self.c4 * z**4
        return v


def excess_coefficient_1d(alpha: float) -> OffsetExpansion:
    """Offset coefficients of the one-dimensional interference."""
    a = _check_alpha(alpha)
    return OffsetExpansion(
        alpha=a,
        base=2.0 * riemann_zeta(a),
        c2=a * a + a * (1.0 + (2.0 / 3.0) ** (a + 1.0)),
        c4=a**4 / 12.0 + a**3 / 2.0 + a * a + a / 2.0,
        c2_lower=a * a + a,
        c2_approx=a * a + a + 0.5,
        c2_exact=a * (a + 1.0) * riemann_zeta(a + 2.0),
    )


def transport_capacity(alpha: float, z: float) -> float:
    """``z log2(1 + z**-alpha / I(z))`` for link distance ``z`` in (0, 1)."""
    if not 0 < z < 1:
        raise DomainError(f"z must lie in (0, 1), got {z}")
    return z * math.log2(1.0 + z**-alpha / line_interference(alpha, z))


def optimal_link_distance(alpha: float, bounds=(0.01, 0.9), xtol: float = 1e-9) -> tuple[float, float]:
    """Link distance maximizing the transport capacity and the maximum.

    Bounded Brent search (golden section with parabolic steps).
    """
    alpha = _check_alpha(alpha)
    if alpha > 20:
        raise DomainError("alpha must be at most 20")
    res = optimize.minimize_scalar(lambda z: -transport_capacity(alpha, z), bounds=bounds,
                                   method="bounded", options={"xatol": xtol})
    return float(res.x), float(-res.fun)


@dataclass(frozen=True)
class TdmaResult1D:
    """Interference, rate and throughput of a one-dimensional TDMA scheme."""

    scheme: str
    m: int
    alpha: float
    interference: BoundedValue
    rate: float
    throughput: float
    lower: float
    upper: float
    approx_rate: float
    approx_throughput: float
    extras: dict = field(default_factory=dict)


def g_bound(alpha: float, m: int, b: float) -> float:
    """``m**-alpha`` times the Hurwitz-type bound of ``I(1/m)`` with integral start ``b``.

    ``b = 2`` gives a lower bound and ``b = 3/2`` an upper bound on the
    unidirectional interference.
    """
    a1 = alpha - 1.0
    return ((m - 1.0) ** -alpha + (m + 1.0) ** -alpha
            + ((b * m - 1.0) ** -a1 + (b * m + 1.0) ** -a1) / (m * a1))


def _rate(interference: float) -> float:
    return math.log2(1.0 + 1.0 / interference)


def tdma_unidirectional(alpha: float, m: int) -> TdmaResult1D:
    """Transmitters on ``m Z``, each sending to its right neighbour.

    The interference at the receiver is ``m**-alpha I(1/m)``, bracketed by
    ``g_bound(alpha, m, 2)`` and ``g_bound(alpha, m, 3/2)``.
    """
    alpha, m = _check_alpha(alpha), _check_m(m)
    exact = m**-alpha * line_interference(alpha, 1.0 / m)
    lo, hi = g_bound(alpha, m, 2.0), g_bound(alpha, m, 1.5)
    value = BoundedValue(exact, "bracketed", (min(lo, exact), max(hi, exact)))
    rate = _rate(exact)
    c = excess_coefficient_1d(alpha)
    approx = math.log2(1.0 + m ** (alpha + 2.0) / (c.base * m * m + c.c2))
    return TdmaResult1D("unidirectional", m, alpha, value, rate, rate / m, lo, hi, approx, approx / m)


def tdma_unidirectional_opt(alpha: float) -> int:
    """Throughput-maximizing ``m`` in ``2..64`` for the unidirectional scheme."""
    alpha = _check_alpha(alpha)
    t = [tdma_unidirectional(alpha, m).throughput for m in range(2, M_SEARCH_MAX + 1)]
    return 2 + int(np.argmax(t))


def balanced_interferer_set(m: int, k_max: int) -> list[int]:
    """Interferer positions relative to the receiver for ``k = 1..k_max``.

    The receiver listens to the transmitter at ``-1``; per period ``k`` the
    interferers sit at ``-2km-1, -2km+m, 2km-m, 2km-1``.
    """
    m = _check_m(m)
    if k_max < 1:
        raise DomainError("k_max must be positive")
    out = []
    for k in range(1, k_max + 1):
        out += [-2 * k * m - 1, -2 * k * m + m, 2 * k * m - m, 2 * k * m - 1]
    return out


def balanced_point_set(m: int) -> tuple[PeriodicSet, float]:
    """Transmitters of the balanced pattern with the desired one at the origin.

    Returns the periodic set ``2m Z + {0, m + 1}`` and the receiver
    position ``1``.
    """
    m = _check_m(m)
    return PeriodicSet(Lattice.line(2.0 * m), ((0.0,), (m + 1.0,))), 1.0


def c_alpha(alpha: float) -> float:
    """SIR constant ``1 / (2 zeta(alpha))`` of the balanced scheme."""
    return 0.5 / riemann_zeta(_check_alpha(alpha))


def balanced_closed_form(alpha: float, m: int) -> float:
    """Exact balanced interference through Hurwitz zeta values.

    The interferer distances are ``2km +- 1`` for ``k >= 1`` and the odd
    multiples of ``m`` twice.
    """
    alpha, m = _check_alpha(alpha), _check_m(m)
    h = 1.0 / (2 * m)
    return (2.0 * m) ** -alpha * (hurwitz_zeta_ref(alpha, 1.0 + h) + hurwitz_zeta_ref(alpha, 1.0 - h)
                                  + 2.0 * hurwitz_zeta_ref(alpha, 0.5))


def _balanced_small_m(alpha: float, m: int) -> float | None:
    zeta = riemann_zeta(alpha)
    if m == 2:
        return zeta * (1 + 2.0**-alpha - 2 * 4.0**-alpha) - 1
    if m == 3:
        return zeta * (1 + 3.0**-alpha - 2.0**-alpha - 6.0**-alpha) - 1
    return None


def tdma_balanced(alpha: float, m: int, truncation_radius: float | None = None) -> TdmaResult1D:
    """Balanced pattern ``T> R^m <T R^(m-2)`` with period ``2m``.

    ``interference`` is the oracle bracket over the interferer set; the
    Hurwitz closed form, the small-``m`` closed forms and the bounds are
    stored alongside.
    """
    alpha, m = _check_alpha(alpha), _check_m(m)
    pset, z = balanced_point_set(m)
    q = InterferenceQuery(pset, PathLoss(alpha), (z,))
    R = truncation_radius or 2e5 * m
    oracle = interference_oracle(q, R)
    exact = balanced_closed_form(alpha, m)
    zeta = riemann_zeta(alpha)
    lower = 2.0 * m**-alpha * zeta
    upper = (m**-alpha * (2.0 + 2.0 ** (1.0 - alpha) / (alpha - 1.0)) + (m + 1.0) ** -alpha
             + (2.0 / (3.0 * m + 2.0)) ** (alpha - 1.0) / (m * (alpha - 1.0)))
    upper_hurwitz = (2.0 * (2.0 * m) ** -alpha * hurwitz_zeta_ref(alpha, 0.5)
                     + m**-alpha * hurwitz_zeta_ref(alpha, 1.0 + 1.0 / m))
    rate = _rate(exact)
    approx = math.log2(1.0 + m**alpha * c_alpha(alpha))
    extras = {
        "exact": exact,
        "closed_form": _balanced_small_m(alpha, m),
        "upper_hurwitz": upper_hurwitz,
        "lower_rational": 2.0 * m**-alpha / (1.0 - 2.0**-alpha - 3.0**-alpha - 6.0**-alpha),
    }
    return TdmaResult1D("balanced", m, alpha, oracle, rate, rate / m, lower, upper, approx, approx / m, extras)


def tdma_balanced_opt(alpha: float) -> tuple[float, int]:
    """Optimal balanced period: Lambert-W relaxation and integer argmax.

    With SIR ``m**alpha C`` the relaxed optimum satisfies
    ``m**alpha = -(W(a) + alpha) / (C W(a))`` where ``a = -alpha exp(-alpha)``
    and ``W`` is the principal branch.
    """
    alpha = _check_alpha(alpha)
    c = c_alpha(alpha)
    w = lambert_w0(-alpha * math.exp(-alpha))
    m_real = (-(w + alpha) / (c * w)) ** (1.0 / alpha)
    ms = np.arange(2, M_SEARCH_MAX + 1, dtype=float)
    t = np.log2(1.0 + ms**alpha * c) / ms
    return float(m_real), int(ms[np.argmax(t)])
