"""Special functions behind the lattice closed forms.

Hurwitz and Riemann zeta, closed-form zeta bounds, the Dirichlet beta
function and the principal branch of the Lambert W function.
"""
from __future__ import annotations

import enum
import math

import numpy as np
from scipy import special

from .errors import DomainError

__all__ = [
    "ZetaBoundKind",
    "hurwitz_zeta_ref",
    "riemann_zeta",
    "zeta_bound",
    "dirichlet_beta",
    "lambert_w0",
]


class ZetaBoundKind(str, enum.Enum):
    """Closed-form bounds on zeta(alpha, 1 - z)."""

    HURWITZ_UPPER = "hurwitz_upper"
    HURWITZ_LOWER = "hurwitz_lower"
    STD_UPPER_RATIONAL = "std_upper_rational"
    STD_LOWER_RATIONAL = "std_lower_rational"
    STD_LOWER_LOOSE = "std_lower_loose"

    @property
    def is_standard(self) -> bool:
        return self not in (ZetaBoundKind.HURWITZ_UPPER, ZetaBoundKind.HURWITZ_LOWER)

    @property
    def is_upper(self) -> bool:
        return self in (ZetaBoundKind.HURWITZ_UPPER, ZetaBoundKind.STD_UPPER_RATIONAL)


def _finite(x: float, name: str) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return x


def hurwitz_zeta_ref(alpha: float, a: float) -> float:
    """Hurwitz zeta function ``sum_{k>=0} (k + a)**-alpha``.

    Parameters
    ----------
    alpha : float
        Exponent, strictly greater than one.
    a : float
        Shift, strictly positive.

    Returns
    -------
    float
        The series value. scipy evaluates it by direct summation followed by
        an Euler-Maclaurin tail, which is accurate to a few ulps on the
        domain used here.
    """
    alpha = _finite(alpha, "alpha")
    a = _finite(a, "a")
    if alpha <= 1.0:
        raise DomainError(f"alpha must exceed 1, got {alpha}")
    if a <= 0.0:
        raise DomainError(f"a must be positive, got {a}")
    return float(special.zeta(alpha, a))


def riemann_zeta(alpha: float) -> float:
    """Riemann zeta, i.e. ``hurwitz_zeta_ref(alpha, 1)``."""
    return hurwitz_zeta_ref(alpha, 1.0)


def zeta_bound(kind: ZetaBoundKind | str, alpha: float, z: float = 0.0) -> float:
    """Closed-form bound on ``zeta(alpha, 1 - z)``.

    The two Hurwitz kinds keep the first term exact and replace the rest of
    the series by an integral whose lower limit is shifted by one half
    (upper bound) or one (lower bound). The three standard kinds bound the
    Riemann zeta function, so ``z`` must be zero for them.

    Parameters
    ----------
    kind : ZetaBoundKind or str
    alpha : float
        Exponent, greater than one.
    z : float, optional
        Offset in (-1, 1).

    Returns
    -------
    float
    """
    kind = ZetaBoundKind(kind)
    alpha = _finite(alpha, "alpha")
    z = _finite(z, "z")
    if alpha <= 1.0:
        raise DomainError(f"alpha must exceed 1, got {alpha}")
    if abs(z) >= 1.0:
        raise DomainError(f"|z| must be below 1, got {z}")
    if kind.is_standard and z != 0.0:
        raise DomainError(f"{kind.value} bounds the Riemann zeta function; z must be 0")

    a1 = alpha - 1.0
    if kind is ZetaBoundKind.HURWITZ_UPPER:
        return (1.0 - z) ** -alpha + (1.5 - z) ** -a1 / a1
    if kind is ZetaBoundKind.HURWITZ_LOWER:
        return (1.0 - z) ** -alpha + (2.0 - z) ** -a1 / a1
    if kind is ZetaBoundKind.STD_UPPER_RATIONAL:
        t = 2.0 ** -alpha
        return (a1 + t) / (a1 - a1 * t)
    if kind is ZetaBoundKind.STD_LOWER_RATIONAL:
        # divide through by 6**alpha to avoid overflow at large alpha
        return 1.0 / (1.0 - 2.0 ** -alpha - 3.0 ** -alpha - 6.0 ** -alpha)
    return (1.0 - 2.0 ** -alpha) / (1.0 - 2.0 ** (1.0 - alpha))


def _crvz_weights(n: int) -> tuple[np.ndarray, float]:
    # Cohen, Rodriguez Villegas and Zagier, Algorithm 1
    d = (3.0 + math.sqrt(8.0)) ** n
    d = 0.5 * (d + 1.0 / d)
    b, c = -1.0, -d
    w = np.empty(n)
    for k in range(n):
        c = b - c
        w[k] = c
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0))
    return w, d


_BETA_TERMS = 28
_BETA_W, _BETA_D = _crvz_weights(_BETA_TERMS)


def dirichlet_beta(x: float) -> float:
    """Dirichlet beta function ``sum_{i>=1} (-1)**(i+1) (2i - 1)**-x``.

    The alternating series is summed with the Cohen-Rodriguez Villegas-Zagier
    acceleration. The terms ``(2k + 1)**-x`` form a totally monotone sequence,
    for which the error after ``n`` terms is below ``2 * 5.8**-n`` times the
    first term.

    Parameters
    ----------
    x : float
        Positive argument.
    """
    x = _finite(x, "x")
    if x <= 0.0:
        raise DomainError(f"x must be positive, got {x}")
    k = np.arange(_BETA_TERMS, dtype=float)
    terms = (2.0 * k + 1.0) ** -x
    return math.fsum(_BETA_W * terms) / _BETA_D


def lambert_w0(x: float) -> float:
    """Principal branch of the Lambert W function on ``[-1/e, inf)``.

    Uses scipy's complex implementation and returns its real part, which is
    exact on this interval. The branch point ``-1/e`` is handled explicitly.
    """
    x = _finite(x, "x")
    branch = -math.exp(-1.0)
    if x < branch:
        # allow the rounding of -exp(-1) itself
        if x < branch * (1.0 + 1e-15):
            raise DomainError(f"x must be >= -1/e, got {x}")
        x = branch
    if x == branch:
        return -1.0
    return float(special.lambertw(x, 0).real)
