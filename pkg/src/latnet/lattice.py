"""Lattices, point enumeration, rings, Voronoi cells and path-loss laws."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, DomainError, UnsupportedFamilyError

__all__ = [
    "G_SQ",
    "G_TRI",
    "Lattice",
    "PeriodicSet",
    "PathLoss",
    "RingSpec",
    "enumerate_points",
    "ring",
    "ring_mean_distance_bounds",
    "voronoi_cell",
    "cell_min_distance",
    "cell_distances",
    "polygon_area",
    "DEFAULT_POINT_LIMIT",
]

SQRT3 = math.sqrt(3.0)
G_SQ = ((1.0, 0.0), (0.0, 1.0))
G_TRI = ((1.0, 0.5), (0.0, SQRT3 / 2.0))
FAMILIES = ("line", "square", "triangular", "custom")
DEFAULT_POINT_LIMIT = 10**8

# square ring mean-distance constant, c = sqrt(2)/2 + (1 - log(sqrt(2) - 1))/4
SQUARE_RING_C = math.sqrt(2.0) / 2.0 + (1.0 - math.log(math.sqrt(2.0) - 1.0)) / 4.0
TRI_RING_C = 0.5 + SQRT3 / 4.0


def _as_matrix(generator) -> tuple[tuple[float, ...], ...]:
    g = np.atleast_2d(np.asarray(generator, dtype=float))
    return tuple(tuple(float(v) for v in row) for row in g)


@dataclass(frozen=True)
class Lattice:
    """A lattice ``{G u : u integer}`` in one or two dimensions.

    The generator columns are the basis vectors. Use the ``line``,
    ``square``, ``triangular`` and ``custom`` constructors rather than the
    raw initializer.
    """

    dimension: int
    generator: tuple[tuple[float, ...], ...]
    family: str = "custom"

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise DomainError(f"dimension must be 1 or 2, got {self.dimension}")
        if self.family not in FAMILIES:
            raise DomainError(f"unknown lattice family {self.family!r}")
        g = np.asarray(self.generator, dtype=float)
        if g.shape != (self.dimension, self.dimension):
            raise DomainError(f"generator must be {self.dimension}x{self.dimension}")
        if not np.all(np.isfinite(g)):
            raise DomainError("generator entries must be finite")
        if abs(np.linalg.det(g)) == 0.0:
            raise DomainError("generator is singular")
        expected = {"square": G_SQ, "triangular": G_TRI}.get(self.family)
        if expected is not None and not np.allclose(g, expected, rtol=0, atol=1e-15):
            raise DomainError(f"{self.family} family requires its canonical generator")
        if self.family == "line" and self.dimension != 1:
            raise DomainError("line family is one-dimensional")

    @classmethod
    def line(cls, spacing: float = 1.0) -> "Lattice":
        family = "line" if spacing == 1.0 else "custom"
        return cls(1, ((float(spacing),),), family)

    @classmethod
    def square(cls) -> "Lattice":
        return cls(2, G_SQ, "square")

    @classmethod
    def triangular(cls) -> "Lattice":
        return cls(2, G_TRI, "triangular")

    @classmethod
    def custom(cls, generator) -> "Lattice":
        g = _as_matrix(generator)
        return cls(len(g), g, "custom")

    @classmethod
    def from_family(cls, name: str) -> "Lattice":
        try:
            return {"line": cls.line, "square": cls.square, "triangular": cls.triangular}[name]()
        except KeyError:
            raise UnsupportedFamilyError(f"unknown family {name!r}") from None

    @property
    def G(self) -> np.ndarray:
        return np.array(self.generator, dtype=float)

    @property
    def cell_volume(self) -> float:
        return float(abs(np.linalg.det(self.G)))

    @property
    def density(self) -> float:
        return 1.0 / self.cell_volume

    def scaled(self, s: float) -> "Lattice":
        """The lattice ``s L`` (always reported as a custom family)."""
        return Lattice(self.dimension, _as_matrix(s * self.G), "custom")

    def reduced_basis(self) -> np.ndarray:
        """Lagrange-Gauss reduced basis (columns); identity map in 1-D."""
        g = self.G
        if self.dimension == 1:
            return np.abs(g)
        b1, b2 = g[:, 0].copy(), g[:, 1].copy()
        while True:
            if b1 @ b1 > b2 @ b2:
                b1, b2 = b2, b1
            mu = round(float(b1 @ b2) / float(b1 @ b1))
            if mu == 0:
                break
            b2 = b2 - mu * b1
        return np.column_stack([b1, b2])

    @property
    def min_norm(self) -> float:
        """Length of the shortest nonzero lattice vector."""
        return float(np.linalg.norm(self.reduced_basis()[:, 0]))

    @property
    def covering_radius(self) -> float:
        """Largest distance from a lattice point to a point of its cell."""
        if self.dimension == 1:
            return 0.5 * self.cell_volume
        cell = voronoi_cell(self, np.zeros(2))
        return float(np.max(np.linalg.norm(cell, axis=1)))

    def coordinates(self, x) -> np.ndarray:
        """Solve ``G u = x`` for ``u`` (real coordinates)."""
        x = np.asarray(x, dtype=float).reshape(self.dimension)
        return np.linalg.solve(self.G, x)

    def contains(self, x, tol: float = 1e-9) -> bool:
        u = self.coordinates(x)
        return bool(np.all(np.abs(u - np.round(u)) <= tol))


@dataclass(frozen=True)
class PeriodicSet:
    """Union of cosets ``offset + L`` of a base lattice.

    Transmitter sets of TDMA schemes are periodic sets whose first offset is
    the origin (the desired transmitter).
    """

    lattice: Lattice
    offsets: tuple[tuple[float, ...], ...] = field(default=())

    def __post_init__(self):
        offs = self.offsets or (tuple(0.0 for _ in range(self.lattice.dimension)),)
        offs = tuple(tuple(float(c) for c in np.atleast_1d(o)) for o in offs)
        if any(len(o) != self.lattice.dimension for o in offs):
            raise DomainError("offset dimension does not match the lattice")
        object.__setattr__(self, "offsets", offs)

    @classmethod
    def of(cls, lat: "Lattice | PeriodicSet") -> "PeriodicSet":
        return lat if isinstance(lat, PeriodicSet) else cls(lat)

    @property
    def dimension(self) -> int:
        return self.lattice.dimension

    @property
    def density(self) -> float:
        return len(self.offsets) / self.lattice.cell_volume

    @property
    def cell_volume(self) -> float:
        """Area per point, the reciprocal of the density."""
        return 1.0 / self.density

    @property
    def offset_array(self) -> np.ndarray:
        return np.array(self.offsets, dtype=float)

    def points(self, radius: float, exclude_origin: bool = True,
               limit: int = DEFAULT_POINT_LIMIT) -> np.ndarray:
        """All points with norm at most ``radius`` sorted like ``enumerate_points``."""
        chunks = []
        for c in self.offset_array:
            pts = _lattice_points_around(self.lattice, -c, radius + np.linalg.norm(c), limit) + c
            chunks.append(pts[np.linalg.norm(pts, axis=1) <= radius])
        pts = np.unique(np.concatenate(chunks), axis=0)
        if exclude_origin:
            pts = pts[np.linalg.norm(pts, axis=1) > 1e-12]
        return _sort_points(pts)


@dataclass(frozen=True)
class PathLoss:
    """Isotropic power-law path loss ``l(r) = r**-alpha``.

    ``r_c`` is the radius beyond which the radial loss is convex; it is zero
    for a power law but kept as a field so the bound routines can honor it.
    """

    alpha: float
    r_c: float = 0.0
    law: str = "power_law"

    def __post_init__(self):
        if self.law != "power_law":
            raise DomainError(f"unsupported path-loss law {self.law!r}")
        if not math.isfinite(self.alpha) or self.alpha <= 0:
            raise DomainError(f"alpha must be positive and finite, got {self.alpha}")
        if self.r_c < 0:
            raise DomainError("r_c must be nonnegative")

    def __call__(self, r):
        return np.power(r, -self.alpha)

    def check_dimension(self, d: int) -> None:
        if self.alpha <= d:
            raise DomainError(f"alpha must exceed the dimension {d} for a finite sum, got {self.alpha}")

    def radial_tail(self, b: float, d: int = 2) -> float:
        """``int_{|y| > b} l(|y|) dy`` in ``d`` dimensions."""
        self.check_dimension(d)
        if b <= 0:
            raise DomainError("tail radius must be positive")
        if d == 1:
            return 2.0 * b ** (1.0 - self.alpha) / (self.alpha - 1.0)
        return 2.0 * math.pi * b ** (2.0 - self.alpha) / (self.alpha - 2.0)


@dataclass(frozen=True)
class RingSpec:
    """The ``k``-th square or hexagonal ring around the origin."""

    k: int
    points: np.ndarray
    count: int
    min_distance: float
    max_distance: float
    mean_distance: float


def _sort_points(pts: np.ndarray) -> np.ndarray:
    if len(pts) == 0:
        return pts
    norms = np.round(np.linalg.norm(pts, axis=1), 12)
    if pts.shape[1] == 1:
        order = np.lexsort((pts[:, 0], norms))
    else:
        ang = np.round(np.mod(np.arctan2(pts[:, 1], pts[:, 0]), 2 * math.pi), 12)
        order = np.lexsort((pts[:, 1], pts[:, 0], ang, norms))
    return pts[order]


def _lattice_points_around(lat: Lattice, center, radius: float, limit: int) -> np.ndarray:
    """Lattice points within ``radius`` of ``center`` (unsorted)."""
    center = np.asarray(center, dtype=float).reshape(lat.dimension)
    estimate = (2 * radius if lat.dimension == 1 else math.pi * radius**2) / lat.cell_volume
    if estimate > limit:
        raise CapacityError(f"about {estimate:.3g} points requested, limit is {limit}")
    ginv = np.linalg.inv(lat.G)
    uc = ginv @ center
    half = radius * np.linalg.norm(ginv, axis=1) + 1.0
    ranges = [np.arange(math.floor(c - h), math.ceil(c + h) + 1) for c, h in zip(uc, half)]
    if lat.dimension == 1:
        u = ranges[0][:, None].astype(float)
    else:
        uu, vv = np.meshgrid(ranges[0], ranges[1], indexing="ij")
        u = np.column_stack([uu.ravel(), vv.ravel()]).astype(float)
    pts = u @ lat.G.T
    return pts[np.linalg.norm(pts - center, axis=1) <= radius * (1 + 1e-12)]


def enumerate_points(lat: Lattice, radius: float, exclude_origin: bool = True,
                     limit: int = DEFAULT_POINT_LIMIT) -> np.ndarray:
    """Lattice points with norm at most ``radius``.

    Parameters
    ----------
    lat : Lattice
    radius : float
        Positive radius; points on the boundary circle are included.
    exclude_origin : bool
        Drop the origin from the result.
    limit : int
        Raise CapacityError when the expected count exceeds this.

    Returns
    -------
    ndarray, shape (n, d)
        Sorted by norm, then by polar angle in [0, 2 pi), then by coordinates.
    """
    if not radius > 0:
        raise DomainError(f"radius must be positive, got {radius}")
    pts = _lattice_points_around(lat, np.zeros(lat.dimension), radius, limit)
    if exclude_origin:
        pts = pts[np.linalg.norm(pts, axis=1) > 0]
    return _sort_points(pts)


def _ring_indices(family: str, k: int) -> np.ndarray:
    r = np.arange(-k, k + 1)
    ii, jj = np.meshgrid(r, r, indexing="ij")
    ii, jj = ii.ravel(), jj.ravel()
    if family == "square":
        keep = np.maximum(np.abs(ii), np.abs(jj)) == k
    else:
        keep = np.maximum.reduce([np.abs(ii), np.abs(jj), np.abs(ii + jj)]) == k
    return np.column_stack([ii[keep], jj[keep]]).astype(float)


def ring(lat: Lattice, k: int) -> RingSpec:
    """The ``k``-th ring: a square of ``8k`` points or a hexagon of ``6k`` points."""
    if lat.family not in ("square", "triangular"):
        raise UnsupportedFamilyError(f"rings are defined for square and triangular lattices, not {lat.family}")
    if int(k) != k or k < 1:
        raise DomainError(f"ring index must be a positive integer, got {k}")
    k = int(k)
    pts = _sort_points(_ring_indices(lat.family, k) @ lat.G.T)
    d = np.linalg.norm(pts, axis=1)
    return RingSpec(k, pts, len(pts), float(d.min()), float(d.max()), math.fsum(d) / len(d))


def ring_mean_distance_bounds(lat: Lattice, k: int) -> tuple[float, float]:
    """Upper bounds ``(simple, sharp)`` on the mean distance of ring ``k``.

    For the square lattice ``simple = k (1 + sqrt 2)/2`` and ``sharp = c k``
    with ``c = sqrt(2)/2 + (1 - log(sqrt(2) - 1))/4``, the mean distance from
    the centre of a square of half-width ``k`` to its boundary. For the
    triangular lattice both are ``k (1/2 + sqrt(3)/4)``. The triangular
    value bounds the ring mean only from ``k = 2`` on (ring 1 has all six
    points at distance one).
    """
    if lat.family not in ("square", "triangular"):
        raise UnsupportedFamilyError(f"ring bounds need a square or triangular lattice, not {lat.family}")
    if k < 1:
        raise DomainError("ring index must be positive")
    if lat.family == "square":
        return k * (1.0 + math.sqrt(2.0)) / 2.0, k * SQUARE_RING_C
    return k * TRI_RING_C, k * TRI_RING_C


def _clip(poly: np.ndarray, normal: np.ndarray, offset: float) -> np.ndarray:
    """Sutherland-Hodgman clip of a convex polygon to ``normal . y <= offset``."""
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        fp, fq = normal @ p - offset, normal @ q - offset
        if fp <= 0:
            out.append(p)
        if fp * fq < 0:
            out.append(p + (q - p) * (fp / (fp - fq)))
    return np.array(out)


def polygon_area(poly: np.ndarray) -> float:
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _origin_cell(lat: Lattice) -> np.ndarray:
    b = lat.reduced_basis()
    b1, b2 = b[:, 0], b[:, 1]
    big = 4.0 * (np.linalg.norm(b1) + np.linalg.norm(b2))
    poly = np.array([[-big, -big], [big, -big], [big, big], [-big, big]])
    for v in (b1, b2, b1 + b2, b1 - b2):
        for s in (1.0, -1.0):
            poly = _clip(poly, s * v, 0.5 * float(v @ v))
    # drop near-duplicate vertices produced by clipping through a corner
    keep = np.linalg.norm(poly - np.roll(poly, 1, axis=0), axis=1) > 1e-12 * big
    return poly[keep]


def voronoi_cell(lat: Lattice, x) -> np.ndarray:
    """Closed Voronoi cell of the lattice point ``x``.

    Returns the interval ``[lo, hi]`` in one dimension and the counter-
    clockwise vertex array of a convex polygon in two.
    """
    x = np.asarray(x, dtype=float).reshape(lat.dimension)
    if not lat.contains(x):
        raise DomainError(f"{x.tolist()} is not a lattice point")
    if lat.dimension == 1:
        h = 0.5 * lat.cell_volume
        return np.array([x[0] - h, x[0] + h])
    return _origin_cell(lat) + x


def cell_distances(lat: Lattice, X, z) -> np.ndarray:
    """Distance from ``z`` to the cells of each row of ``X`` (vectorized)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    z = np.asarray(z, dtype=float).reshape(lat.dimension)
    q = z - X
    if lat.dimension == 1:
        h = 0.5 * lat.cell_volume
        return np.maximum(np.abs(q[:, 0]) - h, 0.0)
    P = _origin_cell(lat)
    E = np.roll(P, -1, axis=0) - P
    rel = q[:, None, :] - P[None, :, :]
    cross = E[None, :, 0] * rel[:, :, 1] - E[None, :, 1] * rel[:, :, 0]
    inside = np.all(cross >= 0, axis=1)
    t = np.clip(np.einsum("nek,ek->ne", rel, E) / np.einsum("ek,ek->e", E, E), 0.0, 1.0)
    d = np.linalg.norm(rel - t[:, :, None] * E[None, :, :], axis=2).min(axis=1)
    return np.where(inside, 0.0, d)


def cell_min_distance(lat: Lattice, x, z) -> float:
    """Smallest distance from ``z`` to the Voronoi cell of lattice point ``x``."""
    x = np.asarray(x, dtype=float).reshape(lat.dimension)
    if not lat.contains(x):
        raise DomainError(f"{x.tolist()} is not a lattice point")
    return float(cell_distances(lat, x[None, :], z)[0])
