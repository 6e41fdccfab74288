"""Command-line front end: ``latnet bounds``, ``latnet tdma`` and ``latnet sweep``.

Every command builds a ``SweepTable`` and writes it as CSV (default) or
JSON, to ``--out`` or standard output. Exit codes: 0 success, 2 bad
arguments, 3 domain error, 4 internal invariant violation, 1 I/O error.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import line as ln
from . import square as sq
from . import triangular as tri
from .bounds import (BoundedValue, InterferenceQuery, interference_oracle, radial_upper_bound,
                     ring_averaging_lower_bound, valid_radii, voronoi_upper_bound)
from .errors import CapacityError, ConstructionError, DomainError, InvariantError, UnsupportedFamilyError
from .lattice import Lattice, PathLoss
from .specfun import ZetaBoundKind, riemann_zeta, zeta_bound
from .table import SweepTable

__all__ = ["cmd_bounds", "cmd_tdma", "cmd_sweep", "QUANTITIES", "SCHEMES", "main", "parse_grid", "parse_m"]

FAMILIES = ("line", "square", "triangular")
SCHEMES = {
    "line": ("unidirectional", "balanced"),
    "square": ("simple", "balanced"),
    "triangular": ("rhombus", "parallelogram", "balanced_rows"),
}
BOUND_COLUMNS = ["name", "value", "kind", "oracle", "oracle_lo", "oracle_hi", "rel_gap"]
EXIT_OK, EXIT_IO, EXIT_ARGS, EXIT_DOMAIN, EXIT_INVARIANT = 0, 1, 2, 3, 4
# slack for closed forms compared against a certified bracket
_EXACT_RTOL = 1e-12


# ---------------------------------------------------------------------------
# argument parsing helpers


def parse_grid(text: str) -> list[float]:
    """``a..b:step`` (inclusive), ``a..b`` (101 points) or ``x1,x2,...``."""
    text = text.strip()
    if ".." not in text:
        return [float(s) for s in text.split(",") if s]
    lo, rest = text.split("..", 1)
    hi, _, step = rest.partition(":")
    a, b = float(lo), float(hi)
    if b < a:
        raise ValueError(f"empty grid {text!r}")
    if step:
        h = float(step)
        if h <= 0:
            raise ValueError("grid step must be positive")
        n = int(round((b - a) / h))
        return [round(a + i * h, 12) for i in range(n + 1)]
    return [round(float(x), 12) for x in np.linspace(a, b, 101)]


def parse_m(text: str) -> list[int]:
    """``5``, ``2..10`` or ``2,4,8``."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(s) for s in text.split(",") if s]


def _parse_floats(text: str) -> list[float]:
    return [float(s) for s in str(text).split(",") if s]


def _offset_vector(family: str, offset) -> tuple[float, ...] | None:
    """``offset`` is ``(r,)`` or ``(r, theta)`` with ``theta`` in radians."""
    if offset is None:
        return None
    r = float(offset[0])
    theta = float(offset[1]) if len(offset) > 1 else 0.0
    if family == "line":
        return (r,)
    return (r * math.cos(theta), r * math.sin(theta))


def _lattice(family: str) -> Lattice:
    if family not in FAMILIES:
        raise UnsupportedFamilyError(f"unknown lattice {family!r}; choose one of {', '.join(FAMILIES)}")
    return Lattice.from_family(family)


# ---------------------------------------------------------------------------
# bounds


def _bound_row(name: str, b: BoundedValue, oracle: BoundedValue) -> tuple:
    return (name, b.value, b.kind, oracle.value, oracle.lo, oracle.hi, (b.value - oracle.value) / oracle.value)


def check_kinds(rows, columns=BOUND_COLUMNS) -> None:
    """Raise ``InvariantError`` unless every lower row is at most the oracle and every upper row at least."""
    ix = {c: i for i, c in enumerate(columns)}
    for r in rows:
        kind, v = r[ix["kind"]], r[ix["value"]]
        lo, hi = r[ix["oracle_lo"]], r[ix["oracle_hi"]]
        slack = _EXACT_RTOL * abs(hi)
        if kind == "lower" and v > hi:
            raise InvariantError(f"lower bound {r[0]} = {v!r} exceeds the oracle bracket {lo!r}..{hi!r}")
        if kind == "upper" and v < lo:
            raise InvariantError(f"upper bound {r[0]} = {v!r} is below the oracle bracket {lo!r}..{hi!r}")
        if kind == "exact" and not lo - slack <= v <= hi + slack:
            raise InvariantError(f"exact value {r[0]} = {v!r} is outside the oracle bracket {lo!r}..{hi!r}")


def _bounds_line(alpha, z):
    out = []
    lower = zeta_bound(ZetaBoundKind.HURWITZ_LOWER, alpha, z) + zeta_bound(ZetaBoundKind.HURWITZ_LOWER, alpha, -z)
    out.append(("hurwitz_lower", BoundedValue(lower, "lower")))
    out.append(("hurwitz_upper", BoundedValue(ln.line_interference_upper(alpha, z), "upper")))
    out.append(("exact", BoundedValue(ln.line_interference(alpha, z), "exact")))
    if z == 0.0:
        for kind in (ZetaBoundKind.STD_LOWER_RATIONAL, ZetaBoundKind.STD_LOWER_LOOSE, ZetaBoundKind.STD_UPPER_RATIONAL):
            out.append((kind.value, BoundedValue(2.0 * zeta_bound(kind, alpha), "upper" if kind.is_upper else "lower")))
    else:
        c = ln.excess_coefficient_1d(alpha)
        out.append(("quadratic", BoundedValue(c(z), "approximation")))
        out.append(("quartic", BoundedValue(c(z, order=4), "approximation")))
    return out


def _bounds_square(q, alpha, r):
    out = [("ring_average", ring_averaging_lower_bound(q)),
           ("voronoi", voronoi_upper_bound(q, 1.5))]
    radii = valid_radii(q, 3.0)
    out.append(("radial_best", min((radial_upper_bound(q, rb) for rb in radii), key=lambda b: b.value)))
    if r == 0.0:
        for v in sq.LOWER_VARIANTS:
            out.append((v, BoundedValue(sq.square_lower(alpha, v), "lower")))
        for v in sq.UPPER_VARIANTS:
            out.append((v, BoundedValue(sq.square_upper(alpha, v), "upper")))
        out.append(("exact", BoundedValue(sq.square_exact(alpha), "exact")))
    else:
        e = sq.square_offset_expansion(alpha)
        out.append(("quadratic", BoundedValue(sq.square_exact(alpha) + e.c_ex_lattice * r * r, "approximation")))
    return out


def _bounds_triangular(q, alpha, r):
    out = [("ring_average", ring_averaging_lower_bound(q)),
           ("voronoi", voronoi_upper_bound(q, 1.5))]
    radii = valid_radii(q, 3.0)
    out.append(("radial_best", min((radial_upper_bound(q, rb) for rb in radii), key=lambda b: b.value)))
    if r == 0.0:
        out.append(("tri_lower", BoundedValue(tri.tri_lower(alpha), "lower")))
        out.append(("tri_lower_ring", BoundedValue(tri.tri_lower_ring(alpha), "lower")))
        for v in ("near6", "near18"):
            out.append((v, BoundedValue(tri.tri_upper(alpha, v), "upper")))
        out.append(("exact", BoundedValue(tri.triangular_exact(alpha), "exact")))
    else:
        quad = tri.tri_lower(alpha) + 1.5 * alpha * alpha * r * r
        out.append(("quadratic", BoundedValue(quad, "lower" if r <= 0.45 else "approximation")))
    return out


def cmd_bounds(lattice: str, alpha: float, offset=None, truncation_radius: float | None = None,
               tolerance: float = 1e-8) -> SweepTable:
    """One row per bound variant with the oracle value and the relative gap.

    ``offset`` is ``None`` or ``(r,)`` / ``(r, theta)``.
    """
    lat = _lattice(lattice)
    z = _offset_vector(lattice, offset)
    q = InterferenceQuery(lat, PathLoss(alpha), z)
    oracle = interference_oracle(q, truncation_radius, rtol=tolerance)
    r = q.znorm
    if lattice == "line":
        variants = _bounds_line(q.alpha, q.z[0])
    elif lattice == "square":
        variants = _bounds_square(q, q.alpha, r)
    else:
        variants = _bounds_triangular(q, q.alpha, r)
    rows = sorted((_bound_row(n, b, oracle) for n, b in variants), key=lambda t: (t[1], t[0]))
    check_kinds(rows)
    meta = {"command": "bounds", "lattice": lattice, "alpha": q.alpha, "offset": list(q.z),
            "tolerance": tolerance, "truncation_radius": truncation_radius, "version": __version__}
    return SweepTable(list(BOUND_COLUMNS), rows, meta)


# ---------------------------------------------------------------------------
# TDMA


def _tdma_row(family: str, scheme: str, alpha: float, m: int, truncation_radius):
    """Return the row and a list of ``(kind, value)`` checks against its bracket."""
    if family == "line":
        if scheme == "unidirectional":
            res = ln.tdma_unidirectional(alpha, m)
        else:
            res = ln.tdma_balanced(alpha, m, truncation_radius)
        b = res.interference
        row = (scheme, m, b.value, b.lo, b.hi, res.lower, res.upper, res.rate, res.throughput,
               res.approx_throughput, m**alpha * b.value)
        return row, [("lower", res.lower), ("upper", res.upper)], b
    if family == "square":
        fn = sq.square_tdma_simple if scheme == "simple" else sq.square_tdma_balanced
        res = fn(alpha, m, truncation_radius)
        b = res.interference
        rate = math.log2(1.0 + 1.0 / b.value)
        row = (scheme, m, b.value, b.lo, b.hi, res.radial_bound.value, rate, rate / res.scheme.slots,
               res.normalized)
        return row, [("upper", res.radial_bound.value)], b
    res = tri.tri_tdma(alpha, tri.tri_tdma_scheme(scheme, m), truncation_radius)
    b = res.interference
    rate = math.log2(1.0 + 1.0 / b.value)
    row = (scheme, m, res.scheme.cell_area, b.value, b.lo, b.hi, rate, rate / res.scheme.slots, res.normalized)
    return row, [], b


TDMA_COLUMNS = {
    "line": ["scheme", "m", "interference", "lo", "hi", "lower", "upper", "rate", "throughput",
             "approx_throughput", "normalized"],
    "square": ["scheme", "m", "interference", "lo", "hi", "radial_bound", "rate", "throughput", "normalized"],
    "triangular": ["scheme", "m", "cell_area", "interference", "lo", "hi", "rate", "throughput", "normalized"],
}


def _schemes(family: str, scheme: str | None) -> list[str]:
    valid = SCHEMES[family]
    if scheme in (None, "all"):
        return list(valid)
    names = scheme.split("+")
    for s in names:
        if s not in valid:
            raise DomainError(f"scheme {s!r} is not defined for {family}; choose from {', '.join(valid)}")
    return names


def cmd_tdma(lattice: str, alpha: float, scheme: str | None, m_range, truncation_radius: float | None = None) -> SweepTable:
    """Per-``m`` rows for one or more schemes (``a+b`` or ``all``).

    ``normalized`` is ``m**alpha I`` on the line and the square and
    ``I lambda**(-alpha/2)`` on the triangular lattice, whose figure axis
    is the Voronoi cell area ``cell_area``.
    """
    _lattice(lattice)
    names = _schemes(lattice, scheme)
    ms = sorted(set(int(m) for m in m_range))
    rows = []
    for m in ms:
        for s in names:
            row, checks, b = _tdma_row(lattice, s, float(alpha), m, truncation_radius)
            for kind, v in checks:
                if (kind == "lower" and v > b.hi) or (kind == "upper" and v < b.lo):
                    raise InvariantError(f"{kind} bound {v!r} for {s}, m={m} is inconsistent with {b.bracket}")
            rows.append(row)
    meta = {"command": "tdma", "lattice": lattice, "alpha": float(alpha), "schemes": names, "m": ms,
            "truncation_radius": truncation_radius, "version": __version__}
    return SweepTable(list(TDMA_COLUMNS[lattice]), rows, meta, key="m")


# ---------------------------------------------------------------------------
# sweeps


def _fmt(x: float) -> str:
    return format(x, "g")


def _sweep_interference(var, grid, fx):
    if var != "alpha":
        raise DomainError("interference is swept over alpha; use offset-curve for r")
    family = fx["lattice"]
    lat = _lattice(family)
    z = _offset_vector(family, fx.get("offset"))
    cols = [var, "oracle", "lo", "hi"]
    rows = []
    for a in grid:
        b = interference_oracle(InterferenceQuery(lat, PathLoss(a), z), fx.get("truncation_radius"),
                                rtol=fx["tolerance"])
        rows.append((a, b.value, b.lo, b.hi))
    return cols, rows


def _closed_forms(family: str, a: float) -> list[tuple[str, str, float]]:
    if family == "square":
        out = [(v, "lower", sq.square_lower(a, v)) for v in sq.LOWER_VARIANTS]
        out += [(v, "upper", sq.square_upper(a, v)) for v in sq.UPPER_VARIANTS]
        return [("exact", "exact", sq.square_exact(a))] + out
    if family == "triangular":
        return [("exact", "exact", tri.triangular_exact(a)),
                ("tri_lower", "lower", tri.tri_lower(a)), ("tri_lower_ring", "lower", tri.tri_lower_ring(a)),
                ("near6", "upper", tri.tri_upper(a, "near6")), ("near18", "upper", tri.tri_upper(a, "near18"))]
    return [("exact", "exact", 2.0 * riemann_zeta(a)),
            ("hurwitz_lower", "lower", 2.0 * zeta_bound("hurwitz_lower", a)),
            ("std_lower_rational", "lower", 2.0 * zeta_bound("std_lower_rational", a)),
            ("hurwitz_upper", "upper", 2.0 * zeta_bound("hurwitz_upper", a)),
            ("std_upper_rational", "upper", 2.0 * zeta_bound("std_upper_rational", a))]


def _sweep_bound(var, grid, fx):
    if var != "alpha":
        raise DomainError("bound is swept over alpha")
    family = fx["lattice"]
    _lattice(family)
    names = [n for n, _, _ in _closed_forms(family, 4.0)]
    rows = []
    for a in grid:
        forms = _closed_forms(family, a)
        exact = forms[0][2]
        for n, kind, v in forms[1:]:
            bad = (kind == "lower" and v > exact * (1 + _EXACT_RTOL)) or (kind == "upper" and v < exact * (1 - _EXACT_RTOL))
            if bad:
                raise InvariantError(f"{kind} bound {n} = {v!r} violates the exact value {exact!r} at alpha={a}")
        rows.append((a,) + tuple(v for _, _, v in forms))
    return [var] + names, rows


def _sweep_throughput(var, grid, fx):
    family = fx["lattice"]
    _lattice(family)
    scheme = _schemes(family, fx.get("scheme") or SCHEMES[family][0])
    if len(scheme) != 1:
        raise DomainError("throughput sweeps take a single scheme")
    s = scheme[0]
    if var == "m":
        series, label = fx["alpha"], "alpha"
        grid = [int(round(g)) for g in grid]
        pairs = lambda x, y: (y, x)  # noqa: E731  (alpha, m)
    elif var == "alpha":
        series, label = fx.get("m") or [2], "m"
        pairs = lambda x, y: (x, int(y))  # noqa: E731
    else:
        raise DomainError("throughput is swept over m or alpha")
    cols = [var] + [f"throughput[{label}={_fmt(y)}]" for y in series]
    rows = []
    for x in grid:
        vals = []
        for y in series:
            a, m = pairs(x, y)
            row, _, _ = _tdma_row(family, s, float(a), m, fx.get("truncation_radius"))
            vals.append(row[TDMA_COLUMNS[family].index("throughput")])
        rows.append((x,) + tuple(vals))
    return cols, rows


def _sweep_capacity(var, grid, fx):
    if var != "z":
        raise DomainError("transport-capacity is swept over z")
    alphas = fx["alpha"]
    cols = [var] + [f"T[alpha={_fmt(a)}]" for a in alphas]
    return cols, [(z,) + tuple(ln.transport_capacity(a, z) for a in alphas) for z in grid]


def _sweep_offset(var, grid, fx):
    if var != "r":
        raise DomainError("offset-curve is swept over r")
    family = fx["lattice"]
    lat = _lattice(family)
    theta = float(fx.get("theta", 0.0))
    alphas = fx["alpha"]
    cols = [var]
    for a in alphas:
        cols += [f"{c}[alpha={_fmt(a)}]" for c in ("I", "lo", "hi", "quad")]
    rows = []
    for r in grid:
        z = _offset_vector(family, (r, theta))
        row = [r]
        for a in alphas:
            b = interference_oracle(InterferenceQuery(lat, PathLoss(a), z), fx.get("truncation_radius"),
                                    rtol=fx["tolerance"])
            if family == "triangular":
                quad = tri.tri_lower(a) + 1.5 * a * a * r * r
                if r <= 0.45 and quad > b.hi:
                    raise InvariantError(f"quadratic bound {quad!r} exceeds the oracle {b.bracket} at r={r}")
            elif family == "square":
                quad = sq.square_exact(a) + sq.square_offset_expansion(a).c_ex_lattice * r * r
            else:
                quad = ln.excess_coefficient_1d(a)(r)
            row += [b.value, b.lo, b.hi, quad]
        rows.append(tuple(row))
    return cols, rows


QUANTITIES = {
    "interference": _sweep_interference,
    "bound": _sweep_bound,
    "throughput": _sweep_throughput,
    "transport-capacity": _sweep_capacity,
    "offset-curve": _sweep_offset,
}


def cmd_sweep(quantity: str, variable: str, grid, fixed: dict, fmt: str = "csv",
              out: str | Path | None = None) -> str:
    """Evaluate ``quantity`` on ``grid`` and return (and optionally write) the encoded table.

    ``fixed`` holds ``lattice``, ``alpha`` (a list), ``m`` (a list),
    ``scheme``, ``theta``, ``offset``, ``tolerance`` and
    ``truncation_radius`` as needed by the quantity.
    """
    if quantity not in QUANTITIES:
        raise DomainError(f"unknown quantity {quantity!r}; valid: {', '.join(QUANTITIES)}")
    fx = {"lattice": "line", "alpha": [2.0], "tolerance": 1e-8, **fixed}
    grid = sorted(float(g) for g in grid)
    cols, rows = QUANTITIES[quantity](variable, grid, fx)
    meta = {"command": "sweep", "quantity": quantity, "variable": variable,
            "fixed": {k: v for k, v in sorted(fx.items())}, "version": __version__}
    table = SweepTable(cols, rows, meta, key=variable)
    text = table.dumps(fmt)
    if out is not None:
        Path(out).write_text(text, encoding="utf-8", newline="")
    return text


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="latnet", description="Interference, bounds and TDMA throughput in lattice networks.")
    p.add_argument("--version", action="version", version=f"latnet {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--lattice", choices=FAMILIES, default="square")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", help="output file; standard output when omitted")
        sp.add_argument("--truncation-radius", type=float, help="fixed oracle radius instead of adaptive growth")
        sp.add_argument("--tolerance", type=float, default=1e-8, help="relative bracket width of the oracle")

    b = sub.add_parser("bounds", help="closed-form and numerical bounds next to the oracle")
    common(b)
    b.add_argument("--alpha", type=float, required=True)
    b.add_argument("--offset", help="receiver offset r[,theta] (theta in radians)")

    t = sub.add_parser("tdma", help="interference and throughput of TDMA schemes")
    common(t)
    t.add_argument("--alpha", type=float, required=True)
    t.add_argument("--scheme", default="all", help="scheme name, a+b, or all")
    t.add_argument("--m", default="2..10", help="integer, a..b or comma list")

    s = sub.add_parser("sweep", help="emit figure data for one quantity over a grid")
    common(s)
    s.add_argument("quantity", choices=tuple(QUANTITIES))
    s.add_argument("--var", required=True, help="sweep variable: alpha, m, r or z")
    s.add_argument("--grid", required=True, help="a..b:step, a..b or comma list")
    s.add_argument("--alpha", default="2", help="value or comma list")
    s.add_argument("--m", help="integer, a..b or comma list (throughput over alpha)")
    s.add_argument("--scheme")
    s.add_argument("--offset", help="r[,theta]; for offset-curve only theta is used")
    return p


def _run(args) -> str:
    if args.command == "bounds":
        off = _parse_floats(args.offset) if args.offset else None
        table = cmd_bounds(args.lattice, args.alpha, off, args.truncation_radius, args.tolerance)
    elif args.command == "tdma":
        table = cmd_tdma(args.lattice, args.alpha, args.scheme, parse_m(args.m), args.truncation_radius)
    else:
        fixed = {"lattice": args.lattice, "alpha": _parse_floats(args.alpha), "tolerance": args.tolerance,
                 "truncation_radius": args.truncation_radius}
        if args.m:
            fixed["m"] = parse_m(args.m)
        if args.scheme:
            fixed["scheme"] = args.scheme
        if args.offset:
            off = _parse_floats(args.offset)
            fixed["offset"] = off
            fixed["theta"] = off[1] if len(off) > 1 else 0.0
        return cmd_sweep(args.quantity, args.var, parse_grid(args.grid), fixed, args.format, args.out)
    text = table.dumps(args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="")
    return text


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = _run(args)
    except ValueError as e:
        if not isinstance(e, DomainError):
            parser.print_usage(sys.stderr)
            print(f"latnet: error: {e}", file=sys.stderr)
            return EXIT_ARGS
        print(f"latnet: domain error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except CapacityError as e:
        print(f"latnet: domain error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except (InvariantError, ConstructionError) as e:
        print(f"latnet: invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except OSError as e:
        print(f"latnet: {e}", file=sys.stderr)
        return EXIT_IO
    if not args.out:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
