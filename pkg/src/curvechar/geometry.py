"""Length functions on the cusped once-punctured-torus slice of the Fricke space.

A structure is a real triple (x, y, z) = (tr a, tr b, tr ab) with
x^2 + y^2 + z^2 = xyz, equivalently tr[a, b] = -2.  Traces are evaluated
exactly (z lives in a real quadratic field) and only the final arccosh is
taken in floating point.
"""

from __future__ import annotations

import cmath
import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .quadratic import QuadraticIrrational, rational_sqrt
from .traces import fricke_char
from .words import CurveClass, enumerate_classes, parse_class

LENGTH_TOL = 1e-9


class NonHyperbolicError(ValueError):
    """Trace does not belong to a hyperbolic (loxodromic) element."""


class StructureError(ValueError):
    pass


def _as_mpf(t, prec: int = 120):
    if isinstance(t, QuadraticIrrational):
        return t.to_mpf(prec)
    with mpmath.workprec(prec):
        if isinstance(t, Fraction):
            return mpmath.mpf(t.numerator) / t.denominator
        return mpmath.mpf(t)


def real_length_from_trace(t) -> float:
    """Translation length 2*arccosh(|t|/2); 0 for |t| = 2 (parabolic)."""
    with mpmath.workprec(120):
        a = abs(_as_mpf(t))
        if a < 2:
            raise NonHyperbolicError(f"|trace| = {float(a)} < 2 is elliptic")
        return float(2 * mpmath.acosh(a / 2))


def complex_length_from_trace(t: complex) -> float:
    """Real translation length 2*Re(arccosh(t/2)) of a loxodromic element."""
    t = complex(t)
    if t.imag == 0 and -2 <= t.real <= 2:
        raise NonHyperbolicError(f"trace {t} is elliptic or parabolic")
    return 2 * cmath.acosh(t / 2).real


@dataclass(frozen=True)
class FrickeTriple:
    """Exact point (x, y, z) of the Markov slice; z may be a quadratic irrational."""

    x: Fraction
    y: Fraction
    z: Fraction | QuadraticIrrational
    root: str = "larger"

    @property
    def markov_residual(self):
        x, y, z = self.x, self.y, self.z
        return x * x + y * y + z * z - x * y * z

    @property
    def floats(self) -> tuple[float, float, float]:
        return float(self.x), float(self.y), float(self.z)

    def commutator_trace(self):
        return _COMMUTATOR_POLY.evaluate(self.x, self.y, self.z)

    def is_rational(self) -> bool:
        return isinstance(self.z, Fraction)


def punctured_torus_structure(x, y, root: str = "larger") -> FrickeTriple:
    """Cusped structure with tr a = x, tr b = y; z is a root of z^2 - xyz + x^2 + y^2 = 0.

    Inputs are read as exact rationals (floats convert exactly).
    """
    x, y = Fraction(x), Fraction(y)
    if x <= 2 or y <= 2:
        raise StructureError("need x > 2 and y > 2")
    disc = x * x * y * y - 4 * (x * x + y * y)
    if disc < 0:
        raise StructureError(f"no real z for (x, y) = ({float(x)}, {float(y)}): discriminant {float(disc)} < 0")
    if root not in ("larger", "smaller"):
        raise ValueError("root must be 'larger' or 'smaller'")
    sign = 1 if root == "larger" else -1
    r = rational_sqrt(disc)
    if r is not None:
        z = (x * y + sign * r) / 2
    else:
        z = QuadraticIrrational(x * y / 2, Fraction(sign, 2), disc)
    return FrickeTriple(x, y, z, root)


def minimal_partner(x) -> float:
    """Smallest y admitting a real z for the given x: y = 2x / sqrt(x^2 - 4)."""
    x = float(x)
    return 2 * x / math.sqrt(x * x - 4)


_COMMUTATOR = parse_class("abAB")
_COMMUTATOR_POLY = fricke_char(_COMMUTATOR)


def is_peripheral(c: CurveClass) -> bool:
    return c.rank == 2 and c.canonical == _COMMUTATOR.canonical


def trace_at(s: FrickeTriple, c: CurveClass):
    """Exact trace of the class at the structure."""
    return fricke_char(c).evaluate(s.x, s.y, s.z)


@dataclass(frozen=True)
class LengthSample:
    curve: CurveClass
    trace: object
    length: float
    peripheral: bool


def measure(s: FrickeTriple, c: CurveClass) -> LengthSample:
    t = trace_at(s, c)
    if is_peripheral(c):
        return LengthSample(c, t, 0.0, True)
    return LengthSample(c, t, real_length_from_trace(t), False)


def curve_length(s: FrickeTriple, c: CurveClass) -> float:
    """Length of the geodesic in class ``c``; 0 for the peripheral class."""
    return measure(s, c).length


def collar_product(l1: float, l2: float) -> float:
    if l1 <= 0 or l2 <= 0:
        raise ValueError("lengths must be positive")
    return math.sinh(l1 / 2) * math.sinh(l2 / 2)


def collar_check(l1: float, l2: float) -> bool:
    return collar_product(l1, l2) > 1


# --------------------------------------------------------------------------
# Pinching


@dataclass(frozen=True)
class PinchingSchedule:
    xs: tuple[Fraction, ...]
    ys: tuple[Fraction, ...]
    probes: tuple[CurveClass, ...]
    pinched: CurveClass = field(default_factory=lambda: parse_class("a"))

    def __post_init__(self):
        if len(self.xs) != len(self.ys) or not self.xs:
            raise ValueError("schedule needs matching nonempty x and y sequences")
        for n, (x, y) in enumerate(zip(self.xs, self.ys)):
            if x * x * y * y - 4 * (x * x + y * y) < 0:
                raise StructureError(f"step {n + 1}: (x, y) admits no real z")

    def structures(self) -> list[FrickeTriple]:
        return [punctured_torus_structure(x, y) for x, y in zip(self.xs, self.ys)]


DEFAULT_PROBES = ("b", "ab", "aB", "abaaB", "aabaB", "aabb")


def reference_schedule(steps: int = 10, slack: float = 1.01, probes: Iterable[str] = DEFAULT_PROBES) -> PinchingSchedule:
    """x_n = 2 + 4^-n and y_n = slack * (smallest admissible y), n = 1..steps."""
    xs = tuple(2 + Fraction(1, 4**n) for n in range(1, steps + 1))
    ys = tuple(Fraction(slack * minimal_partner(x)) for x in xs)
    return PinchingSchedule(xs, ys, tuple(parse_class(p) for p in probes))


@dataclass
class LengthReport:
    rows: list[dict]
    pinched: CurveClass
    pinched_lengths: list[float]
    probe_min: dict[str, float]
    probe_max: dict[str, float]

    @property
    def pinched_strictly_decreasing(self) -> bool:
        ls = self.pinched_lengths
        return all(b < a for a, b in zip(ls, ls[1:]))

    FIELDS = ("step", "x", "y", "z", "curve", "trace", "length")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=self.FIELDS, lineterminator="\n")
        w.writeheader()
        for row in self.rows:
            w.writerow({k: _fmt(row[k]) for k in self.FIELDS})
        return buf.getvalue()

    def to_jsonl(self) -> str:
        return "".join(json.dumps({k: _fmt(row[k]) for k in self.FIELDS}) + "\n" for row in self.rows)


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (Fraction, QuadraticIrrational)):
        return repr(float(v))
    if isinstance(v, CurveClass):
        return str(v)
    return v


def lengths_table(structures: Sequence[FrickeTriple], curves: Sequence[CurveClass]) -> LengthReport:
    """Length of every curve at every structure (rows ordered by step, then curve)."""
    rows = []
    lmin: dict[str, float] = {}
    lmax: dict[str, float] = {}
    for step, s in enumerate(structures, start=1):
        x, y, z = s.floats
        for c in curves:
            m = measure(s, c)
            rows.append({"step": step, "x": x, "y": y, "z": z, "curve": c, "trace": float(m.trace), "length": m.length})
            key = str(c)
            lmin[key] = min(lmin.get(key, math.inf), m.length)
            lmax[key] = max(lmax.get(key, -math.inf), m.length)
    first = curves[0] if curves else None
    firsts = [r["length"] for r in rows if r["curve"] == first]
    return LengthReport(rows, first, firsts, lmin, lmax)


def pinching_experiment(schedule: PinchingSchedule) -> LengthReport:
    curves = [schedule.pinched] + [p for p in schedule.probes if p != schedule.pinched]
    return lengths_table(schedule.structures(), curves)


# --------------------------------------------------------------------------
# Lower bound scan for non-simple curves


@dataclass(frozen=True)
class HempelScanConfig:
    grid: tuple[tuple[Fraction, Fraction], ...] = ((3, 3), (3, 4), (4, 4), (3, 10))
    max_len: int = 8
    simple: bool = False


@dataclass(frozen=True)
class HempelResult:
    observed_min: float
    curve: CurveClass
    structure: FrickeTriple
    curves_scanned: int


def hempel_scan(cfg: HempelScanConfig) -> HempelResult:
    """Least length over non-simple classes (or simple ones when ``cfg.simple``)."""
    from .intersections import is_simple

    if not cfg.grid:
        raise ValueError("empty grid")
    if cfg.max_len < 1:
        raise ValueError("max_len must be positive")
    structures = [punctured_torus_structure(x, y) for x, y in cfg.grid]
    curves = [
        c for c in enumerate_classes(cfg.max_len, 2)
        if not is_peripheral(c) and is_simple(c) == cfg.simple
    ]
    if not curves:
        raise ValueError("no curves to scan")
    best = None
    for s in structures:
        for c in curves:
            ell = curve_length(s, c)
            if best is None or ell < best[0]:
                best = (ell, c, s)
    return HempelResult(best[0], best[1], best[2], len(curves))
