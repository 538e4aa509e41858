"""The ten acceptance suites, each returning a machine-readable result."""

from __future__ import annotations

import functools
import itertools
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import words as _words
from .explorer import (
    SearchConfig,
    bucket_classes,
    gr_filter_check,
    horowitz_primitive_check,
    search_tuples,
)
from .geometry import (
    curve_length,
    collar_product,
    is_peripheral,
    punctured_torus_structure,
    reference_schedule,
    lengths_table,
)
from .intersections import DEFAULT_STRUCTURE, is_simple, self_intersection, slope, slope_intersection, structure
from .matrices import random_integer_representation, random_unimodular
from .traces import (
    HorowitzPoint,
    chars_equal_exact,
    chars_equal_probabilistic,
    cross_ratio,
    fricke_char,
    horowitz_rep,
    leading_coeff_formula,
    normalize_to_horowitz,
    trace_poly_in_T,
)
from .words import CurveClass, enumerate_classes, exponent_vectors, from_exponents, parse_class, parse_word

SEED = 20240601


@dataclass
class SuiteResult:
    criterion: int
    name: str
    ok: bool
    elapsed: float
    details: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "criterion": self.criterion,
            "name": self.name,
            "ok": self.ok,
            "elapsed_s": round(self.elapsed, 3),
            "violations": self.violations[:50],
            "violation_count": len(self.violations),
            **self.details,
        }

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = "" if self.ok else f" ({len(self.violations)} violations, first: {self.violations[:3]})"
        return f"[{status}] criterion {self.criterion:2d} {self.name}: {self.elapsed:.2f}s{extra}"


@functools.lru_cache(maxsize=4)
def _buckets(max_len: int):
    return bucket_classes(enumerate_classes(max_len, 2))


@functools.lru_cache(maxsize=4)
def _classes(max_len: int, include_powers: bool = False) -> tuple[CurveClass, ...]:
    return tuple(enumerate_classes(max_len, 2, include_powers=include_powers))


# ---------------------------------------------------------------- 1
def horowitz_pair() -> tuple[bool, dict, list]:
    u, v = parse_word("abaaB"), parse_word("aabaB")
    equal = chars_equal_exact(u, v)
    cu, cv = _words.canonical_class(u), _words.canonical_class(v)
    bad = [] if equal and cu != cv else [{"u": str(u), "v": str(v), "equal": equal, "distinct_classes": cu != cv}]
    return not bad, {"classes": [str(cu), str(cv)], "character": str(fricke_char(u))}, bad


# ---------------------------------------------------------------- 2
def reversal(max_len: int = 10) -> tuple[bool, dict, list]:
    bad = []
    classes = _classes(max_len)
    for c in classes:
        w = c.word()
        r = _words.reverse(w)
        if fricke_char(w) != fricke_char(r):
            bad.append({"word": str(w), "reversed": str(r)})
    return not bad, {"checked": len(classes)}, bad


# ---------------------------------------------------------------- 3
HOROWITZ_EXPONENTS = ((1, 0), (1, 1), (2, 1), (3, 2))


def horowitz(max_len: int = 10) -> tuple[bool, dict, list]:
    buckets = _buckets(max_len)
    verdicts = [horowitz_primitive_check(m, n, max_len, buckets) for m, n in HOROWITZ_EXPONENTS]
    bad = [v.to_json() for v in verdicts if not v.ok]
    return not bad, {"buckets": {v.name: v.details["bucket"] for v in verdicts}}, bad


# ---------------------------------------------------------------- 4
def _random_exponent_word(rng: random.Random):
    p = rng.randint(1, 3)
    choices = [e for e in range(-3, 4) if e]
    m = [rng.choice(choices) for _ in range(p)]
    n = [rng.choice(choices) for _ in range(p)]
    return from_exponents(m, n), m, n


def leading_coefficient(samples: int = 100, seed: int = SEED) -> tuple[bool, dict, list]:
    lam, mu = Fraction(3, 2), Fraction(5, 3)
    rng = random.Random(seed)
    bad = []
    for _ in range(samples):
        w, m, n = _random_exponent_word(rng)
        poly = trace_poly_in_T(w, lam, mu)
        got = poly.coeff(2 * len(m))
        want = leading_coeff_formula(m, n, lam, mu)
        if got != want or poly.degree() != 2 * len(m):
            bad.append({"word": str(w), "m": m, "n": n, "got": str(got), "want": str(want), "degree": poly.degree()})
    return not bad, {"samples": samples}, bad


# ---------------------------------------------------------------- 5
_PROBE_WORDS = ("a", "b", "ab", "aB")


def _random_rational(rng: random.Random, avoid=(0, 1, -1)) -> Fraction:
    while True:
        v = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        if v not in avoid:
            return v


def _close(u, v, tol: float = 1e-9) -> bool:
    if isinstance(u, Fraction) and isinstance(v, Fraction):
        return u == v
    return abs(complex(u) - complex(v)) <= tol * max(1.0, abs(complex(v)))


def normalization(samples: int = 20, seed: int = SEED) -> tuple[bool, dict, list]:
    rng = random.Random(seed)
    bad = []
    kinds = {"rational": 0, "complex": 0}
    for i in range(samples):
        pt = HorowitzPoint(_random_rational(rng), _random_rational(rng), _random_rational(rng, avoid=(0,)))
        g = random_unimodular(rng)
        rep = horowitz_rep(pt).conjugate(g)
        norm = normalize_to_horowitz(rep)
        kinds[norm.kind] += 1
        back = horowitz_rep(norm.point)
        problems = []
        for text in _PROBE_WORDS:
            w = parse_word(text)
            if not _close(back.trace(w), rep.trace(w)):
                problems.append(f"trace of {text}: {back.trace(w)} != {rep.trace(w)}")
        lam, mu, T = norm.point.lam, norm.point.mu, norm.point.T
        xa, ya, xb, yb = norm.fixed_points
        formula = (1 / lam - lam) * (mu - 1 / mu) * cross_ratio(xa, ya, xb, yb)
        from_chars = rep.trace(parse_word("ab")) - lam * mu - 1 / (lam * mu)
        if not _close(formula, T * T) or not _close(formula, from_chars):
            problems.append(f"T^2 mismatch: formula {formula}, point {T * T}, characters {from_chars}")
        for got, want in zip(norm.apply(rep).mats, back.mats):
            if not all(_close(x, y) for x, y in zip((got.p, got.q, got.r, got.s), (want.p, want.q, want.r, want.s))):
                problems.append("conjugated representation differs from the normal form")
                break
        if problems:
            bad.append({"sample": i, "point": [str(pt.lam), str(pt.mu), str(pt.T)], "problems": problems})
    return not bad, {"samples": samples, "kinds": kinds}, bad


# ---------------------------------------------------------------- 6
SELF_INTERSECTION_PINS = {"a": 0, "ab": 0, "abaaB": 2, "aabaB": 2}


def self_intersection_pins() -> tuple[bool, dict, list]:
    other = structure(3, 4)
    bad = []
    seen = {}
    for text, want in SELF_INTERSECTION_PINS.items():
        c = parse_class(text)
        r1 = self_intersection(c, DEFAULT_STRUCTURE)
        r2 = self_intersection(c, other)
        seen[text] = {"count": r1.count, "bound": r1.bound, "stable": r1.stable, "count_3_4": r2.count}
        if r1.count != want or r2.count != want or not (r1.stable and r2.stable):
            bad.append({"word": text, "want": want, **seen[text]})
    return not bad, {"counts": seen}, bad


# ---------------------------------------------------------------- 7
COLLAR_GRID = ((3, 3), (3, 4), (4, 4), (3, 10))
COLLAR_MARGIN = 1e-6


def collar(max_len: int = 6) -> tuple[bool, dict, list]:
    simple = [c for c in _classes(max_len) if not is_peripheral(c) and is_simple(c)]
    slopes = {c: slope(c) for c in simple}
    pairs = [(c1, c2) for c1, c2 in itertools.combinations(simple, 2) if slope_intersection(slopes[c1], slopes[c2]) >= 1]
    bad = []
    worst = math.inf
    for x, y in COLLAR_GRID:
        s = punctured_torus_structure(x, y)
        lengths = {c: curve_length(s, c) for c in simple}
        for c1, c2 in pairs:
            margin = collar_product(lengths[c1], lengths[c2]) - 1
            worst = min(worst, margin)
            if margin < COLLAR_MARGIN:
                bad.append({"structure": [x, y], "pair": [str(c1), str(c2)], "margin": margin})
    return not bad, {"simple_classes": len(simple), "pairs": len(pairs), "min_margin": worst}, bad


# ---------------------------------------------------------------- 8
PINCH_TARGET = 5e-3


def pinching(max_len: int = 8) -> tuple[bool, dict, list]:
    sched = reference_schedule()
    probes = [c for c in _classes(max_len) if not is_simple(c)]
    report = lengths_table(sched.structures(), [sched.pinched, *probes])
    ell = report.pinched_lengths
    bad = []
    if not ell[-1] < PINCH_TARGET:
        bad.append({"reason": "pinched curve not short enough", "final_length": ell[-1]})
    if not report.pinched_strictly_decreasing:
        bad.append({"reason": "pinched lengths not strictly decreasing", "lengths": ell})
    floor = min(report.probe_min[str(c)] for c in probes)
    arg = min(probes, key=lambda c: report.probe_min[str(c)])
    if not floor > 0:
        bad.append({"reason": "non-simple probe collapsed", "curve": str(arg), "length": floor})
    return not bad, {
        "pinched_lengths": ell,
        "probes": len(probes),
        "observed_lower_bound": floor,
        "shortest_probe": str(arg),
    }, bad


# ---------------------------------------------------------------- 9
def gr(max_len: int = 10) -> tuple[bool, dict, list]:
    reports = search_tuples(SearchConfig(max_len=max_len))
    v = gr_filter_check(reports)
    return v.ok, {"checked": v.checked, "tuples": len(reports)}, v.violations


# ---------------------------------------------------------------- 10
def brute_force_classes(max_len: int, include_powers: bool = False) -> set[tuple[int, ...]]:
    """Canonical letter tuples of all cyclic classes, by scanning every string."""
    out = set()
    for n in range(1, max_len + 1):
        for s in itertools.product(range(4), repeat=n):
            if any(s[i] ^ 1 == s[(i + 1) % n] for i in range(n)):
                continue  # not cyclically reduced
            inv = tuple(x ^ 1 for x in reversed(s))
            canon = min([s[i:] + s[:i] for i in range(n)] + [inv[i:] + inv[:i] for i in range(n)])
            if not include_powers and any(n % d == 0 and s == s[:d] * (n // d) for d in range(1, n)):
                continue
            out.add(canon)
    return out


def oracles(seed: int = SEED, reps: int = 100, pairs: int = 1000) -> tuple[bool, dict, list]:
    bad = []
    details = {}

    for powers in (False, True):
        want = brute_force_classes(6, powers)
        got = {c.letters for c in enumerate_classes(6, 2, include_powers=powers)}
        details[f"classes_le6{'_with_powers' if powers else ''}"] = len(got)
        if got != want:
            bad.append({"part": "enumeration", "include_powers": powers, "missing": len(want - got), "extra": len(got - want)})

    rng = random.Random(seed)
    classes = _classes(8, include_powers=True)
    polys = [fricke_char(c) for c in classes]
    for i in range(reps):
        rep = random_integer_representation(rng, 2)
        x, y, z = rep.fricke_coordinates()
        for c, poly in zip(classes, polys):
            if poly.evaluate(x, y, z) != rep.trace(c.letters):
                bad.append({"part": "evaluation", "rep": i, "word": str(c)})
    details["evaluations"] = reps * len(classes)

    pool = _classes(8)
    buckets = [b for b in _buckets(8).values() if len(b) > 1]
    contradictions = 0
    equal_pairs = 0
    for i in range(pairs):
        if i % 2 == 0:
            u, v = rng.sample(rng.choice(buckets), 2)
        else:
            u, v = rng.sample(pool, 2)
        exact = chars_equal_exact(u, v)
        equal_pairs += exact
        prob = chars_equal_probabilistic(u, v, 2, trials=20, seed=rng.getrandbits(64))
        if bool(prob) != exact:
            contradictions += 1
            bad.append({"part": "probabilistic", "u": str(u), "v": str(v), "exact": exact})
    details["pairs"] = pairs
    details["equal_pairs"] = equal_pairs
    return not bad, details, bad


# ----------------------------------------------------------------
SUITES: dict[str, tuple[int, Callable, float | None]] = {
    "pair": (1, horowitz_pair, 1.0),
    "reversal": (2, reversal, 300.0),
    "horowitz": (3, horowitz, None),
    "leading": (4, leading_coefficient, None),
    "normalize": (5, normalization, None),
    "selfint": (6, self_intersection_pins, None),
    "collar": (7, collar, None),
    "pinch": (8, pinching, None),
    "gr": (9, gr, None),
    "oracles": (10, oracles, None),
}

TOTAL_BUDGET_S = 15 * 60


def run_suite(name: str) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    number, fn, budget = SUITES[name]
    t0 = time.perf_counter()
    ok, details, violations = fn()
    elapsed = time.perf_counter() - t0
    if budget is not None and elapsed >= budget:
        ok = False
        violations = [*violations, {"reason": f"took {elapsed:.2f}s, budget {budget}s"}]
    return SuiteResult(number, name, ok, elapsed, details, violations)


def run_all(names=None) -> list[SuiteResult]:
    return [run_suite(n) for n in (names or SUITES)]
