"""Characters of free-group words.

Rank-2 characters are computed exactly as integer polynomials in the Fricke
coordinates (x, y, z) = (tr a, tr b, tr ab).  Higher rank uses randomized
identity testing with integer unimodular matrices.  The second half of the
module handles the triangular two-parameter family

    rho(a) = [[lam, T], [0, 1/lam]],   rho(b) = [[mu, 0], [T, 1/mu]]

and conjugation of a general rank-2 representation into that form.
"""

from __future__ import annotations

import cmath
import random
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .matrices import COMPLEX, RATIONAL, TPOLY, Mat2, Representation, random_integer_representation
from .poly import FrickePolynomial, TPoly
from .quadratic import QuadraticIrrational, rational_sqrt
from .words import (
    CurveClass,
    CyclicWord,
    Letters,
    Word,
    canonical_letters,
    cyclic_reduce_letters,
    from_exponents,
    invert_letters,
    syllables,
)

RNG_NAME = "python-random-mt19937/v1"

_TWO = FrickePolynomial.constant(2)
_VARS = (FrickePolynomial.var(0), FrickePolynomial.var(1))
_Z = FrickePolynomial.var(2)


class RankError(ValueError):
    pass


class ParabolicError(ValueError):
    """Matrix has a single fixed point (trace +-2)."""

    def __init__(self, message: str, fixed_point=None):
        super().__init__(message)
        self.fixed_point = fixed_point


class DegenerateError(ValueError):
    pass


def _letters_of(w) -> tuple[Letters, int]:
    if isinstance(w, CurveClass):
        return w.letters, w.rank
    if isinstance(w, (Word, CyclicWord)):
        return w.letters, w.rank
    raise TypeError(f"expected a word or curve class, got {type(w).__name__}")


# --------------------------------------------------------------------------
# Fricke polynomials

_memo: dict[Letters, FrickePolynomial] = {}
_memo_lock = threading.Lock()


def _count_inverse(letters: Letters) -> int:
    return sum(c & 1 for c in letters)


def _trace(letters: Letters) -> FrickePolynomial:
    letters = cyclic_reduce_letters(letters)
    if not letters:
        return _TWO
    key = canonical_letters(letters)
    hit = _memo.get(key)
    if hit is not None:
        return hit
    result = _reduce_trace(key)
    with _memo_lock:
        _memo.setdefault(key, result)
    return result


def _reduce_trace(w: Letters) -> FrickePolynomial:
    inv = invert_letters(w)
    if _count_inverse(inv) < _count_inverse(w):
        w = inv
    n = len(w)
    i = next((k for k in range(n) if w[k] & 1), None)
    if i is not None:
        # w ~ U L^-1 and L^-1 = tr(L) I - L
        r = w[i + 1:] + w[: i + 1]
        u, lt = r[:-1], r[-1] ^ 1
        return _trace(u).times_var(lt >> 1) - _trace(u + (lt,))
    if n == 1:
        return _VARS[w[0] >> 1]
    i = next((k for k in range(n) if w[k] == w[(k + 1) % n]), None)
    if i is not None:
        # w ~ L L V and L^2 = tr(L) L - I
        r = w[i:] + w[:i]
        return _trace(r[1:]).times_var(r[0] >> 1) - _trace(r[2:])
    # positive and alternating: (ab)^k
    if n == 2:
        return _Z
    return _trace(w[2:]).times_var(2) - _trace(w[4:])


def fricke_char(w: Union[Word, CyclicWord, CurveClass]) -> FrickePolynomial:
    """Character of a rank-2 word as a polynomial in (tr a, tr b, tr ab).

    Uses tr(UV) = tr(U)tr(V) - tr(UV^-1) with V a single letter, memoized on
    canonical cyclic words.

    >>> from curvechar.words import parse_word
    >>> str(fricke_char(parse_word("aB")))
    'x*y - z'
    """
    letters, rank = _letters_of(w)
    if rank != 2:
        raise RankError("Fricke polynomials are defined for rank 2")
    return _trace(letters)


def clear_trace_cache() -> None:
    with _memo_lock:
        _memo.clear()


def chars_equal_exact(u, v) -> bool:
    return fricke_char(u) == fricke_char(v)


@dataclass(frozen=True)
class Distinct:
    witness: Representation
    trace_u: int
    trace_v: int
    trial: int

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class ProbablyEqual:
    trials: int

    def __bool__(self) -> bool:
        return True


def chars_equal_probabilistic(u, v, rank: int, trials: int = 20, seed: int = 0) -> Distinct | ProbablyEqual:
    """Compare characters on random integer unimodular representations.

    A mismatch is a certificate of distinctness; agreement over all trials
    is only probable equality.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    lu, _ = _letters_of(u)
    lv, _ = _letters_of(v)
    rng = random.Random(seed)
    for t in range(trials):
        rep = random_integer_representation(rng, rank)
        tu, tv = rep.trace(lu), rep.trace(lv)
        if tu != tv:
            return Distinct(rep, tu, tv, t)
    return ProbablyEqual(trials)


# --------------------------------------------------------------------------
# Triangular family


def _is_degenerate(v) -> bool:
    return v == 0 or v == 1 or v == -1


@dataclass(frozen=True)
class HorowitzPoint:
    lam: object
    mu: object
    T: object

    def __post_init__(self):
        if _is_degenerate(self.lam) or _is_degenerate(self.mu):
            raise DegenerateError("lam and mu must avoid 0, 1 and -1")


def horowitz_rep(pt: HorowitzPoint) -> Representation:
    lam, mu, T = pt.lam, pt.mu, pt.T
    if isinstance(T, TPoly):
        c = lambda v: TPoly((v,))  # noqa: E731
        zero = TPoly()
        a = Mat2(c(lam), T, zero, c(1 / Fraction(lam)))
        b = Mat2(c(mu), zero, T, c(1 / Fraction(mu)))
    elif any(isinstance(v, (float, complex)) for v in (lam, mu, T)):
        lam, mu, T = complex(lam), complex(mu), complex(T)
        a = Mat2(lam, T, 0j, 1 / lam)
        b = Mat2(mu, 0j, T, 1 / mu)
    else:
        lam, mu, T = Fraction(lam), Fraction(mu), Fraction(T)
        a = Mat2(lam, T, Fraction(0), 1 / lam)
        b = Mat2(mu, Fraction(0), T, 1 / mu)
    return Representation((a, b))


def trace_poly_in_T(w: Word, lam, mu) -> TPoly:
    """tr rho(w) as a polynomial in T for fixed rational lam, mu."""
    if w.rank != 2:
        raise RankError("two-generator words only")
    rep = horowitz_rep(HorowitzPoint(Fraction(lam), Fraction(mu), TPoly.T()))
    return rep.trace(w)


def _sinh_ratio(base: Fraction, k: int) -> Fraction:
    return (base**k - base**-k) / (base - 1 / base)


def leading_coeff_formula(m: Sequence[int], n: Sequence[int], lam, mu) -> Fraction:
    """Product over syllable pairs of (lam^m - lam^-m)/(lam - 1/lam) * (mu^n - mu^-n)/(mu - 1/mu)."""
    lam, mu = Fraction(lam), Fraction(mu)
    if _is_degenerate(lam) or _is_degenerate(mu):
        raise DegenerateError("lam and mu must avoid 0, 1 and -1")
    if len(m) != len(n):
        raise ValueError("exponent vectors differ in length")
    if any(e == 0 for e in (*m, *n)):
        raise ValueError("exponents must be nonzero")
    out = Fraction(1)
    for mi, ni in zip(m, n):
        out *= _sinh_ratio(lam, mi) * _sinh_ratio(mu, ni)
    return out


def syllable_pair_count(w: Word) -> int:
    cw = cyclic_reduce_letters(w.letters)
    if not cw:
        return 0
    return syllables(CyclicWord(cw, w.rank)).p


# --------------------------------------------------------------------------
# Fixed points and normalization


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def to_homogeneous(z) -> tuple:
    return (1, 0) if z is INF else (z, 1)


def from_homogeneous(v: tuple):
    if v[1] == 0:
        return INF
    return v[0] / v[1]


def _det2(u: tuple, v: tuple):
    return u[0] * v[1] - u[1] * v[0]


def _is_zero(v) -> bool:
    if isinstance(v, complex):
        return abs(v) < 1e-300
    return v == 0


def _eigenvector(m: Mat2, ev) -> tuple:
    v = (m.q, ev - m.p)
    if _is_zero(v[0]) and _is_zero(v[1]):
        v = (ev - m.s, m.r)
    return v


def _sqrt_exact_or_none(d):
    """sqrt for rational input: Fraction if square, QuadraticIrrational if positive, None otherwise."""
    r = rational_sqrt(d)
    if r is not None:
        return r
    if d > 0:
        return QuadraticIrrational(0, 1, d)
    return None


def fixed_points(m: Mat2) -> tuple:
    """The two fixed points on the boundary of z -> (pz + q)/(rz + s).

    Infinity is returned as :data:`INF`.  Rational matrices give exact
    values (Fraction or QuadraticIrrational) when the fixed points are real.
    """
    p, q, r, s = m.p, m.q, m.r, m.s
    if m.kind == TPOLY:
        raise TypeError("fixed points need numeric entries")
    if _is_zero(q) and _is_zero(r) and p == s:
        raise ValueError("scalar matrix fixes every point")
    t = p + s
    disc = t * t - 4 * (p * s - q * r)
    if m.kind == RATIONAL:
        if disc == 0:
            fp = INF if r == 0 else Fraction(p - s) / (2 * r)
            raise ParabolicError("parabolic matrix", fp)
        root = _sqrt_exact_or_none(disc)
        if root is None:
            m = m.to_complex()
            p, q, r, s = m.p, m.q, m.r, m.s
            root = cmath.sqrt(complex(disc))
    else:
        if abs(disc) < 1e-24:
            raise ParabolicError("parabolic matrix", INF if _is_zero(r) else (p - s) / (2 * r))
        root = cmath.sqrt(disc)
    if _is_zero(r):
        if m.kind == RATIONAL:
            return INF, Fraction(q) / Fraction(s - p)
        return INF, q / (s - p)
    return ((p - s) + root) / (2 * r), ((p - s) - root) / (2 * r)


def cross_ratio(p1, p2, p3, p4):
    """(p1 - p4)(p3 - p2) / ((p1 - p2)(p3 - p4)), with INF allowed."""
    h = [to_homogeneous(z) for z in (p1, p2, p3, p4)]
    num = _det2(h[0], h[3]) * _det2(h[2], h[1])
    den = _det2(h[0], h[1]) * _det2(h[2], h[3])
    if _is_zero(den):
        raise DegenerateError("cross ratio of coincident points")
    return num / den


def t_squared_formula(lam, mu, xa, ya, xb, yb):
    """(1/lam - lam)(mu - 1/mu)(xa - yb)(xb - ya) / ((xa - ya)(xb - yb)) for finite points."""
    return (1 / lam - lam) * (mu - 1 / mu) * (xa - yb) * (xb - ya) / ((xa - ya) * (xb - yb))


@dataclass(frozen=True)
class Normalization:
    point: HorowitzPoint
    conjugator: Mat2
    fixed_points: tuple  # (x_a, y_a, x_b, y_b) as boundary values
    t_squared: object
    kind: str
    branch: str
    # conjugator = diag(scale, 1) @ base with base rational, when available
    base: Mat2 | None = None
    scale: complex | None = None

    def apply(self, rep: Representation) -> Representation:
        if self.base is None or rep.kind != RATIONAL:
            return rep.conjugate(self.conjugator)
        k = self.scale
        out = []
        for m in rep.conjugate(self.base).mats:
            out.append(Mat2(complex(m.p), k * float(m.q), float(m.r) / k, complex(m.s)))
        return Representation(tuple(out))


class _NeedComplex(Exception):
    pass


def _normalize(a: Mat2, b: Mat2, exact: bool, real: bool) -> Normalization:
    if exact:
        def sqrt(v):
            r = rational_sqrt(v)
            if r is None:
                raise _NeedComplex
            return r
    else:
        sqrt = cmath.sqrt
    x, y = a.trace(), b.trace()
    for t, name in ((x, "a"), (y, "b")):
        if (exact and t * t == 4) or (not exact and abs(t * t - 4) < 1e-12):
            raise ParabolicError(f"rho({name}) is parabolic")
    lam = (x + sqrt(x * x - 4)) / 2
    mu = (y + sqrt(y * y - 4)) / 2
    xa, ya = _eigenvector(a, lam), _eigenvector(a, 1 / lam)
    xb, yb = _eigenvector(b, 1 / mu), _eigenvector(b, mu)
    pts = (xa, ya, xb, yb)
    for i in range(4):
        for j in range(i + 1, 4):
            d = _det2(pts[i], pts[j])
            if (exact and d == 0) or (not exact and abs(d) < 1e-12 * (1 + abs(pts[i][0]) + abs(pts[i][1])) * (1 + abs(pts[j][0]) + abs(pts[j][1]))):
                raise DegenerateError("generators share a fixed point")
    ratio = _det2(xa, yb) * _det2(xb, ya) / (_det2(xa, ya) * _det2(xb, yb))
    t2 = (1 / lam - lam) * (mu - 1 / mu) * ratio
    if real:
        t2r = t2 if exact else t2.real
        if (not exact and abs(t2.imag) > 1e-9 * (1 + abs(t2))) or t2r < 0:
            raise DegenerateError("T^2 is not a nonnegative real; no real normal form")
    kind = RATIONAL if exact else COMPLEX
    if exact and rational_sqrt(t2) is None:
        # eigenvalues and fixed points stay exact; only T leaves the rationals
        kind = COMPLEX
        T = cmath.sqrt(float(t2))
        k = T * float(_det2(ya, xa) / ((1 / lam - lam) * _det2(ya, xb)))
        g = Mat2(k * float(xb[1]), -k * float(xb[0]), complex(xa[1]), complex(-xa[0]))
        base = Mat2(Fraction(xb[1]), Fraction(-xb[0]), Fraction(xa[1]), Fraction(-xa[0]))
        lam, mu = complex(lam), complex(mu)
    else:
        base = None
        T = sqrt(t2)
        k = T * _det2(ya, xa) / ((1 / lam - lam) * _det2(ya, xb))
        g = Mat2(k * xb[1], -k * xb[0], xa[1], -xa[0])
    if kind == RATIONAL:
        lam, mu, T = Fraction(lam), Fraction(mu), Fraction(T)
    return Normalization(
        point=HorowitzPoint(lam, mu, T),
        conjugator=g,
        fixed_points=tuple(from_homogeneous(v) for v in pts),
        t_squared=t2,
        kind=kind,
        branch="principal",
        base=base,
        scale=k if base is not None else None,
    )


def normalize_to_horowitz(rep: Representation, real: bool = False) -> Normalization:
    """Conjugate a rank-2 representation into the triangular family.

    Exact rational arithmetic is used whenever the eigenvalues and T are
    rational; otherwise the computation is redone in complex doubles.  T is
    the principal square root of T^2.  ``real=True`` refuses negative T^2.
    """
    if rep.rank != 2:
        raise RankError("normalization needs a rank-2 representation")
    a, b = rep.mats
    if rep.kind == RATIONAL:
        try:
            return _normalize(a, b, exact=True, real=real)
        except _NeedComplex:
            pass
        a, b = a.to_complex(), b.to_complex()
    elif rep.kind != COMPLEX:
        raise TypeError("normalization needs numeric matrices")
    return _normalize(a, b, exact=False, real=real)


__all__ = [
    "INF",
    "Distinct",
    "HorowitzPoint",
    "Normalization",
    "ParabolicError",
    "ProbablyEqual",
    "RankError",
    "chars_equal_exact",
    "chars_equal_probabilistic",
    "cross_ratio",
    "fixed_points",
    "fricke_char",
    "from_exponents",
    "horowitz_rep",
    "leading_coeff_formula",
    "normalize_to_horowitz",
    "t_squared_formula",
    "trace_poly_in_T",
]
