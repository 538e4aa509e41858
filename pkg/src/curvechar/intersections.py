"""Self-intersection numbers on the once-punctured torus by counting crossing axes.

The closed geodesic of a primitive cyclic word ``w`` lifts to the axes
``g . axis(w)``.  Self-intersection points correspond to double cosets
``<w> g <w>`` (identified with their inverses) whose translated axis crosses
``axis(w)``.

Candidates come from the Cayley tree: two lifts can only cross when their tree
lines share a vertex, so every relevant double coset has a representative
``g = s_i s_j^-1`` with ``s_k`` the length-k prefix of ``w``.  Two vertex pairs
name the same double coset exactly when they lie on the same common segment
of the two tree lines, which gives an exact deduplication key.

Crossing is decided by the sign of a cross ratio of the four endpoints:
exactly in a real quadratic field when the structure has rational generator
matrices, otherwise with outward-rounded interval arithmetic at increasing
precision.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from mpmath import iv

from .geometry import FrickeTriple, is_peripheral, punctured_torus_structure
from .matrices import Mat2
from .quadratic import QuadraticIrrational, rational_sqrt
from .traces import INF, ParabolicError
from .words import CurveClass, CyclicWord, Letters, WordError

MAX_PREC = 4096
START_PREC = 64


class SharedEndpointError(ValueError):
    """Two axes share an endpoint, so crossing is undefined."""


class UnstableCountError(RuntimeError):
    pass


class _Undecided(Exception):
    pass


@contextmanager
def _ivprec(prec: int):
    saved = iv.prec
    iv.prec = prec
    try:
        yield
    finally:
        iv.prec = saved


def _sign(v) -> int:
    """Certified sign, or raise _Undecided for an interval straddling 0."""
    if isinstance(v, QuadraticIrrational):
        return v.sign()
    if isinstance(v, (int, Fraction)):
        return (v > 0) - (v < 0)
    # mpmath interval
    if v.a > 0:
        return 1
    if v.b < 0:
        return -1
    raise _Undecided


def _det(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _mul_vec(m: tuple, v: tuple) -> tuple:
    return (m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1])


def _mul(m: tuple, n: tuple) -> tuple:
    return (
        m[0] * n[0] + m[1] * n[2],
        m[0] * n[1] + m[1] * n[3],
        m[2] * n[0] + m[3] * n[2],
        m[2] * n[1] + m[3] * n[3],
    )


def _adj(m: tuple) -> tuple:
    return (m[3], -m[1], -m[2], m[0])


@dataclass(frozen=True)
class DiscreteStructure:
    """Generator matrices for a point of the cusped Markov slice.

    a -> [[x, -1], [1, 0]] and b -> [[p, 1], [p(y - p) - 1, y - p]] with
    p^2 + (x - y) p + 2 = z.  ``exact`` holds Fraction matrices when p is
    rational; otherwise matrices are rebuilt as intervals on demand.
    """

    triple: FrickeTriple
    exact: tuple | None

    @classmethod
    def from_triple(cls, triple: FrickeTriple) -> "DiscreteStructure":
        exact = None
        if triple.is_rational():
            x, y, z = triple.x, triple.y, triple.z
            root = rational_sqrt((x - y) ** 2 + 4 * (z - 2))
            if root is not None:
                p = ((y - x) + root) / 2
                exact = _generator_pair(x, y, p)
        return cls(triple, exact)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def generators(self, prec: int | None = None) -> tuple[tuple, tuple]:
        if self.exact is not None and prec is None:
            return self.exact
        return _interval_generators(self.triple, prec or START_PREC)

    def matrix(self, letters, prec: int | None = None) -> Mat2:
        a, b = self.generators(prec)
        m = _word_matrix(letters, a, b)
        return Mat2(*m)


def _generator_pair(x, y, p):
    a = (x, -1, 1, 0 * x)
    b = (p, 1 + 0 * p, p * (y - p) - 1, y - p)
    return a, b


@lru_cache(maxsize=64)
def _interval_generators(triple: FrickeTriple, prec: int):
    with _ivprec(prec):
        def ivq(q):
            return iv.mpf(q.numerator) / q.denominator
        x, y = ivq(triple.x), ivq(triple.y)
        z = triple.z
        if isinstance(z, QuadraticIrrational):
            zi = ivq(z.a) + ivq(z.b) * iv.sqrt(ivq(z.d))
        else:
            zi = ivq(z)
        p = ((y - x) + iv.sqrt((x - y) ** 2 + 4 * (zi - 2))) / 2
        return _generator_pair(x, y, p)


def _word_matrix(letters, a, b) -> tuple:
    gens = (a, _adj(a), b, _adj(b))
    one = a[0] * 0 + 1
    zero = a[0] * 0
    m = (one, zero, zero, one)
    for c in letters:
        m = _mul(m, gens[c])
    return m


DEFAULT_STRUCTURE = DiscreteStructure.from_triple(punctured_torus_structure(3, 3))


def structure(x, y, root: str = "larger") -> DiscreteStructure:
    return DiscreteStructure.from_triple(punctured_torus_structure(x, y, root))


# --------------------------------------------------------------------------
# Axes


@dataclass(frozen=True)
class Axis:
    """Oriented geodesic given by homogeneous endpoint vectors."""

    attracting: tuple
    repelling: tuple
    source: Letters | None = None

    @classmethod
    def from_points(cls, p, q) -> "Axis":
        h = lambda z: (1, 0) if z is INF else (Fraction(z) if isinstance(z, int) else z, 1)  # noqa: E731
        return cls(h(p), h(q))

    def endpoints(self) -> tuple:
        return tuple(INF if v[1] == 0 else v[0] / v[1] for v in (self.attracting, self.repelling))

    def same_geodesic(self, other: "Axis") -> bool:
        return (
            _sign(_det(self.attracting, other.attracting)) == 0 and _sign(_det(self.repelling, other.repelling)) == 0
        ) or (_sign(_det(self.attracting, other.repelling)) == 0 and _sign(_det(self.repelling, other.attracting)) == 0)


def _fixed_vectors(m: tuple):
    """(attracting, repelling) eigenvectors of a hyperbolic matrix tuple."""
    p, q, r, s = m
    t = p + s
    disc = t * t - 4
    if isinstance(t, (int, Fraction)):
        if disc == 0:
            raise ParabolicError("parabolic element")
        if disc < 0:
            raise ParabolicError("elliptic element")
        root = rational_sqrt(disc)
        if root is None:
            root = QuadraticIrrational(0, 1, disc)
        sgn = 1 if t > 0 else -1
    else:
        sd = _sign(disc)  # may raise _Undecided near |t| = 2
        if sd <= 0:
            raise ParabolicError("element is not hyperbolic")
        root = iv.sqrt(disc)
        sgn = _sign(t)
    ev_att = (t + sgn * root) / 2
    ev_rep = (t - sgn * root) / 2

    def vec(ev):
        v = (q, ev - p)
        try:
            if _sign(v[0]) == 0 and _sign(v[1]) == 0:
                v = (ev - s, r)
        except _Undecided:
            pass
        return v

    return vec(ev_att), vec(ev_rep)


def axis(s: DiscreteStructure, w: CyclicWord, prec: int | None = None) -> Axis:
    """Axis of the hyperbolic element w; endpoints are its fixed points."""
    letters = w.letters
    prec_now = prec
    while True:
        try:
            with _ivprec(prec_now or START_PREC):
                m = _word_matrix(letters, *s.generators(prec_now))
                att, rep = _fixed_vectors(m)
                return Axis(att, rep, letters)
        except _Undecided:
            prec_now = 2 * (prec_now or START_PREC)
            if prec_now > MAX_PREC:
                raise ParabolicError("trace indistinguishable from +-2") from None


def _interleave(p1, p2, q1, q2) -> int:
    """-1 if {p1, p2} and {q1, q2} interleave on the circle, +1 if not, 0 if an endpoint is shared."""
    return _sign(_det(p1, q1) * _det(p2, q2) * _det(p1, q2) * _det(p2, q1))


def axes_cross(a1: Axis, a2: Axis) -> bool:
    """True iff the endpoint pairs strictly interleave on the boundary circle."""
    s = _interleave(a1.attracting, a1.repelling, a2.attracting, a2.repelling)
    if s == 0:
        raise SharedEndpointError("axes share an endpoint")
    return s < 0


# --------------------------------------------------------------------------
# Double cosets of lines meeting in the Cayley tree


def _overlap_pairs(u: Letters, v: Letters, i: int, j: int) -> list[tuple[int, int]]:
    """All vertex pairs (mod lengths) on the common tree segment through (i, j)."""
    n, m = len(u), len(v)
    limit = n + m + 2
    pairs = [(i % n, j % m)]
    fu, bu = u[i % n], u[(i - 1) % n] ^ 1
    fv, bv = v[j % m], v[(j - 1) % m] ^ 1
    if fu == fv or bu == bv:
        a, b, k = i, j, 0
        while u[a % n] == v[b % m]:
            a, b, k = a + 1, b + 1, k + 1
            pairs.append((a % n, b % m))
            if k > limit:
                raise WordError("tree lines coincide; word is a proper power")
        a, b, k = i, j, 0
        while u[(a - 1) % n] == v[(b - 1) % m]:
            a, b, k = a - 1, b - 1, k + 1
            pairs.append((a % n, b % m))
            if k > limit:
                raise WordError("tree lines coincide; word is a proper power")
    elif fu == bv or bu == fv:
        a, b, k = i, j, 0
        while u[a % n] == v[(b - 1) % m] ^ 1:
            a, b, k = a + 1, b - 1, k + 1
            pairs.append((a % n, b % m))
            if k > limit:
                raise WordError("tree lines coincide with opposite orientation")
        a, b, k = i, j, 0
        while u[(a - 1) % n] ^ 1 == v[b % m]:
            a, b, k = a - 1, b + 1, k + 1
            pairs.append((a % n, b % m))
            if k > limit:
                raise WordError("tree lines coincide with opposite orientation")
    return pairs


def _rep_length(u: Letters, v: Letters, i: int, j: int) -> int:
    """Reduced length of s_i(u) s_j(v)^-1."""
    c = 0
    while c < i and c < j and u[i - 1 - c] == v[j - 1 - c]:
        c += 1
    return i + j - 2 * c


@dataclass(frozen=True)
class CosetCandidate:
    key: tuple[int, int]
    pair: tuple[int, int]
    length: int


def coset_candidates(u: Letters, v: Letters, same: bool) -> list[CosetCandidate]:
    """One candidate per double coset <u> g <v> whose tree lines share a vertex.

    With ``same`` the cosets of g and g^-1 are identified and g in <u> is skipped.
    """
    best: dict[tuple[int, int], CosetCandidate] = {}
    for i in range(len(u)):
        for j in range(len(v)):
            if same and i == j:
                continue
            pairs = _overlap_pairs(u, v, i, j)
            if same:
                key = min(min(p, (p[1], p[0])) for p in pairs)
            else:
                key = min(pairs)
            length = _rep_length(u, v, i, j)
            cur = best.get(key)
            if cur is None or length < cur.length:
                best[key] = CosetCandidate(key, (i, j), length)
    return sorted(best.values(), key=lambda c: c.key)


def _crossings(s: DiscreteStructure, u: Letters, v: Letters, cands: list[CosetCandidate], prec: int | None):
    a, b = s.generators(prec)
    mu = _word_matrix(u, a, b)
    mv = mu if v == u else _word_matrix(v, a, b)
    p1, p2 = _fixed_vectors(mu)
    q1, q2 = (p1, p2) if v == u else _fixed_vectors(mv)
    gens = (a, _adj(a), b, _adj(b))
    one = a[0] * 0 + 1
    zero = a[0] * 0
    prefix_u = [(one, zero, zero, one)]
    for c in u[:-1]:
        prefix_u.append(_mul(prefix_u[-1], gens[c]))
    prefix_v = prefix_u
    if v != u:
        prefix_v = [(one, zero, zero, one)]
        for c in v[:-1]:
            prefix_v.append(_mul(prefix_v[-1], gens[c]))
    back = [(_mul_vec(_adj(m), q1), _mul_vec(_adj(m), q2)) for m in prefix_v]
    out = []
    for cand in cands:
        i, j = cand.pair
        g1 = _mul_vec(prefix_u[i], back[j][0])
        g2 = _mul_vec(prefix_u[i], back[j][1])
        sg = _interleave(p1, p2, g1, g2)
        if sg == 0:
            raise SharedEndpointError(f"axes share an endpoint at coset {cand.key}")
        out.append(sg < 0)
    return out


def crossing_flags(s: DiscreteStructure, u: Letters, v: Letters, cands: list[CosetCandidate]) -> list[bool]:
    """Certified crossing decision per candidate, escalating interval precision as needed."""
    prec = None if s.is_exact and _same_field(u, v) else START_PREC
    while True:
        try:
            with _ivprec(prec or START_PREC):
                return _crossings(s, u, v, cands, prec)
        except _Undecided:
            prec = 2 * (prec or START_PREC)
            if prec > MAX_PREC:
                raise SharedEndpointError("crossing undecided at maximal precision") from None


def _same_field(u: Letters, v: Letters) -> bool:
    # exact comparisons need all four endpoints in one quadratic field
    return u == v


@dataclass(frozen=True)
class CrossingCount:
    count: int
    bound: int
    stable: bool


def _count_at(cands, flags, bound: int) -> int:
    return sum(1 for c, f in zip(cands, flags) if f and c.length <= bound)


def _stable_count(n_total: int, cands, flags, start: int, cap: int) -> CrossingCount:
    # candidate representatives never exceed n_total - 2 letters
    bound = start
    while True:
        here, nxt = _count_at(cands, flags, bound), _count_at(cands, flags, bound + 2)
        if here == nxt and bound >= n_total - 2:
            return CrossingCount(nxt, bound + 2, True)
        if bound + 2 > cap:
            return CrossingCount(nxt, bound + 2, False)
        bound += 2


def _class_letters(c) -> Letters:
    if isinstance(c, CurveClass):
        if c.is_power:
            raise WordError(f"{c} is a proper power")
        return c.letters
    if isinstance(c, CyclicWord):
        return c.letters
    raise TypeError("expected a CurveClass or CyclicWord")


def self_intersection(c: CurveClass, s: DiscreteStructure | None = None, bound: int | None = None) -> CrossingCount:
    """Self-intersection number with a stability certificate.

    ``bound`` is the starting representative length (default len + 6);
    it grows by 2 until two consecutive counts agree and every candidate is
    covered, capped at len + 14.  An uncertified result raises
    :class:`UnstableCountError`.
    """
    s = s or DEFAULT_STRUCTURE
    u = _class_letters(c)
    if isinstance(c, CurveClass) and is_peripheral(c):
        raise ParabolicError("peripheral class has no closed geodesic")
    n = len(u)
    start = bound if bound is not None else n + 6
    if start < 4:
        start = 4
    cands = coset_candidates(u, u, same=True)
    flags = crossing_flags(s, u, u, cands)
    result = _stable_count(2 * n, cands, flags, start, n + 14)
    if not result.stable:
        raise UnstableCountError(f"count for {c} not stable up to bound {result.bound}")
    return result


def is_simple(c: CurveClass, s: DiscreteStructure | None = None) -> bool:
    if isinstance(c, CurveClass) and is_peripheral(c):
        return True
    return self_intersection(c, s).count == 0


def intersection_number(c1: CurveClass, c2: CurveClass, s: DiscreteStructure | None = None) -> int:
    """Geometric intersection number of two distinct classes by axis crossings."""
    s = s or DEFAULT_STRUCTURE
    u, v = _class_letters(c1), _class_letters(c2)
    if u == v:
        raise ValueError("use self_intersection for a single class")
    for c in (c1, c2):
        if isinstance(c, CurveClass) and is_peripheral(c):
            return 0
    cands = coset_candidates(u, v, same=False)
    flags = crossing_flags(s, u, v, cands)
    return sum(flags)


def exponent_sums(c: CurveClass) -> tuple[int, int]:
    sa = sum(1 if x == 0 else -1 for x in c.letters if x >> 1 == 0)
    sb = sum(1 if x == 2 else -1 for x in c.letters if x >> 1 == 1)
    return sa, sb


def slope(c: CurveClass, s: DiscreteStructure | None = None) -> tuple[int, int]:
    """Homology slope (p, q) of a simple class, normalized with p > 0 or p = 0 < q."""
    if c.rank != 2:
        raise ValueError("slopes are defined on the rank-2 punctured torus")
    p, q = exponent_sums(c)
    if p == 0 and q == 0:
        raise ValueError(f"{c} has zero abelianization (peripheral)")
    if not is_simple(c, s):
        raise ValueError(f"{c} is not simple")
    g = gcd(p, q)
    p, q = p // g, q // g
    if p < 0 or (p == 0 and q < 0):
        p, q = -p, -q
    return p, q


def slope_intersection(s1: tuple[int, int], s2: tuple[int, int]) -> int:
    return abs(s1[0] * s2[1] - s1[1] * s2[0])
