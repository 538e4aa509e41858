import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvechar.matrices import (
    Mat2,
    Representation,
    ScalarKindError,
    random_integer_representation,
    random_unimodular,
)
from curvechar.poly import TPoly
from curvechar.traces import (
    INF,
    DegenerateError,
    Distinct,
    HorowitzPoint,
    ParabolicError,
    ProbablyEqual,
    RankError,
    chars_equal_exact,
    chars_equal_probabilistic,
    cross_ratio,
    fixed_points,
    fricke_char,
    horowitz_rep,
    leading_coeff_formula,
    normalize_to_horowitz,
    t_squared_formula,
    trace_poly_in_T,
)
from curvechar.words import Word, cyclic_reduce, enumerate_classes, exponent_vectors, parse_class, parse_word, reverse

words2 = st.lists(st.integers(0, 3), max_size=12).map(Word.reduced)


def random_rational_sl2(rng):
    """Product of rational shears and a diagonal; an oracle independent of the integer generator."""
    m = Mat2(Fraction(1), Fraction(0), Fraction(0), Fraction(1))
    for _ in range(rng.randint(2, 5)):
        q = Fraction(rng.randint(-7, 7), rng.randint(1, 6))
        if rng.random() < 0.5:
            f = Mat2(Fraction(1), q, Fraction(0), Fraction(1))
        else:
            f = Mat2(Fraction(1), Fraction(0), q, Fraction(1))
        m = m @ f
    d = Fraction(rng.randint(1, 5), rng.randint(1, 5))
    return m @ Mat2(d, Fraction(0), Fraction(0), 1 / d)


def rational_rep(rng):
    return Representation((random_rational_sl2(rng), random_rational_sl2(rng)))


# --- fricke_char ---------------------------------------------------------


def test_char_examples():
    assert str(fricke_char(parse_word("a"))) == "x"
    assert str(fricke_char(parse_word("aB"))) == "x*y - z"
    assert str(fricke_char(parse_word("abAB"))) == "-x*y*z + x^2 + y^2 + z^2 - 2"


def test_char_of_identity_is_two():
    assert fricke_char(Word(())) == 2


def test_char_rank_enforced():
    with pytest.raises(RankError):
        fricke_char(parse_word("abc", rank=3))


def test_evaluation_oracle_rational_reps():
    # [DERIVED] exact traces of random SL2(Q) representations
    rng = random.Random(7)
    classes = list(enumerate_classes(10, include_powers=True))
    sample = rng.sample(classes, 150)
    extra = [Word.reduced([rng.randrange(4) for _ in range(rng.randint(1, 10))]) for _ in range(50)]
    reps = [rational_rep(rng) for _ in range(100)]
    for w in [c.word() for c in sample] + extra:
        poly = fricke_char(w)
        for rep in reps:
            assert poly.evaluate(*rep.fricke_coordinates()) == rep.trace(w), str(w)


@given(words2)
@settings(max_examples=300)
def test_reversal_identity(w):
    assert fricke_char(w) == fricke_char(reverse(w))


@given(words2, words2)
@settings(max_examples=200)
def test_char_conjugation_invariant(w, g):
    conj = Word.reduced(g.letters + w.letters + tuple(x ^ 1 for x in reversed(g.letters)))
    assert fricke_char(conj) == fricke_char(w)


def test_chars_equal_exact_examples():
    assert chars_equal_exact(parse_word("abaaB"), parse_word("aabaB"))
    assert not chars_equal_exact(parse_word("a"), parse_word("b"))


# --- probabilistic -------------------------------------------------------


def test_probabilistic_distinct_has_witness():
    v = chars_equal_probabilistic(parse_word("a"), parse_word("b"), 2, trials=1, seed=3)
    assert isinstance(v, Distinct) and not v
    assert v.witness.trace(parse_word("a")) == v.trace_u != v.trace_v


def test_probabilistic_horowitz_pair():
    v = chars_equal_probabilistic(parse_word("abaaB"), parse_word("aabaB"), 2, trials=50, seed=11)
    assert isinstance(v, ProbablyEqual) and v.trials == 50


@pytest.mark.parametrize("rank", [2, 3, 4])
def test_probabilistic_conjugate_rank_n(rank):
    w = parse_word("abcA"[: rank + 1] if rank > 2 else "abA", rank)
    g = parse_word("ba", rank)
    conj = Word.reduced(g.letters + w.letters + tuple(x ^ 1 for x in reversed(g.letters)), rank)
    assert chars_equal_probabilistic(w, conj, rank, trials=10, seed=1)


def test_probabilistic_is_replayable():
    u, v = parse_word("ab"), parse_word("aB")
    r1 = chars_equal_probabilistic(u, v, 2, seed=99)
    r2 = chars_equal_probabilistic(u, v, 2, seed=99)
    assert r1 == r2


@given(words2, words2, st.integers(0, 2**32))
@settings(max_examples=150)
def test_probabilistic_never_contradicts_exact(u, v, seed):
    exact = chars_equal_exact(u, v)
    prob = chars_equal_probabilistic(u, v, 2, trials=8, seed=seed)
    if exact:
        assert prob
    elif prob:
        pytest.fail(f"polynomials differ but {u} and {v} agreed on 8 random points")


def test_random_unimodular_is_integral_and_unimodular():
    rng = random.Random(0)
    for _ in range(200):
        m = random_unimodular(rng)
        assert m.det() == 1
        assert all(isinstance(e, int) for e in (m.p, m.q, m.r, m.s))


def test_mixed_kinds_rejected():
    with pytest.raises(ScalarKindError):
        Mat2(Fraction(1), Fraction(0), Fraction(0), Fraction(1)) @ Mat2(1j, 0j, 0j, -1j)


# --- triangular family ---------------------------------------------------


def test_horowitz_rep_examples():
    rep = horowitz_rep(HorowitzPoint(2, 3, 1))
    assert rep.trace(parse_word("ab")) == Fraction(43, 6)
    assert rep.trace(parse_word("a")) == Fraction(5, 2)
    flat = horowitz_rep(HorowitzPoint(2, 3, 0))
    assert flat.trace(parse_word("ab")) == 6 + Fraction(1, 6)
    assert flat.image(parse_word("ab")) == flat.image(parse_word("ba"))


def test_horowitz_point_degenerate():
    with pytest.raises(DegenerateError):
        HorowitzPoint(1, 2, 1)


def test_trace_poly_examples():
    lam, mu = Fraction(3, 2), Fraction(5, 3)
    p = trace_poly_in_T(parse_word("ab"), lam, mu)
    assert p.coeff(2) == 1 and p.degree() == 2
    assert p.coeff(0) == lam * mu + 1 / (lam * mu)
    assert trace_poly_in_T(parse_word("a"), lam, mu) == TPoly((lam + 1 / lam,))
    q = trace_poly_in_T(parse_word("abaaB"), lam, mu)
    assert q.degree() == 4
    assert q.coeff(4) == leading_coeff_formula((1, 2), (1, -1), lam, mu)


def test_leading_coeff_examples():
    assert leading_coeff_formula((1,), (1,), 2, 3) == 1
    assert leading_coeff_formula((2,), (1,), 2, 3) == Fraction(5, 2)
    # a negative exponent flips the sign of its sinh ratio
    assert leading_coeff_formula((1, 2), (1, -1), 2, 3) == -Fraction(5, 2)


def _sinh_oracle(base, k):
    # (base^k - base^-k) / (base - base^-1) expanded as a geometric sum
    s = sum((base ** (abs(k) - 1 - 2 * j) for j in range(abs(k))), Fraction(0))
    return s if k > 0 else -s


exps = st.integers(-3, 3).filter(bool)


@given(st.lists(st.tuples(exps, exps), min_size=1, max_size=3))
@settings(max_examples=100, deadline=None)
def test_leading_coefficient_matches_trace_poly(pairs_):
    lam, mu = Fraction(3, 2), Fraction(5, 3)
    m, n = [p[0] for p in pairs_], [p[1] for p in pairs_]
    w = Word.reduced([e for mi, ni in pairs_ for e in ([0] * mi if mi > 0 else [1] * -mi) + ([2] * ni if ni > 0 else [3] * -ni)])
    poly = trace_poly_in_T(w, lam, mu)
    want = 1
    for mi, ni in pairs_:
        want *= _sinh_oracle(lam, mi) * _sinh_oracle(mu, ni)
    assert leading_coeff_formula(m, n, lam, mu) == want
    assert poly.degree() == 2 * len(pairs_)
    assert poly.coeff(2 * len(pairs_)) == want


def test_exponent_vectors_feed_leading_formula():
    w = parse_word("abaaB")
    m, n = exponent_vectors(cyclic_reduce(w))
    assert trace_poly_in_T(w, 2, 3).coeff(4) == leading_coeff_formula(m, n, 2, 3)


# --- fixed points and normalization --------------------------------------


def test_fixed_points_triangular():
    lam, T = Fraction(2), Fraction(1)
    pts = fixed_points(Mat2(lam, T, Fraction(0), 1 / lam))
    assert set(map(str, pts)) == {str(INF), str(T / (1 / lam - lam))}
    mu = Fraction(3)
    pts = fixed_points(Mat2(mu, Fraction(0), T, 1 / mu))
    assert set(pts) == {0, (mu - 1 / mu) / T}


def test_fixed_points_parabolic():
    with pytest.raises(ParabolicError) as ei:
        fixed_points(Mat2(1, 1, 0, 1))
    assert ei.value.fixed_point is INF


def test_fixed_points_are_fixed():
    rng = random.Random(5)
    for _ in range(50):
        m = random_unimodular(rng)
        if abs(m.trace()) <= 2:
            continue
        for p in fixed_points(m):
            if p is INF:
                assert m.r == 0
            else:
                # m.p * p + m.q == p * (m.r * p + m.s), checked in the quadratic field
                assert m.p * p + m.q == p * (m.r * p + m.s)


def test_cross_ratio_with_infinity():
    # (p1 - p4)(p3 - p2) / ((p1 - p2)(p3 - p4)) with the infinite factors cancelling
    assert cross_ratio(INF, 0, 1, 2) == -1
    assert cross_ratio(0, 1, INF, 2) == 2
    assert cross_ratio(Fraction(1, 2), 3, 5, 7) == Fraction((Fraction(1, 2) - 7) * (5 - 3), (Fraction(1, 2) - 3) * (5 - 7))
    with pytest.raises(DegenerateError):
        cross_ratio(1, 1, 2, 2)


def test_normalize_self():
    pt = HorowitzPoint(Fraction(2), Fraction(3), Fraction(1))
    n = normalize_to_horowitz(horowitz_rep(pt))
    assert n.point == pt
    assert n.kind == "rational"
    xa, ya, xb, yb = n.fixed_points
    assert xa is INF and xb == 0
    lam, mu = pt.lam, pt.mu
    assert (1 / lam - lam) * (mu - 1 / mu) * cross_ratio(xa, ya, xb, yb) == 1


def test_t_squared_formula_finite_points():
    # conjugating the normal form by z -> z + 1 moves every fixed point off infinity
    pt = HorowitzPoint(Fraction(2), Fraction(3), Fraction(2))
    n = normalize_to_horowitz(horowitz_rep(pt).conjugate(Mat2(Fraction(1), Fraction(1), Fraction(1), Fraction(2))))
    assert INF not in n.fixed_points
    assert t_squared_formula(n.point.lam, n.point.mu, *n.fixed_points) == n.point.T ** 2 == 4


def test_normalize_exact_round_trip():
    rng = random.Random(2)
    for _ in range(20):
        pt = HorowitzPoint(Fraction(rng.randint(2, 6)), Fraction(rng.randint(2, 6)), Fraction(rng.randint(1, 9)))
        g = random_unimodular(rng)
        rep = horowitz_rep(pt).conjugate(g)
        n = normalize_to_horowitz(rep)
        assert n.kind == "rational"
        assert n.apply(rep).mats == horowitz_rep(n.point).mats


def test_normalize_complex_preserves_character():
    rng = random.Random(3)
    probes = [c.word() for c in rng.sample(list(enumerate_classes(8)), 20)]
    for _ in range(10):
        rep = random_integer_representation(rng, 2)
        try:
            n = normalize_to_horowitz(rep)
        except (ParabolicError, DegenerateError):
            continue
        back = horowitz_rep(n.point)
        for w in probes:
            want = rep.trace(w)
            assert abs(complex(back.trace(w)) - want) <= 1e-9 * max(1, abs(want)), str(w)


def test_normalize_parabolic_rejected():
    rep = Representation((Mat2(1, 1, 0, 1), Mat2(2, 1, 1, 1)))
    with pytest.raises(ParabolicError):
        normalize_to_horowitz(rep)


def test_normalize_shared_fixed_point_rejected():
    rep = Representation((Mat2(Fraction(2), Fraction(1), Fraction(0), Fraction(1, 2)), Mat2(Fraction(3), Fraction(0), Fraction(0), Fraction(1, 3))))
    with pytest.raises(DegenerateError):
        normalize_to_horowitz(rep)
