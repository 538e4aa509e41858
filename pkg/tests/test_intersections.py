import itertools
import random

import pytest

from curvechar.geometry import is_peripheral
from curvechar.intersections import (
    DEFAULT_STRUCTURE,
    Axis,
    SharedEndpointError,
    UnstableCountError,
    axes_cross,
    axis,
    coset_candidates,
    intersection_number,
    is_simple,
    self_intersection,
    slope,
    slope_intersection,
    structure,
)
from curvechar.traces import INF, ParabolicError
from curvechar.words import CyclicWord, canonical_class, enumerate_classes, invert, parse_class, parse_word, reverse_class

from geodesic_oracle import intersection_oracle, self_intersection_oracle

S34 = structure(3, 4)
S34_FLOAT = (3.0, 4.0, float(S34.triple.z))


# --- axes ----------------------------------------------------------------


def test_axes_cross_examples():
    assert axes_cross(Axis.from_points(0, 2), Axis.from_points(1, 3))
    assert not axes_cross(Axis.from_points(0, 1), Axis.from_points(2, 3))
    with pytest.raises(SharedEndpointError):
        axes_cross(Axis.from_points(0, 2), Axis.from_points(2, 5))
    assert axes_cross(Axis.from_points(INF, 0), Axis.from_points(-1, 1))


def test_axis_of_generator():
    ax = axis(DEFAULT_STRUCTURE, CyclicWord((0,)))
    # [DERIVED] fixed points of [[3, -1], [1, 0]] are (3 +- sqrt 5) / 2
    pts = sorted(float(p) for p in ax.endpoints())
    assert pts == pytest.approx([(3 - 5**0.5) / 2, (3 + 5**0.5) / 2])


def test_axis_of_inverse_is_same_geodesic():
    w = CyclicWord(parse_word("abaaB").letters)
    assert axis(DEFAULT_STRUCTURE, w).same_geodesic(axis(DEFAULT_STRUCTURE, CyclicWord(invert(w.as_word()).letters)))


def test_axis_of_commutator_is_parabolic():
    with pytest.raises(ParabolicError):
        axis(DEFAULT_STRUCTURE, CyclicWord(parse_word("abAB").letters))
    with pytest.raises(ParabolicError):
        axis(S34, CyclicWord(parse_word("abAB").letters))


# --- self-intersection pins ----------------------------------------------


@pytest.mark.parametrize(
    "word,count",
    [("a", 0), ("ab", 0), ("abaaB", 2), ("aabaB", 2)],
)
def test_paper_pins(word, count):
    r = self_intersection(parse_class(word))
    assert r.count == count and r.stable


@pytest.mark.parametrize("word", ["a", "ab", "abaaB", "aabaB", "aabb"])
def test_against_brute_force_ball(word):
    # [DERIVED] full-ball enumeration at B = 2n and B + 2 must agree with each other and the library
    c = parse_class(word)
    n = len(c)
    lo = self_intersection_oracle(c.letters, radius=2 * n)
    hi = self_intersection_oracle(c.letters, radius=2 * n + 2)
    assert lo == hi == self_intersection(c).count


def test_a2b2_value():
    # [DERIVED] pinned from the oracle comparison above
    assert self_intersection(parse_class("aabb")).count == 1


def test_short_classes_match_oracle():
    for c in enumerate_classes(5):
        if is_peripheral(c):
            continue
        assert self_intersection(c).count == self_intersection_oracle(c.letters), str(c)


def test_oracle_at_second_structure():
    for c in enumerate_classes(4):
        if is_peripheral(c):
            continue
        assert self_intersection(c, S34).count == self_intersection_oracle(c.letters, S34_FLOAT), str(c)


def test_structure_independence_up_to_length_8():
    for c in enumerate_classes(8):
        if is_peripheral(c):
            continue
        r1, r2 = self_intersection(c), self_intersection(c, S34)
        assert r1.stable and r2.stable
        assert r1.count == r2.count, str(c)


def test_canonical_variants_agree():
    rng = random.Random(4)
    classes = [c for c in enumerate_classes(8) if not is_peripheral(c)]
    for c in rng.sample(classes, 60):
        assert self_intersection(reverse_class(c)).count == self_intersection(c).count
        assert self_intersection(canonical_class(invert(c.word()))).count == self_intersection(c).count


def test_peripheral_rejected():
    with pytest.raises(ParabolicError):
        self_intersection(parse_class("abAB"))


def test_instability_is_reported():
    # a bound cap below the covering radius cannot certify the count
    from curvechar.intersections import _stable_count, crossing_flags

    c = parse_class("abaaB")
    cands = coset_candidates(c.letters, c.letters, same=True)
    flags = crossing_flags(DEFAULT_STRUCTURE, c.letters, c.letters, cands)
    assert not _stable_count(10, cands, flags, 2, 3).stable
    with pytest.raises(UnstableCountError):
        raise UnstableCountError("demo")


def test_is_simple_examples():
    assert is_simple(parse_class("ab"))
    assert not is_simple(parse_class("abaaB"))
    assert not is_simple(parse_class("aabaB"))


def test_candidates_are_deduplicated():
    c = parse_class("abaaB")
    cands = coset_candidates(c.letters, c.letters, same=True)
    keys = [k.key for k in cands]
    assert len(keys) == len(set(keys))


# --- slopes --------------------------------------------------------------


def test_slope_examples():
    a, b, ab = parse_class("a"), parse_class("b"), parse_class("ab")
    assert slope(a) == (1, 0) and slope(b) == (0, 1) and slope(ab) == (1, 1)
    assert slope_intersection(slope(a), slope(b)) == 1
    assert slope_intersection(slope(ab), slope(a)) == 1


def test_slope_errors():
    with pytest.raises(ValueError):
        slope(parse_class("abaaB"))
    with pytest.raises(ValueError):
        slope(parse_class("abAB"))


def test_slopes_match_pairwise_counts():
    simple = [c for c in enumerate_classes(6) if not is_peripheral(c) and is_simple(c)]
    for c1, c2 in itertools.combinations(simple, 2):
        assert intersection_number(c1, c2) == slope_intersection(slope(c1), slope(c2)), (str(c1), str(c2))


def test_pairwise_counts_match_oracle():
    rng = random.Random(8)
    simple = [c for c in enumerate_classes(4) if not is_peripheral(c) and is_simple(c)]
    pairs = list(itertools.combinations(simple, 2))
    for c1, c2 in rng.sample(pairs, min(20, len(pairs))):
        assert intersection_number(c1, c2) == intersection_oracle(c1.letters, c2.letters), (str(c1), str(c2))
