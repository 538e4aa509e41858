import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvechar.acceptance import brute_force_classes
from curvechar.words import (
    CurveClass,
    CyclicWord,
    ProperPowerError,
    SingleGeneratorError,
    TrivialWordError,
    Word,
    WordError,
    canonical_class,
    cyclic_reduce,
    cyclic_reduce_letters,
    enumerate_classes,
    exponent_vectors,
    free_reduce,
    from_exponents,
    invert,
    is_proper_power,
    parse_class,
    parse_word,
    reverse,
    reverse_class,
    syllables,
)

letters2 = st.lists(st.integers(0, 3), max_size=14)


def naive_reduce(seq):
    # repeatedly delete the leftmost cancelling pair
    s = list(seq)
    changed = True
    while changed:
        changed = False
        for i in range(len(s) - 1):
            if s[i] ^ 1 == s[i + 1]:
                del s[i : i + 2]
                changed = True
                break
    return tuple(s)


# --- parsing -------------------------------------------------------------


def test_parse_examples():
    assert str(parse_word("abaaB")) == "aba^2B"
    assert str(parse_word("a^2 b a B")) == "a^2baB"
    assert str(parse_word("aA")) == "1"
    assert parse_word("a^-2").letters == (1, 1)
    assert str(parse_word("a^0b")) == "b"


def test_parse_rejects_out_of_rank():
    with pytest.raises(WordError):
        parse_word("abc", rank=2)
    assert parse_word("abc", rank=3).rank == 3


def test_parse_rejects_garbage():
    with pytest.raises(WordError):
        parse_word("a*b")


def test_word_must_be_reduced():
    with pytest.raises(WordError):
        Word((0, 1))


# --- classes -------------------------------------------------------------


def test_horowitz_pair_classes_distinct():
    u, v = parse_class("abaaB"), parse_class("aabaB")
    assert u != v
    assert str(u) == "a^2Bab"
    assert reverse_class(u) == v


def test_conjugates_and_inverses_collapse():
    c = parse_class("abaaB")
    for text in ("baaBa", "aaBab", "bAABA", "AbAAB"):
        assert parse_class(text) == c


def test_proper_power_rejected_by_default():
    with pytest.raises(ProperPowerError) as ei:
        parse_class("abab")
    assert ei.value.exponent == 2
    assert canonical_class(parse_word("abab"), allow_power=True).is_power


def test_trivial_class_rejected():
    with pytest.raises(TrivialWordError):
        parse_class("abBA")


def test_is_proper_power():
    ok, root, k = is_proper_power(cyclic_reduce(parse_word("aBaBaB")))
    assert ok and k == 3 and len(root.letters) == 2
    assert is_proper_power(cyclic_reduce(parse_word("aab")))[0] is False


def test_enumerate_small():
    assert [str(c) for c in enumerate_classes(2)] == ["a", "b", "ab", "aB"]


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("powers", [False, True])
def test_enumeration_matches_brute_force(n, powers):
    # [DERIVED] every string over {a, A, b, B}, canonicalized independently
    got = [c.letters for c in enumerate_classes(n, include_powers=powers)]
    assert len(got) == len(set(got))
    assert set(got) == brute_force_classes(n, powers)


def test_enumeration_order_is_deterministic():
    cs = list(enumerate_classes(6))
    assert cs == sorted(cs)


# --- syllables -----------------------------------------------------------


def test_exponent_vectors_example():
    cw = cyclic_reduce(parse_word("abaaB"))
    assert exponent_vectors(cw) == ((1, 2), (1, -1))
    assert syllables(cw).p == 2


def test_exponent_vectors_single_generator():
    with pytest.raises(SingleGeneratorError):
        exponent_vectors(cyclic_reduce(parse_word("aaa")))


def test_from_exponents_round_trip():
    w = from_exponents((1, 2), (1, -1))
    assert str(w) == "aba^2B"
    assert exponent_vectors(cyclic_reduce(w)) == ((1, 2), (1, -1))


# --- properties ----------------------------------------------------------


@given(letters2)
def test_free_reduction_confluent(seq):
    assert free_reduce(seq) == naive_reduce(seq)


@given(letters2, letters2)
def test_reduction_is_a_homomorphism(u, v):
    assert free_reduce(free_reduce(u) + free_reduce(v)) == free_reduce(u + v)


@given(letters2)
def test_reverse_is_involution(seq):
    w = Word.reduced(seq)
    assert reverse(reverse(w)) == w
    assert invert(invert(w)) == w


@given(letters2, letters2)
@settings(max_examples=200)
def test_class_invariant_under_conjugation_and_inversion(seq, g):
    w = Word.reduced(seq)
    if not cyclic_reduce_letters(w.letters):
        return
    c = canonical_class(w, allow_power=True)
    gw = Word.reduced(g)
    conj = Word.reduced(gw.letters + w.letters + invert(gw).letters)
    assert canonical_class(conj, allow_power=True) == c
    assert canonical_class(invert(w), allow_power=True) == c


@given(letters2)
def test_canonical_is_minimal_rotation(seq):
    w = Word.reduced(seq)
    cw = cyclic_reduce_letters(w.letters)
    if not cw:
        return
    c = canonical_class(w, allow_power=True)
    inv = tuple(x ^ 1 for x in reversed(cw))
    rots = {cw[i:] + cw[:i] for i in range(len(cw))} | {inv[i:] + inv[:i] for i in range(len(inv))}
    assert c.letters == min(rots)


@given(letters2)
def test_render_parse_round_trip(seq):
    w = Word.reduced(seq)
    assert parse_word(str(w)) == w


def test_cyclic_word_rejects_non_cyclically_reduced():
    with pytest.raises(WordError):
        CyclicWord((0, 2, 1))


def test_curve_class_ordering():
    a, ab = parse_class("a"), parse_class("ab")
    assert a < ab
    assert isinstance(a, CurveClass)


def test_reverse_class_of_all_short_classes_is_a_class():
    for c in enumerate_classes(6):
        r = reverse_class(c)
        assert len(r) == len(c)
        assert reverse_class(r) == c
