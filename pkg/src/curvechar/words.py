"""Free-group words, cyclic words and unoriented curve classes.

Letters are encoded as small integers: generator ``g`` is ``2*g`` and its
inverse is ``2*g + 1``.  The integer order therefore is ``a < A < b < B < ...``,
which is the total order used for canonical forms, and inversion of a letter is
``code ^ 1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Sequence

ALPHABET = "abcdefghijklmnopqrstuvwxyz"
MAX_RANK = len(ALPHABET)

Letters = tuple[int, ...]


class WordError(ValueError):
    pass


class TrivialWordError(WordError):
    pass


class ProperPowerError(WordError):
    def __init__(self, root: "CyclicWord", exponent: int):
        super().__init__(f"{root}^{exponent} is a proper power")
        self.root = root
        self.exponent = exponent


class SingleGeneratorError(WordError):
    """Raised when a two-generator syllable decomposition has no b-syllable."""


def letter(generator: int, sign: int = 1) -> int:
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return 2 * generator + (0 if sign == 1 else 1)


def generator_of(code: int) -> int:
    return code >> 1


def sign_of(code: int) -> int:
    return -1 if code & 1 else 1


def inverse_letter(code: int) -> int:
    return code ^ 1


def free_reduce(letters: Sequence[int]) -> Letters:
    stack: list[int] = []
    for c in letters:
        if stack and stack[-1] == c ^ 1:
            stack.pop()
        else:
            stack.append(c)
    return tuple(stack)


def invert_letters(letters: Sequence[int]) -> Letters:
    return tuple(c ^ 1 for c in reversed(letters))


def cyclic_reduce_letters(letters: Sequence[int]) -> Letters:
    w = free_reduce(letters)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == w[j - 1] ^ 1:
        i += 1
        j -= 1
    return w[i:j]


def canonical_letters(letters: Letters) -> Letters:
    """Least rotation of ``letters`` or of its inverse.  Input must be cyclically reduced."""
    n = len(letters)
    best = letters
    for w in (letters, invert_letters(letters)):
        for i in range(n):
            r = w[i:] + w[:i]
            if r < best:
                best = r
    return best


def least_rotation(letters: Letters) -> Letters:
    return min(letters[i:] + letters[:i] for i in range(len(letters))) if letters else letters


def primitive_root(letters: Letters) -> tuple[Letters, int]:
    """Smallest period of a cyclic letter sequence, and how often it repeats."""
    n = len(letters)
    for k in range(1, n):
        if n % k == 0 and letters == letters[:k] * (n // k):
            return letters[:k], n // k
    return letters, 1


def _check_rank(letters: Sequence[int], rank: int) -> None:
    if not 1 <= rank <= MAX_RANK:
        raise WordError(f"rank must be between 1 and {MAX_RANK}")
    for c in letters:
        if c < 0 or c >> 1 >= rank:
            raise WordError(f"letter {_letter_char(c)!r} outside rank {rank}")


def _letter_char(code: int) -> str:
    ch = ALPHABET[code >> 1]
    return ch.upper() if code & 1 else ch


def render_letters(letters: Sequence[int]) -> str:
    """Run-length rendering, e.g. ``a^2bB^3``; the empty word renders as ``1``."""
    if not letters:
        return "1"
    out = []
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        run = j - i
        out.append(_letter_char(letters[i]) + (f"^{run}" if run > 1 else ""))
        i = j
    return "".join(out)


@dataclass(frozen=True, order=True)
class Word:
    """A freely reduced word; immutable, hashable."""

    letters: Letters
    rank: int = 2

    def __post_init__(self):
        _check_rank(self.letters, self.rank)
        if free_reduce(self.letters) != self.letters:
            raise WordError("Word letters must be freely reduced; use Word.reduced")

    @classmethod
    def reduced(cls, letters: Sequence[int], rank: int = 2) -> "Word":
        return cls(free_reduce(letters), rank)

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word.reduced(self.letters + other.letters, max(self.rank, other.rank))

    def __pow__(self, k: int) -> "Word":
        base = self.letters if k >= 0 else invert_letters(self.letters)
        return Word.reduced(base * abs(k), self.rank)

    def __str__(self) -> str:
        return render_letters(self.letters)

    def is_trivial(self) -> bool:
        return not self.letters


@dataclass(frozen=True, order=True)
class CyclicWord:
    """A nonempty cyclically reduced word, taken up to rotation by the caller."""

    letters: Letters
    rank: int = 2

    def __post_init__(self):
        _check_rank(self.letters, self.rank)
        if not self.letters:
            raise TrivialWordError("cyclic word is empty")
        if cyclic_reduce_letters(self.letters) != self.letters:
            raise WordError("CyclicWord letters must be cyclically reduced")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return render_letters(self.letters)

    def as_word(self) -> Word:
        return Word(self.letters, self.rank)


@dataclass(frozen=True)
class CurveClass:
    """Unoriented free-homotopy class of a maximal element.

    ``canonical`` is the least rotation (letter order a < A < b < B ...) of
    the cyclic word and of its inverse.  Classes sort by length, then
    lexicographically.
    """

    canonical: CyclicWord

    @property
    def rank(self) -> int:
        return self.canonical.rank

    @property
    def letters(self) -> Letters:
        return self.canonical.letters

    def __len__(self) -> int:
        return len(self.canonical.letters)

    def __lt__(self, other: "CurveClass") -> bool:
        return (len(self), self.letters) < (len(other), other.letters)

    def __str__(self) -> str:
        return str(self.canonical)

    def word(self) -> Word:
        return self.canonical.as_word()

    @property
    def is_power(self) -> bool:
        return primitive_root(self.letters)[1] > 1


_TOKEN = re.compile(r"([A-Za-z])(?:\^([+-]?\d+))?")


def parse_word(text: str, rank: int = 2) -> Word:
    """Parse ``a^2 B aA`` style input.  Uppercase letters are inverses and
    ``a^-1`` is accepted as well; whitespace is ignored.

    >>> str(parse_word("aA b"))
    'b'
    """
    compact = "".join(text.split())
    if compact == "1":
        return Word((), rank)
    pos = 0
    letters: list[int] = []
    while pos < len(compact):
        m = _TOKEN.match(compact, pos)
        if m is None:
            raise WordError(f"cannot parse {compact[pos:]!r}")
        ch, exp = m.group(1), m.group(2)
        gen = ALPHABET.index(ch.lower())
        if gen >= rank:
            raise WordError(f"letter {ch!r} outside rank {rank}")
        k = int(exp) if exp is not None else 1
        if ch.isupper():
            k = -k
        code = letter(gen, 1 if k > 0 else -1)
        letters.extend([code] * abs(k))
        pos = m.end()
    return Word.reduced(letters, rank)


def parse_class(text: str, rank: int = 2) -> CurveClass:
    return canonical_class(parse_word(text, rank))


def reverse(w: Word) -> Word:
    """The word written backwards; letters keep their signs."""
    return Word(tuple(reversed(w.letters)), w.rank)


def invert(w: Word) -> Word:
    return Word(invert_letters(w.letters), w.rank)


def cyclic_reduce(w: Word) -> CyclicWord:
    letters = cyclic_reduce_letters(w.letters)
    if not letters:
        raise TrivialWordError(f"{w} is conjugate to the identity")
    return CyclicWord(letters, w.rank)


def is_proper_power(cw: CyclicWord) -> tuple[bool, CyclicWord | None, int | None]:
    root, k = primitive_root(cw.letters)
    if k == 1:
        return False, None, None
    return True, CyclicWord(root, cw.rank), k


def canonical_class(w: Word | CyclicWord, allow_power: bool = False) -> CurveClass:
    """Canonical representative of the unoriented conjugacy class of ``w``.

    Raises :class:`TrivialWordError` for words conjugate to 1 and
    :class:`ProperPowerError` (carrying root and exponent) for proper powers
    unless ``allow_power`` is set.
    """
    letters = cyclic_reduce_letters(w.letters)
    if not letters:
        raise TrivialWordError(f"{render_letters(w.letters)} is conjugate to the identity")
    canon = canonical_letters(letters)
    root, k = primitive_root(canon)
    if k > 1 and not allow_power:
        raise ProperPowerError(CyclicWord(canonical_letters(root), w.rank), k)
    return CurveClass(CyclicWord(canon, w.rank))


def reverse_class(c: CurveClass) -> CurveClass:
    return canonical_class(reverse(c.word()), allow_power=True)


@dataclass(frozen=True)
class SyllableForm:
    syllables: tuple[tuple[int, int], ...]

    @property
    def p(self) -> int:
        """Number of (a, b) syllable pairs for a rank-2 cyclic word."""
        return len(self.syllables) // 2


def _syllables_of(letters: Letters) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    for c in letters:
        g, s = c >> 1, sign_of(c)
        if out and out[-1][0] == g:
            out[-1] = (g, out[-1][1] + s)
        else:
            out.append((g, s))
    return out


def syllables(cw: CyclicWord) -> SyllableForm:
    """Cyclic syllable decomposition, rotated to start at a syllable boundary.

    Adjacent syllables (cyclically) have distinct generators.
    """
    letters = cw.letters
    n = len(letters)
    if all(c >> 1 == letters[0] >> 1 for c in letters):
        return SyllableForm(((letters[0] >> 1, sum(sign_of(c) for c in letters)),))
    # rotate so that a syllable starts at index 0
    start = next(i for i in range(n) if letters[i] >> 1 != letters[i - 1] >> 1)
    return SyllableForm(tuple(_syllables_of(letters[start:] + letters[:start])))


def exponent_vectors(cw: CyclicWord) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``(m, n)`` with ``cw ~ a^m1 b^n1 ... a^mp b^np``, starting on an a-syllable."""
    if cw.rank != 2:
        raise WordError("exponent vectors are defined for rank 2")
    form = syllables(cw).syllables
    if len(form) < 2:
        raise SingleGeneratorError(f"{cw} involves a single generator")
    if form[0][0] != 0:
        form = form[1:] + form[:1]
    return tuple(e for _, e in form[0::2]), tuple(e for _, e in form[1::2])


def from_exponents(m: Sequence[int], n: Sequence[int]) -> Word:
    """The word a^m1 b^n1 ... a^mp b^np."""
    letters: list[int] = []
    for mi, ni in zip(m, n, strict=True):
        letters += [letter(0, 1 if mi > 0 else -1)] * abs(mi)
        letters += [letter(1, 1 if ni > 0 else -1)] * abs(ni)
    return Word.reduced(letters, 2)


def _reduced_words(length: int, rank: int, first: Sequence[int]) -> Iterator[Letters]:
    alphabet = range(2 * rank)
    word: list[int] = []

    def extend(depth: int) -> Iterator[Letters]:
        if depth == length:
            yield tuple(word)
            return
        choices = first if depth == 0 else alphabet
        for c in choices:
            if word and word[-1] == c ^ 1:
                continue
            word.append(c)
            yield from extend(depth + 1)
            word.pop()

    yield from extend(0)


def enumerate_classes(max_len: int, rank: int = 2, include_powers: bool = False) -> Iterator[CurveClass]:
    """Every unoriented conjugacy class of cyclic length <= ``max_len``, once.

    Order is by length, then lexicographic in the letter order.  Proper powers
    are skipped unless ``include_powers`` is set (oracle use only).
    """
    if max_len < 1 or rank < 1:
        raise ValueError("max_len and rank must be positive")
    # the canonical form always begins with a positive letter
    positive = [2 * g for g in range(rank)]
    for length in range(1, max_len + 1):
        for letters in _reduced_words(length, rank, positive):
            if length > 1 and letters[0] == letters[-1] ^ 1:
                continue
            if canonical_letters(letters) != letters:
                continue
            if not include_powers and primitive_root(letters)[1] > 1:
                continue
            yield CurveClass(CyclicWord(letters, rank))
