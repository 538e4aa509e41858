"""2x2 matrices over a closed set of scalar kinds, and free-group representations."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .poly import TPoly
from .words import Word

RATIONAL = "rational"
COMPLEX = "complex"
TPOLY = "tpoly"

FLOAT_DET_TOL = 1e-12


class ScalarKindError(TypeError):
    pass


def scalar_kind(v) -> str:
    if isinstance(v, (int, Fraction)) and not isinstance(v, bool):
        return RATIONAL
    if isinstance(v, (float, complex)):
        return COMPLEX
    if isinstance(v, TPoly):
        return TPOLY
    raise ScalarKindError(f"unsupported scalar {v!r}")


def _kind_of(entries: Sequence) -> str:
    kinds = {scalar_kind(e) for e in entries}
    if len(kinds) != 1:
        raise ScalarKindError(f"mixed scalar kinds {sorted(kinds)}")
    return kinds.pop()


@dataclass(frozen=True)
class Mat2:
    """Matrix [[p, q], [r, s]].

    Matrices that represent group elements have determinant 1; conjugators
    returned by normalization may be general invertible matrices.
    """

    p: object
    q: object
    r: object
    s: object

    @property
    def kind(self) -> str:
        return _kind_of((self.p, self.q, self.r, self.s))

    def __matmul__(self, o: "Mat2") -> "Mat2":
        if self.kind != o.kind:
            raise ScalarKindError(f"cannot multiply {self.kind} by {o.kind} matrix")
        return Mat2(
            self.p * o.p + self.q * o.r,
            self.p * o.q + self.q * o.s,
            self.r * o.p + self.s * o.r,
            self.r * o.q + self.s * o.s,
        )

    def trace(self):
        return self.p + self.s

    def det(self):
        return self.p * self.s - self.q * self.r

    def adjugate(self) -> "Mat2":
        return Mat2(self.s, -self.q, -self.r, self.p)

    def inverse(self) -> "Mat2":
        d = self.det()
        if d == 1:
            return self.adjugate()
        if self.kind == TPOLY:
            raise ScalarKindError("only unimodular T-polynomial matrices can be inverted")
        return Mat2(self.s / d, -self.q / d, -self.r / d, self.p / d)

    def apply(self, v: tuple) -> tuple:
        """Act on a homogeneous boundary coordinate (column vector)."""
        return (self.p * v[0] + self.q * v[1], self.r * v[0] + self.s * v[1])

    def to_complex(self) -> "Mat2":
        return Mat2(*(complex(e) for e in (self.p, self.q, self.r, self.s)))

    def is_unimodular(self) -> bool:
        d = self.det()
        if self.kind == COMPLEX:
            return abs(d - 1) <= FLOAT_DET_TOL
        return d == 1

    def to_strings(self) -> list[str]:
        """Serialize a rational matrix as four "p/q" strings."""
        if self.kind != RATIONAL:
            raise ScalarKindError("only rational matrices serialize to p/q strings")
        out = []
        for e in (self.p, self.q, self.r, self.s):
            f = Fraction(e)
            out.append(f"{f.numerator}/{f.denominator}")
        return out

    @classmethod
    def from_strings(cls, entries: Sequence[str]) -> "Mat2":
        return cls(*(Fraction(e) for e in entries))

    def __str__(self) -> str:
        return f"[[{self.p}, {self.q}], [{self.r}, {self.s}]]"


IDENTITY = Mat2(1, 0, 0, 1)


def identity_like(m: Mat2) -> Mat2:
    if m.kind == COMPLEX:
        return Mat2(1 + 0j, 0j, 0j, 1 + 0j)
    if m.kind == TPOLY:
        return Mat2(TPoly((1,)), TPoly(), TPoly(), TPoly((1,)))
    return IDENTITY


@dataclass(frozen=True)
class Representation:
    """Assignment generator -> unimodular Mat2, all of one scalar kind."""

    mats: tuple[Mat2, ...]

    def __post_init__(self):
        if not self.mats:
            raise ValueError("representation needs at least one generator")
        kinds = {m.kind for m in self.mats}
        if len(kinds) != 1:
            raise ScalarKindError(f"mixed scalar kinds {sorted(kinds)}")
        for m in self.mats:
            if not m.is_unimodular():
                raise ValueError(f"generator image {m} does not have determinant 1")
        object.__setattr__(self, "_inverses", tuple(m.adjugate() for m in self.mats))

    @property
    def rank(self) -> int:
        return len(self.mats)

    @property
    def kind(self) -> str:
        return self.mats[0].kind

    def letter_matrix(self, code: int) -> Mat2:
        g = code >> 1
        if g >= self.rank:
            raise ValueError(f"generator {g} outside representation rank {self.rank}")
        return self._inverses[g] if code & 1 else self.mats[g]

    def image(self, w: Word | Sequence[int]) -> Mat2:
        letters = w.letters if isinstance(w, Word) else w
        acc = identity_like(self.mats[0])
        for c in letters:
            acc = acc @ self.letter_matrix(c)
        return acc

    def trace(self, w: Word | Sequence[int]):
        return self.image(w).trace()

    def conjugate(self, g: Mat2) -> "Representation":
        """The representation w -> g rho(w) g^-1."""
        gi = g.inverse()
        return Representation(tuple(g @ m @ gi for m in self.mats))

    def fricke_coordinates(self):
        if self.rank != 2:
            raise ValueError("Fricke coordinates need rank 2")
        a, b = self.mats
        return a.trace(), b.trace(), (a @ b).trace()

    def to_json(self) -> list[list[str]]:
        return [m.to_strings() for m in self.mats]


def random_unimodular(rng: random.Random, min_factors: int = 4, max_factors: int = 8, bound: int = 5) -> Mat2:
    """Product of elementary shears with nonzero entries in [-bound, bound]."""
    m = IDENTITY
    for _ in range(rng.randint(min_factors, max_factors)):
        k = rng.choice([i for i in range(-bound, bound + 1) if i])
        shear = Mat2(1, k, 0, 1) if rng.random() < 0.5 else Mat2(1, 0, k, 1)
        m = m @ shear
    return m


def random_integer_representation(rng: random.Random, rank: int) -> Representation:
    return Representation(tuple(random_unimodular(rng) for _ in range(rank)))
