"""Sparse integer polynomials in the Fricke coordinates and rational polynomials in T."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Monomial = tuple[int, int, int]

VARS = ("x", "y", "z")


def _sort_key(mono: Monomial):
    # total degree descending, then lex with x > y > z
    return (-sum(mono), tuple(-e for e in mono))


class FrickePolynomial:
    """Integer polynomial in x = tr a, y = tr b, z = tr ab.

    Values are immutable; zero coefficients are never stored.  The rendered
    string (``str``) is canonical and doubles as the hash key.
    """

    __slots__ = ("_terms", "_key")

    def __init__(self, terms: Mapping[Monomial, int] | Iterable[tuple[Monomial, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, int] = {}
        for mono, c in items:
            if len(mono) != 3 or any(e < 0 for e in mono):
                raise ValueError(f"bad monomial {mono}")
            acc[mono] = acc.get(mono, 0) + int(c)
        self._terms = {m: c for m, c in acc.items() if c != 0}
        self._key: str | None = None

    @classmethod
    def constant(cls, c: int) -> "FrickePolynomial":
        return cls({(0, 0, 0): c})

    @classmethod
    def var(cls, index: int) -> "FrickePolynomial":
        mono = [0, 0, 0]
        mono[index] = 1
        return cls({tuple(mono): 1})

    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def __iter__(self):
        return iter(sorted(self._terms.items(), key=lambda t: _sort_key(t[0])))

    def degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def __add__(self, other: "FrickePolynomial") -> "FrickePolynomial":
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return FrickePolynomial(out)

    def __neg__(self) -> "FrickePolynomial":
        return FrickePolynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "FrickePolynomial") -> "FrickePolynomial":
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) - c
        return FrickePolynomial(out)

    def __mul__(self, other) -> "FrickePolynomial":
        if isinstance(other, int):
            return FrickePolynomial({m: c * other for m, c in self._terms.items()})
        out: dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                out[m] = out.get(m, 0) + c1 * c2
        return FrickePolynomial(out)

    __rmul__ = __mul__

    def times_var(self, index: int) -> "FrickePolynomial":
        """Multiply by x, y or z (index 0, 1, 2); the hot path of trace reduction."""
        out = {}
        for m, c in self._terms.items():
            mm = list(m)
            mm[index] += 1
            out[tuple(mm)] = c
        p = FrickePolynomial.__new__(FrickePolynomial)
        p._terms = out
        p._key = None
        return p

    def __eq__(self, other) -> bool:
        if isinstance(other, FrickePolynomial):
            return self._terms == other._terms
        if isinstance(other, int):
            return self._terms == ({(0, 0, 0): other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        return hash(str(self))

    def __call__(self, x, y, z):
        return self.evaluate(x, y, z)

    def evaluate(self, x, y, z):
        """Evaluate at any ring elements supporting + and * with ints."""
        if not self._terms:
            return 0 * x
        powers = []
        for v, top in zip((x, y, z), (max(m[i] for m in self._terms) for i in range(3))):
            row = [1]
            for _ in range(top):
                row.append(row[-1] * v)
            powers.append(row)
        px, py, pz = powers
        total = None
        for (i, j, k), c in self._terms.items():
            term = px[i] * py[j] * pz[k] * c
            total = term if total is None else total + term
        return total

    def __str__(self) -> str:
        if self._key is None:
            self._key = self._render()
        return self._key

    def _render(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for mono, c in self:
            factors = [v if e == 1 else f"{v}^{e}" for v, e in zip(VARS, mono) if e]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"FrickePolynomial({str(self)!r})"


class TPoly:
    """Polynomial in one variable T with Fraction coefficients (low degree first)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def T(cls) -> "TPoly":
        return cls((0, 1))

    @staticmethod
    def _lift(other) -> "TPoly":
        if isinstance(other, TPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return TPoly((other,))
        raise TypeError(f"cannot combine TPoly with {type(other).__name__}")

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __add__(self, other) -> "TPoly":
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return TPoly(self.coeff(k) + o.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "TPoly":
        return TPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "TPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "TPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "TPoly":
        o = self._lift(other)
        if not self.coeffs or not o.coeffs:
            return TPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return TPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        try:
            return self.coeffs == self._lift(other).coeffs
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __repr__(self) -> str:
        terms = [f"{c}*T^{k}" for k, c in enumerate(self.coeffs) if c]
        return "TPoly(" + (" + ".join(terms) or "0") + ")"
