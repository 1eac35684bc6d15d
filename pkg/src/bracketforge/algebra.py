"""Exact sparse algebra: Laurent polynomials in one variable, multivariate
(Laurent) polynomials, and the tropical semifield Trop(y_1..y_N).

All values are immutable; every constructor canonicalizes by dropping zero
coefficients.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "AlgebraError",
    "NonIntegralExponent",
    "MissingVariable",
    "NotDivisible",
    "LaurentPoly",
    "LaurentMultiPoly",
    "MultiPoly",
    "TropicalElement",
    "laurent_mul",
    "laurent_substitute_A",
    "tropical_one_plus",
    "multipoly_specialize",
    "CIRCLE",
]


class AlgebraError(ValueError):
    pass


class NonIntegralExponent(AlgebraError):
    pass


class MissingVariable(AlgebraError):
    pass


class NotDivisible(AlgebraError):
    pass


def _clean(terms: Mapping) -> dict:
    return {k: int(v) for k, v in terms.items() if v != 0}


class LaurentPoly:
    """Laurent polynomial in a single variable with integer coefficients.

    ``scale`` divides every stored exponent when printing, so half-integral
    powers (Jones polynomials of even-component links) stay in integers.
    """

    __slots__ = ("_terms", "var", "scale", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None, var: str = "A",
                 scale: int = 1):
        self._terms = _clean(terms or {})
        self.var = var
        self.scale = scale
        self._hash = None

    # construction helpers
    @classmethod
    def monomial(cls, exp: int, coef: int = 1, var: str = "A") -> "LaurentPoly":
        return cls({exp: coef}, var)

    @classmethod
    def constant(cls, c: int, var: str = "A") -> "LaurentPoly":
        return cls({0: c}, var)

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self) -> list[tuple[int, int]]:
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def min_exp(self) -> int:
        return min(self._terms)

    def max_exp(self) -> int:
        return max(self._terms)

    def coefficient(self, e: int) -> int:
        return self._terms.get(e, 0)

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.var != self.var or other.scale != self.scale:
                raise AlgebraError("mixing polynomials in different variables")
            return other
        if isinstance(other, int):
            return LaurentPoly({0: other}, self.var, self.scale)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out, self.var, self.scale)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()}, self.var, self.scale)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out, self.var, self.scale)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise NotDivisible("only monomials can be inverted")
            (e, c), = self._terms.items()
            if c not in (1, -1):
                raise NotDivisible("coefficient is not a unit")
            return LaurentPoly({-e * (-n): c ** (-n)}, self.var, self.scale)
        result = LaurentPoly({0: 1}, self.var, self.scale)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divide_by_monomial(self, m: "LaurentPoly") -> "LaurentPoly":
        return self * (m ** -1)

    def mirror(self) -> "LaurentPoly":
        """Image under A -> A^{-1}."""
        return LaurentPoly({-e: c for e, c in self._terms.items()}, self.var, self.scale)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly({0: other}, self.var, self.scale)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return (self._terms == other._terms and self.var == other.var
                and self.scale == other.scale)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(sorted(self._terms.items())), self.var, self.scale))
        return self._hash

    def _exp_text(self, e: int) -> str:
        if self.scale == 1:
            return f"{self.var}^{e}"
        q = Fraction(e, self.scale)
        if q.denominator == 1:
            return f"{self.var}^{q.numerator}"
        return f"{self.var}^({q.numerator}/{q.denominator})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for i, (e, c) in enumerate(self.items()):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            elif mag == 1:
                body = self._exp_text(e)
            else:
                body = f"{mag}*{self._exp_text(e)}"
            if i == 0:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r})"

    def to_json(self) -> list[list[int]]:
        return [[e, c] for e, c in self.items()]

    @classmethod
    def from_json(cls, data: Iterable, var: str = "A") -> "LaurentPoly":
        out: dict[int, int] = {}
        for e, c in data:
            out[int(e)] = out.get(int(e), 0) + int(c)
        return cls(out, var)


A = LaurentPoly.monomial(1)
#: value of one extra circle, -A^2 - A^-2
CIRCLE = LaurentPoly({2: -1, -2: -1})


def laurent_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def laurent_substitute_A(p: LaurentPoly, var: str = "t") -> LaurentPoly:
    """Substitute A = t^{-1/4}; every exponent must be a multiple of 4."""
    out: dict[int, int] = {}
    for e, c in p.items():
        if e % 4:
            raise NonIntegralExponent(f"exponent {e} of A is not divisible by 4")
        out[-e // 4] = c
    return LaurentPoly(out, var)


class LaurentMultiPoly:
    """Sparse Laurent polynomial in ``nvars`` variables over the integers.

    Terms map exponent tuples (possibly negative entries) to coefficients.
    ``names`` controls printing only.
    """

    __slots__ = ("_terms", "nvars", "names", "_hash")

    def __init__(self, terms: Mapping[tuple, int] | None, nvars: int,
                 names: tuple[str, ...] | None = None):
        clean = {}
        for k, v in (terms or {}).items():
            if v:
                k = tuple(int(x) for x in k)
                if len(k) != nvars:
                    raise AlgebraError("exponent tuple length mismatch")
                clean[k] = int(v)
        self._terms = clean
        self.nvars = nvars
        self.names = names or tuple(f"y{i + 1}" for i in range(nvars))
        self._hash = None

    @classmethod
    def one(cls, nvars: int, names=None):
        return cls({(0,) * nvars: 1}, nvars, names)

    @classmethod
    def gen(cls, i: int, nvars: int, names=None, power: int = 1):
        e = [0] * nvars
        e[i] = power
        return cls({tuple(e): 1}, nvars, names)

    @classmethod
    def monomial(cls, exps, nvars: int, names=None, coef: int = 1):
        return cls({tuple(exps): coef}, nvars, names)

    @property
    def terms(self) -> dict[tuple, int]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=_term_key)

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _like(self, terms):
        return type(self)(terms, self.nvars, self.names)

    def _check(self, other):
        if isinstance(other, int):
            return self._like({(0,) * self.nvars: other})
        if not isinstance(other, LaurentMultiPoly):
            return NotImplemented
        if other.nvars != self.nvars:
            raise AlgebraError("variable count mismatch")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out: dict[tuple, int] = {}
        for k1, v1 in self._terms.items():
            for k2, v2 in other._terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + v1 * v2
        return self._like(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) != 1:
                raise NotDivisible("only monomials can be inverted")
            (k, v), = self._terms.items()
            if v not in (1, -1):
                raise NotDivisible("coefficient is not a unit")
            return self._like({tuple(-x * -n for x in k): v ** -n})
        result = self._like({(0,) * self.nvars: 1})
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self._like({(0,) * self.nvars: other})
        if not isinstance(other, LaurentMultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, tuple(sorted(self._terms.items()))))
        return self._hash

    def min_exponents(self) -> tuple[int, ...]:
        return tuple(min(k[i] for k in self._terms) for i in range(self.nvars))

    def is_polynomial(self) -> bool:
        return all(x >= 0 for k in self._terms for x in k)

    def leading(self):
        k = max(self._terms)
        return k, self._terms[k]

    def exact_div(self, other: "LaurentMultiPoly", max_steps: int = 200000):
        """Exact quotient self / other, raising NotDivisible otherwise.

        Lexicographic long division; in the Laurent ring every monomial is a
        unit so the leading-term step always applies, and exact divisibility
        makes the remainder vanish after finitely many steps.
        """
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lk, lc = other.leading()
        if self.is_zero():
            return self._like({})
        # exact quotients satisfy lexmin(self) = lexmin(q) + lexmin(other)
        floor = tuple(a - b for a, b in zip(min(self._terms), min(other._terms)))
        rem = dict(self._terms)
        quot: dict[tuple, int] = {}
        steps = 0
        while rem:
            steps += 1
            k = max(rem)
            c = rem[k]
            qk = tuple(a - b for a, b in zip(k, lk))
            if c % lc or qk < floor or steps > max_steps:
                raise NotDivisible("polynomial is not an exact multiple")
            qc = c // lc
            quot[qk] = qc
            for ok, ov in other._terms.items():
                kk = tuple(a + b for a, b in zip(qk, ok))
                nv = rem.get(kk, 0) - qc * ov
                if nv:
                    rem[kk] = nv
                else:
                    rem.pop(kk, None)
        return self._like(quot)

    def specialize(self, values: Mapping[int, LaurentPoly]) -> LaurentPoly:
        """Evaluate at single-variable Laurent values (index -> value)."""
        used = {i for k in self._terms for i, x in enumerate(k) if x}
        missing = sorted(used - set(values))
        if missing:
            raise MissingVariable(
                "no value for " + ", ".join(self.names[i] for i in missing))
        sample = next(iter(values.values()), LaurentPoly({0: 1}))
        total = LaurentPoly({}, sample.var, sample.scale)
        cache: dict[tuple[int, int], LaurentPoly] = {}
        for k, v in self._terms.items():
            term = LaurentPoly({0: v}, sample.var, sample.scale)
            for i, x in enumerate(k):
                if x:
                    if (i, x) not in cache:
                        cache[(i, x)] = values[i] ** x
                    term = term * cache[(i, x)]
            total = total + term
        return total

    def evaluate(self, point) -> Fraction:
        """Exact rational evaluation at a point of Fractions."""
        total = Fraction(0)
        for k, v in self._terms.items():
            t = Fraction(v)
            for i, x in enumerate(k):
                if x:
                    t *= Fraction(point[i]) ** x
            total += t
        return total

    def substitute(self, images: list) -> "LaurentMultiPoly":
        """Ring substitution of every variable by a LaurentMultiPoly image."""
        target = images[0]
        out = target._like({})
        for k, v in self._terms.items():
            term = target._like({(0,) * target.nvars: v})
            for i, x in enumerate(k):
                if x:
                    term = term * (images[i] ** x)
            out = out + term
        return out

    def rename(self, perm: list[int]) -> "LaurentMultiPoly":
        """Move variable i to position perm[i]."""
        out = {}
        for k, v in self._terms.items():
            nk = [0] * self.nvars
            for i, x in enumerate(k):
                nk[perm[i]] = x
            out[tuple(nk)] = v
        return self._like(out)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (k, c) in enumerate(self.items()):
            mono = "*".join(
                (n if x == 1 else f"{n}^{x}") for n, x in zip(self.names, k) if x)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if i == 0:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"

    def to_json(self) -> list:
        return [[list(k), c] for k, c in self.items()]


def _term_key(item):
    k = item[0]
    return (sum(k), tuple(-x for x in k))


class MultiPoly(LaurentMultiPoly):
    """Polynomial (nonnegative exponents) in y_1..y_N."""

    __slots__ = ()

    def __init__(self, terms, nvars: int, names=None):
        super().__init__(terms, nvars, names)
        if not self.is_polynomial():
            raise AlgebraError("MultiPoly exponents must be nonnegative")

    def _like(self, terms):
        lm = LaurentMultiPoly(terms, self.nvars, self.names)
        return MultiPoly(lm._terms, self.nvars, self.names) if lm.is_polynomial() else lm

    @classmethod
    def from_laurent(cls, p: LaurentMultiPoly) -> "MultiPoly":
        return cls(p.terms, p.nvars, p.names)

    def degree_vector_max(self) -> tuple[int, ...]:
        return tuple(max(k[i] for k in self._terms) for i in range(self.nvars))


def multipoly_specialize(f: LaurentMultiPoly, values: Mapping[int, LaurentPoly]) -> LaurentPoly:
    return f.specialize(values)


class TropicalElement:
    """Monomial of Trop(y_1..y_N): + is componentwise min, * adds exponents."""

    __slots__ = ("exponents",)

    def __init__(self, exponents: Iterable[int]):
        self.exponents = tuple(int(e) for e in exponents)

    @classmethod
    def one(cls, n: int) -> "TropicalElement":
        return cls((0,) * n)

    @classmethod
    def gen(cls, i: int, n: int) -> "TropicalElement":
        e = [0] * n
        e[i] = 1
        return cls(e)

    def __add__(self, other: "TropicalElement") -> "TropicalElement":
        return TropicalElement(min(a, b) for a, b in zip(self.exponents, other.exponents))

    def __mul__(self, other: "TropicalElement") -> "TropicalElement":
        return TropicalElement(a + b for a, b in zip(self.exponents, other.exponents))

    def __pow__(self, n: int) -> "TropicalElement":
        return TropicalElement(a * n for a in self.exponents)

    def inverse(self) -> "TropicalElement":
        return self ** -1

    def __eq__(self, other):
        return isinstance(other, TropicalElement) and self.exponents == other.exponents

    def __hash__(self):
        return hash(self.exponents)

    def __repr__(self):
        return f"TropicalElement({self.exponents})"

    def positive_part(self) -> tuple[int, ...]:
        return tuple(max(a, 0) for a in self.exponents)


def tropical_one_plus(y: TropicalElement) -> TropicalElement:
    return y + TropicalElement.one(len(y.exponents))
