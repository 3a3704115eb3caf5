"""Exact Laurent polynomials and rational functions in ``q, x1, ..., xn`` over Q.

Everything the closed forms need lives here: a sparse :class:`LaurentExpr`,
a canonical :class:`RatFunc`, variable substitution, and graded truncated
power-series expansion.  Slot 0 of every exponent vector is the parameter
variable (printed ``q`` by default; the Hall-Littlewood code prints it as
``t``), slots ``1..n`` are ``x1..xn``.

Polynomial gcd and exact division are delegated to sympy's sparse
polynomial rings; all other arithmetic is done on plain dictionaries of
:class:`fractions.Fraction` coefficients.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from .errors import (
    DivisionByZero,
    InexactDivision,
    NoUnitConstantTerm,
    SpecializationPole,
    VarMismatch,
)

Number = Union[int, Fraction]

__all__ = [
    "LaurentExpr",
    "RatFunc",
    "TruncatedSeries",
    "arith",
    "substitute",
    "series_expand",
    "laurent_exquo",
    "parse_laurent",
    "parse_ratfunc",
    "var_names",
]


def var_names(nvars: int, param: str = "q", prefix: str = "x") -> tuple[str, ...]:
    return (param,) + tuple(f"{prefix}{i}" for i in range(1, nvars + 1))


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"expected an exact rational, got {type(c).__name__}")


def _var_index(key, nvars: int) -> int:
    if isinstance(key, int):
        idx = key
    elif key in ("q", "t"):
        idx = 0
    elif isinstance(key, str) and re.fullmatch(r"[xu]\d+", key):
        idx = int(key[1:])
    else:
        raise VarMismatch(f"unknown variable {key!r}")
    if not 0 <= idx <= nvars:
        raise VarMismatch(f"variable {key!r} not present with nvars={nvars}")
    return idx


class LaurentExpr:
    """Sparse Laurent polynomial with rational coefficients.

    ``terms`` maps exponent vectors ``(e_q, e_1, ..., e_n)`` to nonzero
    Fractions.  Instances are immutable and hashable.
    """

    __slots__ = ("_terms", "_nvars", "_hash")

    def __init__(self, terms: Mapping[Sequence[int], Number] | None = None, nvars: int = 0):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        acc: dict[tuple[int, ...], Fraction] = {}
        for exps, c in (terms or {}).items():
            key = tuple(int(e) for e in exps)
            if len(key) != nvars + 1:
                raise VarMismatch(f"exponent vector {key} does not have length {nvars + 1}")
            acc[key] = acc.get(key, 0) + _frac(c)
        self._terms = {k: v for k, v in acc.items() if v}
        self._nvars = nvars
        self._hash = None

    @classmethod
    def _make(cls, terms: dict, nvars: int) -> "LaurentExpr":
        obj = object.__new__(cls)
        obj._terms = terms
        obj._nvars = nvars
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, c: Number, nvars: int = 0) -> "LaurentExpr":
        c = _frac(c)
        return cls._make({(0,) * (nvars + 1): c} if c else {}, nvars)

    @classmethod
    def monomial(cls, exps: Sequence[int], coef: Number = 1, nvars: int | None = None) -> "LaurentExpr":
        exps = tuple(int(e) for e in exps)
        if nvars is None:
            nvars = len(exps) - 1
        return cls({exps: coef}, nvars)

    @classmethod
    def var(cls, name, nvars: int) -> "LaurentExpr":
        idx = _var_index(name, nvars)
        exps = [0] * (nvars + 1)
        exps[idx] = 1
        return cls._make({tuple(exps): Fraction(1)}, nvars)

    @classmethod
    def q(cls, nvars: int = 0) -> "LaurentExpr":
        return cls.var(0, nvars)

    @classmethod
    def x(cls, i: int, nvars: int) -> "LaurentExpr":
        if not 1 <= i <= nvars:
            raise VarMismatch(f"x{i} not present with nvars={nvars}")
        return cls.var(i, nvars)

    # -- basic queries ------------------------------------------------
    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def terms(self) -> Mapping[tuple[int, ...], Fraction]:
        return MappingProxyType(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        if not self._terms:
            return True
        return len(self._terms) == 1 and not any(next(iter(self._terms)))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("expression is not a constant")
        return next(iter(self._terms.values()), Fraction(0))

    def min_exponents(self) -> tuple[int, ...]:
        if not self._terms:
            return (0,) * (self._nvars + 1)
        return tuple(map(min, zip(*self._terms)))

    def max_exponents(self) -> tuple[int, ...]:
        if not self._terms:
            return (0,) * (self._nvars + 1)
        return tuple(map(max, zip(*self._terms)))

    def is_polynomial(self) -> bool:
        return all(e >= 0 for e in self.min_exponents())

    def variables(self) -> set[int]:
        used = set()
        for exps in self._terms:
            used.update(i for i, e in enumerate(exps) if e)
        return used

    # -- coercion -----------------------------------------------------
    def _coerce(self, other) -> "LaurentExpr | None":
        if isinstance(other, LaurentExpr):
            if other._nvars != self._nvars:
                raise VarMismatch(f"nvars {self._nvars} vs {other._nvars}")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentExpr.const(other, self._nvars)
        return None

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        if isinstance(other, RatFunc):
            return RatFunc(self) + other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for k, v in o._terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return LaurentExpr._make(out, self._nvars)

    __radd__ = __add__

    def __neg__(self) -> "LaurentExpr":
        return LaurentExpr._make({k: -v for k, v in self._terms.items()}, self._nvars)

    def __sub__(self, other):
        if isinstance(other, RatFunc):
            return RatFunc(self) - other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, RatFunc):
            return RatFunc(self) * other
        if isinstance(other, (int, Fraction)):
            c = _frac(other)
            if not c:
                return LaurentExpr._make({}, self._nvars)
            return LaurentExpr._make({k: v * c for k, v in self._terms.items()}, self._nvars)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = (self._terms, o._terms) if len(self._terms) <= len(o._terms) else (o._terms, self._terms)
        out: dict[tuple[int, ...], Fraction] = {}
        get = out.get
        for ea, ca in a.items():
            for eb, cb in b.items():
                k = tuple([x + y for x, y in zip(ea, eb)])
                out[k] = get(k, 0) + ca * cb
        return LaurentExpr._make({k: v for k, v in out.items() if v}, self._nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if self.is_monomial():
                (exps, c), = self._terms.items()
                return LaurentExpr._make({tuple(-e * -k for e in exps): 1 / c ** -k}, self._nvars)
            return RatFunc(LaurentExpr.const(1, self._nvars), self ** -k)
        result = LaurentExpr.const(1, self._nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _frac(other)
            if not c:
                raise DivisionByZero("division by the zero constant")
            return self * (1 / c)
        if isinstance(other, LaurentExpr) and other.is_monomial():
            return self * other ** -1
        return RatFunc(self) / other

    def __rtruediv__(self, other):
        return RatFunc(other, 1, nvars=self._nvars) / RatFunc(self)

    def shift(self, exps: Sequence[int]) -> "LaurentExpr":
        """Multiply by the monomial with exponent vector ``exps``."""
        exps = tuple(exps)
        return LaurentExpr._make(
            {tuple([a + b for a, b in zip(k, exps)]): v for k, v in self._terms.items()}, self._nvars
        )

    def permute_x(self, perm: Sequence[int]) -> "LaurentExpr":
        """Substitute ``x_i -> x_{perm[i-1]}`` (``perm`` is 1-based one-line notation)."""
        n = self._nvars
        out = {}
        for k, v in self._terms.items():
            new = [0] * (n + 1)
            new[0] = k[0]
            for i in range(1, n + 1):
                new[perm[i - 1]] = k[i]
            out[tuple(new)] = v
        return LaurentExpr._make(out, n)

    def evaluate(self, values: Sequence[Number]) -> Fraction:
        """Evaluate at rational values for all ``nvars + 1`` variables."""
        if len(values) != self._nvars + 1:
            raise VarMismatch("wrong number of values")
        vals = [_frac(v) for v in values]
        total = Fraction(0)
        for k, c in self._terms.items():
            term = c
            for v, e in zip(vals, k):
                if e:
                    if not v and e < 0:
                        raise SpecializationPole("negative power of zero")
                    term *= v ** e
            total += term
        return total

    # -- comparison ---------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self._terms == LaurentExpr.const(other, self._nvars)._terms
        if isinstance(other, LaurentExpr):
            return self._nvars == other._nvars and self._terms == other._terms
        if isinstance(other, RatFunc):
            return RatFunc(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._nvars, frozenset(self._terms.items())))
        return self._hash

    # -- rendering ----------------------------------------------------
    def sorted_exponents(self) -> list[tuple[int, ...]]:
        return sorted(self._terms, key=lambda k: (k[1:], k[0]), reverse=True)

    def to_text(self, names: Sequence[str] | None = None) -> str:
        names = names or var_names(self._nvars)
        if not self._terms:
            return "0"
        out = []
        for k in self.sorted_exponents():
            c = self._terms[k]
            mono = _mono_text(k, names)
            a = abs(c)
            if mono:
                body = mono if a == 1 else f"{a}*{mono}"
            else:
                body = str(a)
            if not out:
                out.append(f"-{body}" if c < 0 else body)
            else:
                out.append(f" - {body}" if c < 0 else f" + {body}")
        return "".join(out)

    def to_grouped_text(self, param: str = "q") -> str:
        """Render grouped by x-monomial, coefficients as polynomials in slot 0.

        x-monomials are ordered by their sorted exponent multiset first, so a
        symmetric polynomial reads as a sum over monomial-symmetric orbits.
        """
        if not self._terms:
            return "0"
        groups: dict[tuple[int, ...], dict[tuple[int, ...], Fraction]] = {}
        for k, c in self._terms.items():
            groups.setdefault(k[1:], {})[(k[0],)] = c
        order = sorted(groups, key=lambda xs: (tuple(sorted(xs, reverse=True)), xs), reverse=True)
        xnames = var_names(self._nvars)[1:]
        pieces = []
        for xs in order:
            coef = LaurentExpr._make(groups[xs], 0)
            mono = _mono_text(xs, xnames)
            if coef.is_monomial():
                (e,), c = next(iter(coef._terms.items()))
                inner = _mono_text((e,), (param,))
                body = "*".join(p for p in (str(abs(c)) if abs(c) != 1 or not (inner or mono) else "", inner, mono) if p)
                neg = c < 0
            else:
                ctext = "".join(
                    _signed_piece(coef._terms[k], _mono_text(k, (param,)), i == 0)
                    for i, k in enumerate(sorted(coef._terms))
                )
                body = f"({ctext})*{mono}" if mono else f"({ctext})"
                neg = False
            if not pieces:
                pieces.append(f"-{body}" if neg else body)
            else:
                pieces.append(f" - {body}" if neg else f" + {body}")
        return "".join(pieces)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"LaurentExpr({self.to_text()!r}, nvars={self._nvars})"

    def to_json(self) -> dict:
        return {
            "nvars": self._nvars,
            "terms": [[list(k), str(self._terms[k])] for k in self.sorted_exponents()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "LaurentExpr":
        return cls({tuple(k): Fraction(c) for k, c in data["terms"]}, data["nvars"])


def _mono_text(exps: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _signed_piece(c: Fraction, mono: str, first: bool) -> str:
    a = abs(c)
    body = mono if (mono and a == 1) else (f"{a}*{mono}" if mono else str(a))
    if first:
        return f"-{body}" if c < 0 else body
    return f"-{body}" if c < 0 else f"+{body}"


_TERM_SPLIT = re.compile(r"(?<![\^*/])\s*([+-])\s*")
_FACTOR = re.compile(r"([A-Za-z]\w*)(?:\^(-?\d+))?$")


def parse_laurent(text: str, nvars: int) -> LaurentExpr:
    """Inverse of :meth:`LaurentExpr.to_text` (names ``q``/``t`` and ``x1..xn``)."""
    text = text.strip()
    if not text:
        raise ValueError("empty expression")
    pieces = _TERM_SPLIT.split(text)
    if pieces[0] == "":
        pieces = pieces[1:]
    else:
        pieces = ["+"] + pieces
    terms: dict[tuple[int, ...], Fraction] = {}
    for sign, body in zip(pieces[::2], pieces[1::2]):
        coef = Fraction(1 if sign == "+" else -1)
        exps = [0] * (nvars + 1)
        for factor in body.split("*"):
            factor = factor.strip()
            if re.fullmatch(r"\d+(/\d+)?", factor):
                coef *= Fraction(factor)
                continue
            m = _FACTOR.match(factor)
            if not m:
                raise ValueError(f"cannot parse factor {factor!r}")
            exps[_var_index(m.group(1), nvars)] += int(m.group(2) or 1)
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + coef
    return LaurentExpr(terms, nvars)


def parse_ratfunc(text: str, nvars: int) -> "RatFunc":
    text = text.strip()
    m = re.fullmatch(r"\((.*)\)/\((.*)\)", text)
    if m:
        return RatFunc(parse_laurent(m.group(1), nvars), parse_laurent(m.group(2), nvars))
    return RatFunc(parse_laurent(text, nvars))


# ---------------------------------------------------------------------------
# sympy bridge: polynomial gcd / exact division
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _ring(nvars: int):
    R, *_ = ring(",".join(var_names(nvars)), QQ)
    return R


def _to_poly(e: LaurentExpr):
    R = _ring(e.nvars)
    return R.from_dict({k: QQ(c.numerator, c.denominator) for k, c in e._terms.items()})


def _from_poly(p, nvars: int) -> LaurentExpr:
    return LaurentExpr._make(
        {tuple(k): Fraction(int(c.numerator), int(c.denominator)) for k, c in p.items()}, nvars
    )


def laurent_exquo(a: LaurentExpr, b: LaurentExpr) -> LaurentExpr:
    """Exact quotient ``a / b`` in the Laurent ring; raises InexactDivision otherwise."""
    if b.is_zero():
        raise DivisionByZero("exact division by zero")
    if a.nvars != b.nvars:
        raise VarMismatch("nvars differ")
    if a.is_zero():
        return a
    amin, bmin = a.min_exponents(), b.min_exponents()
    a1 = a.shift([-e for e in amin])
    b1 = b.shift([-e for e in bmin])
    if b1.is_constant():
        quo = a1 * (1 / b1.constant_value())
    else:
        try:
            quo = _from_poly(_to_poly(a1).exquo(_to_poly(b1)), a.nvars)
        except Exception as exc:  # sympy raises ExactQuotientFailed
            raise InexactDivision(f"{b} does not divide {a}") from exc
    return quo.shift([x - y for x, y in zip(amin, bmin)])


def _lex_leading(e: LaurentExpr) -> Fraction:
    return e._terms[max(e._terms)]


def _primitive_scale(e: LaurentExpr) -> Fraction:
    """Scalar making ``e`` a primitive integer polynomial with positive lex-leading coefficient."""
    den_lcm = 1
    for c in e._terms.values():
        den_lcm = den_lcm * c.denominator // gcd(den_lcm, c.denominator)
    num_gcd = 0
    for c in e._terms.values():
        num_gcd = gcd(num_gcd, (c * den_lcm).numerator)
    scale = Fraction(den_lcm, num_gcd)
    return -scale if _lex_leading(e) < 0 else scale


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

class RatFunc:
    """Quotient ``num / den`` of Laurent polynomials in canonical form.

    Canonical form: ``num`` and ``den`` coprime, ``den`` an honest polynomial
    not divisible by any variable, with coprime integer coefficients and a
    positive lexicographically-leading coefficient.  Under these rules equal
    rational functions have identical ``(num, den)``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1, nvars: int | None = None):
        if isinstance(num, RatFunc) and isinstance(den, int) and den == 1:
            self.num, self.den = num.num, num.den
            return
        if nvars is None:
            for v in (num, den):
                if isinstance(v, (LaurentExpr, RatFunc)):
                    nvars = v.nvars
                    break
            else:
                nvars = 0
        if isinstance(num, RatFunc) or isinstance(den, RatFunc):
            r = _as_ratfunc(num, nvars) / _as_ratfunc(den, nvars)
            self.num, self.den = r.num, r.den
            return
        n = _as_laurent(num, nvars)
        d = _as_laurent(den, nvars)
        if n.nvars != d.nvars:
            raise VarMismatch(f"nvars {n.nvars} vs {d.nvars}")
        self.num, self.den = _canonicalize(n, d)

    @classmethod
    def _raw(cls, num: LaurentExpr, den: LaurentExpr) -> "RatFunc":
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den.is_constant()

    def to_laurent(self) -> LaurentExpr:
        if not self.is_laurent():
            raise InexactDivision(f"{self} is not a Laurent polynomial")
        return self.num * (1 / self.den.constant_value())

    def _coerce(self, other) -> "RatFunc | None":
        if isinstance(other, RatFunc):
            if other.nvars != self.nvars:
                raise VarMismatch(f"nvars {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (LaurentExpr, int, Fraction)):
            return _as_ratfunc(other, self.nvars)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero():
            return o
        if o.is_zero():
            return self
        if self.den == o.den:
            return RatFunc._from_parts(self.num + o.num, self.den)
        if self.den.is_constant() or o.den.is_constant():
            return RatFunc._from_parts(self.num * o.den + o.num * self.den, self.den * o.den)
        g, bq, dq = _cofactors(self.den, o.den)
        return RatFunc._from_parts(self.num * dq + o.num * bq, self.den * dq)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return RatFunc._raw(LaurentExpr.const(0, self.nvars), LaurentExpr.const(1, self.nvars))
        if self.is_laurent() and o.is_laurent():
            return RatFunc._from_parts(self.num * o.num, self.den * o.den)
        # cross-cancel: canonical inputs are coprime, so only num_a/den_b and num_b/den_a can share factors
        _, a, d = _cofactors(self.num, o.den)
        _, c, b = _cofactors(o.num, self.den)
        return RatFunc._normalize_coprime(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise DivisionByZero("inverse of the zero rational function")
        return RatFunc._normalize_coprime(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise DivisionByZero("division by the zero rational function")
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** -k
        return RatFunc._normalize_coprime(self.num ** k, self.den ** k)

    def permute_x(self, perm: Sequence[int]) -> "RatFunc":
        return RatFunc._normalize_coprime(self.num.permute_x(perm), self.den.permute_x(perm))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, LaurentExpr)):
            other = _as_ratfunc(other, self.nvars)
        if not isinstance(other, RatFunc):
            return NotImplemented
        if other.nvars != self.nvars:
            return False
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def to_text(self, names: Sequence[str] | None = None) -> str:
        if self.den == 1:
            return self.num.to_text(names)
        return f"({self.num.to_text(names)})/({self.den.to_text(names)})"

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"RatFunc({self.to_text()!r}, nvars={self.nvars})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> "RatFunc":
        return cls(LaurentExpr.from_json(data["num"]), LaurentExpr.from_json(data["den"]))

    # -- internal constructors ----------------------------------------
    @classmethod
    def _from_parts(cls, num: LaurentExpr, den: LaurentExpr) -> "RatFunc":
        n, d = _canonicalize(num, den)
        return cls._raw(n, d)

    @classmethod
    def _normalize_coprime(cls, num: LaurentExpr, den: LaurentExpr) -> "RatFunc":
        """Canonical form for a pair already known to be coprime."""
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            return cls._raw(num, LaurentExpr.const(1, num.nvars))
        dmin = den.min_exponents()
        neg = [-e for e in dmin]
        d1 = den.shift(neg)
        n1 = num.shift(neg)
        scale = _primitive_scale(d1)
        return cls._raw(n1 * scale, d1 * scale)


def _as_laurent(v, nvars: int) -> LaurentExpr:
    if isinstance(v, LaurentExpr):
        return v
    if isinstance(v, (int, Fraction)):
        return LaurentExpr.const(v, nvars)
    raise TypeError(f"cannot interpret {type(v).__name__} as a Laurent polynomial")


def _as_ratfunc(v, nvars: int) -> RatFunc:
    if isinstance(v, RatFunc):
        return v
    e = _as_laurent(v, nvars)
    return RatFunc._from_parts(e, LaurentExpr.const(1, e.nvars))


def _cofactors(a: LaurentExpr, b: LaurentExpr):
    """Return ``(g, a/g, b/g)`` for a polynomial gcd ``g`` (monomial factors ignored)."""
    if a.is_zero() or b.is_zero() or a.is_monomial() or b.is_monomial():
        one = LaurentExpr.const(1, a.nvars)
        return one, a, b
    amin, bmin = a.min_exponents(), b.min_exponents()
    a1 = a.shift([-e for e in amin])
    b1 = b.shift([-e for e in bmin])
    g, aq, bq = _to_poly(a1).cofactors(_to_poly(b1))
    nv = a.nvars
    return _from_poly(g, nv), _from_poly(aq, nv).shift(amin), _from_poly(bq, nv).shift(bmin)


def _canonicalize(num: LaurentExpr, den: LaurentExpr) -> tuple[LaurentExpr, LaurentExpr]:
    if den.is_zero():
        raise DivisionByZero("zero denominator")
    nv = num.nvars
    one = LaurentExpr.const(1, nv)
    if num.is_zero():
        return num, one
    dmin = den.min_exponents()
    neg = [-e for e in dmin]
    d1 = den.shift(neg)
    if d1.is_constant():
        return num.shift(neg) * (1 / d1.constant_value()), one
    nmin = num.min_exponents()
    n1 = num.shift([-e for e in nmin])
    if not n1.is_constant():
        _, P, Q = _to_poly(n1).cofactors(_to_poly(d1))
        n1, d1 = _from_poly(P, nv), _from_poly(Q, nv)
        if d1.is_constant():
            c = d1.constant_value()
            return n1.shift([a - b for a, b in zip(nmin, dmin)]) * (1 / c), one
    scale = _primitive_scale(d1)
    return n1.shift([a - b for a, b in zip(nmin, dmin)]) * scale, d1 * scale


def arith(a, op: str, b) -> RatFunc:
    """Exact ``a <op> b`` for op in add/sub/mul/div, always returning a canonical RatFunc."""
    nv = a.nvars if isinstance(a, (LaurentExpr, RatFunc)) else getattr(b, "nvars", 0)
    ra, rb = _as_ratfunc(a, nv), _as_ratfunc(b, nv)
    if ra.nvars != rb.nvars:
        raise VarMismatch(f"nvars {ra.nvars} vs {rb.nvars}")
    if op == "add":
        return ra + rb
    if op == "sub":
        return ra - rb
    if op == "mul":
        return ra * rb
    if op == "div":
        return ra / rb
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# substitution
# ---------------------------------------------------------------------------

def substitute(e, bindings: Mapping, nvars: int | None = None) -> RatFunc:
    """Substitute variables of ``e`` by expressions or rationals.

    ``bindings`` maps variable names (``"q"``, ``"x1"``, ...) or slot indices
    to LaurentExpr / RatFunc / rational values.  The result lives in
    ``nvars`` x-variables (default: that of the bound expressions, else of
    ``e``); unbound variables keep their slot.
    """
    src = _as_ratfunc(e, getattr(e, "nvars", 0))
    sn = src.nvars
    idx_bind = {}
    for key, val in bindings.items():
        try:
            idx = _var_index(key, sn)
        except VarMismatch:
            continue  # bindings for absent variables are ignored
        idx_bind[idx] = val
    if nvars is None:
        for val in idx_bind.values():
            if isinstance(val, (LaurentExpr, RatFunc)):
                nvars = val.nvars
                break
        else:
            nvars = sn
    images: list[tuple[LaurentExpr, LaurentExpr]] = []
    for i in range(sn + 1):
        if i in idx_bind:
            val = idx_bind[i]
            if isinstance(val, RatFunc):
                if val.nvars != nvars:
                    raise VarMismatch("binding has wrong nvars")
                images.append((val.num, val.den))
            else:
                v = _as_laurent(val, nvars)
                if v.nvars != nvars:
                    raise VarMismatch("binding has wrong nvars")
                images.append((v, LaurentExpr.const(1, nvars)))
        else:
            if i > nvars:
                raise VarMismatch(f"unbound variable slot {i} does not exist in target nvars={nvars}")
            images.append((LaurentExpr.var(i, nvars), LaurentExpr.const(1, nvars)))

    # write src = N/D with N, D honest polynomials
    lift = [max(0, -m) for m in src.num.min_exponents()]
    N = src.num.shift(lift)
    D = src.den.shift(lift)
    top = [max(a, b) for a, b in zip(N.max_exponents(), D.max_exponents())]
    cache: dict[tuple[int, int, int], LaurentExpr] = {}

    def power(i: int, e: int, which: int) -> LaurentExpr:
        key = (i, e, which)
        if key not in cache:
            cache[key] = images[i][which] ** e
        return cache[key]

    def image(P: LaurentExpr) -> LaurentExpr:
        acc = LaurentExpr.const(0, nvars)
        for k, c in P._terms.items():
            term = LaurentExpr.const(c, nvars)
            for i, e in enumerate(k):
                if images[i][1] == 1:
                    if e:
                        term = term * power(i, e, 0)
                else:
                    if e:
                        term = term * power(i, e, 0)
                    if top[i] - e:
                        term = term * power(i, top[i] - e, 1)
            acc = acc + term
        return acc

    num_img, den_img = image(N), image(D)
    if den_img.is_zero():
        raise SpecializationPole("denominator vanishes identically under the substitution")
    return RatFunc._from_parts(num_img, den_img)


# ---------------------------------------------------------------------------
# truncated series
# ---------------------------------------------------------------------------

class TruncatedSeries:
    """Power series known exactly for every monomial of graded weight <= ``order``."""

    __slots__ = ("coeffs", "grading", "order", "nvars")

    def __init__(self, coeffs: Mapping, grading: Sequence[Number], order: Number, nvars: int):
        self.grading = tuple(_frac(w) for w in grading)
        self.order = _frac(order)
        self.nvars = nvars
        kept = {tuple(k): _frac(v) for k, v in coeffs.items() if v and self.weight(k) <= self.order}
        self.coeffs = MappingProxyType(dict(sorted(kept.items())))

    def weight(self, exps: Sequence[int]) -> Fraction:
        return sum((w * e for w, e in zip(self.grading, exps)), Fraction(0))

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        exps = tuple(exps)
        if self.weight(exps) > self.order:
            raise ValueError(f"monomial {exps} lies beyond the truncation order")
        return self.coeffs.get(exps, Fraction(0))

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if other.grading != self.grading or other.nvars != self.nvars:
            raise VarMismatch("series with different grading or nvars")
        order = min(self.order, other.order)
        out = _mul_trunc(dict(self.coeffs), dict(other.coeffs), self.grading, order)
        return TruncatedSeries(out, self.grading, order, self.nvars)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.grading, self.order, self.nvars, dict(self.coeffs)) == (
            other.grading, other.order, other.nvars, dict(other.coeffs))

    def __repr__(self) -> str:
        return f"TruncatedSeries({LaurentExpr._make(dict(self.coeffs), self.nvars)}, order={self.order})"

    def to_json(self) -> dict:
        return {
            "grading": [str(w) for w in self.grading],
            "order": str(self.order),
            "coeffs": [[list(k), str(v)] for k, v in self.coeffs.items()],
        }


def _weight(grading: Sequence[Fraction], exps: Sequence[int]) -> Fraction:
    return sum((w * e for w, e in zip(grading, exps)), Fraction(0))


def _mul_trunc(a: dict, b: dict, grading, bound) -> dict:
    wb = {k: _weight(grading, k) for k in b}
    out: dict = {}
    for ka, ca in a.items():
        wa = _weight(grading, ka)
        for kb, cb in b.items():
            if wa + wb[kb] > bound:
                continue
            k = tuple([x + y for x, y in zip(ka, kb)])
            out[k] = out.get(k, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def series_expand(e, grading, order: Number, laurent: bool = False) -> TruncatedSeries:
    """Expand ``e`` as a power series graded by ``grading`` up to weight ``order``.

    ``grading`` assigns a non-negative weight to every variable (sequence of
    length ``nvars + 1`` or a mapping from names).  The denominator must
    consist of a single weight-0 monomial plus terms of positive weight.
    Monomial factors of negative weight (``1/u``) count as a vanishing
    constant term unless ``laurent`` allows a finite principal part.
    """
    r = _as_ratfunc(e, getattr(e, "nvars", 0))
    nv = r.nvars
    if isinstance(grading, Mapping):
        w = [Fraction(0)] * (nv + 1)
        for key, val in grading.items():
            w[_var_index(key, nv)] = _frac(val)
    else:
        if len(grading) != nv + 1:
            raise VarMismatch("grading must give one weight per variable")
        w = [_frac(g) for g in grading]
    if any(x < 0 for x in w):
        raise ValueError("weights must be non-negative")
    order = _frac(order)

    den_w = {k: _weight(w, k) for k in r.den._terms}
    if min(den_w.values()) < 0:
        raise NoUnitConstantTerm("denominator has terms of negative weight")
    zero_part = [k for k, x in den_w.items() if x == 0]
    if not zero_part:
        raise NoUnitConstantTerm("weight-0 part of the denominator vanishes")
    if len(zero_part) > 1:
        raise NoUnitConstantTerm("weight-0 part of the denominator is not a unit monomial")
    k0 = zero_part[0]
    c0 = r.den._terms[k0]
    neg0 = [-x for x in k0]
    # den = d0 * (1 + E), every term of E has positive weight
    E = {k: v / c0 for k, v in r.den.shift(neg0)._terms.items() if any(k)}
    if not r.num._terms:
        return TruncatedSeries({}, w, order, nv)
    num_min = min(_weight(w, k) for k in r.num._terms)
    if num_min < 0 and not laurent:
        raise NoUnitConstantTerm("expression has a pole of negative weight")
    bound = order - num_min
    inv: dict = {(0,) * (nv + 1): Fraction(1)}
    if E:
        e_min = min(_weight(w, k) for k in E)
        minus_e = {k: -v for k, v in E.items()}
        power = dict(inv)
        kmax = int(bound // e_min) if bound >= 0 else 0
        for _ in range(kmax):
            power = _mul_trunc(power, minus_e, w, bound)
            if not power:
                break
            for k, v in power.items():
                inv[k] = inv.get(k, 0) + v
    prod = _mul_trunc(dict(r.num.shift(neg0)._terms), inv, w, order)
    return TruncatedSeries({k: v / c0 for k, v in prod.items()}, w, order, nv)
