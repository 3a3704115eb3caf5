"""Exact arithmetic in the cyclotomic field Q(zeta_{p^N})."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping


class Cyclo:
    """Element of Q(zeta) with zeta a primitive ``p^N``-th root of unity.

    Stored in the power basis ``1, zeta, ..., zeta^{phi-1}``, where
    ``phi = (p-1) p^{N-1}``; the representation is unique, so equality is
    coefficient-wise.  ``N = 0`` is Q itself.
    """

    __slots__ = ("p", "N", "coeffs")

    def __init__(self, p: int, N: int, coeffs):
        self.p, self.N = p, N
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != self.phi:
            raise ValueError(f"expected {self.phi} coefficients")
        self.coeffs = coeffs

    @property
    def order(self) -> int:
        return self.p ** self.N

    @property
    def phi(self) -> int:
        return 1 if self.N == 0 else (self.p - 1) * self.p ** (self.N - 1)

    @classmethod
    def rational(cls, p: int, N: int, c) -> "Cyclo":
        phi = 1 if N == 0 else (p - 1) * p ** (N - 1)
        return cls(p, N, (Fraction(c),) + (Fraction(0),) * (phi - 1))

    @classmethod
    def from_powers(cls, p: int, N: int, powers: Mapping[int, Fraction]) -> "Cyclo":
        """``sum_e powers[e] * zeta^e`` for arbitrary integer exponents e."""
        order = p ** N
        phi = 1 if N == 0 else (p - 1) * p ** (N - 1)
        out = [Fraction(0)] * phi
        step = p ** (N - 1) if N else 0
        for e, c in powers.items():
            if not c:
                continue
            e %= order
            if e < phi:
                out[e] += c
            else:
                r = e - phi
                for j in range(p - 1):
                    out[r + j * step] -= c
        return cls(p, N, out)

    def _check(self, other: "Cyclo") -> None:
        if (self.p, self.N) != (other.p, other.N):
            raise ValueError("elements of different cyclotomic fields")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclo.rational(self.p, self.N, other)
        self._check(other)
        return Cyclo(self.p, self.N, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.p, self.N, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, Cyclo) else -Fraction(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclo(self.p, self.N, [a * other for a in self.coeffs])
        self._check(other)
        powers: dict = {}
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    powers[i + j] = powers.get(i + j, 0) + a * b
        return Cyclo.from_powers(self.p, self.N, powers)

    __rmul__ = __mul__

    def times_root(self, k: int) -> "Cyclo":
        """Multiply by ``zeta^k``."""
        return Cyclo.from_powers(self.p, self.N, {i + k: a for i, a in enumerate(self.coeffs) if a})

    def lift(self, N: int) -> "Cyclo":
        """The same number viewed in Q(zeta_{p^N}) for ``N >= self.N``."""
        if N < self.N:
            raise ValueError("cannot lift to a smaller field")
        if N == self.N:
            return self
        scale = self.p ** (N - self.N)
        return Cyclo.from_powers(self.p, N, {i * scale: a for i, a in enumerate(self.coeffs) if a})

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("cyclotomic element is not rational")
        return self.coeffs[0]

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, Cyclo):
            return NotImplemented
        return (self.p, self.N, self.coeffs) == (other.p, other.N, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.p, self.N, self.coeffs))

    def __repr__(self) -> str:
        if self.is_rational():
            return f"Cyclo({self.coeffs[0]})"
        terms = [f"{c}*z^{i}" for i, c in enumerate(self.coeffs) if c]
        return f"Cyclo({' + '.join(terms)}; z^{self.order}=1)"

    def to_json(self):
        if self.is_rational():
            return str(self.coeffs[0])
        return {"root_order": self.order, "coeffs": [str(c) for c in self.coeffs]}
