"""Finite quotient rings O/p^m and O'/p^m, plus exact numbers of Q and Q(sqrt(rho)).

The uniformizer is taken to be ``p`` itself; the unramified quadratic
extension is ``O' = O[X]/(X^2 - rho)`` with ``rho`` a quadratic
non-residue mod ``p``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np
from sympy import isprime


def legendre(a: int, p: int) -> int:
    """Legendre symbol by Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def smallest_nonresidue(p: int) -> int:
    for r in range(2, p):
        if legendre(r, p) == -1:
            return r
    raise ValueError(f"no quadratic non-residue mod {p}")


@dataclass(frozen=True)
class PAdicConfig:
    """Odd prime ``p``, level ``m`` and whether to work in the unramified quadratic extension."""

    p: int
    m: int
    extension: bool = False
    rho: int = 0

    def __post_init__(self):
        if self.p % 2 == 0 or not isprime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.m < 1:
            raise ValueError("level must be at least 1")
        if self.rho == 0:
            object.__setattr__(self, "rho", smallest_nonresidue(self.p))
        elif legendre(self.rho, self.p) != -1:
            raise ValueError(f"{self.rho} is not a quadratic non-residue mod {self.p}")

    @property
    def modulus(self) -> int:
        return self.p ** self.m

    @property
    def residue_card(self) -> int:
        """Cardinality of the residue field of the ring being enumerated."""
        return self.p ** 2 if self.extension else self.p

    @property
    def q(self) -> int:
        """Residue cardinality of the base field; the closed forms are specialized at this."""
        return self.p

    @property
    def ring_size(self) -> int:
        return self.modulus ** (2 if self.extension else 1)

    def with_level(self, m: int) -> "PAdicConfig":
        return PAdicConfig(self.p, m, self.extension, self.rho)

    def with_extension(self, extension: bool) -> "PAdicConfig":
        return PAdicConfig(self.p, self.m, extension, self.rho)

    @cached_property
    def valuation_table(self) -> np.ndarray:
        """``table[a] = v_p(a)`` for ``0 < a < p^m``; ``table[0] = m`` (the undetermined marker)."""
        M = self.modulus
        table = np.full(M, self.m, dtype=np.int64)
        a = np.arange(1, M, dtype=np.int64)
        v = np.zeros_like(a)
        rest = a.copy()
        for _ in range(self.m):
            hit = rest % self.p == 0
            v += hit
            rest = np.where(hit, rest // self.p, rest)
        table[1:] = v
        return table

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "extension": self.extension, "rho": self.rho}


def gl_order(N: int, Q: int, m: int) -> int:
    """``|GL_N(R)|`` for a local ring R of length m with residue field of size Q."""
    out = Q ** (N * N * (m - 1))
    for i in range(N):
        out *= Q ** N - Q ** i
    return out


def pval(x: Fraction, p: int) -> int | None:
    """p-adic valuation of a rational; None for zero."""
    x = Fraction(x)
    if x == 0:
        return None
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


# ---------------------------------------------------------------------------
# exact elements of Q(sqrt(rho)) (b = 0 gives Q itself)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Quad:
    """``a + b*X`` with ``X^2 = rho``, rational a and b."""

    a: Fraction
    b: Fraction = Fraction(0)
    rho: int = 0

    @classmethod
    def of(cls, v, rho: int) -> "Quad":
        if isinstance(v, Quad):
            return v
        if isinstance(v, tuple):
            return cls(Fraction(v[0]), Fraction(v[1]), rho)
        return cls(Fraction(v), Fraction(0), rho)

    def __add__(self, o: "Quad") -> "Quad":
        return Quad(self.a + o.a, self.b + o.b, self.rho)

    def __sub__(self, o: "Quad") -> "Quad":
        return Quad(self.a - o.a, self.b - o.b, self.rho)

    def __neg__(self) -> "Quad":
        return Quad(-self.a, -self.b, self.rho)

    def __mul__(self, o: "Quad") -> "Quad":
        return Quad(self.a * o.a + self.rho * self.b * o.b, self.a * o.b + self.b * o.a, self.rho)

    def conj(self) -> "Quad":
        return Quad(self.a, -self.b, self.rho)

    def norm(self) -> Fraction:
        return self.a * self.a - self.rho * self.b * self.b

    def inverse(self) -> "Quad":
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("inverse of zero")
        return Quad(self.a / nrm, -self.b / nrm, self.rho)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def valuation(self, p: int) -> int | None:
        """Valuation in the unramified extension (equals that of the base on Q)."""
        va, vb = pval(self.a, p), pval(self.b, p)
        vals = [v for v in (va, vb) if v is not None]
        return min(vals) if vals else None


Matrix = list  # list of rows of Quad


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    return [[_dot([A[i][k] for k in range(len(B))], [B[k][j] for k in range(len(B))])
             for j in range(len(B[0]))] for i in range(len(A))]


def _dot(xs, ys):
    acc = xs[0] * ys[0]
    for x, y in zip(xs[1:], ys[1:]):
        acc = acc + x * y
    return acc


def transpose(A: Matrix) -> Matrix:
    return [list(r) for r in zip(*A)]


def conj_transpose(A: Matrix) -> Matrix:
    return [[v.conj() for v in r] for r in zip(*A)]


def det(A: Matrix):
    """Determinant by cofactor expansion (matrices here are at most 6x6)."""
    n = len(A)
    if n == 1:
        return A[0][0]
    if n == 2:
        return A[0][0] * A[1][1] - A[0][1] * A[1][0]
    acc = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in A[1:]]
        term = A[0][j] * det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def pfaffian(A: Matrix):
    """Pfaffian of an alternating matrix of even size by expansion along the first row."""
    n = len(A)
    if n == 0:
        raise ValueError("empty matrix")
    if n == 2:
        return A[0][1]
    acc = None
    for j in range(1, n):
        keep = [k for k in range(1, n) if k != j]
        minor = [[A[r][c] for c in keep] for r in keep]
        term = A[0][j] * pfaffian(minor)
        if j % 2 == 0:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def mat_inverse_2x2(A: Matrix) -> Matrix:
    d = det(A)
    if d.is_zero():
        raise ZeroDivisionError("singular matrix")
    di = d.inverse()
    return [[A[1][1] * di, -A[0][1] * di], [-A[1][0] * di, A[0][0] * di]]


def mat_inverse(A: Matrix) -> Matrix:
    """Gauss-Jordan inverse over Q(sqrt(rho))."""
    n = len(A)
    rho = A[0][0].rho
    zero, one = Quad(Fraction(0), Fraction(0), rho), Quad(Fraction(1), Fraction(0), rho)
    aug = [list(A[i]) + [one if i == j else zero for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def reduce_mod(x: Fraction, p: int, modulus: int) -> int:
    """Image of a p-integral rational in Z/modulus."""
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ValueError(f"{x} is not p-integral")
    return x.numerator * pow(x.denominator, -1, modulus) % modulus
