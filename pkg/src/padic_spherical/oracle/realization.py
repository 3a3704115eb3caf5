"""Concrete models of the three homogeneous spaces: action, invariants, representatives."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import BadLength, NotInOpenOrbit
from ..hall_littlewood import Partition, _as_partition
from .rings import (
    Matrix,
    Quad,
    conj_transpose,
    det,
    mat_mul,
    pfaffian,
    pval,
    transpose,
)

CASE_TAGS = {
    "symmetric": "symmetric",
    "symmetric_oracle_only": "symmetric",
    "alternating": "alternating",
    "hermitian": "hermitian",
    "hermitian_unramified": "hermitian",
}


@dataclass(frozen=True)
class CaseRealization:
    """``tag`` is one of symmetric, alternating, hermitian; ``n`` is the number of invariants.

    Symmetric and alternating forms use ``g.x = g x g^t``; hermitian forms
    use ``g.x = g x g^*`` over the unramified quadratic extension.  The
    invariants are leading principal minors, or leading pfaffians of the
    upper-left ``2i x 2i`` blocks for alternating forms.
    """

    tag: str
    n: int

    def __post_init__(self):
        try:
            object.__setattr__(self, "tag", CASE_TAGS[self.tag])
        except KeyError:
            raise ValueError(f"unknown case {self.tag!r}") from None
        if self.n < 1:
            raise BadLength("rank must be positive")

    @property
    def size(self) -> int:
        return 2 * self.n if self.tag == "alternating" else self.n

    @property
    def extension(self) -> bool:
        return self.tag == "hermitian"

    @property
    def rows_per_invariant(self) -> int:
        """The i-th invariant of ``k.x`` depends only on the first ``i * rows_per_invariant`` rows of k."""
        return 2 if self.tag == "alternating" else 1

    def degree(self, i: int) -> int:
        """Homogeneity degree of the i-th invariant in the entries of x."""
        return i

    # -- exact side ---------------------------------------------------
    def representative(self, lam, rho: int, p: int) -> Matrix:
        """``pi^lambda`` with uniformizer ``p``: diagonal, or a block sum of 2x2 alternating blocks."""
        lam = _as_partition(lam)
        if lam.n != self.n:
            raise BadLength(f"partition has {lam.n} parts, case has rank {self.n}")
        N = self.size
        zero = Quad(Fraction(0), Fraction(0), rho)
        x = [[zero] * N for _ in range(N)]
        for i, part in enumerate(lam.parts):
            val = Quad(Fraction(p) ** part, Fraction(0), rho)
            if self.tag == "alternating":
                x[2 * i][2 * i + 1] = val
                x[2 * i + 1][2 * i] = -val
            else:
                x[i][i] = val
        return x

    def act(self, g: Matrix, x: Matrix) -> Matrix:
        if self.tag == "hermitian":
            return mat_mul(mat_mul(g, x), conj_transpose(g))
        return mat_mul(mat_mul(g, x), transpose(g))

    def invariant(self, x: Matrix, i: int):
        if self.tag == "alternating":
            return pfaffian([row[: 2 * i] for row in x[: 2 * i]])
        return det([row[:i] for row in x[:i]])

    def invariants(self, x: Matrix) -> list:
        return [self.invariant(x, i) for i in range(1, self.n + 1)]

    def valuations(self, x: Matrix, p: int) -> list[int | None]:
        out = []
        for f in self.invariants(x):
            out.append(f.valuation(p))
        return out

    def check_form(self, x: Matrix) -> None:
        N = self.size
        if len(x) != N or any(len(r) != N for r in x):
            raise BadLength(f"expected a {N}x{N} matrix")
        for i in range(N):
            for j in range(N):
                a, b = x[i][j], x[j][i]
                if self.tag == "symmetric" and a != b:
                    raise ValueError("matrix is not symmetric")
                if self.tag == "alternating" and a != -b:
                    raise ValueError("matrix is not alternating")
                if self.tag == "hermitian" and a != b.conj():
                    raise ValueError("matrix is not hermitian")


def integral_scaling(x: Matrix, p: int) -> int:
    """Smallest ``e >= 0`` with ``p^e x`` p-integral."""
    e = 0
    for row in x:
        for v in row:
            for comp in (v.a, v.b):
                val = pval(comp, p)
                if val is not None and -val > e:
                    e = -val
    return e


def top_valuation(case: CaseRealization, x: Matrix, p: int) -> int:
    """Exact valuation of the last invariant, which is constant on the K-orbit of x."""
    f = case.invariant(x, case.n)
    v = f.valuation(p)
    if v is None:
        raise NotInOpenOrbit("the top invariant vanishes: x is singular")
    return v


def parse_matrix(rows: Sequence[Sequence], rho: int) -> Matrix:
    """Build a matrix of Quad from rationals or (a, b) pairs."""
    return [[Quad.of(v, rho) for v in row] for row in rows]
