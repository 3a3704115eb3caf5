"""Symmetric-group combinatorics, split c-functions and the s <-> z coordinate maps."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterator, Sequence

from .algebra import LaurentExpr, RatFunc
from .errors import BadLength, SpecializationPole
from .hall_littlewood import embed


@dataclass(frozen=True)
class WeylElement:
    """Permutation of ``{1..n}`` in one-line notation: ``perm[i-1] = sigma(i)``."""

    perm: tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise ValueError(f"not a permutation of 1..{len(perm)}: {perm}")
        object.__setattr__(self, "perm", perm)

    @classmethod
    def identity(cls, n: int) -> "WeylElement":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def longest(cls, n: int) -> "WeylElement":
        return cls(tuple(range(n, 0, -1)))

    @classmethod
    def parse(cls, text: str) -> "WeylElement":
        return cls(tuple(int(s) for s in text.split(",") if s.strip()))

    @property
    def n(self) -> int:
        return len(self.perm)

    def __call__(self, i: int) -> int:
        return self.perm[i - 1]

    def inversions(self) -> list[tuple[int, int]]:
        """Pairs ``(i, j)``, ``i < j``, with ``sigma(i) > sigma(j)``."""
        p = self.perm
        return [(i + 1, j + 1) for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j]]

    @property
    def length(self) -> int:
        return len(self.inversions())

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        """Composition: ``(self * other)(i) = self(other(i))``."""
        if other.n != self.n:
            raise BadLength("permutations of different sizes")
        return WeylElement(tuple(self.perm[j - 1] for j in other.perm))

    def inverse(self) -> "WeylElement":
        inv = [0] * self.n
        for i, p in enumerate(self.perm, start=1):
            inv[p - 1] = i
        return WeylElement(tuple(inv))

    def __str__(self) -> str:
        return ",".join(map(str, self.perm))


def all_elements(n: int) -> Iterator[WeylElement]:
    for p in permutations(range(1, n + 1)):
        yield WeylElement(p)


def _param(t: LaurentExpr, n: int) -> LaurentExpr:
    return embed(t, n)


def poincare_sum(n: int, t: LaurentExpr) -> LaurentExpr:
    """Length generating polynomial of S_n at ``t``: prod_{k=1}^{n} (1 + t + ... + t^{k-1})."""
    one = LaurentExpr.const(1, t.nvars)
    out = one
    for k in range(1, n + 1):
        block = LaurentExpr.const(0, t.nvars)
        for e in range(k):
            block = block + t ** e
        out = out * block
    return out


def c_factor(t, X) -> RatFunc:
    """``(1 - t X) / (1 - X)``."""
    X = RatFunc(X)
    one = RatFunc(1, nvars=X.nvars)
    den = one - X
    if den.is_zero():
        raise SpecializationPole("c-factor evaluated at X = 1")
    return (one - RatFunc(t, nvars=X.nvars) * X) / den


def root_ratio(i: int, j: int, n: int) -> LaurentExpr:
    """The monomial ``x_j / x_i`` attached to the positive root (i, j)."""
    exps = [0] * (n + 1)
    exps[i] -= 1
    exps[j] += 1
    return LaurentExpr.monomial(exps, 1, n)


def c_sigma(sigma: WeylElement, n: int, t: LaurentExpr) -> RatFunc:
    """Product of c-factors over the inversion pairs of ``sigma``."""
    if sigma.n != n:
        raise BadLength(f"permutation of {sigma.n} letters, expected {n}")
    t = _param(t, n)
    out = RatFunc(1, nvars=n)
    for i, j in sigma.inversions():
        out = out * c_factor(t, root_ratio(i, j, n))
    return out


def gamma_product(n: int, t: LaurentExpr) -> RatFunc:
    """``prod_{i<j} (1 - t x_j/x_i) / (1 - x_j/x_i)``."""
    return c_sigma(WeylElement.longest(n), n, t)


def weyl_act(sigma: WeylElement, e):
    """Substitute ``x_i -> x_{sigma(i)}``; a left action on expressions."""
    if isinstance(e, (LaurentExpr, RatFunc)):
        if e.nvars != sigma.n:
            raise BadLength(f"expression in {e.nvars} variables, permutation of {sigma.n}")
        return e.permute_x(sigma.perm)
    raise TypeError(f"cannot act on {type(e).__name__}")


# ---------------------------------------------------------------------------
# s <-> z coordinate maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VariableMap:
    """Affine map ``s = A z + b`` between z- and s-coordinates of one case."""

    case: str
    matrix: tuple[tuple[Fraction, ...], ...]
    offset: tuple[Fraction, ...]

    @property
    def n(self) -> int:
        return len(self.offset)

    def z_to_s(self, z: Sequence) -> tuple[Fraction, ...]:
        if len(z) != self.n:
            raise BadLength(f"expected {self.n} coordinates, got {len(z)}")
        z = [Fraction(v) for v in z]
        return tuple(sum((a * v for a, v in zip(row, z)), Fraction(0)) + b
                     for row, b in zip(self.matrix, self.offset))

    def s_to_z(self, s: Sequence) -> tuple[Fraction, ...]:
        # A is upper triangular with nonzero diagonal: back substitution
        if len(s) != self.n:
            raise BadLength(f"expected {self.n} coordinates, got {len(s)}")
        rhs = [Fraction(v) - b for v, b in zip(s, self.offset)]
        z = [Fraction(0)] * self.n
        for i in range(self.n - 1, -1, -1):
            acc = rhs[i] - sum((self.matrix[i][j] * z[j] for j in range(i + 1, self.n)), Fraction(0))
            z[i] = acc / self.matrix[i][i]
        return tuple(z)


def make_variable_map(case: str, n: int) -> VariableMap:
    if n < 1:
        raise BadLength("rank must be positive")
    rows = []
    for i in range(n):
        row = [Fraction(0)] * n
        row[i] = Fraction(-1)
        if i + 1 < n:
            row[i + 1] = Fraction(1)
        rows.append(tuple(row))
    if case == "alternating":
        offset = [Fraction(-2)] * (n - 1) + [Fraction(n - 1)]
    elif case in ("hermitian", "hermitian_unramified"):
        offset = [Fraction(0)] * n
        case = "hermitian"
    else:
        raise ValueError(f"no variable map for case {case!r}")
    return VariableMap(case, tuple(rows), tuple(offset))


def variable_map(case: str, direction: str, vector: Sequence) -> tuple[Fraction, ...]:
    """Apply the case's affine coordinate change; ``direction`` is ``z->s`` or ``s->z``."""
    vmap = make_variable_map(case, len(vector)) if len(vector) else None
    if vmap is None:
        raise BadLength("empty coordinate vector")
    if direction in ("z->s", "z_to_s"):
        return vmap.z_to_s(vector)
    if direction in ("s->z", "s_to_z"):
        return vmap.s_to_z(vector)
    raise ValueError(f"unknown direction {direction!r}")
