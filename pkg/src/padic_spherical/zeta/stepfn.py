"""Finite-level Schwartz-Bruhat functions on k and k^2, and their Fourier transforms.

A :class:`StepFunction` with window ``(lo, hi)`` vanishes outside
``pi^lo O`` (per coordinate) and is constant on cosets of ``pi^hi O``.
Cells are indexed by ``a`` in ``Z/p^N``, ``N = hi - lo``, standing for
``a * p^lo + p^hi O``; the uniformizer is ``p``.  The additive character
has conductor 0: ``eta(x) = exp(2 pi i {x}_p)``, trivial exactly on O.
Measures are self-dual, so ``vol(O) = 1``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

from ..errors import WindowOverflow
from .cyclotomic import Cyclo


def _val(c: int, p: int) -> int | None:
    if c == 0:
        return None
    v = 0
    while c % p == 0:
        c //= p
        v += 1
    return v


@dataclass(frozen=True)
class StepFunction:
    p: int
    lo: int
    hi: int
    dim: int
    values: tuple  # Cyclo per cell, row-major over the dim coordinates

    def __post_init__(self):
        if self.hi < self.lo:
            raise ValueError("window must satisfy lo <= hi")
        if self.dim not in (1, 2):
            raise ValueError("only dimensions 1 and 2 are supported")
        if len(self.values) != self.cells ** self.dim:
            raise ValueError("wrong number of cell values")
        fields = {v.N for v in self.values}
        if len(fields) != 1:
            raise ValueError("cell values live in different cyclotomic fields")

    @property
    def N(self) -> int:
        return self.hi - self.lo

    @property
    def cells(self) -> int:
        return self.p ** self.N

    @property
    def field(self) -> int:
        return self.values[0].N

    def indices(self):
        return product(range(self.cells), repeat=self.dim)

    def flat(self, idx: Sequence[int]) -> int:
        out = 0
        for a in idx:
            out = out * self.cells + a
        return out

    def value(self, idx: Sequence[int]) -> Cyclo:
        return self.values[self.flat(idx)]

    # -- point evaluation ---------------------------------------------
    def _coord_cell(self, c: int, k: int) -> int | None:
        """Cell of the point ``c * p^k``, or None when it lies outside ``pi^lo O``."""
        v = _val(c, self.p)
        if v is None:
            return 0
        if v + k < self.lo:
            return None
        if k >= self.lo:
            return c * self.p ** (k - self.lo) % self.cells
        return (c // self.p ** (self.lo - k)) % self.cells

    def evaluate(self, point: Sequence[tuple[int, int]]) -> Cyclo:
        """Value at the point whose coordinates are ``c * p^k`` given as ``(c, k)`` pairs."""
        idx = []
        for c, k in point:
            cell = self._coord_cell(c, k)
            if cell is None:
                return Cyclo.rational(self.p, self.field, 0)
            idx.append(cell)
        return self.value(idx)

    # -- structure ----------------------------------------------------
    def lift_field(self, N: int) -> "StepFunction":
        return StepFunction(self.p, self.lo, self.hi, self.dim, tuple(v.lift(N) for v in self.values))

    def rewindow(self, lo: int, hi: int) -> "StepFunction":
        """Re-express on another window; WindowOverflow if the function does not fit."""
        if hi < lo:
            raise ValueError("window must satisfy lo <= hi")
        cells = self.p ** (hi - lo)
        new = []
        for idx in product(range(cells), repeat=self.dim):
            new.append(self.evaluate([(a, lo) for a in idx]))
        out = StepFunction(self.p, lo, hi, self.dim, tuple(new))
        # compare on the common refinement of both windows
        clo, chi = min(lo, self.lo), max(hi, self.hi)
        for idx in product(range(self.p ** (chi - clo)), repeat=self.dim):
            point = [(a, clo) for a in idx]
            if out.evaluate(point) != self.evaluate(point).lift(max(out.field, self.field)):
                raise WindowOverflow(f"function does not fit the window ({lo}, {hi})")
        return out

    def _common(self, other: "StepFunction"):
        if (self.p, self.dim) != (other.p, other.dim):
            raise ValueError("incompatible step functions")
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        F = max(self.field, other.field)
        return self.rewindow(lo, hi).lift_field(F), other.rewindow(lo, hi).lift_field(F)

    def __add__(self, other: "StepFunction") -> "StepFunction":
        a, b = self._common(other)
        return StepFunction(a.p, a.lo, a.hi, a.dim, tuple(x + y for x, y in zip(a.values, b.values)))

    def scale(self, c) -> "StepFunction":
        return StepFunction(self.p, self.lo, self.hi, self.dim, tuple(v * Fraction(c) for v in self.values))

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        return self + other.scale(-1)

    def reflect(self) -> "StepFunction":
        """``v -> phi(-v)``."""
        vals = [None] * len(self.values)
        for idx in self.indices():
            neg = tuple((-a) % self.cells for a in idx)
            vals[self.flat(idx)] = self.value(neg)
        return StepFunction(self.p, self.lo, self.hi, self.dim, tuple(vals))

    def __eq__(self, other) -> bool:
        if not isinstance(other, StepFunction):
            return NotImplemented
        try:
            a, b = self._common(other)
        except WindowOverflow:
            return False
        return a.values == b.values

    def __hash__(self):
        return hash((self.p, self.dim, self.lo, self.hi))

    def is_rational(self) -> bool:
        return all(v.is_rational() for v in self.values)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "window": [self.lo, self.hi],
            "dim": self.dim,
            "values": [v.to_json() for v in self.values],
        }


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def from_rationals(p: int, lo: int, hi: int, dim: int, values: Sequence) -> StepFunction:
    return StepFunction(p, lo, hi, dim, tuple(Cyclo.rational(p, 0, Fraction(v)) for v in values))


def ball(p: int, a: int = 0, dim: int = 1) -> StepFunction:
    """Indicator of ``(pi^a O)^dim``."""
    return from_rationals(p, a, a, dim, [1])


def shell(p: int, a: int = 0) -> StepFunction:
    """Indicator of ``pi^a O^x`` on the line."""
    return from_rationals(p, a, a + 1, 1, [0] + [1] * (p - 1))


def random_step_function(rng: random.Random, p: int, dim: int = 1, max_width: int = 2) -> StepFunction:
    lo = rng.randint(-1, 1)
    hi = lo + rng.randint(0, max_width)
    n_cells = (p ** (hi - lo)) ** dim
    vals = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n_cells)]
    return from_rationals(p, lo, hi, dim, vals)


# ---------------------------------------------------------------------------
# Fourier transform
# ---------------------------------------------------------------------------

def _pairing(kernel: str, dim: int) -> Callable:
    if dim == 1:
        return lambda a, c: a[0] * c[0]
    if kernel == "symplectic":
        return lambda a, c: a[0] * c[1] - a[1] * c[0]
    if kernel == "dot":
        return lambda a, c: a[0] * c[0] + a[1] * c[1]
    raise ValueError(f"unknown kernel {kernel!r}")


def fourier_finite(phi: StepFunction, kernel: str = "symplectic", window=None) -> StepFunction:
    """``F(phi)(w) = integral of phi(v) eta(<v, w>) dv`` with self-dual measure.

    The result lives on the window ``(-hi, -lo)``.  In dimension 2 the
    pairing is ``v1 w2 - v2 w1`` (``kernel="symplectic"``) or the dot
    product.  Passing ``window`` re-expresses the result there, raising
    WindowOverflow if it does not fit.
    """
    p, N, dim = phi.p, phi.N, phi.dim
    L = max(phi.field, N)
    pair = _pairing(kernel, dim)
    volume = Fraction(p) ** (-phi.hi * dim)
    lifted = [v.lift(L) for v in phi.values]
    root_step = p ** (L - N)
    out = []
    for c in product(range(phi.cells), repeat=dim):
        powers: dict = {}
        for a in phi.indices():
            val = lifted[phi.flat(a)]
            if val.is_zero():
                continue
            shift = pair(a, c) * root_step
            for i, coef in enumerate(val.coeffs):
                if coef:
                    powers[i + shift] = powers.get(i + shift, 0) + coef
        out.append(Cyclo.from_powers(p, L, powers) * volume)
    result = StepFunction(p, -phi.hi, -phi.lo, dim, tuple(out))
    if window is not None:
        result = result.rewindow(*window)
    return result
