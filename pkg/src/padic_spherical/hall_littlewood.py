"""Hall-Littlewood polynomials by symmetrization, and monomial symmetric functions."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import groupby, permutations
from typing import Iterable, Sequence

from .algebra import LaurentExpr, laurent_exquo, substitute
from .errors import BadLength, VarMismatch


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing integer vector; negative parts are allowed."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be weakly decreasing: {parts}")

    @classmethod
    def parse(cls, text: str) -> "Partition":
        return cls(tuple(int(s) for s in text.split(",") if s.strip()))

    @property
    def n(self) -> int:
        return len(self.parts)

    @cached_property
    def multiplicities(self) -> tuple[tuple[int, int], ...]:
        """Pairs ``(value, multiplicity)`` in decreasing order of value."""
        return tuple((v, len(list(g))) for v, g in groupby(self.parts))

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def weight(self) -> int:
        return sum(self.parts)

    def shifted(self, c: int) -> "Partition":
        return Partition(tuple(p + c for p in self.parts))

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))


def _as_partition(lam) -> Partition:
    return lam if isinstance(lam, Partition) else Partition(tuple(lam))


def embed(e: LaurentExpr, n: int) -> LaurentExpr:
    """View a parameter-only expression (nvars 0) inside the ring with n x-variables."""
    if e.nvars == n:
        return e
    if e.nvars != 0:
        raise VarMismatch(f"cannot embed an expression in {e.nvars} x-variables into {n}")
    pad = (0,) * n
    return LaurentExpr({k + pad: c for k, c in e.terms.items()}, n)


def default_t(n: int) -> LaurentExpr:
    return LaurentExpr.var(0, n)


def w_lambda(lam, t: LaurentExpr) -> LaurentExpr:
    """Product over groups of equal parts of ``(1-t)(1-t^2)...(1-t^m)``."""
    lam = _as_partition(lam)
    one = LaurentExpr.const(1, t.nvars)
    out = one
    for _, mult in lam.multiplicities:
        for i in range(1, mult + 1):
            out = out * (one - t ** i)
    return out


def _sign(perm: Sequence[int]) -> int:
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


def vandermonde(n: int) -> LaurentExpr:
    out = LaurentExpr.const(1, n)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            out = out * (LaurentExpr.x(i, n) - LaurentExpr.x(j, n))
    return out


def x_power(exps: Sequence[int], n: int) -> LaurentExpr:
    return LaurentExpr.monomial((0, *exps), 1, n)


def hl_polynomial(lam, n: int | None = None, t: LaurentExpr | None = None) -> LaurentExpr:
    """Hall-Littlewood P_lambda(x1..xn; t) as an exact Laurent polynomial.

    ``t`` defaults to the slot-0 variable (rendered as ``t`` by
    :meth:`LaurentExpr.to_grouped_text`).  Any expression in q alone
    (nvars 0) or in the full ring may be passed.
    """
    lam = _as_partition(lam)
    if n is None:
        n = lam.n
    if lam.n != n:
        raise BadLength(f"partition has {lam.n} parts, expected {n}")
    t = default_t(n) if t is None else embed(t, n)
    if n == 0:
        return LaurentExpr.const(1, 0)
    if w_lambda(lam, t).is_zero():
        # t a root of unity: the coefficients lie in Z[t], so specialize the generic answer
        generic = hl_polynomial(lam, n)
        return substitute(generic, {0: t}).to_laurent()
    shift = -lam.parts[-1] if lam.parts[-1] < 0 else 0
    if shift:
        base = hl_polynomial(lam.shifted(shift), n, t)
        return base.shift((0,) + (-shift,) * n)

    xs = [LaurentExpr.x(i, n) for i in range(1, n + 1)]
    # x^lam * prod_{i<j} (x_i - t x_j); the symmetrization acts on this by permuting variables
    kernel = x_power(lam.parts, n)
    for i in range(n):
        for j in range(i + 1, n):
            kernel = kernel * (xs[i] - t * xs[j])
    total = LaurentExpr.const(0, n)
    for perm in permutations(range(1, n + 1)):
        total = total + kernel.permute_x(perm) * _sign(perm)
    sym = laurent_exquo(total, vandermonde(n))
    one = LaurentExpr.const(1, n)
    return laurent_exquo(sym * (one - t) ** n, w_lambda(lam, t))


def monomial_sym(lam, n: int | None = None) -> LaurentExpr:
    """Sum of ``x^mu`` over the distinct rearrangements ``mu`` of ``lam``."""
    lam = _as_partition(lam)
    if n is None:
        n = lam.n
    if lam.n != n:
        raise BadLength(f"partition has {lam.n} parts, expected {n}")
    return LaurentExpr({(0, *mu): 1 for mu in set(permutations(lam.parts))}, n)


def monomial_expansion(f: LaurentExpr) -> dict[Partition, LaurentExpr]:
    """Coefficients of a symmetric Laurent polynomial in the monomial symmetric basis.

    Coefficients are polynomials in the slot-0 variable, returned with
    nvars 0.  Raises ValueError if ``f`` is not symmetric.
    """
    n = f.nvars
    coeffs: dict[Partition, dict] = {}
    for k, c in f.terms.items():
        xs = k[1:]
        if tuple(sorted(xs, reverse=True)) != xs:
            continue
        coeffs.setdefault(Partition(xs), {})[(k[0],)] = c
    out = {lam: LaurentExpr(d, 0) for lam, d in coeffs.items()}
    rebuilt = LaurentExpr.const(0, n)
    for lam, coef in out.items():
        rebuilt = rebuilt + embed(coef, n) * monomial_sym(lam, n)
    if rebuilt != f:
        raise ValueError("expression is not symmetric")
    return out


def partitions_in_box(n: int, top: int, bottom: int) -> Iterable[Partition]:
    """All weakly decreasing length-n vectors with entries in ``[bottom, top]``."""
    def rec(prefix, hi):
        if len(prefix) == n:
            yield Partition(tuple(prefix))
            return
        for v in range(hi, bottom - 1, -1):
            yield from rec(prefix + [v], v)
    yield from rec([], top)
