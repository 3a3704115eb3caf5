"""Local zeta integrals of step functions, Tate gamma factors and the lattice scaling identity.

Zeta integrals are returned as rational functions of ``u_i = q^{-s_i}``
(slot ``i`` of a :class:`~padic_spherical.algebra.RatFunc`, slot 0 unused)
with ``q = p`` substituted numerically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..algebra import LaurentExpr, RatFunc, substitute
from ..errors import MismatchFailure, UnsupportedCase, ZeroZeta
from .stepfn import StepFunction, _val, ball, fourier_finite, shell


@dataclass(frozen=True)
class PVContext:
    """Extension degree ``d``, homogeneity degrees ``e_i`` of the invariants in v, index ``e``."""

    d: int = 1
    degrees: tuple = (1,)
    index: int = 1

    def __post_init__(self):
        if self.d not in (1, 2):
            raise ValueError("extension degree must be 1 or 2")
        if any(e < 0 for e in self.degrees):
            raise ValueError("degrees must be non-negative")


def _u_monomial(exps: Sequence[int], nvars: int) -> LaurentExpr:
    return LaurentExpr.monomial((0, *exps), 1, nvars)


def zeta_step(phi: StepFunction, exponents: Sequence[Sequence[int]] | None = None) -> RatFunc:
    """``integral of phi(v) prod_i |f_i(v)|^{s_i} dv`` for monomial invariants.

    ``exponents[i][j]`` is the power of coordinate ``v_j`` in ``f_i``; the
    default is the single invariant ``f(v) = v_1`` on the line.  Each cell
    away from the coordinate axes contributes a single monomial; cells
    touching ``pi^hi O`` in some coordinate are summed in closed form as a
    geometric series in that coordinate.
    """
    p, dim = phi.p, phi.dim
    if exponents is None:
        exponents = [[1] * dim] if dim == 1 else [[1, 0]]
    k = len(exponents)
    if any(len(row) != dim for row in exponents):
        raise ValueError("one exponent per coordinate is required")
    q = Fraction(p)
    one = LaurentExpr.const(1, k)
    coord_mono = [_u_monomial([exponents[i][j] for i in range(k)], k) for j in range(dim)]
    cell_volume = q ** (-phi.hi)
    # integral over pi^hi O of the coordinate factor, as a rational function
    tail = [
        RatFunc(coord_mono[j] ** phi.hi * (cell_volume * (1 - 1 / q)), one - coord_mono[j] * (1 / q))
        for j in range(dim)
    ]
    total = RatFunc(0, nvars=k)
    for idx in phi.indices():
        val = phi.value(idx)
        if val.is_zero():
            continue
        if not val.is_rational():
            raise UnsupportedCase("zeta integrals of step functions with irrational values are not supported")
        term = RatFunc(LaurentExpr.const(val.to_rational(), k))
        for j, a in enumerate(idx):
            v = _val(a, p)
            if v is None:
                term = term * tail[j]
            else:
                term = term * RatFunc(coord_mono[j] ** (phi.lo + v) * cell_volume)
        total = total + term
    return total


def tate_zeta(phi: StepFunction) -> RatFunc:
    """``zeta(phi, s) = integral phi(x) |x|^{s-1} dx`` as a function of ``u = q^{-s}``."""
    Z = zeta_step(phi)
    return substitute(Z, {1: LaurentExpr.monomial((0, 1), phi.p, 1)})


def reflected_tate_zeta(phi: StepFunction) -> RatFunc:
    """``zeta(phi, 1 - s) = integral phi(x) |x|^{-s} dx`` as a function of ``u = q^{-s}``."""
    Z = zeta_step(phi)
    return substitute(Z, {1: LaurentExpr.monomial((0, -1), 1, 1)})


def gamma_extract(phi: StepFunction) -> RatFunc:
    """``gamma(s) = zeta(F phi, 1 - s) / zeta(phi, s)``."""
    if phi.dim != 1:
        raise ValueError("the Tate gamma factor is defined on the line")
    denom = tate_zeta(phi)
    if denom.is_zero():
        raise ZeroZeta("zeta(phi, s) vanishes identically")
    return reflected_tate_zeta(fourier_finite(phi)) / denom


def tate_gamma_expected(p: int) -> RatFunc:
    """``(1 - q^{-s}) / (1 - q^{s-1})`` in ``u = q^{-s}`` at ``q = p``."""
    u = LaurentExpr.monomial((0, 1), 1, 1)
    one = LaurentExpr.const(1, 1)
    return RatFunc(one - u, one - u ** -1 * Fraction(1, p))


def standard_test_functions(p: int) -> dict[str, StepFunction]:
    return {"1_O": ball(p, 0), "1_O^x": shell(p, 0), "1_piO": ball(p, 1)}


def conductor_correction(ell: int, ctx: PVContext, p: int) -> RatFunc:
    """``q^{ell d} prod_i u_i^{-ell e_i}``: the factor relating conductor-ell and conductor-0 gammas."""
    k = len(ctx.degrees)
    mono = _u_monomial([-ell * e for e in ctx.degrees], k) * (Fraction(p) ** (ell * ctx.d))
    return RatFunc(mono)


# ---------------------------------------------------------------------------
# scaling identity on V = k^2
# ---------------------------------------------------------------------------

TOY_INVARIANTS = {
    1: [[1, 0]],  # f(v) = v1
    2: [[1, 1]],  # f(v) = v1 * v2
}


@dataclass
class ScalingReport:
    degrees: tuple
    m: int
    lhs: RatFunc
    rhs: RatFunc
    factor: RatFunc

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs

    def to_json(self) -> dict:
        return {
            "degrees": list(self.degrees),
            "m": self.m,
            "lhs": self.lhs.to_text(_u_names(len(self.degrees))),
            "rhs": self.rhs.to_text(_u_names(len(self.degrees))),
            "factor": self.factor.to_text(_u_names(len(self.degrees))),
            "verdict": "pass" if self.ok else "fail",
        }


def _u_names(k: int) -> tuple[str, ...]:
    return ("q",) + tuple(f"u{i}" for i in range(1, k + 1)) if k > 1 else ("q", "u")


def scaling_factor(ctx: PVContext, m: int, p: int) -> RatFunc:
    """``q^{-m (2d + sum e_i s_i)}`` in the u-variables."""
    k = len(ctx.degrees)
    mono = _u_monomial([m * e for e in ctx.degrees], k) * Fraction(p) ** (-2 * ctx.d * m)
    return RatFunc(mono)


def scaling_check(degrees: Sequence[int], d: int, m: int, p: int,
                  exponents: Sequence[Sequence[int]] | None = None) -> ScalingReport:
    """Zeta over ``V(pi^m O)`` equals ``q^{-m(2d + sum e_i s_i)}`` times zeta over ``V(O)``."""
    if d != 1:
        raise UnsupportedCase("only V = k^2 (d = 1) is implemented")
    degrees = tuple(degrees)
    if exponents is None:
        if len(degrees) != 1 or degrees[0] not in TOY_INVARIANTS:
            raise ValueError("pass explicit monomial exponents for these degrees")
        exponents = TOY_INVARIANTS[degrees[0]]
    if [sum(row) for row in exponents] != list(degrees):
        raise ValueError("exponents do not match the stated degrees")
    ctx = PVContext(d, degrees)
    lhs = zeta_step(ball(p, m, dim=2), exponents)
    factor = scaling_factor(ctx, m, p)
    rhs = factor * zeta_step(ball(p, 0, dim=2), exponents)
    report = ScalingReport(degrees, m, lhs, rhs, factor)
    if not report.ok:
        raise MismatchFailure(f"scaling identity fails at m={m}", report)
    return report
