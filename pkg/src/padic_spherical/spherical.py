"""Closed-form spherical functions for alternating and unramified hermitian forms.

Everything is written in the z-coordinates of each case, with ``x_i``
standing for ``q^{z_i}``.  The normalizing scalar ``c_lambda`` is never
invented here: it stays symbolic until :mod:`padic_spherical.oracle`
fits it from enumeration data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra import LaurentExpr, RatFunc
from .errors import BadLength, NoClosedForm
from .hall_littlewood import Partition, _as_partition, embed, hl_polynomial, w_lambda
from .weyl import (
    VariableMap,
    WeylElement,
    all_elements,
    gamma_product,
    make_variable_map,
    weyl_act,
)

CASE_ALIASES = {
    "alternating": "alternating",
    "hermitian": "hermitian_unramified",
    "hermitian_unramified": "hermitian_unramified",
    "symmetric": "symmetric_oracle_only",
    "symmetric_oracle_only": "symmetric_oracle_only",
}


@dataclass(frozen=True)
class SphericalCase:
    """One homogeneous-space case of rank ``n``.

    ``ratio_twist`` and ``last_twist`` record how the oracle's formal
    variables ``u_i = q^{-s_i}`` relate to the z-coordinates:
    ``x_i / x_{i+1} = ratio_twist * u_i`` and ``x_n = last_twist * u_n``.
    The hermitian twists carry the sign coming from the imaginary part of
    its exponent shift; ``last_twist`` for hermitian forms is
    ``-q^{-(n-1)/2}``, stored as ``(sign, half-integer power of q)``.
    """

    tag: str
    n: int
    t: Optional[LaurentExpr] = field(default=None, compare=False)
    orbit_group: str = ""

    @property
    def has_closed_form(self) -> bool:
        return self.tag != "symmetric_oracle_only"

    @property
    def short(self) -> str:
        return {"alternating": "alternating", "hermitian_unramified": "hermitian",
                "symmetric_oracle_only": "symmetric"}[self.tag]

    def require_closed_form(self) -> None:
        if not self.has_closed_form:
            raise NoClosedForm("symmetric forms have no closed formula in this package")

    @property
    def variable_map(self) -> VariableMap:
        self.require_closed_form()
        return make_variable_map(self.short, self.n)

    @property
    def ratio_twist(self) -> tuple[int, int]:
        """Coefficient ``a`` (as a power of q with sign) in ``x_i/x_{i+1} = a * u_i``."""
        self.require_closed_form()
        return (1, -2) if self.tag == "alternating" else (-1, -1)

    @property
    def last_twist(self) -> tuple[int, Fraction]:
        """``(sign, exponent)`` with ``x_n = sign * q^exponent * u_n``."""
        self.require_closed_form()
        if self.tag == "alternating":
            return (1, Fraction(self.n - 1))
        return (-1, Fraction(-(self.n - 1), 2))


def get_case(tag: str, n: int) -> SphericalCase:
    try:
        canon = CASE_ALIASES[tag]
    except KeyError:
        raise ValueError(f"unknown case {tag!r}") from None
    if n < 1:
        raise BadLength("rank must be positive")
    q = LaurentExpr.q(0)
    if canon == "alternating":
        return SphericalCase(canon, n, q ** -2, "trivial")
    if canon == "hermitian_unramified":
        return SphericalCase(canon, n, -(q ** -1), "(Z/2Z)^n (valuation parity)")
    return SphericalCase(canon, n, None, "(k^x/k^x2)^n (valuation parity, residue character)")


def _case(case, n: int | None = None) -> SphericalCase:
    if isinstance(case, SphericalCase):
        return case
    if n is None:
        raise ValueError("rank required")
    return get_case(case, n)


def prefactor(case, n: int | None = None) -> RatFunc:
    """The case's product over pairs ``i < j`` with ``q^{z_i}`` written as ``x_i``."""
    case = _case(case, n)
    case.require_closed_form()
    n = case.n
    q = LaurentExpr.q(n)
    one = LaurentExpr.const(1, n)
    out = RatFunc(1, nvars=n)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            r = LaurentExpr.x(i, n) * LaurentExpr.x(j, n) ** -1
            if case.tag == "alternating":
                out = out * RatFunc(one - q ** -1 * r, one - q * r)
            else:
                out = out * RatFunc(one - q ** -1 * r, one + r)
    return out


def case_hl(case: SphericalCase, lam) -> LaurentExpr:
    lam = _as_partition(lam)
    if lam.n != case.n:
        raise BadLength(f"partition has {lam.n} parts, case has rank {case.n}")
    return hl_polynomial(lam, case.n, embed(case.t, case.n))


def spherical_closed_form(case, lam, n: int | None = None) -> RatFunc:
    """Prefactor times the Hall-Littlewood polynomial; the scalar ``c_lambda`` is left out."""
    case = _case(case, n if n is not None else len(tuple(lam)))
    case.require_closed_form()
    return prefactor(case) * case_hl(case, lam)


@dataclass(frozen=True)
class PsiNormalized:
    """``(c_lambda / c_0) * poly`` with the scalar ratio kept symbolic unless known."""

    lam: Partition
    poly: LaurentExpr
    scalar: Optional[Fraction] = None

    @property
    def scalar_label(self) -> str:
        return f"c_({self.lam})/c_(0)"


def psi_normalized(case, lam, n: int | None = None) -> PsiNormalized:
    """Closed form divided by the one at ``lambda = 0``; the prefactor cancels exactly."""
    lam = _as_partition(lam)
    case = _case(case, n if n is not None else lam.n)
    ratio = spherical_closed_form(case, lam) / spherical_closed_form(case, Partition((0,) * case.n))
    poly = case_hl(case, lam)
    assert ratio == RatFunc(poly), "prefactor failed to cancel"
    return PsiNormalized(lam, ratio.to_laurent())


def hermitian_feq_product(sigma: WeylElement) -> RatFunc:
    """``prod (x_{s(i)} - q^{-1} x_{s(j)}) / (x_{s(j)} - q^{-1} x_{s(i)})`` over inversions of s."""
    n = sigma.n
    q = LaurentExpr.q(n)
    out = RatFunc(1, nvars=n)
    for i, j in sigma.inversions():
        a, b = LaurentExpr.x(sigma(i), n), LaurentExpr.x(sigma(j), n)
        out = out * RatFunc(a - q ** -1 * b, b - q ** -1 * a)
    return out


def feq_factor(case, sigma: WeylElement) -> RatFunc:
    """Scalar ``b_sigma`` with ``omega = b_sigma * weyl_act(sigma, omega)``.

    Hermitian forms use the printed product over inversions; alternating
    forms use ``prefactor / weyl_act(sigma, prefactor)``.
    """
    case = _case(case, sigma.n)
    case.require_closed_form()
    if sigma.n != case.n:
        raise BadLength("permutation size differs from rank")
    if case.tag == "hermitian_unramified":
        return hermitian_feq_product(sigma)
    pf = prefactor(case)
    return pf / weyl_act(sigma, pf)


def check_functional_equation(case: SphericalCase, lam, sigma: WeylElement) -> bool:
    omega = spherical_closed_form(case, lam)
    return omega == feq_factor(case, sigma) * weyl_act(sigma, omega)


def check_cocycle(case: SphericalCase, sigma: WeylElement, tau: WeylElement) -> bool:
    """``b_{sigma tau} = b_sigma * sigma(b_tau)`` with ``(sigma tau)(i) = sigma(tau(i))``."""
    lhs = feq_factor(case, sigma * tau)
    rhs = feq_factor(case, sigma) * weyl_act(sigma, feq_factor(case, tau))
    return lhs == rhs


@dataclass(frozen=True)
class Reconstruction:
    value: RatFunc
    predicted: RatFunc

    @property
    def ok(self) -> bool:
        return self.value == self.predicted


def casselman_reconstruct(case, lam, n: int | None = None) -> Reconstruction:
    """``sum_sigma sigma(gamma * x^lambda)`` next to ``w_lambda(t)/(1-t)^n * P_lambda``."""
    lam = _as_partition(lam)
    case = _case(case, n if n is not None else lam.n)
    case.require_closed_form()
    n = case.n
    t = embed(case.t, n)
    term = gamma_product(n, t) * LaurentExpr.monomial((0, *lam.parts), 1, n)
    value = RatFunc(0, nvars=n)
    for sigma in all_elements(n):
        value = value + weyl_act(sigma, term)
    one = LaurentExpr.const(1, n)
    predicted = RatFunc(w_lambda(lam, t), (one - t) ** n) * hl_polynomial(lam, n, t)
    return Reconstruction(value, predicted)


@dataclass
class NormalizationConstant:
    """Scalar ``c_lambda`` at a fixed residue cardinality.

    ``value`` is rational; when ``sqrt_q`` is set the true constant is
    ``value * sqrt(q)`` (this happens for hermitian forms of even rank
    and odd ``|lambda|``).
    """

    lam: Partition
    q: int
    value: Optional[Fraction] = None
    sqrt_q: bool = False
    provenance: str = "unset"
    level: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "lambda": list(self.lam.parts),
            "q": self.q,
            "value": None if self.value is None else str(self.value),
            "sqrt_q": self.sqrt_q,
            "provenance": self.provenance,
            "level": self.level,
        }
