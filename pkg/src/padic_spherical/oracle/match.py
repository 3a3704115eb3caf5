"""Turn histograms into truncated series and compare them with the closed forms."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional

from ..algebra import LaurentExpr, RatFunc, series_expand, substitute
from ..errors import LevelTooSmall, MismatchBeyondTail, NoClosedForm
from ..hall_littlewood import Partition, _as_partition
from ..spherical import NormalizationConstant, get_case, spherical_closed_form
from .enumerate import ValuationHistogram, valuation_histogram
from .realization import CaseRealization
from .rings import PAdicConfig


@dataclass(frozen=True)
class HistogramSeries:
    """``sum_v (count/total) u^v`` over fully determined ``v``, plus the undetermined mass."""

    coeffs: dict
    tail: Fraction
    bounds: tuple

    def coefficient(self, v) -> Fraction:
        return self.coeffs.get(tuple(v), Fraction(0))

    def is_determined(self, v) -> bool:
        return all(b is None or x < b for x, b in zip(v, self.bounds))

    def as_laurent(self) -> LaurentExpr:
        """Series as a Laurent polynomial with ``u_i`` in slot ``i`` (slot 0 unused)."""
        return LaurentExpr({(0, *k): c for k, c in self.coeffs.items()}, len(self.bounds))

    def to_json(self) -> dict:
        return {
            "coeffs": [[list(k), str(c)] for k, c in self.coeffs.items()],
            "tail": str(self.tail),
            "bounds": list(self.bounds),
        }


def histogram_series(h: ValuationHistogram) -> HistogramSeries:
    coeffs = {}
    tail = Fraction(0)
    for key, c in h.counts.items():
        frac = Fraction(c, h.total)
        if h.is_determined(key):
            coeffs[key] = frac
        else:
            tail += frac
    return HistogramSeries(coeffs, tail, h.bounds)


def closed_series_source(case_tag: str, lam, q: int) -> tuple[RatFunc, int]:
    """The closed form with ``x_n = 1`` and ``x_i/x_{i+1} = a * u_i``, q specialized.

    Returns the rational function in ``u_1..u_{n-1}`` (slots 1..n-1) and
    the rank.  The ``x_n`` power is accounted for by :func:`fit_scale`.
    """
    lam = _as_partition(lam)
    case = get_case(case_tag, lam.n)
    case.require_closed_form()
    n = case.n
    closed = spherical_closed_form(case, lam)
    sign, power = case.ratio_twist
    a = Fraction(sign) * Fraction(q) ** power
    bindings = {0: Fraction(q)}
    target = n - 1
    for i in range(1, n + 1):
        exps = [0] * (target + 1)
        for j in range(i, n):
            exps[j] = 1
        bindings[i] = LaurentExpr.monomial(exps, a ** (n - i), target)
    return substitute(closed, bindings, nvars=target), n


def scale_to_constant(kappa: Fraction, case_tag: str, n: int, weight: int, q: int) -> tuple[Fraction, bool]:
    """Convert the fitted series ratio ``kappa`` into ``c_lambda`` as ``(value, sqrt_q)``.

    ``kappa = c_lambda * (sign q^e)^{|lambda|}`` where ``x_n = sign q^e u_n``.
    """
    case = get_case(case_tag, n)
    sign, e = case.last_twist
    expo = -e * weight
    value = kappa * Fraction(sign) ** weight
    if expo.denominator == 1:
        return value * Fraction(q) ** int(expo), False
    return value * Fraction(q) ** int(expo - Fraction(1, 2)), True


def constant_to_scale(c: NormalizationConstant, case_tag: str, n: int, weight: int, q: int) -> Fraction:
    """Inverse of :func:`scale_to_constant`."""
    case = get_case(case_tag, n)
    sign, e = case.last_twist
    expo = e * weight
    kappa = c.value * Fraction(sign) ** weight
    if c.sqrt_q:
        expo += Fraction(1, 2)
    if expo.denominator != 1:
        raise ValueError("constant and twist do not combine to a rational scale")
    return kappa * Fraction(q) ** int(expo)


@dataclass
class MatchReport:
    case: str
    lam: Partition
    config: PAdicConfig
    constant: NormalizationConstant
    rows: list = field(default_factory=list)  # (v, oracle, closed) for every compared coefficient
    tail: Fraction = Fraction(0)

    @property
    def matched(self) -> int:
        return sum(1 for _, a, b in self.rows if a == b)

    @property
    def ok(self) -> bool:
        return all(a == b for _, a, b in self.rows)

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "lambda": list(self.lam.parts),
            "config": self.config.to_json(),
            "constant": self.constant.to_json(),
            "tail": str(self.tail),
            "coefficients": [
                {"v": list(v), "oracle": str(a), "closed": str(b), "match": a == b} for v, a, b in self.rows
            ],
            "verdict": "pass" if self.ok else "fail",
        }


def _box(bounds, lows):
    ranges = [range(lo, b) for lo, b in zip(lows, bounds)]
    return product(*ranges)


def oracle_match(case_tag: str, lam, cfg: PAdicConfig,
                 c_fit: Optional[NormalizationConstant] = None,
                 hist: Optional[ValuationHistogram] = None) -> MatchReport:
    """Compare the enumeration with the closed form on every determined coefficient."""
    lam = _as_partition(lam)
    n = lam.n
    case = get_case(case_tag, n)
    if not case.has_closed_form:
        raise NoClosedForm("symmetric forms have no closed formula to match")
    real = CaseRealization(case.short, n)
    cfg = cfg.with_extension(real.extension)
    q = cfg.q
    if hist is None:
        hist = valuation_histogram(real, lam, cfg)
    series = histogram_series(hist)
    weight = lam.weight()

    source, _ = closed_series_source(case.short, lam, q)
    det_bounds = hist.bounds[:-1]
    oracle = {k[:-1]: c for k, c in series.coeffs.items() if k[-1] == weight}
    stray = [k for k in series.coeffs if k[-1] != weight]
    if stray:
        raise MismatchBeyondTail(f"last invariant took unexpected valuations {stray}")

    if n == 1:
        closed_coeffs = {(): source.to_laurent().constant_value()}
        box = [()]
    else:
        # the smallest valuation any u-monomial can have, from the oracle side or the closed side
        lows = []
        num_min = source.num.min_exponents()
        for i in range(n - 1):
            lo = min([k[i] for k in oracle] + [num_min[i + 1]])
            lows.append(lo)
        box = [v for v in _box(det_bounds, lows)]
        if not box:
            raise LevelTooSmall("no determined coefficient at this level")
        order = max(sum(v) for v in box)
        grading = [0] + [1] * (n - 1)
        expansion = series_expand(source, grading, order, laurent=True)
        closed_coeffs = {k[1:]: c for k, c in expansion.coeffs.items()}

    box.sort(key=lambda v: (sum(v), v))
    if c_fit is not None and c_fit.value is not None:
        kappa = constant_to_scale(c_fit, case.short, n, weight, q)
        constant = c_fit
    else:
        anchor = next((v for v in box if closed_coeffs.get(v, 0) != 0), None)
        if anchor is None:
            raise LevelTooSmall("closed form has no determined coefficient to fit against")
        kappa = oracle.get(anchor, Fraction(0)) / closed_coeffs[anchor]
        value, sqrt_q = scale_to_constant(kappa, case.short, n, weight, q)
        constant = NormalizationConstant(lam, q, value, sqrt_q, "fitted_from_oracle", cfg.m)

    report = MatchReport(case.short, lam, cfg, constant, tail=series.tail)
    for v in box:
        a = oracle.get(v, Fraction(0))
        b = kappa * closed_coeffs.get(v, Fraction(0))
        report.rows.append((v + (weight,), a, b))
    if not report.ok:
        bad = [(v, str(a), str(b)) for v, a, b in report.rows if a != b]
        raise MismatchBeyondTail(f"determined coefficients disagree: {bad}", report)
    return report
