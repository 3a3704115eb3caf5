"""Check the Hecke eigen-relation for the basic double coset ``K diag(pi, 1) K``.

``(phi * omega)(x) = sum_j omega(g_j^{-1} . x)`` over left coset
representatives ``g_j`` of the double coset, and the eigenvalue is
``sum_j |psi(g_j)|^{-s} delta(g_j)`` when the representatives are taken
lower triangular (so each is its own Borel part).  The modulus character
is ``delta(p) = |p_2 / p_1|`` (absolute value of the field the group is
defined over); this choice is the one that makes the trivial case
``lambda = 0`` work and is then tested on the other cases.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional

from ..errors import CosetDecompositionFailure
from ..hall_littlewood import Partition, _as_partition
from .enumerate import valuation_histogram
from .match import HistogramSeries, histogram_series
from .realization import CaseRealization
from .rings import Matrix, PAdicConfig, Quad, det, mat_inverse, mat_mul


def _q(v, rho) -> Quad:
    return Quad.of(v, rho)


def _residues(cfg: PAdicConfig) -> list[Quad]:
    p, rho = cfg.p, cfg.rho
    if cfg.extension:
        return [Quad(Fraction(a), Fraction(b), rho) for b in range(p) for a in range(p)]
    return [_q(a, rho) for a in range(p)]


def in_K(g: Matrix, p: int) -> bool:
    """Integral entries and unit determinant."""
    for row in g:
        for v in row:
            val = v.valuation(p)
            if val is not None and val < 0:
                return False
    return det(g).valuation(p) == 0


def _in_double_coset(g: Matrix, p: int) -> bool:
    for row in g:
        for v in row:
            val = v.valuation(p)
            if val is not None and val < 0:
                return False
    return det(g).valuation(p) == 1


def coset_representatives(n: int, cfg: PAdicConfig, exhaustive: Optional[bool] = None) -> list[Matrix]:
    """Lower-triangular representatives of ``K diag(pi,1,..) K / K`` for rank 1 or 2, verified.

    Verification: each representative lies in the double coset, no two
    share a coset, and every integral matrix of determinant valuation one
    (all of them mod p^2 over the base field, a deterministic sample over
    the extension) falls in one of the cosets.
    """
    p, rho = cfg.p, cfg.rho
    one, zero, pi = _q(1, rho), _q(0, rho), _q(p, rho)
    if n == 1:
        reps = [[[pi]]]
    elif n == 2:
        reps = [[[one, zero], [c, pi]] for c in _residues(cfg)] + [[[pi, zero], [zero, one]]]
    else:
        raise CosetDecompositionFailure(f"no representatives implemented for rank {n}")

    for g in reps:
        if not _in_double_coset(g, p):
            raise CosetDecompositionFailure("representative outside the double coset")
    inverses = [mat_inverse(g) for g in reps]
    for i, gi in enumerate(inverses):
        for j, g in enumerate(reps):
            if i != j and in_K(mat_mul(gi, g), p):
                raise CosetDecompositionFailure(f"representatives {i} and {j} share a coset")
    if n == 1:
        return reps

    Q = cfg.residue_card
    if len(reps) != Q + 1:
        raise CosetDecompositionFailure(f"expected {Q + 1} cosets, found {len(reps)}")
    if exhaustive is None:
        exhaustive = not cfg.extension
    M = p * p
    if exhaustive:
        entries = [_q(a, rho) for a in range(M)]
        candidates = product(entries, repeat=4)
    else:
        rng = random.Random(0)
        candidates = (
            tuple(Quad(Fraction(rng.randrange(M)), Fraction(rng.randrange(M)), rho) for _ in range(4))
            for _ in range(4000)
        )
    for a, b, c, d in candidates:
        g = [[a, b], [c, d]]
        if not _in_double_coset(g, p):
            continue
        hits = sum(1 for gi in inverses if in_K(mat_mul(gi, g), p))
        if hits != 1:
            raise CosetDecompositionFailure(f"matrix {g} lies in {hits} cosets")
    return reps


def eigenvalue_terms(case: CaseRealization, reps: list[Matrix], cfg: PAdicConfig) -> dict:
    """``lambda_s(phi)`` as ``{exponent vector of u: coefficient}``."""
    p = cfg.p
    f = 2 if cfg.extension else 1  # |a|_{k'} = q^{-2 v(a)} for a in k'
    n = case.n
    terms: dict = {}
    for g in reps:
        diag = [g[i][i].valuation(p) for i in range(n)]
        exps = tuple(-2 * sum(diag[: i + 1]) for i in range(n))
        if n == 2:
            delta = Fraction(cfg.q) ** (-f * (diag[1] - diag[0]))
        else:
            delta = Fraction(1)
        terms[exps] = terms.get(exps, Fraction(0)) + delta
    return terms


@dataclass
class HeckeReport:
    case: str
    lam: Partition
    config: PAdicConfig
    cosets: int
    eigenvalue: dict
    rows: list = field(default_factory=list)  # (v, lhs, rhs)

    @property
    def ok(self) -> bool:
        return bool(self.rows) and all(a == b for _, a, b in self.rows)

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "lambda": list(self.lam.parts),
            "config": self.config.to_json(),
            "cosets": self.cosets,
            "eigenvalue": [[list(k), str(v)] for k, v in sorted(self.eigenvalue.items())],
            "coefficients": [
                {"v": list(v), "lhs": str(a), "rhs": str(b), "match": a == b} for v, a, b in self.rows
            ],
            "verdict": "pass" if self.ok else "fail",
        }


def _determined(v, bounds) -> bool:
    return all(b is None or x < b for x, b in zip(v, bounds))


def hecke_eigen_check(case_tag: str, lam, cfg: PAdicConfig) -> HeckeReport:
    """Compare ``phi * omega`` with ``lambda_s(phi) * omega`` on all determined coefficients.

    ``symmetric`` with rank 1 is the toy action ``g.x = g^2 x`` of GL_1.
    """
    lam = _as_partition(lam)
    case = CaseRealization(case_tag, lam.n)
    cfg = cfg.with_extension(case.extension)
    if case.tag == "alternating":
        raise CosetDecompositionFailure("the basic double coset check is implemented for GL_1 and GL_2 only")
    reps = coset_representatives(case.n, cfg)
    x = case.representative(lam, cfg.rho, cfg.p)
    base = histogram_series(valuation_histogram(case, x, cfg, require_determined=False))
    shifted: list[HistogramSeries] = []
    for g in reps:
        y = case.act(mat_inverse(g), x)
        shifted.append(histogram_series(valuation_histogram(case, y, cfg, require_determined=False)))
    eig = eigenvalue_terms(case, reps, cfg)

    candidates = set()
    for s in shifted:
        candidates.update(s.coeffs)
    for t in eig:
        for k in base.coeffs:
            candidates.add(tuple(a + b for a, b in zip(t, k)))
    report = HeckeReport(case.tag, lam, cfg, len(reps), eig)
    for v in sorted(candidates):
        if not all(_determined(v, s.bounds) for s in shifted):
            continue
        shifts = [tuple(a - b for a, b in zip(v, t)) for t in eig]
        if not all(_determined(w, base.bounds) for w in shifts):
            continue
        lhs = sum((s.coefficient(v) for s in shifted), Fraction(0))
        rhs = sum((c * base.coefficient(w) for w, c in zip(shifts, eig.values())), Fraction(0))
        report.rows.append((v, lhs, rhs))
    return report
