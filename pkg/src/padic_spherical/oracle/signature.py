"""Orbit signatures: classes of the invariants modulo squares or norms."""

from __future__ import annotations

from fractions import Fraction

from ..errors import NotInOpenOrbit
from .realization import CaseRealization
from .rings import Matrix, PAdicConfig, legendre, pval


def _unit_part_residue(x: Fraction, p: int) -> int:
    v = pval(x, p)
    u = x / Fraction(p) ** v
    return u.numerator * pow(u.denominator, -1, p) % p


def orbit_signature(case: CaseRealization, x: Matrix, cfg: PAdicConfig) -> tuple:
    """Per-invariant class label.

    symmetric: ``(valuation parity, Legendre symbol of the unit part)``;
    hermitian: valuation parity (norms from the unramified extension are
    exactly the elements of even valuation); alternating: the class group
    is trivial, so every label is ``()``.
    """
    labels = []
    for f in case.invariants(x):
        v = f.valuation(cfg.p)
        if v is None or v >= cfg.m:
            raise NotInOpenOrbit("an invariant vanishes modulo p^m")
        if case.tag == "symmetric":
            labels.append((v % 2, legendre(_unit_part_residue(f.a, cfg.p), cfg.p)))
        elif case.tag == "hermitian":
            labels.append((v % 2,))
        else:
            labels.append(())
    return tuple(labels)


def identity_signature(case: CaseRealization) -> tuple:
    if case.tag == "symmetric":
        return ((0, 1),) * case.n
    if case.tag == "hermitian":
        return ((0,),) * case.n
    return ((),) * case.n
