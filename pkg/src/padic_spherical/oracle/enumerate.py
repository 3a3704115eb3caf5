"""Exact valuation histograms by enumerating GL_N over O/p^m or O'/p^m.

The i-th invariant of ``k.x`` only sees the first few rows of ``k``, and
the last invariant has constant valuation on a K-orbit.  So only the
leading rows needed by invariants ``1..n-1`` are enumerated, each
mod-p independent prefix standing for the same number of completions to
an invertible matrix.
"""

from __future__ import annotations

import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from ..errors import LevelTooSmall, UnsupportedCase
from .realization import CaseRealization, integral_scaling, top_valuation
from .rings import Matrix, PAdicConfig, Quad, gl_order, reduce_mod

DEFAULT_BUDGET = 30_000_000
CHUNK = 1 << 18

Key = tuple  # tuple of int | None


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("ARTIFACT_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class ValuationHistogram:
    """Counts of valuation vectors over all of ``K_m``.

    ``bounds[i]`` is the level up to which coordinate ``i`` is exact:
    a recorded value ``v < bounds[i]`` is exact, ``None`` stands for
    "at least ``bounds[i]``".  A bound of ``None`` means the coordinate is
    always exact.
    """

    counts: Mapping[Key, int]
    total: int
    bounds: tuple

    def __post_init__(self):
        object.__setattr__(self, "counts", dict(sorted(self.counts.items(), key=_key_order)))
        if sum(self.counts.values()) != self.total:
            raise ValueError("histogram counts do not add up to the group order")

    @property
    def n(self) -> int:
        return len(self.bounds)

    def is_determined(self, key: Key) -> bool:
        return all(v is not None for v in key)

    def restrict(self, bounds: Sequence[Optional[int]]) -> "ValuationHistogram":
        """Forget everything at or above the given per-coordinate bounds."""
        new_bounds = tuple(_min_bound(a, b) for a, b in zip(self.bounds, bounds))
        out: dict = {}
        for key, c in self.counts.items():
            k2 = tuple(None if (v is None or (b is not None and v >= b)) else v
                       for v, b in zip(key, new_bounds))
            out[k2] = out.get(k2, 0) + c
        return ValuationHistogram(out, self.total, new_bounds)

    def merge(self, other: "ValuationHistogram") -> "ValuationHistogram":
        if other.bounds != self.bounds:
            raise ValueError("cannot merge histograms with different bounds")
        out = dict(self.counts)
        for k, c in other.counts.items():
            out[k] = out.get(k, 0) + c
        return ValuationHistogram(out, self.total + other.total, self.bounds)

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "bounds": list(self.bounds),
            "counts": [[list(k), c] for k, c in self.counts.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "ValuationHistogram":
        return cls({tuple(k): c for k, c in data["counts"]}, data["total"], tuple(data["bounds"]))


def _key_order(item):
    key = item[0]
    return tuple((1, 0) if v is None else (0, v) for v in key)


def _min_bound(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# ---------------------------------------------------------------------------
# vectorized ring arithmetic
# ---------------------------------------------------------------------------

class _BaseOps:
    def __init__(self, cfg: PAdicConfig):
        self.M = cfg.modulus
        self.p = cfg.p

    def mul(self, a, b):
        return a * b % self.M

    def add(self, a, b):
        return (a + b) % self.M

    def sub(self, a, b):
        return (a - b) % self.M

    def conj(self, a):
        return a

    def const(self, v: Quad):
        if v.b != 0:
            raise ValueError("extension element in a base-ring computation")
        return np.int64(reduce_mod(v.a, self.p, self.M))

    def nonzero_mod_p(self, a):
        return a % self.p != 0

    def decode(self, digits):
        return digits

    def zeros(self, shape):
        return np.zeros(shape, dtype=np.int64)


class _ExtOps:
    """Elements are arrays with a trailing axis of length 2: ``a + b X``."""

    def __init__(self, cfg: PAdicConfig):
        self.M = cfg.modulus
        self.p = cfg.p
        self.rho = cfg.rho

    def mul(self, x, y):
        a, b = x[..., 0], x[..., 1]
        c, d = y[..., 0], y[..., 1]
        re = (a * c + self.rho * (b * d % self.M)) % self.M
        im = (a * d + b * c) % self.M
        return np.stack([re, im], axis=-1)

    def add(self, x, y):
        return (x + y) % self.M

    def sub(self, x, y):
        return (x - y) % self.M

    def conj(self, x):
        out = x.copy()
        out[..., 1] = (-out[..., 1]) % self.M
        return out

    def const(self, v: Quad):
        return np.array([reduce_mod(v.a, self.p, self.M), reduce_mod(v.b, self.p, self.M)], dtype=np.int64)

    def nonzero_mod_p(self, x):
        return (x[..., 0] % self.p != 0) | (x[..., 1] % self.p != 0)

    def decode(self, digits):
        return np.stack([digits % self.M, digits // self.M], axis=-1)

    def zeros(self, shape):
        return np.zeros(tuple(shape) + (2,), dtype=np.int64)


def _ops(cfg: PAdicConfig):
    return _ExtOps(cfg) if cfg.extension else _BaseOps(cfg)


def _det(ops, M, size: int):
    """Determinant of the leading ``size x size`` block of a batch of matrices (Leibniz)."""
    acc = None
    for perm in permutations(range(size)):
        term = M[:, 0, perm[0]]
        for i in range(1, size):
            term = ops.mul(term, M[:, i, perm[i]])
        inv = sum(1 for i in range(size) for j in range(i + 1, size) if perm[i] > perm[j])
        if acc is None:
            acc = term if inv % 2 == 0 else ops.sub(0 * term, term)
        else:
            acc = ops.add(acc, term) if inv % 2 == 0 else ops.sub(acc, term)
    return acc


def _pf(ops, M, size: int):
    if size == 2:
        return M[:, 0, 1]
    if size == 4:
        t1 = ops.mul(M[:, 0, 1], M[:, 2, 3])
        t2 = ops.mul(M[:, 0, 2], M[:, 1, 3])
        t3 = ops.mul(M[:, 0, 3], M[:, 1, 2])
        return ops.add(ops.sub(t1, t2), t3)
    raise UnsupportedCase(f"pfaffian of size {size} not vectorized")


def _rank_full_mod_p(ops, K, r: int, N: int):
    """Mask of prefixes whose r rows are independent modulo the maximal ideal."""
    if r == 1:
        mask = np.zeros(K.shape[0], dtype=bool)
        for j in range(N):
            mask |= ops.nonzero_mod_p(K[:, 0, j])
        return mask
    if r == 2:
        mask = np.zeros(K.shape[0], dtype=bool)
        for a in range(N):
            for b in range(a + 1, N):
                minor = ops.sub(ops.mul(K[:, 0, a], K[:, 1, b]), ops.mul(K[:, 0, b], K[:, 1, a]))
                mask |= ops.nonzero_mod_p(minor)
        return mask
    raise UnsupportedCase(f"independence test for {r} rows not vectorized")


def _gram(ops, case: CaseRealization, K, xr, rows: int, N: int):
    """``K x K^t`` (or ``K x K^*``) restricted to the first ``rows`` rows of K."""
    T = K.shape[0]
    Y = [[None] * N for _ in range(rows)]
    for i in range(rows):
        for j in range(N):
            acc = ops.zeros((T,))
            for k in range(N):
                if np.any(xr[k][j]):
                    acc = ops.add(acc, ops.mul(K[:, i, k], np.broadcast_to(xr[k][j], K[:, i, k].shape)))
            Y[i][j] = acc
    Kc = ops.conj(K) if case.extension else K
    G = ops.zeros((T, rows, rows))
    for i in range(rows):
        for j in range(rows):
            acc = ops.zeros((T,))
            for k in range(N):
                acc = ops.add(acc, ops.mul(Y[i][k], Kc[:, j, k]))
            G[:, i, j] = acc
    return G


def _invariant_values(ops, case: CaseRealization, G, count: int):
    out = []
    for i in range(1, count + 1):
        if case.tag == "alternating":
            out.append(_pf(ops, G, 2 * i))
        else:
            out.append(_det(ops, G, i))
    return out


def _valuations(cfg: PAdicConfig, ops, values):
    table = cfg.valuation_table
    cols = []
    for v in values:
        if cfg.extension:
            if np.any(v[..., 1] != 0):
                raise AssertionError("hermitian invariant left the base ring")
            v = v[..., 0]
        cols.append(table[v])
    return np.stack(cols, axis=1) if cols else np.zeros((0, 0), dtype=np.int64)


def reduce_form(case: CaseRealization, x: Matrix, cfg: PAdicConfig):
    """Scale x to be integral and reduce it mod p^m; returns ``(e, reduced entries)``."""
    ops = _ops(cfg)
    e = integral_scaling(x, cfg.p)
    scale = Quad(Fraction(cfg.p ** e), Fraction(0), cfg.rho)
    xr = [[ops.const(v * scale) for v in row] for row in x]
    return e, xr


def valuation_histogram(
    case: CaseRealization,
    x_or_lambda,
    cfg: PAdicConfig,
    budget: int = DEFAULT_BUDGET,
    progress: Optional[Callable[[int, int], None]] = None,
    require_determined: bool = True,
) -> ValuationHistogram:
    """Histogram of ``(v(f_1(k.x)), ..., v(f_n(k.x)))`` over ``k`` in ``K_m``.

    ``x_or_lambda`` is either a Partition / tuple of ints (the standard
    representative) or an explicit matrix of :class:`Quad`.
    """
    if cfg.extension != case.extension:
        cfg = cfg.with_extension(case.extension)
    x = _as_form(case, x_or_lambda, cfg)
    n, N = case.n, case.size
    Q = cfg.residue_card
    total = gl_order(N, Q, cfg.m)
    v_top = top_valuation(case, x, cfg.p)
    e, xr = reduce_form(case, x, cfg)
    bounds = tuple(cfg.m - e * case.degree(i) for i in range(1, n)) + (None,)

    rows = (n - 1) * case.rows_per_invariant
    if rows == 0:
        return ValuationHistogram({(v_top,): total}, total, bounds)

    ops = _ops(cfg)
    R = cfg.ring_size
    space = R ** (rows * N)
    if space > budget:
        raise UnsupportedCase(f"enumeration of {space} row prefixes exceeds the budget of {budget}")
    # completions of an independent prefix of `rows` rows to an invertible matrix
    completions = Q ** (N * (cfg.m - 1) * (N - rows))
    for i in range(rows, N):
        completions *= Q ** N - Q ** i

    def work(start: int):
        idx = np.arange(start, min(start + CHUNK, space), dtype=np.int64)
        digits = np.empty((idx.size, rows * N), dtype=np.int64)
        rest = idx.copy()
        for d in range(rows * N):
            digits[:, d] = rest % R
            rest //= R
        K = ops.decode(digits).reshape((idx.size, rows, N) + ((2,) if cfg.extension else ()))
        mask = _rank_full_mod_p(ops, K, rows, N)
        K = K[mask]
        if K.shape[0] == 0:
            return {}
        G = _gram(ops, case, K, xr, rows, N)
        vals = _valuations(cfg, ops, _invariant_values(ops, case, G, n - 1))
        uniq, cnt = np.unique(vals, axis=0, return_counts=True)
        return {tuple(int(v) for v in row): int(c) for row, c in zip(uniq, cnt)}

    starts = list(range(0, space, CHUNK))
    raw: dict = {}
    threads = thread_count()
    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = pool.map(work, starts)
            for done, part in enumerate(results, 1):
                _merge_into(raw, part)
                if progress:
                    progress(done, len(starts))
    else:
        for done, s in enumerate(starts, 1):
            _merge_into(raw, work(s))
            if progress:
                progress(done, len(starts))

    counts: dict = {}
    for row, c in raw.items():
        key = tuple(None if v >= cfg.m else v - e * case.degree(i + 1) for i, v in enumerate(row)) + (v_top,)
        counts[key] = counts.get(key, 0) + c * completions
    hist = ValuationHistogram(counts, total, bounds)
    if require_determined and not any(hist.is_determined(k) for k in hist.counts):
        raise LevelTooSmall("no valuation vector is determined at this level")
    return hist


def _merge_into(acc: dict, part: dict) -> None:
    for k, c in part.items():
        acc[k] = acc.get(k, 0) + c


def _as_form(case: CaseRealization, x_or_lambda, cfg: PAdicConfig) -> Matrix:
    if isinstance(x_or_lambda, list) and x_or_lambda and isinstance(x_or_lambda[0], list):
        case.check_form(x_or_lambda)
        return x_or_lambda
    return case.representative(x_or_lambda, cfg.rho, cfg.p)


def brute_force_histogram(case: CaseRealization, x_or_lambda, cfg: PAdicConfig,
                          budget: int = 2_000_000) -> ValuationHistogram:
    """Enumerate every matrix of ``M_N(R)``, keep the invertible ones, and bin all n invariants.

    Only meant for tiny groups; every coordinate is recorded mod p^m, so
    the last coordinate is truncated at the level like the others.
    """
    if cfg.extension != case.extension:
        cfg = cfg.with_extension(case.extension)
    x = _as_form(case, x_or_lambda, cfg)
    n, N = case.n, case.size
    ops = _ops(cfg)
    e, xr = reduce_form(case, x, cfg)
    R = cfg.ring_size
    space = R ** (N * N)
    if space > budget:
        raise UnsupportedCase(f"brute force over {space} matrices exceeds the budget")
    idx = np.arange(space, dtype=np.int64)
    digits = np.empty((space, N * N), dtype=np.int64)
    rest = idx.copy()
    for d in range(N * N):
        digits[:, d] = rest % R
        rest //= R
    K = ops.decode(digits).reshape((space, N, N) + ((2,) if cfg.extension else ()))
    detk = _det(ops, K, N)
    K = K[ops.nonzero_mod_p(detk)]
    G = _gram(ops, case, K, xr, N, N)
    vals = _valuations(cfg, ops, _invariant_values(ops, case, G, n))
    uniq, cnt = np.unique(vals, axis=0, return_counts=True)
    counts: dict = {}
    for row, c in zip(uniq, cnt):
        key = tuple(None if v >= cfg.m else int(v) - e * case.degree(i + 1) for i, v in enumerate(row))
        counts[key] = counts.get(key, 0) + int(c)
    bounds = tuple(cfg.m - e * case.degree(i) for i in range(1, n + 1))
    return ValuationHistogram(counts, int(K.shape[0]), bounds)
