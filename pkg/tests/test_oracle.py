import random
from fractions import Fraction

import pytest

from padic_spherical.errors import (
    BadLength,
    LevelTooSmall,
    NoClosedForm,
    NotInOpenOrbit,
    UnsupportedCase,
)
from padic_spherical.oracle.enumerate import (
    ValuationHistogram,
    brute_force_histogram,
    valuation_histogram,
)
from padic_spherical.oracle.match import histogram_series, oracle_match
from padic_spherical.oracle.realization import CaseRealization, parse_matrix
from padic_spherical.oracle.rings import PAdicConfig, Quad, det, gl_order
from padic_spherical.oracle.signature import identity_signature, orbit_signature

P = 3


def cfg(m, extension=False):
    return PAdicConfig(P, m, extension)


def random_unit_matrix(rng, N, p, rho, extension, lower=False):
    while True:
        g = []
        for i in range(N):
            row = []
            for j in range(N):
                if lower and j > i:
                    row.append(Quad(Fraction(0), Fraction(0), rho))
                    continue
                b = rng.randrange(p * p) if extension else 0
                row.append(Quad(Fraction(rng.randrange(p * p)), Fraction(b), rho))
            g.append(row)
        if det(g).valuation(p) == 0:
            return g


class TestGroupOrder:
    @pytest.mark.parametrize("N,m", [(1, 1), (1, 3), (2, 1), (2, 2), (3, 1)])
    def test_formula(self, N, m):
        expect = P ** (N * N * (m - 1))
        for i in range(N):
            expect *= P ** N - P ** i
        assert gl_order(N, P, m) == expect

    def test_extension(self):
        assert gl_order(2, 9, 1) == (81 - 1) * (81 - 9) == 5760

    @pytest.mark.parametrize("tag,n,m", [("symmetric", 2, 1), ("symmetric", 2, 2), ("hermitian", 2, 1),
                                         ("hermitian", 1, 3), ("alternating", 1, 2), ("alternating", 2, 1)])
    def test_histogram_total(self, tag, n, m):
        case = CaseRealization(tag, n)
        h = valuation_histogram(case, (0,) * n, cfg(m), require_determined=False)
        Q = P * P if case.extension else P
        assert h.total == gl_order(case.size, Q, m)


class TestExamples:
    @pytest.mark.parametrize("m", [1, 2, 3])
    @pytest.mark.parametrize("lam", [(0,), (1,), (3,), (-1,)])
    def test_alternating_rank_one_single_value(self, m, lam):
        h = valuation_histogram(CaseRealization("alternating", 1), lam, cfg(m))
        assert h.counts == {(lam[0],): h.total}

    @pytest.mark.parametrize("m", [1, 2, 4])
    def test_hermitian_rank_one_single_value(self, m):
        h = valuation_histogram(CaseRealization("hermitian", 1), (1,), cfg(m))
        assert h.counts == {(1,): h.total}

    def test_symmetric_identity_level_one(self):
        h = valuation_histogram(CaseRealization("symmetric", 2), (0, 0), cfg(1))
        assert h.counts == {(0, 0): 48}
        assert h.total == 48

    def test_series_normalization(self):
        h = valuation_histogram(CaseRealization("symmetric", 2), (0, 0), cfg(1))
        s = histogram_series(h)
        assert s.coeffs == {(0, 0): 1}
        assert s.tail == 0
        h = valuation_histogram(CaseRealization("symmetric", 2), (1, 0), cfg(2), require_determined=False)
        s = histogram_series(h)
        assert sum(s.coeffs.values()) + s.tail == 1


class TestBruteForce:
    @pytest.mark.parametrize("tag,n,lam,m", [
        ("symmetric", 2, (0, 0), 1),
        ("symmetric", 2, (0, 0), 2),
        ("symmetric", 2, (1, 0), 2),
        ("hermitian", 2, (0, 0), 1),
        ("hermitian", 2, (1, 0), 1),
        ("alternating", 1, (1,), 2),
        ("symmetric", 1, (1,), 3),
    ])
    def test_prefix_enumeration_agrees(self, tag, n, lam, m):
        case = CaseRealization(tag, n)
        c = cfg(m)
        fast = valuation_histogram(case, lam, c, require_determined=False)
        brute = brute_force_histogram(case, lam, c)
        assert fast.restrict(brute.bounds) == brute

    def test_hermitian_level_one_frozen(self):
        brute = brute_force_histogram(CaseRealization("hermitian", 2), (0, 0), cfg(1))
        assert brute.counts == {(0, 0): 3456, (None, 0): 2304}
        assert brute.total == 5760

    def test_symmetric_level_two_total(self):
        brute = brute_force_histogram(CaseRealization("symmetric", 2), (0, 0), cfg(2))
        assert brute.total == 3888


class TestLevelCoherence:
    @pytest.mark.parametrize("tag,lam", [("symmetric", (0, 0)), ("symmetric", (1, 0)),
                                         ("hermitian", (1, 0)), ("hermitian", (0, -1))])
    def test_restrict_down(self, tag, lam):
        case = CaseRealization(tag, 2)
        for m in (1, 2):
            lo = valuation_histogram(case, lam, cfg(m), require_determined=False)
            hi = valuation_histogram(case, lam, cfg(m + 1), require_determined=False)
            # every element of K_m has the same number of lifts to K_{m+1}
            fiber, rem = divmod(hi.total, lo.total)
            assert rem == 0
            down = hi.restrict(lo.bounds)
            assert down.bounds == lo.bounds
            assert down.counts == {k: c * fiber for k, c in lo.counts.items()}

    @pytest.mark.parametrize("tag,lam", [("symmetric", (0, 0)), ("hermitian", (2, 0))])
    def test_determined_coefficients_stable(self, tag, lam):
        case = CaseRealization(tag, 2)
        s2 = histogram_series(valuation_histogram(case, lam, cfg(2), require_determined=False))
        s3 = histogram_series(valuation_histogram(case, lam, cfg(3), require_determined=False))
        for v, c in s2.coeffs.items():
            assert s3.coefficient(v) == c

    def test_json_round_trip(self):
        h = valuation_histogram(CaseRealization("hermitian", 2), (1, 0), cfg(2))
        assert ValuationHistogram.from_json(h.to_json()) == h


class TestKInvariance:
    @pytest.mark.parametrize("tag,lam", [("symmetric", (1, 0)), ("hermitian", (1, 0)), ("alternating", (2,))])
    def test_translate_by_unit(self, tag, lam):
        case = CaseRealization(tag, len(lam))
        c = cfg(2).with_extension(case.extension)
        rng = random.Random(7)
        x = case.representative(lam, c.rho, P)
        base = valuation_histogram(case, x, c, require_determined=False)
        for _ in range(3):
            k0 = random_unit_matrix(rng, case.size, P, c.rho, case.extension)
            moved = valuation_histogram(case, case.act(k0, x), c, require_determined=False)
            assert moved == base


class TestSignature:
    def test_symmetric_rank_one_classes(self):
        case = CaseRealization("symmetric", 1)
        c = cfg(3)
        x = parse_matrix([[3]], c.rho)
        y = parse_matrix([[3 * c.rho]], c.rho)
        assert orbit_signature(case, x, c) != orbit_signature(case, y, c)

    def test_hermitian_uniformizer_nontrivial(self):
        case = CaseRealization("hermitian", 1)
        c = cfg(3, extension=True)
        x = parse_matrix([[3]], c.rho)
        assert orbit_signature(case, x, c) != identity_signature(case)

    @pytest.mark.parametrize("tag", ["symmetric", "hermitian", "alternating"])
    def test_identity_class(self, tag):
        case = CaseRealization(tag, 2)
        c = cfg(2).with_extension(case.extension)
        x = case.representative((0, 0), c.rho, P)
        assert orbit_signature(case, x, c) == identity_signature(case)

    def test_vanishing_invariant(self):
        case = CaseRealization("symmetric", 1)
        with pytest.raises(NotInOpenOrbit):
            orbit_signature(case, parse_matrix([[9]], 2), cfg(2))

    @pytest.mark.parametrize("tag,lam", [("symmetric", (1, 0)), ("symmetric", (2, 1)),
                                         ("hermitian", (1, 0)), ("alternating", (1, 0))])
    def test_constant_on_borel_orbits(self, tag, lam):
        case = CaseRealization(tag, len(lam))
        c = cfg(4).with_extension(case.extension)
        rng = random.Random(11)
        x = case.representative(lam, c.rho, P)
        sig = orbit_signature(case, x, c)
        for _ in range(20):
            b = random_unit_matrix(rng, case.size, P, c.rho, case.extension, lower=True)
            assert orbit_signature(case, case.act(b, x), c) == sig


class TestMatch:
    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    @pytest.mark.parametrize("a", [0, 1, 2])
    def test_hermitian_rank_one(self, m, a):
        r = oracle_match("hermitian", (a,), cfg(m))
        assert r.ok and r.matched == 1
        # the sign twist of the hermitian coordinates gives c = (-1)^a
        assert r.constant.value == (-1) ** a
        assert not r.constant.sqrt_q

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_alternating_rank_one(self, m):
        r = oracle_match("alternating", (2,), cfg(m))
        assert r.ok and r.constant.value == 1

    # fitted at p = 3, m = 2 and m = 3 from the enumeration; frozen
    HERMITIAN_CONSTANTS = {
        (0, 0): (Fraction(3, 5), False),
        (1, 0): (Fraction(-9, 10), True),
        (1, 1): (Fraction(-27, 5), False),
        (2, 0): (Fraction(27, 10), False),
        (0, -1): (Fraction(1, 10), True),
        (2, 1): (Fraction(81, 10), True),
    }

    @pytest.mark.parametrize("lam", list(HERMITIAN_CONSTANTS))
    def test_hermitian_rank_two_constants(self, lam):
        fits = []
        for m in (2, 3):
            r = oracle_match("hermitian", lam, cfg(m))
            assert r.ok
            assert r.matched >= 1
            fits.append((r.constant.value, r.constant.sqrt_q))
        assert fits[0] == fits[1] == self.HERMITIAN_CONSTANTS[lam]

    def test_hermitian_zero_constant_formula(self):
        q = Fraction(P)
        r = oracle_match("hermitian", (0, 0), cfg(2))
        assert r.constant.value == (q * q - q) / (q * q + 1)

    def test_reuse_fitted_constant(self):
        fit = oracle_match("hermitian", (1, 0), cfg(2)).constant
        r = oracle_match("hermitian", (1, 0), cfg(3), c_fit=fit)
        assert r.ok and r.matched >= 2

    def test_symmetric_has_no_closed_form(self):
        with pytest.raises(NoClosedForm):
            oracle_match("symmetric", (0, 0), cfg(1))

    def test_level_too_small(self):
        with pytest.raises(LevelTooSmall):
            oracle_match("hermitian", (2, 2), cfg(1))

    def test_budget(self):
        with pytest.raises(UnsupportedCase):
            valuation_histogram(CaseRealization("alternating", 2), (0, 0), cfg(2))

    def test_bad_length(self):
        with pytest.raises(BadLength):
            CaseRealization("hermitian", 2).representative((0,), 2, P)


@pytest.mark.slow
def test_alternating_rank_two_level_two():
    # 3^16 row prefixes: above the default budget, so raise it explicitly (about 80 s)
    case = CaseRealization("alternating", 2)
    h = valuation_histogram(case, (0, 0), cfg(2), budget=10 ** 8)
    r = oracle_match("alternating", (0, 0), cfg(2), hist=h)
    assert r.ok
    assert [(v, a) for v, a, _ in r.rows] == [((0, 0), Fraction(9, 13)), ((1, 0), Fraction(8, 39))]
    assert r.constant.value == Fraction(9, 13)
