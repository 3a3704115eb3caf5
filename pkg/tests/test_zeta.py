import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padic_spherical.algebra import LaurentExpr, RatFunc
from padic_spherical.errors import MismatchFailure, UnsupportedCase, WindowOverflow, ZeroZeta
from padic_spherical.zeta.cyclotomic import Cyclo
from padic_spherical.zeta.stepfn import (
    ball,
    fourier_finite,
    from_rationals,
    random_step_function,
    shell,
)
from padic_spherical.zeta.zeta import (
    PVContext,
    conductor_correction,
    gamma_extract,
    scaling_check,
    scaling_factor,
    standard_test_functions,
    tate_gamma_expected,
    tate_zeta,
    zeta_step,
)

P = 3
q = Fraction(P)
u = LaurentExpr.x(1, 1)
one = LaurentExpr.const(1, 1)


class TestCyclotomic:
    def test_root_has_order(self):
        z = Cyclo.from_powers(3, 2, {1: 1})
        acc = Cyclo.rational(3, 2, 1)
        for k in range(1, 10):
            acc = acc * z
            assert acc.is_rational() == (k % 9 == 0)
        assert acc == 1

    def test_sum_of_roots_vanishes(self):
        total = Cyclo.from_powers(5, 1, {k: 1 for k in range(5)})
        assert total.is_zero()

    def test_lift(self):
        z3 = Cyclo.from_powers(3, 1, {1: 1})
        assert z3.lift(2) == Cyclo.from_powers(3, 2, {3: 1})

    @given(st.lists(st.integers(-3, 3), min_size=6, max_size=6),
           st.lists(st.integers(-3, 3), min_size=6, max_size=6),
           st.lists(st.integers(-3, 3), min_size=6, max_size=6))
    def test_ring_axioms(self, a, b, c):
        x, y, z = (Cyclo(3, 2, v) for v in (a, b, c))
        assert x * y == y * x
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z


class TestFourier:
    def test_unit_ball_self_dual(self):
        assert fourier_finite(ball(P, 0)) == ball(P, 0)

    def test_scaled_ball(self):
        assert fourier_finite(ball(P, 1)) == ball(P, -1).scale(Fraction(1, P))

    def test_units(self):
        expect = ball(P, 0) - ball(P, -1).scale(Fraction(1, P))
        assert fourier_finite(shell(P, 0)) == expect

    @pytest.mark.parametrize("seed", range(10))
    def test_linearity(self, seed):
        rng = random.Random(seed)
        f, g = random_step_function(rng, P), random_step_function(rng, P)
        assert fourier_finite(f + g.scale(2)) == fourier_finite(f) + fourier_finite(g).scale(2)

    @pytest.mark.parametrize("seed", range(20))
    def test_involution_line(self, seed):
        f = random_step_function(random.Random(seed), P)
        assert fourier_finite(fourier_finite(f)) == f.reflect()

    @pytest.mark.parametrize("seed", range(5))
    def test_involution_plane(self, seed):
        f = random_step_function(random.Random(100 + seed), P, dim=2, max_width=1)
        assert fourier_finite(fourier_finite(f, "dot"), "dot") == f.reflect()
        # the alternating pairing is antisymmetric, so the two sign flips cancel
        assert fourier_finite(fourier_finite(f, "symplectic"), "symplectic") == f

    def test_support_window(self):
        f = from_rationals(P, 0, 1, 1, [0, 1, 2])
        assert f.evaluate([(1, -1)]) == 0
        assert f.evaluate([(1, 0)]) == 1
        assert f.evaluate([(5, 0)]) == 2

    def test_window_overflow(self):
        with pytest.raises(WindowOverflow):
            fourier_finite(ball(P, 1), window=(0, 0))


class TestZeta:
    def test_unit_ball(self):
        # integral over O of |x|^s dx with u = q^-s
        assert zeta_step(ball(P, 0)) == RatFunc(one * (1 - 1 / q), one - u * (1 / q))

    def test_units(self):
        assert zeta_step(shell(P, 0)) == RatFunc(one * (1 - 1 / q))

    def test_scaled_ball(self):
        expect = RatFunc(u * (1 / q) * (1 - 1 / q), one - u * (1 / q))
        assert zeta_step(ball(P, 1)) == expect

    def test_pole(self):
        z = zeta_step(ball(P, 0))
        assert z.den == RatFunc(one, one - u * (1 / q)).den

    def test_zero(self):
        with pytest.raises(ZeroZeta):
            gamma_extract(from_rationals(P, 0, 0, 1, [0]))

    def test_irrational_values_unsupported(self):
        phi = fourier_finite(from_rationals(P, 0, 1, 1, [0, 1, 0]))
        with pytest.raises(UnsupportedCase):
            zeta_step(phi)


class TestGamma:
    def test_expected_form(self):
        # (1 - q^-s) / (1 - q^(s-1)) with u = q^-s
        assert tate_gamma_expected(P) == RatFunc(one - u, one - u ** -1 * (1 / q))

    @pytest.mark.parametrize("name", ["1_O", "1_O^x", "1_piO"])
    def test_standard_functions(self, name):
        phi = standard_test_functions(P)[name]
        assert gamma_extract(phi) == tate_gamma_expected(P)

    @pytest.mark.parametrize("p", [5, 7])
    def test_other_primes(self, p):
        for phi in standard_test_functions(p).values():
            assert gamma_extract(phi) == tate_gamma_expected(p)

    def test_tate_zeta_unit_ball(self):
        assert tate_zeta(ball(P, 0)) == RatFunc(one * (1 - 1 / q), one - u)

    def test_conductor_correction(self):
        c = conductor_correction(1, PVContext(1, (1,)), P)
        assert c == RatFunc(u ** -1 * q)
        assert conductor_correction(0, PVContext(2, (1, 2)), P) == RatFunc(1, nvars=2)


class TestScaling:
    @pytest.mark.parametrize("e", [1, 2])
    @pytest.mark.parametrize("m", [0, 1, 2])
    def test_identity(self, e, m):
        assert scaling_check((e,), 1, m, P).ok

    def test_examples(self):
        assert scaling_factor(PVContext(1, (1,)), 0, P) == RatFunc(1, nvars=1)
        assert scaling_factor(PVContext(1, (1,)), 1, P) == RatFunc(u * (1 / q ** 2))
        assert scaling_factor(PVContext(1, (1,)), 2, P) == RatFunc(u ** 2 * (1 / q ** 4))

    def test_multiplicative_in_m(self):
        ctx = PVContext(1, (2,))
        for a in range(3):
            for b in range(3):
                assert scaling_factor(ctx, a + b, P) == scaling_factor(ctx, a, P) * scaling_factor(ctx, b, P)

    def test_two_invariants(self):
        assert scaling_check((1, 1), 1, 2, P, exponents=[[1, 0], [0, 1]]).ok

    def test_wrong_factor_detected(self):
        with pytest.raises(ValueError):
            scaling_check((2,), 1, 1, P, exponents=[[1, 0]])

    def test_extension_unsupported(self):
        with pytest.raises(UnsupportedCase):
            scaling_check((1,), 2, 1, P)


def test_mismatch_failure_carries_report():
    exc = MismatchFailure("boom", report={"x": 1})
    assert exc.report == {"x": 1}
