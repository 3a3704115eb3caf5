from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from padic_spherical.algebra import LaurentExpr

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def laurent_exprs(nvars: int = 2, max_terms: int = 4, lo: int = -2, hi: int = 2):
    exps = st.tuples(*[st.integers(lo, hi) for _ in range(nvars + 1)])
    return st.dictionaries(exps, coefficients, max_size=max_terms).map(lambda d: LaurentExpr(d, nvars))


def nonzero_laurent(nvars: int = 2, max_terms: int = 3):
    return laurent_exprs(nvars, max_terms).filter(lambda e: not e.is_zero())


def polynomials(nvars: int = 1, max_terms: int = 3, hi: int = 2):
    return laurent_exprs(nvars, max_terms, 0, hi)


def frac(a, b=1) -> Fraction:
    return Fraction(a, b)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
