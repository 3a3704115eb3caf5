"""Batch command-line front end.

Every subcommand prints one JSON document (``"schema": 1``, sorted keys,
rationals as strings).  Exit codes: 0 success, 1 verification failure,
2 usage error.  Progress of long enumerations goes to stderr.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable

from .algebra import LaurentExpr, RatFunc, series_expand
from .errors import (
    BadLength,
    CosetDecompositionFailure,
    LevelTooSmall,
    MismatchBeyondTail,
    MismatchFailure,
    NoClosedForm,
    NotInOpenOrbit,
    SphericalError,
    UnsupportedCase,
)
from .hall_littlewood import Partition, hl_polynomial, monomial_expansion
from .oracle.enumerate import valuation_histogram
from .oracle.hecke import hecke_eigen_check
from .oracle.match import closed_series_source, oracle_match
from .oracle.realization import CaseRealization
from .oracle.rings import PAdicConfig
from .spherical import (
    casselman_reconstruct,
    check_cocycle,
    check_functional_equation,
    feq_factor,
    get_case,
    prefactor,
    spherical_closed_form,
    case_hl,
)
from .store import FixtureStore, canonical_json
from .weyl import WeylElement, all_elements, gamma_product, poincare_sum, weyl_act
from .zeta.stepfn import fourier_finite, random_step_function
from .zeta.zeta import gamma_extract, scaling_check, standard_test_functions, tate_gamma_expected

SCHEMA = 1
SUBCOMMANDS = ("hl", "spherical", "feq", "reconstruct", "oracle", "hecke", "tate", "selftest")


class UsageError(Exception):
    pass


class VerificationFailure(Exception):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


def _names(n: int, param: str = "q") -> tuple[str, ...]:
    return (param,) + tuple(f"x{i}" for i in range(1, n + 1))


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def _progress(done: int, total: int) -> None:
    print(f"progress {done}/{total}", file=sys.stderr, flush=True)


# ---------------------------------------------------------------------------
# commands: each takes a dict of canonical arguments and returns a result dict
# with a "verdict" entry ("pass" / "fail")
# ---------------------------------------------------------------------------

def cmd_hl(a: dict) -> dict:
    lam = Partition(tuple(a["lambda"]))
    n = a.get("n") or lam.n
    if n != lam.n:
        raise UsageError(f"--n {n} disagrees with the {lam.n} parts of --lambda")
    P = hl_polynomial(lam, n)
    mono = monomial_expansion(P)
    lead = mono.get(lam)
    integral = all(c.denominator == 1 for e in mono.values() for c in e.terms.values())
    ok = lead is not None and lead.is_constant() and lead.constant_value() == 1 and integral
    return {
        "polynomial": P.to_grouped_text("t"),
        "monomial_basis": [[list(mu.parts), e.to_text(("t",))] for mu, e in sorted(mono.items(), key=lambda kv: kv[0].parts, reverse=True)],
        "verdict": _verdict(ok),
    }


def cmd_spherical(a: dict) -> dict:
    lam = Partition(tuple(a["lambda"]))
    case = get_case(a["case"], lam.n)
    case.require_closed_form()
    n = lam.n
    names = _names(n)
    out = {
        "case": case.tag,
        "t": case.t.to_text(("q",)),
        "prefactor": prefactor(case).to_text(names),
        "hall_littlewood": case_hl(case, lam).to_grouped_text("q"),
        "closed_form": spherical_closed_form(case, lam).to_text(names),
        "normalization": f"c_({','.join(map(str, lam.parts))}) left symbolic",
        "verdict": "pass",
    }
    order = a.get("order")
    if order is not None:
        source, _ = closed_series_source(case.short, lam, a["p"])
        grading = [0] + [1] * (n - 1)
        ser = series_expand(source, grading, order, laurent=True)
        u_names = ("q",) + tuple(f"u{i}" for i in range(1, n))
        out["series"] = {
            "p": a["p"],
            "order": order,
            "coefficients": [[list(k[1:]), str(c)] for k, c in sorted(ser.coeffs.items())],
            "source": source.to_text(u_names),
        }
    return out


def cmd_feq(a: dict) -> dict:
    sigma = WeylElement(tuple(a["sigma"]))
    n = a.get("n") or sigma.n
    if sigma.n != n:
        raise UsageError(f"--sigma has size {sigma.n}, --n is {n}")
    case = get_case(a["case"], n)
    b = feq_factor(case, sigma)
    lams = [Partition(tuple(a["lambda"]))] if a.get("lambda") else [Partition((0,) * n), Partition((1,) + (0,) * (n - 1))]
    feq_rows = [[list(lam.parts), _verdict(check_functional_equation(case, lam, sigma))] for lam in lams]
    cocycle_ok = all(check_cocycle(case, sigma, tau) and check_cocycle(case, tau, sigma) for tau in all_elements(n))
    ok = cocycle_ok and all(v == "pass" for _, v in feq_rows)
    return {
        "case": case.tag,
        "sigma": list(sigma.perm),
        "factor": b.to_text(_names(n)),
        "functional_equation": feq_rows,
        "cocycle": f"cocycle: {_verdict(cocycle_ok)}",
        "convention": "b_{s*t} = b_s * s(b_t), (s*t)(i) = s(t(i)), s acts by x_i -> x_s(i)",
        "verdict": _verdict(ok),
    }


def cmd_reconstruct(a: dict) -> dict:
    lam = Partition(tuple(a["lambda"]))
    case = get_case(a["case"], lam.n)
    r = casselman_reconstruct(case, lam)
    names = _names(lam.n)
    return {
        "case": case.tag,
        "lambda": list(lam.parts),
        "value": r.value.to_text(names),
        "predicted": r.predicted.to_text(names),
        "verdict": _verdict(r.ok),
    }


def _config(a: dict) -> PAdicConfig:
    return PAdicConfig(a["p"], a["m"])


def cmd_oracle(a: dict) -> dict:
    lam = Partition(tuple(a["lambda"]))
    case = get_case(a["case"], lam.n)
    cfg = _config(a)
    real = CaseRealization(case.short, lam.n)
    hist = valuation_histogram(real, lam, cfg.with_extension(real.extension),
                               progress=_progress, require_determined=False)
    out = {"case": case.tag, "histogram": hist.to_json()}
    if not case.has_closed_form:
        out["verdict"] = "pass"
        out["note"] = "no closed form for this case; histogram only"
        return out
    try:
        report = oracle_match(case.short, lam, cfg, hist=hist)
    except MismatchBeyondTail as exc:
        raise VerificationFailure(str(exc), exc.report.to_json() if exc.report is not None else None)
    out["match"] = report.to_json()
    out["verdict"] = _verdict(report.ok)
    return out


def cmd_hecke(a: dict) -> dict:
    lam = Partition(tuple(a["lambda"]))
    report = hecke_eigen_check(a["case"], lam, _config(a))
    doc = report.to_json()
    doc["verdict"] = _verdict(report.ok)
    return doc


def cmd_tate(a: dict) -> dict:
    p = a["p"]
    expected = tate_gamma_expected(p)
    names = ("q", "u")
    gammas = {}
    ok = True
    for name, phi in standard_test_functions(p).items():
        g = gamma_extract(phi)
        gammas[name] = g.to_text(names)
        ok = ok and g == expected
    return {
        "p": p,
        "u": "q^-s",
        "gamma": gammas,
        "expected": expected.to_text(names),
        "identical": len(set(gammas.values())) == 1,
        "verdict": _verdict(ok and len(set(gammas.values())) == 1),
    }


def cmd_fourier(a: dict) -> dict:
    """``F^2`` on seeded random step functions, plus the lattice scaling identity."""
    p, count = a["p"], a["count"]
    rng = random.Random(a["seed"])
    passed = 0
    for _ in range(count):
        f = random_step_function(rng, p)
        passed += fourier_finite(fourier_finite(f)) == f.reflect()
    scaling = []
    for e in (1, 2):
        for m in (0, 1, 2):
            try:
                scaling.append(scaling_check((e,), 1, m, p).to_json())
            except MismatchFailure as exc:
                scaling.append(exc.report.to_json())
    ok = passed == count and all(s["verdict"] == "pass" for s in scaling)
    return {"p": p, "involution": {"checked": count, "passed": passed}, "scaling": scaling,
            "verdict": _verdict(ok)}


def cmd_poincare(a: dict) -> dict:
    n = a["n"]
    t = LaurentExpr.q(n)
    gp = gamma_product(n, t)
    total = None
    for sigma in all_elements(n):
        term = weyl_act(sigma, gp)
        total = term if total is None else total + term
    expected = RatFunc(poincare_sum(n, t))
    return {"n": n, "sum": total.to_text(_names(n, "t")), "verdict": _verdict(total == expected)}


COMMANDS: dict[str, Callable[[dict], dict]] = {
    "hl": cmd_hl,
    "spherical": cmd_spherical,
    "feq": cmd_feq,
    "reconstruct": cmd_reconstruct,
    "oracle": cmd_oracle,
    "hecke": cmd_hecke,
    "tate": cmd_tate,
    "fourier": cmd_fourier,
    "poincare": cmd_poincare,
}


def selftest_plan() -> list[tuple[str, dict]]:
    plan: list[tuple[str, dict]] = [
        ("hl", {"lambda": [2, 0], "n": 2}),
        ("hl", {"lambda": [2, 1, 0], "n": 3}),
        ("hl", {"lambda": [1, 0, -1], "n": 3}),
    ]
    plan += [("poincare", {"n": n}) for n in (1, 2, 3)]
    for case in ("hermitian", "alternating"):
        plan.append(("spherical", {"case": case, "lambda": [1, 0], "order": None, "p": 3}))
        for perm in ([2, 1], [2, 3, 1], [3, 2, 1]):
            plan.append(("feq", {"case": case, "n": len(perm), "sigma": perm, "lambda": None}))
        for lam in ([0, 0], [2, 1], [1, 0, -1]):
            plan.append(("reconstruct", {"case": case, "lambda": lam}))
    for m in (1, 2, 3):
        plan.append(("oracle", {"case": "hermitian", "lambda": [1], "p": 3, "m": m}))
        plan.append(("oracle", {"case": "alternating", "lambda": [2], "p": 3, "m": m}))
    plan.append(("oracle", {"case": "symmetric", "lambda": [0, 0], "p": 3, "m": 1}))
    plan.append(("oracle", {"case": "hermitian", "lambda": [1, 0], "p": 3, "m": 2}))
    plan.append(("hecke", {"case": "symmetric", "lambda": [1], "p": 3, "m": 3}))
    plan.append(("hecke", {"case": "symmetric", "lambda": [0, 0], "p": 3, "m": 2}))
    plan.append(("tate", {"p": 3}))
    plan.append(("fourier", {"p": 3, "count": 20, "seed": 0}))
    return plan


def document(command: str, args: dict, result: dict) -> dict:
    return {"schema": SCHEMA, "command": command, "args": args, "result": result}


def _run_selftest(store: FixtureStore | None, mode: str | None) -> tuple[dict, bool]:
    rows = []
    all_ok = True
    for command, args in selftest_plan():
        print(f"selftest {command} {canonical_json(args).strip()}", file=sys.stderr, flush=True)
        try:
            result = COMMANDS[command](args)
        except VerificationFailure as exc:
            result = {"verdict": "fail", "error": str(exc), "report": exc.report}
        doc = document(command, args, result)
        row = {"command": command, "args": args, "verdict": result["verdict"]}
        ok = result["verdict"] == "pass"
        if store is not None and mode == "record":
            row["fixture"] = store.path(command, args).name
            store.record(command, args, doc)
        elif store is not None and mode == "verify":
            check = store.verify(command, args, doc)
            row["fixture"] = check.to_json()
            ok = ok and check.ok
        all_ok = all_ok and ok
        rows.append(row)
    return {"checks": rows, "verdict": _verdict(all_ok)}, all_ok


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

def _int_list(text: str) -> list[int]:
    try:
        return [int(s) for s in text.replace(" ", "").split(",") if s != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="padic-spherical", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=SUBCOMMANDS)
    parser.add_argument("--case", choices=("hermitian", "alternating", "symmetric"))
    parser.add_argument("--n", type=int)
    parser.add_argument("--lambda", dest="lam", type=_int_list)
    parser.add_argument("--p", type=int, default=3)
    parser.add_argument("--m", type=int, default=2)
    parser.add_argument("--sigma", type=_int_list)
    parser.add_argument("--order", type=int)
    parser.add_argument("--fixtures", type=Path)
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--record", dest="mode", action="store_const", const="record")
    mode.add_argument("--verify", dest="mode", action="store_const", const="verify")
    parser.add_argument("--json", dest="json_path", type=Path)
    return parser


def _require(ns, *names):
    missing = [n for n in names if getattr(ns, n) is None]
    if missing:
        flags = ", ".join("--lambda" if n == "lam" else f"--{n}" for n in missing)
        raise UsageError(f"{ns.command} requires {flags}")


def canonical_args(ns) -> dict:
    c = ns.command
    if c == "hl":
        _require(ns, "lam")
        return {"lambda": ns.lam, "n": ns.n or len(ns.lam)}
    if c == "spherical":
        _require(ns, "case", "lam")
        return {"case": ns.case, "lambda": ns.lam, "order": ns.order, "p": ns.p}
    if c == "feq":
        _require(ns, "case", "sigma")
        return {"case": ns.case, "n": ns.n or len(ns.sigma), "sigma": ns.sigma, "lambda": ns.lam}
    if c == "reconstruct":
        _require(ns, "case", "lam")
        return {"case": ns.case, "lambda": ns.lam}
    if c in ("oracle", "hecke"):
        _require(ns, "case", "lam")
        return {"case": ns.case, "lambda": ns.lam, "p": ns.p, "m": ns.m}
    if c == "tate":
        return {"p": ns.p}
    return {}


def _check_primes(ns) -> None:
    if ns.command in ("oracle", "hecke", "tate", "spherical"):
        p = ns.p
        if p < 3 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise UsageError("--p must be an odd prime")
    if ns.command in ("oracle", "hecke") and ns.m < 1:
        raise UsageError("--m must be at least 1")
    if ns.lam is not None and ns.command in ("hl", "spherical", "reconstruct", "oracle", "hecke"):
        if list(ns.lam) != sorted(ns.lam, reverse=True) or not ns.lam:
            raise UsageError("--lambda must be a non-increasing, non-empty list")
    if ns.sigma is not None and sorted(ns.sigma) != list(range(1, len(ns.sigma) + 1)):
        raise UsageError("--sigma must be a permutation of 1..n")


def _emit(doc: dict, json_path: Path | None) -> None:
    text = canonical_json(doc)
    if json_path is not None:
        json_path.write_text(text)
    sys.stdout.write(text)


def run(argv: list[str] | None = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        if ns.mode is not None and ns.fixtures is None:
            raise UsageError("--record/--verify need --fixtures")
        _check_primes(ns)
        args = canonical_args(ns)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2

    store = FixtureStore(ns.fixtures) if ns.fixtures is not None else None
    try:
        if ns.command == "selftest":
            result, ok = _run_selftest(store, ns.mode)
            _emit(document("selftest", {"mode": ns.mode}, result), ns.json_path)
            return 0 if ok else 1
        result = COMMANDS[ns.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except VerificationFailure as exc:
        _emit(document(ns.command, args, {"verdict": "fail", "error": str(exc), "report": exc.report}), ns.json_path)
        return 1
    except (CosetDecompositionFailure, MismatchFailure) as exc:
        report = getattr(exc, "report", None)
        _emit(document(ns.command, args, {"verdict": "fail", "error": str(exc),
                                          "report": report.to_json() if report is not None else None}), ns.json_path)
        return 1
    except (BadLength, NoClosedForm, LevelTooSmall, UnsupportedCase, NotInOpenOrbit, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except SphericalError as exc:
        _emit(document(ns.command, args, {"verdict": "fail", "error": f"{type(exc).__name__}: {exc}"}), ns.json_path)
        return 1

    doc = document(ns.command, args, result)
    ok = result["verdict"] == "pass"
    if store is not None and ns.mode == "record":
        store.record(ns.command, args, doc)
    elif store is not None and ns.mode == "verify":
        check = store.verify(ns.command, args, doc)
        if not check.ok:
            doc["fixture"] = check.to_json()
            ok = False
    _emit(doc, ns.json_path)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())
