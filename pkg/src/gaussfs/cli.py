"""Command-line front end: ``gaussfs <command> ...``.

Every command writes JSON to stdout (or ``--out``) and diagnostics to
stderr.  Exit codes: 0 success, 1 a verification failed (the witness is in
the output), 2 usage error, 3 inconclusive intersectivity.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import _kernels
from .boxlab import (
    BoxSubset,
    CorrelationSpec,
    dp_domain,
    expansion_terms,
    find_forbidden_pair,
    indicator_correlation,
    lattice_partition,
    max_avoiding_density,
    partition_checks,
    rational_json,
)
from .gaussian import GaussianInt, enumerate_box, parse_gaussian
from .ideals import FactoringEffortExceeded, factor_ideal
from .intersective import (
    INCONCLUSIVE,
    DEFAULT_EFFORT,
    Effort,
    NoRootError,
    NotIntersectiveError,
    build_q_a,
    decide_intersective,
)
from .poly import PolyParseError, mp_squared, parse_poly
from .suites import SUITES, run_suite, summarize
from .thresholds import threshold_report

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# region argument types


def _poly(text: str):
    try:
        p = parse_poly(text)
    except PolyParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if p.is_zero():
        raise argparse.ArgumentTypeError("the zero polynomial is not allowed")
    return p


def _gaussian(text: str) -> GaussianInt:
    try:
        return parse_gaussian(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def _nonnegative(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {v}")
    return v


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational p/q: {text!r}") from None


def _domain(text: str):
    if text == "dp":
        return ("dp", None)
    if text.startswith("box:"):
        return ("box", _positive(text[4:]))
    raise argparse.ArgumentTypeError("domain must be 'dp' or 'box:<side>'")


def _suite(text: str) -> str:
    name = text[6:] if text.startswith("suite:") else text
    if name not in SUITES:
        raise argparse.ArgumentTypeError(f"unknown suite {text!r}; known: "
                                         + ", ".join("suite:" + s for s in SUITES))
    return name


def read_set(spec: str) -> list[GaussianInt]:
    """A set given inline ("1+i, 2+2i") or as a file with one element per line."""
    path = Path(spec)
    if path.is_file():
        items = [ln.split("#", 1)[0] for ln in path.read_text().splitlines()]
    else:
        items = spec.replace(";", ",").split(",")
    out = []
    for item in items:
        item = item.strip()
        if item:
            try:
                out.append(parse_gaussian(item))
            except ValueError as exc:
                raise UsageError(str(exc)) from None
    return out

# endregion


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for randomized sweeps (default 0)")
    common.add_argument("--threads", type=_positive, default=argparse.SUPPRESS,
                        help="worker threads for sweeps (GAUSSINT_THREADS overrides)")
    common.add_argument("--effort", type=_positive, default=argparse.SUPPRESS,
                        help="Pollard-rho iteration bound when factoring for the "
                             f"intersectivity decision (default {DEFAULT_EFFORT.factor_iter})")
    common.add_argument("--exact-limit", type=_positive, default=argparse.SUPPRESS,
                        help="largest N for exact extremal search (default 4)")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output path (default stdout)")

    ap = argparse.ArgumentParser(prog="gaussfs", parents=[common],
                                 description="Exact experiments with Gaussian integers, "
                                             "intersective polynomials and difference sets.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("factor", parents=[common], help="prime factorization of an ideal")
    p.add_argument("alpha", type=_gaussian)

    p = sub.add_parser("intersective", parents=[common], help="decide intersectivity")
    p.add_argument("poly", type=_poly)

    p = sub.add_parser("build-qa", parents=[common], help="auxiliary polynomial q_a")
    p.add_argument("poly", type=_poly)
    p.add_argument("alpha", type=_gaussian)

    p = sub.add_parser("verify-avoidance", parents=[common],
                       help="check that no difference of the set is a nonzero value of poly")
    p.add_argument("--poly", type=_poly, required=True)
    p.add_argument("--set", dest="set_spec", required=True, help="file or inline list")

    p = sub.add_parser("max-density", parents=[common], help="largest avoiding subset of [N]")
    p.add_argument("--poly", type=_poly, required=True)
    p.add_argument("--N", type=_positive, required=True)
    p.add_argument("--mode", choices=("exact", "greedy"), default="exact")

    p = sub.add_parser("correlate", parents=[common], help="correlation functionals on [N]")
    p.add_argument("--poly", type=_poly, required=True)
    p.add_argument("--N", type=_positive, required=True)
    p.add_argument("--set", dest="set_spec", required=True)
    p.add_argument("--j", type=_nonnegative, required=True)
    p.add_argument("--hside", type=_positive, required=True)
    p.add_argument("--domain", type=_domain, default=("dp", None))

    p = sub.add_parser("partition", parents=[common], help="lattice partition of [M]")
    p.add_argument("--M", type=_positive, required=True)
    p.add_argument("--xi", type=_gaussian, required=True)
    p.add_argument("--m", type=_positive, required=True)

    p = sub.add_parser("thresholds", parents=[common], help="threshold constants")
    p.add_argument("--d", type=_positive, required=True)
    p.add_argument("--r", type=_positive, required=True)
    p.add_argument("--delta", type=_rational, required=True)
    p.add_argument("--mp2", type=_positive, required=True)

    p = sub.add_parser("sweep", parents=[common], help="run a seeded verification suite")
    p.add_argument("suite", type=_suite, help="suite:<name>")
    p.add_argument("--cases", type=_nonnegative, default=None)
    return ap


def _config(ns: argparse.Namespace) -> argparse.Namespace:
    ns.seed = getattr(ns, "seed", 0)
    ns.threads = getattr(ns, "threads", 1)
    env = os.environ.get("GAUSSINT_THREADS", "").strip()
    if env:
        try:
            ns.threads = _positive(env)
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"GAUSSINT_THREADS: {exc}") from None
    ns.effort = Effort(factor_iter=getattr(ns, "effort", DEFAULT_EFFORT.factor_iter))
    ns.exact_limit = getattr(ns, "exact_limit", 4)
    ns.out = getattr(ns, "out", None)
    return ns


def _dumps(obj) -> str:
    return json.dumps(obj)


# region commands


def cmd_factor(ns):
    if ns.alpha.is_zero():
        raise UsageError("cannot factor 0")
    fac = factor_ideal(ns.alpha)
    return EXIT_OK, _dumps({"alpha": ns.alpha.to_json(), "factors": fac.to_json()})


def cmd_intersective(ns):
    try:
        v = decide_intersective(ns.poly, ns.effort)
    except FactoringEffortExceeded as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE, _dumps({"poly": ns.poly.to_json(), "verdict": INCONCLUSIVE,
                                          "notes": [str(exc)]})
    code = EXIT_INCONCLUSIVE if v.verdict == INCONCLUSIVE else EXIT_OK
    return code, _dumps(v.to_json())


def cmd_build_qa(ns):
    try:
        cons = build_q_a(ns.poly, ns.alpha, ns.effort)
    except NotIntersectiveError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAIL, _dumps({"error": "not-intersective", "detail": str(exc)})
    except NoRootError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INCONCLUSIVE, _dumps({"error": "inconclusive", "detail": str(exc)})
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    data = cons.to_json()
    return (EXIT_OK if all(data["checks"].values()) else EXIT_FAIL), _dumps(data)


def cmd_verify_avoidance(ns):
    pts = read_set(ns.set_spec)
    if ns.poly.degree < 1:
        raise UsageError("avoidance needs a nonconstant polynomial")
    res = find_forbidden_pair(sorted(set(pts), key=lambda z: (z.im, z.re)), ns.poly)
    data = {"poly": ns.poly.to_json(), "size": len(set(pts)), **res.to_json()}
    if not res.avoids:
        print("avoidance violated", file=sys.stderr)
    return (EXIT_OK if res.avoids else EXIT_FAIL), _dumps(data)


def cmd_max_density(ns):
    if ns.poly.degree < 1:
        raise UsageError("need a nonconstant polynomial")
    if ns.mode == "exact" and ns.N > ns.exact_limit:
        raise UsageError(f"exact search is limited to N <= {ns.exact_limit} (see --exact-limit)")
    res = max_avoiding_density(ns.N, ns.poly, ns.mode, ns.exact_limit)
    return EXIT_OK, _dumps({"poly": ns.poly.to_json(), **res.to_json()})


def cmd_correlate(ns):
    try:
        A = BoxSubset(ns.N, tuple(read_set(ns.set_spec)))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    kind, side = ns.domain
    notes = []
    if kind == "dp":
        if ns.poly.degree < 1:
            raise UsageError("the dp domain needs a nonconstant polynomial")
        D = tuple(dp_domain(ns.N, ns.poly))
        notes.append("dp domain offset is ceil(M_p)(1+i), computed from M_p^2 = "
                     f"{mp_squared(ns.poly)}")
    else:
        D = tuple(enumerate_box(side))
    spec = CorrelationSpec(ns.poly, D, ns.hside, ns.j)
    terms = expansion_terms(A, spec)
    d = A.delta
    expansion = terms["AA"] - d * terms["AB"] - d * terms["BA"] + d * d * terms["BB"]
    data = {
        "poly": ns.poly.to_json(), "set": A.to_json(), "j": ns.j, "hside": ns.hside,
        "domain": [z.to_json() for z in D],
        "correlation": rational_json(terms["correlation"]),
        "indicator_correlation": rational_json(indicator_correlation(A, spec)),
        "expansion": {k: rational_json(terms[k]) for k in ("AA", "AB", "BA", "BB")},
        "expansion_identity": terms["correlation"] == expansion,
        "notes": notes,
    }
    return (EXIT_OK if data["expansion_identity"] else EXIT_FAIL), _dumps(data)


def cmd_partition(ns):
    if ns.xi.is_zero():
        raise UsageError("xi must be nonzero")
    part = lattice_partition(ns.M, ns.xi, ns.m)
    checks = partition_checks(part)
    data = {**part.to_json(), "checks": checks}
    return (EXIT_OK if all(checks.values()) else EXIT_FAIL), _dumps(data)


def cmd_thresholds(ns):
    try:
        rep = threshold_report(ns.d, ns.r, ns.delta, ns.mp2)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return EXIT_OK, _dumps(rep)


def cmd_sweep(ns):
    records = []
    lines = []
    for rec in run_suite(ns.suite, ns.cases, ns.seed, ns.threads):
        records.append(rec)
        lines.append(json.dumps(rec, separators=(",", ":")))
    summary = summarize(ns.suite, records, ns.seed)
    lines.append(json.dumps({"summary": summary}, separators=(",", ":")))
    print(f"suite:{ns.suite} {summary['passed']}/{summary['cases']} pass "
          f"(kernels: {_kernels.backend()})", file=sys.stderr)
    return (EXIT_OK if summary["pass"] else EXIT_FAIL), "\n".join(lines)

# endregion


COMMANDS = {
    "factor": cmd_factor,
    "intersective": cmd_intersective,
    "build-qa": cmd_build_qa,
    "verify-avoidance": cmd_verify_avoidance,
    "max-density": cmd_max_density,
    "correlate": cmd_correlate,
    "partition": cmd_partition,
    "thresholds": cmd_thresholds,
    "sweep": cmd_sweep,
}


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        ns = _config(ns)
        code, text = COMMANDS[ns.command](ns)
    except UsageError as exc:
        print(f"gaussfs {ns.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if ns.out:
        Path(ns.out).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return code


def main() -> None:
    sys.exit(dispatch())
