"""Command-line front end: ``macbinom compute|verify|interpolate``."""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from pathlib import Path
from typing import Any, Optional, Sequence

from . import binomial as bn
from . import diffops as dops
from . import newton as nw
from .exact import PoleError, parse_expression, substitute
from .macdonald import ContractError, H_norm, ShiftedSymPoly, interp_P_star, macdonald_P
from .partitions import ContainmentError, Partition, enumerate_partitions, format_partition, parse_partition
from .serialization import poly_from_json, poly_to_json
from .verify import MODES, SUITES, Bounds, report, run

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_POLE, EXIT_CONTRACT = 0, 1, 2, 3, 4

COMPUTE_TARGETS = ("pstar", "macdonald", "binom", "trinom", "omega", "hnorm", "eigentable")


class UsageError(ValueError):
    pass


def _partition(text: Optional[str], flag: str) -> Partition:
    if text is None:
        raise UsageError(f"{flag} is required")
    try:
        return parse_partition(text)
    except ValueError as exc:
        raise UsageError(f"invalid partition for {flag}: {exc}") from None


def _n_for(*parts: Partition, n: Optional[int] = None) -> int:
    need = max([len(p) for p in parts] + [1])
    if n is None:
        return need
    if n < need:
        raise UsageError(f"--n {n} is smaller than the number of parts ({need})")
    return n


def _assignment(pairs: Optional[Sequence[str]]) -> dict[str, Any]:
    out = {}
    for item in pairs or ():
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or name not in ("q", "t", "a", "u", "theta"):
            raise UsageError(f"--at expects NAME=VALUE with NAME one of q, t, a, u, theta; got {item!r}")
        out[name] = parse_expression(value)
    return out


def _emit(doc: Any, output: Optional[str]):
    text = json.dumps(doc, ensure_ascii=False)
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


# --------------------------------------------------------------------------
# compute


def cmd_compute(args) -> int:
    target = args.target
    if target in ("pstar", "macdonald"):
        mu = _partition(args.mu, "--mu")
        n = _n_for(mu, n=args.n)
        poly = interp_P_star(mu, n) if target == "pstar" else macdonald_P(mu, n)
        at = _assignment(args.at)
        if at:
            poly = ShiftedSymPoly(poly.n, substitute(poly.expr, at))
        _emit(poly_to_json(poly), args.output)
        return EXIT_OK
    if target == "binom":
        lam, mu = _partition(args.lam, "--lambda"), _partition(args.mu, "--mu")
        value = bn.binom_qt(lam, mu, "inv" if args.inverse else "qt")
    elif target == "trinom":
        beta = _partition(args.beta, "--beta")
        lam, nu = _partition(args.lam, "--lambda"), _partition(args.nu, "--nu")
        value = bn.trinomial(beta, lam, nu)
    elif target == "omega":
        nu, lam = _partition(args.nu, "--nu"), _partition(args.lam, "--lambda")
        if args.regime == "jack":
            value = nw.omega_theta(nu, lam)
        else:
            value = nw.omega_qt(nu, lam)
    elif target == "hnorm":
        value = H_norm(_partition(args.mu, "--mu"))
    elif target == "eigentable":
        n = args.n or 2
        size = 3 if args.max_size is None else args.max_size
        idx = enumerate_partitions(size, n)
        if args.k is None:
            table = {mu: dops.dstar_eigenvalue(mu, n) for mu in idx}
            op = dops.apply_Dstar
        else:
            if not 0 <= args.k <= n:
                raise UsageError("--k must lie between 0 and --n")
            table = {mu: dops.dk_eigenvalue(args.k, mu, n) for mu in idx}
            op = dops.extract_Dk(n)[args.k]
        # read the table off the operator itself and compare with the closed form
        measured = dops.harish_chandra_table(op, idx, n)
        if any(measured[mu] != table[mu] for mu in idx):
            print("eigenvalue table disagrees with the closed form", file=sys.stderr)
            return EXIT_FAIL
        _emit({"table": {format_partition(mu): str(v) for mu, v in measured.items()}}, args.output)
        return EXIT_OK
    else:  # pragma: no cover - argparse restricts the choices
        raise UsageError(f"unknown target {target}")
    at = _assignment(args.at)
    if at:
        value = substitute(value, at)
    _emit({"value": str(value)}, args.output)
    return EXIT_OK


# --------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    bounds = Bounds(
        max_size=args.max_size,
        n=args.n or 3,
        order=args.order,
        samples=args.samples,
        mode=args.mode,
        seed=args.seed,
    )
    start = time.perf_counter()
    results = run(args.suite, bounds)
    doc = report(results, bounds)
    elapsed = time.perf_counter() - start
    doc["suite"] = args.suite
    _emit(doc, args.output)
    # timing is kept off stdout so reports stay byte-identical between runs
    print(f"{args.suite}: {doc['passed']} passed, {doc['failed']} failed in {elapsed:.2f}s", file=sys.stderr)
    for name, suite in doc["suites"].items():
        for case in suite["cases"]:
            if case["status"] == "fail":
                print(f"FAIL {name}/{case['check']} {case['case']}: {case['residual']}", file=sys.stderr)
    return EXIT_OK if doc["ok"] else EXIT_FAIL


# --------------------------------------------------------------------------
# interpolate


_X_NAME = re.compile(r"x(\d+)")


def read_polynomial(text: str, n: Optional[int]) -> ShiftedSymPoly:
    """Accept the JSON polynomial schema or the plain expression grammar."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise UsageError(f"invalid JSON input: {exc}") from None
        poly = poly_from_json(doc)
        if n is not None and n != poly.n:
            poly = ShiftedSymPoly(n, poly.expr)
        return poly
    expr = parse_expression(stripped)
    used = [int(m) for m in _X_NAME.findall(stripped)]
    n = n if n is not None else max(used + [1])
    return ShiftedSymPoly(n, expr)


def cmd_interpolate(args) -> int:
    if args.input is not None:
        try:
            text = Path(args.input).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
    elif args.expr is not None:
        text = args.expr
    else:
        raise UsageError("one of --input or --expr is required")
    try:
        f = read_polynomial(text, args.n)
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from None
    if not f.is_shifted_symmetric(args.regime):
        raise ContractError(f"input is not shifted symmetric in the {args.regime} regime")
    deg = max(f.degree, 0)
    if args.regime == "qt":
        if args.algorithm == "direct":
            result = nw.fhat_direct(f, deg)
        elif args.algorithm == "explicit":
            result = nw.fhat_explicit(f, deg)
        else:
            result = nw.fhat_algorithm(nw.evaluation_at_q(f), deg, f.n)
    else:
        ev = nw.evaluation_at_integers(f)
        solver = {"direct": nw.jack_fhat_direct, "explicit": nw.jack_fhat_explicit, "fast": nw.jack_fhat_fast}
        result = solver[args.algorithm](ev, deg, f.n)
    _emit(result.rendered(), args.output)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="macbinom", description="Exact interpolation Macdonald polynomial toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    comp = sub.add_parser("compute", help="compute a polynomial or coefficient")
    comp.add_argument("target", choices=COMPUTE_TARGETS)
    comp.add_argument("--lambda", dest="lam")
    comp.add_argument("--mu")
    comp.add_argument("--nu")
    comp.add_argument("--beta")
    comp.add_argument("--n", type=int)
    comp.add_argument("--k", type=int, help="eigentable: use D_k instead of D*(u)")
    comp.add_argument("--max-size", type=int)
    comp.add_argument("--regime", choices=("qt", "jack"), default="qt")
    comp.add_argument("--inverse", action="store_true", help="binom: use 1/q, 1/t")
    comp.add_argument("--at", action="append", metavar="NAME=VALUE", help="specialize a parameter (repeatable)")
    comp.add_argument("--output")
    comp.set_defaults(func=cmd_compute)

    ver = sub.add_parser("verify", help="run an identity suite")
    ver.add_argument("suite", choices=tuple(SUITES) + ("all",))
    ver.add_argument("--max-size", type=int)
    ver.add_argument("--n", type=int)
    ver.add_argument("--order", type=int, default=6)
    ver.add_argument("--samples", type=int)
    ver.add_argument("--mode", choices=MODES, default="symbolic")
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--output")
    ver.set_defaults(func=cmd_verify)

    inter = sub.add_parser("interpolate", help="expand a polynomial in the interpolation basis")
    inter.add_argument("--input", help="file holding an expression or the JSON polynomial schema")
    inter.add_argument("--expr", help="expression given inline")
    inter.add_argument("--n", type=int)
    inter.add_argument("--regime", choices=("qt", "jack"), default="qt")
    inter.add_argument("--algorithm", choices=("direct", "explicit", "fast"), default="direct")
    inter.add_argument("--output")
    inter.set_defaults(func=cmd_interpolate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PoleError as exc:
        print(f"pole: {exc}", file=sys.stderr)
        return EXIT_POLE
    except (ContractError, ContainmentError) as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
