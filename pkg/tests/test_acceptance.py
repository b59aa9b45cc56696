"""Acceptance suite: one test per criterion, each reporting a single PASS/FAIL line.

The lines are printed as the tests run and repeated in the pytest terminal
summary. ``python tests/test_acceptance.py`` runs the same criteria without pytest.
"""

from __future__ import annotations

import collections
import json
import subprocess
import sys
import time

import pytest

from macbinom.verify import Bounds, run

RESULTS: dict[int, str] = {}

# (number, title, suites, time limit in seconds)
CRITERIA = [
    (1, "tableau formula equals linear-solve oracle, |mu| <= 4, n <= 3", ["construction"], 120),
    (2, "defining properties, normalization, stability, top layer", ["definition"], 120),
    (3, "binomial theorem, its limit forms and one-variable cases", ["binomial"], 300),
    (4, "S symmetry, Gauss decomposition, trinomial identities, inversion, duality", ["symmetry", "inversion", "duality"], 300),
    (5, "generating functions in 1/u to order 6, n = 3", ["genfunc"], 120),
    (6, "difference operator eigenvalues, D_k, vanishing lemma", ["eigen"], 300),
    (7, "Newton interpolation: three routes, reconstruction, corner recurrence", ["newton"], 300),
    (8, "Jack regime: corner weights, fast algorithm, forward differences, tableau counts", ["jack"], 180),
]

BOUNDS = Bounds()  # the default bounds are the acceptance bounds: symbolic, n = 3, order 6


def _record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {title} ({detail})"
    RESULTS[number] = line
    print(line)


def _names(checks) -> collections.Counter:
    return collections.Counter(c.name for c in checks)


def _coverage(number: int, checks) -> list[str]:
    """Problems with the shape of the run, beyond individual failures."""
    names = _names(checks)
    problems = []

    def need(name: str, at_least: int = 1):
        if names[name] < at_least:
            problems.append(f"expected >= {at_least} '{name}' checks, got {names[name]}")

    if number == 1:
        need("tableau_vs_linear_solve", 25)
    elif number == 2:
        for name in ("shifted_symmetric", "degree", "normalization", "vanishing", "top_layer", "stability"):
            need(name, 25 if name != "vanishing" else 100)
    elif number == 3:
        for name in ("binomial_theorem", "binomial_theorem_rewritten", "top_degree_form", "zero_point_form"):
            need(name, 25)
        need("one_variable_theorem")
        need("q_binomial_matches")
    elif number == 4:
        for name in ("S_symmetric", "gauss_decomposition", "symmetry_II", "binomial_theorem_II",
                     "inversion_right", "inversion_left", "duality"):
            need(name)
        betas = {c.case["beta"] for c in checks if c.name == "symmetry_II"}
        if (3, 3, 3) not in betas:
            problems.append("Symmetry II did not reach beta = (3,3,3)")
        if max(c.case["lambda"].size for c in checks if c.name == "duality") < 5:
            problems.append("duality did not reach |lambda| = 5")
    elif number == 5:
        need("elementary_generating", 3)
        need("complete_generating", 3)
    elif number == 6:
        modes = {(c.case["n"], c.case["mode"]) for c in checks if c.name == "dstar_eigen"}
        if (1, "symbolic") not in modes or (2, "symbolic") not in modes:
            problems.append("n <= 2 was not checked symbolically")
        if not any(n == 3 and m.startswith("sampled") for n, m in modes):
            problems.append("n = 3 was not sampled")
        # sampled modes are recorded as "sampled(k)"
        samples = {int(m[len("sampled("):-1]) for n, m in modes if n == 3 and m.startswith("sampled")}
        if not samples or min(samples) < 5:
            problems.append(f"n = 3 used fewer than 5 points: {samples}")
        need("dk_eigen")
        need("cross_factor_lemma", 100)
    elif number == 7:
        need("direct_vs_explicit", 10)
        need("direct_vs_corner_algorithm", 10)
        need("reconstruction", 10)
        need("corner_recurrence", 50)
    elif number == 8:
        need("omega_theta_row", 6)
        need("fast_vs_solver")
        need("forward_differences")
        need("trinomial_dimension")
    return problems


def check_criterion(number: int, title: str, suites: list[str], limit: float) -> tuple[bool, str]:
    start = time.perf_counter()
    checks = []
    for suite in suites:
        checks.extend(run(suite, BOUNDS)[suite])
    elapsed = time.perf_counter() - start
    failed = [c for c in checks if not c.ok]
    problems = _coverage(number, checks)
    if elapsed > limit:
        problems.append(f"took {elapsed:.1f}s, limit {limit}s")
    ok = not failed and not problems
    detail = f"{len(checks) - len(failed)}/{len(checks)} checks in {elapsed:.1f}s"
    if failed:
        detail += "; first failure: " + failed[0].describe()
    if problems:
        detail += "; " + "; ".join(problems)
    _record(number, title, ok, detail)
    return ok, detail


@pytest.mark.parametrize("number, title, suites, limit", CRITERIA, ids=[f"criterion{c[0]}" for c in CRITERIA])
def test_criterion(number, title, suites, limit):
    ok, detail = check_criterion(number, title, suites, limit)
    assert ok, detail


def _verify_all(*extra: str) -> tuple[int, str, float]:
    cmd = [sys.executable, "-m", "macbinom.cli", "verify", "all", *extra]
    start = time.perf_counter()
    proc = subprocess.run(cmd, capture_output=True, text=True)
    return proc.returncode, proc.stdout, time.perf_counter() - start


def check_full_run() -> tuple[bool, str]:
    title = "verify all under 30 minutes, deterministic under a fixed seed"
    problems = []
    code_sym, out_sym, t_sym = _verify_all()
    code_a, out_a, t_a = _verify_all("--mode", "sampled", "--seed", "7")
    code_b, out_b, t_b = _verify_all("--mode", "sampled", "--seed", "7")
    for label, code in (("symbolic", code_sym), ("sampled", code_a), ("sampled rerun", code_b)):
        if code != 0:
            problems.append(f"{label} run exited with {code}")
    if out_a != out_b:
        problems.append("sampled reports differ between runs")
    total = max(t_sym, t_a, t_b)
    if total > 1800:
        problems.append(f"slowest run took {total:.0f}s")
    counts = []
    for out in (out_sym, out_a):
        try:
            doc = json.loads(out)
            counts.append(f"{doc['passed']} passed")
        except (json.JSONDecodeError, KeyError):
            problems.append("report is not valid JSON")
    ok = not problems
    detail = f"symbolic {t_sym:.0f}s, sampled {t_a:.0f}s; " + ", ".join(counts)
    if problems:
        detail += "; " + "; ".join(problems)
    _record(9, title, ok, detail)
    return ok, detail


def test_criterion9_full_run():
    ok, detail = check_full_run()
    assert ok, detail


if __name__ == "__main__":
    results = [check_criterion(*c)[0] for c in CRITERIA] + [check_full_run()[0]]
    sys.exit(0 if all(results) else 1)
