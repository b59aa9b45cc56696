"""Verification suites: each returns a flat list of Check records."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Optional

import flint

from . import binomial as bn
from . import diffops as dops
from . import newton as nw
from .checks import Check, flag
from .exact import ZERO, Evaluator, FieldElement, random_point, xvar
from .macdonald import (
    ShiftedSymPoly,
    definition_checks,
    e_star,
    elementary_checks,
    interp_P_star,
    interp_P_star_oracle,
    macdonald_P,
    ordinary_checks,
    principal_shift,
    stability_check,
    t,
    theta,
    zero_ratio_check,
)
from .partitions import (
    Partition,
    enumerate_partitions,
    format_partition,
    rectangle,
    subpartitions,
)

MODES = ("symbolic", "sampled")


@dataclass(frozen=True)
class Bounds:
    """Size limits; ``max_size`` of None means each suite's own default."""

    max_size: Optional[int] = None
    n: int = 3
    order: int = 6
    samples: Optional[int] = None
    mode: str = "symbolic"
    seed: int = 0

    def size(self, default: int) -> int:
        return default if self.max_size is None else self.max_size

    def points(self, default: int) -> int:
        return default if self.samples is None else self.samples

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.seed}:{salt}")


# --------------------------------------------------------------------------
# mac-core


def construction_suite(b: Bounds) -> list[Check]:
    out = []
    for n in range(1, b.n + 1):
        for mu in enumerate_partitions(b.size(4), n):
            diff = interp_P_star(mu, n).expr - interp_P_star_oracle(mu, n).expr
            out.append(Check("tableau_vs_linear_solve", {"mu": mu, "n": n}, diff))
    return out


def definition_suite(b: Bounds) -> list[Check]:
    out = []
    for n in range(1, b.n + 1):
        for mu in enumerate_partitions(b.size(4), n):
            out.extend(definition_checks(mu, n))
            out.extend(ordinary_checks(mu, n))
            out.append(zero_ratio_check(mu, n))
            out.append(flag("stability", stability_check(mu, n), mu=mu, n=n))
        out.extend(elementary_checks(n))
    return out


# --------------------------------------------------------------------------
# binom


def _sampled_evaluator(b: Bounds, lam: Partition, n: int, k: int) -> Evaluator:
    """A random rational point for q, t, a and x1..xn."""
    rng = b.rng(f"binomial:{format_partition(lam)}:{n}:{k}")
    names = ["q", "t", "a"] + [f"x{i}" for i in range(1, n + 1)]
    return Evaluator(random_point(rng, names))


def binomial_suite(b: Bounds) -> list[Check]:
    size = b.size(4)
    if b.mode == "symbolic":
        return bn.binomial_suite(size, b.n)
    # probabilistic identity testing: the theorem at several random points
    out = []
    for n in range(1, b.n + 1):
        for lam in enumerate_partitions(size, n):
            for k in range(b.points(20)):
                ev = _sampled_evaluator(b, lam, n, k)
                out.append(bn.binomial_theorem_check(lam, n, ev))
                out.append(bn.rewritten_theorem_check(lam, n, ev))
    return out + [c for c in bn.binomial_suite(size, b.n) if not c.name.startswith("binomial_theorem")]


def _rectangles_inside(box: int, n: int) -> list[Partition]:
    return [rectangle(w, h) for h in range(1, n + 1) for w in range(1, box + 1)]


def symmetry_suite(b: Bounds) -> list[Check]:
    out = []
    size = b.size(4)
    for n in range(1, b.n + 1):
        idx = enumerate_partitions(size, n)
        out.extend(bn.symmetry_check(n, idx))
        # at a = q^3 the matrix lives on partitions inside the 3 x n box
        boxed = [p for p in idx if not p or p[0] <= 3]
        out.extend(bn.symmetry_check(n, boxed, a_value=bn.q ** 3))
        out.extend(bn.gauss_decomposition_check(n, idx))
    # rectangles beta inside the 3 x n box; the row count of beta fixes n
    for beta in _rectangles_inside(3, b.n):
        inner = subpartitions(beta)
        for lam in inner:
            for nu in inner:
                out.append(bn.symmetry_II_check(beta, lam, nu))
                out.append(bn.trinomial_symmetry_check(beta, lam, nu))
                out.append(bn.binomial_theorem_II_check(beta, lam, nu))
    return out


def inversion_suite(b: Bounds) -> list[Check]:
    return bn.inversion_check(enumerate_partitions(b.size(4), b.n))


def duality_suite(b: Bounds) -> list[Check]:
    out = []
    for lam in enumerate_partitions(b.size(5), b.size(5) or 1):
        for mu in subpartitions(lam):
            out.append(bn.duality_check(lam, mu))
    return out


def genfunc_suite(b: Bounds) -> list[Check]:
    out = []
    for n in range(1, b.n + 1):
        out.append(bn.gen_func_check("elementary", n, b.order))
        out.append(bn.gen_func_check("complete", n, b.order))
    return out


# --------------------------------------------------------------------------
# diffops


def eigen_suite(b: Bounds) -> list[Check]:
    out = []
    size = b.size(4)
    for n in range(1, b.n + 1):
        sampled = b.mode == "sampled" or n >= 3
        rng = b.rng(f"eigen:{n}")
        for mu in enumerate_partitions(size, n):
            pts = dops.sample_points(rng, n, b.points(5)) if sampled else None
            out.append(dops.eigen_check_Dstar(mu, n, pts))
            out.extend(dops.dk_eigen_check(mu, n, pts))
        if n <= 2:
            out.extend(dops.commutation_check(enumerate_partitions(min(size, 3), n), n))
    out.extend(dops.lemma_checks(3, 3))
    for n in range(1, min(b.n, 3) + 1):
        out.extend(dops.determinant_form_check(n))
    rng = b.rng("image")
    for f in [interp_P_star(Partition([2, 1]), 2), e_star(1, 2) * e_star(1, 2), _shifted_power(2, 2)]:
        out.extend(dops.image_check(f, rng))
    return out


# --------------------------------------------------------------------------
# newton-interp


def _shifted_power(k: int, n: int) -> ShiftedSymPoly:
    return ShiftedSymPoly(n, sum((xvar(i) ** k * t ** (-k * i) for i in range(1, n + 1)), ZERO))


def _jack_power(k: int, n: int) -> ShiftedSymPoly:
    return ShiftedSymPoly(n, sum(((xvar(i) - theta * i) ** k for i in range(1, n + 1)), ZERO))


def qt_corpus(max_deg: int = 4, max_n: int = 3) -> list[tuple[str, ShiftedSymPoly]]:
    """Shifted symmetric test inputs: basis elements, products, shifted power sums."""
    x1 = xvar(1)
    items = [
        ("1", ShiftedSymPoly(1, 1)),
        ("x1", ShiftedSymPoly(1, x1)),
        ("x1^2", ShiftedSymPoly(1, x1 ** 2)),
        ("x1^3 - q*x1", ShiftedSymPoly(1, x1 ** 3 - bn.q * x1)),
    ]
    for n in range(2, max_n + 1):
        items += [
            (f"e1*e1 (n={n})", e_star(1, n) * e_star(1, n)),
            (f"e1*e2 (n={n})", e_star(1, n) * e_star(2, n)),
            (f"P*_21 (n={n})", interp_P_star(Partition([2, 1]), n)),
            (f"p2 shifted (n={n})", _shifted_power(2, n)),
            (f"p3 shifted (n={n})", _shifted_power(3, n)),
            (f"P_2 rescaled (n={n})", principal_shift(macdonald_P(Partition([2]), n))),
        ]
    items.append(("p4 shifted (n=2)", _shifted_power(4, 2)))
    items.append(("e1^2 + p2 (n=2)", e_star(1, 2) * e_star(1, 2) + _shifted_power(2, 2)))
    return [(name, f) for name, f in items if f.n <= max_n and f.degree <= max_deg]


def jack_corpus(max_deg: int = 4, max_n: int = 3) -> list[tuple[str, ShiftedSymPoly]]:
    x1 = xvar(1)
    items = [("1", ShiftedSymPoly(1, 1)), ("x1^2", ShiftedSymPoly(1, x1 ** 2)), ("x1^4", ShiftedSymPoly(1, x1 ** 4))]
    for n in range(2, max_n + 1):
        for k in (1, 2, 3, 4):
            items.append((f"p{k} shifted (n={n})", _jack_power(k, n)))
        items.append((f"p1*p2 (n={n})", _jack_power(1, n) * _jack_power(2, n)))
        items.append((f"[x;1,1] (n={n})", nw.jack_basis(Partition([1, 1]), n)))
    return [(name, f) for name, f in items if f.n <= max_n and f.degree <= max_deg]


def newton_suite(b: Bounds) -> list[Check]:
    out = []
    for name, f in qt_corpus(b.size(4), b.n):
        d = nw.fhat_direct(f)
        e = nw.fhat_explicit(f)
        g = nw.fhat_algorithm(nw.evaluation_at_q(f), max(f.degree, 0), f.n)
        out.append(flag("direct_vs_explicit", d == e, input=name))
        out.append(flag("direct_vs_corner_algorithm", d == g, input=name))
        out.append(Check("reconstruction", {"input": name}, d.reconstruct().expr - f.expr))
    one = Partition([1])
    for lam in enumerate_partitions(max(b.size(5), 0), 3):
        for mu in subpartitions(lam):
            if mu != lam:
                out.append(nw.corner_recurrence_check(lam, mu))
        if lam:
            total = sum((nw.omega_qt(nu, lam) for nu in lam.lower_covers()), ZERO)
            out.append(Check("corner_weight_sum", {"lambda": lam}, total - bn.binom_qt(lam, one)))
    return out


def jack_suite(b: Bounds) -> list[Check]:
    out = []
    for l in range(1, 7):
        value = nw.omega_theta(Partition([l - 1]), Partition([l]))
        out.append(Check("omega_theta_row", {"l": l}, value - l))
    for name, f in jack_corpus(b.size(4), b.n):
        ev = nw.evaluation_at_integers(f)
        deg = max(f.degree, 0)
        solver = nw.jack_fhat_direct(ev, deg, f.n)
        out.append(flag("fast_vs_solver", nw.jack_fhat_fast(ev, deg, f.n) == solver, input=name))
        out.append(flag("explicit_vs_solver", nw.jack_fhat_explicit(ev, deg, f.n) == solver, input=name))
        out.append(Check("jack_reconstruction", {"input": name}, solver.reconstruct().expr - f.expr))
    # one variable: the classical forward differences with knots 0, 1, 2, ...
    x1 = xvar(1)
    polys = [x1 ** d for d in range(6)] + [2 * x1 ** 5 - 3 * x1 ** 3 + x1 - 7, (x1 - 2) ** 4]
    for p in polys:
        f = ShiftedSymPoly(1, p)
        deg = max(f.degree, 0)
        values = [f.evaluate([FieldElement(k)]) for k in range(deg + 1)]
        classical = nw.forward_differences(values)
        fast = nw.jack_fhat_fast(nw.evaluation_at_integers(f), deg, 1)
        diff = sum(((fast[Partition([m] if m else [])] - c) * bn.u ** m for m, c in enumerate(classical)), ZERO)
        out.append(Check("forward_differences", {"f": str(p)}, diff))
    # the q -> 1 limits behind the Jack weights and binomials
    for lam in enumerate_partitions(4, 3):
        for nu in lam.lower_covers():
            for th in (Fraction(1), Fraction(2), Fraction(1, 2)):
                out.extend(nw.omega_limit_check(nu, lam, th))
    for lam in enumerate_partitions(3, 3):
        for mu in subpartitions(lam):
            out.append(nw.jack_limit_check(lam, mu, Fraction(1, 2)))
            out.append(nw.jack_limit_check(lam, mu, Fraction(2)))
    # theta = 1: trinomials count standard tableaux
    for beta in _rectangles_inside(3, 2):
        inner = subpartitions(beta)
        for lam in inner:
            for nu in inner:
                out.append(bn.trinomial_dimension_check(beta, lam, nu))
    return out


SUITES: dict[str, Callable[[Bounds], list[Check]]] = {
    "construction": construction_suite,
    "definition": definition_suite,
    "binomial": binomial_suite,
    "symmetry": symmetry_suite,
    "inversion": inversion_suite,
    "duality": duality_suite,
    "genfunc": genfunc_suite,
    "eigen": eigen_suite,
    "newton": newton_suite,
    "jack": jack_suite,
}


def run(suite: str, bounds: Bounds) -> dict[str, list[Check]]:
    """Run one suite, or every suite for "all"; results keyed by suite name."""
    if bounds.mode not in MODES:
        raise ValueError(f"unknown mode {bounds.mode!r}")
    names = list(SUITES) if suite == "all" else [suite]
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}")
    return {name: SUITES[name](bounds) for name in names}


def _jsonable(value: Any) -> Any:
    if isinstance(value, Partition):
        return format_partition(value)
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(_jsonable(v) for v in value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, flint.fmpz):
        return int(value)
    return str(value)


def report(results: dict[str, list[Check]], bounds: Bounds) -> dict[str, Any]:
    suites = {}
    for name, checks in results.items():
        cases = []
        for c in checks:
            entry = {"check": c.name, "case": {k: _jsonable(v) for k, v in c.case.items()},
                     "status": "pass" if c.ok else "fail"}
            if not c.ok:
                entry["residual"] = str(c.residual)
            cases.append(entry)
        passed = sum(1 for c in checks if c.ok)
        suites[name] = {"passed": passed, "failed": len(checks) - passed, "cases": cases}
    total_failed = sum(s["failed"] for s in suites.values())
    return {
        "bounds": {"max_size": bounds.max_size, "n": bounds.n, "order": bounds.order, "samples": bounds.samples},
        "mode": bounds.mode,
        "seed": bounds.seed,
        "suites": suites,
        "passed": sum(s["passed"] for s in suites.values()),
        "failed": total_failed,
        "ok": total_failed == 0,
    }
