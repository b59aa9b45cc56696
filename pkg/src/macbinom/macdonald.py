"""Ordinary and interpolation (shifted) Macdonald polynomials.

P*_mu is built from the reverse-tableau formula with the Macdonald
horizontal-strip weights psi, and independently by solving the defining
interpolation conditions; the two constructions are checked against each
other in the test suite.
"""

from __future__ import annotations

import json
import os
import threading
from functools import lru_cache
from itertools import permutations
from pathlib import Path
from typing import Callable, Mapping, Optional, Sequence

from .exact import (
    ONE,
    VARIABLES,
    X_OFFSET,
    ZERO,
    FieldElement,
    Scalar,
    as_field,
    gen,
    solve_fraction_free,
    substitute,
    xvar,
)
from .partitions import (
    EMPTY,
    Box,
    Partition,
    ReverseTableau,
    conjugate,
    enumerate_partitions,
    enumerate_reverse_tableaux,
    hook_data,
    n_stat,
)

q = gen("q")
t = gen("t")
a = gen("a")
theta = gen("theta")


class ContractError(ValueError):
    """Input violates a shifted-symmetry or shape contract."""


def _x_slots(n: int) -> range:
    return range(X_OFFSET, X_OFFSET + n)


class ShiftedSymPoly:
    """Polynomial in x1..xn with coefficients in the parameter field.

    Stored as a single FieldElement whose denominator is free of x.  The
    shifted-symmetry contract is checked on demand, not at construction,
    because ordinary symmetric polynomials share this container.
    """

    __slots__ = ("n", "expr")

    def __init__(self, n: int, expr: Scalar):
        expr = as_field(expr)
        used = expr.variables()
        xs = {f"x{i}" for i in range(1, n + 1)}
        stray = {v for v in used if v.startswith("x") and v not in xs}
        if stray:
            raise ValueError(f"polynomial in {n} variables mentions {sorted(stray)}")
        if _den_vars(expr):
            raise ValueError("x variables in the denominator")
        self.n = n
        self.expr = expr

    @classmethod
    def from_coeffs(cls, n: int, coeffs: Mapping[Sequence[int], Scalar]) -> "ShiftedSymPoly":
        total = ZERO
        for exps, c in coeffs.items():
            term = as_field(c)
            for i, e in enumerate(exps, start=1):
                if e:
                    term = term * xvar(i) ** e
            total = total + term
        return cls(n, total)

    @property
    def coeffs(self) -> dict[tuple[int, ...], FieldElement]:
        groups: dict[tuple[int, ...], dict] = {}
        slots = _x_slots(self.n)
        for vec, c in self.expr.numerator_poly.to_dict().items():
            key = tuple(int(vec[s]) for s in slots)
            rest = list(vec)
            for s in slots:
                rest[s] = 0
            groups.setdefault(key, {})[tuple(rest)] = int(c)
        den = self.expr.denominator_poly
        ctx = den.context()
        return {k: FieldElement.from_polys(ctx.from_dict(d), den) for k, d in groups.items()}

    @property
    def degree(self) -> int:
        if self.expr.is_zero():
            return -1
        return self.expr.degree_in([f"x{i}" for i in range(1, self.n + 1)])

    def is_zero(self) -> bool:
        return self.expr.is_zero()

    def map_field(self, fn: Callable[[FieldElement], FieldElement]) -> "ShiftedSymPoly":
        return ShiftedSymPoly(self.n, fn(self.expr))

    def _other(self, other) -> FieldElement:
        if isinstance(other, ShiftedSymPoly):
            return other.expr
        return as_field(other)

    def _nn(self, other) -> int:
        return max(self.n, other.n) if isinstance(other, ShiftedSymPoly) else self.n

    def __add__(self, other):
        return ShiftedSymPoly(self._nn(other), self.expr + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ShiftedSymPoly(self._nn(other), self.expr - self._other(other))

    def __rsub__(self, other):
        return ShiftedSymPoly(self._nn(other), self._other(other) - self.expr)

    def __neg__(self):
        return ShiftedSymPoly(self.n, -self.expr)

    def __mul__(self, other):
        return ShiftedSymPoly(self._nn(other), self.expr * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ShiftedSymPoly):
            raise TypeError("division by a polynomial")
        return ShiftedSymPoly(self.n, self.expr / as_field(other))

    def __pow__(self, k: int):
        return ShiftedSymPoly(self.n, self.expr ** k)

    def __eq__(self, other) -> bool:
        if isinstance(other, ShiftedSymPoly):
            return self.expr == other.expr
        if isinstance(other, (int, FieldElement)):
            return self.expr == as_field(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.expr)

    def __repr__(self) -> str:
        return f"ShiftedSymPoly(n={self.n}, {self.expr})"

    def evaluate(self, values: Sequence[Scalar]) -> FieldElement:
        if len(values) != self.n:
            raise ValueError(f"expected {self.n} values, got {len(values)}")
        return substitute(self.expr, {f"x{i}": v for i, v in enumerate(values, start=1)})

    def subs_x(self, images: Mapping[int, Scalar], n: Optional[int] = None) -> "ShiftedSymPoly":
        return ShiftedSymPoly(self.n if n is None else n,
                              substitute(self.expr, {f"x{i}": v for i, v in images.items()}))

    def reversed_vars(self) -> "ShiftedSymPoly":
        """f(x_n, ..., x_1)."""
        n = self.n
        return self.subs_x({i: xvar(n + 1 - i) for i in range(1, n + 1)})

    def homogeneous_part(self, d: int) -> "ShiftedSymPoly":
        return ShiftedSymPoly.from_coeffs(self.n, {k: c for k, c in self.coeffs.items() if sum(k) == d})

    def is_symmetric(self) -> bool:
        for i in range(1, self.n):
            if self.subs_x({i: xvar(i + 1), i + 1: xvar(i)}) != self:
                return False
        return True

    def is_shifted_symmetric(self, regime: str = "qt") -> bool:
        """Invariance under swapping x_i t^-i with x_{i+1} t^-(i+1) (or x_i - theta*i)."""
        for i in range(1, self.n):
            if regime == "qt":
                images = {i: xvar(i + 1) / t, i + 1: xvar(i) * t}
            elif regime == "jack":
                images = {i: xvar(i + 1) - theta, i + 1: xvar(i) + theta}
            else:
                raise ValueError(f"unknown regime {regime!r}")
            if self.subs_x(images) != self:
                return False
        return True


def _den_vars(expr: FieldElement) -> bool:
    return any(v.startswith("x") for v in _poly_vars(expr.denominator_poly))


def _poly_vars(poly) -> set[str]:
    return {VARIABLES[i] for i, d in enumerate(poly.degrees()) if d > 0}


# --------------------------------------------------------------------------
# weights


def _bfactor(nu: Partition, s: Box) -> FieldElement:
    if s not in nu:
        return ONE
    arm, _, leg, _ = hook_data(nu, s)
    return (1 - q ** arm * t ** (leg + 1)) / (1 - q ** (arm + 1) * t ** leg)


@lru_cache(maxsize=None)
def psi_strip(lam: Partition, mu: Partition) -> FieldElement:
    """Weight of the horizontal strip lam/mu.

    Product of b_mu(s)/b_lam(s) over boxes s lying in a row that meets the
    strip but in no column that meets it.
    """
    strip = [b for b in lam.boxes() if b not in mu]
    rows = {b.row for b in strip}
    cols = {b.col for b in strip}
    if len(cols) != len(strip):
        raise ValueError(f"{lam!r}/{mu!r} is not a horizontal strip")
    out = ONE
    for s in mu.boxes():
        if s.row in rows and s.col not in cols:
            out = out * _bfactor(mu, s) / _bfactor(lam, s)
    return out


def psi_weight(T: ReverseTableau, n: Optional[int] = None) -> FieldElement:
    if n is None:
        n = max((max(r) for r in T.rows if r), default=0)
    chain = T.chain(n)
    out = ONE
    for small, big in zip(chain, chain[1:]):
        if small != big:
            out = out * psi_strip(big, small)
    return out


# --------------------------------------------------------------------------
# normalizations and specializations


@lru_cache(maxsize=None)
def H_norm(mu: Partition) -> FieldElement:
    mu = Partition(mu)
    out = t ** (-2 * n_stat(mu)) * q ** n_stat(conjugate(mu))
    for s in mu.boxes():
        arm, _, leg, _ = hook_data(mu, s)
        out = out * (q ** (arm + 1) * t ** leg - 1)
    return out


@lru_cache(maxsize=None)
def principal_special(mu: Partition, n: int) -> FieldElement:
    """P_mu(1, 1/t, ..., t^(1-n)) by the hook product formula."""
    mu = Partition(mu)
    if len(mu) > n:
        return ZERO
    out = t ** (n_stat(mu) + mu.size * (1 - n))
    for s in mu.boxes():
        arm, armc, leg, legc = hook_data(mu, s)
        out = out * (1 - q ** armc * t ** (n - legc)) / (1 - q ** arm * t ** (1 + leg))
    return out


def pstar_at_constant(mu: Partition, n: int, value: Scalar = None) -> FieldElement:
    """P*_mu(a, ..., a) in closed form; ``value`` replaces the symbol a."""
    mu = Partition(mu)
    av = a if value is None else as_field(value)
    out = principal_special(mu, n)
    for s in mu.boxes():
        _, armc, _, legc = hook_data(mu, s)
        out = out * (av - q ** armc * t ** (-legc))
    return out


# --------------------------------------------------------------------------
# constructions


_cache_lock = threading.Lock()


def _disk_cache_path(kind: str, mu: Partition, n: int) -> Optional[Path]:
    root = os.environ.get("MACBINOM_CACHE_DIR")
    if not root:
        return None
    label = "_".join(map(str, mu)) or "empty"
    return Path(root) / f"{kind}_{label}_n{n}.json"


def _cached(kind: str, mu: Partition, n: int, build: Callable[[], ShiftedSymPoly]) -> ShiftedSymPoly:
    from .serialization import poly_from_json, poly_to_json

    path = _disk_cache_path(kind, mu, n)
    if path is not None and path.exists():
        with open(path, encoding="utf-8") as fh:
            return poly_from_json(json.load(fh))
    poly = build()
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(f".{os.getpid()}.{threading.get_ident()}.tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(poly_to_json(poly), fh, sort_keys=True)
        os.replace(tmp, path)
    return poly


def macdonald_P(mu: Partition, n: int) -> ShiftedSymPoly:
    """Ordinary Macdonald polynomial P_mu(x1..xn; q, t)."""
    return _macdonald_P(Partition(mu), n)


@lru_cache(maxsize=None)
def _macdonald_P(mu: Partition, n: int) -> ShiftedSymPoly:
    if len(mu) > n:
        return ShiftedSymPoly(n, ZERO)
    total = ZERO
    for T in enumerate_reverse_tableaux(mu, n):
        term = psi_weight(T, n)
        for box in mu.boxes():
            term = term * xvar(T[box])
        total = total + term
    return ShiftedSymPoly(n, total)


def interp_P_star(mu: Partition, n: int) -> ShiftedSymPoly:
    """Interpolation Macdonald polynomial from the reverse-tableau formula."""
    mu = Partition(mu)
    if len(mu) > n:
        raise ContractError(f"{mu!r} has more than {n} parts")
    with _cache_lock:
        hit = _pstar_memo.get((mu, n))
    if hit is not None:
        return hit
    poly = _cached("pstar", mu, n, lambda: _build_pstar(mu, n))
    with _cache_lock:
        _pstar_memo.setdefault((mu, n), poly)
    return poly


_pstar_memo: dict[tuple[Partition, int], ShiftedSymPoly] = {}


def _build_pstar(mu: Partition, n: int) -> ShiftedSymPoly:
    factors = {}
    for box in mu.boxes():
        _, armc, _, legc = hook_data(mu, box)
        for k in range(1, n + 1):
            factors[box, k] = t ** (1 - k) * (xvar(k) - q ** armc * t ** (-legc))
    total = ZERO
    for T in enumerate_reverse_tableaux(mu, n):
        term = psi_weight(T, n)
        for box in mu.boxes():
            term = term * factors[box, T[box]]
        total = total + term
    return ShiftedSymPoly(n, total)


def _monomial_symmetric(rho: Partition, values: Sequence[FieldElement]) -> FieldElement:
    n = len(values)
    total = ZERO
    for alpha in set(permutations(rho.padded(n))):
        term = ONE
        for v, e in zip(values, alpha):
            if e:
                term = term * v ** e
        total = total + term
    return total


def interp_P_star_oracle(mu: Partition, n: int) -> ShiftedSymPoly:
    """P*_mu from its defining conditions, by an exact linear solve.

    Unknowns are the coefficients of m_rho(x1/t, ..., xn/t^n) for |rho| <= |mu|;
    the conditions are vanishing at q^lam for lam != mu with |lam| <= |mu| and
    the value H(mu) at q^mu.
    """
    mu = Partition(mu)
    if len(mu) > n:
        raise ContractError(f"{mu!r} has more than {n} parts")
    basis = enumerate_partitions(mu.size, n)
    matrix, rhs = [], []
    for lam in basis:
        point = [q ** lam_i * t ** (-i) for i, lam_i in enumerate(lam.padded(n), start=1)]
        matrix.append([_monomial_symmetric(rho, point) for rho in basis])
        rhs.append(H_norm(mu) if lam == mu else ZERO)
    coeffs = solve_fraction_free(matrix, rhs)
    shifted = [xvar(i) * t ** (-i) for i in range(1, n + 1)]
    total = ZERO
    for rho, c in zip(basis, coeffs):
        if c:
            total = total + c * _monomial_symmetric(rho, shifted)
    return ShiftedSymPoly(n, total)


# --------------------------------------------------------------------------
# evaluations


def qlambda_point(lam: Partition, n: int, scale: Scalar = 1, inverse: bool = False) -> list[FieldElement]:
    """(scale*q^lam_1, ..., scale*q^lam_n); with inverse=True the base is 1/q."""
    s = as_field(scale)
    sign = -1 if inverse else 1
    return [s * q ** (sign * p) for p in Partition(lam).padded(n)]


def eval_at_qlambda(f: ShiftedSymPoly, lam: Partition, scale: Scalar = 1) -> FieldElement:
    return f.evaluate(qlambda_point(lam, f.n, scale))


def e_star(k: int, n: int) -> ShiftedSymPoly:
    if k > n:
        return ShiftedSymPoly(n, ZERO)
    return interp_P_star(Partition([1] * k), n)


def h_star(k: int, n: int) -> ShiftedSymPoly:
    return interp_P_star(Partition([k]) if k else EMPTY, n)


def e_star_sum_formula(k: int, n: int) -> ShiftedSymPoly:
    """Sum over i_1 < ... < i_k of t^(k - sum i_s) prod_s (x_{i_s} - t^(s-k))."""
    from itertools import combinations

    total = ZERO
    for idx in combinations(range(1, n + 1), k):
        term = t ** (k - sum(idx))
        for s, i in enumerate(idx, start=1):
            term = term * (xvar(i) - t ** (s - k))
        total = total + term
    return ShiftedSymPoly(n, total)


def top_layer(f: ShiftedSymPoly) -> ShiftedSymPoly:
    if f.is_zero():
        return f
    return f.homogeneous_part(f.degree)


def principal_shift(f: ShiftedSymPoly, inverse: bool = False) -> ShiftedSymPoly:
    """f(x1, x2/t, ..., xn t^(1-n)), or the inverse rescaling."""
    sign = -1 if inverse else 1
    return f.subs_x({i: xvar(i) * t ** (sign * (1 - i)) for i in range(1, f.n + 1)})


def stability_check(mu: Partition, n: int) -> bool:
    """P*_mu in n+1 variables with x_{n+1} = 1 equals P*_mu in n variables."""
    big = interp_P_star(mu, n + 1)
    restricted = big.subs_x({n + 1: 1}, n=n)
    return restricted == interp_P_star(mu, n)


# --------------------------------------------------------------------------
# defining properties as checks


def definition_checks(mu: Partition, n: int, slack: int = 2) -> list:
    """Shifted symmetry, degree, normalization, vanishing and extra vanishing.

    Extra vanishing is tested on every lam not containing mu with
    |lam| <= |mu| + slack.
    """
    from .checks import Check, flag

    mu = Partition(mu)
    p = interp_P_star(mu, n)
    case = {"mu": mu, "n": n}
    out = [
        flag("shifted_symmetric", p.is_shifted_symmetric("qt"), **case),
        flag("degree", p.degree == mu.size, **case),
        Check("normalization", case, eval_at_qlambda(p, mu) - H_norm(mu)),
        Check("top_layer", case, top_layer(p).expr - principal_shift(macdonald_P(mu, n)).expr),
        Check("constant_value", case, p.evaluate([a] * n) - pstar_at_constant(mu, n)),
    ]
    for lam in enumerate_partitions(mu.size + slack, n):
        if lam != mu and not lam.contains(mu):
            out.append(Check("vanishing", dict(case, at=lam), eval_at_qlambda(p, lam)))
    return out


def ordinary_checks(mu: Partition, n: int) -> list:
    """Properties of the ordinary polynomial P_mu used elsewhere."""
    from .checks import Check, flag
    from .exact import invert_qt

    mu = Partition(mu)
    P = macdonald_P(mu, n)
    case = {"mu": mu, "n": n}
    lead = tuple(mu.padded(n))
    principal = P.evaluate([t ** (-i) for i in range(n)])
    return [
        flag("symmetric", P.is_symmetric(), **case),
        flag("leading_monomial", P.coeffs.get(lead) == ONE and P.degree == mu.size, **case),
        Check("principal_specialization", case, principal - principal_special(mu, n)),
        Check("inversion_invariance", case, P.expr - invert_qt(P.expr)),
    ]


def elementary_checks(n: int) -> list:
    """e*_k is free of q and agrees with the subset-sum formula."""
    from .checks import Check, flag

    out = []
    for k in range(n + 1):
        e = e_star(k, n)
        out.append(flag("e_star_q_free", "q" not in e.expr.variables(), k=k, n=n))
        out.append(Check("e_star_formula", {"k": k, "n": n}, e.expr - e_star_sum_formula(k, n).expr))
    return out


def zero_ratio_check(mu: Partition, n: int) -> "object":
    """P*_mu(0, ..., 0) / P_mu(1, 1/t, ...) = (-1)^|mu| q^n(mu') t^-n(mu)."""
    from .checks import Check

    mu = Partition(mu)
    ratio = interp_P_star(mu, n).evaluate([ZERO] * n) / principal_special(mu, n)
    target = (-1) ** mu.size * q ** n_stat(conjugate(mu)) * t ** (-n_stat(mu))
    return Check("zero_ratio", {"mu": mu, "n": n}, ratio - target)
