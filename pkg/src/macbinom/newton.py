"""Newton interpolation in the interpolation-polynomial basis.

Two regimes are covered.  In the (q,t) regime a shifted symmetric f is
expanded as sum fhat(mu) P*_mu(x; q, t).  In the Jack regime (parameter
theta, knots at the integer points x = lambda) the basis is the normalized
family [x; mu]_theta.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Optional

from .checks import Check
from .exact import ONE, ZERO, FieldElement, Scalar, as_field, solve_fraction_free, substitute, xvar
from .macdonald import (
    ContractError,
    H_norm,
    ShiftedSymPoly,
    _monomial_symmetric,
    interp_P_star,
    q,
    qlambda_point,
    t,
    theta,
)
from .partitions import (
    Partition,
    conjugate,
    corner_points,
    enumerate_partitions,
    n_stat,
    subpartitions,
)
from .binomial import binom_qt, sign

Evaluation = Callable[[Partition], FieldElement]


@dataclass(frozen=True)
class InterpolationResult:
    """Coefficients fhat(mu) of an expansion; zero coefficients are dropped."""

    coefficients: Mapping[Partition, FieldElement]
    regime: str  # "qt" or "jack"
    n: int

    @classmethod
    def build(cls, coeffs: Mapping[Partition, FieldElement], regime: str, n: int) -> "InterpolationResult":
        return cls({mu: c for mu, c in coeffs.items() if c}, regime, n)

    def __getitem__(self, mu) -> FieldElement:
        return self.coefficients.get(Partition(mu), ZERO)

    def __eq__(self, other) -> bool:
        if not isinstance(other, InterpolationResult):
            return NotImplemented
        return self.regime == other.regime and dict(self.coefficients) == dict(other.coefficients)

    def reconstruct(self, theta_value: Optional[Scalar] = None) -> ShiftedSymPoly:
        total = ShiftedSymPoly(self.n, ZERO)
        for mu, c in self.coefficients.items():
            if self.regime == "qt":
                total = total + interp_P_star(mu, self.n) * c
            else:
                total = total + jack_basis(mu, self.n, theta_value) * c
        return total

    def rendered(self) -> dict[str, str]:
        from .partitions import format_partition

        order = sorted(self.coefficients, key=lambda p: (p.size, [-x for x in p]))
        return {format_partition(mu): str(self.coefficients[mu]) for mu in order}


def _knots(deg: int, n: int) -> list[Partition]:
    return enumerate_partitions(deg, n)


def _require_shifted(f: ShiftedSymPoly, regime: str):
    if not f.is_shifted_symmetric(regime):
        raise ContractError("input is not shifted symmetric")


def evaluation_at_q(f: ShiftedSymPoly) -> Evaluation:
    return lambda lam: f.evaluate(qlambda_point(lam, f.n))


# --------------------------------------------------------------------------
# (q,t) regime


def fhat_direct(f: ShiftedSymPoly, deg: Optional[int] = None) -> InterpolationResult:
    """Solve the triangular system f(q^lam) = sum_{mu in lam} fhat(mu) P*_mu(q^lam)."""
    _require_shifted(f, "qt")
    deg = f.degree if deg is None else deg
    n = f.n
    coeffs: dict[Partition, FieldElement] = {}
    for lam in _knots(max(deg, 0), n):
        point = qlambda_point(lam, n)
        acc = f.evaluate(point)
        for mu, c in coeffs.items():
            if c and lam.contains(mu):
                acc = acc - c * interp_P_star(mu, n).evaluate(point)
        coeffs[lam] = acc / interp_P_star(lam, n).evaluate(point)
    return InterpolationResult.build(coeffs, "qt", n)


def fhat_explicit(f: ShiftedSymPoly, deg: Optional[int] = None) -> InterpolationResult:
    """Closed form: alternating sum of inverted binomials times values, over H(mu)."""
    _require_shifted(f, "qt")
    deg = f.degree if deg is None else deg
    n = f.n
    values = {lam: f.evaluate(qlambda_point(lam, n)) for lam in _knots(max(deg, 0), n)}
    coeffs = {}
    for mu in values:
        total = ZERO
        for nu in subpartitions(mu):
            if not values[nu]:
                continue
            w = sign(mu.size - nu.size) * q ** (n_stat(conjugate(mu)) - n_stat(conjugate(nu)))
            w = w * t ** (n_stat(nu) - n_stat(mu))
            total = total + w * binom_qt(mu, nu, "inv") * values[nu]
        coeffs[mu] = total / H_norm(mu)
    return InterpolationResult.build(coeffs, "qt", n)


def _check_cover(nu: Partition, lam: Partition) -> int:
    """Row of the box lam/nu; raises unless nu is lam minus one corner."""
    for r in lam.removable_rows():
        if lam.remove_box(r) == nu:
            return r
    raise ValueError(f"{nu!r} is not obtained from {lam!r} by removing a corner")


def _corner_factors(nu: Partition, lam: Partition):
    r = _check_cover(nu, lam)
    pts = corner_points(nu, r)
    star = pts["star"][0]
    inner = [(star.y - c.y, c.x - star.x) for c in pts["inner"]]
    outer = [(star.y - c.y, c.x - star.x) for c in pts["outer"]]
    return inner, outer


@lru_cache(maxsize=None)
def omega_qt(nu: Partition, lam: Partition) -> FieldElement:
    """Corner weight of removing the box lam/nu, in the (q,t) regime."""
    inner, outer = _corner_factors(Partition(nu), Partition(lam))
    out = ONE
    for dy, dx in inner:
        out = out * (1 - q ** dy * t ** dx)
    for dy, dx in outer:
        out = out / (1 - q ** dy * t ** dx)
    return out


def omega_theta(nu: Partition, lam: Partition, theta_value: Optional[Scalar] = None) -> FieldElement:
    """Corner weight in the Jack regime: factors (dy + theta*dx)."""
    th = theta if theta_value is None else as_field(theta_value)
    inner, outer = _corner_factors(Partition(nu), Partition(lam))
    out = ONE
    for dy, dx in inner:
        out = out * (dy + th * dx)
    for dy, dx in outer:
        out = out / (dy + th * dx)
    return out


def _limit_at_one(f: FieldElement) -> FieldElement:
    """Value at q = 1 of a reduced function of q alone (the denominator must not vanish)."""
    return substitute(f, {"q": 1})


def omega_limit_check(nu: Partition, lam: Partition, theta_value: Fraction) -> list[Check]:
    """omega(q,t) with q = z^s, t = z^r tends to omega(theta = r/s) as z -> 1.

    Checked for each corner factor and for the whole weight; z is carried by
    the symbol q.
    """
    theta_value = Fraction(theta_value)
    r, s = theta_value.numerator, theta_value.denominator
    case = {"nu": Partition(nu), "lambda": Partition(lam), "theta": theta_value}
    sub = {"q": q ** s, "t": q ** r}
    out = []
    inner, outer = _corner_factors(Partition(nu), Partition(lam))
    for dy, dx in inner + outer:
        factor = substitute(1 - q ** dy * t ** dx, sub) / (1 - q ** s)
        out.append(Check("omega_factor_limit", dict(case, factor=(dy, dx)),
                         _limit_at_one(factor) - (dy + theta_value * dx)))
    whole = _limit_at_one(substitute(omega_qt(nu, lam), sub))
    out.append(Check("omega_limit", case, whole - omega_theta(nu, lam, theta_value)))
    return out


def corner_recurrence_check(lam: Partition, mu: Partition) -> Check:
    """sum_{nu -> lam} omega [nu; mu]_inv = ([lam; 1] - [mu; 1]) [lam; mu]_inv."""
    lam, mu = Partition(lam), Partition(mu)
    one = Partition([1])
    lhs = ZERO
    for nu in lam.lower_covers():
        lhs = lhs + omega_qt(nu, lam) * binom_qt(nu, mu, "inv")
    rhs = (binom_qt(lam, one) - binom_qt(mu, one)) * binom_qt(lam, mu, "inv")
    return Check("corner_recurrence", {"lambda": lam, "mu": mu}, lhs - rhs)


def fhat_algorithm(f: Evaluation, deg: int, n: int) -> InterpolationResult:
    """Expansion coefficients from values f(q^lam) via the corner recurrence.

    F(mu, lam) is built from F(mu, nu) over nu -> lam with mu inside nu, and
    the sums over mu are accumulated as the table fills.  The recurrence
    produces coefficients against P*_mu / H(mu); dividing by H(lam) returns
    them to the P*_mu basis.  Only the one-box binomials [lam; 1] are formed.
    """
    knots = _knots(deg, n)
    # [lam; 1] only needs the linear interpolation polynomial
    e1 = {lam: _one_box_binomial(lam) for lam in knots}
    F: dict[tuple[Partition, Partition], FieldElement] = {}
    coeffs = {}
    for lam in knots:  # ordered by size, so every nu -> lam is already done
        total = ZERO
        for mu in subpartitions(lam):
            if mu == lam:
                val = f(lam)
            else:
                acc = ZERO
                for nu in lam.lower_covers():
                    prev = F.get((mu, nu))
                    if not prev or not nu.contains(mu):
                        continue
                    r = _check_cover(nu, lam)
                    i, j = r, lam.part(r)
                    acc = acc + q ** (j - 1) * t ** (1 - i) * omega_qt(nu, lam) * prev
                val = -acc / (e1[lam] - e1[mu]) if acc else ZERO
            if val:
                F[mu, lam] = val
                total = total + val
        coeffs[lam] = total / H_norm(lam)
    return InterpolationResult.build(coeffs, "qt", n)


def _one_box_binomial(lam: Partition) -> FieldElement:
    """[lam; 1] = sum_i t^(1-i) (q^lam_i - 1) / (q - 1)."""
    total = ZERO
    for i, part in enumerate(lam, start=1):
        total = total + t ** (1 - i) * (q ** part - 1)
    return total / (q - 1)


# --------------------------------------------------------------------------
# Jack regime


def _theta(theta_value: Optional[Scalar]) -> FieldElement:
    return theta if theta_value is None else as_field(theta_value)


def _key(theta_value: Optional[Scalar]):
    return None if theta_value is None else Fraction(as_field(theta_value).to_fraction())


def jack_basis(mu: Partition, n: int, theta_value: Optional[Scalar] = None) -> ShiftedSymPoly:
    """[x; mu]_theta: symmetric in x_i - theta*i, degree |mu|, zero at x = lam for
    lam != mu with |lam| <= |mu|, equal to 1 at x = mu."""
    return _jack_basis(Partition(mu), n, _key(theta_value))


@lru_cache(maxsize=None)
def _jack_basis(mu: Partition, n: int, key) -> ShiftedSymPoly:
    if len(mu) > n:
        raise ContractError(f"{mu!r} has more than {n} parts")
    th = _theta(key)
    basis = enumerate_partitions(mu.size, n)
    matrix, rhs = [], []
    for lam in basis:
        point = [FieldElement(p) - th * i for i, p in enumerate(lam.padded(n), start=1)]
        matrix.append([_monomial_symmetric(rho, point) for rho in basis])
        rhs.append(ONE if lam == mu else ZERO)
    coeffs = solve_fraction_free(matrix, rhs)
    shifted = [xvar(i) - th * i for i in range(1, n + 1)]
    total = ZERO
    for rho, c in zip(basis, coeffs):
        if c:
            total = total + c * _monomial_symmetric(rho, shifted)
    return ShiftedSymPoly(n, total)


def integer_point(lam: Partition, n: int) -> list[FieldElement]:
    return [FieldElement(p) for p in Partition(lam).padded(n)]


def jack_binom(lam: Partition, mu: Partition, theta_value: Optional[Scalar] = None) -> FieldElement:
    """[lam; mu]_theta, zero unless mu lies inside lam."""
    lam, mu = Partition(lam), Partition(mu)
    return _jack_binom(lam, mu, _key(theta_value))


@lru_cache(maxsize=None)
def _jack_binom(lam: Partition, mu: Partition, key) -> FieldElement:
    n = max(len(lam), len(mu), 1)
    return _jack_basis(mu, n, key).evaluate(integer_point(lam, n))


def jack_limit_check(lam: Partition, mu: Partition, theta_value: Fraction) -> Check:
    """[lam; mu]_{z^s, z^r} at z = 1 equals [lam; mu]_theta for theta = r/s."""
    theta_value = Fraction(theta_value)
    r, s = theta_value.numerator, theta_value.denominator
    limit = _limit_at_one(substitute(binom_qt(lam, mu), {"q": q ** s, "t": q ** r}))
    return Check("jack_limit", {"lambda": Partition(lam), "mu": Partition(mu), "theta": theta_value},
                 limit - jack_binom(lam, mu, theta_value))


def evaluation_at_integers(f: ShiftedSymPoly) -> Evaluation:
    return lambda lam: f.evaluate(integer_point(lam, f.n))


def jack_fhat_direct(f: Evaluation, deg: int, n: int, theta_value: Optional[Scalar] = None) -> InterpolationResult:
    """Triangular solve f(lam) = sum_{mu in lam} fhat(mu) [lam; mu]_theta."""
    coeffs: dict[Partition, FieldElement] = {}
    for lam in _knots(deg, n):
        acc = f(lam)
        for mu, c in coeffs.items():
            if c and mu != lam and lam.contains(mu):
                acc = acc - c * jack_binom(lam, mu, theta_value)
        coeffs[lam] = acc
    return InterpolationResult.build(coeffs, "jack", n)


def jack_fhat_explicit(f: Evaluation, deg: int, n: int, theta_value: Optional[Scalar] = None) -> InterpolationResult:
    """fhat(lam) = sum_{mu in lam} (-1)^|lam/mu| [lam; mu]_theta f(mu)."""
    coeffs = {}
    values = {lam: f(lam) for lam in _knots(deg, n)}
    for lam in values:
        total = ZERO
        for mu in subpartitions(lam):
            if values[mu]:
                total = total + sign(lam.size - mu.size) * jack_binom(lam, mu, theta_value) * values[mu]
        coeffs[lam] = total
    return InterpolationResult.build(coeffs, "jack", n)


def jack_fhat_fast(f: Evaluation, deg: int, n: int, theta_value: Optional[Scalar] = None) -> InterpolationResult:
    """Layered recurrence over partitions and the integers k <= |lam|.

    F^(0)(lam) = f(lam) and
    F^(k+1)(lam) = F^(k)(lam) - (1/|lam|) sum_{nu -> lam} omega(nu -> lam) F^(k)(nu);
    the coefficient is F^(|lam|)(lam).
    """
    layers: dict[Partition, list[FieldElement]] = {}
    coeffs = {}
    for lam in _knots(deg, n):
        row = [f(lam)]
        covers = [(nu, omega_theta(nu, lam, theta_value)) for nu in lam.lower_covers()]
        for k in range(lam.size):
            acc = ZERO
            for nu, w in covers:
                prev = layers[nu][k]
                if prev:
                    acc = acc + w * prev
            row.append(row[k] - acc / lam.size)
        layers[lam] = row
        coeffs[lam] = row[-1]
    return InterpolationResult.build(coeffs, "jack", n)


def forward_differences(values: list[Scalar]) -> list[FieldElement]:
    """Classical Newton coefficients with knots 0, 1, 2, ...: Delta^k f(0)."""
    row = [as_field(v) for v in values]
    out = []
    while row:
        out.append(row[0])
        row = [b - c for c, b in zip(row, row[1:])]
    return out
