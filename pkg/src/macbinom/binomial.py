"""(q,t)-binomial coefficients and the identities built from them."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial
from typing import Optional, Sequence

from .checks import Check
from .exact import (
    ONE,
    ZERO,
    Evaluator,
    FieldElement,
    PoleError,
    Scalar,
    TruncatedSeries,
    as_field,
    gen,
    invert_qt,
    series_expand,
    substitute,
    xvar,
)
from .macdonald import (
    H_norm,
    ShiftedSymPoly,
    a,
    e_star,
    h_star,
    interp_P_star,
    macdonald_P,
    principal_shift,
    q,
    qlambda_point,
    t,
)
from .partitions import (
    ContainmentError,
    Partition,
    complement,
    conjugate,
    dim_standard,
    enumerate_partitions,
    is_rectangle,
    n_stat,
    subpartitions,
)

u = gen("u")
_SYMBOLIC = Evaluator()


def _nvars(*parts: Partition) -> int:
    return max([len(p) for p in parts] + [1])


# --------------------------------------------------------------------------
# binomial coefficients


def binom_qt(lam: Partition, mu: Partition, regime: str = "qt") -> FieldElement:
    """[lam; mu] = P*_mu(q^lam) / P*_mu(q^mu); regime "inv" gives the 1/q,1/t version."""
    value = _binom_qt(Partition(lam), Partition(mu))
    if regime == "qt":
        return value
    if regime == "inv":
        return _binom_inv(Partition(lam), Partition(mu))
    raise ValueError(f"unknown regime {regime!r}")


@lru_cache(maxsize=None)
def _binom_qt(lam: Partition, mu: Partition) -> FieldElement:
    # the quotient is independent of the number of variables, so use the fewest
    if not lam.contains(mu):
        return ZERO
    n = _nvars(lam, mu)
    p = interp_P_star(mu, n)
    return p.evaluate(qlambda_point(lam, n)) / p.evaluate(qlambda_point(mu, n))


@lru_cache(maxsize=None)
def _binom_inv(lam: Partition, mu: Partition) -> FieldElement:
    return invert_qt(_binom_qt(lam, mu))


def _bar(lam: Partition, mu: Partition) -> FieldElement:
    return _binom_inv(Partition(lam), Partition(mu))


def q_binomial(l: int, m: int, base: FieldElement = q) -> FieldElement:
    """Gaussian binomial (base^l - 1)...(base^l - base^(m-1)) / ((base^m - 1)...(base^m - base^(m-1)))."""
    if m < 0 or m > l:
        return ZERO
    out = ONE
    for i in range(m):
        out = out * (base ** l - base ** i) / (base ** m - base ** i)
    return out


def pstar_one_variable(k: int, x: Scalar, base: FieldElement = q) -> FieldElement:
    """(x - 1)(x - base)...(x - base^(k-1))."""
    out = ONE
    for i in range(k):
        out = out * (as_field(x) - base ** i)
    return out


def sign(k: int) -> int:
    return -1 if k % 2 else 1


def c_weight(mu: Partition) -> FieldElement:
    """(-1)^|mu| q^n(mu') / t^n(mu)."""
    return sign(mu.size) * q ** n_stat(conjugate(mu)) * t ** (-n_stat(mu))


# --------------------------------------------------------------------------
# the binomial theorem and its limit forms


def _at_scaled(p: ShiftedSymPoly, scale: FieldElement) -> ShiftedSymPoly:
    return p.subs_x({i: scale * xvar(i) for i in range(1, p.n + 1)})


def _at_constant(p: ShiftedSymPoly, value: Scalar) -> FieldElement:
    return p.evaluate([as_field(value)] * p.n)


def _inverted_reversed(mu: Partition, n: int) -> FieldElement:
    """P*_mu(x_n, ..., x_1; 1/q, 1/t)."""
    return invert_qt(interp_P_star(mu, n)).reversed_vars().expr


def _terms(lam: Partition, n: int) -> list[Partition]:
    return [mu for mu in subpartitions(lam) if len(mu) <= n]


def binomial_theorem_check(lam: Partition, n: int, ev: Evaluator = _SYMBOLIC) -> Check:
    """P*_lam(a x)/P*_lam(a,...,a) against its expansion over mu inside lam."""
    lam = Partition(lam)
    p = interp_P_star(lam, n)
    lhs = ev.val(_at_scaled(p, a).expr) / ev.val(_at_constant(p, a))
    rhs = ZERO
    for mu in _terms(lam, n):
        coeff = a ** mu.size * t ** (-(n - 1) * mu.size) * _bar(lam, mu)
        denom = _at_constant(interp_P_star(mu, n), a)
        rhs = rhs + ev.val(coeff) * ev.val(_inverted_reversed(mu, n)) / ev.val(denom)
    return Check("binomial_theorem", {"lambda": lam, "n": n}, lhs - rhs)


def rewritten_theorem_check(lam: Partition, n: int, ev: Evaluator = _SYMBOLIC) -> Check:
    """The expansion with P*_mu(1/a, ..., 1/a; 1/q, 1/t) in the denominators."""
    lam = Partition(lam)
    p = interp_P_star(lam, n)
    lhs = ev.val(_at_scaled(p, a).expr) / ev.val(_at_constant(p, a))
    rhs = ZERO
    for mu in _terms(lam, n):
        coeff = sign(mu.size) * t ** n_stat(mu) * q ** (-n_stat(conjugate(mu))) * _bar(lam, mu)
        denom = invert_qt(_at_constant(interp_P_star(mu, n), 1 / a))
        rhs = rhs + ev.val(coeff) * ev.val(_inverted_reversed(mu, n)) / ev.val(denom)
    return Check("binomial_theorem_rewritten", {"lambda": lam, "n": n}, lhs - rhs)


def inversion_of_constant_check(mu: Partition, n: int) -> Check:
    """P*_mu(a..a; q,t) = (-a)^|mu| q^n(mu') t^(-n(mu) - |mu|(n-1)) P*_mu(1/a..1/a; 1/q,1/t)."""
    mu = Partition(mu)
    p = interp_P_star(mu, n)
    lhs = _at_constant(p, a)
    rhs = (
        sign(mu.size) * a ** mu.size * q ** n_stat(conjugate(mu))
        * t ** (-n_stat(mu) - mu.size * (n - 1))
        * invert_qt(_at_constant(p, 1 / a))
    )
    return Check("constant_inversion", {"mu": mu, "n": n}, lhs - rhs)


def top_degree_form_check(lam: Partition, n: int) -> Check:
    """P_lam(x1, x2/t, ...)/P_lam(1, 1/t, ...) = sum [lam;mu] P*_mu(x)/P_mu(1, 1/t, ...)."""
    lam = Partition(lam)
    ones = [t ** (1 - i) for i in range(1, n + 1)]
    P = macdonald_P(lam, n)
    lhs = principal_shift(P).expr / P.evaluate(ones)
    rhs = ZERO
    for mu in _terms(lam, n):
        rhs = rhs + binom_qt(lam, mu) * interp_P_star(mu, n).expr / macdonald_P(mu, n).evaluate(ones)
    return Check("top_degree_form", {"lambda": lam, "n": n}, lhs - rhs)


def zero_point_form_check(lam: Partition, n: int) -> Check:
    """P*_lam(x)/P*_lam(0..0) = sum [lam;mu]_{1/q,1/t} P_mu(x1, ..., xn t^(1-n))/P*_mu(0..0)."""
    lam = Partition(lam)
    p = interp_P_star(lam, n)
    lhs = p.expr / _at_constant(p, 0)
    rhs = ZERO
    for mu in _terms(lam, n):
        shifted = principal_shift(macdonald_P(mu, n)).expr
        rhs = rhs + _bar(lam, mu) * shifted / _at_constant(interp_P_star(mu, n), 0)
    return Check("zero_point_form", {"lambda": lam, "n": n}, lhs - rhs)


def limit_forms_check(lam: Partition, n: int, which: str) -> Check:
    """Dispatch to one of the algebraic forms: "rewritten", "top", "zero"."""
    forms = {
        "rewritten": rewritten_theorem_check,
        "top": top_degree_form_check,
        "zero": zero_point_form_check,
    }
    try:
        return forms[which](lam, n)
    except KeyError:
        raise ValueError(f"unknown form {which!r}; expected one of {sorted(forms)}") from None


def one_variable_checks(l: int) -> list[Check]:
    """The single-variable identities for the l-th interpolation polynomial."""
    x = xvar(1)
    qi = 1 / q
    out = []

    # x^l in the Newton basis with knots 1, q, q^2, ...
    rhs = sum((q_binomial(l, m) * pstar_one_variable(m, x) for m in range(l + 1)), ZERO)
    out.append(Check("newton_power", {"l": l}, x ** l - rhs))

    # the interpolation polynomial expanded in powers of x
    lhs = pstar_one_variable(l, x) / q ** (l * (l - 1) // 2)
    rhs = sum(
        (sign(l - m) * q_binomial(l, m, qi) * x ** m / q ** (m * (m - 1) // 2) for m in range(l + 1)),
        ZERO,
    )
    out.append(Check("power_expansion", {"l": l}, lhs - rhs))

    # binomial formula in one variable, with the explicit coefficient
    lhs = pstar_one_variable(l, a * x) / pstar_one_variable(l, a)
    rhs = sum(
        (a ** m * q_binomial(l, m, qi) * pstar_one_variable(m, x, qi) / pstar_one_variable(m, a) for m in range(l + 1)),
        ZERO,
    )
    out.append(Check("one_variable_theorem", {"l": l}, lhs - rhs))

    # same, with the coefficient written through interpolation values at q^-m
    rhs = ZERO
    for m in range(l + 1):
        ratio = pstar_one_variable(m, q ** (-l), qi) / pstar_one_variable(m, q ** (-m), qi)
        rhs = rhs + a ** m * ratio * pstar_one_variable(m, x, qi) / pstar_one_variable(m, a)
    out.append(Check("one_variable_theorem_values", {"l": l}, lhs - rhs))

    # consistency with the general machinery
    for m in range(l + 1):
        out.append(Check("q_binomial_matches", {"l": l, "m": m},
                         q_binomial(l, m) - binom_qt(Partition([l]), Partition([m]))))
    out.append(Check("one_variable_pstar", {"l": l},
                     interp_P_star(Partition([l]), 1).expr - pstar_one_variable(l, x)))
    return out


def binomial_suite(max_size: int, max_n: int, ev_factory=None) -> list[Check]:
    """Binomial theorem and all its forms on every lam with |lam| <= max_size."""
    out: list[Check] = []
    for n in range(1, max_n + 1):
        for lam in enumerate_partitions(max_size, n):
            ev = ev_factory(lam, n) if ev_factory else _SYMBOLIC
            out.append(binomial_theorem_check(lam, n, ev))
            out.append(rewritten_theorem_check(lam, n, ev))
            out.append(inversion_of_constant_check(lam, n))
            out.append(top_degree_form_check(lam, n))
            out.append(zero_point_form_check(lam, n))
    for l in range(max_size + 1):
        out.extend(one_variable_checks(l))
    return out


# --------------------------------------------------------------------------
# matrices


@dataclass
class PartitionMatrix:
    """Finite block of a matrix indexed by partitions."""

    row_index: list[Partition]
    col_index: list[Partition]
    entries: dict[tuple[Partition, Partition], FieldElement] = field(default_factory=dict)

    def __post_init__(self):
        self.row_index = list(dict.fromkeys(Partition(p) for p in self.row_index))
        self.col_index = list(dict.fromkeys(Partition(p) for p in self.col_index))

    def __getitem__(self, key: tuple[Partition, Partition]) -> FieldElement:
        return self.entries.get(key, ZERO)

    def __setitem__(self, key: tuple[Partition, Partition], value: FieldElement):
        if value:
            self.entries[key] = value
        else:
            self.entries.pop(key, None)


def matrix_S(n: int, index_set: Sequence[Partition], a_value: Optional[Scalar] = None) -> PartitionMatrix:
    """S[lam, nu] = P*_lam(a q^-nu_n, ..., a q^-nu_1) / P*_lam(a, ..., a)."""
    av = a if a_value is None else as_field(a_value)
    if av.is_zero():
        raise PoleError("the matrix S has a pole at a = 0")
    m = PartitionMatrix(list(index_set), list(index_set))
    for lam in m.row_index:
        p = interp_P_star(lam, n)
        denom = _at_constant(p, av)
        if denom.is_zero():
            raise PoleError(f"P*_{lam!r}(a, ..., a) vanishes at a = {av}")
        for nu in m.col_index:
            point = [av * q ** (-x) for x in reversed(nu.padded(n))]
            m[lam, nu] = p.evaluate(point) / denom
    return m


def A_weight(mu: Partition, n: int, a_value: Optional[Scalar] = None) -> FieldElement:
    """(-1)^|mu| q^n(mu') t^-n(mu) H(mu) / P*_mu(1/a, ..., 1/a)."""
    av = a if a_value is None else as_field(a_value)
    return c_weight(mu) * H_norm(mu) / _at_constant(interp_P_star(mu, n), 1 / av)


def symmetry_check(n: int, index_set: Sequence[Partition], a_value: Optional[Scalar] = None) -> list[Check]:
    S = matrix_S(n, index_set, a_value)
    out = []
    idx = S.row_index
    for i, lam in enumerate(idx):
        for nu in idx[i + 1:]:
            out.append(Check("S_symmetric", {"lambda": lam, "nu": nu, "n": n}, S[lam, nu] - S[nu, lam]))
    return out


def gauss_decomposition_check(n: int, index_set: Sequence[Partition]) -> list[Check]:
    """S = B'(1/q,1/t) A(a;1/q,1/t) B(1/q,1/t) entrywise."""
    S = matrix_S(n, index_set)
    A_bar = {}
    out = []
    for lam in S.row_index:
        for nu in S.col_index:
            total = ZERO
            for mu in subpartitions(lam):
                if len(mu) > n or not nu.contains(mu):
                    continue
                if mu not in A_bar:
                    A_bar[mu] = invert_qt(A_weight(mu, n))
                total = total + _bar(lam, mu) * A_bar[mu] * _bar(nu, mu)
            out.append(Check("gauss_decomposition", {"lambda": lam, "nu": nu, "n": n}, S[lam, nu] - total))
    return out


def trinomial(beta: Partition, lam: Partition, nu: Partition) -> FieldElement:
    """[beta; lam, nu] = [beta; nu] [beta \\ nu; lam] for a rectangle beta."""
    beta, lam, nu = Partition(beta), Partition(lam), Partition(nu)
    if not is_rectangle(beta):
        raise ContainmentError(f"{beta!r} is not a rectangle")
    if not beta.contains(lam) or not beta.contains(nu):
        raise ContainmentError(f"{lam!r} and {nu!r} must lie inside {beta!r}")
    b, n = (beta[0], len(beta)) if beta else (0, 0)
    return binom_qt(beta, nu) * binom_qt(complement(b, n, nu), lam)


def symmetry_II_check(beta: Partition, lam: Partition, nu: Partition) -> Check:
    """P*_lam(q^(beta\\nu))/P*_lam(q^beta) = P*_nu(q^(beta\\lam))/P*_nu(q^beta)."""
    beta, lam, nu = Partition(beta), Partition(lam), Partition(nu)
    b, n = beta[0], len(beta)

    def side(x: Partition, y: Partition) -> FieldElement:
        p = interp_P_star(x, n)
        return p.evaluate(qlambda_point(complement(b, n, y), n)) / p.evaluate(qlambda_point(beta, n))

    return Check("symmetry_II", {"beta": beta, "lambda": lam, "nu": nu}, side(lam, nu) - side(nu, lam))


def trinomial_symmetry_check(beta: Partition, lam: Partition, nu: Partition) -> Check:
    return Check("trinomial_symmetry", {"beta": beta, "lambda": lam, "nu": nu},
                 trinomial(beta, lam, nu) - trinomial(beta, nu, lam))


def binomial_theorem_II_check(beta: Partition, lam: Partition, nu: Partition) -> Check:
    beta, lam, nu = Partition(beta), Partition(lam), Partition(nu)
    total = ZERO
    for mu in subpartitions(lam):
        if not nu.contains(mu):
            continue
        w = sign(mu.size) * t ** n_stat(mu) * q ** (-n_stat(conjugate(mu)))
        total = total + w * _bar(lam, mu) * _bar(nu, mu) / _bar(beta, mu)
    rhs = binom_qt(beta, lam) * binom_qt(beta, nu) * total
    return Check("binomial_theorem_II", {"beta": beta, "lambda": lam, "nu": nu}, trinomial(beta, lam, nu) - rhs)


def inversion_check(index_set: Sequence[Partition]) -> list[Check]:
    """B C^-1 B(1/q,1/t) C = 1 and C^-1 B(1/q,1/t) C B = 1, with B[mu,lam] = [lam;mu].

    The index set should be closed under taking subpartitions so every
    intermediate term is present.
    """
    idx = list(dict.fromkeys(Partition(p) for p in index_set))
    out = []
    for mu in idx:
        for nu in idx:
            if not nu.contains(mu):
                # both products are triangular; the entry is an empty sum
                continue
            mids = [k for k in subpartitions(nu) if k.contains(mu)]
            right = sum((binom_qt(k, mu) * _bar(nu, k) * c_weight(nu) / c_weight(k) for k in mids), ZERO)
            left = sum((_bar(k, mu) * c_weight(k) / c_weight(mu) * binom_qt(nu, k) for k in mids), ZERO)
            target = ONE if mu == nu else ZERO
            case = {"mu": mu, "nu": nu}
            out.append(Check("inversion_right", case, right - target))
            out.append(Check("inversion_left", case, left - target))
    return out


def duality_check(lam: Partition, mu: Partition) -> Check:
    """[lam; mu]_{q,t} = [lam'; mu']_{1/t,1/q}."""
    lam, mu = Partition(lam), Partition(mu)
    dual = substitute(binom_qt(conjugate(lam), conjugate(mu)), {"q": 1 / t, "t": 1 / q})
    return Check("duality", {"lambda": lam, "mu": mu}, binom_qt(lam, mu) - dual)


# --------------------------------------------------------------------------
# generating functions


def _series_check(name: str, lhs: TruncatedSeries, rhs: TruncatedSeries, **case) -> Check:
    diff = lhs - rhs
    # one scalar residual: the coefficients weighted by powers of a fresh symbol
    residual = sum((c * u ** k for k, c in enumerate(diff.coeffs)), ZERO)
    return Check(name, case, residual)


def elementary_generating_check(n: int, order: int) -> Check:
    """prod (1 + x_i t^(1-i) v)/(1 + t^(1-i) v) = sum e*_k v^k / prod_{j<k} (1 + t^-j v), v = 1/u."""
    v = 1 / u
    lhs_expr = ONE
    for i in range(1, n + 1):
        lhs_expr = lhs_expr * (1 + xvar(i) * t ** (1 - i) * v) / (1 + t ** (1 - i) * v)
    lhs = series_expand(lhs_expr, "u", order, inverse=True)
    rhs = TruncatedSeries.constant("1/u", order, ZERO)
    for k in range(n + 1):
        term = v ** k
        for j in range(k):
            term = term / (1 + t ** (-j) * v)
        rhs = rhs + series_expand(term, "u", order, inverse=True) * e_star(k, n).expr
    return _series_check("elementary_generating", lhs, rhs, n=n, K=order)


def _pochhammer(z: FieldElement, k: int) -> FieldElement:
    out = ONE
    for i in range(k):
        out = out * (1 - q ** i * z)
    return out


def q_binomial_series(z: FieldElement, y: FieldElement, order: int) -> TruncatedSeries:
    """(z y; q)_inf / (y; q)_inf = sum (z;q)_k/(q;q)_k y^k as a series in v = 1/u.

    ``y`` must be a monomial multiple of v; its v-free part is extracted.
    """
    coeff_y = y * u
    cs = [_pochhammer(z, k) / _pochhammer(q, k) * coeff_y ** k for k in range(order + 1)]
    return TruncatedSeries.from_coeffs("1/u", order, cs)


def complete_generating_check(n: int, order: int) -> Check:
    """The complete-function generating series, both sides expanded in v = 1/u.

    Left: prod_i (t x_i t^-i v; q)_inf/(x_i t^-i v; q)_inf * (t^-i v; q)_inf/(t^(1-i) v; q)_inf.
    Right: sum_k t^-k (t;q)_k/(q;q)_k h*_k v^k / prod_{j<k} (1 - q^j v).
    """
    v = 1 / u
    lhs = TruncatedSeries.constant("1/u", order, ONE)
    for i in range(1, n + 1):
        lhs = lhs * q_binomial_series(t, xvar(i) * t ** (-i) * v, order)
        lhs = lhs * q_binomial_series(1 / t, t ** (1 - i) * v, order)
    rhs = TruncatedSeries.constant("1/u", order, ZERO)
    for k in range(order + 1):
        h = h_star(k, n).expr
        if h.is_zero():
            continue
        term = v ** k
        for j in range(k):
            term = term / (1 - q ** j * v)
        coeff = t ** (-k) * _pochhammer(t, k) / _pochhammer(q, k) * h
        rhs = rhs + series_expand(term, "u", order, inverse=True) * coeff
    return _series_check("complete_generating", lhs, rhs, n=n, K=order)


def gen_func_check(which: str, n: int, order: int) -> Check:
    if which == "elementary":
        return elementary_generating_check(n, order)
    if which == "complete":
        return complete_generating_check(n, order)
    raise ValueError(f"unknown generating function {which!r}")


# --------------------------------------------------------------------------
# Jack point theta = 1


def trinomial_dimension_check(beta: Partition, lam: Partition, nu: Partition) -> Check:
    """At theta = 1: [beta; lam, nu] counts standard tableaux.

    [beta; lam, nu] = multinomial(|beta|; |lam|, |nu|) dim(lam) dim(nu) dim((beta\\nu)/lam) / dim(beta),
    where the left side is built from Jack binomials, which at theta = 1 are
    the shifted Schur binomials.
    """
    from .newton import jack_binom

    beta, lam, nu = Partition(beta), Partition(lam), Partition(nu)
    if not is_rectangle(beta):
        raise ContainmentError(f"{beta!r} is not a rectangle")
    b, n = (beta[0], len(beta)) if beta else (0, 0)
    rest = complement(b, n, nu)
    left = jack_binom(beta, nu, theta_value=1) * jack_binom(rest, lam, theta_value=1)
    if rest.contains(lam):
        k = beta.size - lam.size - nu.size
        # multinomial |beta|! / (|lam|! |nu|! k!)
        count = factorial(beta.size) // (factorial(lam.size) * factorial(nu.size) * factorial(k))
        right = FieldElement(count * dim_standard(lam) * dim_standard(nu) * dim_standard(rest, lam))
        right = right / dim_standard(beta)
    else:
        right = ZERO
    return Check("trinomial_dimension", {"beta": beta, "lambda": lam, "nu": nu}, left - right)
