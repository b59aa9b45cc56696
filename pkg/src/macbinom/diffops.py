"""The difference operator D*(u), its Newton coefficients D_k, and their eigenvalues.

Operators are applied pointwise: [D f](x0) is computed at a concrete point
x0 whose coordinates may themselves be symbols.  A symbolic image is
recovered by interpolation only when needed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Callable, Optional, Sequence, Union

from .checks import Check, flag
from .exact import (
    ONE,
    ZERO,
    FieldElement,
    PoleError,
    Scalar,
    as_field,
    gen,
    random_rational,
    substitute,
    xvar,
)
from .macdonald import ShiftedSymPoly, a, e_star, interp_P_star, q, qlambda_point, t
from .partitions import Partition, partitions_in_box

u = gen("u")

Function = Union[ShiftedSymPoly, Callable[[Sequence[FieldElement]], FieldElement]]
Operator = Callable[[Function, Sequence[FieldElement]], FieldElement]


class NotAnEigenvector(ArithmeticError):
    pass


def _call(f: Function, x: Sequence[FieldElement]) -> FieldElement:
    return f.evaluate(list(x)) if isinstance(f, ShiftedSymPoly) else f(list(x))


def subsets(n: int):
    for k in range(n + 1):
        yield from combinations(range(1, n + 1), k)


def cross_factor(x: Sequence[Scalar], I: Sequence[int]) -> FieldElement:
    """prod over i in I, j not in I of (x_i - x_j t^(i-j+1)) / (x_i - x_j t^(i-j))."""
    n = len(x)
    xs = [as_field(v) for v in x]
    inside = set(I)
    out = ONE
    for i in inside:
        for j in range(1, n + 1):
            if j in inside:
                continue
            den = xs[i - 1] - xs[j - 1] * t ** (i - j)
            if den.is_zero():
                raise PoleError(f"cross factor has a pole at i={i}, j={j}")
            out = out * (xs[i - 1] - xs[j - 1] * t ** (i - j + 1)) / den
    return out


@dataclass(frozen=True)
class SubsetTerm:
    """One summand of D*(u): the prefactor for the subset I, before the shift T_I."""

    I: tuple[int, ...]
    n: int

    def prefactor(self, x: Sequence[Scalar], u_value: Scalar = None) -> FieldElement:
        uv = u if u_value is None else as_field(u_value)
        n, I = self.n, set(self.I)
        m = n - len(I)
        out = (-1) ** len(I) * t ** (m * (m - 1) // 2)
        for i in range(1, n + 1):
            xi = as_field(x[i - 1])
            out = out * ((1 - xi * t ** (n - i)) if i in I else (1 - uv * xi * t ** (n - i)))
        return out * cross_factor(x, self.I)

    def shifted(self, x: Sequence[Scalar]) -> list[FieldElement]:
        """T_I: x_i -> x_i / q for i in I."""
        return [as_field(v) / q if i in self.I else as_field(v) for i, v in enumerate(x, start=1)]


def apply_Dstar(f: Function, x: Sequence[Scalar], u_value: Scalar = None) -> FieldElement:
    """[D*(u) f](x) as the sum over subsets I of {1..n}."""
    n = len(x)
    xs = [as_field(v) for v in x]
    total = ZERO
    for I in subsets(n):
        term = SubsetTerm(I, n)
        pre = term.prefactor(xs, u_value)
        if pre:
            total = total + pre * _call(f, term.shifted(xs))
    for v in xs:
        if v.is_zero():
            raise PoleError("D*(u) is evaluated at a point with a zero coordinate")
        total = total / v
    return total


def dstar_eigenvalue(mu: Partition, n: int, u_value: Scalar = None) -> FieldElement:
    """prod_i (q^-mu_i t^(i-1) - u t^(n-1))."""
    uv = u if u_value is None else as_field(u_value)
    out = ONE
    for i, part in enumerate(Partition(mu).padded(n), start=1):
        out = out * (q ** (-part) * t ** (i - 1) - uv * t ** (n - 1))
    return out


def symbolic_point(n: int) -> list[FieldElement]:
    return [xvar(i) for i in range(1, n + 1)]


def sample_points(rng: random.Random, n: int, count: int) -> list[list[FieldElement]]:
    """Random rational points for x; q, t and u stay symbolic."""
    out = []
    while len(out) < count:
        pt = [FieldElement(random_rational(rng)) for _ in range(n)]
        if len({v.to_fraction() for v in pt}) == n:
            out.append(pt)
    return out


def eigen_check_Dstar(mu: Partition, n: int, points: Optional[list] = None) -> Check:
    """D*(u) P*_mu = eigenvalue * P*_mu, symbolically in x or at the given points."""
    mu = Partition(mu)
    p = interp_P_star(mu, n)
    lam = dstar_eigenvalue(mu, n)
    pts = [symbolic_point(n)] if points is None else points
    residual = ZERO
    for k, x in enumerate(pts):
        r = apply_Dstar(p, x) - lam * p.evaluate(x)
        if r:
            residual = r
            break
    mode = "symbolic" if points is None else f"sampled({len(pts)})"
    return Check("dstar_eigen", {"mu": mu, "n": n, "mode": mode}, residual)


# --------------------------------------------------------------------------
# Newton coefficients in u


def newton_coefficients(values: Sequence[FieldElement], knots: Sequence[FieldElement]) -> list[FieldElement]:
    """Divided differences c_m with g(u) = sum c_m prod_{j<m} (u - knot_j)."""
    table = list(values)
    out = [table[0]]
    for level in range(1, len(knots)):
        table = [
            (table[i + 1] - table[i]) / (knots[i + level] - knots[i])
            for i in range(len(table) - 1)
        ]
        out.append(table[0])
    return out


def apply_Dk(f: Function, x: Sequence[Scalar], n: Optional[int] = None) -> list[FieldElement]:
    """[D_k f](x) for k = 0..n, by interpolating u -> [D*(u) f](x) at u = t^-m."""
    n = len(x) if n is None else n
    knots = [t ** (-m) for m in range(n + 1)]
    values = [apply_Dstar(f, x, kn) for kn in knots]
    c = newton_coefficients(values, knots)
    out = []
    for k in range(n + 1):
        m = n - k
        out.append((-1) ** m * t ** (-(n - 1) * m) * c[m])
    return out


def extract_Dk(n: int) -> list[Operator]:
    """Actions of D_0, ..., D_n as pointwise operators."""
    return [lambda f, x, k=k: apply_Dk(f, x, n)[k] for k in range(n + 1)]


def dk_eigenvalue(k: int, mu: Partition, n: int) -> FieldElement:
    """e*_k(q^-mu; 1/t)."""
    e = substitute(e_star(k, n), {"t": 1 / t})
    return e.evaluate(qlambda_point(mu, n, inverse=True))


def dk_eigen_check(mu: Partition, n: int, points: Optional[list] = None) -> list[Check]:
    mu = Partition(mu)
    p = interp_P_star(mu, n)
    pts = [symbolic_point(n)] if points is None else points
    residuals = [ZERO] * (n + 1)
    for x in pts:
        vals = apply_Dk(p, x, n)
        base = p.evaluate(x)
        for k in range(n + 1):
            r = vals[k] - dk_eigenvalue(k, mu, n) * base
            if r and not residuals[k]:
                residuals[k] = r
    mode = "symbolic" if points is None else f"sampled({len(pts)})"
    return [Check("dk_eigen", {"k": k, "mu": mu, "n": n, "mode": mode}, residuals[k]) for k in range(n + 1)]


def harish_chandra_table(op: Operator, index_set: Sequence[Partition], n: int,
                         points: Optional[list] = None) -> dict[Partition, FieldElement]:
    """Eigenvalues d(q^-mu) of an operator diagonal on the P* basis.

    The ratio is read off at the first point and confirmed at the others;
    symbolic points are used when none are given.
    """
    pts = [symbolic_point(n)] if points is None else points
    table = {}
    for mu in index_set:
        mu = Partition(mu)
        p = interp_P_star(mu, n)
        value = None
        for x in pts:
            img, base = op(p, x), p.evaluate(x)
            if base.is_zero():
                if img:
                    raise NotAnEigenvector(f"P*_{mu!r} is not an eigenvector")
                continue
            ratio = img / base
            if value is None:
                value = ratio
            elif ratio != value:
                raise NotAnEigenvector(f"P*_{mu!r} is not an eigenvector")
        if value is None or value.variables() & {f"x{i}" for i in range(1, n + 1)}:
            raise NotAnEigenvector(f"P*_{mu!r} is not an eigenvector")
        table[mu] = value
    return table


# --------------------------------------------------------------------------
# the lemma on vanishing cross factors


def lemma_predicate(xi: Sequence[int], I: Sequence[int]) -> tuple[bool, FieldElement]:
    """Whether xi decremented on I is weakly decreasing, and the cross factor at a q^xi."""
    xi = list(xi)
    shifted = [v - 1 if i in I else v for i, v in enumerate(xi, start=1)]
    decreasing = all(shifted[i] >= shifted[i + 1] for i in range(len(shifted) - 1))
    factor = cross_factor([a * q ** v for v in xi], I)
    return decreasing, factor


def lemma_checks(box: int = 3, max_n: int = 3) -> list[Check]:
    out = []
    for n in range(1, max_n + 1):
        for xi in partitions_in_box(box, n):
            vec = xi.padded(n)
            for I in subsets(n):
                pred, factor = lemma_predicate(vec, I)
                out.append(flag("cross_factor_lemma", pred == (not factor.is_zero()), xi=vec, I=I))
    return out


# --------------------------------------------------------------------------
# the determinant form of D(u)


def _det(m: list[list[FieldElement]]) -> FieldElement:
    n = len(m)
    total = ZERO
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = FieldElement(-1 if inv % 2 else 1)
        for i in range(n):
            term = term * m[i][perm[i]]
        total = total + term
    return total


def determinant_form_check(n: int) -> list[Check]:
    """Expanding V(x)^-1 det[(1-u x_i)(1-t x_i)^(j-1)/x_i - (1-x_i)^j/x_i T_i] by subsets.

    Rows commute, so the coefficient of T_I is (-1)^|I| times the determinant
    with the shifted rows (i in I) taken from the second term.  It must equal
    the unshifted subset-sum prefactor.
    """
    x = symbolic_point(n)
    V = ONE
    for i in range(n):
        for j in range(i + 1, n):
            V = V * (x[i] - x[j])
    out = []
    for I in subsets(n):
        rows = []
        for i in range(1, n + 1):
            xi = x[i - 1]
            if i in I:
                rows.append([(1 - xi) ** j / xi for j in range(1, n + 1)])
            else:
                rows.append([(1 - u * xi) * (1 - t * xi) ** (j - 1) / xi for j in range(1, n + 1)])
        det_side = (-1) ** len(I) * _det(rows) / V
        m = n - len(I)
        expanded = (-1) ** len(I) * t ** (m * (m - 1) // 2)
        for i in range(1, n + 1):
            xi = x[i - 1]
            expanded = expanded * ((1 - xi) if i in I else (1 - u * xi)) / xi
            if i in I:
                for j in range(1, n + 1):
                    if j not in I:
                        expanded = expanded * (xi - t * x[j - 1]) / (xi - x[j - 1])
        out.append(Check("determinant_form", {"n": n, "I": I}, det_side - expanded))
    # shifting x_i -> x_i t^(n-i) turns the expanded prefactors into those of D*(u)
    for I in subsets(n):
        shifted = [x[i - 1] * t ** (n - i) for i in range(1, n + 1)]
        m = n - len(I)
        expanded = (-1) ** len(I) * t ** (m * (m - 1) // 2)
        for i in range(1, n + 1):
            xi = shifted[i - 1]
            expanded = expanded * ((1 - xi) if i in I else (1 - u * xi))
            if i in I:
                for j in range(1, n + 1):
                    if j not in I:
                        expanded = expanded * (xi - t * shifted[j - 1]) / (xi - shifted[j - 1])
        out.append(Check("shifted_prefactor", {"n": n, "I": I}, expanded - SubsetTerm(I, n).prefactor(x)))
    return out


# --------------------------------------------------------------------------
# recovering the image polynomial


def _lagrange(xv: FieldElement, nodes: Sequence[FieldElement], k: int) -> FieldElement:
    out = ONE
    for j, node in enumerate(nodes):
        if j != k:
            out = out * (xv - node) / (nodes[k] - node)
    return out


def reconstruct_image(f: ShiftedSymPoly, rng: random.Random, u_value: Scalar = None,
                      per_axis: Optional[int] = None) -> ShiftedSymPoly:
    """Interpolate x -> [D*(u) f](x) on a tensor grid with per_axis nodes per variable.

    The default per_axis = deg f + n leaves room for the image to have larger
    degree than f, so the degree bound is tested rather than assumed.
    """
    n = f.n
    per_axis = f.degree + n if per_axis is None else per_axis
    nodes = []
    for _ in range(n):
        axis: list[FieldElement] = []
        while len(axis) < per_axis:
            c = FieldElement(random_rational(rng, 50))
            if c not in axis:
                axis.append(c)
        nodes.append(axis)
    xs = symbolic_point(n)
    basis = [[_lagrange(xs[i], nodes[i], k) for k in range(per_axis)] for i in range(n)]
    total = ZERO
    grid = [()]
    for i in range(n):
        grid = [g + (k,) for g in grid for k in range(per_axis)]
    for g in grid:
        value = apply_Dstar(f, [nodes[i][g[i]] for i in range(n)], u_value)
        if value:
            term = value
            for i in range(n):
                term = term * basis[i][g[i]]
            total = total + term
    return ShiftedSymPoly(n, total)


def image_check(f: ShiftedSymPoly, rng: random.Random, u_value: Scalar = None, extra: int = 2) -> list[Check]:
    """The image of f is a shifted symmetric polynomial of degree at most deg f."""
    img = reconstruct_image(f, rng, u_value)
    case = {"n": f.n, "deg": f.degree}
    out = [
        flag("image_degree", img.degree <= f.degree, **case),
        flag("image_shifted_symmetric", img.is_shifted_symmetric("qt"), **case),
    ]
    for x in sample_points(rng, f.n, extra):
        out.append(Check("image_matches", dict(case, x=tuple(str(v) for v in x)),
                         img.evaluate(x) - apply_Dstar(f, x, u_value)))
    return out


def commutation_check(index_set: Sequence[Partition], n: int, points: Optional[list] = None) -> list[Check]:
    """D*(u1) and D*(u2) are both diagonal on the P* basis, hence commute."""
    u1, u2 = FieldElement(Fraction(1, 3)), FieldElement(Fraction(-5, 7))
    out = []
    for uv in (u1, u2):
        try:
            table = harish_chandra_table(lambda f, x: apply_Dstar(f, x, uv), index_set, n, points)
            ok = all(table[mu] == dstar_eigenvalue(mu, n, uv) for mu in table)
        except NotAnEigenvector:
            ok = False
        out.append(flag("common_eigenbasis", ok, n=n, u=uv))
    return out
