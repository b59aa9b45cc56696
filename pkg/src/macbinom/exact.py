"""Exact arithmetic over Q(q, t, a, u, theta)[x1, ..., xN].

Rational functions are stored as reduced pairs of integer polynomials backed
by FLINT's sparse multivariate polynomials.  The variable registry is fixed,
so every value lives in one polynomial context and canonical rendering is
reproducible across runs.
"""

from __future__ import annotations

import ast
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import flint

# Coefficient ground field.
BigRational = Fraction

MAX_X = 12
PARAMETERS = ("q", "t", "a", "u", "theta")
VARIABLES = PARAMETERS + tuple(f"x{i}" for i in range(1, MAX_X + 1))
NVARS = len(VARIABLES)
VAR_INDEX = {name: i for i, name in enumerate(VARIABLES)}
X_OFFSET = len(PARAMETERS)

_CTX = flint.fmpz_mpoly_ctx.get(VARIABLES, "deglex")
_GENS = _CTX.gens()
_ZERO_EXP = (0,) * NVARS


class PoleError(ArithmeticError):
    """A substitution or evaluation hit a zero denominator."""


class NotAPowerSeries(ArithmeticError):
    pass


def var_index(name: str) -> int:
    if name == "θ":
        name = "theta"
    try:
        return VAR_INDEX[name]
    except KeyError:
        raise KeyError(f"unknown variable {name!r}") from None


def x_index(i: int) -> int:
    """Registry slot of x_i (1-based)."""
    if not 1 <= i <= MAX_X:
        raise ValueError(f"x{i} outside the variable registry (max x{MAX_X})")
    return X_OFFSET + i - 1


def _const_poly(c: int):
    return _CTX.constant(c)


def _mono_poly(exps: Sequence[int], coeff: int = 1):
    return _CTX.from_dict({tuple(exps): coeff})


# --------------------------------------------------------------------------
# monomials and sparse polynomials


@dataclass(frozen=True)
class Monomial:
    """Laurent monomial; exponents keyed by registry name, zeros dropped."""

    exponents: tuple[tuple[str, int], ...] = ()

    @classmethod
    def from_vector(cls, vec: Sequence[int]) -> "Monomial":
        return cls(tuple((VARIABLES[i], e) for i, e in enumerate(vec) if e))

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, int]) -> "Monomial":
        vec = [0] * NVARS
        for name, e in mapping.items():
            vec[var_index(name)] += e
        return cls.from_vector(vec)

    def vector(self) -> tuple[int, ...]:
        vec = [0] * NVARS
        for name, e in self.exponents:
            vec[VAR_INDEX[name]] = e
        return tuple(vec)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exponents)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial.from_vector([a + b for a, b in zip(self.vector(), other.vector())])

    def __str__(self) -> str:
        return _render_monomial(self.vector()) or "1"


def _order_key(vec: Sequence[int]):
    # graded lex over the registry; callers sort descending
    return (sum(vec), tuple(vec))


def _render_monomial(vec: Sequence[int]) -> str:
    parts = []
    for i, e in enumerate(vec):
        if e == 0:
            continue
        parts.append(VARIABLES[i] if e == 1 else f"{VARIABLES[i]}^{e}")
    return "*".join(parts)


def _render_terms(terms: Mapping[tuple, Fraction]) -> str:
    if not terms:
        return "0"
    out = []
    for vec in sorted(terms, key=_order_key, reverse=True):
        c = Fraction(terms[vec])
        mono = _render_monomial(vec)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(out)


class SparsePoly:
    """Polynomial with rational coefficients: ``poly / denom`` for integer ``poly``."""

    __slots__ = ("_p", "_den")

    def __init__(self, poly, denom: int = 1):
        if denom <= 0:
            raise ValueError("denominator must be positive")
        g = math.gcd(int(poly.content()), denom) if not poly.is_zero() else denom
        self._p = poly / g if g > 1 else poly
        self._den = denom // g

    @classmethod
    def from_terms(cls, terms: Mapping[Monomial, Fraction]) -> "SparsePoly":
        den = 1
        for c in terms.values():
            den = math.lcm(den, Fraction(c).denominator)
        data: dict[tuple, int] = {}
        for m, c in terms.items():
            c = Fraction(c)
            if c:
                vec = m.vector()
                if any(e < 0 for e in vec):
                    raise ValueError("SparsePoly exponents must be nonnegative")
                data[vec] = data.get(vec, 0) + int(c * den)
        return cls(_CTX.from_dict({k: v for k, v in data.items() if v}), den)

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return {
            Monomial.from_vector(vec): Fraction(int(c), self._den)
            for vec, c in self._p.to_dict().items()
        }

    def is_zero(self) -> bool:
        return self._p.is_zero()

    @property
    def total_degree(self) -> int:
        return -1 if self._p.is_zero() else int(self._p.total_degree())

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            return other
        c = Fraction(other)
        return SparsePoly(_const_poly(c.numerator), c.denominator)

    def __add__(self, other):
        o = self._coerce(other)
        return SparsePoly(self._p * o._den + o._p * self._den, self._den * o._den)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly(-self._p, self._den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return SparsePoly(self._p * o._p, self._den * o._den)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self._den == o._den and self._p == o._p

    def __hash__(self) -> int:
        return hash((str(self._p), self._den))

    def __str__(self) -> str:
        return _render_terms(
            {vec: Fraction(int(c), self._den) for vec, c in self._p.to_dict().items()}
        )

    __repr__ = __str__


# --------------------------------------------------------------------------
# the fraction field


Scalar = Union[int, Fraction, "FieldElement"]


def _laurent_to_pair(terms: Mapping[tuple, Fraction]):
    """Clear negative exponents and rational coefficients: returns (num, den) polys."""
    if not terms:
        return _const_poly(0), _const_poly(1)
    shift = [0] * NVARS
    den_int = 1
    for vec, c in terms.items():
        for i, e in enumerate(vec):
            if e < shift[i]:
                shift[i] = e
        if isinstance(c, Fraction):
            den_int = math.lcm(den_int, c.denominator)
    data = {}
    for vec, c in terms.items():
        key = tuple(e - s for e, s in zip(vec, shift))
        data[key] = int(c * den_int)
    num = _CTX.from_dict(data)
    den = _mono_poly([-s for s in shift], den_int)
    return num, den


class FieldElement:
    """Element of Q(q, t, a, u, theta, x1, ...) in reduced canonical form.

    ``num/den`` are coprime integer polynomials and the leading coefficient
    of ``den`` (graded lex over the registry) is positive, so structural
    equality is mathematical equality.
    """

    __slots__ = ("_n", "_d", "_hash")

    def __init__(self, value: Union[int, Fraction, str, "FieldElement"] = 0):
        if isinstance(value, FieldElement):
            self._n, self._d = value._n, value._d
        elif isinstance(value, str):
            other = parse_expression(value)
            self._n, self._d = other._n, other._d
        else:
            c = Fraction(value)
            self._n = _const_poly(c.numerator)
            self._d = _const_poly(c.denominator)
        self._hash = None

    @classmethod
    def _raw(cls, n, d) -> "FieldElement":
        obj = cls.__new__(cls)
        obj._n, obj._d, obj._hash = n, d, None
        return obj

    @classmethod
    def from_polys(cls, num, den=None) -> "FieldElement":
        """Normalize an arbitrary pair of integer polynomials."""
        if den is None:
            return cls._raw(num, _const_poly(1))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return ZERO
        g = num.gcd(den)
        if not g.is_one():
            num = num / g
            den = den / g
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return cls._raw(num, den)

    @classmethod
    def from_laurent(cls, terms: Mapping[tuple, Fraction]) -> "FieldElement":
        return cls.from_polys(*_laurent_to_pair(terms))

    @classmethod
    def var(cls, name: str) -> "FieldElement":
        return cls._raw(_GENS[var_index(name)], _const_poly(1))

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff: Union[int, Fraction] = 1) -> "FieldElement":
        vec = [0] * NVARS
        for name, e in exps.items():
            vec[var_index(name)] += e
        return cls.from_laurent({tuple(vec): Fraction(coeff)})

    # -- views ------------------------------------------------------------
    @property
    def num(self) -> SparsePoly:
        return SparsePoly(self._n)

    @property
    def den(self) -> SparsePoly:
        return SparsePoly(self._d)

    @property
    def numerator_poly(self):
        return self._n

    @property
    def denominator_poly(self):
        return self._d

    def is_zero(self) -> bool:
        return self._n.is_zero()

    def is_one(self) -> bool:
        return self._n.is_one() and self._d.is_one()

    def is_constant(self) -> bool:
        return self._n.is_constant() and self._d.is_constant()

    def is_polynomial(self) -> bool:
        return self._d.is_constant()

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return Fraction(int(self._n.leading_coefficient()) if not self._n.is_zero() else 0,
                        int(self._d.leading_coefficient()))

    def variables(self) -> set[str]:
        used = set()
        for p in (self._n, self._d):
            for i, d in enumerate(p.degrees()):
                if d > 0:
                    used.add(VARIABLES[i])
        return used

    def degree_in(self, names: Iterable[str]) -> int:
        """Total degree of the numerator in the given variables (den must be free of them)."""
        idx = [var_index(n) for n in names]
        if self._n.is_zero():
            return -1
        return max(sum(vec[i] for i in idx) for vec in self._n.to_dict())

    # -- arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "FieldElement":
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(other)
        raise TypeError(f"cannot coerce {type(other).__name__} to FieldElement")

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if o._n.is_zero():
            return self
        if self._n.is_zero():
            return o
        d1, d2 = self._d, o._d
        if d1 == d2:
            return FieldElement.from_polys(self._n + o._n, d1)
        if d1.is_one():
            return FieldElement._raw(self._n * d2 + o._n, d2)
        if d2.is_one():
            return FieldElement._raw(self._n + o._n * d1, d1)
        g = d1.gcd(d2)
        if g.is_one():
            num = self._n * d2 + o._n * d1
            if num.is_zero():
                return ZERO
            den = d1 * d2
            if den.leading_coefficient() < 0:
                num, den = -num, -den
            return FieldElement._raw(num, den)
        d1g, d2g = d1 / g, d2 / g
        num = self._n * d2g + o._n * d1g
        if num.is_zero():
            return ZERO
        g2 = num.gcd(g)
        if not g2.is_one():
            num = num / g2
            g = g / g2
        den = d1g * d2g * g
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return FieldElement._raw(num, den)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._raw(-self._n, self._d)

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self._n.is_zero() or o._n.is_zero():
            return ZERO
        n1, d1, n2, d2 = self._n, self._d, o._n, o._d
        if not d2.is_one():
            g = n1.gcd(d2)
            if not g.is_one():
                n1, d2 = n1 / g, d2 / g
        if not d1.is_one():
            g = n2.gcd(d1)
            if not g.is_one():
                n2, d1 = n2 / g, d1 / g
        num, den = n1 * n2, d1 * d2
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return FieldElement._raw(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self._n.is_zero():
            raise ZeroDivisionError("division by zero in the fraction field")
        num, den = self._d, self._n
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return FieldElement._raw(num, den)

    def __truediv__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        return FieldElement._raw(self._n ** k, self._d ** k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldElement):
            if isinstance(other, (int, Fraction)):
                other = FieldElement(other)
            else:
                return NotImplemented
        return self._n == other._n and self._d == other._d

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((str(self._n), str(self._d)))
        return self._hash

    def __bool__(self) -> bool:
        return not self._n.is_zero()

    # -- substitution -------------------------------------------------------
    def subs(self, assignment: Mapping[str, Scalar]) -> "FieldElement":
        return substitute(self, assignment)

    # -- rendering ----------------------------------------------------------
    def parts(self) -> tuple[str, str]:
        """Canonical (numerator, denominator) strings.

        The monomial content of the denominator is moved into the numerator
        as a Laurent factor, and a constant denominator is folded into the
        numerator coefficients.
        """
        if self._n.is_zero():
            return "0", "1"
        dd = self._d.to_dict()
        dshift = [min(vec[i] for vec in dd) for i in range(NVARS)]
        dcore = {tuple(e - s for e, s in zip(vec, dshift)): int(c) for vec, c in dd.items()}
        nd = self._n.to_dict()
        if len(dcore) == 1 and next(iter(dcore)) == _ZERO_EXP:
            c = next(iter(dcore.values()))
            num_terms = {
                tuple(e - s for e, s in zip(vec, dshift)): Fraction(int(v), c) for vec, v in nd.items()
            }
            return _render_terms(num_terms), "1"
        num_terms = {tuple(e - s for e, s in zip(vec, dshift)): Fraction(int(v)) for vec, v in nd.items()}
        return _render_terms(num_terms), _render_terms({k: Fraction(v) for k, v in dcore.items()})

    def __str__(self) -> str:
        n, d = self.parts()
        if d == "1":
            return n
        if len(self._n) == 1:
            return f"{n}/({d})"
        return f"({n})/({d})"

    def __repr__(self) -> str:
        return f"FieldElement({str(self)!r})"


ZERO = FieldElement(0)
ONE = FieldElement(1)


def gen(name: str) -> FieldElement:
    return FieldElement.var(name)


def xvar(i: int) -> FieldElement:
    return FieldElement._raw(_GENS[x_index(i)], _const_poly(1))


def as_field(value) -> FieldElement:
    if isinstance(value, FieldElement):
        return value
    if isinstance(value, str):
        return parse_expression(value)
    return FieldElement(value)


def field_arithmetic(lhs: Scalar, rhs: Scalar, op: str) -> FieldElement:
    lhs, rhs = as_field(lhs), as_field(rhs)
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs / rhs
    raise ValueError(f"unknown operation {op!r}")


# --------------------------------------------------------------------------
# substitution


def _monomial_image(fe: FieldElement):
    """(coefficient, exponent vector) if fe is c * Laurent monomial, else None."""
    nd, dd = fe._n.to_dict(), fe._d.to_dict()
    if len(nd) != 1 or len(dd) != 1:
        return None
    (nv, nc), (dv, dc) = next(iter(nd.items())), next(iter(dd.items()))
    return Fraction(int(nc), int(dc)), tuple(a - b for a, b in zip(nv, dv))


def _subs_monomial_poly(poly, images: dict[int, tuple[Fraction, tuple]]) -> dict:
    out: dict[tuple, Fraction] = {}
    idx = list(images)
    for vec, c in poly.to_dict().items():
        new = list(vec)
        coef = Fraction(int(c))
        for v in idx:
            k = int(vec[v])
            if k:
                cv, delta = images[v]
                new[v] -= k
                for j, dj in enumerate(delta):
                    if dj:
                        new[j] += k * dj
                if cv != 1:
                    if cv == 0 and k < 0:
                        raise PoleError("zero substituted into a negative power")
                    coef *= cv ** k
        if coef:
            key = tuple(new)
            s = out.get(key, 0) + coef
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def _subs_general_poly(poly, images: dict[int, FieldElement]):
    """Substitute rational images into an integer polynomial; returns (num, den) polys."""
    data = poly.to_dict()
    if not data:
        return _const_poly(0), _const_poly(1)
    degs = {v: max(vec[v] for vec in data) for v in images}
    if all(images[v]._d.is_one() for v in images):
        args = list(_GENS)
        for v, fe in images.items():
            args[v] = fe._n
        return poly.compose(*args), _const_poly(1)
    npow: dict[tuple, object] = {}
    dpow: dict[tuple, object] = {}

    def p_n(v, k):
        key = (v, k)
        if key not in npow:
            npow[key] = images[v]._n ** k
        return npow[key]

    def p_d(v, k):
        key = (v, k)
        if key not in dpow:
            dpow[key] = images[v]._d ** k
        return dpow[key]

    total = _const_poly(0)
    for vec, c in data.items():
        rest = list(vec)
        term = _const_poly(int(c))
        for v in images:
            k = vec[v]
            rest[v] = 0
            term = term * p_n(v, k) * p_d(v, degs[v] - k)
        total += term * _mono_poly(rest)
    den = _const_poly(1)
    for v in images:
        den = den * p_d(v, degs[v])
    return total, den


def substitute(f, assignment: Mapping[str, Scalar]):
    """Simultaneous substitution of variables by field elements.

    Works on FieldElement and on anything exposing ``map_field`` (shifted
    symmetric polynomials).  Raises PoleError when the result has a zero
    denominator.
    """
    if not isinstance(f, FieldElement):
        return f.map_field(lambda c: substitute(c, assignment))
    if not assignment:
        return f
    images = {var_index(k): as_field(v) for k, v in assignment.items()}
    mono = {}
    for v, img in images.items():
        m = _monomial_image(img)
        if m is None:
            mono = None
            break
        mono[v] = m
    if mono is not None:
        num = FieldElement.from_laurent(_subs_monomial_poly(f._n, mono))
        den = FieldElement.from_laurent(_subs_monomial_poly(f._d, mono))
        if den.is_zero():
            raise PoleError(f"denominator vanishes under {dict(assignment)}")
        return num / den
    nn, nd = _subs_general_poly(f._n, images)
    dn, dd = _subs_general_poly(f._d, images)
    if dn.is_zero():
        raise PoleError(f"denominator vanishes under {dict(assignment)}")
    return FieldElement.from_polys(nn * dd, nd * dn)


def invert_qt(f):
    """Apply q -> 1/q, t -> 1/t."""
    return substitute(f, {"q": gen("q").inverse(), "t": gen("t").inverse()})


# --------------------------------------------------------------------------
# dual verification support


def random_rational(rng: random.Random, bound: int = 10**4) -> Fraction:
    while True:
        num = rng.randint(-bound, bound)
        den = rng.randint(1, bound)
        if num:
            return Fraction(num, den)


def random_point(rng: random.Random, names: Iterable[str], bound: int = 10**4) -> dict[str, FieldElement]:
    return {name: FieldElement(random_rational(rng, bound)) for name in names}


class Evaluator:
    """Symbolic evaluation or specialization at a fixed rational point.

    Identity checks pass every building block through ``val`` before
    combining; in sampled mode that collapses them onto the point early.
    """

    def __init__(self, point: Mapping[str, Scalar] | None = None):
        self.point = dict(point) if point else {}

    @property
    def symbolic(self) -> bool:
        return not self.point

    def val(self, f):
        return substitute(f, self.point) if self.point else f


# --------------------------------------------------------------------------
# truncated power series


@dataclass(frozen=True)
class TruncatedSeries:
    variable: str
    order: int
    coeffs: tuple[FieldElement, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValueError("series must carry exactly order+1 coefficients")

    @classmethod
    def constant(cls, variable: str, order: int, value: Scalar) -> "TruncatedSeries":
        return cls(variable, order, (as_field(value),) + (ZERO,) * order)

    @classmethod
    def from_coeffs(cls, variable: str, order: int, coeffs: Sequence[Scalar]) -> "TruncatedSeries":
        cs = [as_field(c) for c in coeffs[: order + 1]]
        cs += [ZERO] * (order + 1 - len(cs))
        return cls(variable, order, tuple(cs))

    def __getitem__(self, k: int) -> FieldElement:
        return self.coeffs[k]

    def _check(self, other: "TruncatedSeries"):
        if self.variable != other.variable or self.order != other.order:
            raise ValueError("series in different variables or orders")

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(self.variable, self.order, other)
        self._check(other)
        return TruncatedSeries(self.variable, self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.variable, self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            c = as_field(other)
            return TruncatedSeries(self.variable, self.order, tuple(x * c for x in self.coeffs))
        self._check(other)
        K = self.order
        out = []
        for k in range(K + 1):
            acc = ZERO
            for i in range(k + 1):
                a, b = self.coeffs[i], other.coeffs[k - i]
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return TruncatedSeries(self.variable, K, tuple(out))

    __rmul__ = __mul__

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by variable**k (k >= 0), truncating."""
        cs = (ZERO,) * k + self.coeffs
        return TruncatedSeries(self.variable, self.order, cs[: self.order + 1])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __str__(self) -> str:
        terms = [f"({c})*{self.variable}^{k}" for k, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) + f" + O({self.variable}^{self.order + 1})" if terms else f"O({self.variable}^{self.order + 1})"


def _coefficients_in(poly, v: int) -> dict[int, object]:
    groups: dict[int, dict] = {}
    for vec, c in poly.to_dict().items():
        k = vec[v]
        rest = list(vec)
        rest[v] = 0
        groups.setdefault(k, {})[tuple(rest)] = int(c)
    return {k: _CTX.from_dict(d) for k, d in groups.items()}


def series_expand(expr: Scalar, variable: str, order: int, inverse: bool = False) -> TruncatedSeries:
    """Expand ``expr`` as a power series in ``variable`` (or in 1/variable).

    With ``inverse=True`` the formal variable is v = 1/variable; the result's
    coefficients are free of ``variable``.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    f = as_field(expr)
    label = variable
    if inverse:
        f = substitute(f, {variable: gen(variable).inverse()})
        label = f"1/{variable}"
    v = var_index(variable)
    ncoef = _coefficients_in(f._n, v)
    dcoef = _coefficients_in(f._d, v)
    d0 = dcoef.get(0)
    if d0 is None:
        # a pure power of v in the denominator would need a Laurent tail
        raise NotAPowerSeries(f"denominator of {f} vanishes at {label}=0")
    d0_inv = FieldElement.from_polys(_const_poly(1), d0)
    dfe = {k: FieldElement._raw(p, _const_poly(1)) for k, p in dcoef.items()}
    out: list[FieldElement] = []
    for k in range(order + 1):
        acc = FieldElement._raw(ncoef[k], _const_poly(1)) if k in ncoef else ZERO
        for j in range(1, k + 1):
            if j in dfe and out[k - j]:
                acc = acc - dfe[j] * out[k - j]
        out.append(acc * d0_inv)
    return TruncatedSeries(label, order, tuple(out))


# --------------------------------------------------------------------------
# parsing the canonical text grammar


def parse_expression(text: str) -> FieldElement:
    """Parse ``c * x1^2 * q^-1 / (1 - t) + ...`` into a FieldElement."""
    src = text.replace("^", "**").replace("θ", "theta").strip()
    if not src:
        raise ValueError("empty expression")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse {text!r}: {exc.msg}") from None
    return _eval_node(tree.body, text)


def _int_exponent(node, text) -> int:
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        k = _int_exponent(node.operand, text)
        return -k if isinstance(node.op, ast.USub) else k
    raise ValueError(f"exponents must be integer literals in {text!r}")


def _eval_node(node, text) -> FieldElement:
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return FieldElement(node.value)
    if isinstance(node, ast.Name):
        try:
            return gen(node.id)
        except KeyError:
            raise ValueError(f"unknown symbol {node.id!r} in {text!r}") from None
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        val = _eval_node(node.operand, text)
        return -val if isinstance(node.op, ast.USub) else val
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            return _eval_node(node.left, text) ** _int_exponent(node.right, text)
        left, right = _eval_node(node.left, text), _eval_node(node.right, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if right.is_zero():
                raise ZeroDivisionError(f"division by zero in {text!r}")
            return left / right
    raise ValueError(f"unsupported syntax in {text!r}")


# --------------------------------------------------------------------------
# fraction-free linear solving


class SingularSystemError(ArithmeticError):
    pass


def solve_fraction_free(matrix: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]) -> list[FieldElement]:
    """Solve ``matrix @ x = rhs`` exactly by Bareiss elimination.

    Rows are first scaled to integer polynomials so the elimination runs in
    the polynomial ring with exact divisions; only the back substitution
    touches the fraction field.
    """
    size = len(matrix)
    rows = []
    for row, b in zip(matrix, rhs):
        entries = [as_field(v) for v in row] + [as_field(b)]
        den = _const_poly(1)
        for e in entries:
            if not e._d.is_one():
                den = den * (e._d / den.gcd(e._d))
        rows.append([e._n * (den / e._d) for e in entries])
    prev = _const_poly(1)
    for k in range(size):
        piv = next((i for i in range(k, size) if not rows[i][k].is_zero()), None)
        if piv is None:
            raise SingularSystemError(f"singular system at column {k}")
        rows[k], rows[piv] = rows[piv], rows[k]
        pk = rows[k]
        akk = pk[k]
        for i in range(k + 1, size):
            ri = rows[i]
            aik = ri[k]
            if aik.is_zero():
                if not prev.is_one():
                    for j in range(k + 1, size + 1):
                        ri[j] = (akk * ri[j]) / prev
                else:
                    for j in range(k + 1, size + 1):
                        ri[j] = akk * ri[j]
                continue
            for j in range(k + 1, size + 1):
                val = akk * ri[j] - aik * pk[j]
                ri[j] = val / prev if not prev.is_one() else val
            ri[k] = _const_poly(0)
        prev = akk
    sol: list[FieldElement] = [ZERO] * size
    for i in range(size - 1, -1, -1):
        acc = FieldElement._raw(rows[i][size], _const_poly(1))
        for j in range(i + 1, size):
            if not rows[i][j].is_zero() and sol[j]:
                acc = acc - FieldElement._raw(rows[i][j], _const_poly(1)) * sol[j]
        sol[i] = acc / FieldElement._raw(rows[i][i], _const_poly(1))
    return sol
