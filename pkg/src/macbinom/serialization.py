"""JSON wire format for field elements and polynomials in x."""

from __future__ import annotations

from typing import Any

from .exact import FieldElement, parse_expression
from .macdonald import ShiftedSymPoly


def field_to_json(value: FieldElement) -> dict[str, str]:
    num, den = value.parts()
    return {"num": num, "den": den}


def field_from_json(doc: dict[str, str]) -> FieldElement:
    return parse_expression(doc["num"]) / parse_expression(doc["den"])


def poly_to_json(f: ShiftedSymPoly) -> dict[str, Any]:
    names = [f"x{i}" for i in range(1, f.n + 1)]
    coeffs = f.coeffs
    order = sorted(coeffs, key=lambda k: (sum(k), k), reverse=True)
    terms = []
    for exps in order:
        mono = {name: e for name, e in zip(names, exps) if e}
        terms.append({"monomial": mono, "coeff": field_to_json(coeffs[exps])})
    return {"vars": names, "terms": terms}


def poly_from_json(doc: dict[str, Any]) -> ShiftedSymPoly:
    names = list(doc["vars"])
    n = len(names)
    for i, name in enumerate(names, start=1):
        if name != f"x{i}":
            raise ValueError(f"unexpected variable list {names}")
    coeffs = {}
    for term in doc["terms"]:
        exps = tuple(int(term["monomial"].get(name, 0)) for name in names)
        coeffs[exps] = field_from_json(term["coeff"])
    return ShiftedSymPoly.from_coeffs(n, coeffs)
