import random
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from macbinom import binomial as bn
from macbinom.exact import ONE, ZERO, Evaluator, PoleError, gen, random_point, substitute, xvar
from macbinom.macdonald import H_norm, interp_P_star
from macbinom.partitions import (
    EMPTY,
    Partition,
    conjugate,
    dim_standard,
    enumerate_partitions,
    partitions_in_box,
    subpartitions,
)

q, t, a = gen("q"), gen("t"), gen("a")
P = Partition

PAIRS = [(lam, mu) for lam in enumerate_partitions(5, 3) for mu in subpartitions(lam)]


def _schur_limit(f):
    """Value at q = t = 1, reached along the diagonal t = q."""
    return substitute(substitute(f, {"t": q}), {"q": 1})


# --- coefficients -----------------------------------------------------------


def test_binom_examples():
    assert bn.binom_qt(P([2]), P([1])) == 1 + q
    assert bn.binom_qt(P([2, 1]), P([1])) == 1 + q + 1 / t
    assert bn.binom_qt(P([2, 1]), P([2, 1])) == ONE
    assert bn.binom_qt(P([1]), P([2])) == ZERO


def test_inverse_regime():
    assert bn.binom_qt(P([2, 1]), P([1]), "inv") == 1 + 1 / q + t
    with pytest.raises(ValueError):
        bn.binom_qt(P([1]), EMPTY, "bogus")


@pytest.mark.parametrize("l", range(6))
def test_one_row_is_q_binomial(l):
    for m in range(l + 1):
        assert bn.binom_qt(P([l]), P([m])) == bn.q_binomial(l, m)


def test_q_binomial_values():
    assert bn.q_binomial(4, 2) == 1 + q + 2 * q ** 2 + q ** 3 + q ** 4
    assert bn.q_binomial(3, 0) == ONE
    assert bn.q_binomial(2, 3) == ZERO


@pytest.mark.parametrize("lam, mu", PAIRS)
def test_schur_limit_counts_tableaux(lam, mu):
    # at q = t -> 1 the coefficient is binom(|lam|,|mu|) dim(lam/mu) dim(mu) / dim(lam)
    expected = comb(lam.size, mu.size) * dim_standard(lam, mu) * dim_standard(mu)
    assert _schur_limit(bn.binom_qt(lam, mu)) * dim_standard(lam) == expected


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(PAIRS))
def test_definition_as_ratio(pair):
    lam, mu = pair
    n = max(len(lam), 1)
    value = interp_P_star(mu, n).evaluate([q ** p for p in lam.padded(n)])
    assert bn.binom_qt(lam, mu) == value / H_norm(mu)


# --- the binomial theorem ---------------------------------------------------


def test_theorem_one_variable_hand_case():
    # 1 + a (x1 - 1)/(a - 1) = (a x1 - 1)/(a - 1)
    x1 = xvar(1)
    assert 1 + a * (x1 - 1) / (a - 1) == (a * x1 - 1) / (a - 1)
    assert bn.binomial_theorem_check(P([1]), 1).ok


@pytest.mark.parametrize("lam", enumerate_partitions(3, 2))
def test_theorem_and_forms(lam):
    n = 2
    assert bn.binomial_theorem_check(lam, n).ok
    assert bn.rewritten_theorem_check(lam, n).ok
    assert bn.top_degree_form_check(lam, n).ok
    assert bn.zero_point_form_check(lam, n).ok
    for which in ("rewritten", "top", "zero"):
        assert bn.limit_forms_check(lam, n, which).ok


def test_constant_inversion():
    for mu in enumerate_partitions(3, 2):
        assert bn.inversion_of_constant_check(mu, 2).ok


@pytest.mark.parametrize("l", range(5))
def test_one_variable_degenerations(l):
    assert all(c.ok for c in bn.one_variable_checks(l))


def test_theorem_sampled_evaluator():
    rng = random.Random(11)
    for _ in range(3):
        ev = Evaluator(random_point(rng, ["q", "t", "a", "x1", "x2", "x3"]))
        assert bn.binomial_theorem_check(P([2, 1]), 3, ev).ok


def test_theorem_detects_a_wrong_coefficient(monkeypatch):
    # negative control: perturb one coefficient and the residual must be nonzero
    real = bn._bar

    def broken(lam, mu):
        value = real(lam, mu)
        return value + 1 if (lam, mu) == (P([2]), P([1])) else value

    monkeypatch.setattr(bn, "_bar", broken)
    assert not bn.binomial_theorem_check(P([2]), 1).ok


# --- matrix identities ------------------------------------------------------


def test_S_entries():
    S = bn.matrix_S(1, [EMPTY, P([1])])
    assert S[EMPTY, P([1])] == ONE
    assert S[P([1]), P([1])] == (a / q - 1) / (a - 1)


def test_S_pole_at_zero():
    with pytest.raises(PoleError):
        bn.matrix_S(1, [EMPTY], 0)


def test_S_symmetric_and_gauss():
    box = partitions_in_box(2, 2)
    assert all(c.ok for c in bn.symmetry_check(2, box))
    assert all(c.ok for c in bn.gauss_decomposition_check(2, box))
    assert all(c.ok for c in bn.gauss_decomposition_check(1, [EMPTY, P([1]), P([2])]))


def test_S_symmetric_at_power_of_q():
    assert all(c.ok for c in bn.symmetry_check(2, partitions_in_box(2, 2), q ** 2))


def test_trinomial():
    beta, lam = P([2, 2]), P([1])
    assert bn.trinomial(beta, lam, EMPTY) == bn.binom_qt(beta, lam)
    assert bn.trinomial_symmetry_check(beta, lam, lam).ok
    assert bn.trinomial_symmetry_check(P([3, 3]), P([2]), P([1, 1])).ok


def test_theorem_II():
    assert bn.binomial_theorem_II_check(P([2, 2]), EMPTY, P([1])).ok
    assert bn.binomial_theorem_II_check(P([2, 2]), P([1]), P([1])).ok
    assert bn.binomial_theorem_II_check(P([3, 3]), P([2]), P([1, 1])).ok


def test_symmetry_II():
    assert bn.symmetry_II_check(P([2, 2]), P([1]), P([1])).ok
    assert bn.symmetry_II_check(P([3, 3]), P([2]), P([1, 1])).ok


def test_inversion():
    checks = bn.inversion_check(enumerate_partitions(3, 2))
    assert checks and all(c.ok for c in checks)


def test_duality():
    f = bn.binom_qt(P([2, 1]), P([1]))
    assert substitute(f, {"q": 1 / t, "t": 1 / q}) == f
    assert bn.duality_check(P([3]), P([2])).ok
    assert bn.duality_check(P([1]), EMPTY).ok
    assert bn.binom_qt(conjugate(P([3])), conjugate(P([2]))) == substitute(
        bn.binom_qt(P([3]), P([2])), {"q": 1 / t, "t": 1 / q}
    )


# --- generating functions ---------------------------------------------------


@pytest.mark.parametrize("which", ["elementary", "complete"])
@pytest.mark.parametrize("n, order", [(1, 0), (1, 2), (2, 3), (3, 4)])
def test_generating_functions(which, n, order):
    assert bn.gen_func_check(which, n, order).ok


def test_trinomial_dimension():
    assert bn.trinomial_dimension_check(P([2, 2]), P([1]), P([1])).ok
    assert bn.trinomial_dimension_check(P([3, 3]), P([2, 1]), P([1])).ok
