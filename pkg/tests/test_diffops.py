import random
from itertools import combinations

import pytest

from macbinom import diffops as dops
from macbinom.exact import ONE, ZERO, PoleError, gen, substitute
from macbinom.macdonald import ShiftedSymPoly, e_star, interp_P_star
from macbinom.partitions import EMPTY, Partition, enumerate_partitions, partitions_in_box

q, t, u = gen("q"), gen("t"), gen("u")
P = Partition


def _eigen_closed_form(mu, n):
    out = ONE
    for i, m in enumerate(mu.padded(n), start=1):
        out = out * (q ** (-m) * t ** (i - 1) - u * t ** (n - 1))
    return out


def test_subsets():
    assert list(dops.subsets(2)) == [(), (1,), (2,), (1, 2)]
    assert len(list(dops.subsets(4))) == 16


def test_constant_is_eigenvector():
    for n in (1, 2, 3):
        value = dops.apply_Dstar(ShiftedSymPoly(n, ONE), dops.symbolic_point(n))
        expected = ONE
        for i in range(1, n + 1):
            expected = expected * (t ** (i - 1) - u * t ** (n - 1))
        assert value == expected


def test_one_variable_ratio():
    f = interp_P_star(P([1]), 1)
    assert dops.apply_Dstar(f, dops.symbolic_point(1)) / f.expr == 1 / q - u


@pytest.mark.parametrize("mu", enumerate_partitions(4, 2))
def test_eigenvalue_symbolic_two_variables(mu):
    assert dops.dstar_eigenvalue(mu, 2) == _eigen_closed_form(mu, 2)
    assert dops.eigen_check_Dstar(mu, 2).ok


@pytest.mark.parametrize("mu", [P([2, 1]), P([1, 1, 1]), P([2])])
def test_eigenvalue_sampled_three_variables(mu):
    points = dops.sample_points(random.Random(7), 3, 5)
    assert len(points) == 5
    assert dops.eigen_check_Dstar(mu, 3, points).ok


def test_sample_points_avoid_poles():
    for x in dops.sample_points(random.Random(1), 3, 10):
        for I in dops.subsets(3):
            dops.cross_factor(x, I)


def test_cross_factor_pole():
    # for I = {2} the denominator is x2 - x1 t
    with pytest.raises(PoleError):
        dops.cross_factor([ONE, t], (2,))


def test_non_eigenvector_is_detected():
    # an operator that is not diagonal on the basis: D*(u) composed with a shift in x
    def shifted(g, x):
        return dops.apply_Dstar(g, [x[0] + 1] + list(x[1:]))

    with pytest.raises(dops.NotAnEigenvector):
        dops.harish_chandra_table(shifted, [P([1])], 2)


def test_Dk_examples():
    assert dops.dk_eigenvalue(1, P([1]), 2) == 1 / q - 1
    assert dops.dk_eigenvalue(0, P([2, 1]), 2) == ONE
    # e*_2 with t -> 1/t is t (x1 - t)(x2 - 1)
    expected = t * (1 / q - t) * (1 / q - 1)
    assert dops.dk_eigenvalue(2, P([1, 1]), 2) == expected
    e2 = substitute(e_star(2, 2).expr, {"t": 1 / t, "x1": 1 / q, "x2": 1 / q})
    assert e2 == expected


@pytest.mark.parametrize("n", [1, 2])
def test_Dk_eigen(n):
    for mu in enumerate_partitions(3, n):
        assert all(c.ok for c in dops.dk_eigen_check(mu, n))


def test_D1_sum_form():
    for mu in enumerate_partitions(3, 2):
        expected = sum((t ** i * (q ** (-m) - 1) for i, m in enumerate(mu.padded(2))), ZERO)
        assert dops.dk_eigenvalue(1, mu, 2) == expected


def test_tables():
    idx = enumerate_partitions(2, 2)
    table = dops.harish_chandra_table(dops.apply_Dstar, idx, 2)
    assert table[EMPTY] == (1 - u * t) * (t - u * t)
    D0 = dops.extract_Dk(2)[0]
    assert set(dops.harish_chandra_table(D0, idx, 2).values()) == {ONE}


def test_commutation():
    assert all(c.ok for c in dops.commutation_check(enumerate_partitions(2, 2), 2))


def test_lemma_examples():
    assert dops.lemma_predicate((1, 0), (2,))[0]
    assert not dops.lemma_predicate((1, 1), (1,))[0]
    assert dops.lemma_predicate((1, 1), ()) == (True, ONE)


def _shifted_is_decreasing(xi, I):
    shifted = [x - (1 if i in I else 0) for i, x in enumerate(xi, start=1)]
    return all(a >= b for a, b in zip(shifted, shifted[1:]))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lemma_exhaustive(n):
    # the factor is nonzero exactly when lowering the entries in I keeps xi decreasing
    for xi in partitions_in_box(3, n):
        xi = xi.padded(n)
        for k in range(n + 1):
            for I in combinations(range(1, n + 1), k):
                nonzero, factor = dops.lemma_predicate(xi, I)
                assert nonzero == _shifted_is_decreasing(xi, I)
                assert nonzero == (not factor.is_zero())
    assert all(c.ok for c in dops.lemma_checks(box=2, max_n=2))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_determinant_form(n):
    assert all(c.ok for c in dops.determinant_form_check(n))


def test_image_reconstruction():
    rng = random.Random(3)
    f = interp_P_star(P([1]), 2) * 2 + interp_P_star(P([2]), 2)
    assert all(c.ok for c in dops.image_check(f, rng, u_value=gen("q") / 3))
