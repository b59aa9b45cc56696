import itertools
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from macbinom.partitions import (
    EMPTY,
    Box,
    ContainmentError,
    OutOfShapeError,
    Partition,
    complement,
    conjugate,
    corner_points,
    dim_standard,
    enumerate_partitions,
    enumerate_reverse_tableaux,
    hook_data,
    n_stat,
    parse_partition,
    partitions_in_box,
    partitions_of,
    subpartitions,
)


@st.composite
def partitions(draw, max_size=9, max_parts=4):
    size = draw(st.integers(0, max_size))
    choices = partitions_of(size, max_parts)
    return draw(st.sampled_from(choices))


P = Partition


def test_parse_and_validate():
    assert parse_partition("3,1,1") == P([3, 1, 1])
    assert parse_partition("") == EMPTY
    assert parse_partition("2,0") == P([2])
    with pytest.raises(ValueError):
        parse_partition("1,2")
    with pytest.raises(ValueError):
        parse_partition("a")


@pytest.mark.parametrize("lam, box, expected", [
    ((2, 1), (1, 1), (1, 0, 1, 0)),
    ((1,), (1, 1), (0, 0, 0, 0)),
    ((3, 1), (1, 2), (1, 1, 0, 0)),
])
def test_hook_data(lam, box, expected):
    assert hook_data(P(lam), Box(*box)) == expected


def test_hook_data_outside():
    with pytest.raises(OutOfShapeError):
        hook_data(P([1]), Box(2, 1))


@pytest.mark.parametrize("lam, expected", [((), 0), ((2, 1), 1), ((1, 1, 1), 3)])
def test_n_stat(lam, expected):
    assert n_stat(P(lam)) == expected


@settings(max_examples=60, deadline=None)
@given(partitions())
def test_n_stat_two_ways(lam):
    # sum of leg lengths over all boxes equals sum (i-1) lam_i
    assert n_stat(lam) == sum(hook_data(lam, s)[2] for s in lam.boxes())
    assert n_stat(conjugate(lam)) == sum(hook_data(lam, s)[0] for s in lam.boxes())


@settings(max_examples=60, deadline=None)
@given(partitions())
def test_conjugate_involution(lam):
    assert conjugate(conjugate(lam)) == lam
    assert conjugate(lam).size == lam.size


def test_complement():
    assert complement(2, 2, P([1])) == P([2, 1])
    assert complement(3, 2, EMPTY) == P([3, 3])
    with pytest.raises(ContainmentError):
        complement(1, 1, P([2]))


@settings(max_examples=60, deadline=None)
@given(partitions(max_size=8, max_parts=3))
def test_complement_involution(lam):
    b = lam[0] if lam else 0
    assert complement(b, 3, complement(b, 3, lam)) == lam
    assert complement(b, 3, lam).size == 3 * b - lam.size


def _as_sets(corners):
    return {k: {(c.x, c.y) for c in v} for k, v in corners.items()}


def test_corner_points():
    assert _as_sets(corner_points(P([1]), 2)) == {"outer": {(1, 1)}, "inner": {(0, 1)}, "star": {(2, 1)}}
    assert _as_sets(corner_points(EMPTY, 1)) == {"outer": set(), "inner": set(), "star": {(1, 1)}}
    assert _as_sets(corner_points(P([2]), 2)) == {"outer": {(1, 2)}, "inner": {(0, 2)}, "star": {(2, 1)}}
    with pytest.raises(ValueError):
        corner_points(P([1, 1]), 2)


@settings(max_examples=60, deadline=None)
@given(partitions())
def test_corner_counts(lam):
    # without a star there is one more inner corner than outer corners
    c = corner_points(lam)
    assert len(c["inner"]) == len(c["outer"]) + 1


def test_enumerate_partitions():
    assert enumerate_partitions(2, 2) == [EMPTY, P([1]), P([2]), P([1, 1])]
    assert enumerate_partitions(0, 4) == [EMPTY]
    # partitions of 0..5: 1 + 1 + 2 + 3 + 5 + 7
    all5 = enumerate_partitions(5, 5)
    assert len(all5) == 19
    assert len([p for p in all5 if p]) == 18


@pytest.mark.parametrize("size", range(8))
def test_partition_counts_brute_force(size):
    brute = set()
    for combo in itertools.product(range(size + 1), repeat=size):
        if sum(combo) == size:
            brute.add(tuple(sorted((c for c in combo if c), reverse=True)))
    assert {tuple(p) for p in partitions_of(size)} == brute


def test_partitions_in_box_and_subpartitions():
    box = partitions_in_box(2, 2)
    assert box == [EMPTY, P([1]), P([2]), P([1, 1]), P([2, 1]), P([2, 2])]
    assert subpartitions(P([2, 2])) == box
    assert len(partitions_in_box(3, 3)) == 20  # binomial(6, 3)


def _brute_reverse_tableaux(mu, n):
    boxes = list(mu.boxes())
    count = 0
    for values in itertools.product(range(1, n + 1), repeat=len(boxes)):
        T = dict(zip(boxes, values))
        rows_ok = all(T[(i, j)] >= T[(i, j + 1)] for (i, j) in boxes if (i, j + 1) in T)
        cols_ok = all(T[(i, j)] > T[(i + 1, j)] for (i, j) in boxes if (i + 1, j) in T)
        count += rows_ok and cols_ok
    return count


def test_reverse_tableaux_examples():
    assert [T.rows for T in enumerate_reverse_tableaux(P([1]), 2)] == [((2,),), ((1,),)]
    assert [T.rows for T in enumerate_reverse_tableaux(P([1, 1]), 2)] == [((2,), (1,))]
    rows = sorted(T.rows[0] for T in enumerate_reverse_tableaux(P([2]), 2))
    assert rows == [(1, 1), (2, 1), (2, 2)]


@pytest.mark.parametrize("mu", enumerate_partitions(4, 3))
@pytest.mark.parametrize("n", [1, 2, 3])
def test_reverse_tableaux_brute_force(mu, n):
    tabs = enumerate_reverse_tableaux(mu, n)
    assert len(tabs) == _brute_reverse_tableaux(mu, n)
    assert len({T.rows for T in tabs}) == len(tabs)


def _hook_length_count(lam):
    hooks = 1
    for s in lam.boxes():
        a, _, l, _ = hook_data(lam, s)
        hooks *= a + l + 1
    return factorial(lam.size) // hooks


def test_dim_standard_examples():
    assert dim_standard(P([2, 1])) == 2
    assert dim_standard(P([5])) == 1
    assert dim_standard(P([2, 1]), P([1])) == 2
    with pytest.raises(ContainmentError):
        dim_standard(P([1]), P([2]))


@settings(max_examples=60, deadline=None)
@given(partitions(max_size=10))
def test_dim_standard_hook_length(lam):
    assert dim_standard(lam) == _hook_length_count(lam)
