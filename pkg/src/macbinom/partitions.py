"""Partitions, Young diagrams and the tableau combinatorics built on them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence


class ContainmentError(ValueError):
    pass


class OutOfShapeError(ValueError):
    pass


class Partition(tuple):
    """Weakly decreasing tuple of positive integers; trailing zeros are dropped."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = [int(p) for p in parts]
        while parts and parts[-1] == 0:
            parts.pop()
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    def __repr__(self) -> str:
        return f"Partition({format_partition(self) or '∅'})"

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def part(self, i: int) -> int:
        """1-based part, zero beyond the length."""
        return self[i - 1] if 1 <= i <= len(self) else 0

    def padded(self, n: int) -> tuple[int, ...]:
        if len(self) > n:
            raise ValueError(f"{self!r} has more than {n} parts")
        return tuple(self) + (0,) * (n - len(self))

    def conjugate(self) -> "Partition":
        return conjugate(self)

    def boxes(self) -> Iterator["Box"]:
        for i, row in enumerate(self, start=1):
            for j in range(1, row + 1):
                yield Box(i, j)

    def contains(self, other: "Partition") -> bool:
        """True when ``other`` is a subdiagram of self."""
        return len(other) <= len(self) and all(o <= s for o, s in zip(other, self))

    def __contains__(self, box) -> bool:
        if isinstance(box, Box):
            return 1 <= box.row <= len(self) and 1 <= box.col <= self[box.row - 1]
        return super().__contains__(box)

    def addable_rows(self) -> list[int]:
        rows = [i for i in range(1, len(self) + 1) if i == 1 or self[i - 2] > self[i - 1]]
        rows.append(len(self) + 1)
        return rows

    def removable_rows(self) -> list[int]:
        return [i for i in range(1, len(self) + 1) if self.part(i) > self.part(i + 1)]

    def add_box(self, row: int) -> "Partition":
        parts = list(self) + [0]
        parts[row - 1] += 1
        return Partition(parts)

    def remove_box(self, row: int) -> "Partition":
        parts = list(self)
        parts[row - 1] -= 1
        return Partition(parts)

    def lower_covers(self) -> list["Partition"]:
        """All nu with nu obtained from self by removing one corner."""
        return [self.remove_box(r) for r in self.removable_rows()]


EMPTY = Partition()


class Box(NamedTuple):
    row: int
    col: int


class CornerPoint(NamedTuple):
    x: int
    y: int
    kind: str  # "inner", "outer" or "star"


@dataclass(frozen=True)
class ReverseTableau:
    """Filling weakly decreasing along rows, strictly decreasing down columns."""

    shape: Partition
    rows: tuple[tuple[int, ...], ...]

    def __getitem__(self, box: Box) -> int:
        return self.rows[box.row - 1][box.col - 1]

    @property
    def entries(self) -> dict[Box, int]:
        return {b: self[b] for b in self.shape.boxes()}

    def chain(self, n: int) -> list[Partition]:
        """Shapes {s : T(s) >= i} for i = n+1, n, ..., 1 (growing)."""
        out = []
        for i in range(n + 1, 0, -1):
            out.append(Partition(sum(1 for v in row if v >= i) for row in self.rows))
        return out


def parse_partition(text: str) -> Partition:
    """Parse "3,1,1"; the empty string (or "∅") is the empty partition."""
    text = text.strip()
    if text in ("", "∅", "0"):
        return EMPTY
    try:
        parts = [int(p) for p in text.replace(" ", "").split(",") if p != ""]
    except ValueError:
        raise ValueError(f"invalid partition string {text!r}") from None
    return Partition(parts)


def format_partition(p: Sequence[int]) -> str:
    return ",".join(str(x) for x in p)


@lru_cache(maxsize=None)
def conjugate(p: Partition) -> Partition:
    if not p:
        return EMPTY
    return Partition(sum(1 for x in p if x > j) for j in range(p[0]))


def hook_data(lam: Partition, s: Box) -> tuple[int, int, int, int]:
    """Arm, arm-colength, leg and leg-colength of box s in lam."""
    if s not in lam:
        raise OutOfShapeError(f"box {tuple(s)} is not in {lam!r}")
    i, j = s
    lc = conjugate(lam)
    return lam[i - 1] - j, j - 1, lc[j - 1] - i, i - 1


def n_stat(lam: Sequence[int]) -> int:
    return sum(i * p for i, p in enumerate(lam))


def complement(b: int, n: int, lam: Partition) -> Partition:
    """Complement of lam inside the rectangle (b^n), rotated by 180 degrees."""
    if len(lam) > n or (lam and lam[0] > b):
        raise ContainmentError(f"{lam!r} is not contained in ({b}^{n})")
    padded = lam.padded(n)
    return Partition(b - padded[n - 1 - i] for i in range(n))


def rectangle(b: int, n: int) -> Partition:
    return Partition([b] * n) if b > 0 else EMPTY


def is_rectangle(p: Partition) -> bool:
    return len(set(p)) <= 1


def corner_points(nu: Partition, star_row: Optional[int] = None) -> dict[str, list[CornerPoint]]:
    """Boundary corners of nu in (row, column) lattice coordinates.

    Outer corners sit at (i, nu_i) for each removable row i; inner corners
    at (i - 1, nu_i) for each addable row i, minus the one at ``star_row``;
    the star is the box added at ``star_row``.
    """
    if star_row is not None and star_row not in nu.addable_rows():
        raise ValueError(f"no box is addable to {nu!r} in row {star_row}")
    outer = [CornerPoint(i, nu.part(i), "outer") for i in nu.removable_rows()]
    inner = [
        CornerPoint(i - 1, nu.part(i), "inner")
        for i in nu.addable_rows()
        if i != star_row
    ]
    star = [CornerPoint(star_row, nu.part(star_row) + 1, "star")] if star_row is not None else []
    return {"outer": outer, "inner": inner, "star": star}


def _partitions_of(n: int, max_part: int, max_parts: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions_of(n - first, first, max_parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def partitions_of(n: int, max_parts: Optional[int] = None) -> tuple[Partition, ...]:
    """Partitions of n in reverse-lex order, optionally with at most max_parts parts."""
    mp = n if max_parts is None else max_parts
    return tuple(Partition(p) for p in _partitions_of(n, n, mp))


def enumerate_partitions(max_size: int, max_parts: int) -> list[Partition]:
    out: list[Partition] = []
    for k in range(max_size + 1):
        out.extend(partitions_of(k, max_parts))
    return out


def partitions_in_box(b: int, n: int) -> list[Partition]:
    """All partitions contained in (b^n), ordered by size then reverse-lex."""
    return [p for p in enumerate_partitions(b * n, n) if not p or p[0] <= b]


def subpartitions(lam: Partition) -> list[Partition]:
    """All mu contained in lam, ordered by size then reverse-lex."""
    return _subpartitions(lam)


@lru_cache(maxsize=None)
def _subpartitions(lam: Partition) -> list[Partition]:
    res = []

    def rec(i: int, bound: int, acc: list[int]):
        if i == len(lam):
            res.append(Partition(acc))
            return
        for v in range(min(bound, lam[i]), -1, -1):
            rec(i + 1, v, acc + [v])

    rec(0, lam[0] if lam else 0, [])
    res.sort(key=lambda p: (p.size, [-x for x in p]))
    return res


def enumerate_reverse_tableaux(mu: Partition, n: int) -> list[ReverseTableau]:
    return list(_reverse_tableaux(mu, n))


@lru_cache(maxsize=None)
def _reverse_tableaux(mu: Partition, n: int) -> tuple[ReverseTableau, ...]:
    if len(mu) > n:
        return ()
    boxes = list(mu.boxes())
    rows = [[0] * r for r in mu]
    out: list[ReverseTableau] = []

    def rec(k: int):
        if k == len(boxes):
            out.append(ReverseTableau(mu, tuple(tuple(r) for r in rows)))
            return
        i, j = boxes[k]
        hi = n if j == 1 else rows[i - 1][j - 2]
        if i > 1:
            hi = min(hi, rows[i - 2][j - 1] - 1)
        # entries in row i must leave room for the rows below: T(i,j) >= len(mu) - i + 1
        lo = max(1, sum(1 for r in mu[i - 1:] if r >= j))
        for v in range(hi, lo - 1, -1):
            rows[i - 1][j - 1] = v
            rec(k + 1)
        rows[i - 1][j - 1] = 0

    rec(0)
    return tuple(out)


@lru_cache(maxsize=None)
def dim_standard(lam: Partition, mu: Partition = EMPTY) -> int:
    """Number of standard tableaux of the (skew) shape lam/mu."""
    if not lam.contains(mu):
        raise ContainmentError(f"{mu!r} is not contained in {lam!r}")
    if lam == mu:
        return 1
    total = 0
    for r in lam.removable_rows():
        smaller = lam.remove_box(r)
        if smaller.contains(mu):
            total += dim_standard(smaller, mu)
    return total
