"""Finitely generated abelian groups, their elements and homomorphisms.

Groups are given by the orders of a direct-product presentation
``Z_{k_1} x ... x Z_{k_n}`` where an order of 0 stands for an infinite
cyclic factor.  Everything is written additively: a homomorphism is an
integer matrix whose column ``j`` is the exponent vector of the image of
the ``j``-th source generator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import prod
from typing import Iterator, Sequence

from ._arith import crt, factorint, lcm_all


class InvalidHomomorphism(ValueError):
    """Raised when a matrix does not define a homomorphism between the groups."""

    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        super().__init__(message)
        self.row = row
        self.col = col


class GroupMismatch(ValueError):
    pass


def _reduce(orders: Sequence[int], exps: Sequence[int]) -> tuple[int, ...]:
    return tuple(e % q if q else e for q, e in zip(orders, exps))


@dataclass(frozen=True)
class FgAbelianGroup:
    """Direct product of cyclic factors; ``orders[i] == 0`` means ``Z``."""

    orders: tuple[int, ...]

    def __init__(self, orders: Sequence[int]):
        orders = tuple(int(q) for q in orders)
        if any(q < 0 for q in orders):
            raise ValueError(f"factor orders must be nonnegative, got {orders}")
        object.__setattr__(self, "orders", orders)

    def __len__(self) -> int:
        return len(self.orders)

    def __str__(self) -> str:
        if not self.orders:
            return "trivial"
        return " x ".join("Z" if q == 0 else f"Z_{q}" for q in self.orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def is_finite(self) -> bool:
        return all(q > 0 for q in self.orders)

    @property
    def order(self) -> int | None:
        return prod(self.orders) if self.is_finite else None

    @property
    def torsion_exponent(self) -> int:
        """Exponent of the torsion part (1 if there is none)."""
        return lcm_all(q for q in self.orders if q > 0)

    def primes(self) -> list[int]:
        ps: set[int] = set()
        for q in self.orders:
            if q > 1:
                ps.update(factorint(q))
        return sorted(ps)

    def is_p_group(self, p: int) -> bool:
        return all(q > 0 and (q == 1 or set(factorint(q)) == {p}) for q in self.orders)

    def is_homocyclic(self) -> bool:
        return len(set(self.orders)) <= 1 and self.is_finite

    def element(self, exponents: Sequence[int]) -> GroupElement:
        return GroupElement(self, exponents)

    def zero(self) -> GroupElement:
        return GroupElement(self, [0] * len(self.orders))

    def generator(self, j: int) -> GroupElement:
        return GroupElement(self, [int(i == j) for i in range(len(self.orders))])

    def generators(self) -> list[GroupElement]:
        return [self.generator(j) for j in range(len(self.orders))]

    def reduce(self, exponents: Sequence[int]) -> tuple[int, ...]:
        if len(exponents) != len(self.orders):
            raise GroupMismatch(
                f"expected {len(self.orders)} exponents, got {len(exponents)}"
            )
        return _reduce(self.orders, exponents)

    def elements(self) -> Iterator[tuple[int, ...]]:
        """Exponent tuples of all elements in lexicographic order."""
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite group")
        return itertools.product(*(range(q) for q in self.orders))


@dataclass(frozen=True)
class GroupElement:
    group: FgAbelianGroup
    exponents: tuple[int, ...]

    def __init__(self, group: FgAbelianGroup, exponents: Sequence[int]):
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "exponents", group.reduce([int(e) for e in exponents]))

    def _check(self, other: GroupElement) -> None:
        if other.group != self.group:
            raise GroupMismatch(f"elements of {self.group} and {other.group}")

    def __add__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return GroupElement(self.group, [a + b for a, b in zip(self.exponents, other.exponents)])

    def __sub__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return GroupElement(self.group, [a - b for a, b in zip(self.exponents, other.exponents)])

    def __neg__(self) -> GroupElement:
        return GroupElement(self.group, [-a for a in self.exponents])

    def __rmul__(self, k: int) -> GroupElement:
        return GroupElement(self.group, [k * a for a in self.exponents])

    def is_zero(self) -> bool:
        return not any(self.exponents)

    def __iter__(self):
        return iter(self.exponents)

    def __repr__(self) -> str:
        return f"GroupElement({list(self.exponents)} in {self.group})"


@dataclass(frozen=True)
class Homomorphism:
    """Homomorphism given by an ``m x n`` integer matrix (column convention).

    Entries are reduced modulo the order of their target row.  Construction
    only checks the shape; use :func:`validate_hom` or :meth:`check` for the
    order-compatibility condition.
    """

    source: FgAbelianGroup
    target: FgAbelianGroup
    matrix: tuple[tuple[int, ...], ...]

    def __init__(self, source: FgAbelianGroup, target: FgAbelianGroup, matrix):
        m, n = len(target), len(source)
        rows = [list(r) for r in matrix]
        if len(rows) != m or any(len(r) != n for r in rows):
            raise InvalidHomomorphism(
                f"matrix shape does not match {m} target x {n} source factors"
            )
        reduced = tuple(
            tuple(int(a) % q if q else int(a) for a in row)
            for q, row in zip(target.orders, rows)
        )
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "matrix", reduced)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.target), len(self.source)

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self.matrix]

    def __call__(self, g: GroupElement) -> GroupElement:
        return apply_hom(self, g)

    def check(self) -> Homomorphism:
        bad = validate_hom(self)
        if bad is not None:
            raise bad
        return self


@dataclass(frozen=True)
class SolutionSet:
    """Outcome of solving ``phi(x) = b``.

    ``particular is None`` encodes an inconsistent system; otherwise every
    solution is ``particular + k`` with ``k`` in the subgroup generated by
    ``kernel``.
    """

    source: FgAbelianGroup
    particular: GroupElement | None
    kernel: tuple[GroupElement, ...] = field(default=())

    @classmethod
    def inconsistent(cls, source: FgAbelianGroup) -> SolutionSet:
        return cls(source, None, ())

    @classmethod
    def of(cls, source: FgAbelianGroup, particular, kernel=()) -> SolutionSet:
        """Build from raw exponent vectors; zero kernel vectors are dropped."""
        x = GroupElement(source, particular)
        gens: list[GroupElement] = []
        seen = set()
        for k in kernel:
            g = GroupElement(source, k)
            if not g.is_zero() and g.exponents not in seen:
                seen.add(g.exponents)
                gens.append(g)
        return cls(source, x, tuple(gens))

    @property
    def consistent(self) -> bool:
        return self.particular is not None

    def verify(self, phi: Homomorphism, b: GroupElement) -> bool:
        """Particular maps to ``b`` and every kernel generator maps to 0."""
        if not self.consistent:
            return True
        if apply_hom(phi, self.particular) != b:
            return False
        return all(apply_hom(phi, k).is_zero() for k in self.kernel)


def apply_hom(phi: Homomorphism, g: GroupElement) -> GroupElement:
    if g.group != phi.source:
        raise GroupMismatch(f"{g} is not an element of {phi.source}")
    x = g.exponents
    return GroupElement(
        phi.target, [sum(a * v for a, v in zip(row, x)) for row in phi.matrix]
    )


def validate_hom(phi: Homomorphism) -> InvalidHomomorphism | None:
    """Return the first order-compatibility violation, or ``None``.

    Generator ``j`` of order ``o_j > 0`` must be sent to an element whose
    order divides ``o_j``: row ``i`` with ``q_i > 0`` needs ``q_i | o_j a_ij``
    and rows with ``q_i = 0`` need ``a_ij = 0``.
    """
    for j, o in enumerate(phi.source.orders):
        if o == 0:
            continue
        for i, q in enumerate(phi.target.orders):
            a = phi.matrix[i][j]
            if q == 0 and a != 0:
                return InvalidHomomorphism(
                    f"generator {j} has order {o} but image row {i} is infinite "
                    f"with entry {a}", i, j)
            if q > 0 and (o * a) % q:
                return InvalidHomomorphism(
                    f"entry ({i},{j})={a}: {q} does not divide {o}*{a}", i, j)
    return None


# -- primary decomposition of the presentation ------------------------------


@dataclass(frozen=True)
class PrimaryForm:
    """Primary form of a group plus the coordinate translation to it.

    ``pieces[k] = (i, m)`` says new factor ``k`` is the residue of original
    coordinate ``i`` modulo ``m`` (``m == 0`` for an infinite factor).
    """

    original: FgAbelianGroup
    group: FgAbelianGroup
    pieces: tuple[tuple[int, int], ...]

    def forward(self, g: GroupElement | Sequence[int]) -> GroupElement:
        x = g.exponents if isinstance(g, GroupElement) else self.original.reduce(g)
        return GroupElement(self.group, [x[i] % m if m else x[i] for i, m in self.pieces])

    def backward(self, g: GroupElement | Sequence[int]) -> GroupElement:
        y = g.exponents if isinstance(g, GroupElement) else self.group.reduce(g)
        parts: list[list[tuple[int, int]]] = [[] for _ in self.original.orders]
        for (i, m), v in zip(self.pieces, y):
            parts[i].append((v, m))
        out = []
        for q, ps in zip(self.original.orders, parts):
            if q == 0:
                out.append(ps[0][0])
            else:
                out.append(crt([v for v, _ in ps], [m for _, m in ps]))
        return GroupElement(self.original, out)


def canonical_primary_form(group: FgAbelianGroup) -> PrimaryForm:
    """Split composite cyclic factors into prime powers (CRT) and sort them.

    Factors are ordered by (prime, exponent) with infinite factors last;
    trivial factors disappear.
    """
    finite: list[tuple[int, int, int, int]] = []
    infinite: list[tuple[int, int]] = []
    for i, q in enumerate(group.orders):
        if q == 0:
            infinite.append((i, 0))
        elif q > 1:
            for p, e in factorint(q).items():
                finite.append((int(p), int(e), i, int(p) ** int(e)))
    finite.sort()
    pieces = tuple((i, m) for _, _, i, m in finite) + tuple(infinite)
    orders = [m for _, m in pieces]
    return PrimaryForm(group, FgAbelianGroup(orders), pieces)


def translate_hom(phi: Homomorphism, src: PrimaryForm, tgt: PrimaryForm) -> Homomorphism:
    """Matrix of ``phi`` with respect to the two primary presentations."""
    cols = []
    for j in range(len(src.group)):
        g = src.backward(src.group.generator(j))
        cols.append(tgt.forward(apply_hom(phi, g)).exponents)
    matrix = [[c[i] for c in cols] for i in range(len(tgt.group))]
    return Homomorphism(src.group, tgt.group, matrix)


def translate_solution(sol: SolutionSet, form: PrimaryForm) -> SolutionSet:
    """Map a solution in primary coordinates back to the original ones."""
    if not sol.consistent:
        return SolutionSet.inconsistent(form.original)
    return SolutionSet.of(
        form.original,
        form.backward(sol.particular).exponents,
        [form.backward(k).exponents for k in sol.kernel],
    )
