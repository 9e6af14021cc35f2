"""Brute-force ground truth for small finite problems."""

from __future__ import annotations

from dataclasses import dataclass

from .groups import FgAbelianGroup, GroupElement, Homomorphism, SolutionSet, validate_hom


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class EnumerationBudget:
    max_group_order: int = 4096

    def admit(self, group: FgAbelianGroup) -> None:
        if not group.is_finite:
            raise BudgetExceeded(f"{group} is infinite")
        if group.order > self.max_group_order:
            raise BudgetExceeded(
                f"|{group}| = {group.order} exceeds budget {self.max_group_order}")

    def allows(self, group: FgAbelianGroup) -> bool:
        return group.is_finite and group.order <= self.max_group_order


DEFAULT_BUDGET = EnumerationBudget()


def generated_subgroup(group: FgAbelianGroup, generators) -> frozenset[tuple[int, ...]]:
    """All elements of the subgroup generated by ``generators`` (finite group)."""
    orders = group.orders
    elems = {tuple(0 for _ in orders)}
    frontier = list(elems)
    gens = [group.reduce(list(g)) for g in generators]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % q for a, b, q in zip(x, g, orders))
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(elems)


@dataclass(frozen=True)
class OracleResult:
    solution: SolutionSet
    kernel_elements: frozenset[tuple[int, ...]]
    image_size: int


def brute_force_solve(phi: Homomorphism, b: GroupElement,
                      budget: EnumerationBudget = DEFAULT_BUDGET) -> OracleResult:
    """Enumerate the source and read off pre-image, kernel and image size.

    The particular solution is the lexicographically smallest pre-image and
    kernel generators are picked greedily in lexicographic order, so the
    output is canonical.
    """
    budget.admit(phi.source)
    if not phi.target.is_finite:
        raise BudgetExceeded(f"{phi.target} is infinite")
    bad = validate_hom(phi)
    if bad is not None:
        raise bad
    tq = phi.target.orders
    rows = phi.matrix
    target = b.exponents
    particular = None
    kernel = []
    image = set()
    for x in phi.source.elements():
        y = tuple(sum(a * v for a, v in zip(row, x)) % q for row, q in zip(rows, tq))
        image.add(y)
        if particular is None and y == target:
            particular = x
        if not any(y):
            kernel.append(x)

    order = phi.source.order
    if order % len(kernel) or len(image) * len(kernel) != order:
        raise AssertionError("Lagrange check failed in enumeration")

    gens = []
    span = generated_subgroup(phi.source, [])
    for k in kernel:
        if k not in span:
            gens.append(k)
            span = generated_subgroup(phi.source, gens)
    if particular is None:
        sol = SolutionSet.inconsistent(phi.source)
    else:
        sol = SolutionSet.of(phi.source, particular, gens)
    return OracleResult(sol, frozenset(kernel), len(image))
