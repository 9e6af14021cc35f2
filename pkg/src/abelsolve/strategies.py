"""Named solving strategies behind one entry point."""

from __future__ import annotations

from concurrent.futures import Executor

from .blocklift import solve_p_group_blockwise
from .decompose import solve_by_decomposition
from .groups import GroupElement, Homomorphism, SolutionSet, validate_hom
from .hensel import solve_p_group_hom_hensel
from .modsnf import StrategyInapplicable, solve_homocyclic_hom
from .oracle import BudgetExceeded, EnumerationBudget, brute_force_solve
from .snf import solve_fg_via_snf

STRATEGIES = ("auto", "snf", "modular", "block", "hensel", "oracle")


def _hensel_part(phi, b, p):
    return solve_p_group_hom_hensel(phi, b, p)


def _block_part(phi, b, p):
    return solve_p_group_blockwise(phi, b, p)


def _modular_part(phi, b, p):
    return solve_homocyclic_hom(phi, b, p)


_PART_SOLVERS = {
    "auto": _hensel_part,
    "hensel": _hensel_part,
    "block": _block_part,
    "modular": _modular_part,
}


def solve(phi: Homomorphism, b: GroupElement, strategy: str = "auto",
          executor: Executor | None = None,
          budget: EnumerationBudget | None = None) -> SolutionSet:
    """Solve ``phi(x) = b`` with the named strategy.

    ``snf`` uses one augmented Diophantine system; ``oracle`` enumerates.
    The others decompose into the free block (integer SNF) and prime blocks
    solved by the homocyclic solver (``modular``), layer lifting
    (``block``) or Hensel lifting (``hensel`` and ``auto``).

    Raises :class:`StrategyInapplicable` when the method cannot handle the
    groups, e.g. ``modular`` on a prime block that is not homocyclic.
    """
    bad = validate_hom(phi)
    if bad is not None:
        raise bad
    if b.group != phi.target:
        raise ValueError("right-hand side is not in the target group")
    if strategy == "snf":
        return solve_fg_via_snf(phi, b, "direct")
    if strategy == "oracle":
        try:
            return brute_force_solve(phi, b, budget or EnumerationBudget()).solution
        except BudgetExceeded as exc:
            raise StrategyInapplicable(str(exc)) from exc
    try:
        part_solver = _PART_SOLVERS[strategy]
    except KeyError:
        raise ValueError(f"unknown strategy {strategy!r}") from None
    return solve_by_decomposition(phi, b, part_solver, executor)
