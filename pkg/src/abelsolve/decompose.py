"""Routing a problem to its torsion-free block and one subproblem per prime.

After passing to primary presentations, a homomorphism has no entries
linking p-factors of the source to q-factors of the target for ``p != q``,
and finite source factors never reach infinite target factors.  The only
coupling left is through the free source columns: they hit the infinite
target rows (an integer system) and every torsion block.  We solve the
integer system first; its solutions ``y = y0 + N t`` turn the free columns
of each p-block into ``k`` extra unknowns ``t`` that only matter modulo the
exponent ``p^E`` of that block's target.  The per-prime problems are then
independent and their ``t`` residues are glued back by CRT.
"""

from __future__ import annotations

from concurrent.futures import Executor
from dataclasses import dataclass
from typing import Callable

from ._arith import crt
from .groups import (
    FgAbelianGroup,
    GroupElement,
    Homomorphism,
    PrimaryForm,
    SolutionSet,
    canonical_primary_form,
    translate_hom,
    validate_hom,
)
from .snf import IntegerSolution, merge_free_solution, solve_diophantine


@dataclass(frozen=True)
class PrimePart:
    """``phi_p : Syl_p(G) x (Z_{p^E})^n_free -> Syl_p(H)`` with right-hand side ``b``.

    The trailing ``n_free`` source factors are unknowns attached to the free
    part of ``G`` (raw free coordinates before :func:`bind_free_part`, the
    parameters ``t`` afterwards).
    """

    prime: int
    phi: Homomorphism
    b: GroupElement
    source_index: tuple[int, ...]
    target_index: tuple[int, ...]
    n_free: int
    free_modulus: int


@dataclass(frozen=True)
class FreePart:
    matrix: tuple[tuple[int, ...], ...]
    rhs: tuple[int, ...]
    source_index: tuple[int, ...]
    target_index: tuple[int, ...]


@dataclass(frozen=True)
class SylowSplit:
    phi: Homomorphism  # in primary coordinates
    b: GroupElement
    source_form: PrimaryForm
    target_form: PrimaryForm
    free: FreePart
    parts: tuple[PrimePart, ...]

    def part(self, p: int) -> PrimePart:
        return next(part for part in self.parts if part.prime == p)


def _prime_of(q: int) -> int:
    d = 2
    while q % d:
        d += 1
    return d


def sylow_split(phi: Homomorphism, b: GroupElement) -> SylowSplit:
    """Split ``phi(x) = b`` into the free block and per-prime blocks.

    Groups not yet in primary form are converted first; the coordinate
    translations travel with the result.
    """
    bad = validate_hom(phi)
    if bad is not None:
        raise bad
    sf = canonical_primary_form(phi.source)
    tf = canonical_primary_form(phi.target)
    psi = translate_hom(phi, sf, tf)
    c = tf.forward(b)
    so, to = psi.source.orders, psi.target.orders

    free_src = tuple(j for j, q in enumerate(so) if q == 0)
    free_tgt = tuple(i for i, q in enumerate(to) if q == 0)
    free = FreePart(
        tuple(tuple(psi.matrix[i][j] for j in free_src) for i in free_tgt),
        tuple(c.exponents[i] for i in free_tgt),
        free_src,
        free_tgt,
    )

    primes = sorted({_prime_of(q) for q in so + to if q > 1})
    parts = []
    for p in primes:
        src = tuple(j for j, q in enumerate(so) if q > 1 and q % p == 0)
        tgt = tuple(i for i, q in enumerate(to) if q > 1 and q % p == 0)
        E = max((to[i] for i in tgt), default=1)
        n_free = len(free_src) if tgt else 0
        rows = [[psi.matrix[i][j] for j in src] + [psi.matrix[i][j] for j in free_src[:n_free]]
                for i in tgt]
        source = FgAbelianGroup([so[j] for j in src] + [E] * n_free)
        target = FgAbelianGroup([to[i] for i in tgt])
        sub = Homomorphism(source, target, rows)
        parts.append(PrimePart(p, sub, GroupElement(target, [c.exponents[i] for i in tgt]),
                               src, tgt, n_free, E))
    return SylowSplit(psi, c, sf, tf, free, tuple(parts))


def solve_free_part(split: SylowSplit) -> IntegerSolution:
    free = split.free
    return solve_diophantine([list(r) for r in free.matrix], list(free.rhs),
                             len(free.source_index))


def bind_free_part(part: PrimePart, free: IntegerSolution) -> PrimePart:
    """Substitute ``y = y0 + N t`` into the free columns of a prime block."""
    if part.n_free == 0:
        return part
    nt = len(part.source_index)
    E = part.free_modulus
    N = free.kernel
    rows, rhs = [], []
    for row, bi in zip(part.phi.matrix, part.b.exponents):
        B = row[nt:]
        rows.append(list(row[:nt]) + [sum(bj * col[pos] for pos, bj in enumerate(B)) for col in N])
        rhs.append(bi - sum(bj * y for bj, y in zip(B, free.particular)))
    source = FgAbelianGroup(list(part.phi.source.orders[:nt]) + [E] * len(N))
    sub = Homomorphism(source, part.phi.target, rows)
    return PrimePart(part.prime, sub, GroupElement(part.phi.target, rhs),
                     part.source_index, part.target_index, len(N), E)


def crt_recombine(split: SylowSplit, free: IntegerSolution, bound_parts, solutions) -> SolutionSet:
    """Glue per-prime solutions and the free-part family into one solution.

    ``bound_parts`` are the prime blocks after :func:`bind_free_part` and
    ``solutions`` their solution sets, in the same order.  The result is in
    the coordinates of the original source group.
    """
    if len(bound_parts) != len(solutions):
        raise ValueError("one solution per prime part expected")
    source = split.source_form.original
    if not free.consistent or any(not s.consistent for s in solutions):
        return SolutionSet.inconsistent(source)
    psi = split.phi
    so = psi.source.orders
    torsion = [j for j, q in enumerate(so) if q > 0]
    pos_of = {j: pos for pos, j in enumerate(torsion)}
    k = len(free.kernel)
    moduli = [part.free_modulus for part in bound_parts if part.n_free]
    M = 1
    for q in moduli:
        M *= q

    # particular: torsion coordinates straight from each part, t by CRT
    xt = [0] * len(torsion)
    residues = [[] for _ in range(k)]
    for part, sol in zip(bound_parts, solutions):
        x = sol.particular.exponents
        nt = len(part.source_index)
        for pos, j in enumerate(part.source_index):
            xt[pos_of[j]] = x[pos]
        if part.n_free:
            for c in range(k):
                residues[c].append(x[nt + c])
    t = [crt(residues[c], moduli) for c in range(k)]
    particular = xt + t

    kernel = []
    for part, sol in zip(bound_parts, solutions):
        nt = len(part.source_index)
        for g in sol.kernel:
            v = [0] * (len(torsion) + k)
            for pos, j in enumerate(part.source_index):
                v[pos_of[j]] = g.exponents[pos]
            if part.n_free:
                # lift t to residue tau here and 0 modulo the other primes
                for c in range(k):
                    res = [g.exponents[nt + c] if other is part else 0
                           for other in bound_parts if other.n_free]
                    v[len(torsion) + c] = crt(res, moduli)
            kernel.append(v)

    merged = merge_free_solution(psi, free, M, particular, kernel)
    return SolutionSet.of(
        source,
        split.source_form.backward(merged.particular).exponents,
        [split.source_form.backward(g).exponents for g in merged.kernel],
    )


PartSolver = Callable[[Homomorphism, GroupElement, int], SolutionSet]


def _run_part(solver: PartSolver, part: PrimePart) -> SolutionSet:
    return solver(part.phi, part.b, part.prime)


def solve_by_decomposition(phi: Homomorphism, b: GroupElement, solver: PartSolver,
                           executor: Executor | None = None) -> SolutionSet:
    """Split, solve each prime block with ``solver``, recombine.

    With an ``executor`` the prime blocks are solved concurrently; results
    are collected in prime order either way.
    """
    split = sylow_split(phi, b)
    free = solve_free_part(split)
    if not free.consistent:
        return SolutionSet.inconsistent(phi.source)
    parts = [bind_free_part(part, free) for part in split.parts]
    if executor is None:
        sols = [_run_part(solver, part) for part in parts]
    else:
        futures = [executor.submit(_run_part, solver, part) for part in parts]
        sols = [f.result() for f in futures]
    return crt_recombine(split, free, parts, sols)
