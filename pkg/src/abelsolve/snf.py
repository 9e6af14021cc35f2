"""Integer Smith normal form and linear Diophantine systems.

Also hosts the reduction of a problem over a finitely generated abelian
group to one Diophantine system: every finite target row ``i`` gets an
extra free variable with coefficient ``q_i`` so that congruences become
equations over ``Z``.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._arith import identity, mat_vec
from .groups import (
    FgAbelianGroup,
    GroupElement,
    Homomorphism,
    SolutionSet,
    validate_hom,
)


@dataclass(frozen=True)
class SmithDecomposition:
    """``L @ A @ R == D`` with ``L``, ``R`` unimodular."""

    L: list[list[int]]
    D: list[list[int]]
    R: list[list[int]]
    rank: int

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(self.rank)]


def smith_normal_form(A) -> SmithDecomposition:
    """Smith normal form by elementary row and column operations.

    The pivot is always an entry of least absolute value in the remaining
    block (ties go to the smallest row, then column).  Signs are pushed
    into ``L`` so that the diagonal is positive.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if any(len(row) != n for row in A):
        raise ValueError("ragged matrix")
    D = [[int(a) for a in row] for row in A]
    L = identity(m)
    R = identity(n)

    def swap_rows(i, k):
        D[i], D[k] = D[k], D[i]
        L[i], L[k] = L[k], L[i]

    def swap_cols(j, k):
        for M in (D, R):
            for row in M:
                row[j], row[k] = row[k], row[j]

    def add_row(dst, src, c):  # row_dst += c * row_src
        for M in (D, L):
            rs, rd = M[src], M[dst]
            for j in range(len(rd)):
                rd[j] += c * rs[j]

    def add_col(dst, src, c):  # col_dst += c * col_src
        for M in (D, R):
            for row in M:
                row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = D[i][j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)

        while True:
            piv = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // piv))
                    dirty = dirty or D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // piv))
                    dirty = dirty or D[t][j] != 0
            if dirty:
                # a nonzero remainder is smaller than the pivot: re-pivot on it
                best = None
                for i in range(t, m):
                    for j in ([t] if i > t else range(t, n)):
                        a = D[i][j]
                        if a and (best is None or abs(a) < best[0]):
                            best = (abs(a), i, j)
                _, i, j = best
                if i != t:
                    swap_rows(t, i)
                if j != t:
                    swap_cols(t, j)
                continue
            # divisibility: fold in a row whose entries the pivot does not divide
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)

        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            L[t] = [-a for a in L[t]]
        t += 1
    return SmithDecomposition(L, D, R, t)


@dataclass(frozen=True)
class IntegerSolution:
    """Solutions ``particular + sum t_i kernel[i]`` (``t_i`` in Z), or none."""

    particular: list[int] | None
    kernel: list[list[int]]

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def solve_diophantine(A, b, n: int | None = None) -> IntegerSolution:
    """All integer solutions of ``A x = b``.

    ``n`` gives the column count when ``A`` has no rows.
    """
    m = len(A)
    if n is None:
        if not m:
            raise ValueError("column count needed for a matrix without rows")
        n = len(A[0])
    if len(b) != m:
        raise ValueError(f"rhs has length {len(b)}, expected {m}")
    if m == 0:
        return IntegerSolution([0] * n, identity(n))
    snf = smith_normal_form(A)
    c = mat_vec(snf.L, b)
    r = snf.rank
    y = [0] * n
    for i in range(m):
        if i < r:
            d = snf.D[i][i]
            if c[i] % d:
                return IntegerSolution(None, [])
            y[i] = c[i] // d
        elif c[i]:
            return IntegerSolution(None, [])
    x = mat_vec(snf.R, y)
    kernel = [[snf.R[i][j] for i in range(n)] for j in range(r, n)]
    return IntegerSolution(x, kernel)


@dataclass(frozen=True)
class DiophantineSystem:
    """Augmented system ``[A | diag(q_i)] (x, z) = b`` over ``Z``.

    ``n_source`` leading columns belong to the source generators; each
    following column is the free variable of one finite target row,
    listed in ``modular_rows``.
    """

    matrix: list[list[int]]
    rhs: list[int]
    n_source: int
    modular_rows: tuple[int, ...]

    @property
    def n_columns(self) -> int:
        return self.n_source + len(self.modular_rows)


def embed_torsion_system(phi: Homomorphism, b: GroupElement) -> DiophantineSystem:
    rows_mod = tuple(i for i, q in enumerate(phi.target.orders) if q > 0)
    matrix = []
    for i, row in enumerate(phi.matrix):
        extra = [phi.target.orders[i] if r == i else 0 for r in rows_mod]
        matrix.append(list(row) + extra)
    return DiophantineSystem(matrix, list(b.exponents), len(phi.source), rows_mod)


def _solve_direct(phi: Homomorphism, b: GroupElement) -> SolutionSet:
    system = embed_torsion_system(phi, b)
    sol = solve_diophantine(system.matrix, system.rhs, system.n_columns)
    if not sol.consistent:
        return SolutionSet.inconsistent(phi.source)
    n = system.n_source
    return SolutionSet.of(phi.source, sol.particular[:n], [k[:n] for k in sol.kernel])


def split_free_block(phi: Homomorphism):
    """Index lists (free source, torsion source, free target, torsion target)."""
    fs = [j for j, q in enumerate(phi.source.orders) if q == 0]
    ts = [j for j, q in enumerate(phi.source.orders) if q > 0]
    ft = [i for i, q in enumerate(phi.target.orders) if q == 0]
    tt = [i for i, q in enumerate(phi.target.orders) if q > 0]
    return fs, ts, ft, tt


def solve_free_block(phi: Homomorphism, b: GroupElement) -> IntegerSolution:
    """Integer solutions of the rows of infinite target factors.

    Only free source columns can reach those rows, so the unknowns are the
    coordinates of the free source factors.
    """
    fs, _, ft, _ = split_free_block(phi)
    A_s = [[phi.matrix[i][j] for j in fs] for i in ft]
    return solve_diophantine(A_s, [b.exponents[i] for i in ft], len(fs))


def merge_free_solution(
    phi: Homomorphism,
    free: IntegerSolution,
    modulus: int,
    torsion_particular,
    torsion_kernel,
) -> SolutionSet:
    """Assemble a solution over the whole source.

    The torsion problem was solved in the unknowns ``(x_torsion, t)`` where
    the free coordinates are ``y = y0 + N t`` and ``t`` only matters modulo
    ``modulus``; multiples ``modulus * N`` supply the remaining kernel.
    """
    fs, ts, _, _ = split_free_block(phi)
    N = free.kernel
    k = len(N)

    def assemble(xt, t, base):
        v = [0] * len(phi.source)
        for pos, j in enumerate(ts):
            v[j] = xt[pos]
        for pos, j in enumerate(fs):
            v[j] = base[pos] + sum(t[c] * N[c][pos] for c in range(k))
        return v

    zero_free = [0] * len(fs)
    nt = len(ts)
    part = assemble(torsion_particular[:nt], torsion_particular[nt:], free.particular)
    kernel = [assemble(g[:nt], g[nt:], zero_free) for g in torsion_kernel]
    for c in range(k):
        kernel.append(assemble([0] * nt, [modulus * int(c == d) for d in range(k)], zero_free))
    return SolutionSet.of(phi.source, part, kernel)


def bound_torsion_problem(phi: Homomorphism, b: GroupElement, free: IntegerSolution,
                          modulus: int):
    """Torsion rows after substituting ``y = y0 + N t`` with ``t`` mod ``modulus``.

    Returns ``(psi, c)``: a homomorphism from ``T(G) x (Z_modulus)^k`` to the
    torsion factors of the target, and the shifted right-hand side.
    """
    fs, ts, _, tt = split_free_block(phi)
    N = free.kernel
    y0 = free.particular
    src = FgAbelianGroup([phi.source.orders[j] for j in ts] + [modulus] * len(N))
    tgt = FgAbelianGroup([phi.target.orders[i] for i in tt])
    rows, rhs = [], []
    for i in tt:
        row = phi.matrix[i]
        B = [row[j] for j in fs]
        rows.append([row[j] for j in ts] + [sum(bj * nc[pos] for pos, bj in enumerate(B)) for nc in N])
        rhs.append(b.exponents[i] - sum(bj * y for bj, y in zip(B, y0)))
    psi = Homomorphism(src, tgt, rows)
    return psi, GroupElement(tgt, rhs)


def solve_fg_via_snf(phi: Homomorphism, b: GroupElement, strategy: str = "direct") -> SolutionSet:
    """Solve ``phi(x) = b`` through Smith normal forms.

    ``direct`` builds one augmented Diophantine system; ``hybrid`` solves the
    torsion-free rows first and feeds the resulting parametric family into
    the torsion rows as right-hand sides.
    """
    bad = validate_hom(phi)
    if bad is not None:
        raise bad
    if strategy == "direct":
        return _solve_direct(phi, b)
    if strategy != "hybrid":
        raise ValueError(f"unknown strategy {strategy!r}")
    free = solve_free_block(phi, b)
    if not free.consistent:
        return SolutionSet.inconsistent(phi.source)
    modulus = phi.target.torsion_exponent
    psi, c = bound_torsion_problem(phi, b, free, modulus)
    tors = _solve_direct(psi, c)
    if not tors.consistent:
        return SolutionSet.inconsistent(phi.source)
    return merge_free_solution(
        phi, free, modulus, tors.particular.exponents, [k.exponents for k in tors.kernel]
    )


# -- subgroup utilities (exact, any f.g. abelian group) ---------------------


def subgroup_contains(group: FgAbelianGroup, generators, element) -> bool:
    """Is ``element`` in the subgroup generated by ``generators``?"""
    gens = [tuple(g) for g in generators]
    n = len(group)
    cols = gens + [tuple(q * int(i == j) for i in range(n)) for j, q in enumerate(group.orders) if q]
    A = [[c[i] for c in cols] for i in range(n)]
    target = list(element)
    if not cols:
        return not any(group.reduce(target))
    return solve_diophantine(A, target, len(cols)).consistent


def same_subgroup(group: FgAbelianGroup, gens_a, gens_b) -> bool:
    a = [list(g) for g in gens_a]
    b = [list(g) for g in gens_b]
    return all(subgroup_contains(group, b, g) for g in a) and all(
        subgroup_contains(group, a, g) for g in b
    )


def subgroup_order(group: FgAbelianGroup, generators) -> int:
    """Order of the subgroup generated by ``generators`` (finite ``group``)."""
    if not group.is_finite:
        raise ValueError("subgroup order needs a finite ambient group")
    n = len(group)
    cols = [list(g) for g in generators] + [
        [q * int(i == j) for i in range(n)] for j, q in enumerate(group.orders)
    ]
    if n == 0:
        return 1
    snf = smith_normal_form([[c[i] for c in cols] for i in range(n)])
    quotient = 1
    for d in snf.diagonal:
        quotient *= d
    return group.order // quotient
