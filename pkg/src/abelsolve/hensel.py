"""Hensel lifting of whole affine solution spaces over abelian p-groups.

An endomorphic system ``A x = b (mod [p^e_1, ..., p^e_m])`` is solved over
``F_p`` first.  The solutions are then carried up one power of ``p`` at a
time, coordinate by coordinate, in the form::

    x = xi_0 + t_1 xi_1 + ... + t_r xi_r,     t_i in {0, ..., p-1}

Every choice of the digits ``t_i`` gives a different solution modulo the
current per-coordinate moduli (the *ladder*).  The basis is kept so that
``p * xi_i`` lies in the span of ``xi_{i+1}, ..., xi_r``; eliminating the
highest-index digit of a lifting condition preserves that shape.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ._arith import modinv, valuation
from .blocklift import infer_prime, p_exponents
from .groups import FgAbelianGroup, GroupElement, Homomorphism, SolutionSet, validate_hom


class DivisibilityViolation(ValueError):
    def __init__(self, row: int, col: int):
        super().__init__(f"divisibility condition fails at entry ({row}, {col})")
        self.row = row
        self.col = col


class HenselInvariantError(AssertionError):
    """A lifting quantity that must be divisible by ``p^l`` was not."""


class NotAnAutomorphism(ValueError):
    pass


@dataclass(frozen=True)
class EndoSystem:
    """Row ``i`` of ``A x = b`` is a congruence modulo ``p^exponents[i]``."""

    p: int
    exponents: tuple[int, ...]
    A: tuple[tuple[int, ...], ...]
    b: tuple[int, ...]

    def __init__(self, p: int, exponents, A, b):
        m = len(exponents)
        A = tuple(tuple(int(a) for a in row) for row in A)
        if len(A) != m or any(len(row) != m for row in A) or len(b) != m:
            raise ValueError("endomorphic system must be square and match its exponents")
        if list(exponents) != sorted(exponents):
            raise ValueError("exponents must be ascending")
        if any(e < 1 for e in exponents):
            raise ValueError("exponents must be positive")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "exponents", tuple(exponents))
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", tuple(int(v) for v in b))

    @property
    def group(self) -> FgAbelianGroup:
        return FgAbelianGroup([self.p ** e for e in self.exponents])

    @classmethod
    def from_hom(cls, phi: Homomorphism, b: GroupElement, p: int | None = None) -> EndoSystem:
        if phi.source != phi.target:
            raise ValueError("not an endomorphism")
        p = p or infer_prime(phi.source)
        return cls(p, p_exponents(phi.source, p), phi.matrix, b.exponents)


def check_divisibility(system: EndoSystem) -> tuple[int, int] | None:
    """First ``(i, j)`` (0-based) where ``p^(e_i - e_min(i,j))`` does not divide ``a_ij``."""
    p, e = system.p, system.exponents
    for i, row in enumerate(system.A):
        for j, a in enumerate(row):
            if a % p ** (e[i] - e[min(i, j)]):
                return (i, j)
    return None


@dataclass(frozen=True)
class AffineSolutionSpace:
    """``xi0 + sum t_i basis[i]`` with digits ``t_i`` in ``{0..p-1}``.

    ``ladder[j]`` is the modulus coordinate ``j`` is currently known to.
    """

    p: int
    xi0: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]
    ladder: tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.p ** self.r

    def instantiate(self, digits) -> tuple[int, ...]:
        x = list(self.xi0)
        for t, v in zip(digits, self.basis):
            for j in range(len(x)):
                x[j] += t * v[j]
        return tuple(a % q for a, q in zip(x, self.ladder))

    def instances(self):
        for digits in itertools.product(range(self.p), repeat=self.r):
            yield self.instantiate(digits)


def weight(xi, ladder, p: int) -> int:
    """Least ``i`` with ``p^i * xi`` zero modulo the ladder."""
    w = 0
    for v, q in zip(xi, ladder):
        e = valuation(q, p, q.bit_length())
        if v % q:
            w = max(w, e - valuation(v % q, p, e))
    return w


def solve_mod_p(A, b, p: int, n: int | None = None) -> AffineSolutionSpace | None:
    """Reduced row echelon form over ``F_p``; ``None`` if inconsistent."""
    m = len(A)
    if n is None:
        n = len(A[0]) if m else 0
    M = [[a % p for a in row] + [v % p] for row, v in zip(A, b)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = modinv(M[r][c], p)
        M[r] = [a * inv % p for a in M[r]]
        for i in range(m):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * bb) % p for a, bb in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    if any(M[i][n] for i in range(r, m)):
        return None
    xi0 = [0] * n
    for i, c in enumerate(pivots):
        xi0[c] = M[i][n]
    basis = []
    for f in range(n):
        if f in pivots:
            continue
        v = [0] * n
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = -M[i][f] % p
        basis.append(tuple(v))
    return AffineSolutionSpace(p, tuple(xi0), tuple(basis), (p,) * n)


@dataclass(frozen=True)
class StepRecord:
    level: int
    coordinate: int
    kind: str  # "unique", "trivial", "restrict" or "fail"
    r_before: int
    r_after: int
    eliminated: int | None = None


def _gamma(row, rhs, v, pl: int) -> int:
    f = sum(a * x for a, x in zip(row, v)) - rhs
    if f % pl:
        raise HenselInvariantError(f"f(xi) = {f} is not divisible by {pl}")
    return f // pl


def hensel_step(space: AffineSolutionSpace, row, rhs: int, ell: int, n: int,
                trace: list | None = None) -> AffineSolutionSpace | None:
    """Lift coordinate ``n`` from ``p^ell`` to ``p^(ell+1)`` using one row.

    ``row`` must be the echelonised congruence whose corner is column ``n``,
    read modulo ``p^(ell+1)``.  Returns ``None`` when the lifting condition
    has no solution.
    """
    p = space.p
    pl = p ** ell
    if space.ladder[n] != pl:
        raise ValueError(f"coordinate {n} is at modulus {space.ladder[n]}, expected {pl}")
    ladder = list(space.ladder)
    ladder[n] = pl * p
    row = list(row)
    gamma0 = _gamma(row, rhs, space.xi0, pl) % p
    gammas = [_gamma(row, 0, v, pl) % p for v in space.basis]
    r = space.r
    corner = row[n] % p

    def reduce(v):
        return tuple(a % q for a, q in zip(v, ladder))

    if corner:
        # unique lift: x_n + t p^ell with t = -corner^-1 (gamma0 + sum gamma_i t_i)
        inv = modinv(corner, p)
        new = []
        for v, g in zip((space.xi0, *space.basis), (gamma0, *gammas)):
            w = list(v)
            w[n] -= (inv * g % p) * pl
            new.append(reduce(w))
        kind, s = "unique", None
        out = AffineSolutionSpace(p, new[0], tuple(new[1:]), tuple(ladder))
    else:
        s = max((i for i in range(r) if gammas[i]), default=None)
        fresh = tuple(pl if j == n else 0 for j in range(len(ladder)))
        if s is None:
            if gamma0:
                if trace is not None:
                    trace.append(StepRecord(ell, n, "fail", r, r))
                return None
            kind = "trivial"
            out = AffineSolutionSpace(
                p, reduce(space.xi0), tuple(reduce(v) for v in space.basis) + (fresh,),
                tuple(ladder))
        else:
            kind = "restrict"
            g_inv = modinv(gammas[s], p)
            xs = space.basis[s]

            def eliminate(v, g):
                # t_s = -gamma_s^-1 (gamma_0 + ...), taken as a digit
                c = -g_inv * g % p
                return reduce([a + c * b for a, b in zip(v, xs)])

            xi0 = eliminate(space.xi0, gamma0)
            basis = [eliminate(v, gammas[i]) for i, v in enumerate(space.basis[:s])]
            basis += [reduce(v) for v in space.basis[s + 1:]]
            out = AffineSolutionSpace(p, xi0, tuple(basis) + (fresh,), tuple(ladder))
    if trace is not None:
        trace.append(StepRecord(ell, n, kind, r, out.r, s))
    return out


def _echelonize(A, b, k: int, p: int, ell_next: int):
    """Rows ``k..m-1`` modulo ``p^ell_next``, upper triangular on columns ``k..``.

    Pivots are chosen by least p-valuation, ties to the lowest row.
    """
    q = p ** ell_next
    rows = [[a % q for a in A[i]] for i in range(k, len(A))]
    rhs = [b[i] % q for i in range(k, len(A))]
    size = len(rows)
    for c in range(size):
        col = k + c
        best = min(range(c, size), key=lambda i: (valuation(rows[i][col], p, ell_next), i))
        v = valuation(rows[best][col], p, ell_next)
        if v == ell_next:
            continue
        rows[c], rows[best] = rows[best], rows[c]
        rhs[c], rhs[best] = rhs[best], rhs[c]
        pv = p ** v
        unit_inv = modinv(rows[c][col] // pv, q)
        for i in range(c + 1, size):
            if rows[i][col]:
                f = (rows[i][col] // pv) * unit_inv % q
                rows[i] = [(a - f * bb) % q for a, bb in zip(rows[i], rows[c])]
                rhs[i] = (rhs[i] - f * rhs[c]) % q
    return rows, rhs


@dataclass(frozen=True)
class LevelRecord:
    level: int
    space: AffineSolutionSpace


def level_sound(system: EndoSystem, space: AffineSolutionSpace, limit: int = 64) -> bool:
    """Every instantiation (at most ``limit``) solves each row to its ladder precision."""
    p = system.p
    count = 0
    for x in space.instances():
        for i, row in enumerate(system.A):
            mod = min(p ** system.exponents[i], space.ladder[i])
            if (sum(a * v for a, v in zip(row, x)) - system.b[i]) % mod:
                return False
        count += 1
        if count >= limit:
            break
    return True


def solve_endomorphic(system: EndoSystem, trace: list | None = None) -> SolutionSet:
    """Solve the system by lifting its ``F_p`` solutions level by level.

    ``trace`` (a list) collects :class:`StepRecord` and :class:`LevelRecord`
    entries in the order they happen.
    """
    bad = check_divisibility(system)
    if bad is not None:
        raise DivisibilityViolation(*bad)
    p, e = system.p, system.exponents
    m = len(e)
    group = system.group
    if m == 0:
        return SolutionSet.of(group, [])
    space = solve_mod_p(system.A, system.b, p, m)
    if space is None:
        return SolutionSet.inconsistent(group)
    if trace is not None:
        trace.append(LevelRecord(1, space))
    for ell in range(1, e[-1]):
        k = next(i for i in range(m) if e[i] > ell)
        rows, rhs = _echelonize(system.A, system.b, k, p, ell + 1)
        for n in range(m - 1, k - 1, -1):
            space = hensel_step(space, rows[n - k], rhs[n - k], ell, n, trace)
            if space is None:
                return SolutionSet.inconsistent(group)
        if trace is not None:
            trace.append(LevelRecord(ell + 1, space))
    if space.ladder != group.orders:
        raise HenselInvariantError("ladder did not reach the group orders")
    return SolutionSet.of(group, space.xi0, space.basis)


def _frame(phi_rows, rhs, row_exps, n: int, p: int, E: int) -> EndoSystem:
    """Square homocyclic system modulo ``p^E``; row ``i`` scaled by ``p^(E - e_i)``."""
    N = max(n, len(row_exps), 1)
    A = [[0] * N for _ in range(N)]
    b = [0] * N
    for i, f in enumerate(row_exps):
        s = p ** (E - f)
        for j in range(n):
            A[i][j] = s * phi_rows[i][j]
        b[i] = s * rhs[i]
    return EndoSystem(p, (E,) * N, A, b)


def solve_membership(group: FgAbelianGroup, generators, b, p: int | None = None):
    """Coefficients ``x`` with ``sum x_j g_j = b``, or ``None`` if ``b`` is outside."""
    p = p or infer_prime(group)
    gens = [group.reduce(list(g)) for g in generators]
    target = group.reduce(list(b))
    if p is None:
        return tuple(0 for _ in gens)
    exps = p_exponents(group, p)
    E = max(exps)
    rows = [[g[i] for g in gens] for i in range(len(exps))]
    sol = solve_endomorphic(_frame(rows, target, exps, len(gens), p, E))
    if not sol.consistent:
        return None
    return tuple(sol.particular.exponents[: len(gens)])


def hensel_system(phi: Homomorphism, b: GroupElement, p: int) -> EndoSystem:
    """The endomorphic system :func:`solve_p_group_hom_hensel` lifts.

    Endomorphisms with sorted exponents are used as they are; otherwise
    both groups are placed in a common homocyclic frame ``(Z_{p^E})^N``
    whose first ``n`` coordinates are the source coordinates.
    """
    se = p_exponents(phi.source, p)
    te = p_exponents(phi.target, p)
    if se == te and se == sorted(se):
        return EndoSystem(p, se, phi.matrix, b.exponents)
    return _frame(phi.matrix, b.exponents, te, len(se), p, max(se + te))


def solve_p_group_hom_hensel(phi: Homomorphism, b: GroupElement, p: int | None = None,
                             trace: list | None = None) -> SolutionSet:
    """Solve ``phi(x) = b`` for any homomorphism of abelian p-groups."""
    bad = validate_hom(phi)
    if bad is not None:
        raise bad
    p = p or infer_prime(phi.source, phi.target)
    n = len(phi.source)
    if p is None or (n == 0 and not phi.target.orders):
        return SolutionSet.of(phi.source, [0] * n)
    sol = solve_endomorphic(hensel_system(phi, b, p), trace)
    if not sol.consistent:
        return SolutionSet.inconsistent(phi.source)
    return SolutionSet.of(
        phi.source,
        sol.particular.exponents[:n],
        [k.exponents[:n] for k in sol.kernel],
    )


def invert_automorphism(phi: Homomorphism, p: int | None = None) -> Homomorphism:
    """Inverse of an automorphism of an abelian p-group, column by column."""
    if phi.source != phi.target:
        raise NotAnAutomorphism("source and target differ")
    G = phi.source
    p = p or infer_prime(G)
    m = len(G)
    if p is None:
        return phi
    exps = p_exponents(G, p)
    perm = sorted(range(m), key=lambda j: (exps[j], j))
    A = [[phi.matrix[perm[a]][perm[c]] for c in range(m)] for a in range(m)]
    sorted_exps = [exps[j] for j in perm]
    cols = []
    for a in range(m):
        rhs = [int(i == a) for i in range(m)]
        sol = solve_endomorphic(EndoSystem(p, sorted_exps, A, rhs))
        if not sol.consistent:
            raise NotAnAutomorphism(f"generator {perm[a]} has no pre-image")
        if sol.kernel:
            raise NotAnAutomorphism("kernel is nontrivial")
        cols.append(sol.particular.exponents)
    B = [[0] * m for _ in range(m)]
    for a in range(m):
        for c in range(m):
            B[perm[a]][perm[c]] = cols[c][a]
    return Homomorphism(G, G, B)
