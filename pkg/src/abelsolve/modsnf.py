"""Smith-type diagonalisation over ``Z/p^l`` and the homocyclic solver."""

from __future__ import annotations

from dataclasses import dataclass

from ._arith import identity, isprime, mat_vec, modinv, valuation
from .groups import FgAbelianGroup, GroupElement, Homomorphism, SolutionSet


class StrategyInapplicable(ValueError):
    """The requested method does not apply to the given groups."""


def p_valuation(n: int, p: int, cap: int) -> int:
    """Largest ``v <= cap`` with ``p**v | n``; zero (mod ``p**cap``) gives ``cap``."""
    return valuation(n % p ** cap, p, cap)


@dataclass(frozen=True)
class ModularSmithDecomposition:
    p: int
    ell: int
    L: list[list[int]] | None
    D: list[list[int]]
    R: list[list[int]]

    @property
    def modulus(self) -> int:
        return self.p ** self.ell

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.R)))]


def _diagonalize(A, p: int, ell: int, rhs=None, track_left: bool = True, n: int | None = None):
    """Core of :func:`modular_snf`; row operations are mirrored on ``rhs``."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    q = p ** ell
    m = len(A)
    if n is None:
        n = len(A[0]) if m else 0
    D = [[a % q for a in row] for row in A]
    L = identity(m) if track_left else None
    R = identity(n)
    c = [v % q for v in rhs] if rhs is not None else None

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = valuation(D[i][j], p, ell)
                if best is None or v < best[0]:
                    best = (v, i, j)
        v, i, j = best
        if v == ell:
            break  # residual block is zero
        if i != t:
            D[t], D[i] = D[i], D[t]
            if L is not None:
                L[t], L[i] = L[i], L[t]
            if c is not None:
                c[t], c[i] = c[i], c[t]
        if j != t:
            for M in (D, R):
                for row in M:
                    row[t], row[j] = row[j], row[t]
        pv = p ** v
        alpha = modinv(D[t][t] // pv, q)
        D[t] = [a * alpha % q for a in D[t]]
        if L is not None:
            L[t] = [a * alpha % q for a in L[t]]
        if c is not None:
            c[t] = c[t] * alpha % q
        for i in range(t + 1, m):
            f = D[i][t] // pv
            if f:
                D[i] = [(a - f * b) % q for a, b in zip(D[i], D[t])]
                if L is not None:
                    L[i] = [(a - f * b) % q for a, b in zip(L[i], L[t])]
                if c is not None:
                    c[i] = (c[i] - f * c[t]) % q
        for j in range(t + 1, n):
            f = D[t][j] // pv
            if f:
                for M in (D, R):
                    for row in M:
                        row[j] = (row[j] - f * row[t]) % q

    # Global minimal-valuation pivots already give a divisibility chain; the
    # stable sort below is the closing permutation and never moves anything.
    k = min(m, n)
    order = sorted(range(k), key=lambda i: valuation(D[i][i], p, ell))
    if order != list(range(k)):  # pragma: no cover - defensive
        raise AssertionError("diagonal out of valuation order")
    return D, L, R, c


def modular_snf(A, p: int, ell: int, track_left: bool = True,
                n: int | None = None) -> ModularSmithDecomposition:
    """``L A R = D (mod p^ell)`` with ``L``, ``R`` invertible and ``D`` diagonal.

    Diagonal entries are powers of ``p`` (or 0) in divisibility order.
    """
    D, L, R, _ = _diagonalize(A, p, ell, None, track_left, n)
    return ModularSmithDecomposition(p, ell, L, D, R)


def solve_homocyclic(A, b, p: int, ell: int, n: int | None = None,
                     materialize_left: bool = False) -> SolutionSet:
    """All solutions of ``A x = b (mod p^ell)`` as a coset in ``(Z_{p^ell})^n``.

    Row operations are applied to ``b`` on the fly; ``materialize_left``
    additionally builds ``L`` and checks ``L b`` agrees (testing aid).
    """
    q = p ** ell
    m = len(A)
    if n is None:
        if not m:
            raise ValueError("column count needed for a matrix without rows")
        n = len(A[0])
    source = FgAbelianGroup([q] * n)
    D, L, R, c = _diagonalize(A, p, ell, list(b), materialize_left, n)
    if L is not None and [v % q for v in mat_vec(L, b)] != c:
        raise AssertionError("row operations on rhs disagree with L b")
    y = [0] * n
    gens = []
    for i in range(max(m, n)):
        d = D[i][i] if i < m and i < n else 0
        v = valuation(d, p, ell)
        if i < m:
            ci = c[i]
            if ci % p ** v:
                return SolutionSet.inconsistent(source)
            if i < n and v < ell:
                y[i] = ci // p ** v
        if i < n and v > 0:
            e = [0] * n
            e[i] = p ** (ell - v)
            gens.append(e)
    x = mat_vec(R, y)
    kernel = [mat_vec(R, g) for g in gens]
    return SolutionSet.of(source, x, kernel)


def homocyclic_exponent(phi: Homomorphism, p: int) -> int:
    """Common exponent ``l`` when source and target are both ``(Z_{p^l})^*``."""
    qs = set(phi.source.orders) | set(phi.target.orders)
    if len(qs) > 1 or 0 in qs:
        raise StrategyInapplicable(
            f"{phi.source} -> {phi.target} is not a map of homocyclic groups of one exponent")
    if not qs:
        return 1
    q = qs.pop()
    ell = p_valuation(q, p, q.bit_length())
    if p ** ell != q:
        raise StrategyInapplicable(f"{q} is not a power of {p}")
    return ell


def solve_homocyclic_hom(phi: Homomorphism, b: GroupElement, p: int) -> SolutionSet:
    ell = homocyclic_exponent(phi, p)
    sol = solve_homocyclic(phi.matrix, b.exponents, p, ell, len(phi.source))
    if not sol.consistent:
        return SolutionSet.inconsistent(phi.source)
    return SolutionSet.of(phi.source, sol.particular.exponents, [k.exponents for k in sol.kernel])
