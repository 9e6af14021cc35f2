"""Solving over arbitrary abelian p-groups by lifting through homocyclic layers.

With ``E_1 < ... < E_L`` the distinct exponents occurring in source and
target, the quotients ``G/p^{E_1}G`` and ``H/p^{E_1}H`` are homocyclic, and
so is every layer ``p^{E_i}H / p^{E_{i+1}}H``.  A solution modulo ``p^{E_i}``
together with generators of the preimage of the kernel is lifted one layer
at a time, each step being a homocyclic system in the kernel-generator
coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._arith import valuation
from .groups import FgAbelianGroup, GroupElement, Homomorphism, SolutionSet, validate_hom
from .modsnf import solve_homocyclic


def p_exponents(group: FgAbelianGroup, p: int) -> list[int]:
    """Exponents ``e_j`` with ``orders[j] == p**e_j``; raise for other primes."""
    out = []
    for q in group.orders:
        e = valuation(q, p, q.bit_length()) if q > 0 else -1
        if q <= 0 or p ** e != q:
            raise ValueError(f"{group} is not a {p}-group")
        out.append(e)
    return out


def infer_prime(*groups: FgAbelianGroup) -> int | None:
    primes = set()
    for g in groups:
        primes.update(g.primes())
    if len(primes) > 1:
        raise ValueError(f"mixed primes {sorted(primes)}")
    return primes.pop() if primes else None


@dataclass(frozen=True)
class LayerChain:
    p: int
    exponents: tuple[int, ...]
    source_exps: tuple[int, ...]
    target_exps: tuple[int, ...]

    @classmethod
    def for_hom(cls, phi: Homomorphism, p: int) -> LayerChain:
        se = p_exponents(phi.source, p)
        te = p_exponents(phi.target, p)
        return cls(p, tuple(sorted(set(se) | set(te))), tuple(se), tuple(te))

    def __len__(self) -> int:
        return len(self.exponents)

    def source_orders(self, i: int) -> list[int]:
        E = self.exponents[i]
        return [self.p ** min(e, E) for e in self.source_exps]

    def target_orders(self, i: int) -> list[int]:
        E = self.exponents[i]
        return [self.p ** min(f, E) for f in self.target_exps]

    def cap_source(self, x, i: int) -> tuple[int, ...]:
        return tuple(v % q for v, q in zip(x, self.source_orders(i)))

    def cap_target(self, h, i: int) -> tuple[int, ...]:
        return tuple(v % q for v, q in zip(h, self.target_orders(i)))

    def induced(self, phi: Homomorphism, i: int) -> Homomorphism:
        """The map ``G/p^{E_i}G -> H/p^{E_i}H`` induced by ``phi``."""
        return Homomorphism(
            FgAbelianGroup(self.source_orders(i)),
            FgAbelianGroup(self.target_orders(i)),
            phi.matrix,
        )


@dataclass(frozen=True)
class LayerState:
    exponent: int
    x: tuple[int, ...]
    kernel: tuple[tuple[int, ...], ...]


def _image(phi: Homomorphism, x) -> list[int]:
    return [sum(a * v for a, v in zip(row, x)) for row in phi.matrix]


def _combine(gens, coeffs, n: int) -> list[int]:
    out = [0] * n
    for c, g in zip(coeffs, gens):
        if c:
            for j in range(n):
                out[j] += c * g[j]
    return out


def _reduce(x, orders) -> tuple[int, ...]:
    return tuple(v % q for v, q in zip(x, orders))


def _layer_system(phi, b, x, gens, chain: LayerChain, i: int) -> SolutionSet:
    """Homocyclic system ``sum c_k phi(k) = phi(x) - b`` on layer ``i -> i+1``."""
    p = chain.p
    lo, hi = chain.exponents[i], chain.exponents[i + 1]
    delta = hi - lo
    top = p ** hi
    rows = [r for r, f in enumerate(chain.target_exps) if f >= hi]
    for r, f in enumerate(chain.target_exps):
        if f < hi and x is not None:
            if (_image_row(phi, r, x) - b[r]) % p ** f:
                raise AssertionError("layer solution does not solve the lower rows")

    def scaled(vec):
        out = []
        for r in rows:
            v = vec[r] % top
            if v % p ** lo:
                raise AssertionError("image outside layer p^E_i H")
            out.append(v // p ** lo)
        return out

    cols = [scaled(_image(phi, k)) for k in gens]
    M = [[c[pos] for c in cols] for pos in range(len(rows))]
    if x is None:
        d = [0] * len(rows)
    else:
        d = scaled([a - bb for a, bb in zip(_image(phi, x), b)])
    return solve_homocyclic(M, d, p, delta, len(gens))


def _image_row(phi, r, x) -> int:
    return sum(a * v for a, v in zip(phi.matrix[r], x))


def lift_particular(phi: Homomorphism, b, x, gens, chain: LayerChain, i: int):
    """Lift a solution modulo ``p^{E_i}`` to one modulo ``p^{E_{i+1}}``.

    Returns ``x - lam`` with ``lam`` in the span of ``gens`` cancelling the
    defect on the next layer, or ``None`` when no lift exists.
    """
    sol = _layer_system(phi, list(b), list(x), gens, chain, i)
    if not sol.consistent:
        return None
    n = len(phi.source)
    lam = _combine(gens, sol.particular.exponents, n)
    return _reduce([a - c for a, c in zip(x, lam)], phi.source.orders)


def lift_kernel(phi: Homomorphism, gens, chain: LayerChain, i: int, prune: bool = True,
                _system: SolutionSet | None = None) -> list[tuple[int, ...]]:
    """Generators of the preimage of ``ker phi^{(i+1)}`` from those of layer ``i``.

    Union of the combinations of ``gens`` annihilated on the next layer and
    ``p^(E_{i+1}-E_i)`` times every generator.
    """
    sol = _system if _system is not None else _layer_system(phi, [0] * len(phi.target), None, gens, chain, i)
    n = len(phi.source)
    orders = phi.source.orders
    delta = chain.exponents[i + 1] - chain.exponents[i]
    out = [_reduce(_combine(gens, c.exponents, n), orders) for c in sol.kernel]
    out += [_reduce([chain.p ** delta * v for v in g], orders) for g in gens]
    return prune_generators(out, phi.source, chain.p) if prune else _nonzero_unique(out)


def _nonzero_unique(gens) -> list[tuple[int, ...]]:
    seen, out = set(), []
    for g in gens:
        g = tuple(g)
        if any(g) and g not in seen:
            seen.add(g)
            out.append(g)
    return out


def in_span(group: FgAbelianGroup, p: int, gens, g) -> bool:
    """Membership in a subgroup of a p-group via one homocyclic system.

    Row ``j`` (mod ``p^{e_j}``) is scaled by ``p^{E-e_j}`` so the system lives
    modulo ``p^E`` with ``E`` the largest exponent.
    """
    exps = p_exponents(group, p)
    if not exps:
        return True
    E = max(exps)
    A = [[p ** (E - e) * k[j] for k in gens] for j, e in enumerate(exps)]
    rhs = [p ** (E - e) * g[j] for j, e in enumerate(exps)]
    return solve_homocyclic(A, rhs, p, E, len(gens)).consistent


def prune_generators(gens, group: FgAbelianGroup, p: int) -> list[tuple[int, ...]]:
    """Greedily drop generators lying in the span of the remaining ones."""
    current = _nonzero_unique(gens)
    idx = 0
    while idx < len(current):
        others = current[:idx] + current[idx + 1:]
        if in_span(group, p, others, current[idx]):
            current = others
        else:
            idx += 1
    return current


def solve_p_group_blockwise(phi: Homomorphism, b: GroupElement, p: int | None = None,
                            trace: list | None = None, prune: bool = True) -> SolutionSet:
    """Solve ``phi(x) = b`` for a homomorphism of abelian p-groups.

    ``trace``, when given, receives a :class:`LayerState` per layer.
    """
    bad = validate_hom(phi)
    if bad is not None:
        raise bad
    if p is None:
        p = infer_prime(phi.source, phi.target)
    source = phi.source
    n = len(source)
    chain = LayerChain.for_hom(phi, p) if p is not None else None
    if not chain:  # both groups trivial
        return SolutionSet.of(source, [0] * n)
    bv = list(b.exponents)

    E0 = chain.exponents[0]
    base = solve_homocyclic(phi.matrix, bv, p, E0, n)
    if not base.consistent:
        return SolutionSet.inconsistent(source)
    x = _reduce(base.particular.exponents, source.orders)
    gens = [k.exponents for k in base.kernel]
    gens += [tuple(p ** E0 * int(i == j) for i in range(n))
             for j, e in enumerate(chain.source_exps) if e > E0]
    gens = prune_generators(gens, source, p) if prune else _nonzero_unique(gens)
    if trace is not None:
        trace.append(LayerState(E0, x, tuple(gens)))

    for i in range(len(chain) - 1):
        sol = _layer_system(phi, bv, list(x), gens, chain, i)
        if not sol.consistent:
            return SolutionSet.inconsistent(source)
        lam = _combine(gens, sol.particular.exponents, n)
        x = _reduce([a - c for a, c in zip(x, lam)], source.orders)
        gens = lift_kernel(phi, gens, chain, i, prune, _system=sol)
        if trace is not None:
            trace.append(LayerState(chain.exponents[i + 1], x, tuple(gens)))
    return SolutionSet.of(source, x, gens)
