"""Random instance builders shared by the test modules."""

import random
from math import gcd, prod

from hypothesis import assume, strategies as st

from abelsolve.groups import FgAbelianGroup, Homomorphism, SolutionSet
from abelsolve.oracle import generated_subgroup
from abelsolve.snf import same_subgroup, subgroup_contains


def random_finite_group(rng, primes=(2, 3, 5), max_order=256, max_rank=3, composite=True,
                        min_rank=0):
    while True:
        orders = []
        for _ in range(rng.randint(min_rank, max_rank)):
            q = 1
            if composite and rng.random() < 0.3:
                while q == 1:
                    q = prod(p ** rng.randint(0, 2) for p in primes)
            else:
                q = rng.choice(primes) ** rng.randint(1, 3)
            orders.append(q)
        if prod(orders) <= max_order:
            return FgAbelianGroup(orders)


def random_p_group(rng, p, max_rank=3, max_exp=3, max_order=None):
    while True:
        G = FgAbelianGroup([p ** rng.randint(1, max_exp) for _ in range(rng.randint(1, max_rank))])
        if max_order is None or G.order <= max_order:
            return G


def random_hom(rng, G, H, free_range=4):
    rows = []
    for q in H.orders:
        row = []
        for o in G.orders:
            if q == 0:
                row.append(rng.randint(-free_range, free_range) if o == 0 else 0)
            else:
                g = gcd(q, o)
                row.append(q // g * rng.randrange(g))
        rows.append(row)
    return Homomorphism(G, H, rows)


def random_element(rng, G, spread=6):
    return G.element([rng.randrange(q) if q else rng.randint(-spread, spread) for q in G.orders])


def random_rhs(rng, phi):
    """Half the time an image (solvable), otherwise arbitrary."""
    if rng.random() < 0.5:
        return phi(random_element(rng, phi.source))
    return random_element(rng, phi.target)


def random_problem(rng, **kw):
    G = random_finite_group(rng, **kw)
    H = random_finite_group(rng, **kw)
    phi = random_hom(rng, G, H)
    return phi, random_rhs(rng, phi)


def kernel_set(sol: SolutionSet):
    return generated_subgroup(sol.source, [k.exponents for k in sol.kernel])


def same_solutions(a: SolutionSet, b: SolutionSet) -> bool:
    """Same verdict and, when solvable, the same coset (finite or infinite source)."""
    if a.consistent != b.consistent:
        return False
    if not a.consistent:
        return True
    G = a.source
    ka = [k.exponents for k in a.kernel]
    kb = [k.exponents for k in b.kernel]
    diff = (a.particular - b.particular).exponents
    return same_subgroup(G, ka, kb) and subgroup_contains(G, ka, diff)


# hypothesis versions

@st.composite
def p_group_problems(draw, primes=(2, 3, 5), max_rank=3, max_exp=3, max_order=729):
    p = draw(st.sampled_from(primes))
    src = draw(st.lists(st.integers(1, max_exp), min_size=0, max_size=max_rank))
    tgt = draw(st.lists(st.integers(1, max_exp), min_size=0, max_size=max_rank))
    assume(p ** sum(src) <= max_order and p ** sum(tgt) <= max_order)
    G = FgAbelianGroup([p ** e for e in src])
    H = FgAbelianGroup([p ** e for e in tgt])
    seed = draw(st.integers(0, 2 ** 32))
    rng = random.Random(seed)
    phi = random_hom(rng, G, H)
    return p, phi, random_rhs(rng, phi)


@st.composite
def fg_problems(draw, orders=(0, 1, 2, 3, 4, 6, 8, 9, 12), max_rank=3):
    G = FgAbelianGroup(draw(st.lists(st.sampled_from(orders), max_size=max_rank)))
    H = FgAbelianGroup(draw(st.lists(st.sampled_from(orders), max_size=max_rank)))
    rng = random.Random(draw(st.integers(0, 2 ** 32)))
    phi = random_hom(rng, G, H)
    return phi, random_rhs(rng, phi)
