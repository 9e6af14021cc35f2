import random

import pytest
from hypothesis import given, settings

from abelsolve.blocklift import solve_p_group_blockwise
from abelsolve.groups import FgAbelianGroup, Homomorphism
from abelsolve.hensel import (
    AffineSolutionSpace,
    DivisibilityViolation,
    EndoSystem,
    LevelRecord,
    NotAnAutomorphism,
    StepRecord,
    check_divisibility,
    hensel_step,
    invert_automorphism,
    level_sound,
    solve_endomorphic,
    solve_membership,
    solve_mod_p,
    solve_p_group_hom_hensel,
    weight,
)
from abelsolve.modsnf import solve_homocyclic_hom
from abelsolve.oracle import brute_force_solve

from helpers import kernel_set, p_group_problems, random_hom


def test_check_divisibility():
    assert check_divisibility(EndoSystem(2, (1, 2), [[1, 1], [2, 0]], [0, 0])) is None
    assert check_divisibility(EndoSystem(2, (1, 2), [[1, 1], [1, 0]], [0, 0])) == (1, 0)
    assert check_divisibility(EndoSystem(3, (2, 2, 2), [[1, 2, 3]] * 3, [0] * 3)) is None


def test_divisibility_violation_raised():
    with pytest.raises(DivisibilityViolation) as info:
        solve_endomorphic(EndoSystem(2, (1, 2), [[1, 1], [1, 0]], [0, 0]))
    assert (info.value.row, info.value.col) == (1, 0)


def test_endo_system_validation():
    with pytest.raises(ValueError):
        EndoSystem(2, (2, 1), [[1, 0], [0, 1]], [0, 0])
    with pytest.raises(ValueError):
        EndoSystem(2, (1,), [[1, 0]], [0])


def test_solve_mod_p():
    space = solve_mod_p([[1, 1], [0, 0]], [1, 0], 2)
    assert space.xi0 == (1, 0) and space.basis == ((1, 1),)
    unique = solve_mod_p([[1, 2], [3, 4]], [1, 1], 5)
    assert unique.r == 0
    assert solve_mod_p([[0, 0], [0, 0]], [1, 0], 3) is None


def test_hensel_step_restrict():
    # Z_4, 2x = 2: mod 2 everything works, the step keeps only odd x
    space = solve_mod_p([[2]], [2], 2)
    assert space.xi0 == (0,) and space.basis == ((1,),)
    trace = []
    lifted = hensel_step(space, [2], 2, 1, 0, trace)
    assert lifted.xi0 == (1,) and lifted.basis == ((2,),)
    assert sorted(lifted.instances()) == [(1,), (3,)]
    assert trace[0].kind == "restrict" and trace[0].eliminated == 0


def test_hensel_step_unique():
    space = solve_mod_p([[1]], [3], 2)
    assert space.xi0 == (1,)
    lifted = hensel_step(space, [1], 3, 1, 0)
    assert lifted.xi0 == (3,) and lifted.r == 0


def test_inconsistent_before_lifting():
    trace = []
    sol = solve_endomorphic(EndoSystem(2, (2,), [[2]], [1]), trace)
    assert not sol.consistent and trace == []


def test_endomorphic_example():
    trace = []
    sys_ = EndoSystem(2, (1, 2), [[1, 0], [2, 2]], [1, 2])
    sol = solve_endomorphic(sys_, trace)
    assert sol.particular.exponents == (1, 0)
    assert kernel_set(sol) == {(0, 0), (0, 2)}
    kinds = [t.kind for t in trace if isinstance(t, StepRecord)]
    assert kinds == ["restrict"]


def test_identity_and_zero_endomorphism():
    G = FgAbelianGroup([2, 4])
    sol = solve_endomorphic(EndoSystem(2, (1, 2), [[1, 0], [0, 1]], [1, 3]))
    assert sol.particular.exponents == (1, 3) and sol.kernel == ()
    zero = solve_endomorphic(EndoSystem(2, (1, 2), [[0, 0], [0, 0]], [0, 0]))
    assert kernel_set(zero) == set(G.elements())


@pytest.mark.parametrize("xi, ladder, expected", [
    ((0, 2), (2, 4), 1),
    ((0, 0), (2, 4), 0),
    ((1, 1), (2, 4), 2),
])
def test_weight(xi, ladder, expected):
    assert weight(xi, ladder, 2) == expected


def test_membership():
    Z8 = FgAbelianGroup([8])
    x = solve_membership(Z8, [(6,)], (4,))
    assert (6 * x[0]) % 8 == 4 and x[0] % 4 == 2
    assert solve_membership(Z8, [(2,)], (1,)) is None
    assert solve_membership(Z8, [(6,)], (0,)) == (0,)


def test_membership_mixed_exponents():
    G = FgAbelianGroup([2, 8])
    x = solve_membership(G, [(1, 2), (0, 4)], (1, 6))
    assert x is not None
    assert ((x[0]) % 2, (2 * x[0] + 4 * x[1]) % 8) == (1, 6)
    assert solve_membership(G, [(1, 2)], (0, 2)) is None


def test_invert_automorphism():
    Z4 = FgAbelianGroup([4])
    assert invert_automorphism(Homomorphism(Z4, Z4, [[3]])).matrix == ((3,),)
    G = FgAbelianGroup([2, 2])
    swap = Homomorphism(G, G, [[0, 1], [1, 0]])
    assert invert_automorphism(swap).matrix == swap.matrix
    ident = Homomorphism(G, G, [[1, 0], [0, 1]])
    assert invert_automorphism(ident).matrix == ident.matrix
    with pytest.raises(NotAnAutomorphism):
        invert_automorphism(Homomorphism(Z4, Z4, [[2]]))


def test_invert_random_automorphisms():
    rng = random.Random(5)
    found = 0
    while found < 30:
        G = FgAbelianGroup(sorted(rng.choice([2, 4, 8]) for _ in range(rng.randint(1, 3)))[::-1])
        phi = random_hom(rng, G, G)
        try:
            inv = invert_automorphism(phi)
        except NotAnAutomorphism:
            continue
        found += 1
        for g in G.generators():
            assert inv(phi(g)) == g and phi(inv(g)) == g


def test_hom_examples():
    Z2Z4 = FgAbelianGroup([2, 4])
    phi = Homomorphism(Z2Z4, Z2Z4, [[0, 1], [2, 0]])
    b = Z2Z4.element([1, 2])
    sol = solve_p_group_hom_hensel(phi, b)
    assert sol.verify(phi, b) and kernel_set(sol) == {(0, 0), (0, 2)}
    assert kernel_set(sol) == kernel_set(solve_p_group_blockwise(phi, b))
    Z4, Z2 = FgAbelianGroup([4]), FgAbelianGroup([2])
    sol = solve_p_group_hom_hensel(Homomorphism(Z4, Z2, [[1]]), Z2.element([1]))
    assert sol.particular.exponents in ((1,), (3,))
    assert kernel_set(sol) == {(0,), (2,)}


def test_homocyclic_matches_modular():
    rng = random.Random(8)
    for _ in range(60):
        G = FgAbelianGroup([8] * rng.randint(1, 3))
        H = FgAbelianGroup([8] * rng.randint(1, 3))
        phi = random_hom(rng, G, H)
        b = H.element([rng.randrange(8) for _ in H.orders])
        a = solve_p_group_hom_hensel(phi, b)
        m = solve_homocyclic_hom(phi, b, 2)
        assert a.consistent == m.consistent
        if a.consistent:
            assert kernel_set(a) == kernel_set(m)


def test_levels_are_sound():
    rng = random.Random(12)
    for _ in range(60):
        exps = sorted(rng.randint(1, 3) for _ in range(rng.randint(1, 3)))
        G = FgAbelianGroup([2 ** e for e in exps])
        phi = random_hom(rng, G, G)
        sys_ = EndoSystem.from_hom(phi, G.element([rng.randrange(q) for q in G.orders]))
        trace = []
        solve_endomorphic(sys_, trace)
        for rec in trace:
            if isinstance(rec, LevelRecord):
                assert level_sound(sys_, rec.space, limit=10 ** 6)


@settings(max_examples=150, deadline=None)
@given(p_group_problems(max_rank=3, max_exp=3))
def test_hensel_matches_oracle(problem):
    p, phi, b = problem
    ref = brute_force_solve(phi, b)
    sol = solve_p_group_hom_hensel(phi, b, p)
    assert sol.consistent == ref.solution.consistent
    if sol.consistent:
        assert sol.verify(phi, b)
        assert kernel_set(sol) == ref.kernel_elements


def test_space_instances():
    space = AffineSolutionSpace(3, (1, 0), ((0, 1),), (3, 3))
    assert space.size == 3
    assert list(space.instances()) == [(1, 0), (1, 1), (1, 2)]
