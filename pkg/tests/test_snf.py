import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from abelsolve._arith import mat_mul
from abelsolve.groups import FgAbelianGroup, Homomorphism
from abelsolve.snf import (
    embed_torsion_system,
    same_subgroup,
    smith_normal_form,
    solve_diophantine,
    solve_fg_via_snf,
    subgroup_contains,
    subgroup_order,
)

from helpers import fg_problems, kernel_set, random_problem, same_solutions


def check_snf(A):
    dec = smith_normal_form(A)
    m = len(A)
    n = len(A[0]) if m else 0
    assert mat_mul(mat_mul(dec.L, A, n), dec.R, n) == dec.D
    assert abs(sympy.Matrix(dec.L).det()) == 1
    assert abs(sympy.Matrix(dec.R).det()) == 1
    d = dec.diagonal
    for i in range(m):
        for j in range(n):
            if i != j:
                assert dec.D[i][j] == 0
    nonzero = [v for v in d if v]
    assert len(nonzero) == dec.rank
    assert all(v > 0 for v in nonzero)
    assert d[:dec.rank] == nonzero
    for a, b in zip(nonzero, nonzero[1:]):
        assert b % a == 0
    return dec


def test_snf_example():
    dec = check_snf([[4, 2], [2, 4]])
    assert dec.diagonal == [2, 6]


def test_snf_identity_and_zero():
    dec = check_snf([[1, 0], [0, 1]])
    assert dec.D == [[1, 0], [0, 1]]
    dec = check_snf([[0, 0], [0, 0]])
    assert dec.D == [[0, 0], [0, 0]] and dec.L == dec.R == [[1, 0], [0, 1]]


def test_snf_matches_sympy_invariants():
    from sympy.matrices.normalforms import smith_normal_form as sympy_snf
    rng = random.Random(3)
    for _ in range(40):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        A = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        ours = [abs(v) for v in check_snf(A).diagonal]
        theirs = sympy_snf(sympy.Matrix(A), domain=sympy.ZZ)
        assert ours == [abs(int(theirs[i, i])) for i in range(min(m, n))]


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_snf_property(m, n, data):
    A = [[data.draw(st.integers(-20, 20)) for _ in range(n)] for _ in range(m)]
    check_snf(A)


def test_diophantine_examples():
    sol = solve_diophantine([[2, 4]], [6])
    x = sol.particular
    assert 2 * x[0] + 4 * x[1] == 6
    assert len(sol.kernel) == 1
    k = sol.kernel[0]
    assert k in ([-2, 1], [2, -1])
    assert not solve_diophantine([[2]], [3]).consistent
    zero = solve_diophantine([[0, 0], [0, 0]], [0, 0])
    assert zero.particular == [0, 0]
    assert sorted(zero.kernel) == [[0, 1], [1, 0]]


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_diophantine_property(m, n, data):
    A = [[data.draw(st.integers(-6, 6)) for _ in range(n)] for _ in range(m)]
    y = [data.draw(st.integers(-5, 5)) for _ in range(n)]
    b = [sum(a * v for a, v in zip(row, y)) for row in A]
    sol = solve_diophantine(A, b)
    assert sol.consistent
    assert [sum(a * v for a, v in zip(row, sol.particular)) for row in A] == b
    for k in sol.kernel:
        assert all(sum(a * v for a, v in zip(row, k)) == 0 for row in A)
    # y - particular lies in the lattice spanned by the kernel
    diff = [u - v for u, v in zip(y, sol.particular)]
    assert subgroup_contains(FgAbelianGroup([0] * n), sol.kernel, diff)


def test_embed_torsion_system():
    phi = Homomorphism(FgAbelianGroup([2]), FgAbelianGroup([4]), [[2]])
    sysm = embed_torsion_system(phi, phi.target.zero())
    assert sysm.matrix == [[2, 4]]
    phi = Homomorphism(FgAbelianGroup([0, 0]), FgAbelianGroup([0]), [[1, 2]])
    assert embed_torsion_system(phi, phi.target.zero()).matrix == [[1, 2]]
    phi = Homomorphism(FgAbelianGroup([2, 0]), FgAbelianGroup([4]), [[2, 2]])
    assert embed_torsion_system(phi, phi.target.zero()).matrix == [[2, 2, 4]]


@pytest.mark.parametrize("strategy", ["direct", "hybrid"])
def test_fg_examples(strategy):
    G = FgAbelianGroup([0, 2])
    Z4 = FgAbelianGroup([4])
    phi = Homomorphism(G, Z4, [[2, 2]])
    sol = solve_fg_via_snf(phi, Z4.element([2]), strategy)
    assert sol.verify(phi, Z4.element([2]))
    gens = [k.exponents for k in sol.kernel]
    assert same_subgroup(G, gens, [(1, 1), (2, 0)])
    assert same_subgroup(G, gens, [(1, 1)])
    ident = Homomorphism(Z4, Z4, [[1]])
    sol = solve_fg_via_snf(ident, Z4.element([3]), strategy)
    assert sol.particular.exponents == (3,) and sol.kernel == ()


def test_fg_running_example():
    G = FgAbelianGroup([2, 4])
    phi = Homomorphism(G, G, [[0, 1], [2, 0]])
    sol = solve_fg_via_snf(phi, G.element([1, 2]))
    assert sol.verify(phi, G.element([1, 2]))
    assert kernel_set(sol) == {(0, 0), (0, 2)}


def test_strategies_agree_on_random_instances():
    rng = random.Random(11)
    for _ in range(200):
        phi, b = random_problem(rng, max_order=64)
        a = solve_fg_via_snf(phi, b, "direct")
        h = solve_fg_via_snf(phi, b, "hybrid")
        assert a.verify(phi, b) and h.verify(phi, b)
        assert same_solutions(a, h)


@settings(max_examples=120, deadline=None)
@given(fg_problems())
def test_direct_and_hybrid_agree_with_free_factors(problem):
    phi, b = problem
    a = solve_fg_via_snf(phi, b, "direct")
    h = solve_fg_via_snf(phi, b, "hybrid")
    assert a.verify(phi, b) and h.verify(phi, b)
    assert same_solutions(a, h)


def test_unknown_strategy():
    G = FgAbelianGroup([2])
    with pytest.raises(ValueError):
        solve_fg_via_snf(Homomorphism(G, G, [[1]]), G.zero(), "nope")


def test_subgroup_helpers():
    Z8 = FgAbelianGroup([8])
    assert subgroup_order(Z8, [(6,)]) == 4
    assert subgroup_contains(Z8, [(6,)], (2,))
    assert not subgroup_contains(Z8, [(2,)], (1,))
    Z = FgAbelianGroup([0])
    assert subgroup_contains(Z, [(4,), (6,)], (2,))
    assert not subgroup_contains(Z, [(4,)], (2,))
