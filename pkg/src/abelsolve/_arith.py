"""Small integer helpers shared by the solvers."""

from __future__ import annotations

from functools import reduce
from math import gcd

from sympy import factorint, isprime
from sympy.ntheory.modular import crt as _sympy_crt

__all__ = [
    "factorint",
    "isprime",
    "crt",
    "lcm_all",
    "modinv",
    "valuation",
    "prime_power",
    "mat_vec",
    "mat_mul",
    "identity",
]


def modinv(a: int, m: int) -> int:
    return pow(a, -1, m)


def crt(residues, moduli) -> int:
    """Smallest nonnegative x with x = r_i mod m_i (moduli pairwise coprime)."""
    if not moduli:
        return 0
    x = _sympy_crt(list(moduli), list(residues), check=False)
    return int(x[0]) if x is not None else 0


def lcm_all(values) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b), values, 1)


def valuation(n: int, p: int, cap: int) -> int:
    """Exponent of p in n, capped at `cap` (n = 0 gives cap)."""
    if n == 0:
        return cap
    v = 0
    while v < cap and n % p == 0:
        n //= p
        v += 1
    return v


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p**e (q > 1) into (p, e); raise if q is not a prime power."""
    f = factorint(q)
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, e), = f.items()
    return int(p), int(e)


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_vec(A, x) -> list[int]:
    return [sum(a * v for a, v in zip(row, x)) for row in A]


def mat_mul(A, B, ncols: int | None = None) -> list[list[int]]:
    """Integer product A @ B; `ncols` is required when B has no rows."""
    n = len(B[0]) if B else ncols
    if n is None:
        raise ValueError("cannot infer column count of an empty right factor")
    cols = [[row[j] for row in B] for j in range(n)]
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]
