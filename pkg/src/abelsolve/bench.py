"""Seeded random instances and a per-strategy comparison table."""

from __future__ import annotations

import csv
import io
import random
import statistics
import time
from dataclasses import dataclass, field
from math import gcd

from .groups import FgAbelianGroup, GroupElement, Homomorphism, SolutionSet
from .modsnf import StrategyInapplicable
from .oracle import DEFAULT_BUDGET, brute_force_solve
from .snf import same_subgroup
from .strategies import solve

CSV_FIELDS = ("strategy", "instances", "solvable", "inconsistent", "agree_oracle",
              "total_ms", "median_ms")
TIMING_FIELDS = ("total_ms", "median_ms")
DEFAULT_STRATEGIES = ("auto", "snf", "block", "hensel", "modular")


@dataclass(frozen=True)
class BenchProfile:
    seed: int = 42
    count: int = 100
    primes: tuple[int, ...] = (2, 3)
    max_rank: int = 4
    max_exp: int = 3
    strategies: tuple[str, ...] = DEFAULT_STRATEGIES


@dataclass(frozen=True)
class Instance:
    phi: Homomorphism
    b: GroupElement


def random_group(rng: random.Random, primes, max_rank: int, max_exp: int) -> FgAbelianGroup:
    rank = rng.randint(1, max(1, max_rank))
    return FgAbelianGroup([rng.choice(primes) ** rng.randint(1, max_exp) for _ in range(rank)])


def random_hom(rng: random.Random, G: FgAbelianGroup, H: FgAbelianGroup) -> Homomorphism:
    """Uniform among matrices satisfying the order condition (finite groups)."""
    rows = []
    for q in H.orders:
        rows.append([q // gcd(q, o) * rng.randrange(gcd(q, o)) for o in G.orders])
    return Homomorphism(G, H, rows)


def random_instance(rng: random.Random, primes, max_rank: int, max_exp: int) -> Instance:
    G = random_group(rng, primes, max_rank, max_exp)
    H = random_group(rng, primes, max_rank, max_exp)
    phi = random_hom(rng, G, H)
    if rng.random() < 0.5:
        b = phi(G.element([rng.randrange(q) for q in G.orders]))
    else:
        b = H.element([rng.randrange(q) for q in H.orders])
    return Instance(phi, b)


def instances(profile: BenchProfile):
    rng = random.Random(profile.seed)
    for _ in range(profile.count):
        yield random_instance(rng, profile.primes, profile.max_rank, profile.max_exp)


def reference_solution(inst: Instance) -> SolutionSet:
    """Oracle enumeration when affordable, integer SNF otherwise."""
    if DEFAULT_BUDGET.allows(inst.phi.source):
        return brute_force_solve(inst.phi, inst.b).solution
    return solve(inst.phi, inst.b, "snf")


def agrees(sol: SolutionSet, ref: SolutionSet, inst: Instance) -> bool:
    if sol.consistent != ref.consistent:
        return False
    if not sol.consistent:
        return True
    if not sol.verify(inst.phi, inst.b):
        return False
    G = inst.phi.source
    return same_subgroup(G, [k.exponents for k in sol.kernel], [k.exponents for k in ref.kernel])


@dataclass
class StrategyStats:
    strategy: str
    instances: int = 0
    solvable: int = 0
    inconsistent: int = 0
    agree_oracle: int = 0
    times_ms: list[float] = field(default_factory=list)

    def row(self) -> dict:
        total = sum(self.times_ms)
        median = statistics.median(self.times_ms) if self.times_ms else 0.0
        return {
            "strategy": self.strategy,
            "instances": self.instances,
            "solvable": self.solvable,
            "inconsistent": self.inconsistent,
            "agree_oracle": self.agree_oracle,
            "total_ms": f"{total:.3f}",
            "median_ms": f"{median:.3f}",
        }


def run_bench(profile: BenchProfile) -> list[StrategyStats]:
    """Solve every instance with every strategy; inapplicable runs are skipped."""
    stats = {s: StrategyStats(s) for s in profile.strategies}
    for inst in instances(profile):
        ref = reference_solution(inst)
        for name in profile.strategies:
            start = time.perf_counter()
            try:
                sol = solve(inst.phi, inst.b, name)
            except StrategyInapplicable:
                continue
            elapsed = (time.perf_counter() - start) * 1000
            st = stats[name]
            st.instances += 1
            st.times_ms.append(elapsed)
            if sol.consistent:
                st.solvable += 1
            else:
                st.inconsistent += 1
            st.agree_oracle += agrees(sol, ref, inst)
    return [stats[s] for s in profile.strategies]


def to_csv(stats: list[StrategyStats]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for st in stats:
        writer.writerow(st.row())
    return buf.getvalue()


def to_table(stats: list[StrategyStats]) -> str:
    rows = [list(CSV_FIELDS)] + [[str(v) for v in st.row().values()] for st in stats]
    widths = [max(len(r[c]) for r in rows) for c in range(len(CSV_FIELDS))]
    return "\n".join("  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in rows) + "\n"


def strip_timings(csv_text: str) -> str:
    """CSV with the timing columns removed (for determinism checks)."""
    reader = csv.DictReader(io.StringIO(csv_text))
    keep = [f for f in reader.fieldnames or () if f not in TIMING_FIELDS]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=keep, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    writer.writerows(reader)
    return buf.getvalue()
