from abelsolve.bench import (
    BenchProfile,
    instances,
    run_bench,
    strip_timings,
    to_csv,
    to_table,
)


def test_instances_reproducible():
    profile = BenchProfile(seed=7, count=20)
    a = [(i.phi, i.b) for i in instances(profile)]
    b = [(i.phi, i.b) for i in instances(profile)]
    assert a == b
    assert a != [(i.phi, i.b) for i in instances(BenchProfile(seed=8, count=20))]


def test_solvable_and_inconsistent_both_occur():
    stats = run_bench(BenchProfile(seed=3, count=60, strategies=("snf",)))
    assert stats[0].solvable > 10 and stats[0].inconsistent > 10


def test_seed_42_all_strategies_agree():
    profile = BenchProfile(seed=42, count=100, primes=(2, 3), max_rank=4, max_exp=3)
    stats = run_bench(profile)
    by_name = {s.strategy: s for s in stats}
    for name in ("auto", "snf", "block", "hensel"):
        assert by_name[name].instances == 100
        assert by_name[name].agree_oracle == 100
    verdicts = {(s.solvable, s.inconsistent) for n, s in by_name.items() if n != "modular"}
    assert len(verdicts) == 1
    modular = by_name["modular"]
    assert modular.agree_oracle == modular.instances


def test_csv_deterministic_modulo_timing():
    profile = BenchProfile(seed=42, count=30)
    a = to_csv(run_bench(profile))
    b = to_csv(run_bench(profile))
    assert strip_timings(a) == strip_timings(b)
    assert "total_ms" not in strip_timings(a)


def test_table_renders():
    text = to_table(run_bench(BenchProfile(count=0)))
    assert text.splitlines()[0].split() == [
        "strategy", "instances", "solvable", "inconsistent", "agree_oracle", "total_ms",
        "median_ms"]
