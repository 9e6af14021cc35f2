"""``abelsolve`` command line: solve, verify, bench."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import BenchProfile, DEFAULT_STRATEGIES, Instance, agrees, run_bench, to_csv, to_table
from .groups import SolutionSet
from .modsnf import StrategyInapplicable
from .oracle import DEFAULT_BUDGET
from .problem import ProblemFile, ProblemParseError, parse_problem_file
from .strategies import STRATEGIES, solve

EXIT_SOLVABLE = 0
EXIT_USAGE = 1
EXIT_INAPPLICABLE = 2
EXIT_DISAGREE = 3
EXIT_INCONSISTENT = 10


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _load(path: str) -> ProblemFile:
    return parse_problem_file(Path(path).read_text(encoding="utf-8"))


def _report(sol: SolutionSet) -> dict:
    if not sol.consistent:
        return {"verdict": "INCONSISTENT"}
    return {
        "verdict": "SOLVABLE",
        "particular": list(sol.particular.exponents),
        "kernel": [list(k.exponents) for k in sol.kernel],
    }


def cmd_solve(args) -> int:
    problem = _load(args.file)
    try:
        sol = solve(problem.phi, problem.b, args.strategy)
    except StrategyInapplicable as exc:
        print(f"strategy {args.strategy} inapplicable: {exc}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    report = _report(sol)
    if args.json:
        print(json.dumps({"strategy": args.strategy, **report}))
    else:
        print(report["verdict"])
        if sol.consistent:
            print("particular: " + " ".join(map(str, report["particular"])))
            for k in report["kernel"]:
                print("kernel: " + " ".join(map(str, k)))
    return EXIT_SOLVABLE if sol.consistent else EXIT_INCONSISTENT


def cmd_verify(args) -> int:
    problem = _load(args.file)
    inst = Instance(problem.phi, problem.b)
    names = [s for s in STRATEGIES if s != "oracle"]
    if DEFAULT_BUDGET.allows(problem.phi.source) and problem.phi.target.is_finite:
        names.append("oracle")
    results = {}
    for name in names:
        try:
            results[name] = solve(problem.phi, problem.b, name)
        except StrategyInapplicable:
            print(f"{name}: inapplicable")
    ref = results.get("oracle", results["snf"])
    ok = True
    for name, sol in results.items():
        good = agrees(sol, ref, inst)
        ok &= good
        verdict = "SOLVABLE" if sol.consistent else "INCONSISTENT"
        print(f"{name}: {verdict} {'agree' if good else 'DISAGREE'}")
    return EXIT_SOLVABLE if ok else EXIT_DISAGREE


def _primes(text: str) -> tuple[int, ...]:
    try:
        primes = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}") from None
    if not primes:
        raise argparse.ArgumentTypeError("at least one prime needed")
    return primes


def _strategies(text: str) -> tuple[str, ...]:
    names = tuple(s.strip() for s in text.split(",") if s.strip())
    unknown = [s for s in names if s not in STRATEGIES]
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown strategies {unknown}")
    return names


def cmd_bench(args) -> int:
    profile = BenchProfile(args.seed, args.count, args.primes, args.max_rank, args.max_exp,
                           args.strategies)
    stats = run_bench(profile)
    sys.stdout.write(to_table(stats))
    if args.csv:
        Path(args.csv).write_text(to_csv(stats), encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="abelsolve", description="Solve phi(x) = b over abelian groups.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve one problem file")
    p.add_argument("file")
    p.add_argument("--strategy", choices=STRATEGIES, default="auto")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="cross-check all applicable strategies")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="seeded random benchmark")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--primes", type=_primes, default=(2, 3))
    p.add_argument("--max-rank", type=int, default=4)
    p.add_argument("--max-exp", type=int, default=3)
    p.add_argument("--strategies", type=_strategies, default=DEFAULT_STRATEGIES)
    p.add_argument("--csv", metavar="PATH")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ProblemParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
