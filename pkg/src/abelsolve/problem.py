"""Line-oriented problem files.

::

    source: 2 4        # factor orders of G, 0 for Z
    target: 2 4
    matrix:            # one line per target factor
    0 1
    2 0
    rhs: 1 2
"""

from __future__ import annotations

from dataclasses import dataclass

from .groups import FgAbelianGroup, GroupElement, Homomorphism, validate_hom


class ProblemParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class ProblemFile:
    source: tuple[int, ...]
    target: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]
    rhs: tuple[int, ...]

    @property
    def phi(self) -> Homomorphism:
        return Homomorphism(FgAbelianGroup(self.source), FgAbelianGroup(self.target), self.matrix)

    @property
    def b(self) -> GroupElement:
        return GroupElement(FgAbelianGroup(self.target), self.rhs)

    def dumps(self) -> str:
        lines = ["source: " + " ".join(map(str, self.source)),
                 "target: " + " ".join(map(str, self.target)),
                 "matrix:"]
        lines += [" ".join(map(str, row)) for row in self.matrix]
        lines.append("rhs: " + " ".join(map(str, self.rhs)))
        return "\n".join(lines) + "\n"


def _ints(text: str, lineno: int) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split())
    except ValueError:
        raise ProblemParseError(f"expected integers, got {text.strip()!r}", lineno) from None


def parse_problem_file(text: str) -> ProblemFile:
    """Parse and validate a problem; errors carry the offending line number."""
    fields: dict[str, tuple[int, tuple[int, ...]]] = {}
    rows: list[tuple[int, tuple[int, ...]]] = []
    matrix_line = None
    in_matrix = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip().lower()
        if sep and key in ("source", "target", "rhs", "matrix"):
            if key in fields or (key == "matrix" and matrix_line is not None):
                raise ProblemParseError(f"duplicate {key!r}", lineno)
            in_matrix = key == "matrix"
            if in_matrix:
                matrix_line = lineno
                if rest.strip():
                    raise ProblemParseError("matrix rows go on the following lines", lineno)
            else:
                fields[key] = (lineno, _ints(rest, lineno))
            continue
        if sep:
            raise ProblemParseError(f"unknown field {key!r}", lineno)
        if not in_matrix:
            raise ProblemParseError(f"unexpected line {line!r}", lineno)
        rows.append((lineno, _ints(line, lineno)))

    for key in ("source", "target"):
        if key not in fields:
            raise ProblemParseError(f"missing {key}")
    if matrix_line is None:
        raise ProblemParseError("missing matrix")
    if "rhs" not in fields:
        raise ProblemParseError("missing rhs")

    src_line, source = fields["source"]
    tgt_line, target = fields["target"]
    rhs_line, rhs = fields["rhs"]
    for lineno, orders in ((src_line, source), (tgt_line, target)):
        if any(q < 0 for q in orders):
            raise ProblemParseError("factor orders must be non-negative", lineno)
    if len(rows) != len(target):
        where = rows[len(target)][0] if len(rows) > len(target) else matrix_line
        raise ProblemParseError(
            f"dimension mismatch: {len(rows)} matrix rows for {len(target)} target factors", where)
    for lineno, row in rows:
        if len(row) != len(source):
            raise ProblemParseError(
                f"dimension mismatch: row has {len(row)} entries, expected {len(source)}", lineno)
    if len(rhs) != len(target):
        raise ProblemParseError(
            f"dimension mismatch: rhs has {len(rhs)} entries, expected {len(target)}", rhs_line)

    problem = ProblemFile(source, target, tuple(r for _, r in rows), rhs)
    bad = validate_hom(problem.phi)
    if bad is not None:
        raise ProblemParseError(
            f"invalid homomorphism at entry ({bad.row}, {bad.col}): {bad}", rows[bad.row][0])
    return problem
