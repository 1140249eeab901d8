"""Teams: sets of total assignments over an ordered variable universe.

An assignment is a tuple of bits indexed like ``Team.variables``.  Members
are stored deduplicated and sorted, and subteams are addressed by bitmasks
over that member order (bit ``i`` selects ``team.rows[i]``).
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import CapExceeded, InputError, UnknownVariable
from .syntax import Dep, Formula

Assignment = tuple[int, ...]

MAX_VARIABLES = 24
MAX_SUBTEAM_MEMBERS = 20


@dataclass(frozen=True)
class Team:
    variables: tuple[str, ...]
    rows: tuple[Assignment, ...] = ()

    def __post_init__(self):
        variables = tuple(self.variables)
        if len(set(variables)) != len(variables):
            raise InputError(f"duplicate variable in universe {variables}")
        rows = set()
        for row in self.rows:
            row = tuple(int(b) for b in row)
            if len(row) != len(variables):
                raise InputError(f"row {row} has {len(row)} values, universe has {len(variables)}")
            if any(b not in (0, 1) for b in row):
                raise InputError(f"row {row} is not a 0/1 vector")
            rows.add(row)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "rows", tuple(sorted(rows)))

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[Assignment]:
        return iter(self.rows)

    def __contains__(self, row) -> bool:
        return tuple(row) in self.rows

    @cached_property
    def _position(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.variables)}

    def position(self, name: str) -> int:
        try:
            return self._position[name]
        except KeyError:
            raise UnknownVariable([name]) from None

    def require(self, names: Iterable[str]) -> None:
        missing = [n for n in names if n not in self._position]
        if missing:
            raise UnknownVariable(missing)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.rows)) - 1

    @cached_property
    def _ones(self) -> dict[str, int]:
        return {v: sum(1 << i for i, row in enumerate(self.rows) if row[p])
                for p, v in enumerate(self.variables)}

    def ones_mask(self, name: str) -> int:
        """Members (as a bitmask) mapping ``name`` to 1."""
        try:
            return self._ones[name]
        except KeyError:
            raise UnknownVariable([name]) from None

    def value(self, row: Assignment, name: str) -> int:
        return row[self.position(name)]

    def subteam(self, mask: int) -> Team:
        return Team(self.variables, [r for i, r in enumerate(self.rows) if mask >> i & 1])

    def mask_of(self, rows: Iterable[Sequence[int]]) -> int:
        index = {r: i for i, r in enumerate(self.rows)}
        return sum(1 << index[tuple(r)] for r in rows)

    def restrict(self, names: Sequence[str]) -> Team:
        """Project every member onto ``names`` (duplicates collapse)."""
        pos = [self.position(n) for n in names]
        return Team(tuple(names), [tuple(r[p] for p in pos) for r in self.rows])

    def as_dicts(self) -> list[dict[str, int]]:
        return [dict(zip(self.variables, r)) for r in self.rows]

    # --- I/O -------------------------------------------------------------

    def to_json(self) -> dict:
        return {"variables": list(self.variables), "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, data) -> Team:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(tuple(data["variables"]), data["rows"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"team JSON needs 'variables' and 'rows': {exc}") from None

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(self.variables)
        writer.writerows(self.rows)
        return out.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> Team:
        rows = [r for r in csv.reader(io.StringIO(text)) if r]
        if not rows:
            raise InputError("team CSV is empty")
        header = tuple(h.strip() for h in rows[0])
        try:
            body = [[int(c) for c in r] for r in rows[1:]]
        except ValueError as exc:
            raise InputError(f"team CSV cells must be 0 or 1: {exc}") from None
        return cls(header, body)


def team_from_rows(universe: Sequence[str], rows: Iterable[Sequence[int]]) -> Team:
    return Team(tuple(universe), rows)


def load_team(path: str) -> Team:
    with open(path) as fh:
        text = fh.read()
    if path.endswith(".csv"):
        return Team.from_csv(text)
    try:
        return Team.from_json(text)
    except json.JSONDecodeError:
        return Team.from_csv(text)


def all_assignments(universe: Sequence[str], *, cap: int = MAX_VARIABLES) -> list[Assignment]:
    """Every assignment over ``universe`` in lexicographic order."""
    if len(universe) > cap:
        raise CapExceeded("number of variables", len(universe), cap)
    return list(itertools.product((0, 1), repeat=len(universe)))


def full_team(universe: Sequence[str], *, cap: int = MAX_VARIABLES) -> Team:
    return Team(tuple(universe), all_assignments(universe, cap=cap))


def subteams(team: Team, *, cap: int = MAX_SUBTEAM_MEMBERS) -> Iterator[Team]:
    """All ``2**len(team)`` subteams, in order of their bitmask."""
    if len(team) > cap:
        raise CapExceeded("team size", len(team), cap)
    for mask in range(1 << len(team)):
        yield team.subteam(mask)


# --------------------------------------------------------------------------
# relational tables


def _identifier(column: str) -> str:
    name = re.sub(r"\W", "_", column.strip()) or "col"
    if name[0].isdigit():
        name = "c_" + name
    if name in ("T", "F"):
        name += "_"
    return name + "_" if name[-1].isdigit() else name


@dataclass(frozen=True)
class EncodedTable:
    """A relational table binary-encoded column by column into a team."""

    columns: tuple[str, ...]
    codebooks: dict[str, dict[str, tuple[int, ...]]]
    column_variables: dict[str, tuple[str, ...]]
    team: Team
    source_rows: tuple[tuple[str, ...], ...] = field(repr=False)

    def encode_row(self, row: Sequence[str]) -> Assignment:
        bits: list[int] = []
        for col, value in zip(self.columns, row):
            bits.extend(self.codebooks[col][value])
        return tuple(bits)

    def decode(self, assignment: Sequence[int]) -> tuple[str, ...]:
        values = []
        pos = 0
        for col in self.columns:
            width = len(self.column_variables[col])
            code = tuple(assignment[pos:pos + width])
            pos += width
            matches = [v for v, c in self.codebooks[col].items() if c == code]
            if not matches:
                raise InputError(f"code {code} is not used in column {col!r}")
            values.append(matches[0])
        return tuple(values)

    def variables_of(self, columns: Iterable[str]) -> tuple[str, ...]:
        unknown = [c for c in columns if c not in self.column_variables]
        if unknown:
            raise InputError("unknown column(s): " + ", ".join(unknown))
        return tuple(v for c in columns for v in self.column_variables[c])


def encode_table(rows: Sequence[Sequence[str]], names: dict[str, str] | None = None) -> EncodedTable:
    """Binary-encode a table whose first row is the header.

    Each column gets ``max(1, ceil(log2(#distinct values)))`` variables named
    after the column (or ``names[column]``) plus a 1-based bit index.  Codes
    are handed out 0, 1, 2, ... in order of first appearance and written
    big-endian.
    """
    rows = [tuple(cell.strip() for cell in r) for r in rows if len(r)]
    if not rows:
        raise InputError("table is empty")
    header, body = rows[0], rows[1:]
    if not body:
        raise InputError("table has a header but no rows")
    if len(set(header)) != len(header):
        raise InputError("duplicate column name")
    for k, r in enumerate(body, start=2):
        if len(r) != len(header):
            raise InputError(f"row {k} has {len(r)} cells, header has {len(header)}")
    names = names or {}

    codebooks: dict[str, dict[str, tuple[int, ...]]] = {}
    column_variables: dict[str, tuple[str, ...]] = {}
    for j, col in enumerate(header):
        distinct = list(dict.fromkeys(r[j] for r in body))
        width = max(1, math.ceil(math.log2(len(distinct))))
        codebooks[col] = {
            v: tuple(int(b) for b in format(code, f"0{width}b")) for code, v in enumerate(distinct)
        }
        prefix = names.get(col) or _identifier(col)
        column_variables[col] = tuple(f"{prefix}{b}" for b in range(1, width + 1))

    universe = tuple(v for col in header for v in column_variables[col])
    if len(set(universe)) != len(universe):
        raise InputError("derived variable names collide; pass explicit names")
    encoded = EncodedTable(header, codebooks, column_variables, Team(universe), tuple(body))
    team = Team(universe, [encoded.encode_row(r) for r in body])
    return EncodedTable(header, codebooks, column_variables, team, tuple(body))


def read_table_csv(text: str) -> list[list[str]]:
    return [r for r in csv.reader(io.StringIO(text)) if r]


def rewrite_dep_over_columns(encoded: EncodedTable, premise: Sequence[str],
                             conclusion: Sequence[str]) -> Formula:
    """The dependence atom over the bit variables of the named columns."""
    if not conclusion:
        raise InputError("dependence atom needs at least one conclusion column")
    return Dep(encoded.variables_of(premise), encoded.variables_of(conclusion))
