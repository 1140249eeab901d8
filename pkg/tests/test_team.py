import random
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from pdl.errors import CapExceeded, InputError, UnknownVariable
from pdl.semantics import evaluate
from pdl.syntax import Dep
from pdl.team import (Team, all_assignments, encode_table, full_team, load_team, read_table_csv,
                      rewrite_dep_over_columns, subteams, team_from_rows)

from strategies import teams

DATA = Path(__file__).parent / "data"
SCHEDULE_NAMES = {"Instructor": "i", "Room": "r", "Time": "t", "Course": "c"}


@pytest.fixture(scope="module")
def schedule():
    return encode_table(read_table_csv((DATA / "schedule.csv").read_text()), SCHEDULE_NAMES)


def test_team_from_rows():
    assert len(team_from_rows(["x", "y"], [[0, 0], [0, 1], [1, 0], [1, 1]])) == 4
    assert len(team_from_rows(["x"], [[0], [0]])) == 1
    assert len(team_from_rows(["x"], [])) == 0


def test_row_length_mismatch():
    with pytest.raises(InputError):
        team_from_rows(["x", "y"], [[0]])


def test_rows_must_be_bits():
    with pytest.raises(InputError):
        Team(("x",), [[2]])


def test_duplicate_variable():
    with pytest.raises(InputError):
        Team(("x", "x"), [])


def test_canonical_order():
    a = Team(("x", "y"), [[1, 1], [0, 1]])
    b = Team(("x", "y"), [[0, 1], [1, 1], [0, 1]])
    assert a == b and a.rows == ((0, 1), (1, 1))


def test_all_assignments():
    assert all_assignments(["x"]) == [(0,), (1,)]
    assert len(all_assignments(["x", "y"])) == 4
    assert all_assignments([]) == [()]
    assert all_assignments(["x", "y"]) == sorted(all_assignments(["x", "y"]))


def test_all_assignments_cap():
    with pytest.raises(CapExceeded):
        all_assignments([f"v{i}" for i in range(25)])


def test_subteams():
    t3 = Team(("x", "y"), [[0, 0], [0, 1], [1, 1]])
    assert len(list(subteams(t3))) == 8
    assert list(subteams(Team(("x",)))) == [Team(("x",))]
    full_xy = full_team(("x", "y"))
    subs = list(subteams(full_xy))
    assert len(subs) == 16 and len(set(subs)) == 16


def test_subteams_cap():
    with pytest.raises(CapExceeded):
        next(subteams(full_team(("a", "b", "c")), cap=7))


def test_masks():
    t = Team(("x", "y"), [[0, 0], [0, 1], [1, 1]])
    assert t.ones_mask("x") == 0b100
    assert t.ones_mask("y") == 0b110
    assert t.subteam(0b101).rows == ((0, 0), (1, 1))
    assert t.mask_of([(1, 1), (0, 0)]) == 0b101
    with pytest.raises(UnknownVariable):
        t.ones_mask("z")


def test_restrict():
    t = Team(("x", "y"), [[0, 0], [0, 1]])
    assert t.restrict(["x"]) == Team(("x",), [[0]])


@given(teams())
@settings(max_examples=100)
def test_json_and_csv_round_trip(t):
    assert Team.from_json(t.to_json()) == t
    assert Team.from_csv(t.to_csv()) == t


def test_load_team(tmp_path):
    t = Team(("a", "b"), [[0, 1], [1, 1]])
    (tmp_path / "t.csv").write_text(t.to_csv())
    (tmp_path / "t.json").write_text(str(t.to_json()).replace("'", '"'))
    assert load_team(str(tmp_path / "t.csv")) == t
    assert load_team(str(tmp_path / "t.json")) == t


def test_bad_team_json():
    with pytest.raises(InputError):
        Team.from_json({"rows": []})


# --- relational tables ------------------------------------------------------


def test_schedule_encoding(schedule):
    assert len(schedule.team.variables) == 9
    assert [len(schedule.column_variables[c]) for c in schedule.columns] == [2, 2, 3, 2]
    assert len(schedule.team) == 6


def test_schedule_rewrite(schedule):
    assert rewrite_dep_over_columns(schedule, ["Room", "Time"], ["Instructor"]) == \
        Dep(("r1", "r2", "t1", "t2", "t3"), ("i1", "i2"))
    assert rewrite_dep_over_columns(schedule, [], ["Course"]) == Dep((), ("c1", "c2"))
    assert rewrite_dep_over_columns(schedule, ["Instructor", "Time"], ["Room", "Course"]) == \
        Dep(("i1", "i2", "t1", "t2", "t3"), ("r1", "r2", "c1", "c2"))


def test_schedule_juha_jonni(schedule):
    juha = schedule.encode_row(("Juha", "C.30", "10.00", "LAB"))
    jonni = schedule.encode_row(("Jonni", "C.30", "10.00", "LAB"))
    pos = {v: i for i, v in enumerate(schedule.team.variables)}
    same = [v for v in schedule.variables_of(["Room", "Time"]) if juha[pos[v]] == jonni[pos[v]]]
    assert len(same) == 5
    assert any(juha[pos[v]] != jonni[pos[v]] for v in schedule.variables_of(["Instructor"]))


def test_codes_follow_first_appearance(schedule):
    assert schedule.codebooks["Instructor"] == {"Antti": (0, 0), "Jonni": (0, 1), "Juha": (1, 0)}


def test_decode_round_trip(schedule):
    decoded = sorted(schedule.decode(r) for r in schedule.team.rows)
    assert decoded == sorted(schedule.source_rows)


def test_single_value_column():
    enc = encode_table([["A"], ["v"], ["v"], ["v"]])
    assert len(enc.team.variables) == 1
    assert len(enc.team) == 1


def test_default_names_end_with_bit_index():
    enc = encode_table([["Room 2", "x"], ["a", "b"], ["c", "b"]])
    assert enc.column_variables["Room 2"] == ("Room_2_1",)
    assert enc.column_variables["x"] == ("x1",)


@pytest.mark.parametrize("rows", [[], [["A", "B"]], [["A", "B"], ["1"]], [["A", "A"], ["1", "2"]]])
def test_bad_tables(rows):
    with pytest.raises(InputError):
        encode_table(rows)


def test_unknown_column(schedule):
    with pytest.raises(InputError):
        rewrite_dep_over_columns(schedule, ["Nope"], ["Room"])


def _fd_holds(body, a, b):
    seen = {}
    for row in body:
        key = tuple(row[i] for i in a)
        val = tuple(row[i] for i in b)
        if seen.setdefault(key, val) != val:
            return False
    return True


@pytest.mark.parametrize("seed", range(40))
def test_fd_preserved_by_encoding(seed):
    rng = random.Random(seed)
    ncols = rng.randint(2, 4)
    header = [f"C{j}" for j in range(ncols)]
    body = [[rng.choice("abcde"[: rng.randint(1, 5)]) for _ in header] for _ in range(rng.randint(1, 8))]
    enc = encode_table([header] + body)
    assert len(enc.team) == len({tuple(r) for r in body})
    for a in range(ncols):
        for b in range(ncols):
            if a == b:
                continue
            atom = rewrite_dep_over_columns(enc, [header[a]], [header[b]])
            assert evaluate(enc.team, atom) == _fd_holds(body, [a], [b])
