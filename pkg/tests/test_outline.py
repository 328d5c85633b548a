import random

import pytest

from sudoku_ryser.fixtures import random_latin_square
from sudoku_ryser.grid import grid_from_rows, validate_partial
from sudoku_ryser.outline import (
    OutlineError,
    OutlineLatinSquare,
    amalgamate,
    expand_outline,
    parse_outline,
    serialize_outline,
    split_front,
    validate_outline,
)

L4 = grid_from_rows(1, 4, [[1, 2, 3, 4], [3, 4, 1, 2], [2, 1, 4, 3], [4, 3, 2, 1]])


def random_composition(rng, n):
    parts = []
    left = n
    while left:
        part = rng.randint(1, left)
        parts.append(part)
        left -= part
    return tuple(parts)


def test_amalgamate_identity_compositions():
    unit = (1, 1, 1, 1)
    o = amalgamate(L4, unit, unit, unit)
    assert o.cells[0][0] == (1,)
    assert all(len(o.cells[i][j]) == 1 for i in range(4) for j in range(4))
    assert all(o.cells[i][j][0] == L4.cells[i][j] for i in range(4) for j in range(4))


def test_amalgamate_single_cell():
    o = amalgamate(L4, (4,), (4,), (1, 1, 1, 1))
    assert o.cells == ((tuple(sorted([1, 2, 3, 4] * 4)),),)


def test_amalgamate_blocks():
    o = amalgamate(L4, (2, 2), (2, 2), (1, 1, 1, 1))
    assert o.cells[0][0] == (1, 2, 3, 4)
    assert validate_outline(o).ok


def test_amalgamate_rejects_bad_input():
    with pytest.raises(ValueError):
        amalgamate(L4, (2, 2), (2, 2), (2, 1))  # symbol composition sums to 3
    broken = grid_from_rows(1, 4, [[1, 2, 3, 4], [1, 2, 3, 4],
                                   [2, 1, 4, 3], [4, 3, 2, 1]])
    with pytest.raises(ValueError):
        amalgamate(broken, (4,), (4,), (1, 1, 1, 1))


def test_validate_outline_accepts_amalgams():
    rng = random.Random(3)
    for n in (4, 6):
        for seed in range(5):
            square = random_latin_square(n, seed)
            S = random_composition(rng, n)
            T = random_composition(rng, n)
            U = random_composition(rng, n)
            assert validate_outline(amalgamate(square, S, T, U)).ok


def test_validate_outline_flags_cell_size():
    o = amalgamate(L4, (2, 2), (2, 2), (1, 1, 1, 1))
    cells = list(list(row) for row in o.cells)
    cells[0][0] = cells[0][0][:-1]
    bad = OutlineLatinSquare(o.row_comp, o.col_comp, o.sym_comp,
                             tuple(tuple(row) for row in cells))
    report = validate_outline(bad)
    assert not report.ok
    assert any(v.kind == "cell" for v in report.violations)


def test_validate_outline_flags_column_counts():
    # Swap one symbol between two cells of the same row: row counts stay
    # fine, both column counts break.
    o = amalgamate(L4, (2, 2), (2, 2), (1, 1, 1, 1))
    cells = [list(row) for row in o.cells]
    first = list(cells[0][0])
    second = list(cells[0][1])
    moved = first[0]
    other = next(v for v in second if v != moved)
    first.remove(moved)
    first.append(other)
    second.remove(other)
    second.append(moved)
    cells[0][0] = tuple(sorted(first))
    cells[0][1] = tuple(sorted(second))
    bad = OutlineLatinSquare(o.row_comp, o.col_comp, o.sym_comp,
                             tuple(tuple(row) for row in cells))
    report = validate_outline(bad)
    assert not report.ok
    assert any(v.kind == "column" for v in report.violations)


def test_split_front_requires_composite_part():
    unit = (1, 1, 1, 1)
    o = amalgamate(L4, unit, unit, unit)
    with pytest.raises(OutlineError):
        split_front(o, "row")


def test_split_front_row_validity_and_conservation():
    o = amalgamate(L4, (2, 2), (3, 1), (1, 1, 1, 1))
    split = split_front(o, "row")
    assert split.row_comp == (1, 1, 2)
    assert validate_outline(split).ok
    for j in range(len(o.col_comp)):
        merged = tuple(sorted(split.cells[0][j] + split.cells[1][j]))
        assert merged == o.cells[0][j]


def test_split_until_unit_takes_expected_steps():
    rng = random.Random(17)
    for n in (4, 6):
        square = random_latin_square(n, n)
        S = random_composition(rng, n)
        T = random_composition(rng, n)
        o = amalgamate(square, S, T, (1,) * n)
        steps = 0
        current = o
        while any(part >= 2 for part in current.row_comp):
            current = split_front(current, "row")
            steps += 1
            assert validate_outline(current).ok
        while any(part >= 2 for part in current.col_comp):
            current = split_front(current, "column")
            steps += 1
            assert validate_outline(current).ok
        assert steps == sum(p - 1 for p in S) + sum(q - 1 for q in T)


def test_expand_all_unit_outline_is_itself():
    unit = (1, 1, 1, 1)
    o = amalgamate(L4, unit, unit, unit)
    square = expand_outline(o)
    assert square.cells == L4.cells


def test_expand_single_cell_n2():
    o = OutlineLatinSquare((2,), (2,), (1, 1), (((1, 1, 2, 2),),))
    square = expand_outline(o)
    assert validate_partial(square).ok
    assert amalgamate(square, (2,), (2,), (1, 1)).cells == o.cells


def test_expand_requires_unit_symbols():
    o = amalgamate(L4, (2, 2), (2, 2), (2, 2))
    with pytest.raises(OutlineError):
        expand_outline(o)


def test_expand_rejects_invalid_outline():
    o = amalgamate(L4, (2, 2), (2, 2), (1, 1, 1, 1))
    cells = [list(row) for row in o.cells]
    cells[0][0] = cells[0][0][:-1]
    bad = OutlineLatinSquare(o.row_comp, o.col_comp, o.sym_comp,
                             tuple(tuple(row) for row in cells))
    with pytest.raises(OutlineError):
        expand_outline(bad)


def test_outline_text_round_trip():
    o = amalgamate(L4, (2, 2), (3, 1), (1, 1, 1, 1))
    text = serialize_outline(o)
    assert text.splitlines()[0] == "outline v1"
    assert text.splitlines()[1] == "S: 2 2"
    assert parse_outline(text) == o


def test_parse_outline_errors():
    with pytest.raises(OutlineError):
        parse_outline("grid v1\n")
    with pytest.raises(OutlineError):
        parse_outline("outline v1\nS: 2\nT: 2\nU: 1 1\n1,1\n1,1\n")  # row count
    with pytest.raises(OutlineError):
        parse_outline("outline v1\nS: 2\nT: 1 1\nU: 1 1\n1,2\n")  # cell count
    with pytest.raises(OutlineError):
        parse_outline("outline v1\nS: 2\nT: 2\nU: 1 1\n1,x,2,2\n")


def test_expand_round_trip():
    rng = random.Random(23)
    for n in (4, 6, 8):
        for case in range(4):
            square = random_latin_square(n, 100 * n + case)
            S = random_composition(rng, n)
            T = random_composition(rng, n)
            U = (1,) * n
            o = amalgamate(square, S, T, U)
            expanded = expand_outline(o)
            assert validate_partial(expanded).ok
            assert amalgamate(expanded, S, T, U) == o
