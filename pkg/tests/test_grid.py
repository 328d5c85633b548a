import random

import pytest

from sudoku_ryser.grid import (
    GridFormatError,
    PartialGrid,
    SudokuGeometry,
    anchors,
    big_cell_of,
    embed_in_square,
    empty_grid,
    grid_from_rows,
    parse_grid,
    serialize_grid,
    validate_partial,
)


def test_anchors_formula():
    assert anchors(5, 0, SudokuGeometry(2, 2)).r_star == 4
    assert anchors(4, 0, SudokuGeometry(2, 2)).r_star == 4
    assert anchors(7, 0, SudokuGeometry(3, 3)).r_star == 6
    assert anchors(0, 5, SudokuGeometry(2, 3)).s_star == 3


def test_anchors_invariants():
    rng = random.Random(7)
    for _ in range(200):
        p = rng.randint(1, 5)
        q = rng.randint(1, 5)
        geom = SudokuGeometry(p, q)
        r = rng.randint(0, geom.n)
        s = rng.randint(0, geom.n)
        anc = anchors(r, s, geom)
        assert anc.r_star <= r < anc.r_star + p
        assert anc.r_star % p == 0
        assert anc.s_star <= s < anc.s_star + q
        assert anc.s_star % q == 0


def test_anchors_negative():
    with pytest.raises(ValueError):
        anchors(-1, 0, SudokuGeometry(2, 2))


def test_big_cell_of():
    assert big_cell_of(SudokuGeometry(2, 3), 3, 4) == (2, 2)
    assert big_cell_of(SudokuGeometry(2, 3), 1, 1) == (1, 1)
    assert big_cell_of(SudokuGeometry(3, 3), 9, 9) == (3, 3)
    with pytest.raises(ValueError):
        big_cell_of(SudokuGeometry(2, 2), 5, 1)


def test_validate_ok_rectangle():
    grid = grid_from_rows(2, 2, [[1, 2, 3], [3, 4, 1]])
    assert validate_partial(grid).ok


def test_validate_row_duplicate():
    grid = grid_from_rows(1, 2, [[1, 1]])
    report = validate_partial(grid)
    assert not report.ok
    assert any(v.kind == "row" and v.symbol == 1 for v in report.violations)


def test_validate_bigcell_duplicate():
    grid = empty_grid(2, 2).with_cell(1, 1, 1).with_cell(2, 2, 1)
    report = validate_partial(grid)
    assert not report.ok
    kinds = {v.kind for v in report.violations}
    assert "bigcell" in kinds and "row" not in kinds and "column" not in kinds


def test_validate_range():
    grid = grid_from_rows(2, 2, [[5]])
    report = validate_partial(grid)
    assert not report.ok
    assert report.violations[0].kind == "range"


def test_validate_gerechte_part():
    partition = [[1, 1], [2, 2]]
    grid = grid_from_rows(2, 2, [[1, 0], [0, 1]], partition=partition)
    assert grid.flavor == "gerechte"
    assert validate_partial(grid).ok
    bad = grid.with_cell(1, 2, 1)
    report = validate_partial(bad)
    assert any(v.kind == "row" for v in report.violations)
    bad2 = grid_from_rows(2, 2, [[1, 1], [0, 0]], partition=[[1, 2], [1, 2]])
    report2 = validate_partial(bad2)
    assert any(v.kind == "row" for v in report2.violations)
    assert not any(v.kind == "part" for v in report2.violations)


def test_parse_basic():
    text = "sudoku v1\n2 2 2 3\n1 2 3\n3 4 1\n"
    grid = parse_grid(text)
    assert grid.geometry == SudokuGeometry(2, 2)
    assert grid.rows == 2 and grid.cols == 3
    assert grid.at(1, 3) == 3 and grid.at(2, 2) == 4
    assert grid.flavor == "sudoku"


def test_parse_errors():
    with pytest.raises(GridFormatError):
        parse_grid("nope\n")
    with pytest.raises(GridFormatError):
        parse_grid("sudoku v1\n2 2 2\n")
    with pytest.raises(GridFormatError):
        parse_grid("sudoku v1\n2 2 2 3\n1 2\n3 4 1\n")
    with pytest.raises(GridFormatError):
        parse_grid("sudoku v1\n2 2 1 2\n1 x\n")
    with pytest.raises(GridFormatError):
        parse_grid("sudoku v1\n2 2 1 2\n1 9\n")


def test_serialize_empty():
    text = serialize_grid(empty_grid(2, 2))
    lines = text.strip().splitlines()
    assert lines[2:] == [". . . ."] * 4


def test_serialize_two_digit_symbol():
    grid = empty_grid(3, 4).with_cell(1, 1, 10)
    assert serialize_grid(grid).splitlines()[2].split()[0] == "10"


def test_round_trip_random():
    rng = random.Random(11)
    for _ in range(50):
        p = rng.randint(1, 3)
        q = rng.randint(1, 3)
        geom = SudokuGeometry(p, q)
        rows = rng.randint(0, geom.n)
        cols = rng.randint(0, geom.n)
        cells = tuple(
            tuple(rng.choice([None] * 3 + list(range(1, geom.n + 1))) for _ in range(cols))
            for _ in range(rows)
        )
        flavor = "latin" if p == 1 or q == 1 else "sudoku"
        grid = PartialGrid(geom, rows, cols, cells, flavor, None)
        assert parse_grid(serialize_grid(grid)) == grid


def test_round_trip_partition():
    partition = [[1, 2], [2, 1]]
    grid = grid_from_rows(1, 2, [[1, 0], [0, 2]], partition=partition)
    again = parse_grid(serialize_grid(grid))
    assert again == grid
    assert again.flavor == "gerechte"


def test_serialize_parse_canonical():
    messy = "sudoku v1\n 2 2   2 3 \n1   2 3\n3 4    1\n\n"
    canonical = serialize_grid(parse_grid(messy))
    assert parse_grid(canonical) == parse_grid(messy)
    assert serialize_grid(parse_grid(canonical)) == canonical


def test_band_row_permutation_preserves_sudoku_validity():
    grid = grid_from_rows(2, 2, [[1, 2, 3, 4], [3, 4, 1, 2], [2, 1, 4, 3], [4, 3, 2, 1]])
    assert validate_partial(grid).ok
    swapped = grid_from_rows(2, 2, [list(grid.cells[1]), list(grid.cells[0]),
                                    list(grid.cells[2]), list(grid.cells[3])])
    assert validate_partial(swapped).ok


def test_embed_in_square():
    grid = grid_from_rows(2, 2, [[1, 2, 3], [3, 4, 1]])
    square = embed_in_square(grid)
    assert square.rows == square.cols == 4
    assert square.at(1, 1) == 1 and square.at(2, 3) == 1
    assert square.at(3, 1) is None and square.at(1, 4) is None
