import pytest

from sudoku_ryser.fixtures import (
    brute_force_complete,
    extends,
    gen_evans_big,
    gen_evans_small,
    gen_fig6,
    gen_random_rectangle,
    gen_random_valid_rectangle,
    random_latin_square,
)
from sudoku_ryser.grid import empty_grid, grid_from_rows, validate_partial


def filled_count(grid):
    return sum(1 for _ in grid.filled())


def test_oracle_full_square_is_found_immediately():
    square = grid_from_rows(2, 2, [[1, 2, 3, 4], [3, 4, 1, 2],
                                   [2, 1, 4, 3], [4, 3, 2, 1]])
    result = brute_force_complete(square)
    assert result.outcome == "found"
    assert result.square == square
    assert result.nodes_expanded == 0


def test_oracle_empty_grid_found():
    result = brute_force_complete(empty_grid(2, 2))
    assert result.outcome == "found"
    assert validate_partial(result.square).ok
    assert result.square.is_fully_filled()


def test_oracle_rejects_invalid_input():
    with pytest.raises(ValueError):
        brute_force_complete(grid_from_rows(1, 2, [[1, 1]]))


def test_oracle_node_limit():
    result = brute_force_complete(empty_grid(3, 3), node_limit=5)
    assert result.outcome == "gaveUp"
    assert result.square is None


def test_oracle_deterministic():
    grid = gen_evans_small(2, 2)
    first = brute_force_complete(grid)
    second = brute_force_complete(grid)
    assert first.outcome == second.outcome == "incompletable"
    assert first.nodes_expanded == second.nodes_expanded


def test_oracle_incompletable_agrees_across_tie_breaks():
    from sudoku_ryser.grid import embed_in_square

    clash = embed_in_square(grid_from_rows(2, 3, [[1, 2], [3, 4], [2, 1], [4, 3]]))
    for grid in (gen_evans_small(2, 2), gen_evans_small(2, 3),
                 gen_fig6(4, 2, "column"), gen_fig6(4, 3, "diagonal"), clash):
        a = brute_force_complete(grid, tie_break="coordinate")
        b = brute_force_complete(grid, tie_break="reverse")
        assert a.outcome == b.outcome == "incompletable"


def test_evans_small_layout_2_2():
    grid = gen_evans_small(2, 2)
    assert grid.at(1, 1) == 1 and grid.at(1, 2) == 2 and grid.at(2, 3) == 3
    assert filled_count(grid) == 3
    assert validate_partial(grid).ok


def test_evans_small_layout_4_4():
    grid = gen_evans_small(4, 4)
    assert [grid.at(1, j) for j in range(1, 5)] == [1, 2, 3, 4]
    assert grid.at(2, 5) == 5 and grid.at(3, 9) == 5 and grid.at(4, 13) == 5
    assert filled_count(grid) == 7


def test_evans_small_cell_count_and_incompletable():
    for p, q in ((2, 2), (2, 3), (3, 2), (3, 3)):
        grid = gen_evans_small(p, q)
        assert filled_count(grid) == p + q - 1
        assert validate_partial(grid).ok
        assert brute_force_complete(grid).outcome == "incompletable"


def test_evans_small_rejects_degenerate():
    with pytest.raises(ValueError):
        gen_evans_small(1, 3)


def test_evans_big_blocks_2_2():
    grid = gen_evans_big(2, 2)
    assert [[grid.at(r, c) for c in (1, 2)] for r in (1, 2)] == [[1, 2], [3, 4]]
    assert [[grid.at(r, c) for c in (3, 4)] for r in (3, 4)] == [[3, 1], [4, 2]]
    assert validate_partial(grid).ok


def test_evans_big_incompletable():
    assert brute_force_complete(gen_evans_big(2, 2)).outcome == "incompletable"
    result = brute_force_complete(gen_evans_big(3, 2), node_limit=2_000_000)
    assert result.outcome == "incompletable"


def test_evans_big_filled_big_cells():
    grid = gen_evans_big(3, 2)
    assert validate_partial(grid).ok
    filled_blocks = set()
    for r, c, _ in grid.filled():
        filled_blocks.add(((r - 1) // 3 + 1, (c - 1) // 3 + 1))
    assert len(filled_blocks) == 3  # (1,1) plus the transposed stack in big column 2
    assert filled_count(grid) == 3 * 9


def test_evans_big_rejects_bad_parameters():
    with pytest.raises(ValueError):
        gen_evans_big(2, 1)
    with pytest.raises(ValueError):
        gen_evans_big(2, 3)


def test_fig6_column_small():
    grid = gen_fig6(3, 2, "column")
    assert grid.at(1, 1) == 1 and grid.at(1, 2) == 2 and grid.at(2, 3) == 3
    assert filled_count(grid) == 3
    assert brute_force_complete(grid).outcome == "incompletable"


def test_fig6_diagonal():
    grid = gen_fig6(4, 2, "diagonal")
    assert grid.at(1, 1) == 1
    assert grid.at(2, 2) == grid.at(3, 3) == grid.at(4, 4) == 2
    assert brute_force_complete(grid).outcome == "incompletable"


def test_fig6_counts_and_incompletable():
    for n in (3, 4, 5):
        for variant, xs in (("column", range(1, n)), ("diagonal", range(2, n + 1))):
            for x in xs:
                grid = gen_fig6(n, x, variant)
                assert filled_count(grid) == n
                assert validate_partial(grid).ok
                assert brute_force_complete(grid).outcome == "incompletable"


def test_fig6_rejects_bad_parameters():
    with pytest.raises(ValueError):
        gen_fig6(4, 0, "column")
    with pytest.raises(ValueError):
        gen_fig6(4, 1, "diagonal")
    with pytest.raises(ValueError):
        gen_fig6(4, 2, "spiral")


def test_random_rectangle_valid_and_deterministic():
    for seed in range(8):
        grid = gen_random_rectangle(2, 3, 3, 4, seed)
        assert grid.rows == 3 and grid.cols == 4
        assert grid.is_fully_filled()
        assert validate_partial(grid).ok
        assert gen_random_rectangle(2, 3, 3, 4, seed) == grid


def test_random_rectangle_is_completable_by_construction():
    grid = gen_random_rectangle(2, 2, 2, 2, 5)
    assert brute_force_complete(grid).outcome == "found"


def test_random_valid_rectangle():
    for seed in range(8):
        grid = gen_random_valid_rectangle(2, 3, 4, 3, seed)
        assert grid.is_fully_filled()
        assert validate_partial(grid).ok


def test_random_latin_square():
    square = random_latin_square(5, 1)
    assert validate_partial(square).ok
    assert square.flavor == "latin"


def test_extends_helper():
    base = grid_from_rows(2, 2, [[1, 2]])
    good = grid_from_rows(2, 2, [[1, 2, 3, 4], [3, 4, 1, 2],
                                 [2, 1, 4, 3], [4, 3, 2, 1]])
    assert extends(base, good)
    assert not extends(grid_from_rows(2, 2, [[2, 1]]), good)
