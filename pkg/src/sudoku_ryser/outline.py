"""Amalgamation of latin squares into outline squares and its constructive inverse.

An outline square merges blocks of rows, columns and symbols of a latin
square into an array of symbol multisets.  Expansion reverses this by
repeatedly peeling a unit slice off the leading merged block, using an
equitable edge-coloring to divide each block's content; the counting
conditions carry through every peel, so the fully split array is again a
latin square.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .bipartite import BipartiteMultigraph, equitable_edge_coloring
from .grid import (
    PartialGrid,
    SudokuGeometry,
    ValidationReport,
    Violation,
    validate_partial,
)

Composition = tuple[int, ...]


class OutlineError(ValueError):
    """An outline square failed a structural requirement."""


def _check_composition(comp: Composition, n: int, name: str) -> None:
    if any(part < 1 for part in comp):
        raise OutlineError(f"{name} has a nonpositive part: {comp}")
    if sum(comp) != n:
        raise OutlineError(f"{name} sums to {sum(comp)}, expected {n}")


@dataclass(frozen=True)
class OutlineLatinSquare:
    """An s x t array of symbol multisets with row/column/symbol compositions.

    Cell multisets are stored as sorted tuples.  Validity against the three
    counting conditions is checked by validate_outline, not on construction.
    """

    row_comp: Composition
    col_comp: Composition
    sym_comp: Composition
    cells: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self) -> None:
        n = sum(self.row_comp)
        _check_composition(self.row_comp, n, "row composition")
        _check_composition(self.col_comp, n, "column composition")
        _check_composition(self.sym_comp, n, "symbol composition")
        if len(self.cells) != len(self.row_comp):
            raise OutlineError("cell array height does not match the row composition")
        for row in self.cells:
            if len(row) != len(self.col_comp):
                raise OutlineError("cell array width does not match the column composition")

    @property
    def n(self) -> int:
        return sum(self.row_comp)


def _block_index(comp: Composition) -> list[int]:
    """Map 0-based fine index -> 0-based block index for a composition."""
    out = []
    for b, size in enumerate(comp):
        out.extend([b] * size)
    return out


def amalgamate(square: PartialGrid, row_comp: Composition, col_comp: Composition,
               sym_comp: Composition) -> OutlineLatinSquare:
    """Merge row, column and symbol blocks of a full latin square."""
    n = square.n
    if square.rows != n or square.cols != n or not square.is_fully_filled():
        raise ValueError("amalgamation needs a fully filled n x n square")
    report = validate_partial(
        PartialGrid(square.geometry, n, n, square.cells, "latin", None))
    if not report.ok:
        raise ValueError("amalgamation input is not a latin square")
    for comp, name in ((row_comp, "row"), (col_comp, "column"), (sym_comp, "symbol")):
        _check_composition(tuple(comp), n, f"{name} composition")

    row_of = _block_index(tuple(row_comp))
    col_of = _block_index(tuple(col_comp))
    sym_of = _block_index(tuple(sym_comp))
    buckets: dict[tuple[int, int], list[int]] = {}
    for i in range(n):
        for j in range(n):
            key = (row_of[i], col_of[j])
            buckets.setdefault(key, []).append(sym_of[square.cells[i][j] - 1] + 1)
    cells = tuple(
        tuple(tuple(sorted(buckets.get((bi, bj), ()))) for bj in range(len(col_comp)))
        for bi in range(len(row_comp))
    )
    return OutlineLatinSquare(tuple(row_comp), tuple(col_comp), tuple(sym_comp), cells)


def validate_outline(o: OutlineLatinSquare) -> ValidationReport:
    """Check the three counting conditions of an outline square.

    (i) row i holds symbol k exactly p_i * r_k times, (ii) column j holds it
    q_j * r_k times, (iii) cell (i, j) holds p_i * q_j symbols in total.
    """
    violations: list[Violation] = []
    u = len(o.sym_comp)

    for i, p_i in enumerate(o.row_comp):
        counts: Counter = Counter()
        for cell in o.cells[i]:
            counts.update(cell)
        for k in range(1, u + 1):
            expected = p_i * o.sym_comp[k - 1]
            if counts.get(k, 0) != expected:
                violations.append(Violation("row", ((i + 1, counts.get(k, 0)),), k))

    for j, q_j in enumerate(o.col_comp):
        counts = Counter()
        for i in range(len(o.row_comp)):
            counts.update(o.cells[i][j])
        for k in range(1, u + 1):
            expected = q_j * o.sym_comp[k - 1]
            if counts.get(k, 0) != expected:
                violations.append(Violation("column", ((j + 1, counts.get(k, 0)),), k))

    for i, p_i in enumerate(o.row_comp):
        for j, q_j in enumerate(o.col_comp):
            size = len(o.cells[i][j])
            if size != p_i * q_j:
                violations.append(Violation("cell", ((i + 1, j + 1), (size, p_i * q_j)), None))
            if any(not (1 <= k <= u) for k in o.cells[i][j]):
                violations.append(Violation("range", ((i + 1, j + 1),), None))

    return ValidationReport(not violations, tuple(violations))


def split_front(o: OutlineLatinSquare, axis: str) -> OutlineLatinSquare:
    """Split the first merged part on the given axis into a unit slice and the rest.

    The slice content is chosen by an equitable m-edge-coloring of the graph
    joining the cross-axis blocks to the symbols of the splitting block, one
    edge per symbol instance; color class 1 becomes the new unit slice.
    Every degree in that graph is a multiple of m, so each class takes an
    exact 1/m share at every vertex and the counting conditions survive.
    """
    if axis not in ("row", "column"):
        raise ValueError(f"axis must be 'row' or 'column', got {axis!r}")
    comp = o.row_comp if axis == "row" else o.col_comp
    target = next((idx for idx, part in enumerate(comp) if part >= 2), None)
    if target is None:
        raise OutlineError(f"no composite part on the {axis} axis")
    m = comp[target]

    cross = len(o.col_comp) if axis == "row" else len(o.row_comp)
    u = len(o.sym_comp)
    edges: list[tuple[int, int]] = []
    for b in range(cross):
        cell = o.cells[target][b] if axis == "row" else o.cells[b][target]
        for k in cell:
            edges.append((b, k - 1))
    graph = BipartiteMultigraph(tuple(range(cross)), tuple(range(1, u + 1)), tuple(edges))
    coloring = equitable_edge_coloring(graph, m)

    unit: list[Counter] = [Counter() for _ in range(cross)]
    rest: list[Counter] = [Counter() for _ in range(cross)]
    for e, (b, k0) in enumerate(edges):
        (unit if coloring.color_of[e] == 1 else rest)[b][k0 + 1] += 1

    def as_cell(counter: Counter) -> tuple[int, ...]:
        return tuple(sorted(counter.elements()))

    if axis == "row":
        new_comp = comp[:target] + (1, m - 1) + comp[target + 1:]
        new_cells = (
            o.cells[:target]
            + (tuple(as_cell(unit[b]) for b in range(cross)),)
            + (tuple(as_cell(rest[b]) for b in range(cross)),)
            + o.cells[target + 1:]
        )
        return OutlineLatinSquare(new_comp, o.col_comp, o.sym_comp, new_cells)

    new_comp = comp[:target] + (1, m - 1) + comp[target + 1:]
    new_cells = tuple(
        row[:target] + (as_cell(unit[i]), as_cell(rest[i])) + row[target + 1:]
        for i, row in enumerate(o.cells)
    )
    return OutlineLatinSquare(o.row_comp, new_comp, o.sym_comp, new_cells)


def parse_outline(text: str) -> OutlineLatinSquare:
    """Parse the outline text format (testing convenience).

    Line 1 is ``outline v1``; lines 2-4 give the three compositions as
    ``S: a b c``, ``T: ...``, ``U: ...``; then one line per outline row with
    cells separated by ``|`` and symbols within a cell separated by ``,``.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "outline v1":
        raise OutlineError("missing 'outline v1' header")
    if len(lines) < 4:
        raise OutlineError("missing composition lines")
    comps = []
    for expect, ln in zip(("S:", "T:", "U:"), lines[1:4]):
        if not ln.startswith(expect):
            raise OutlineError(f"expected line starting with {expect!r}, got {ln!r}")
        try:
            comps.append(tuple(int(tok) for tok in ln[2:].split()))
        except ValueError as exc:
            raise OutlineError(f"bad composition line {ln!r}") from exc
    row_comp, col_comp, sym_comp = comps
    body = lines[4:]
    if len(body) != len(row_comp):
        raise OutlineError(f"expected {len(row_comp)} cell rows, got {len(body)}")
    cells = []
    for ln in body:
        parts = [chunk.strip() for chunk in ln.split("|")]
        if len(parts) != len(col_comp):
            raise OutlineError(f"expected {len(col_comp)} cells per row in {ln!r}")
        row = []
        for chunk in parts:
            if not chunk:
                row.append(())
                continue
            try:
                row.append(tuple(sorted(int(tok) for tok in chunk.split(","))))
            except ValueError as exc:
                raise OutlineError(f"bad cell {chunk!r}") from exc
        cells.append(tuple(row))
    return OutlineLatinSquare(row_comp, col_comp, sym_comp, tuple(cells))


def serialize_outline(o: OutlineLatinSquare) -> str:
    """Canonical text form for parse_outline."""
    out = ["outline v1",
           "S: " + " ".join(str(part) for part in o.row_comp),
           "T: " + " ".join(str(part) for part in o.col_comp),
           "U: " + " ".join(str(part) for part in o.sym_comp)]
    for row in o.cells:
        out.append(" | ".join(",".join(str(k) for k in cell) for cell in row))
    return "\n".join(out) + "\n"


def expand_outline(o: OutlineLatinSquare,
                   geometry: SudokuGeometry | None = None,
                   flavor: str = "latin") -> PartialGrid:
    """Recover a full latin square whose amalgamation is the given outline.

    Requires a unit symbol composition.  Rows are split to unit parts first,
    then columns; each split preserves validity, so the result is read off
    directly from the all-unit array.
    """
    if any(part != 1 for part in o.sym_comp):
        raise OutlineError("expansion requires a unit symbol composition")
    report = validate_outline(o)
    if not report.ok:
        raise OutlineError(f"outline is invalid: {report.violations[:3]}")

    current = o
    while any(part >= 2 for part in current.row_comp):
        current = split_front(current, "row")
    while any(part >= 2 for part in current.col_comp):
        current = split_front(current, "column")

    n = o.n
    cells = []
    for i in range(n):
        row = []
        for j in range(n):
            cell = current.cells[i][j]
            if len(cell) != 1:
                raise OutlineError("expansion did not reach singleton cells")
            row.append(cell[0])
        cells.append(tuple(row))
    geom = geometry if geometry is not None else SudokuGeometry(1, n)
    return PartialGrid(geom, n, n, tuple(cells), flavor, None)
