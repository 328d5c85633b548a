"""Completion of fully filled Sudoku rectangles to full Sudoku squares.

The pipeline fills the partially covered big cells first (saturating
matchings in the side and bottom graphs, with the two corner directions
solved jointly), distributes each remaining row's and column's missing
symbols over the empty big columns and rows by equitable edge-colorings,
assembles the whole picture into an outline square, and expands it.  Every
stage that can fail on honest input returns a checkable Obstruction; when
all stages pass, the expansion is guaranteed to produce a valid square, so
the staged pipeline doubles as the completability decision.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .bipartite import (
    BipartiteMultigraph,
    HallViolator,
    Matching,
    _violator_from_matching,
    equitable_edge_coloring,
    extend_matching,
    saturating_matching,
    verify_violator,
)
from .grid import (
    PartialGrid,
    SudokuGeometry,
    ValidationReport,
    anchors,
    validate_partial,
)
from .outline import Composition, OutlineLatinSquare, expand_outline, validate_outline

STAGES = ("input-invalid", "side-matching", "bottom-matching", "corner-conflict",
          "outline-invalid", "ryser")


@dataclass
class MediumCellPlan:
    """Planned symbols for the horizontal and vertical medium cells.

    horizontal maps (big row index, small row offset) to the symbols placed
    in that row's slice of the partially covered big column; vertical is the
    column mirror for the partially covered big row.
    """

    horizontal: dict[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)
    vertical: dict[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)


@dataclass
class Obstruction:
    """Why a pipeline stage failed, with enough context to recheck it."""

    stage: str
    detail: object
    kind: str = ""
    index: Optional[int] = None
    symbol: Optional[int] = None


@dataclass
class Verdict:
    completable: bool
    certificate: Union[PartialGrid, Obstruction]


@dataclass
class Distribution:
    """Free-symbol placements beyond the medium cells.

    row_fills[(row, J)] holds the symbols row gets in empty big column J;
    block_row_fills[J] is the multiset assigned to the merged leftover rows
    there.  col_fills and block_col_fills mirror this vertically.
    """

    row_fills: dict[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)
    block_row_fills: dict[int, tuple[int, ...]] = field(default_factory=dict)
    col_fills: dict[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)
    block_col_fills: dict[int, tuple[int, ...]] = field(default_factory=dict)


@dataclass(frozen=True)
class _Shape:
    """Derived geometry of one rectangle instance."""

    p: int
    q: int
    n: int
    r: int
    s: int
    r_star: int
    s_star: int
    p_divides: bool
    q_divides: bool
    a: int  # leftover row block height, p - (r - r*)
    b: int  # leftover column block width, q - (s - s*)
    big_col: Optional[int]  # partially covered big column, if any
    big_row: Optional[int]  # partially covered big row, if any
    full_bands: int  # r* / p
    full_stacks: int  # s* / q
    empty_big_cols: tuple[int, ...]
    empty_big_rows: tuple[int, ...]


def _shape(grid: PartialGrid) -> _Shape:
    geom = grid.geometry
    p, q, n = geom.p, geom.q, geom.n
    r, s = grid.rows, grid.cols
    anc = anchors(r, s, geom)
    p_div = r % p == 0
    q_div = s % q == 0
    big_col = None if q_div else anc.s_star // q + 1
    big_row = None if p_div else anc.r_star // p + 1
    first_empty_col = (s // q if q_div else anc.s_star // q + 1) + 1
    first_empty_row = (r // p if p_div else anc.r_star // p + 1) + 1
    return _Shape(
        p=p, q=q, n=n, r=r, s=s, r_star=anc.r_star, s_star=anc.s_star,
        p_divides=p_div, q_divides=q_div,
        a=p - (r - anc.r_star), b=q - (s - anc.s_star),
        big_col=big_col, big_row=big_row,
        full_bands=anc.r_star // p, full_stacks=anc.s_star // q,
        empty_big_cols=tuple(range(first_empty_col, p + 1)),
        empty_big_rows=tuple(range(first_empty_row, q + 1)),
    )


def _band_rows(shape: _Shape, alpha: int) -> list[int]:
    if alpha <= shape.full_bands:
        return list(range((alpha - 1) * shape.p + 1, alpha * shape.p + 1))
    return list(range(shape.r_star + 1, shape.r + 1))


def _stack_cols(shape: _Shape, beta: int) -> list[int]:
    if beta <= shape.full_stacks:
        return list(range((beta - 1) * shape.q + 1, beta * shape.q + 1))
    return list(range(shape.s_star + 1, shape.s + 1))


def _side_cell_content(grid: PartialGrid, shape: _Shape, alpha: int) -> set[int]:
    """Preassigned symbols of big cell (alpha, partial big column)."""
    out: set[int] = set()
    for i in _band_rows(shape, alpha):
        for j in range(shape.s_star + 1, shape.s + 1):
            v = grid.at(i, j)
            if v is not None:
                out.add(v)
    return out


def _bottom_cell_content(grid: PartialGrid, shape: _Shape, beta: int) -> set[int]:
    """Preassigned symbols of big cell (partial big row, beta)."""
    out: set[int] = set()
    for i in range(shape.r_star + 1, shape.r + 1):
        for j in _stack_cols(shape, beta):
            v = grid.at(i, j)
            if v is not None:
                out.add(v)
    return out


def side_graph(grid: PartialGrid, alpha: int, *, strengthen: bool = True) -> BipartiteMultigraph:
    """Replicated row-versus-symbol graph for one band of the partial big column.

    Each row of the band appears q - (s - s*) times; a replica is joined to
    symbol j when j is absent from that row and (with the strengthened rule)
    absent from the band's partially covered big cell.
    """
    shape = _shape(grid)
    if shape.q_divides:
        raise ValueError("side graphs exist only when q does not divide s")
    corner = shape.full_bands + 1
    if not (1 <= alpha <= shape.full_bands or (alpha == corner and not shape.p_divides)):
        raise ValueError(f"band index {alpha} out of range")
    rows = _band_rows(shape, alpha)
    cell_content = _side_cell_content(grid, shape, alpha) if strengthen else set()
    left = tuple(("row", i, c) for i in rows for c in range(1, shape.b + 1))
    right = tuple(range(1, shape.n + 1))
    edges = []
    for li, (_, i, _) in enumerate(left):
        present = grid.row_symbols(i)
        for j in range(1, shape.n + 1):
            if j not in present and j not in cell_content:
                edges.append((li, j - 1))
    return BipartiteMultigraph(left, right, tuple(edges))


def bottom_graph(grid: PartialGrid, beta: int, *, strengthen: bool = True) -> BipartiteMultigraph:
    """Column mirror of side_graph for one stack of the partial big row."""
    shape = _shape(grid)
    if shape.p_divides:
        raise ValueError("bottom graphs exist only when p does not divide r")
    corner = shape.full_stacks + 1
    if not (1 <= beta <= shape.full_stacks or (beta == corner and not shape.q_divides)):
        raise ValueError(f"stack index {beta} out of range")
    cols = _stack_cols(shape, beta)
    cell_content = _bottom_cell_content(grid, shape, beta) if strengthen else set()
    left = tuple(("col", j, c) for j in cols for c in range(1, shape.a + 1))
    right = tuple(range(1, shape.n + 1))
    edges = []
    for li, (_, j, _) in enumerate(left):
        present = grid.col_symbols(j)
        for k in range(1, shape.n + 1):
            if k not in present and k not in cell_content:
                edges.append((li, k - 1))
    return BipartiteMultigraph(left, right, tuple(edges))


def row_coverage_graph(grid: PartialGrid, symbol: int) -> BipartiteMultigraph:
    """Placement options for one symbol across the leftover rows.

    Left vertices are the rows below the box-aligned part that miss the
    symbol; right vertices are the empty big columns plus, when the corner
    big cell exists and does not already hold the symbol, one corner slot.
    A saturating matching is necessary for completability because the
    symbol must appear in each such row exactly once, at most once per big
    cell of the leftover band.
    """
    shape = _shape(grid)
    rows = [i for i in range(shape.r_star + 1, shape.r + 1)
            if symbol not in grid.row_symbols(i)]
    corner_ok = (not shape.q_divides
                 and symbol not in _side_cell_content(grid, shape, shape.full_bands + 1))
    right: list = [("bigcol", J) for J in shape.empty_big_cols]
    if corner_ok:
        right.append(("corner",))
    left = tuple(("row", i) for i in rows)
    edges = [(li, ri) for li in range(len(left)) for ri in range(len(right))]
    return BipartiteMultigraph(left, tuple(right), tuple(edges))


def col_coverage_graph(grid: PartialGrid, symbol: int) -> BipartiteMultigraph:
    """Column mirror of row_coverage_graph."""
    shape = _shape(grid)
    cols = [j for j in range(shape.s_star + 1, shape.s + 1)
            if symbol not in grid.col_symbols(j)]
    corner_ok = (not shape.p_divides
                 and symbol not in _bottom_cell_content(grid, shape, shape.full_stacks + 1))
    right: list = [("bigrow", I) for I in shape.empty_big_rows]
    if corner_ok:
        right.append(("corner",))
    left = tuple(("col", j) for j in cols)
    edges = [(li, ri) for li in range(len(left)) for ri in range(len(right))]
    return BipartiteMultigraph(left, tuple(right), tuple(edges))


def _fills_from_matching(graph: BipartiteMultigraph, m: Matching) -> dict[int, list[int]]:
    """Group matched symbols by the row or column their replicas stand for."""
    fills: dict[int, list[int]] = {}
    for li, ri in m.pairs:
        _, index, _ = graph.left_labels[li]
        fills.setdefault(index, []).append(graph.right_labels[ri])
    return {k: sorted(v) for k, v in fills.items()}


def plan_medium_cells(grid: PartialGrid) -> Union[MediumCellPlan, Obstruction]:
    """Fill every partially covered big cell, or certify that none can work.

    Full bands and stacks are handled by independent saturating matchings.
    The doubly covered corner big cell takes both a horizontal and a
    vertical share; those are found together as one replica matching so a
    symbol is never claimed twice, and symbols that every placement count
    forces into the corner are matched first.
    """
    shape = _shape(grid)
    if shape.p == 1 or shape.q == 1:
        raise ValueError("medium-cell planning needs p >= 2 and q >= 2")
    plan = MediumCellPlan()

    if not shape.q_divides:
        for alpha in range(1, shape.full_bands + 1):
            g = side_graph(grid, alpha)
            res = saturating_matching(g)
            if isinstance(res, HallViolator):
                return Obstruction("side-matching", res, kind="side-alpha", index=alpha)
            for i, syms in _fills_from_matching(g, res).items():
                plan.horizontal[(alpha, i - (alpha - 1) * shape.p)] = tuple(syms)

    if not shape.p_divides:
        for beta in range(1, shape.full_stacks + 1):
            g = bottom_graph(grid, beta)
            res = saturating_matching(g)
            if isinstance(res, HallViolator):
                return Obstruction("bottom-matching", res, kind="bottom-beta", index=beta)
            for j, syms in _fills_from_matching(g, res).items():
                plan.vertical[(beta, j - (beta - 1) * shape.q)] = tuple(syms)

    # Per-symbol placement counts across the leftover rows and columns.
    must_h: list[int] = []
    must_v: list[int] = []
    if not shape.p_divides:
        for k in range(1, shape.n + 1):
            g = row_coverage_graph(grid, k)
            deficit = g.left_count - g.right_count
            if deficit > 0:
                res = saturating_matching(g)
                return Obstruction("side-matching", res, kind="row-coverage", symbol=k)
            if deficit == 0 and not shape.q_divides and g.left_count > len(shape.empty_big_cols):
                must_h.append(k)
    if not shape.q_divides:
        for k in range(1, shape.n + 1):
            g = col_coverage_graph(grid, k)
            deficit = g.left_count - g.right_count
            if deficit > 0:
                res = saturating_matching(g)
                return Obstruction("bottom-matching", res, kind="col-coverage", symbol=k)
            if deficit == 0 and not shape.p_divides and g.left_count > len(shape.empty_big_rows):
                must_v.append(k)

    if not shape.p_divides and not shape.q_divides:
        clash = sorted(set(must_h) & set(must_v))
        if clash:
            return Obstruction("corner-conflict", clash[0], kind="corner-double-must",
                               symbol=clash[0])
        corner = _solve_corner(grid, shape, must_h, must_v)
        if isinstance(corner, Obstruction):
            return corner
        h_fills, v_fills = corner
        corner_alpha = shape.full_bands + 1
        corner_beta = shape.full_stacks + 1
        for i, syms in h_fills.items():
            plan.horizontal[(corner_alpha, i - shape.r_star)] = tuple(syms)
        for j, syms in v_fills.items():
            plan.vertical[(corner_beta, j - shape.s_star)] = tuple(syms)

    return plan


def _corner_slot_graph(grid: PartialGrid, shape: _Shape,
                       must_h: Iterable[int] = (),
                       must_v: Iterable[int] = ()) -> BipartiteMultigraph:
    """Corner big cell slots (row and column replicas) versus symbols.

    A symbol whose placement counts force it into the row (column) share
    keeps only its row-slot (column-slot) edges: any completion places it
    on that side, so dropping the other side never loses a solution, and it
    stops augmenting paths from rerouting the symbol across sides.
    """
    pre = _side_cell_content(grid, shape, shape.full_bands + 1)
    h_only = set(must_h)
    v_only = set(must_v)
    left: list = []
    for i in range(shape.r_star + 1, shape.r + 1):
        left.extend(("h", i, c) for c in range(1, shape.b + 1))
    for j in range(shape.s_star + 1, shape.s + 1):
        left.extend(("v", j, c) for c in range(1, shape.a + 1))
    right = tuple(range(1, shape.n + 1))
    edges = []
    for li, slot in enumerate(left):
        if slot[0] == "h":
            present = grid.row_symbols(slot[1])
            banned = v_only
        else:
            present = grid.col_symbols(slot[1])
            banned = h_only
        for k in range(1, shape.n + 1):
            if k not in present and k not in pre and k not in banned:
                edges.append((li, k - 1))
    return BipartiteMultigraph(tuple(left), right, tuple(edges))


def _corner_must_graph(grid: PartialGrid, shape: _Shape, must_h: list[int],
                       must_v: list[int]) -> BipartiteMultigraph:
    """Forced corner symbols versus the slots that can host them."""
    slots = _corner_slot_graph(grid, shape, must_h, must_v)
    pre = _side_cell_content(grid, shape, shape.full_bands + 1)
    left = tuple([("must-h", k) for k in sorted(must_h)]
                 + [("must-v", k) for k in sorted(must_v)])
    edges = []
    for li, (tag, k) in enumerate(left):
        want = "h" if tag == "must-h" else "v"
        for si, slot in enumerate(slots.left_labels):
            if slot[0] != want:
                continue
            present = grid.row_symbols(slot[1]) if want == "h" else grid.col_symbols(slot[1])
            if k not in present and k not in pre:
                edges.append((li, si))
    return BipartiteMultigraph(left, slots.left_labels, tuple(edges))


def _solve_corner(grid: PartialGrid, shape: _Shape, must_h: list[int], must_v: list[int]):
    """One matching for both corner directions; returns (h_fills, v_fills)."""
    slot_graph = _corner_slot_graph(grid, shape, must_h, must_v)

    seed: list[tuple[int, int]] = []
    if must_h or must_v:
        must_graph = _corner_must_graph(grid, shape, must_h, must_v)
        res = saturating_matching(must_graph)
        if isinstance(res, HallViolator):
            return Obstruction("corner-conflict", res, kind="corner-must")
        for mi, si in res.pairs:
            _, k = must_graph.left_labels[mi]
            seed.append((si, k - 1))

    full = extend_matching(slot_graph, seed)
    if len(full.pairs) < slot_graph.left_count:
        violator = _violator_from_matching(slot_graph, full)
        return Obstruction("corner-conflict", violator, kind="corner-flow")

    h_fills: dict[int, list[int]] = {}
    v_fills: dict[int, list[int]] = {}
    for si, ri in full.pairs:
        tag, index, _ = slot_graph.left_labels[si]
        (h_fills if tag == "h" else v_fills).setdefault(index, []).append(ri + 1)
    return ({i: sorted(v) for i, v in h_fills.items()},
            {j: sorted(v) for j, v in v_fills.items()})


def _extended_contents(grid: PartialGrid, shape: _Shape,
                       plan: MediumCellPlan) -> tuple[list[set[int]], list[set[int]]]:
    """Row and column symbol sets of the grid with the plan applied (1-based)."""
    rowsyms = [set() for _ in range(shape.r + 1)]
    colsyms = [set() for _ in range(shape.s + 1)]
    for i, j, v in grid.filled():
        rowsyms[i].add(v)
        colsyms[j].add(v)
    for (alpha, x), syms in plan.horizontal.items():
        i = (alpha - 1) * shape.p + x if alpha <= shape.full_bands else shape.r_star + x
        rowsyms[i].update(syms)
    for (beta, y), syms in plan.vertical.items():
        j = (beta - 1) * shape.q + y if beta <= shape.full_stacks else shape.s_star + y
        colsyms[j].update(syms)
    return rowsyms, colsyms


def _distribute_axis(members: list[int], contents: list[set[int]], block_mult: dict[int, int],
                     targets: tuple[int, ...], n: int, per_member: int,
                     block_label: str) -> tuple[dict, dict]:
    """Spread missing symbols of rows (or columns) over empty big lines.

    members are row (column) indices with their current symbol sets in
    contents; block_mult gives the leftover block's per-symbol multiplicity.
    An equitable coloring with one color per target guarantees each member
    gets per_member symbols per target and each symbol lands exactly once
    per target across the group.
    """
    fills: dict[tuple[int, int], list[int]] = {}
    block: dict[int, list[int]] = {t: [] for t in targets}
    if not targets:
        for m in members:
            if len(contents[m]) != n:
                raise RuntimeError("no room left but symbols remain unplaced")
        if any(block_mult.values()):
            raise RuntimeError("leftover block multiplicity with no empty lines")
        return fills, {}
    left: list = [("m", m) for m in members]
    if block_mult:
        left.append((block_label,))
    edges = []
    for li, lab in enumerate(left):
        if lab[0] == "m":
            for k in range(1, n + 1):
                if k not in contents[lab[1]]:
                    edges.append((li, k - 1))
        else:
            for k in range(1, n + 1):
                for _ in range(block_mult.get(k, 0)):
                    edges.append((li, k - 1))
    graph = BipartiteMultigraph(tuple(left), tuple(range(1, n + 1)), tuple(edges))
    coloring = equitable_edge_coloring(graph, len(targets))
    for e, (li, ri) in enumerate(graph.edges):
        target = targets[coloring.color_of[e] - 1]
        lab = graph.left_labels[li]
        if lab[0] == "m":
            fills.setdefault((lab[1], target), []).append(ri + 1)
        else:
            block[target].append(ri + 1)
    for (m, t), syms in fills.items():
        if len(syms) != per_member:
            raise RuntimeError(f"member {m} got {len(syms)} symbols for line {t}")
    return fills, block


def distribute_free(grid: PartialGrid, plan: MediumCellPlan) -> Distribution:
    """Assign every remaining missing symbol to an empty big column and row.

    Failures here indicate a bug: plan_medium_cells has already certified
    the per-symbol placement counts that make these colorings work out.
    """
    shape = _shape(grid)
    rowsyms, colsyms = _extended_contents(grid, shape, plan)
    dist = Distribution()

    targets_j = shape.empty_big_cols
    for alpha in range(1, shape.full_bands + 1):
        rows = _band_rows(shape, alpha)
        fills, _ = _distribute_axis(rows, rowsyms, {}, targets_j, shape.n,
                                    shape.q, "ablock")
        for key, syms in fills.items():
            dist.row_fills[key] = tuple(sorted(syms))
    if not shape.p_divides:
        rows = list(range(shape.r_star + 1, shape.r + 1))
        mult: dict[int, int] = {}
        for k in range(1, shape.n + 1):
            missing = sum(1 for i in rows if k not in rowsyms[i])
            m_hat = len(targets_j) - missing
            if m_hat < 0:
                raise RuntimeError(f"symbol {k} misses more rows than there are empty big columns")
            mult[k] = m_hat
        fills, block = _distribute_axis(rows, rowsyms, mult, targets_j, shape.n,
                                        shape.q, "ablock")
        for key, syms in fills.items():
            dist.row_fills[key] = tuple(sorted(syms))
        for target, syms in block.items():
            dist.block_row_fills[target] = tuple(sorted(syms))

    targets_i = shape.empty_big_rows
    for beta in range(1, shape.full_stacks + 1):
        cols = _stack_cols(shape, beta)
        fills, _ = _distribute_axis(cols, colsyms, {}, targets_i, shape.n,
                                    shape.p, "bblock")
        for key, syms in fills.items():
            dist.col_fills[key] = tuple(sorted(syms))
    if not shape.q_divides:
        cols = list(range(shape.s_star + 1, shape.s + 1))
        mult = {}
        for k in range(1, shape.n + 1):
            missing = sum(1 for j in cols if k not in colsyms[j])
            m_hat = len(targets_i) - missing
            if m_hat < 0:
                raise RuntimeError(f"symbol {k} misses more columns than there are empty big rows")
            mult[k] = m_hat
        fills, block = _distribute_axis(cols, colsyms, mult, targets_i, shape.n,
                                        shape.p, "bblock")
        for key, syms in fills.items():
            dist.col_fills[key] = tuple(sorted(syms))
        for target, syms in block.items():
            dist.block_col_fills[target] = tuple(sorted(syms))

    return dist


def _outline_axes(shape: _Shape) -> tuple[Composition, Composition, dict, dict]:
    """Row and column compositions plus big line -> outline index maps."""
    row_parts = [1] * shape.r
    row_index: dict[str, dict] = {"ablock": None, "big": {}}
    if not shape.p_divides:
        row_parts.append(shape.a)
        row_index["ablock"] = shape.r + 1
    for I in shape.empty_big_rows:
        row_parts.append(shape.p)
        row_index["big"][I] = len(row_parts)
    col_parts = [1] * shape.s
    col_index: dict[str, dict] = {"bblock": None, "big": {}}
    if not shape.q_divides:
        col_parts.append(shape.b)
        col_index["bblock"] = shape.s + 1
    for J in shape.empty_big_cols:
        col_parts.append(shape.q)
        col_index["big"][J] = len(col_parts)
    return tuple(row_parts), tuple(col_parts), row_index, col_index


def assemble_outline(grid: PartialGrid, plan: MediumCellPlan,
                     dist: Distribution) -> Union[OutlineLatinSquare, Obstruction]:
    """Lay the rectangle, medium cells and distributions out as an outline square.

    Unit rows and columns keep the original cells; leftover blocks absorb
    their complements; fully empty big cells take every symbol once.  The
    outline is validated before it is returned.
    """
    shape = _shape(grid)
    row_parts, col_parts, row_index, col_index = _outline_axes(shape)
    cells: dict[tuple[int, int], list[int]] = {}

    def add(oi: int, oj: int, symbols) -> None:
        cells.setdefault((oi, oj), []).extend(symbols)

    for i, j, v in grid.filled():
        add(i, j, (v,))
    for (alpha, x), syms in plan.horizontal.items():
        i = (alpha - 1) * shape.p + x if alpha <= shape.full_bands else shape.r_star + x
        add(i, col_index["bblock"], syms)
    for (beta, y), syms in plan.vertical.items():
        j = (beta - 1) * shape.q + y if beta <= shape.full_stacks else shape.s_star + y
        add(row_index["ablock"], j, syms)

    if not shape.p_divides and not shape.q_divides:
        corner_content = set(_side_cell_content(grid, shape, shape.full_bands + 1))
        corner_alpha = shape.full_bands + 1
        corner_beta = shape.full_stacks + 1
        for (alpha, _), syms in plan.horizontal.items():
            if alpha == corner_alpha:
                corner_content.update(syms)
        for (beta, _), syms in plan.vertical.items():
            if beta == corner_beta:
                corner_content.update(syms)
        complement = [k for k in range(1, shape.n + 1) if k not in corner_content]
        add(row_index["ablock"], col_index["bblock"], complement)

    for (i, target), syms in dist.row_fills.items():
        add(i, col_index["big"][target], syms)
    for target, syms in dist.block_row_fills.items():
        add(row_index["ablock"], col_index["big"][target], syms)
    for (j, target), syms in dist.col_fills.items():
        add(row_index["big"][target], j, syms)
    for target, syms in dist.block_col_fills.items():
        add(row_index["big"][target], col_index["bblock"], syms)
    for I in shape.empty_big_rows:
        for J in shape.empty_big_cols:
            add(row_index["big"][I], col_index["big"][J], range(1, shape.n + 1))

    grid_cells = tuple(
        tuple(tuple(sorted(cells.get((oi, oj), ()))) for oj in range(1, len(col_parts) + 1))
        for oi in range(1, len(row_parts) + 1)
    )
    outline = OutlineLatinSquare(row_parts, col_parts, (1,) * shape.n, grid_cells)
    report = validate_outline(outline)
    if not report.ok:
        return Obstruction("outline-invalid", report, kind="outline")
    return outline


def complete(grid: PartialGrid) -> Verdict:
    """Extend a fully filled rectangle to a full square, or explain why not.

    Orders with p = 1 or q = 1 reduce to plain latin rectangle completion.
    When p divides r and q divides s no matchings are needed and the
    pipeline always succeeds.
    """
    report = validate_partial(grid)
    if not report.ok:
        return Verdict(False, Obstruction("input-invalid", report, kind="invalid"))
    if not grid.is_fully_filled():
        return Verdict(False, Obstruction("input-invalid", "rectangle is not fully filled",
                                          kind="not-filled"))
    geom = grid.geometry
    if grid.rows > geom.n or grid.cols > geom.n:
        return Verdict(False, Obstruction("input-invalid", "rectangle larger than order",
                                          kind="oversized"))

    if geom.p == 1 or geom.q == 1:
        res = complete_latin_rectangle(grid, geom.n)
        if isinstance(res, Obstruction):
            return Verdict(False, res)
        square = PartialGrid(geom, geom.n, geom.n, res.cells, grid.flavor, None)
        return Verdict(True, square)

    plan = plan_medium_cells(grid)
    if isinstance(plan, Obstruction):
        return Verdict(False, plan)
    dist = distribute_free(grid, plan)
    outline = assemble_outline(grid, plan, dist)
    if isinstance(outline, Obstruction):
        return Verdict(False, outline)
    latin = expand_outline(outline)
    square = PartialGrid(geom, geom.n, geom.n, latin.cells, "sudoku", None)

    final = validate_partial(square)
    if not final.ok:
        raise RuntimeError("expanded square fails validation; construction bug")
    for i, j, v in grid.filled():
        if square.at(i, j) != v:
            raise RuntimeError("expanded square does not extend the input; construction bug")
    return Verdict(True, square)


def decide_completable(grid: PartialGrid) -> Verdict:
    """Same staged pipeline as complete; the verdict is the decision."""
    return complete(grid)


def matchings_exist(grid: PartialGrid, *, strengthen: bool = True) -> bool:
    """Bare matching criterion: every defined side and bottom graph saturates.

    This is the unstaged test (no corner coordination, no placement counts);
    it is exposed for comparing the plain and strengthened edge rules.
    """
    shape = _shape(grid)
    if not shape.q_divides:
        last = shape.full_bands + (0 if shape.p_divides else 1)
        for alpha in range(1, last + 1):
            res = saturating_matching(side_graph(grid, alpha, strengthen=strengthen))
            if isinstance(res, HallViolator):
                return False
    if not shape.p_divides:
        last = shape.full_stacks + (0 if shape.q_divides else 1)
        for beta in range(1, last + 1):
            res = saturating_matching(bottom_graph(grid, beta, strengthen=strengthen))
            if isinstance(res, HallViolator):
                return False
    return True


def ryser_symbol_counts(grid: PartialGrid, n: int) -> dict[int, int]:
    counts = {k: 0 for k in range(1, n + 1)}
    for _, _, v in grid.filled():
        counts[v] += 1
    return counts


def complete_latin_rectangle(grid: PartialGrid, n: int) -> Union[PartialGrid, Obstruction]:
    """Complete an r x s latin rectangle to an n x n latin square.

    Symbols whose counts sit at the bound r + s - n are deficient: each new
    column must include them, so they are matched into rows first and the
    rest of the column is filled by extending that matching.  Once the
    rectangle is r x n, each further row is a perfect matching between
    columns and their missing symbols.
    """
    r, s = grid.rows, grid.cols
    work = PartialGrid(SudokuGeometry(1, n), r, s, grid.cells, "latin", None)
    report = validate_partial(work)
    if not report.ok or not work.is_fully_filled():
        raise ValueError("input is not a fully filled latin rectangle")

    counts = ryser_symbol_counts(work, n)
    bound = r + s - n
    for k in range(1, n + 1):
        if counts[k] < bound:
            return Obstruction("ryser", k, kind="ryser", symbol=k)

    rows = [list(row) for row in work.cells]
    row_sets = [set(row) for row in rows]
    width = s
    while width < n:
        forced = [k for k in range(1, n + 1) if counts[k] == r + width - n]
        right = tuple(range(1, r + 1))
        seed: list[tuple[int, int]] = []
        if forced:
            g_must = BipartiteMultigraph(
                tuple(("sym", k) for k in forced), right,
                tuple((li, i - 1) for li, k in enumerate(forced)
                      for i in range(1, r + 1) if k not in row_sets[i - 1]))
            res = saturating_matching(g_must)
            if isinstance(res, HallViolator):
                raise RuntimeError("deficient symbols unmatchable although the bound holds")
            seed = [(ri, li) for li, ri in res.pairs]
        g_col = BipartiteMultigraph(
            tuple(range(1, r + 1)), tuple(range(1, n + 1)),
            tuple((i - 1, k - 1) for i in range(1, r + 1)
                  for k in range(1, n + 1) if k not in row_sets[i - 1]))
        seed_pairs = [(si, forced[ki] - 1) for si, ki in seed]
        m = extend_matching(g_col, seed_pairs)
        if len(m.pairs) < r:
            raise RuntimeError("column extension failed although the bound holds")
        width += 1
        for i_idx, k_idx in m.pairs:
            symbol = k_idx + 1
            rows[i_idx].append(symbol)
            row_sets[i_idx].add(symbol)
            counts[symbol] += 1

    col_sets = [set() for _ in range(n)]
    for row in rows:
        for j, v in enumerate(row):
            col_sets[j].add(v)
    height = r
    while height < n:
        g_row = BipartiteMultigraph(
            tuple(range(1, n + 1)), tuple(range(1, n + 1)),
            tuple((j, k - 1) for j in range(n)
                  for k in range(1, n + 1) if k not in col_sets[j]))
        m = saturating_matching(g_row)
        if isinstance(m, HallViolator):
            raise RuntimeError("row extension failed although the bound holds")
        new_row = [0] * n
        for j_idx, k_idx in m.pairs:
            new_row[j_idx] = k_idx + 1
            col_sets[j_idx].add(k_idx + 1)
        rows.append(new_row)
        height += 1

    return PartialGrid(SudokuGeometry(1, n), n, n,
                       tuple(tuple(row) for row in rows), "latin", None)


def verify_obstruction(grid: PartialGrid, ob: Obstruction) -> bool:
    """Independently recheck an obstruction against the grid it came from."""
    if ob.stage == "input-invalid":
        return not validate_partial(grid).ok or not grid.is_fully_filled()
    if ob.kind == "side-alpha":
        return verify_violator(side_graph(grid, ob.index), ob.detail)
    if ob.kind == "bottom-beta":
        return verify_violator(bottom_graph(grid, ob.index), ob.detail)
    if ob.kind == "row-coverage":
        return verify_violator(row_coverage_graph(grid, ob.symbol), ob.detail)
    if ob.kind == "col-coverage":
        return verify_violator(col_coverage_graph(grid, ob.symbol), ob.detail)
    if ob.kind == "corner-double-must":
        shape = _shape(grid)
        k = ob.symbol
        g_row = row_coverage_graph(grid, k)
        g_col = col_coverage_graph(grid, k)
        return (g_row.left_count == g_row.right_count
                and g_row.left_count > len(shape.empty_big_cols)
                and g_col.left_count == g_col.right_count
                and g_col.left_count > len(shape.empty_big_rows))
    if ob.kind == "corner-must":
        shape = _shape(grid)
        must_h, must_v = _recompute_musts(grid, shape)
        return verify_violator(_corner_must_graph(grid, shape, must_h, must_v), ob.detail)
    if ob.kind == "corner-flow":
        shape = _shape(grid)
        must_h, must_v = _recompute_musts(grid, shape)
        return verify_violator(_corner_slot_graph(grid, shape, must_h, must_v),
                               ob.detail)
    if ob.kind == "ryser":
        counts = ryser_symbol_counts(grid, grid.n)
        return counts[ob.symbol] < grid.rows + grid.cols - grid.n
    if ob.stage == "outline-invalid":
        return isinstance(ob.detail, ValidationReport) and not ob.detail.ok
    return False


def _recompute_musts(grid: PartialGrid, shape: _Shape) -> tuple[list[int], list[int]]:
    must_h, must_v = [], []
    for k in range(1, shape.n + 1):
        g = row_coverage_graph(grid, k)
        if g.left_count == g.right_count and g.left_count > len(shape.empty_big_cols):
            must_h.append(k)
        g = col_coverage_graph(grid, k)
        if g.left_count == g.right_count and g.left_count > len(shape.empty_big_rows):
            must_v.append(k)
    return must_h, must_v
