"""Hall's Condition machinery for grids and graphs.

The independence number alpha(L, sigma, Q) is the size of a largest set of
cells of Q, pairwise in distinct rows and columns (and big cells or parts,
depending on flavor), all of whose lists contain sigma.  Hall's Inequality
for Q asks that these numbers summed over all symbols reach |Q|; Hall's
Condition asks this for every subset.  Checking is exact and exhaustive,
which is why it is gated to desk-scale inputs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .bipartite import BipartiteMultigraph, max_matching
from .grid import PartialGrid, big_cell_of

Cell = tuple[int, int]


@dataclass(frozen=True)
class HallReport:
    holds: bool
    witness: Optional[tuple[tuple[Cell, ...], int, int]]  # (subset, lhs, size)
    subsets_checked: int
    gave_up: bool


@dataclass(frozen=True)
class RyserReport:
    counts: dict[int, int]
    bound: int
    ok: bool
    failing: tuple[int, ...]


def _flavor_of(grid: PartialGrid, flavor: Optional[str]) -> str:
    chosen = flavor if flavor is not None else grid.flavor
    if chosen not in ("latin", "sudoku", "gerechte"):
        raise ValueError(f"unknown flavor {chosen!r}")
    if chosen == "gerechte" and grid.partition is None:
        raise ValueError("gerechte flavor needs a partition")
    return chosen


def _unit_key(grid: PartialGrid, flavor: str, r: int, c: int):
    if flavor == "sudoku":
        return big_cell_of(grid.geometry, r, c)
    if flavor == "gerechte":
        return grid.part_id(r, c)
    return None


def list_assignment(grid: PartialGrid, flavor: Optional[str] = None) -> dict[Cell, frozenset[int]]:
    """Candidate lists: the symbol itself for filled cells, exclusions otherwise."""
    flavor = _flavor_of(grid, flavor)
    n = grid.n
    lists: dict[Cell, frozenset[int]] = {}
    for r in range(1, grid.rows + 1):
        for c in range(1, grid.cols + 1):
            v = grid.at(r, c)
            if v is not None:
                lists[(r, c)] = frozenset((v,))
                continue
            excluded = grid.row_symbols(r) | grid.col_symbols(c)
            if flavor == "sudoku":
                br, bc = big_cell_of(grid.geometry, r, c)
                excluded |= grid.big_cell_symbols(br, bc)
            elif flavor == "gerechte":
                excluded |= grid.part_symbols(grid.part_id(r, c))
            lists[(r, c)] = frozenset(k for k in range(1, n + 1) if k not in excluded)
    return lists


def _alpha_exact_masks(order: list[tuple[int, int, int]], bound_gate: Optional[int] = None) -> int:
    """Largest conflict-free subset given (row_bit, col_bit, unit_bit) triples."""
    best = 0
    total = len(order)

    def bb(idx: int, used_r: int, used_c: int, used_u: int, size: int) -> None:
        nonlocal best
        if size > best:
            best = size
        if idx == total or size + (total - idx) <= best:
            return
        rb, cb, ub = order[idx]
        if not (used_r & rb) and not (used_c & cb) and not (used_u & ub):
            bb(idx + 1, used_r | rb, used_c | cb, used_u | ub, size + 1)
        bb(idx + 1, used_r, used_c, used_u, size)

    bb(0, 0, 0, 0, 0)
    return best


def alpha_cells(grid: PartialGrid, sigma: int, cells: Iterable[Cell],
                flavor: Optional[str] = None, max_exact: int = 26) -> int:
    """Exact maximum number of independent cells of Q whose lists hold sigma."""
    flavor = _flavor_of(grid, flavor)
    lists = list_assignment(grid, flavor)
    unit_ids: dict = {}
    order = []
    for (r, c) in sorted(set(cells)):
        if sigma not in lists[(r, c)]:
            continue
        unit = _unit_key(grid, flavor, r, c)
        if unit is not None and unit not in unit_ids:
            unit_ids[unit] = len(unit_ids)
        order.append((1 << r, 1 << c, 0 if unit is None else 1 << unit_ids[unit]))
    if len(order) > max_exact:
        raise ValueError(f"{len(order)} candidate cells exceed the exact-search gate")
    return _alpha_exact_masks(order)


def hall_inequality(grid: PartialGrid, cells: Iterable[Cell],
                    flavor: Optional[str] = None) -> tuple[int, int, bool]:
    """(sum of alphas, |Q|, whether the inequality holds) for one subset."""
    flavor = _flavor_of(grid, flavor)
    subset = sorted(set(cells))
    lhs = sum(alpha_cells(grid, sigma, subset, flavor) for sigma in range(1, grid.n + 1))
    return lhs, len(subset), lhs >= len(subset)


def hall_condition(grid: PartialGrid, flavor: Optional[str] = None,
                   gate: int = 18) -> HallReport:
    """Check Hall's Inequality over every subset of the empty cells.

    Filled cells can be dropped: the inequality for any subset holds exactly
    when it holds for its empty part.  Enumeration is depth first in
    lexicographic order, so a reported witness is the lexicographically
    first failing subset.  More empty cells than the gate means giving up.
    """
    flavor = _flavor_of(grid, flavor)
    n = grid.n
    empties = sorted(grid.empty_cells())
    if len(empties) > gate:
        return HallReport(True, None, 0, True)
    lists = list_assignment(grid, flavor)

    unit_ids: dict = {}
    info = []
    for (r, c) in empties:
        unit = _unit_key(grid, flavor, r, c)
        if unit is not None and unit not in unit_ids:
            unit_ids[unit] = len(unit_ids)
        info.append((1 << r, 1 << c, 0 if unit is None else 1 << unit_ids[unit],
                     lists[(r, c)]))

    per_symbol: list[list[int]] = [[] for _ in range(n + 1)]
    symbol_mask = [0] * (n + 1)
    for idx, (_, _, _, lst) in enumerate(info):
        for sigma in lst:
            per_symbol[sigma].append(idx)
            symbol_mask[sigma] |= 1 << idx

    memo: dict[tuple[int, int], int] = {}

    def exact_alpha(sigma: int, chosen_mask: int) -> int:
        key = (sigma, chosen_mask & symbol_mask[sigma])
        cached = memo.get(key)
        if cached is not None:
            return cached
        order = [(info[i][0], info[i][1], info[i][2])
                 for i in per_symbol[sigma] if chosen_mask & (1 << i)]
        val = _alpha_exact_masks(order)
        memo[key] = val
        return val

    checked = 0
    chosen: list[int] = []

    def evaluate() -> Optional[tuple[int, int]]:
        size = len(chosen)
        greedy_total = 0
        for sigma in range(1, n + 1):
            used_r = used_c = used_u = 0
            got = 0
            for i in chosen:
                rb, cb, ub, lst = info[i]
                if sigma in lst and not (used_r & rb) and not (used_c & cb) \
                        and not (used_u & ub):
                    used_r |= rb
                    used_c |= cb
                    used_u |= ub
                    got += 1
            greedy_total += got
        if greedy_total >= size:
            return None
        mask = 0
        for i in chosen:
            mask |= 1 << i
        lhs = sum(exact_alpha(sigma, mask) for sigma in range(1, n + 1))
        if lhs >= size:
            return None
        return lhs, size

    def dfs(start: int) -> Optional[tuple[tuple[Cell, ...], int, int]]:
        nonlocal checked
        for i in range(start, len(empties)):
            chosen.append(i)
            checked += 1
            failed = evaluate()
            if failed is not None:
                lhs, size = failed
                return tuple(empties[j] for j in chosen), lhs, size
            found = dfs(i + 1)
            if found is not None:
                return found
            chosen.pop()
        return None

    checked += 1  # the empty subset, trivially fine
    witness = dfs(0)
    if witness is None:
        return HallReport(True, None, checked, False)
    return HallReport(False, witness, checked, False)


def ryser_counts(grid: PartialGrid, n: int) -> RyserReport:
    """Symbol occurrence counts of a rectangle against the r + s - n bound."""
    counts = {k: 0 for k in range(1, n + 1)}
    for _, _, v in grid.filled():
        counts[v] += 1
    bound = grid.rows + grid.cols - n
    failing = tuple(k for k in range(1, n + 1) if counts[k] < bound)
    return RyserReport(counts, bound, not failing, failing)


def _alpha_latin_matching(grid: PartialGrid, sigma: int,
                          lists: dict[Cell, frozenset[int]]) -> int:
    """Latin-flavor alpha over all cells via row-column maximum matching."""
    cells = [cell for cell, lst in lists.items() if sigma in lst]
    rows = sorted({r for r, _ in cells})
    cols = sorted({c for _, c in cells})
    ridx = {r: i for i, r in enumerate(rows)}
    cidx = {c: i for i, c in enumerate(cols)}
    edges = tuple((ridx[r], cidx[c]) for r, c in sorted(cells))
    g = BipartiteMultigraph(tuple(rows), tuple(cols), edges)
    return len(max_matching(g).pairs)


def whole_square_inequality(grid: PartialGrid, flavor: Optional[str] = None,
                            gate: int = 30) -> tuple[int, int, bool]:
    """Hall's Inequality for the set of all cells of the grid.

    In the latin flavor each alpha is a row-column matching number, so any
    order is fine; the sudoku and gerechte flavors fall back to exact search
    and respect the gate.
    """
    flavor = _flavor_of(grid, flavor)
    lists = list_assignment(grid, flavor)
    total = grid.rows * grid.cols
    if flavor == "latin":
        lhs = sum(_alpha_latin_matching(grid, sigma, lists)
                  for sigma in range(1, grid.n + 1))
        return lhs, total, lhs >= total
    all_cells = [(r, c) for r in range(1, grid.rows + 1) for c in range(1, grid.cols + 1)]
    lhs = sum(alpha_cells(grid, sigma, all_cells, flavor, max_exact=gate)
              for sigma in range(1, grid.n + 1))
    return lhs, total, lhs >= total


def hall_condition_graph(vertices: Iterable, edges: Iterable[tuple], lists: dict,
                         gate: int = 18) -> HallReport:
    """Hall's Condition for a list-assigned simple graph.

    Every induced subgraph (vertex subset) must satisfy the inequality with
    alpha taken over independent sets of vertices listing the color.
    """
    verts = list(vertices)
    if len(verts) > gate:
        return HallReport(True, None, 0, True)
    index = {v: i for i, v in enumerate(verts)}
    adj = [0] * len(verts)
    for u, w in edges:
        iu, iw = index[u], index[w]
        adj[iu] |= 1 << iw
        adj[iw] |= 1 << iu
    colors = sorted({c for v in verts for c in lists.get(v, ())})
    vlists = [frozenset(lists.get(v, ())) for v in verts]

    def alpha(color, chosen: list[int]) -> int:
        cand = [i for i in chosen if color in vlists[i]]
        best = 0

        def bb(idx: int, used: int, size: int) -> None:
            nonlocal best
            if size > best:
                best = size
            if idx == len(cand) or size + (len(cand) - idx) <= best:
                return
            i = cand[idx]
            if not (used & adj[i]):
                bb(idx + 1, used | (1 << i), size + 1)
            bb(idx + 1, used, size)

        bb(0, 0, 0)
        return best

    checked = 1
    chosen: list[int] = []

    def dfs(start: int):
        nonlocal checked
        for i in range(start, len(verts)):
            chosen.append(i)
            checked += 1
            lhs = sum(alpha(color, chosen) for color in colors)
            if lhs < len(chosen):
                return tuple(verts[j] for j in chosen), lhs, len(chosen)
            found = dfs(i + 1)
            if found is not None:
                return found
            chosen.pop()
        return None

    witness = dfs(0)
    if witness is None:
        return HallReport(True, None, checked, False)
    return HallReport(False, witness, checked, False)
