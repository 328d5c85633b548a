"""Bipartite multigraphs: equitable edge-coloring, matching, Hall certificates.

Everything here is deterministic for a fixed input ordering: vertices and
edges are always visited in index order, so repeated runs return identical
colorings and matchings.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Union


@dataclass(frozen=True)
class BipartiteMultigraph:
    """Two vertex sets joined by a multiset of edges (parallel edges allowed)."""

    left_labels: tuple
    right_labels: tuple
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        nl, nr = len(self.left_labels), len(self.right_labels)
        for u, w in self.edges:
            if not (0 <= u < nl and 0 <= w < nr):
                raise ValueError(f"edge ({u}, {w}) references a missing vertex")

    @property
    def left_count(self) -> int:
        return len(self.left_labels)

    @property
    def right_count(self) -> int:
        return len(self.right_labels)

    def left_degree(self, u: int) -> int:
        return sum(1 for a, _ in self.edges if a == u)

    def right_degree(self, w: int) -> int:
        return sum(1 for _, b in self.edges if b == w)

    def neighbors_of_left(self, u: int) -> list[int]:
        """Distinct right neighbors of u, ascending."""
        return sorted({b for a, b in self.edges if a == u})


def graph_from_adjacency(left_labels: Iterable, right_labels: Iterable,
                         adjacency: dict) -> BipartiteMultigraph:
    """Convenience builder: adjacency maps left label -> iterable of right labels."""
    left = tuple(left_labels)
    right = tuple(right_labels)
    rindex = {lab: i for i, lab in enumerate(right)}
    edges = []
    for i, lab in enumerate(left):
        for rlab in adjacency.get(lab, ()):
            edges.append((i, rindex[rlab]))
    return BipartiteMultigraph(left, right, tuple(edges))


@dataclass(frozen=True)
class EdgeColoring:
    """Assignment of one color in 1..k to every edge (by edge position)."""

    k: int
    color_of: tuple[int, ...]

    def edges_of_color(self, color: int) -> list[int]:
        return [e for e, c in enumerate(self.color_of) if c == color]


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]

    def left_vertices(self) -> set[int]:
        return {u for u, _ in self.pairs}

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)


@dataclass(frozen=True)
class HallViolator:
    """A set of left vertices whose joint neighborhood is too small."""

    left_subset: frozenset[int]
    neighborhood: frozenset[int]


def is_equitable(g: BipartiteMultigraph, coloring: EdgeColoring) -> bool:
    """Direct definitional check: at every vertex all color counts differ by <= 1."""
    if len(coloring.color_of) != len(g.edges):
        return False
    if any(not (1 <= c <= coloring.k) for c in coloring.color_of):
        return False
    for side in (0, 1):
        count = g.left_count if side == 0 else g.right_count
        per_vertex = [[0] * (coloring.k + 1) for _ in range(count)]
        for e, (u, w) in enumerate(g.edges):
            per_vertex[u if side == 0 else w][coloring.color_of[e]] += 1
        for counts in per_vertex:
            cs = counts[1:]
            if max(cs) - min(cs) > 1:
                return False
    return True


def equitable_edge_coloring(g: BipartiteMultigraph, k: int) -> EdgeColoring:
    """Color the edges with k colors so every vertex sees balanced color counts.

    Each vertex is split into copies of degree at most k (full copies take
    exactly k edges), the split graph is properly k-edge-colored by
    alternating-chain recoloring, and copies are merged back.  A full copy
    then sees every color exactly once, so the merged counts at a vertex of
    degree d are floor(d/k) or ceil(d/k).
    """
    if k < 1:
        raise ValueError("color count must be at least 1")
    m = len(g.edges)
    if m == 0:
        return EdgeColoring(k, ())

    # Assign each edge endpoint to a vertex copy in blocks of k.
    copies: dict[tuple[int, int, int], int] = {}
    endpoint = [[0, 0] for _ in range(m)]
    seen: dict[tuple[int, int], int] = {}
    for e, (u, w) in enumerate(g.edges):
        for side, v in ((0, u), (1, w)):
            pos = seen.get((side, v), 0)
            seen[(side, v)] = pos + 1
            key = (side, v, pos // k)
            if key not in copies:
                copies[key] = len(copies)
            endpoint[e][side] = copies[key]

    # Proper k-edge-coloring of the split graph (all degrees <= k).
    used: list[dict[int, int]] = [dict() for _ in range(len(copies))]  # copy -> color -> edge
    color = [0] * m
    for e in range(m):
        cu, cw = endpoint[e]
        free_u = next(c for c in range(1, k + 1) if c not in used[cu])
        free_w = next(c for c in range(1, k + 1) if c not in used[cw])
        if free_u != free_w and free_u in used[cw]:
            _flip_chain(cw, free_u, free_w, used, color, endpoint)
        pick = free_u
        used[cu][pick] = e
        used[cw][pick] = e
        color[e] = pick
    return EdgeColoring(k, tuple(color))


def _flip_chain(start: int, a: int, b: int, used: list[dict[int, int]],
                color: list[int], endpoint: list[list[int]]) -> None:
    """Swap colors a and b along the alternating chain leaving `start` on color a."""
    path = []
    vertex, want = start, a
    while want in used[vertex]:
        e = used[vertex][want]
        path.append(e)
        u0, w0 = endpoint[e]
        vertex = w0 if u0 == vertex else u0
        want = b if want == a else a
    for e in path:
        old = color[e]
        new = b if old == a else a
        for v in endpoint[e]:
            if used[v].get(old) == e:
                del used[v][old]
        color[e] = new
        for v in endpoint[e]:
            used[v][new] = e


def max_matching(g: BipartiteMultigraph) -> Matching:
    """Maximum-cardinality matching (Hopcroft-Karp), deterministic."""
    left_n = g.left_count
    adj = [g.neighbors_of_left(u) for u in range(left_n)]
    match_l: list[Optional[int]] = [None] * left_n
    match_r: list[Optional[int]] = [None] * g.right_count
    dist = [-1] * left_n

    def bfs() -> bool:
        queue = deque()
        for u in range(left_n):
            if match_l[u] is None:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = -1
        found = False
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                nxt = match_r[w]
                if nxt is None:
                    found = True
                elif dist[nxt] == -1:
                    dist[nxt] = dist[u] + 1
                    queue.append(nxt)
        return found

    def dfs(u: int) -> bool:
        for w in adj[u]:
            nxt = match_r[w]
            if nxt is None or (dist[nxt] == dist[u] + 1 and dfs(nxt)):
                match_l[u] = w
                match_r[w] = u
                return True
        dist[u] = -1
        return False

    while bfs():
        for u in range(left_n):
            if match_l[u] is None:
                dfs(u)
    pairs = tuple((u, match_l[u]) for u in range(left_n) if match_l[u] is not None)
    return Matching(pairs)


def extend_matching(g: BipartiteMultigraph,
                    initial: Iterable[tuple[int, int]] = ()) -> Matching:
    """Grow a valid initial matching to a maximum one by augmenting paths.

    Augmentation may reroute which left vertex a right vertex serves but
    never unmatches a matched right vertex, so saturations present in the
    initial matching are preserved on the right side.
    """
    adj = [g.neighbors_of_left(u) for u in range(g.left_count)]
    match_l: list[Optional[int]] = [None] * g.left_count
    match_r: list[Optional[int]] = [None] * g.right_count
    for u, w in initial:
        if match_l[u] is not None or match_r[w] is not None:
            raise ValueError("initial pairs are not a matching")
        if w not in adj[u]:
            raise ValueError(f"initial pair ({u}, {w}) is not an edge")
        match_l[u] = w
        match_r[w] = u

    def augment(u: int, visited: set[int]) -> bool:
        for w in adj[u]:
            if w in visited:
                continue
            visited.add(w)
            if match_r[w] is None or augment(match_r[w], visited):
                match_l[u] = w
                match_r[w] = u
                return True
        return False

    improved = True
    while improved:
        improved = False
        for u in range(g.left_count):
            if match_l[u] is None and augment(u, set()):
                improved = True
    pairs = tuple((u, match_l[u]) for u in range(g.left_count) if match_l[u] is not None)
    return Matching(pairs)


def _violator_from_matching(g: BipartiteMultigraph, m: Matching) -> HallViolator:
    """Certificate extraction: left vertices reachable by alternating paths
    from unmatched left vertices form a deficient set."""
    match_l = {u: None for u in range(g.left_count)}
    match_r: dict[int, int] = {}
    for u, w in m.pairs:
        match_l[u] = w
        match_r[w] = u
    reach_l = {u for u in range(g.left_count) if match_l[u] is None}
    reach_r: set[int] = set()
    queue = deque(sorted(reach_l))
    while queue:
        u = queue.popleft()
        for w in g.neighbors_of_left(u):
            if w in reach_r:
                continue
            reach_r.add(w)
            nxt = match_r.get(w)
            if nxt is not None and nxt not in reach_l:
                reach_l.add(nxt)
                queue.append(nxt)
    return HallViolator(frozenset(reach_l), frozenset(reach_r))


def saturating_matching(g: BipartiteMultigraph) -> Union[Matching, HallViolator]:
    """A matching covering every left vertex, or a deficiency certificate."""
    m = max_matching(g)
    if len(m.pairs) == g.left_count:
        return m
    return _violator_from_matching(g, m)


def verify_violator(g: BipartiteMultigraph, v: HallViolator) -> bool:
    """Recompute the neighborhood of the claimed subset and check deficiency."""
    hood: set[int] = set()
    for u in v.left_subset:
        hood.update(g.neighbors_of_left(u))
    return hood == set(v.neighborhood) and len(hood) < len(v.left_subset)
