"""
Multigraph representation and the elementary graph algorithms the rest of
the package builds on.

Loops count 2 toward a vertex degree but 1 toward the edge count, parallel
edges are kept, and every edge is identified by its stable index.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

from .errors import DisconnectedComponentError, InvalidParameterError
from .unionfind import UnionFind


class MultiGraph:
    """Immutable undirected multigraph on the vertices ``0..n-1``."""

    __slots__ = ("vertex_count", "_edges", "_incident")

    def __init__(
        self, vertex_count: int, edges: Iterable[tuple[int, int]] = ()
    ):
        if vertex_count < 0:
            raise InvalidParameterError(
                f"vertex_count must be nonnegative, got {vertex_count}"
            )
        edge_list: list[tuple[int, int]] = []
        incident: list[list[int]] = [[] for _ in range(vertex_count)]
        for index, (u, v) in enumerate(edges):
            u, v = int(u), int(v)
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise InvalidParameterError(
                    f"edge {index} = ({u}, {v}) has an endpoint outside "
                    f"0..{vertex_count - 1}"
                )
            edge_list.append((u, v))
            incident[u].append(index)
            # a loop lands in the incidence list twice
            incident[v].append(index)
        self.vertex_count = vertex_count
        self._edges = tuple(edge_list)
        self._incident = tuple(tuple(slots) for slots in incident)

    @property
    def edge_count(self) -> int:
        """Number of edges, loops and parallel copies included."""
        return len(self._edges)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """All edges in index order."""
        return self._edges

    def edge(self, index: int) -> tuple[int, int]:
        """Endpoints of edge ``index``."""
        return self._edges[index]

    def degree(self, vertex: int) -> int:
        """Number of edge slots at ``vertex``; a loop contributes 2."""
        return len(self._incident[vertex])

    def degrees(self) -> list[int]:
        """Degree of every vertex."""
        return [len(slots) for slots in self._incident]

    def incident_edges(self, vertex: int) -> tuple[int, ...]:
        """Indices of edges at ``vertex`` (loops listed twice)."""
        return self._incident[vertex]

    def other_end(self, index: int, vertex: int) -> int:
        """The endpoint of edge ``index`` opposite to ``vertex``."""
        u, v = self._edges[index]
        return v if u == vertex else u

    def neighbors(self, vertex: int) -> Iterator[int]:
        """Neighbours with multiplicity, in incidence order."""
        for index in self._incident[vertex]:
            yield self.other_end(index, vertex)

    def adjacency_sets(self) -> list[set[int]]:
        """Simple adjacency: loops dropped, parallel edges collapsed."""
        adjacency: list[set[int]] = [set() for _ in range(self.vertex_count)]
        for u, v in self._edges:
            if u != v:
                adjacency[u].add(v)
                adjacency[v].add(u)
        return adjacency

    def simple_edges(self) -> list[tuple[int, int]]:
        """Sorted distinct non-loop edges as ``(min, max)`` pairs."""
        return sorted({(min(u, v), max(u, v)) for u, v in self._edges if u != v})

    def loop_count(self) -> int:
        """Number of loops."""
        return sum(1 for u, v in self._edges if u == v)

    def multi_edge_count(self) -> int:
        """Number of surplus parallel copies among non-loop edges."""
        non_loops = [(u, v) for u, v in self._edges if u != v]
        return len(non_loops) - len(
            {(min(u, v), max(u, v)) for u, v in non_loops}
        )

    def is_simple(self) -> bool:
        """True if there are neither loops nor parallel edges."""
        seen: set[tuple[int, int]] = set()
        for u, v in self._edges:
            if u == v:
                return False
            key = (u, v) if u < v else (v, u)
            if key in seen:
                return False
            seen.add(key)
        return True

    def has_edge(self, u: int, v: int) -> bool:
        """True if at least one edge joins ``u`` and ``v``."""
        if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
            return False
        return any(
            self.other_end(index, u) == v for index in self._incident[u]
        )

    def induced_subgraph(
        self, vertices: Iterable[int]
    ) -> tuple["MultiGraph", list[int]]:
        """Subgraph on ``vertices`` (relabelled in ascending order).

        Returns the subgraph and the list mapping new labels to old ones.
        """
        keep = sorted(set(vertices))
        relabel = {old: new for new, old in enumerate(keep)}
        edges = [
            (relabel[u], relabel[v])
            for u, v in self._edges
            if u in relabel and v in relabel
        ]
        return MultiGraph(len(keep), edges), keep

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiGraph):
            return NotImplemented
        return (
            self.vertex_count == other.vertex_count
            and self._edges == other._edges
        )

    def __hash__(self) -> int:
        return hash((self.vertex_count, self._edges))

    def __repr__(self) -> str:
        return (
            f"MultiGraph(vertex_count={self.vertex_count}, "
            f"edge_count={self.edge_count})"
        )


@dataclass(frozen=True)
class VertexPath:
    """Ordered list of distinct vertices; consecutive entries are edges."""

    vertices: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidParameterError("path vertices must be distinct")

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertices)

    def edges(self) -> list[tuple[int, int]]:
        """Consecutive vertex pairs."""
        return list(zip(self.vertices, self.vertices[1:]))

    def subpath(self, start: int, stop: int) -> "VertexPath":
        """Vertices at positions ``start..stop-1``."""
        return VertexPath(self.vertices[start:stop])

    def is_anchored_in(self, g: MultiGraph) -> bool:
        """True if every consecutive pair is an edge of ``g``."""
        return all(g.has_edge(u, v) for u, v in self.edges())


@dataclass(frozen=True)
class ExcessReport:
    """Order, size and excess of a connected component."""

    component_id: int
    order: int
    edge_count: int
    excess: int


def connected_components(g: MultiGraph) -> list[set[int]]:
    """Vertex sets of the connected components, ordered by smallest vertex."""
    forest = UnionFind(g.vertex_count)
    for u, v in g.edges:
        forest.union(u, v)
    return [set(members) for members in forest.components()]


def largest_component(g: MultiGraph) -> set[int]:
    """Vertex set of a largest component (smallest vertex breaks ties)."""
    components = connected_components(g)
    if not components:
        return set()
    return max(components, key=len)


def is_connected_subset(
    adjacency: Sequence[Iterable[int]], vertices: Iterable[int]
) -> bool:
    """True if ``vertices`` induces a connected subgraph (empty: False)."""
    members = set(vertices)
    if not members:
        return False
    start = next(iter(members))
    seen = {start}
    queue = deque([start])
    while queue:
        vertex = queue.popleft()
        for neighbour in adjacency[vertex]:
            if neighbour in members and neighbour not in seen:
                seen.add(neighbour)
                queue.append(neighbour)
    return len(seen) == len(members)


def excess(
    g: MultiGraph, component: Iterable[int], component_id: int = 0
) -> ExcessReport:
    """Excess e - |C| + 1 of a connected vertex set ``C``."""
    members = set(component)
    adjacency = [list(g.neighbors(v)) for v in range(g.vertex_count)]
    if not is_connected_subset(adjacency, members):
        raise DisconnectedComponentError(
            "excess is only defined for a connected, non-empty vertex set"
        )
    edge_count = sum(1 for u, v in g.edges if u in members and v in members)
    return ExcessReport(
        component_id=component_id,
        order=len(members),
        edge_count=edge_count,
        excess=edge_count - len(members) + 1,
    )


def component_excesses(g: MultiGraph) -> list[ExcessReport]:
    """Excess report for every component, in component order."""
    components = connected_components(g)
    owner = [0] * g.vertex_count
    for component_id, members in enumerate(components):
        for vertex in members:
            owner[vertex] = component_id
    edge_counts = [0] * len(components)
    for u, _ in g.edges:
        edge_counts[owner[u]] += 1
    return [
        ExcessReport(
            component_id=component_id,
            order=len(members),
            edge_count=edge_counts[component_id],
            excess=edge_counts[component_id] - len(members) + 1,
        )
        for component_id, members in enumerate(components)
    ]


class CoreResult(NamedTuple):
    """Two-core of a graph with the map from core labels to input labels."""

    graph: MultiGraph
    vertex_map: list[int]


def two_core(g: MultiGraph) -> CoreResult:
    """Repeatedly delete vertices of degree at most 1."""
    logger = logging.getLogger(__name__)
    degree = g.degrees()
    removed = [False] * g.vertex_count
    queue = deque(v for v in range(g.vertex_count) if degree[v] <= 1)
    while queue:
        vertex = queue.popleft()
        if removed[vertex]:
            continue
        removed[vertex] = True
        for neighbour in g.neighbors(vertex):
            if removed[neighbour]:
                continue
            degree[neighbour] -= 1
            if degree[neighbour] == 1:
                queue.append(neighbour)
    survivors = [v for v in range(g.vertex_count) if not removed[v]]
    core, vertex_map = g.induced_subgraph(survivors)
    logger.debug(
        "two-core kept %d of %d vertices", core.vertex_count, g.vertex_count
    )
    return CoreResult(core, vertex_map)


@dataclass(frozen=True)
class SuppressionResult:
    """Kernel obtained by suppressing degree-2 vertices.

    ``vertex_map[x]`` is the input vertex behind kernel vertex ``x``;
    ``edge_paths[j]`` is the input walk ``(a, ..., b)`` that kernel edge
    ``j`` replaces; ``cycles`` are the dropped cycles of degree-2 vertices.
    """

    kernel: MultiGraph
    vertex_map: tuple[int, ...]
    edge_paths: tuple[tuple[int, ...], ...]
    cycles: tuple[tuple[int, ...], ...]

    def lift(self, branch_sets: Sequence[Iterable[int]]) -> list[set[int]]:
        """Map kernel branch sets to branch sets of the input graph.

        Interior vertices of a kernel edge are added to the set holding its
        first endpoint whenever that keeps a set connected or realises an
        adjacency between two sets, so validity carries over.
        """
        owner: dict[int, int] = {}
        lifted: list[set[int]] = []
        for label, members in enumerate(branch_sets):
            kernel_members = set(members)
            for vertex in kernel_members:
                owner[vertex] = label
            lifted.append({self.vertex_map[x] for x in kernel_members})
        linked: set[tuple[int, int]] = set()
        for index, (a, b) in enumerate(self.kernel.edges):
            if a == b or a not in owner or b not in owner:
                continue
            label_a, label_b = owner[a], owner[b]
            if label_a != label_b:
                key = (min(label_a, label_b), max(label_a, label_b))
                if key in linked:
                    continue
                linked.add(key)
            lifted[label_a].update(self.edge_paths[index][1:-1])
        return lifted


def suppress_degree_two(g: MultiGraph) -> SuppressionResult:
    """Replace every maximal path through degree-2 vertices by one edge.

    Requires minimum degree 2. Cycles made only of degree-2 vertices are
    dropped and reported in ``cycles``.
    """
    logger = logging.getLogger(__name__)
    degrees = g.degrees()
    low = [v for v, d in enumerate(degrees) if d < 2]
    if low:
        raise InvalidParameterError(
            f"suppress_degree_two needs minimum degree 2; vertex {low[0]} "
            f"has degree {degrees[low[0]]}"
        )
    is_branch = [d >= 3 for d in degrees]
    branch = [v for v in range(g.vertex_count) if is_branch[v]]
    kernel_id = {v: index for index, v in enumerate(branch)}
    used = [False] * g.edge_count
    kernel_edges: list[tuple[int, int]] = []
    edge_paths: list[tuple[int, ...]] = []

    for start in branch:
        for first_edge in g.incident_edges(start):
            if used[first_edge]:
                continue
            used[first_edge] = True
            walk = [start]
            previous_edge = first_edge
            current = g.other_end(first_edge, start)
            while not is_branch[current]:
                walk.append(current)
                slots = g.incident_edges(current)
                next_edge = slots[1] if slots[0] == previous_edge else slots[0]
                used[next_edge] = True
                previous_edge = next_edge
                current = g.other_end(next_edge, current)
            walk.append(current)
            kernel_edges.append((kernel_id[start], kernel_id[current]))
            edge_paths.append(tuple(walk))

    cycles: list[tuple[int, ...]] = []
    for vertex in range(g.vertex_count):
        if is_branch[vertex]:
            continue
        pending = [e for e in g.incident_edges(vertex) if not used[e]]
        if not pending:
            continue
        cycle = [vertex]
        previous_edge = pending[0]
        used[previous_edge] = True
        current = g.other_end(previous_edge, vertex)
        while current != vertex:
            cycle.append(current)
            slots = g.incident_edges(current)
            next_edge = slots[1] if slots[0] == previous_edge else slots[0]
            used[next_edge] = True
            previous_edge = next_edge
            current = g.other_end(next_edge, current)
        cycles.append(tuple(cycle))

    kernel = MultiGraph(len(branch), kernel_edges)
    if cycles:
        logger.debug("dropped %d cycle(s) of degree-2 vertices", len(cycles))
    return SuppressionResult(
        kernel=kernel,
        vertex_map=tuple(branch),
        edge_paths=tuple(edge_paths),
        cycles=tuple(cycles),
    )


def bfs_tree_edges(
    adjacency: Sequence[Iterable[int]],
    vertices: Iterable[int],
    root: Optional[int] = None,
) -> list[tuple[int, int]]:
    """Edges of a BFS spanning tree of ``vertices`` (within the set)."""
    members = set(vertices)
    if not members:
        return []
    start = min(members) if root is None else root
    seen = {start}
    queue = deque([start])
    tree: list[tuple[int, int]] = []
    while queue:
        vertex = queue.popleft()
        for neighbour in sorted(adjacency[vertex]):
            if neighbour in members and neighbour not in seen:
                seen.add(neighbour)
                tree.append((vertex, neighbour))
                queue.append(neighbour)
    return tree
