"""
Maximum bipartite matching (Hopcroft-Karp) and Hall-condition diagnostics.

Left and right vertices are indexed ``0, 1, ...``. Augmenting paths are
searched in index order, so results are deterministic for a given input.
Large graphs are handed to scipy.sparse.csgraph on a CSR biadjacency matrix.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from itertools import chain
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import InvalidParameterError

_UNMATCHED = -1

# Graphs with at least this many edges are matched by scipy.
SPARSE_MATCHING_MIN_EDGES = 20_000


@dataclass(frozen=True)
class BipartiteGraph:
    """Bipartite graph given by per-left-vertex lists of right indices."""

    left_count: int
    right_count: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.adjacency) != self.left_count:
            raise InvalidParameterError(
                f"expected {self.left_count} adjacency lists, "
                f"got {len(self.adjacency)}"
            )
        for left, rights in enumerate(self.adjacency):
            if len(set(rights)) != len(rights):
                raise InvalidParameterError(
                    f"left vertex {left} lists a right vertex twice"
                )
            for right in rights:
                if not 0 <= right < self.right_count:
                    raise InvalidParameterError(
                        f"right index {right} of left vertex {left} outside "
                        f"0..{self.right_count - 1}"
                    )

    @classmethod
    def from_edges(
        cls,
        left_count: int,
        right_count: int,
        edges: Iterable[tuple[int, int]],
    ) -> "BipartiteGraph":
        """Build from ``(left, right)`` pairs; duplicates are dropped.

        Each adjacency list keeps the order in which its edges first appear.
        """
        pairs = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        lefts = pairs[:, 0]
        outside = (lefts < 0) | (lefts >= left_count)
        if outside.any():
            raise InvalidParameterError(
                f"left index {int(lefts[outside][0])} outside "
                f"0..{left_count - 1}"
            )
        if not pairs.size:
            return cls(left_count, right_count, ((),) * left_count)
        _, first = np.unique(pairs, axis=0, return_index=True)
        kept = pairs[np.sort(first)]
        order = np.argsort(kept[:, 0], kind="stable")
        bounds = np.cumsum(np.bincount(kept[:, 0], minlength=left_count))
        lists = np.split(kept[order, 1], bounds[:-1])
        return cls(
            left_count,
            right_count,
            tuple(tuple(rights.tolist()) for rights in lists),
        )

    @property
    def edge_count(self) -> int:
        """Number of edges."""
        return sum(len(rights) for rights in self.adjacency)

    def to_csr(self) -> csr_matrix:
        """Biadjacency matrix with one row per left vertex."""
        lengths = np.fromiter(
            (len(rights) for rights in self.adjacency),
            dtype=np.int64,
            count=self.left_count,
        )
        indptr = np.concatenate(([0], np.cumsum(lengths)))
        indices = np.fromiter(
            chain.from_iterable(self.adjacency),
            dtype=np.int32,
            count=int(indptr[-1]),
        )
        return csr_matrix(
            (np.ones(indices.size), indices, indptr),
            shape=(self.left_count, self.right_count),
        )

    def right_degrees(self) -> list[int]:
        """Degree of every right vertex."""
        degrees = [0] * self.right_count
        for rights in self.adjacency:
            for right in rights:
                degrees[right] += 1
        return degrees


@dataclass(frozen=True)
class Matching:
    """Partial injection from left to right vertices."""

    pairs: dict[int, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.pairs)

    def right_of(self, left: int) -> int:
        """Partner of ``left``, or -1."""
        return self.pairs.get(left, _UNMATCHED)

    def is_valid_for(self, b: BipartiteGraph) -> bool:
        """True if injective and every pair is an edge of ``b``."""
        rights = list(self.pairs.values())
        if len(set(rights)) != len(rights):
            return False
        return all(
            0 <= left < b.left_count and right in b.adjacency[left]
            for left, right in self.pairs.items()
        )

    def sorted_pairs(self) -> list[tuple[int, int]]:
        """Pairs ordered by left index."""
        return sorted(self.pairs.items())


def _layer(
    b: BipartiteGraph, match_left: list[int], match_right: list[int]
) -> tuple[list[int], bool]:
    """BFS from free left vertices; returns layer indices and success."""
    infinity = b.left_count + 1
    dist = [infinity] * b.left_count
    queue: deque[int] = deque()
    for left in range(b.left_count):
        if match_left[left] == _UNMATCHED:
            dist[left] = 0
            queue.append(left)
    limit = infinity
    while queue:
        left = queue.popleft()
        if dist[left] >= limit:
            continue
        for right in b.adjacency[left]:
            partner = match_right[right]
            if partner == _UNMATCHED:
                limit = min(limit, dist[left] + 1)
            elif dist[partner] == infinity:
                dist[partner] = dist[left] + 1
                queue.append(partner)
    return dist, limit != infinity


def _augment(
    b: BipartiteGraph,
    root: int,
    dist: list[int],
    pointer: list[int],
    match_left: list[int],
    match_right: list[int],
) -> bool:
    """Layered DFS from ``root`` with an explicit stack."""
    infinity = b.left_count + 1
    stack = [root]
    via: list[int] = []
    while stack:
        left = stack[-1]
        rights = b.adjacency[left]
        pushed = False
        while pointer[left] < len(rights):
            right = rights[pointer[left]]
            pointer[left] += 1
            partner = match_right[right]
            if partner == _UNMATCHED:
                via.append(right)
                for node, target in zip(stack, via):
                    match_left[node] = target
                    match_right[target] = node
                return True
            if dist[partner] == dist[left] + 1:
                via.append(right)
                stack.append(partner)
                pushed = True
                break
        if not pushed:
            dist[left] = infinity
            stack.pop()
            if via:
                via.pop()
    return False


def _sparse_matching(b: BipartiteGraph) -> Matching:
    """Hopcroft-Karp from scipy.sparse.csgraph."""
    if b.left_count == 0 or b.right_count == 0:
        return Matching()
    rights = maximum_bipartite_matching(b.to_csr(), perm_type="column")
    return Matching(
        {
            left: right
            for left, right in enumerate(rights.tolist())
            if right != _UNMATCHED
        }
    )


def maximum_matching(
    b: BipartiteGraph, sparse: Optional[bool] = None
) -> Matching:
    """Maximum-cardinality matching in O(E sqrt(V)).

    ``sparse`` picks scipy (True) or the pure-Python search (False); by
    default scipy takes graphs with ``SPARSE_MATCHING_MIN_EDGES`` edges
    or more.
    """
    logger = logging.getLogger(__name__)
    if sparse is None:
        sparse = b.edge_count >= SPARSE_MATCHING_MIN_EDGES
    if sparse:
        matching = _sparse_matching(b)
        logger.debug(
            "sparse matching of size %d on %dx%d graph",
            len(matching),
            b.left_count,
            b.right_count,
        )
        return matching
    match_left = [_UNMATCHED] * b.left_count
    match_right = [_UNMATCHED] * b.right_count
    phases = 0
    while True:
        dist, found = _layer(b, match_left, match_right)
        if not found:
            break
        phases += 1
        pointer = [0] * b.left_count
        for left in range(b.left_count):
            if match_left[left] == _UNMATCHED:
                _augment(b, left, dist, pointer, match_left, match_right)
    pairs = {
        left: right
        for left, right in enumerate(match_left)
        if right != _UNMATCHED
    }
    logger.debug(
        "matching of size %d on %dx%d graph after %d phase(s)",
        len(pairs),
        b.left_count,
        b.right_count,
        phases,
    )
    return Matching(pairs)


def uncovered_left(b: BipartiteGraph, m: Matching) -> set[int]:
    """Left vertices missing from ``m``."""
    return {left for left in range(b.left_count) if left not in m.pairs}


def _alternating_reach(
    b: BipartiteGraph, m: Matching
) -> tuple[set[int], set[int]]:
    """Vertices reachable from free left vertices by alternating paths."""
    match_right = {right: left for left, right in m.pairs.items()}
    left_seen = uncovered_left(b, m)
    right_seen: set[int] = set()
    queue = deque(sorted(left_seen))
    while queue:
        left = queue.popleft()
        for right in b.adjacency[left]:
            if right in right_seen:
                continue
            right_seen.add(right)
            partner = match_right.get(right)
            if partner is not None and partner not in left_seen:
                left_seen.add(partner)
                queue.append(partner)
    return left_seen, right_seen


def minimum_vertex_cover(
    b: BipartiteGraph, m: Matching
) -> tuple[set[int], set[int]]:
    """König cover ``(left part, right part)`` from a maximum matching."""
    left_reach, right_reach = _alternating_reach(b, m)
    return set(range(b.left_count)) - left_reach, right_reach


def hall_violator(b: BipartiteGraph, m: Matching) -> set[int]:
    """Left set W with |N(W)| < |W|, or empty if ``m`` covers the left side.

    ``m`` must be maximum.
    """
    if len(m) == b.left_count:
        return set()
    left_reach, _ = _alternating_reach(b, m)
    return left_reach


def neighbourhood(b: BipartiteGraph, lefts: Iterable[int]) -> set[int]:
    """Right vertices adjacent to any of ``lefts``."""
    return {right for left in lefts for right in b.adjacency[left]}


@dataclass(frozen=True)
class HallReport:
    """Degree-based Hall diagnostics of a bipartite graph.

    ``degree_condition`` holds when every left degree is at least every
    right degree and positive, which forces a left-perfect matching.
    """

    min_left_degree: int
    max_right_degree: int
    low_degree_right: int
    degree_condition: bool


def hall_report(b: BipartiteGraph, d: int) -> HallReport:
    """Degree statistics; ``low_degree_right`` counts right degrees below ``d``."""
    left_degrees = [len(rights) for rights in b.adjacency]
    right_degrees: Sequence[int] = b.right_degrees()
    min_left = min(left_degrees, default=0)
    max_right = max(right_degrees, default=0)
    return HallReport(
        min_left_degree=min_left,
        max_right_degree=max_right,
        low_degree_right=sum(1 for degree in right_degrees if degree < d),
        degree_condition=b.left_count == 0
        or (min_left > 0 and min_left >= max_right),
    )
