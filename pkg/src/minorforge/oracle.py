"""
Certificate verification, exact contraction clique number for small graphs,
upper bounds and a randomized lower-bound heuristic.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .certificate import MinorCertificate
from .errors import InvalidParameterError, TooLargeError
from .graph import MultiGraph, is_connected_subset
from .models import Defaults
from .samplers import RandomSource
from .unionfind import UnionFind


class FailureReason(Enum):
    """Why a certificate was rejected."""

    OUT_OF_RANGE = "out_of_range"
    EMPTY_SET = "empty_set"
    OVERLAP = "overlap"
    DISCONNECTED = "disconnected"
    BAD_WITNESS = "bad_witness"
    MISSING_EDGE = "missing_edge"


@dataclass(frozen=True)
class VerificationResult:
    """Outcome of :func:`verify`; truthy iff the certificate is valid."""

    ok: bool
    reason: Optional[FailureReason] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


class CclMethod(Enum):
    """How a contraction clique value was obtained."""

    EXACT = "exact"
    HEURISTIC = "heuristic"
    BOUND = "bound"


@dataclass(frozen=True)
class CclResult:
    """A contraction clique value with its witness."""

    value: int
    witness: MinorCertificate
    method: CclMethod
    restarts: int = 0


def _fail(reason: FailureReason, detail: str) -> VerificationResult:
    return VerificationResult(ok=False, reason=reason, detail=detail)


def verify(cert: MinorCertificate, host: MultiGraph) -> VerificationResult:
    """Check a certificate against ``host`` from scratch.

    Sets must be non-empty, disjoint, in range and connected, and every
    pair must be joined by a host edge. Witness edges and spanning trees,
    when present, must be genuine.
    """
    owner: dict[int, int] = {}
    for label, members in enumerate(cert.branch_sets):
        if not members:
            return _fail(FailureReason.EMPTY_SET, f"set {label} is empty")
        for vertex in members:
            if not 0 <= vertex < host.vertex_count:
                return _fail(
                    FailureReason.OUT_OF_RANGE,
                    f"vertex {vertex} of set {label} is not a host vertex",
                )
            if vertex in owner:
                return _fail(
                    FailureReason.OVERLAP,
                    f"vertex {vertex} lies in sets {owner[vertex]} and {label}",
                )
            owner[vertex] = label

    adjacency = host.adjacency_sets()
    for label, members in enumerate(cert.branch_sets):
        if not is_connected_subset(adjacency, members):
            return _fail(
                FailureReason.DISCONNECTED, f"set {label} is not connected"
            )

    for (a, b), (u, v) in sorted(cert.witness_edges.items()):
        if owner.get(u) != a or owner.get(v) != b or v not in adjacency[u]:
            return _fail(
                FailureReason.BAD_WITNESS,
                f"witness ({u}, {v}) does not join sets {a} and {b}",
            )
    for label, tree in enumerate(cert.spanning_trees):
        for u, v in tree:
            if owner.get(u) != label or owner.get(v) != label or (
                v not in adjacency[u]
            ):
                return _fail(
                    FailureReason.BAD_WITNESS,
                    f"tree edge ({u}, {v}) is not an edge inside set {label}",
                )

    joined: set[tuple[int, int]] = set()
    for u, v in host.edges:
        a, b = owner.get(u), owner.get(v)
        if a is not None and b is not None and a != b:
            joined.add((min(a, b), max(a, b)))
    for a in range(cert.order):
        for b in range(a + 1, cert.order):
            if (a, b) not in joined:
                return _fail(
                    FailureReason.MISSING_EDGE,
                    f"no host edge joins sets {a} and {b}",
                )
    return VerificationResult(ok=True)


def clique_order_for_edges(edge_count: int) -> int:
    """Largest h with C(h, 2) <= ``edge_count``."""
    if edge_count < 0:
        raise InvalidParameterError("edge count must be nonnegative")
    h = math.isqrt(2 * edge_count) + 1
    while h * (h - 1) // 2 > edge_count:
        h -= 1
    return max(h, 1)


def clique_excess(order: int) -> int:
    """exc(K_order) = C(order, 2) - order + 1."""
    return order * (order - 1) // 2 - order + 1


def edge_upper_bound(g: MultiGraph) -> int:
    """A minor has no more edges than its host."""
    return clique_order_for_edges(g.edge_count)


def excess_upper_bound(component_excess: int) -> int:
    """floor(4 sqrt(excess)), but never below 3."""
    if component_excess < 0:
        raise InvalidParameterError(
            f"excess must be nonnegative, got {component_excess}"
        )
    return max(3, math.isqrt(16 * component_excess))


def _bitmask_adjacency(g: MultiGraph) -> list[int]:
    masks = [0] * g.vertex_count
    for u, v in g.edges:
        if u != v:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
    return masks


def _mask_connected(mask: int, adjacency: list[int]) -> bool:
    reached = mask & -mask
    frontier = reached
    while frontier:
        grown = 0
        bits = frontier
        while bits:
            low = bits & -bits
            grown |= adjacency[low.bit_length() - 1]
            bits ^= low
        frontier = grown & mask & ~reached
        reached |= frontier
    return reached == mask


def _mask_neighbourhood(mask: int, adjacency: list[int]) -> int:
    grown = 0
    while mask:
        low = mask & -mask
        grown |= adjacency[low.bit_length() - 1]
        mask ^= low
    return grown


def _is_clique_minor(blocks: list[int], adjacency: list[int]) -> bool:
    reach = []
    for block in blocks:
        if not _mask_connected(block, adjacency):
            return False
        reach.append(_mask_neighbourhood(block, adjacency))
    for a, reach_a in enumerate(reach):
        for b in range(a + 1, len(blocks)):
            if not reach_a & blocks[b]:
                return False
    return True


def _bits(mask: int) -> list[int]:
    return [v for v in range(mask.bit_length()) if mask >> v & 1]


def exact_ccl(g: MultiGraph, cap: int = Defaults.EXACT_CAP) -> CclResult:
    """Hadwiger number by exhaustive branch-set assignment.

    Vertices are assigned in index order to an existing block, a new
    block (canonical numbering) or to no block. Branches that cannot beat
    the best order found, or exceed the simple-edge bound, are cut.
    """
    logger = logging.getLogger(__name__)
    n = g.vertex_count
    if n > cap:
        raise TooLargeError(
            f"exact search is capped at {cap} vertices, graph has {n}"
        )
    if n == 0:
        return CclResult(0, MinorCertificate(branch_sets=()), CclMethod.EXACT)
    adjacency = _bitmask_adjacency(g)
    ceiling = min(n, clique_order_for_edges(len(g.simple_edges())))
    best: list[int] = [1 << 0]
    blocks: list[int] = []

    def search(vertex: int) -> bool:
        nonlocal best
        if len(blocks) + (n - vertex) <= len(best):
            return False
        if vertex == n:
            if _is_clique_minor(blocks, adjacency):
                best = list(blocks)
                return len(best) >= ceiling
            return False
        bit = 1 << vertex
        if len(blocks) < ceiling:
            blocks.append(bit)
            if search(vertex + 1):
                return True
            blocks.pop()
        for index, block in enumerate(blocks):
            blocks[index] = block | bit
            if search(vertex + 1):
                return True
            blocks[index] = block
        return search(vertex + 1)

    search(0)
    sets = [_bits(block) for block in best]
    witness = MinorCertificate.from_branch_sets(g, sets)
    logger.debug("exact ccl of %r is %d", g, len(sets))
    return CclResult(len(sets), witness, CclMethod.EXACT)


def _grow_to_all(
    root: int,
    adjacency: list[set[int]],
    owner: list[int],
    set_count: int,
) -> Optional[set[int]]:
    """Connected set of unassigned vertices through ``root`` touching every set."""
    parent = {root: root}
    reached: dict[int, int] = {}
    queue = deque([root])
    while queue and len(reached) < set_count:
        vertex = queue.popleft()
        for neighbour in sorted(adjacency[vertex]):
            label = owner[neighbour]
            if label >= 0:
                reached.setdefault(label, vertex)
            elif neighbour not in parent:
                parent[neighbour] = vertex
                queue.append(neighbour)
    if len(reached) < set_count:
        return None
    members = {root}
    for end in reached.values():
        while end not in members:
            members.add(end)
            end = parent[end]
    return members


def greedy_minor(
    g: MultiGraph,
    target_order: Optional[int],
    src: RandomSource,
    restarts: int = Defaults.GREEDY_RESTARTS,
) -> CclResult:
    """Randomized seed-growth clique minor.

    Seeds are tried in a random order (the first restart uses decreasing
    degree); a seed becomes a new branch set, together with BFS paths over
    unassigned vertices, whenever that reaches every existing set. The
    best of ``restarts`` runs is returned, early once ``target_order``
    or the edge bound is met.
    """
    logger = logging.getLogger(__name__)
    n = g.vertex_count
    if n == 0:
        return CclResult(0, MinorCertificate(branch_sets=()), CclMethod.HEURISTIC)
    adjacency = g.adjacency_sets()
    ceiling = clique_order_for_edges(len(g.simple_edges()))
    if target_order is not None:
        ceiling = min(ceiling, target_order)
    best: list[set[int]] = []
    used = 0
    for attempt in range(max(1, restarts)):
        used = attempt + 1
        if attempt == 0:
            order = sorted(range(n), key=lambda v: (-len(adjacency[v]), v))
        else:
            order = [int(v) for v in src.rng.permutation(n)]
        owner = [-1] * n
        sets: list[set[int]] = []
        for seed in order:
            if owner[seed] >= 0:
                continue
            members = _grow_to_all(seed, adjacency, owner, len(sets))
            if members is None:
                continue
            for vertex in members:
                owner[vertex] = len(sets)
            sets.append(members)
        if len(sets) > len(best):
            best = sets
        if len(best) >= ceiling:
            break
    witness = MinorCertificate.from_branch_sets(g, best)
    logger.debug(
        "greedy minor of order %d after %d restart(s)", len(best), used
    )
    return CclResult(len(best), witness, CclMethod.HEURISTIC, restarts=used)


def _forest_path(forest: list[list[int]], start: int, goal: int) -> list[int]:
    parent = {start: start}
    queue = deque([start])
    while queue:
        vertex = queue.popleft()
        if vertex == goal:
            break
        for neighbour in forest[vertex]:
            if neighbour not in parent:
                parent[neighbour] = vertex
                queue.append(neighbour)
    path = [goal]
    while path[-1] != start:
        path.append(parent[path[-1]])
    return path[::-1]


def trivial_minor(g: MultiGraph) -> CclResult:
    """K3 from a cycle, else K2 from an edge, else K1 or nothing."""
    forest = UnionFind(g.vertex_count)
    tree: list[list[int]] = [[] for _ in range(g.vertex_count)]
    for u, v in g.simple_edges():
        if forest.union(u, v):
            tree[u].append(v)
            tree[v].append(u)
            continue
        cycle = _forest_path(tree, u, v)
        sets = [cycle[:1], cycle[1:2], cycle[2:]]
        return CclResult(
            3, MinorCertificate.from_branch_sets(g, sets), CclMethod.HEURISTIC
        )
    simple = g.simple_edges()
    if simple:
        u, v = simple[0]
        sets = [[u], [v]]
    elif g.vertex_count:
        sets = [[0]]
    else:
        sets = []
    return CclResult(
        len(sets), MinorCertificate.from_branch_sets(g, sets), CclMethod.HEURISTIC
    )
