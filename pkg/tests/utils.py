"""
Common test utilities for the minorforge package.

Named small graphs, a hand-built H(n)+G(n,1) instance with a forced
stage, and brute-force oracles written independently of the package
algorithms they check.
"""

import itertools
from typing import Iterator, List, Sequence, Set, Tuple

from minorforge.builder import (
    BranchSet,
    BuilderParams,
    ConnectorPath,
    StagePlan,
)
from minorforge.graph import MultiGraph, VertexPath
from minorforge.models import Mode
from minorforge.samplers import ModelInstance


def complete_graph(n: int) -> MultiGraph:
    """K_n."""
    return MultiGraph(n, itertools.combinations(range(n), 2))


def cycle_graph(n: int) -> MultiGraph:
    """C_n on 0..n-1 in order."""
    return MultiGraph(n, [(v, (v + 1) % n) for v in range(n)])


def path_graph(n: int) -> MultiGraph:
    """P_n on 0..n-1 in order."""
    return MultiGraph(n, [(v, v + 1) for v in range(n - 1)])


def star_graph(leaves: int) -> MultiGraph:
    """Centre 0 joined to ``leaves`` leaves."""
    return MultiGraph(leaves + 1, [(0, v) for v in range(1, leaves + 1)])


def theta_graph() -> MultiGraph:
    """Vertices 0 and 1 joined by internal paths of lengths 2, 2 and 3."""
    return MultiGraph(
        6, [(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 5), (5, 1)]
    )


def theta_with_pendants() -> MultiGraph:
    """Theta graph with a pendant path at 2 and a pendant star at 5."""
    edges = list(theta_graph().edges)
    edges += [(2, 6), (6, 7), (5, 8), (8, 9), (8, 10)]
    return MultiGraph(11, edges)


def subdivided_k4() -> MultiGraph:
    """K_4 on 0..3 with every edge subdivided once (vertices 4..9)."""
    edges = []
    for middle, (u, v) in enumerate(itertools.combinations(range(4), 2), 4):
        edges += [(u, middle), (middle, v)]
    return MultiGraph(10, edges)


def petersen_graph() -> MultiGraph:
    """Outer 5-cycle 0..4, inner pentagram 5..9, spokes i - i+5."""
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return MultiGraph(10, outer + inner + spokes)


def two_triangles() -> MultiGraph:
    """Two disjoint triangles."""
    return MultiGraph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])


def set_partitions(items: Sequence[int]) -> Iterator[List[List[int]]]:
    """Every partition of ``items`` into non-empty blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        for index in range(len(partition)):
            yield (
                partition[:index]
                + [[first] + partition[index]]
                + partition[index + 1 :]
            )
        yield [[first]] + partition


def _connected(block: Sequence[int], adjacency: List[Set[int]]) -> bool:
    members = set(block)
    seen = {block[0]}
    stack = [block[0]]
    while stack:
        vertex = stack.pop()
        for neighbour in adjacency[vertex]:
            if neighbour in members and neighbour not in seen:
                seen.add(neighbour)
                stack.append(neighbour)
    return seen == members


def brute_force_ccl(g: MultiGraph) -> int:
    """Hadwiger number by trying every partition of V plus a spare block.

    The block holding the marker -1 collects the deleted vertices; every
    other block is a candidate branch set.
    """
    n = g.vertex_count
    if n == 0:
        return 0
    adjacency: List[Set[int]] = [set() for _ in range(n)]
    for u, v in g.edges:
        if u != v:
            adjacency[u].add(v)
            adjacency[v].add(u)
    best = 1
    for partition in set_partitions([-1] + list(range(n))):
        blocks = [block for block in partition if -1 not in block]
        if len(blocks) <= best:
            continue
        if not all(_connected(block, adjacency) for block in blocks):
            continue
        touching = all(
            any(adjacency[u] & set(b) for u in a)
            for a, b in itertools.combinations(blocks, 2)
        )
        if touching:
            best = len(blocks)
    return best


def forced_stage_fixture() -> Tuple[
    ModelInstance, List[BranchSet], StagePlan, BuilderParams
]:
    """Two branch sets and a single connector with M*-edges into both.

    Hamilton cycle 0..7 with P1 = 0..3 and P2 = 4..7; M* pairs 0-2, 1-5,
    3-6 and 4-7, so X1 = (1, 3) and X2 = (5, 6).
    """
    mate = (2, 5, 0, 6, 7, 1, 3, 4)
    instance = ModelInstance(
        n=8,
        hamilton=VertexPath(tuple(range(8))),
        mate=mate,
        p1=VertexPath((0, 1, 2, 3)),
        p2=VertexPath((4, 5, 6, 7)),
        x1=(1, 3),
        x2=(5, 6),
        x1_prime=(1, 3),
        x2_prime=(5, 6),
    )
    branch_sets = [
        BranchSet(id=0, core=VertexPath((0, 1)), effective_vertices=(1,)),
        BranchSet(id=1, core=VertexPath((2, 3)), effective_vertices=(3,)),
    ]
    connector = ConnectorPath(
        stage=1, index=0, path=VertexPath((5, 6)), effective_vertices=(5, 6)
    )
    stage_plan = StagePlan(
        k=2,
        t=1,
        t_nominal=1,
        i0=1,
        i0_nominal=1,
        x1_size=2,
        segments=(VertexPath((4, 5, 6)),),
        segment_effective=((5, 6),),
        families=((connector,),),
        branch_of={1: 0, 3: 1},
    )
    params = BuilderParams(
        n=8,
        epsilon=0.3,
        mode=Mode.PRACTICAL,
        k=2,
        t=1,
        i0=1,
        delta_profile=(10.0,),
        beta_profile=(0.0,),
    )
    return instance, branch_sets, stage_plan, params


def heavy_set_fixture() -> Tuple[
    ModelInstance, List[BranchSet], StagePlan, BuilderParams
]:
    """Four branch sets, one connector reaching sets 1 and 2 only.

    Hamilton cycle 0..15 with P1 = 0..7 and P2 = 8..15. Effective
    vertices 1, 3, 5, 7 are matched to 9, 10, 11, 13; the connector
    (10, 11) therefore touches branch sets 1 and 2. Faithful mode with
    threshold 2.5.
    """
    mate = (2, 9, 0, 10, 6, 11, 4, 13, 14, 1, 3, 5, 15, 7, 8, 12)
    instance = ModelInstance(
        n=16,
        hamilton=VertexPath(tuple(range(16))),
        mate=mate,
        p1=VertexPath(tuple(range(8))),
        p2=VertexPath(tuple(range(8, 16))),
        x1=(1, 3, 5, 7),
        x2=(9, 10, 11, 13),
        x1_prime=(1, 3, 5, 7),
        x2_prime=(9, 10, 11, 13),
    )
    branch_sets = [
        BranchSet(
            id=j, core=VertexPath((2 * j, 2 * j + 1)),
            effective_vertices=(2 * j + 1,),
        )
        for j in range(4)
    ]
    connector = ConnectorPath(
        stage=1, index=0, path=VertexPath((10, 11)),
        effective_vertices=(10, 11),
    )
    stage_plan = StagePlan(
        k=4,
        t=1,
        t_nominal=1,
        i0=1,
        i0_nominal=1,
        x1_size=4,
        segments=(VertexPath((10, 11)),),
        segment_effective=((10, 11),),
        families=((connector,),),
        branch_of={1: 0, 3: 1, 5: 2, 7: 3},
    )
    params = BuilderParams(
        n=16,
        epsilon=0.3,
        mode=Mode.FAITHFUL,
        k=4,
        t=1,
        i0=1,
        delta_profile=(2.5,),
        beta_profile=(0.0,),
    )
    return instance, branch_sets, stage_plan, params
