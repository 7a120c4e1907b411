"""
Complete-minor certificates and their JSON form.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Sequence

from .graph import MultiGraph, bfs_tree_edges

Pair = tuple[int, int]
Edge = tuple[int, int]


@dataclass(frozen=True)
class MinorCertificate:  # pylint: disable=too-many-instance-attributes
    """Branch-set partition witnessing a K_order minor of a host graph.

    ``witness_edges[(a, b)]`` with ``a < b`` is a host edge ``(u, v)``
    with ``u`` in set ``a`` and ``v`` in set ``b``. ``spanning_trees[j]``
    lists host edges spanning set ``j``; it may be empty when the
    certificate was built without the host at hand.
    """

    branch_sets: tuple[tuple[int, ...], ...]
    witness_edges: dict[Pair, Edge] = field(default_factory=dict)
    spanning_trees: tuple[tuple[Edge, ...], ...] = ()
    n: Optional[int] = None
    r: Optional[int] = None
    seed: Optional[int] = None
    epsilon: Optional[float] = None
    mode: Optional[str] = None
    stage_log: tuple[dict[str, Any], ...] = ()

    @property
    def order(self) -> int:
        """Number of branch sets."""
        return len(self.branch_sets)

    def owner(self) -> dict[int, int]:
        """Vertex to branch-set index (the last set wins on overlap)."""
        return {
            vertex: label
            for label, members in enumerate(self.branch_sets)
            for vertex in members
        }

    @classmethod
    def from_branch_sets(
        cls,
        host: MultiGraph,
        branch_sets: Sequence[Iterable[int]],
        **metadata: Any,
    ) -> "MinorCertificate":
        """Derive witness edges and spanning trees from the host.

        Pairs without a joining host edge get no witness; the verifier
        reports them.
        """
        sets = tuple(tuple(sorted(set(members))) for members in branch_sets)
        owner = {v: label for label, members in enumerate(sets) for v in members}
        witnesses: dict[Pair, Edge] = {}
        for u, v in host.edges:
            a, b = owner.get(u), owner.get(v)
            if a is None or b is None or a == b:
                continue
            if a > b:
                a, b, u, v = b, a, v, u
            witnesses.setdefault((a, b), (u, v))
        adjacency = host.adjacency_sets()
        trees = tuple(
            tuple(bfs_tree_edges(adjacency, members)) for members in sets
        )
        return cls(
            branch_sets=sets,
            witness_edges=witnesses,
            spanning_trees=trees,
            **metadata,
        )

    def with_spanning_trees(self, host: MultiGraph) -> "MinorCertificate":
        """Copy with BFS spanning trees computed in ``host``."""
        adjacency = host.adjacency_sets()
        trees = tuple(
            tuple(bfs_tree_edges(adjacency, members))
            for members in self.branch_sets
        )
        return MinorCertificate(
            branch_sets=self.branch_sets,
            witness_edges=dict(self.witness_edges),
            spanning_trees=trees,
            n=self.n,
            r=self.r,
            seed=self.seed,
            epsilon=self.epsilon,
            mode=self.mode,
            stage_log=self.stage_log,
        )

    def to_json(self) -> dict[str, Any]:
        """JSON-serializable dictionary; witness edges in pair order."""
        return {
            "n": self.n,
            "r": self.r,
            "seed": self.seed,
            "epsilon": self.epsilon,
            "mode": self.mode,
            "order": self.order,
            "branch_sets": [list(members) for members in self.branch_sets],
            "witness_edges": [
                list(self.witness_edges[pair])
                for pair in sorted(self.witness_edges)
            ],
            "stage_log": [dict(entry) for entry in self.stage_log],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "MinorCertificate":
        """Create certificate from dictionary data.

        Witness pairs are recovered from the sets their endpoints lie in.
        """
        logger = logging.getLogger(__name__)
        sets = tuple(
            tuple(int(v) for v in members)
            for members in data.get("branch_sets", [])
        )
        owner = {v: label for label, members in enumerate(sets) for v in members}
        witnesses: dict[Pair, Edge] = {}
        for u, v in data.get("witness_edges", []):
            u, v = int(u), int(v)
            a, b = owner.get(u), owner.get(v)
            if a is None or b is None or a == b:
                logger.warning(
                    "witness edge (%d, %d) does not join two branch sets", u, v
                )
                continue
            if a > b:
                a, b, u, v = b, a, v, u
            witnesses[(a, b)] = (u, v)
        return cls(
            branch_sets=sets,
            witness_edges=witnesses,
            n=data.get("n"),
            r=data.get("r"),
            seed=data.get("seed"),
            epsilon=data.get("epsilon"),
            mode=data.get("mode"),
            stage_log=tuple(data.get("stage_log", [])),
        )
