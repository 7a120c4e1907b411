"""
Plain-text graph format: line 1 ``n m``, then ``m`` lines ``u v`` (0-based).
"""

import logging
from typing import Iterable

from .errors import InvalidParameterError
from .graph import MultiGraph


class GraphParser:
    """Reads and writes the plain-text graph format."""

    def __init__(self) -> None:
        self.logger = logging.getLogger(__name__)

    def format(self, g: MultiGraph) -> str:
        """Serialize ``g`` with edges in index order."""
        lines = [f"{g.vertex_count} {g.edge_count}"]
        lines.extend(f"{u} {v}" for u, v in g.edges)
        return "\n".join(lines) + "\n"

    def parse(self, content: str) -> MultiGraph:
        """Parse the text format; blank lines are ignored."""
        rows = [line.split() for line in content.splitlines() if line.strip()]
        if not rows:
            raise InvalidParameterError("empty graph file")
        header = rows[0]
        if len(header) != 2:
            raise InvalidParameterError(
                f"malformed header {' '.join(header)!r}: expected 'n m'"
            )
        try:
            vertex_count, edge_count = (int(token) for token in header)
        except ValueError as exc:
            raise InvalidParameterError(
                f"non-integer header {' '.join(header)!r}"
            ) from exc
        body = rows[1:]
        if len(body) != edge_count:
            raise InvalidParameterError(
                f"header announces {edge_count} edges, found {len(body)}"
            )
        edges = list(self._parse_edges(body))
        self.logger.debug(
            "Parsed graph with %d vertices and %d edges",
            vertex_count,
            edge_count,
        )
        return MultiGraph(vertex_count, edges)

    @staticmethod
    def _parse_edges(rows: Iterable[list[str]]) -> Iterable[tuple[int, int]]:
        for number, row in enumerate(rows, start=2):
            if len(row) != 2:
                raise InvalidParameterError(
                    f"line {number}: expected 'u v', got {' '.join(row)!r}"
                )
            try:
                u, v = int(row[0]), int(row[1])
            except ValueError as exc:
                raise InvalidParameterError(
                    f"line {number}: non-integer endpoint in {' '.join(row)!r}"
                ) from exc
            yield u, v
