"""
Tests for the plain-text graph format.
"""

import unittest

from minorforge.errors import InvalidParameterError
from minorforge.graph import MultiGraph
from minorforge.parser import GraphParser


class TestGraphParser(unittest.TestCase):
    """Test suite for GraphParser."""

    def setUp(self) -> None:
        """Set up test fixtures."""
        self.parser = GraphParser()

    def test_format_header_and_edges(self) -> None:
        """Header line then one edge per line, in index order."""
        g = MultiGraph(3, [(0, 1), (2, 2), (1, 0)])
        self.assertEqual(self.parser.format(g), "3 3\n0 1\n2 2\n1 0\n")

    def test_format_edgeless_graph(self) -> None:
        """An edgeless graph is just its header."""
        self.assertEqual(self.parser.format(MultiGraph(100)), "100 0\n")

    def test_parse_keeps_loops_and_parallel_edges(self) -> None:
        """Multigraph features survive parsing."""
        g = self.parser.parse("2 3\n0 1\n0 1\n1 1\n")
        self.assertEqual(g.edges, ((0, 1), (0, 1), (1, 1)))
        self.assertEqual(g.degrees(), [2, 4])

    def test_parse_ignores_blank_lines(self) -> None:
        """Blank lines anywhere are skipped."""
        g = self.parser.parse("\n3 1\n\n0 2\n\n")
        self.assertEqual(g, MultiGraph(3, [(0, 2)]))

    def test_parse_malformed_input(self) -> None:
        """Every malformed shape raises InvalidParameterError."""
        cases = [
            "",
            "3\n",
            "3 x\n",
            "3 2\n0 1\n",
            "3 1\n0 1 2\n",
            "3 1\n0 y\n",
            "3 1\n0 5\n",
        ]
        for content in cases:
            with self.subTest(content=content):
                with self.assertRaises(InvalidParameterError):
                    self.parser.parse(content)

    def test_parse_inverts_format(self) -> None:
        """Parsing the formatted text gives the same graph."""
        g = MultiGraph(5, [(0, 4), (4, 3), (3, 3), (1, 2), (2, 1)])
        self.assertEqual(self.parser.parse(self.parser.format(g)), g)


if __name__ == "__main__":
    unittest.main()
