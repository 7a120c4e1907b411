"""
Tests for MinorCertificate.
"""

import unittest

from minorforge.certificate import MinorCertificate
from minorforge.oracle import verify

from tests.utils import complete_graph, cycle_graph, path_graph


class TestMinorCertificate(unittest.TestCase):
    """Test suite for MinorCertificate."""

    def test_from_branch_sets_on_k4(self) -> None:
        """Singletons of K4 get one witness per pair."""
        host = complete_graph(4)
        cert = MinorCertificate.from_branch_sets(host, [[0], [1], [2], [3]])
        self.assertEqual(cert.order, 4)
        self.assertEqual(len(cert.witness_edges), 6)
        self.assertEqual(cert.witness_edges[(0, 3)], (0, 3))
        self.assertEqual(cert.spanning_trees, ((), (), (), ()))
        self.assertTrue(verify(cert, host).ok)

    def test_witness_orientation(self) -> None:
        """Witness endpoints follow the pair order."""
        host = cycle_graph(4)
        cert = MinorCertificate.from_branch_sets(host, [[2, 3], [0, 1]])
        self.assertEqual(cert.branch_sets, ((2, 3), (0, 1)))
        u, v = cert.witness_edges[(0, 1)]
        self.assertIn(u, (2, 3))
        self.assertIn(v, (0, 1))

    def test_spanning_trees(self) -> None:
        """A path set gets its path as spanning tree."""
        host = path_graph(5)
        cert = MinorCertificate.from_branch_sets(host, [[0, 1, 2], [3, 4]])
        self.assertEqual(cert.spanning_trees, (((0, 1), (1, 2)), ((3, 4),)))
        bare = MinorCertificate(branch_sets=cert.branch_sets)
        self.assertEqual(
            bare.with_spanning_trees(host).spanning_trees,
            cert.spanning_trees,
        )

    def test_missing_pair_gets_no_witness(self) -> None:
        """Pairs without a host edge are left for the verifier."""
        host = path_graph(4)
        cert = MinorCertificate.from_branch_sets(host, [[0], [3]])
        self.assertEqual(cert.witness_edges, {})
        self.assertFalse(verify(cert, host).ok)

    def test_owner(self) -> None:
        """Vertex to set lookup."""
        cert = MinorCertificate(branch_sets=((0, 4), (2,)))
        self.assertEqual(cert.owner(), {0: 0, 4: 0, 2: 1})

    def test_json_form(self) -> None:
        """JSON keeps metadata, sets and witnesses in pair order."""
        host = complete_graph(3)
        cert = MinorCertificate.from_branch_sets(
            host,
            [[0], [1], [2]],
            n=3,
            r=2,
            seed=5,
            epsilon=0.3,
            mode="practical",
            stage_log=({"i": 1, "U_before": 3, "U_after": 0},),
        )
        data = cert.to_json()
        self.assertEqual(data["order"], 3)
        self.assertEqual(data["branch_sets"], [[0], [1], [2]])
        self.assertEqual(data["witness_edges"], [[0, 1], [0, 2], [1, 2]])
        self.assertEqual(data["seed"], 5)
        self.assertEqual(data["stage_log"][0]["U_after"], 0)

        restored = MinorCertificate.from_dict(data)
        self.assertEqual(restored.branch_sets, cert.branch_sets)
        self.assertEqual(restored.witness_edges, cert.witness_edges)
        self.assertEqual(restored.mode, "practical")
        self.assertTrue(verify(restored, host).ok)

    def test_from_dict_skips_stray_witness(self) -> None:
        """A witness inside one set is dropped on load."""
        data = {"branch_sets": [[0, 1], [2]], "witness_edges": [[0, 1], [1, 2]]}
        cert = MinorCertificate.from_dict(data)
        self.assertEqual(cert.witness_edges, {(0, 1): (1, 2)})


if __name__ == "__main__":
    unittest.main()
