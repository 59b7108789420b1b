import itertools
import math

import numpy as np
import pytest

from signedblock.errors import EdgeListError
from signedblock.frustration import eta1_balance_bruteforce
from signedblock.graphcore import (
    adjacency,
    degrees,
    format_edgelist,
    normalized_laplacian,
    parse_edgelist,
    read_edgelist,
    unnormalized_laplacian,
    unsigned_adjacency,
    write_edgelist,
)
from signedblock.models import BisectionSpec
from signedblock.sampler import Seed, SignedGraph, sample, sample_bisection

from conftest import graph, homogeneous, is_connected


def all_signed_graphs(n):
    """Every signed graph on ``n`` labelled nodes."""
    pairs = list(itertools.combinations(range(n), 2))
    for signs in itertools.product((0, 1, -1), repeat=len(pairs)):
        yield graph(n, [(i, j, s) for (i, j), s in zip(pairs, signs) if s])


class TestMatrices:
    def test_empty_graph(self):
        g = SignedGraph(3, np.empty((0, 3)))
        assert not adjacency(g).any()
        assert not unnormalized_laplacian(g).any()
        assert not normalized_laplacian(g).any()
        assert degrees(g).d_min == 0

    def test_single_negative_edge(self):
        g = graph(2, [(0, 1, -1)])
        np.testing.assert_array_equal(adjacency(g), [[0, -1], [-1, 0]])
        np.testing.assert_array_equal(unsigned_adjacency(g), [[0, 1], [1, 0]])
        np.testing.assert_array_equal(unnormalized_laplacian(g), [[1, 1], [1, 1]])
        np.testing.assert_array_equal(normalized_laplacian(g), [[1, 1], [1, 1]])

    def test_single_positive_edge(self):
        g = graph(2, [(0, 1, 1)])
        np.testing.assert_array_equal(unnormalized_laplacian(g), [[1, -1], [-1, 1]])
        np.testing.assert_array_equal(normalized_laplacian(g), [[1, -1], [-1, 1]])

    def test_k4_block_pattern(self, balanced_k4):
        expected = np.array([
            [0, 1, -1, -1],
            [1, 0, -1, -1],
            [-1, -1, 0, 1],
            [-1, -1, 1, 0],
        ])
        np.testing.assert_array_equal(adjacency(balanced_k4), expected)
        np.testing.assert_array_equal(degrees(balanced_k4).d, [3, 3, 3, 3])

    def test_path(self):
        g = graph(3, [(0, 1, 1), (1, 2, 1)])
        dv = degrees(g)
        np.testing.assert_array_equal(dv.d, [1, 2, 1])
        assert dv.d_min == 1 and dv.d_max == 2
        Ln = normalized_laplacian(g)
        assert Ln[0, 1] == pytest.approx(-1 / math.sqrt(2))
        assert Ln[1, 2] == pytest.approx(-1 / math.sqrt(2))
        np.testing.assert_array_equal(np.diag(Ln), [1, 1, 1])

    def test_isolated_node_row_is_zero(self):
        g = graph(3, [(0, 1, 1)])
        Ln = normalized_laplacian(g)
        assert not Ln[2].any() and not Ln[:, 2].any()

    def test_degree_identity_and_identities_on_samples(self):
        for t in range(5):
            g, _ = sample_bisection(BisectionSpec(20, 0.4, 0.1, 0.2), Seed(3, t))
            A = adjacency(g)
            d = degrees(g).d
            np.testing.assert_array_equal(unsigned_adjacency(g), np.abs(A))
            np.testing.assert_array_equal(unsigned_adjacency(g).sum(axis=1), d)
            np.testing.assert_array_equal(unnormalized_laplacian(g), np.diag(d) - A)
            Ln = normalized_laplacian(g)
            np.testing.assert_array_equal(Ln, Ln.T)
            # matrix-product oracle on positive-degree nodes
            pos = d > 0
            Dm = np.diag(np.where(pos, 1 / np.sqrt(np.maximum(d, 1)), 0.0))
            np.testing.assert_allclose(Ln, Dm @ (np.diag(d) - A) @ Dm, atol=1e-12)
            if pos.all():
                assert np.trace(Ln) == pytest.approx(g.n)

    def test_positive_semidefinite(self):
        for t in range(20):
            g = sample(*homogeneous(15, 0.3, 0.4), Seed(12, t))
            assert np.linalg.eigvalsh(normalized_laplacian(g))[0] >= -1e-9
            assert np.linalg.eigvalsh(unnormalized_laplacian(g))[0] >= -1e-9


class TestBalanceEquivalence:
    @staticmethod
    def check(g):
        lam = np.linalg.eigvalsh(normalized_laplacian(g))[0]
        _, balanced = eta1_balance_bruteforce(g)
        assert (abs(lam) <= 1e-9) == balanced

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_exhaustive_small(self, n):
        count = 0
        for g in all_signed_graphs(n):
            if is_connected(g):
                self.check(g)
                count += 1
        assert count > 0

    @pytest.mark.parametrize("n", [5, 6])
    def test_sampled(self, n):
        seen = {True: 0, False: 0}
        for t in range(400):
            g = sample(*homogeneous(n, 0.6, 0.25), Seed(100 + n, t))
            if not is_connected(g):
                continue
            self.check(g)
            seen[eta1_balance_bruteforce(g)[1]] += 1
        assert seen[True] > 0 and seen[False] > 0

    def test_all_positive_connected(self):
        g = graph(5, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (0, 4, 1), (1, 3, 1)])
        assert abs(np.linalg.eigvalsh(normalized_laplacian(g))[0]) <= 1e-9


class TestEdgeList:
    def test_format(self):
        g = graph(4, [(2, 3, -1), (0, 1, 1)])
        assert format_edgelist(g) == "n=4\n0,1,1\n2,3,-1\n"
        assert format_edgelist(g, ["seed=7"]).startswith("# seed=7\nn=4\n")

    def test_round_trip(self, tmp_path):
        g, _ = sample_bisection(BisectionSpec(30, 0.3, 0.1, 0.2), Seed(5))
        path = tmp_path / "g.edges"
        write_edgelist(path, g, ["k=30"])
        assert read_edgelist(path) == g
        assert b"\r" not in path.read_bytes()

    def test_empty_graph_round_trip(self):
        g = SignedGraph(5, np.empty((0, 3)))
        assert parse_edgelist(format_edgelist(g)) == g

    @pytest.mark.parametrize(
        "text, lineno",
        [
            ("n=3\n0,1\n", 2),
            ("n=3\n0,1,1\n0,x,1\n", 3),
            ("n=3\n0,1,2\n", 2),
            ("n=3\n0,3,1\n", 2),
            ("n=3\n1,0,1\n", 2),
            ("n=3\n0,2,1\n0,1,1\n", 3),
            ("n=3\n0,1,1\n0,1,-1\n", 3),
            ("0,1,1\n", 1),
            ("# c\nn=abc\n", 2),
            ("", 1),
        ],
    )
    def test_malformed_lines(self, text, lineno):
        with pytest.raises(EdgeListError) as exc:
            parse_edgelist(text)
        assert exc.value.lineno == lineno
        assert str(exc.value).startswith(f"line {lineno}:")
