"""Seeded sampling of signed graphs.

Each unordered pair ``{i, j}`` (``i < j``, row-major order) owns two
consecutive uniforms in a Philox stream keyed by ``(master, trial)``: the
first decides presence, the second the sign. The sign uniform is consumed
even when the edge is absent, so the stream layout never depends on the
probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import ValidationError
from .models import BisectionSpec, ProbabilityMatrix, bisection_to_blocks, expand_blocks

_UINT64_MAX = 2**64 - 1


@dataclass(frozen=True)
class Seed:
    master: int
    trial: int = 0

    def __post_init__(self):
        for name in ("master", "trial"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v:
                raise ValidationError(f"{name}: must be an integer, got {v!r}")
        if not 0 <= self.master <= _UINT64_MAX:
            raise ValidationError(f"master: must fit in an unsigned 64-bit integer, got {self.master}")
        if self.trial < 0:
            raise ValidationError(f"trial: must be nonnegative, got {self.trial}")
        object.__setattr__(self, "master", int(self.master))
        object.__setattr__(self, "trial", int(self.trial))

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.master, spawn_key=(self.trial,))
        return np.random.Generator(np.random.Philox(seq))


@dataclass(frozen=True, eq=False)
class SignedGraph:
    """Node count plus a canonical edge array.

    ``edges`` has shape ``(m, 3)`` with rows ``(i, j, sign)``, ``i < j``,
    sorted lexicographically, no repeated pairs and ``sign`` in ``{+1, -1}``.
    """

    n: int
    edges: np.ndarray

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ValidationError(f"n: must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        e = np.array(self.edges, dtype=np.int64).reshape(-1, 3)
        i, j, sg = e[:, 0], e[:, 1], e[:, 2]
        if np.any(i < 0) or np.any(j >= self.n):
            raise ValidationError("edges: node id out of range")
        if np.any(i >= j):
            raise ValidationError("edges: each edge must satisfy i < j")
        if not np.all(np.isin(sg, (-1, 1))):
            raise ValidationError("edges: signs must be +1 or -1")
        key = i * self.n + j
        if np.any(np.diff(key) <= 0):
            raise ValidationError("edges: must be sorted by (i, j) without duplicates")
        e.flags.writeable = False
        object.__setattr__(self, "edges", e)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "SignedGraph":
        """Build from arbitrary ``(i, j, sign)`` triples, orienting and sorting them."""
        rows = []
        seen = set()
        for i, j, sg in edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValidationError(f"edges: self-loop at node {i}")
            a, b = min(i, j), max(i, j)
            if (a, b) in seen:
                raise ValidationError(f"edges: repeated pair ({a}, {b})")
            seen.add((a, b))
            rows.append((a, b, int(sg)))
        rows.sort()
        return cls(n, np.array(rows, dtype=np.int64).reshape(-1, 3))

    @property
    def num_edges(self) -> int:
        return self.edges.shape[0]

    def edge_list(self):
        return [tuple(int(x) for x in row) for row in self.edges]

    def __eq__(self, other):
        if not isinstance(other, SignedGraph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    __hash__ = None


def sample(P: ProbabilityMatrix, S: ProbabilityMatrix, seed: Seed) -> SignedGraph:
    """Draw one graph from the signed inhomogeneous Erdős–Rényi model."""
    if P.n != S.n:
        raise ValidationError(f"size mismatch: P is {P.n}x{P.n}, S is {S.n}x{S.n}")
    n = P.n
    rng = seed.generator()
    chunks = []
    # one row of the upper triangle at a time keeps memory at O(n)
    for i in range(n - 1):
        u = rng.random(2 * (n - 1 - i)).reshape(-1, 2)
        present = u[:, 0] < P.entries[i, i + 1:]
        if not present.any():
            continue
        j = np.flatnonzero(present) + i + 1
        neg = u[present, 1] < S.entries[i, j]
        block = np.empty((j.size, 3), dtype=np.int64)
        block[:, 0] = i
        block[:, 1] = j
        block[:, 2] = np.where(neg, -1, 1)
        chunks.append(block)
    edges = np.concatenate(chunks) if chunks else np.empty((0, 3), dtype=np.int64)
    return SignedGraph(n, edges)


def sample_bisection(spec: BisectionSpec, seed: Seed):
    """Sample the two-community model.

    Returns:
        (SignedGraph, ground_truth) where ground truth is ``+1`` on the first
        ``k`` nodes and ``-1`` on the rest.
    """
    P, S = _bisection_matrices(spec)
    return sample(P, S, seed), spec.ground_truth()


@lru_cache(maxsize=8)
def _bisection_matrices(spec: BisectionSpec):
    # read-only arrays, safe to share between calls
    return expand_blocks(bisection_to_blocks(spec))
