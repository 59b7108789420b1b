"""Generative model descriptions for random signed graphs.

A signed inhomogeneous Erdős–Rényi model is a pair of symmetric probability
matrices: ``P`` (edge presence) and ``S`` (negative sign given presence).
Block models are expanded into that pair; the two-community bisection model
additionally has closed-form mean spectra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .errors import ValidationError


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _check_prob_square(name: str, values, size: Optional[int] = None) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"{name}: expected a square matrix, got shape {arr.shape}")
    if size is not None and arr.shape[0] != size:
        raise ValidationError(f"{name}: expected {size}x{size}, got {arr.shape[0]}x{arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name}: entries must be finite")
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValidationError(f"{name}: entries must lie in [0, 1]")
    if not np.array_equal(arr, arr.T):
        raise ValidationError(f"{name}: matrix must be symmetric")
    return arr


@dataclass(frozen=True, eq=False)
class ProbabilityMatrix:
    """Symmetric ``n x n`` matrix of probabilities with zero diagonal."""

    entries: np.ndarray

    def __post_init__(self):
        arr = _check_prob_square("entries", self.entries)
        if arr.shape[0] < 1:
            raise ValidationError("entries: need at least one node")
        if np.any(np.diag(arr) != 0.0):
            raise ValidationError("entries: diagonal must be zero")
        object.__setattr__(self, "entries", _frozen(arr))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other):
        if not isinstance(other, ProbabilityMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class BlockSpec:
    """General signed stochastic block model.

    Attributes:
        sizes: cardinality of each block; blocks occupy consecutive node ids.
        P_block: ``m x m`` edge probabilities between blocks.
        S_block: ``m x m`` negative-sign probabilities between blocks.
    """

    sizes: tuple
    P_block: np.ndarray
    S_block: np.ndarray

    def __post_init__(self):
        sizes = tuple(self.sizes)
        if len(sizes) < 2:
            raise ValidationError("sizes: need at least two blocks")
        for s in sizes:
            if isinstance(s, bool) or int(s) != s or s < 1:
                raise ValidationError(f"sizes: block sizes must be positive integers, got {s!r}")
        sizes = tuple(int(s) for s in sizes)
        m = len(sizes)
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "P_block", _frozen(_check_prob_square("P_block", self.P_block, m)))
        object.__setattr__(self, "S_block", _frozen(_check_prob_square("S_block", self.S_block, m)))

    @property
    def m(self) -> int:
        return len(self.sizes)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    def labels(self) -> np.ndarray:
        """Block index of every node."""
        return np.repeat(np.arange(self.m), self.sizes)


def _open_unit(name, value):
    value = float(value)
    if not (0.0 < value < 1.0):
        raise ValidationError(f"{name}: must lie in the open interval (0, 1), got {value!r}")
    return value


@dataclass(frozen=True)
class BisectionSpec:
    """Two equal communities of size ``k``.

    Within-community pairs are joined with probability ``p`` and are negative
    with probability ``s``; across-community pairs use ``q`` and ``1 - s``.
    """

    k: int
    p: float
    q: float
    s: float

    def __post_init__(self):
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 2:
            raise ValidationError(f"k: community size must be an integer >= 2, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))
        for name in ("p", "q", "s"):
            object.__setattr__(self, name, _open_unit(name, getattr(self, name)))

    @property
    def n(self) -> int:
        return 2 * self.k

    @classmethod
    def dense(cls, k, gamma1, gamma2, s):
        """``p = gamma1 / sqrt(k)``, ``q = gamma2 / sqrt(k)``."""
        root = math.sqrt(k)
        return cls(k, gamma1 / root, gamma2 / root, s)

    @classmethod
    def sparse(cls, k, gamma1, gamma2, s):
        """``p = gamma1 log(k) / k``, ``q = gamma2 log(k) / k``."""
        scale = math.log(k) / k
        return cls(k, gamma1 * scale, gamma2 * scale, s)

    @classmethod
    def from_setting(cls, setting, k, gamma1, gamma2, s):
        if setting == "dense":
            return cls.dense(k, gamma1, gamma2, s)
        if setting == "sparse":
            return cls.sparse(k, gamma1, gamma2, s)
        raise ValidationError(f"setting: expected 'dense' or 'sparse', got {setting!r}")

    def ground_truth(self) -> np.ndarray:
        return np.concatenate([np.ones(self.k, dtype=np.int8), -np.ones(self.k, dtype=np.int8)])


@dataclass(frozen=True)
class ClosedFormSpectra:
    """Eigenvalues of the mean matrices as ``(value, multiplicity)`` pairs."""

    adjacency: tuple
    laplacian: tuple

    @staticmethod
    def expand(pairs) -> np.ndarray:
        """Sorted eigenvalue list with multiplicities spelled out."""
        return np.sort(np.concatenate([np.full(mult, val, dtype=float) for val, mult in pairs]))


@dataclass(frozen=True, eq=False)
class MeanModel:
    mean_adjacency: np.ndarray
    expected_degrees: np.ndarray
    mean_normalized_laplacian: np.ndarray
    mean_leading_vector: Optional[np.ndarray] = field(default=None)


def expand_blocks(spec: BlockSpec):
    """Expand block-level probabilities to full ``(P, S)`` node matrices.

    Diagonal blocks are multiplied by the all-ones matrix with its diagonal
    removed, so no node is paired with itself.
    """
    labels = spec.labels()
    P = spec.P_block[np.ix_(labels, labels)].copy()
    S = spec.S_block[np.ix_(labels, labels)].copy()
    np.fill_diagonal(P, 0.0)
    np.fill_diagonal(S, 0.0)
    return ProbabilityMatrix(P), ProbabilityMatrix(S)


def bisection_to_blocks(spec: BisectionSpec) -> BlockSpec:
    p, q, s = spec.p, spec.q, spec.s
    return BlockSpec(
        sizes=(spec.k, spec.k),
        P_block=np.array([[p, q], [q, p]]),
        S_block=np.array([[s, 1.0 - s], [1.0 - s, s]]),
    )


def mean_adjacency(P: ProbabilityMatrix, S: ProbabilityMatrix) -> np.ndarray:
    """Entrywise ``p_ij * (1 - 2 s_ij)``."""
    if P.n != S.n:
        raise ValidationError(f"size mismatch: P is {P.n}x{P.n}, S is {S.n}x{S.n}")
    return P.entries * (1.0 - 2.0 * S.entries)


def mean_model(P: ProbabilityMatrix, S: ProbabilityMatrix) -> MeanModel:
    """Mean adjacency, expected degrees and degree-normalized mean Laplacian.

    Nodes with zero expected degree get zero rows and columns in the
    normalized Laplacian, mirroring the convention used for sampled graphs.
    """
    A_bar = mean_adjacency(P, S)
    d_bar = P.entries.sum(axis=1)
    inv_sqrt = np.zeros_like(d_bar)
    pos = d_bar > 0
    inv_sqrt[pos] = 1.0 / np.sqrt(d_bar[pos])
    lap = np.diag(pos.astype(float)) - np.outer(inv_sqrt, inv_sqrt) * A_bar
    return MeanModel(_frozen(A_bar), _frozen(d_bar), _frozen(lap))


@lru_cache(maxsize=8)
def closed_form_mean(spec: BisectionSpec):
    """Mean matrices of the bisection model and their exact spectra.

    Returns:
        (MeanModel, ClosedFormSpectra). The mean model carries the unit vector
        ``(1_k, -1_k) / sqrt(2k)`` spanning the least Laplacian eigenspace.
    """
    k, p, q, s = spec.k, spec.p, spec.q, spec.s
    n = 2 * k
    mm = mean_model(*expand_blocks(bisection_to_blocks(spec)))
    lead = np.concatenate([np.ones(k), -np.ones(k)]) / math.sqrt(n)

    d_bar = p * (k - 1) + k * q
    c = 1.0 - 2.0 * s
    adjacency = (
        (c * (p * (k - 1) + q * k), 1),
        (c * (p * (k - 1) - q * k), 1),
        (-p * c, n - 2),
    )
    laplacian = (
        (2.0 * s, 1),
        (1.0 - c * (p * (k - 1) - q * k) / d_bar, 1),
        (1.0 + c * p / d_bar, n - 2),
    )
    model = MeanModel(mm.mean_adjacency, mm.expected_degrees, mm.mean_normalized_laplacian, _frozen(lead))
    return model, ClosedFormSpectra(adjacency, laplacian)


def block_spec(sizes: Sequence[int], P_block, S_block) -> BlockSpec:
    """Convenience constructor accepting nested lists."""
    return BlockSpec(tuple(sizes), np.asarray(P_block, dtype=float), np.asarray(S_block, dtype=float))
