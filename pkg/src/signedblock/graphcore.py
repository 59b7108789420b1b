"""Matrices attached to a signed graph, and the edge-list file format.

Edge-list files are UTF-8 text with LF endings::

    n=<count>
    i,j,s

one line per edge, 0-based ids, ``i < j``, ``s`` written as ``1`` or ``-1``,
lines sorted by ``(i, j)``. Lines starting with ``#`` before the ``n=`` line
are comments.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .errors import EdgeListError
from .sampler import SignedGraph


@dataclass(frozen=True, eq=False)
class DegreeVector:
    d: np.ndarray

    @property
    def d_min(self) -> int:
        return int(self.d.min())

    @property
    def d_max(self) -> int:
        return int(self.d.max())


def adjacency(g: SignedGraph) -> np.ndarray:
    A = np.zeros((g.n, g.n))
    i, j, sg = g.edges[:, 0], g.edges[:, 1], g.edges[:, 2]
    A[i, j] = sg
    A[j, i] = sg
    return A


def unsigned_adjacency(g: SignedGraph) -> np.ndarray:
    return np.abs(adjacency(g))


def degrees(g: SignedGraph) -> DegreeVector:
    d = np.bincount(g.edges[:, :2].ravel(), minlength=g.n).astype(np.int64)
    return DegreeVector(d)


def unnormalized_laplacian(g: SignedGraph) -> np.ndarray:
    """``L = D - A``."""
    return np.diag(degrees(g).d.astype(float)) - adjacency(g)


def normalized_laplacian(g: SignedGraph) -> np.ndarray:
    """``D^{-1/2} (D - A) D^{-1/2}`` with ``D^{-1/2}_ii = 0`` when ``d_i = 0``.

    Isolated nodes therefore get an all-zero row and column, including the
    diagonal entry.
    """
    d = degrees(g).d.astype(float)
    inv_sqrt = np.zeros_like(d)
    pos = d > 0
    inv_sqrt[pos] = 1.0 / np.sqrt(d[pos])
    # the outer product is exactly symmetric, so the result is too
    return np.diag(pos.astype(float)) - np.outer(inv_sqrt, inv_sqrt) * adjacency(g)


def format_edgelist(g: SignedGraph, comments: Iterable[str] = ()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    buf.write(f"n={g.n}\n")
    for i, j, s in g.edges:
        buf.write(f"{i},{j},{s}\n")
    return buf.getvalue()


def write_edgelist(path: Union[str, os.PathLike], g: SignedGraph, comments: Iterable[str] = ()) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_edgelist(g, comments))


def parse_edgelist(text: str) -> SignedGraph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    n = None
    rows = []
    prev = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r")
        if n is None:
            if line.startswith("#"):
                continue
            if not line.startswith("n="):
                raise EdgeListError(lineno, f"expected 'n=<count>', got {line!r}")
            try:
                n = int(line[2:])
            except ValueError:
                raise EdgeListError(lineno, f"bad node count {line[2:]!r}") from None
            if n < 1:
                raise EdgeListError(lineno, "node count must be positive")
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise EdgeListError(lineno, f"expected 'i,j,s', got {line!r}")
        try:
            i, j, s = (int(p) for p in parts)
        except ValueError:
            raise EdgeListError(lineno, f"non-integer field in {line!r}") from None
        if s not in (1, -1):
            raise EdgeListError(lineno, f"sign must be 1 or -1, got {s}")
        if not 0 <= i < j < n:
            raise EdgeListError(lineno, f"need 0 <= i < j < {n}, got i={i}, j={j}")
        if prev is not None and (i, j) <= prev:
            raise EdgeListError(lineno, f"edge ({i},{j}) is out of order or repeated")
        prev = (i, j)
        rows.append((i, j, s))
    if n is None:
        raise EdgeListError(max(len(lines), 1), "missing 'n=<count>' line")
    return SignedGraph(n, np.array(rows, dtype=np.int64).reshape(-1, 3))


def read_edgelist(path: Union[str, os.PathLike]) -> SignedGraph:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return parse_edgelist(fh.read())
