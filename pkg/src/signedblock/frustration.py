"""Frustration functionals, exhaustive oracles and the sign estimator.

For a ±1 labeling every edge term ``|f(i) - sigma_ij f(j)|`` is 0 or 2, so
minimizing a frustration over ±1 labelings reduces to minimizing the number
of violated edges. The exhaustive searches below enumerate labelings with
``f(0) = +1`` fixed (a global flip changes nothing).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SizeLimitError, ValidationError
from .graphcore import degrees, normalized_laplacian, unnormalized_laplacian
from .sampler import SignedGraph
from .spectra import eigenvalues

ETA2_MAX_NODES = 22
BALANCE_MAX_NODES = 16
ETA1_MAX_NODES = 12
CHEEGER_TOL = 1e-9

_CHUNK = 1 << 16


def _as_labeling(f, n, allow_zero=False) -> np.ndarray:
    f = np.asarray(f)
    if f.shape != (n,):
        raise ValidationError(f"labeling must have length {n}, got shape {f.shape}")
    allowed = (-1, 0, 1) if allow_zero else (-1, 1)
    if not np.all(np.isin(f, allowed)):
        raise ValidationError(f"labeling entries must lie in {allowed}")
    return f.astype(np.int64)


def eta2(g: SignedGraph, f) -> float:
    """l2-frustration of a labeling with entries in ``{+1, -1, 0}``."""
    f = _as_labeling(f, g.n, allow_zero=True)
    i, j, sg = g.edges[:, 0], g.edges[:, 1], g.edges[:, 2]
    num = float(np.sum((f[i] - sg * f[j]) ** 2))
    den = float(np.sum(f * f * degrees(g).d))
    if den == 0:
        raise ValidationError("eta2 undefined: labeling has no support on nodes of positive degree")
    return num / den


def _min_violations(n, edges):
    """Exhaustive minimum number of violated edges over ±1 labelings.

    Labelings are encoded as integers ``c`` in ``[0, 2**(n-1))``; node
    ``i >= 1`` carries ``-1`` iff bit ``n-1-i`` of ``c`` is set, so among
    ties the largest code is the lexicographically smallest labeling
    (with ``-1 < +1``).

    Returns:
        (min_violations, best_code)
    """
    if edges.shape[0] == 0 or n <= 1:
        return 0, (1 << max(n - 1, 0)) - 1
    i, j, sg = edges[:, 0], edges[:, 1], edges[:, 2]
    flip = (sg < 0).astype(np.int64)
    shift_i = n - 1 - i
    shift_j = n - 1 - j
    # node 0 is pinned to +1 and owns no bit (its shift is n-1)
    total = 1 << (n - 1)
    best, best_code = None, -1
    for start in range(0, total, _CHUNK):
        codes = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        viol = np.zeros(codes.size, dtype=np.int64)
        for a, b, fl in zip(shift_i, shift_j, flip):
            bi = (codes >> a) & 1 if a < n - 1 else 0
            bj = (codes >> b) & 1
            viol += (bi ^ bj) ^ fl
        m = int(viol.min())
        code = int(codes[np.flatnonzero(viol == m)[-1]])
        if best is None or m < best or (m == best and code > best_code):
            best, best_code = m, code
    return best, best_code


def _decode(code, n) -> np.ndarray:
    f = np.ones(n, dtype=np.int64)
    for i in range(1, n):
        if (code >> (n - 1 - i)) & 1:
            f[i] = -1
    return f


def _check_size(g, cap, what):
    if g.n > cap:
        raise SizeLimitError(
            f"{what} is exhaustive and limited to n <= {cap} (got n = {g.n}); "
            "use the spectral estimator sgn(u1) for larger graphs"
        )


@dataclass(frozen=True, eq=False)
class FrustrationReport:
    eta2_value: float
    argmin_labeling: np.ndarray
    lambda1_normalized: float
    cheeger_upper: float
    holds: tuple


def eta2_index_bruteforce(g: SignedGraph) -> FrustrationReport:
    """Exact l2-frustration index plus both sides of its Cheeger sandwich."""
    _check_size(g, ETA2_MAX_NODES, "eta2_index_bruteforce")
    if g.num_edges == 0:
        raise ValidationError("eta2 undefined on a graph without edges")
    _, code = _min_violations(g.n, g.edges)
    f = _decode(code, g.n)
    value = eta2(g, f)
    lam1 = float(eigenvalues(normalized_laplacian(g))[0])
    upper = math.sqrt(8.0 * max(lam1, 0.0))
    holds = (lam1 <= value + CHEEGER_TOL, value <= upper + CHEEGER_TOL)
    return FrustrationReport(value, f, lam1, upper, holds)


def eta1_balance_bruteforce(g: SignedGraph):
    """Minimum number of edge deletions that make the signature balanced.

    Returns:
        (deletions, balanced)
    """
    _check_size(g, BALANCE_MAX_NODES, "eta1_balance_bruteforce")
    v, _ = _min_violations(g.n, g.edges)
    return v, v == 0


def eta1_index_bruteforce(g: SignedGraph, denominator: str = "volume") -> float:
    """l1-frustration index: minimum over nonempty node subsets ``V1`` of

    ``(eta1(V1) + |cut(V1)|) / vol(V1)``, where ``eta1(V1)`` sums
    ``|f(i) - sigma_ij f(j)|`` over edges with both ends in ``V1`` for the
    best ±1 labeling of ``V1``. Subsets of zero volume are skipped.

    ``denominator="cardinality"`` divides by ``|V1|`` instead of the volume.
    """
    _check_size(g, ETA1_MAX_NODES, "eta1_index_bruteforce")
    if denominator not in ("volume", "cardinality"):
        raise ValidationError(f"denominator: expected 'volume' or 'cardinality', got {denominator!r}")
    n = g.n
    d = degrees(g).d
    e = g.edges
    best = math.inf
    for mask in range(1, 1 << n):
        inside = np.array([(mask >> v) & 1 for v in range(n)], dtype=bool)
        vol = int(d[inside].sum()) if denominator == "volume" else int(inside.sum())
        if vol == 0:
            continue
        in_i, in_j = inside[e[:, 0]], inside[e[:, 1]]
        cut = int(np.count_nonzero(in_i ^ in_j))
        internal = e[in_i & in_j]
        if internal.shape[0]:
            nodes = np.flatnonzero(inside)
            relabel = np.full(n, -1, dtype=np.int64)
            relabel[nodes] = np.arange(nodes.size)
            local = internal.copy()
            local[:, 0] = relabel[internal[:, 0]]
            local[:, 1] = relabel[internal[:, 1]]
            viol, _ = _min_violations(nodes.size, local)
        else:
            viol = 0
        best = min(best, (2 * viol + cut) / vol)
    if best is math.inf:
        raise ValidationError("eta1 undefined: every node subset has zero volume")
    return best


@dataclass(frozen=True)
class Eta1Report:
    eta1_value: float
    lambda1_unnormalized: float
    max_degree: int
    lower: float
    upper: float
    holds: tuple


def eta1_cheeger_report(g: SignedGraph) -> Eta1Report:
    """Check ``lambda1(L)/2 <= eta1(sigma) <= sqrt(8 * Delta * lambda1(L))``."""
    value = eta1_index_bruteforce(g)
    lam1 = float(eigenvalues(unnormalized_laplacian(g))[0])
    delta = degrees(g).d_max
    lower = 0.5 * lam1
    upper = math.sqrt(8.0 * delta * max(lam1, 0.0))
    holds = (lower <= value + CHEEGER_TOL, value <= upper + CHEEGER_TOL)
    return Eta1Report(value, lam1, delta, lower, upper, holds)


def sign_estimator(u) -> np.ndarray:
    """``+1`` where ``u_i >= 0``, ``-1`` elsewhere."""
    return np.where(np.asarray(u, dtype=float) >= 0, 1, -1).astype(np.int8)


def misclassification(f, truth):
    """Disagreements with ``truth`` after the better of the two global flips.

    Returns:
        (count, rate)
    """
    f = np.asarray(f)
    truth = np.asarray(truth)
    if f.shape != truth.shape or f.ndim != 1:
        raise ValidationError(f"length mismatch: {f.shape} vs {truth.shape}")
    if f.size == 0:
        raise ValidationError("empty labeling")
    wrong = int(np.count_nonzero(f != truth))
    count = min(wrong, f.size - wrong)
    return count, count / f.size
