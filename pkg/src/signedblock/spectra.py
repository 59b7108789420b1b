"""Dense symmetric eigendecomposition and derived quantities.

Everything here uses LAPACK's symmetric drivers through ``numpy.linalg``
(Householder tridiagonalization followed by divide and conquer), which is
exact up to rounding for the matrix sizes this package targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

SYMMETRY_TOL = 1e-12
SIMPLE_GAP_TOL = 1e-10
UNIT_TOL = 1e-8


def _check_symmetric(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {M.shape}")
    if M.size and np.max(np.abs(M - M.T)) > SYMMETRY_TOL:
        raise ValidationError("matrix is not symmetric")
    return M


def canonical_sign(u: np.ndarray) -> np.ndarray:
    """Flip ``u`` so that its first nonzero component is positive."""
    nz = np.flatnonzero(np.abs(u) > 1e-12)
    if nz.size and u[nz[0]] < 0:
        return -u
    return u


@dataclass(frozen=True, eq=False)
class SpectralSummary:
    """Ascending eigenvalues plus the lowest eigenpair.

    ``simple`` is False when the two lowest eigenvalues are closer than
    ``SIMPLE_GAP_TOL``; in that case ``u1`` is one arbitrary (but
    deterministic) vector from a degenerate eigenspace.
    """

    eigenvalues: np.ndarray
    u1: np.ndarray
    gap: float
    op_norm: float
    simple: bool

    @property
    def lambda1(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def leading_low_pair(self):
        return self.lambda1, self.u1


def eigendecompose(M) -> SpectralSummary:
    M = _check_symmetric(M)
    w, V = np.linalg.eigh(M)
    u1 = canonical_sign(V[:, 0].copy())
    gap = float(w[1] - w[0]) if w.size > 1 else 0.0
    op_norm = float(max(abs(w[0]), abs(w[-1])))
    for a in (w, u1):
        a.flags.writeable = False
    return SpectralSummary(w, u1, gap, op_norm, w.size > 1 and gap >= SIMPLE_GAP_TOL)


def eigenvalues(M) -> np.ndarray:
    """Ascending eigenvalues only (cheaper than a full decomposition)."""
    return np.linalg.eigvalsh(_check_symmetric(M))


def operator_norm(M) -> float:
    w = eigenvalues(M)
    return float(max(abs(w[0]), abs(w[-1])))


def operator_norm_diff(M1, M2) -> float:
    """Spectral norm of ``M1 - M2`` for symmetric inputs."""
    M1 = np.asarray(M1, dtype=float)
    M2 = np.asarray(M2, dtype=float)
    if M1.shape != M2.shape:
        raise ValidationError(f"dimension mismatch: {M1.shape} vs {M2.shape}")
    return operator_norm(M1 - M2)


def alignment(u, v):
    """Best global sign ``tau`` and the distance ``min ||tau*u - v||``.

    Ties (orthogonal vectors) resolve to ``tau = +1``.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValidationError(f"dimension mismatch: {u.shape} vs {v.shape}")
    for name, x in (("u", u), ("v", v)):
        if abs(np.linalg.norm(x) - 1.0) > UNIT_TOL:
            raise ValidationError(f"{name} is not a unit vector")
    tau = 1 if float(u @ v) >= 0 else -1
    return tau, float(np.linalg.norm(tau * u - v))


def weyl_bound_holds(A, A_bar, tol=1e-8) -> bool:
    """Check ``|lambda_l(A) - lambda_l(A_bar)| <= ||A - A_bar|| + tol`` for all ``l``."""
    lhs = np.max(np.abs(eigenvalues(A) - eigenvalues(A_bar)))
    return bool(lhs <= operator_norm_diff(A, A_bar) + tol)


def sqrt_nonneg(x: float) -> float:
    return math.sqrt(max(x, 0.0))
