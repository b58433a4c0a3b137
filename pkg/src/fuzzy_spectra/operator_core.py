"""Dense complex operator algebra.

Operators are plain square ``numpy`` arrays of dtype ``complex128``.  Everything
here is a pure function: inputs are never modified in place.
"""
from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np


class DimensionMismatch(ValueError):
    pass


class NonHermitianError(ValueError):
    def __init__(self, asymmetry: float, bound: float):
        super().__init__(
            f"operator is not Hermitian: ||A - A^dagger||_F = {asymmetry:.3e} > {bound:.3e}"
        )
        self.asymmetry = asymmetry


class EigenSystem(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_operator(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {A.shape}")
    return A


def _check_pair(A, B):
    A, B = as_operator(A), as_operator(B)
    if A.shape != B.shape:
        raise DimensionMismatch(f"dimension mismatch: {A.shape[0]} vs {B.shape[0]}")
    return A, B


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def adjoint(A) -> np.ndarray:
    return as_operator(A).conj().T


def commutator(A, B) -> np.ndarray:
    A, B = _check_pair(A, B)
    return A @ B - B @ A


def frobenius_distance(A, B) -> float:
    A, B = _check_pair(A, B)
    return float(np.linalg.norm(A - B))


def polynomial_apply(coeffs: Sequence[complex], A) -> np.ndarray:
    """Evaluate ``sum_j coeffs[j] A**j`` by Horner's rule (``A**0`` is the identity)."""
    A = as_operator(A)
    out = np.zeros_like(A)
    eye = identity(A.shape[0])
    for c in reversed(list(coeffs)):
        out = out @ A + c * eye
    return out


def product_of_shifts(A, roots: Sequence[complex]) -> np.ndarray:
    """``prod_r (A - r I)``; used for minimal-polynomial identities."""
    A = as_operator(A)
    eye = identity(A.shape[0])
    out = eye.copy()
    for r in roots:
        out = out @ (A - r * eye)
    return out


def hermitian_eigensystem(A, rtol: float = 1e-10) -> EigenSystem:
    """Eigen-decomposition of a Hermitian operator.

    Eigenvalues come back ascending.  Each eigenvector is rescaled by a phase
    so that its first component with modulus above ``1e-12`` is real and
    positive, which makes comparisons between runs deterministic.

    Raises
    ------
    NonHermitianError
        if ``||A - A^dagger||_F > rtol * (1 + ||A||_F)``.
    """
    A = as_operator(A)
    asym = float(np.linalg.norm(A - A.conj().T))
    bound = rtol * (1.0 + float(np.linalg.norm(A)))
    if asym > bound:
        raise NonHermitianError(asym, bound)
    w, V = np.linalg.eigh(0.5 * (A + A.conj().T))
    for col in range(V.shape[1]):
        v = V[:, col]
        nz = np.flatnonzero(np.abs(v) > 1e-12)
        if nz.size:
            c = v[nz[0]]
            V[:, col] = v * (abs(c) / c)
    return EigenSystem(w, V)


def spectral_projectors(A: np.ndarray, eigenvalues) -> dict:
    """Orthogonal projectors of a Hermitian ``A`` onto the eigenspaces of the given eigenvalues."""
    w, V = hermitian_eigensystem(A)
    out = {}
    for ev in eigenvalues:
        cols = V[:, np.abs(w - ev) < 0.25]
        out[ev] = cols @ cols.conj().T
    return out


def span_rank(operators: Sequence[np.ndarray], rtol: float = 1e-9) -> int:
    """Rank of the linear span of ``operators`` viewed as vectors.

    Each operator is normalised before the SVD so that wildly different
    magnitudes (e.g. high powers of a diagonal generator) do not swamp the
    relative threshold.
    """
    rows = []
    for op in operators:
        v = np.asarray(op, dtype=complex).ravel()
        n = np.linalg.norm(v)
        if n > 0:
            rows.append(v / n)
    if not rows:
        return 0
    s = np.linalg.svd(np.array(rows), compute_uv=False)
    return int(np.sum(s > rtol * s[0]))
