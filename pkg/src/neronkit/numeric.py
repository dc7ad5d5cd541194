"""Floating-point rank decisions for complex Hodge-side data.

Ranks are read off singular values against a threshold relative to the
largest one.  In strict mode a singular value that sits within three orders
of magnitude of the threshold is treated as undecidable.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateFiltration

DEFAULT_TOL = 1e-9
GRAY_BAND = 1e3


def _as_array(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    return A


def singular_values(A) -> np.ndarray:
    A = _as_array(A)
    if A.size == 0:
        return np.zeros(0)
    return np.linalg.svd(A, compute_uv=False)


def numeric_rank(A, tol: float = DEFAULT_TOL, strict: bool = False) -> int:
    s = singular_values(A)
    if s.size == 0 or s[0] == 0.0:
        return 0
    cut = tol * s[0]
    if strict:
        ambiguous = (s > cut / GRAY_BAND) & (s < cut * GRAY_BAND)
        if ambiguous.any():
            raise DegenerateFiltration(
                f"singular value {s[ambiguous][0]:.3e} too close to rank threshold {cut:.3e}"
            )
    return int((s > cut).sum())


def null_space(A, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the numeric kernel."""
    A = _as_array(A)
    n = A.shape[1]
    if A.size == 0:
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(A)
    r = int((s > tol * s[0]).sum()) if s.size and s[0] > 0 else 0
    return vh[r:].conj().T


def column_space(A, tol: float = DEFAULT_TOL) -> np.ndarray:
    A = _as_array(A)
    if A.size == 0:
        return np.zeros((A.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(A, full_matrices=False)
    r = int((s > tol * s[0]).sum()) if s.size and s[0] > 0 else 0
    return u[:, :r]


def intersect_spans(A, B, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Basis of ``span A ∩ span B`` as columns of ``A``-combinations."""
    A, B = column_space(A, tol), column_space(B, tol)
    if A.shape[1] == 0 or B.shape[1] == 0:
        return np.zeros((A.shape[0], 0), dtype=complex)
    K = null_space(np.hstack([A, -B]), tol)
    return column_space(A @ K[: A.shape[1]], tol)


def exp_nilpotent_numeric(N, z: complex) -> np.ndarray:
    """``exp(z N)`` for nilpotent ``N`` by the finite series."""
    N = np.asarray(N, dtype=complex)
    n = N.shape[0]
    out = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        term = term @ N * (z / k)
        out = out + term
    return out
