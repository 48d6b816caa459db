"""Small dense linear-algebra helpers used by the fitting engine and diagnostics."""

import numpy as np

# Relative cutoff deciding rank in least-squares solves.
RANK_RTOL = 1e-10


def solve_least_squares(A, b):
    """Minimum-norm least-squares solution of ``A x = b``.

    A is (m, k), b is length m.  Rank-deficient systems (including all-zero
    columns) return the minimum-norm minimizer instead of raising.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-d design, got shape {A.shape}")
    if b.ndim != 1 or b.shape[0] != A.shape[0]:
        raise ValueError(f"shape mismatch: A is {A.shape}, b has length {b.shape}")
    if A.shape[1] == 0:
        return np.zeros(0)
    if A.shape[0] == 0:
        return np.zeros(A.shape[1])
    x, _, _, _ = np.linalg.lstsq(A, b, rcond=RANK_RTOL)
    return x


def singular_value_extremes(A):
    """Return (smallest, largest) singular value of a dense matrix A with m >= k >= 1."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] == 0 or A.shape[1] == 0:
        raise ValueError(f"expected a non-empty 2-d matrix, got shape {A.shape}")
    if A.shape[0] < A.shape[1]:
        raise ValueError(f"expected m >= k, got shape {A.shape}")
    s = np.linalg.svd(A, compute_uv=False)
    return float(s[-1]), float(s[0])
