"""Dense symmetric-matrix helpers used by the pointwise geometry.

All matrices here are small (dimension <= 8 or so) and dense; numpy is
the storage format.  The only nontrivial operation is SPD inversion,
which goes through a Cholesky factorization so that failure of the
factorization doubles as the positive-definiteness test.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import NotSPDError

# Symmetry slack for inputs that were assembled from floating-point
# products; anything worse than this is a caller bug, not roundoff.
SYM_RTOL = 1e-12


def require_symmetric(a: np.ndarray, rtol: float = SYM_RTOL) -> np.ndarray:
    """Validate that ``a`` is a square symmetric matrix and return it."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSPDError(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a))))
    if np.max(np.abs(a - a.T)) > rtol * scale:
        raise NotSPDError("matrix is not symmetric")
    return a


def invert_spd(a: np.ndarray) -> tuple[np.ndarray, float]:
    """Invert a symmetric positive definite matrix.

    Returns ``(inverse, determinant)``.  The determinant is the squared
    product of the Cholesky diagonal, so it is positive by construction.
    Raises :class:`NotSPDError` if the input is not symmetric or the
    factorization breaks down (matrix not SPD).
    """
    a = require_symmetric(a)
    try:
        c, lower = cho_factor(a, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NotSPDError(f"matrix is not SPD: {exc}") from exc
    except ValueError as exc:
        raise NotSPDError(f"matrix is not SPD: {exc}") from exc
    inv = cho_solve((c, lower), np.eye(a.shape[0]), check_finite=False)
    # enforce exact symmetry of the output; cho_solve returns it only
    # up to roundoff and downstream contractions assume g^{ij} = g^{ji}
    inv = 0.5 * (inv + inv.T)
    det = float(np.prod(np.diag(c)) ** 2)
    if not np.isfinite(det) or det <= 0.0:
        raise NotSPDError("determinant from Cholesky is not positive")
    return inv, det


def symmetrize_pairs(t: np.ndarray) -> np.ndarray:
    """Symmetrize the last two axes of a stacked tensor."""
    return 0.5 * (t + np.swapaxes(t, -1, -2))


def max_abs(*arrays) -> float:
    """Largest absolute entry over any number of arrays (0.0 if empty)."""
    worst = 0.0
    for a in arrays:
        a = np.asarray(a)
        if a.size:
            worst = max(worst, float(np.max(np.abs(a))))
    return worst
