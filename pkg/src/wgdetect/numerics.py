"""Dense complex linear algebra and the Dawson kernel used by all physics modules.

Everything works on plain numpy arrays (complex128, row-major storage) and is
stateless, so every function here is safe to call concurrently.  The drift
matrices produced elsewhere in the package are complex *symmetric* but not
Hermitian, so only general-purpose solvers are usable; there is deliberately
no Hermitian fast path.
"""

from __future__ import annotations

import warnings

import numpy as np
import scipy.linalg
from scipy.special import dawsn


class SingularMatrixError(ValueError):
    """A linear system was singular to working precision.

    The magnitude of the smallest LU pivot is available as ``pivot``.
    """

    def __init__(self, message: str, pivot: float):
        super().__init__(message)
        self.pivot = float(pivot)


class EigenConvergenceError(RuntimeError):
    """The QR eigenvalue iteration failed to converge."""


def as_complex_matrix(a, name: str = "matrix", square: bool = False) -> np.ndarray:
    """Coerce ``a`` to a finite complex128 2-D array.

    All entries must be finite (no NaN/Inf); ``square=True`` additionally
    requires equal dimensions.  This is the single validation gate used by
    every operation below.
    """
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {m.shape}")
    if m.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not (np.isfinite(m.real).all() and np.isfinite(m.imag).all()):
        raise ValueError(f"{name} contains non-finite entries")
    if square and m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    return m


def linear_solve(a, b) -> np.ndarray:
    """Solve ``A X = B`` by LU factorization with partial pivoting.

    ``b`` may be a vector or a matrix of right-hand sides; the result has the
    same shape.  Raises :class:`SingularMatrixError` (carrying the offending
    pivot magnitude) when ``A`` is singular to working precision.
    """
    a = as_complex_matrix(a, "A", square=True)
    b_in = np.asarray(b, dtype=np.complex128)
    vector_rhs = b_in.ndim == 1
    bm = as_complex_matrix(b_in[:, None] if vector_rhs else b_in, "B")
    if bm.shape[0] != a.shape[0]:
        raise ValueError(f"B has {bm.shape[0]} rows, expected {a.shape[0]}")

    with warnings.catch_warnings():
        # scipy warns on exactly-zero pivots; we turn those into an error below
        warnings.simplefilter("ignore")
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diagonal(lu))
    largest = float(pivots.max()) if pivots.size else 0.0
    smallest = float(pivots.min()) if pivots.size else 0.0
    if smallest <= a.shape[0] * np.finfo(np.float64).eps * largest:
        raise SingularMatrixError(
            f"singular matrix: smallest pivot magnitude {smallest:.3e}", smallest
        )
    x = scipy.linalg.lu_solve((lu, piv), bm, check_finite=False)
    return x[:, 0] if vector_rhs else x


def eigenvalues(a) -> np.ndarray:
    """Eigenvalues (with multiplicity) of a general complex square matrix.

    Balanced Hessenberg reduction followed by shifted QR, via LAPACK.  The
    returned order is unspecified; callers must sort.
    """
    a = as_complex_matrix(a, "A", square=True)
    try:
        return scipy.linalg.eigvals(a, check_finite=False)
    except scipy.linalg.LinAlgError as err:
        # LAPACK reports the leading order up to which convergence failed
        raise EigenConvergenceError(f"eigenvalue iteration did not converge: {err}") from err


def min_singular_value(a) -> float:
    """Smallest singular value of ``a`` (need not be square).

    Computed from the full SVD rather than eigenvalues of A^dag A, which
    would square the condition number and lose half the digits for small
    singular values.
    """
    a = as_complex_matrix(a, "A")
    s = np.linalg.svd(a, compute_uv=False)
    return float(s[-1])


def dawson(x):
    """Dawson integral F(x) = exp(-x^2) * int_0^x exp(t^2) dt.

    Odd in x, peaked near x = 1 with |F| < 0.6, and F -> 0 as |x| -> inf.
    Accepts scalars or arrays.  Backed by a rational approximation, so it is
    cheap enough to sit inside per-pair coupling loops.
    """
    return dawsn(x)
