"""Dense complex/real matrix arithmetic: signatures, inverses and the
branch-controlled square root of a determinant.

All inputs are small (n <= 8) IEEE double matrices.  Values are treated as
immutable; every function is pure.
"""

from __future__ import annotations

import cmath

import numpy as np

from .errors import DegenerateForm, ShapeMismatch, SingularMatrix

#: relative eigenvalue threshold below which a form counts as degenerate
TOL_DEGENERATE = 1e-9

#: max-norm tolerance for inverse round trips
TOL_LINALG = 1e-10


def as_square_complex(M) -> np.ndarray:
    A = np.asarray(M, dtype=complex)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeMismatch("expected a square matrix, got shape %r" % (A.shape,))
    if not np.all(np.isfinite(A.view(float))):
        raise ShapeMismatch("matrix entries must be finite")
    return A


def as_real_symmetric(Q) -> np.ndarray:
    A = np.asarray(Q, dtype=float)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeMismatch("expected a square matrix, got shape %r" % (A.shape,))
    if not np.all(np.isfinite(A)):
        raise ShapeMismatch("matrix entries must be finite")
    # the upper triangle is authoritative; mirror it
    return np.triu(A) + np.triu(A, 1).T


def check_symmetric(M, tol: float = 1e-12) -> np.ndarray:
    A = as_square_complex(M)
    if A.shape[0] and np.max(np.abs(A - A.T)) > tol * max(1.0, np.max(np.abs(A))):
        raise ShapeMismatch("matrix is not symmetric")
    return (A + A.T) / 2


def signature(Q, tol_degenerate: float = TOL_DEGENERATE) -> tuple[int, int]:
    """Signature (neg, pos) of a nondegenerate real symmetric form.

    Raises DegenerateForm when some eigenvalue is within ``tol_degenerate``
    (relative to the largest magnitude eigenvalue) of zero.
    """
    A = as_real_symmetric(Q)
    eig = np.linalg.eigvalsh(A)
    scale = float(np.max(np.abs(eig))) if eig.size else 0.0
    if scale == 0.0 or np.min(np.abs(eig)) <= tol_degenerate * scale:
        raise DegenerateForm("eigenvalue within %g of zero" % tol_degenerate)
    neg = int(np.sum(eig < 0))
    return neg, A.shape[0] - neg


def sym_inverse(M) -> np.ndarray:
    """Inverse of a complex square matrix, verified by its round trip."""
    A = as_square_complex(M)
    try:
        X = np.linalg.inv(A)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(str(exc)) from exc
    resid = np.max(np.abs(A @ X - np.eye(A.shape[0])))
    if not np.isfinite(resid) or resid > TOL_LINALG:
        raise SingularMatrix("round-trip residual %g exceeds %g" % (resid, TOL_LINALG))
    return X


def principal_sqrt_det(M) -> complex:
    """Principal square root of det(M): the root with argument in (-pi/2, pi/2].

    The residual sign ambiguity of a half-integral power is deliberately not
    resolved here; callers absorb it into their unit multiplier.
    """
    A = as_square_complex(M)
    d = complex(np.linalg.det(A))
    if d == 0 or not np.isfinite(abs(d)):
        raise SingularMatrix("determinant is zero")
    if d.imag == 0.0:
        d = complex(d.real, 0.0)  # normalise -0.0 so the branch cut is stable
    w = cmath.sqrt(d)
    if w.real < 0 or (w.real == 0 and w.imag < 0):
        w = -w
    return w
