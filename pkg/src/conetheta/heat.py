"""Heat-operator annihilation checks: termwise analytic residuals and
central finite differences on evaluator families.

The operator is d/d(omega_ij) - (1/(4 pi i)) d^2/dZ_i dZ_j with the n^2
entries of omega treated as independent coordinates.  For i != j this is
half the directional derivative along the symmetric perturbation
E_ij + E_ji, which is the unique convention under which every theta term
is annihilated exactly.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ShapeMismatch, SignatureBroken
from .linalg import check_symmetric, signature
from .theta import Family, theta_term

DEFAULT_EPS = 1e-4


def _check_indices(n: int, i: int, j: int) -> tuple[int, int]:
    if not (1 <= i <= j <= n):
        raise ShapeMismatch("need 1 <= i <= j <= n")
    return i - 1, j - 1


def heat_term_residual(K, omega, i: int, j: int, Z=None) -> float:
    """|d Theta_K/d omega_ij - (1/4 pi i) d^2 Theta_K/dZ_i dZ_j| at a
    reference point, both sides computed analytically.

    The omega-derivative contributes pi i K_i K_j Theta_K and the Z-side
    (2 pi i K_i)(2 pi i K_j)/(4 pi i) Theta_K; the residual is relative to
    the larger side once that exceeds one, so the check stays at machine
    precision where an indefinite form makes the term large.
    """
    omega = check_symmetric(omega)
    n = omega.shape[0]
    ii, jj = _check_indices(n, i, j)
    K = np.asarray(K, dtype=float)
    if Z is None:
        Z = np.full(n, 0.2 + 0.1j, dtype=complex)
    term = theta_term(K, Z, omega)
    lhs = (1j * math.pi * K[ii] * K[jj]) * term
    rhs = (2j * math.pi * K[ii]) * (2j * math.pi * K[jj]) / (4j * math.pi) * term
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


def _symmetric_step(n: int, ii: int, jj: int) -> np.ndarray:
    E = np.zeros((n, n))
    if ii == jj:
        E[ii, ii] = 1.0
    else:
        E[ii, jj] = E[jj, ii] = 1.0
    return E


def fd_omega_derivative(family: Family, omega, Z, i: int, j: int, eps: float) -> complex:
    """Central difference approximation of the independent-entry derivative
    d/d omega_ij along symmetric perturbations; the i != j direction is
    halved to undo the doubled directional derivative."""
    omega = check_symmetric(omega)
    n = omega.shape[0]
    ii, jj = _check_indices(n, i, j)
    E = _symmetric_step(n, ii, jj)
    sig = signature(omega.imag)
    for sgn in (+1.0, -1.0):
        if signature((omega + sgn * eps * E).imag) != sig:
            raise SignatureBroken("perturbation changed the signature of Im(omega)")
    Z = np.asarray(Z, dtype=complex)
    plus, _ = family.value_tail(omega + eps * E, Z)
    minus, _ = family.value_tail(omega - eps * E, Z)
    scale = 2.0 if ii != jj else 1.0
    return (plus - minus) / (2.0 * eps * scale)


def fd_zz_derivative(family: Family, omega, Z, i: int, j: int, eps: float) -> complex:
    """Second-order central stencil for d^2/dZ_i dZ_j."""
    omega = check_symmetric(omega)
    n = omega.shape[0]
    ii, jj = _check_indices(n, i, j)
    Z = np.asarray(Z, dtype=complex)
    ei = np.zeros(n)
    ej = np.zeros(n)
    ei[ii] = 1.0
    ej[jj] = 1.0
    if ii == jj:
        f0, _ = family.value_tail(omega, Z)
        fp, _ = family.value_tail(omega, Z + eps * ei)
        fm, _ = family.value_tail(omega, Z - eps * ei)
        return (fp - 2.0 * f0 + fm) / (eps * eps)
    fpp, _ = family.value_tail(omega, Z + eps * ei + eps * ej)
    fpm, _ = family.value_tail(omega, Z + eps * ei - eps * ej)
    fmp, _ = family.value_tail(omega, Z - eps * ei + eps * ej)
    fmm, _ = family.value_tail(omega, Z - eps * ei - eps * ej)
    return (fpp - fpm - fmp + fmm) / (4.0 * eps * eps)


def heat_fd_residual(family: Family, omega, Z, i: int, j: int, eps: float = DEFAULT_EPS) -> float:
    """|H F| with both derivatives approximated by central differences; the
    inner family tolerance should sit well below eps**2 so truncation error
    dominates rounding."""
    d_omega = fd_omega_derivative(family, omega, Z, i, j, eps)
    d_zz = fd_zz_derivative(family, omega, Z, i, j, eps)
    return abs(d_omega - d_zz / (4j * math.pi))
