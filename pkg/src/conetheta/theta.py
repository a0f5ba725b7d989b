"""Cone-restricted theta sums and their evaluator algebra.

A single term is Theta_K(Z, omega) = exp(pi i tK omega K + 2 pi i tK Z).
Sums run over shifted positive cones with a rigorous Gaussian tail bound;
evaluators are immutable objects closed symbolically under the lattice
action (prefactor and argument shift stored exactly, only the final sum is
approximate).  Identical inputs always produce bit-identical outputs:
summation is compensated and runs in a canonical order (term norm, then
lexicographic coordinates).
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    BadCharacteristic,
    NonPositiveRestriction,
    RadiusOverflow,
    ShapeMismatch,
)
from .lattice import ConeSpec, SplitBasis, enumerate_cone, enumerate_wedge
from .linalg import check_symmetric
from .rng import DEFAULT_SEED, SplitMix64

#: default absolute tolerance for truncated sums
DEFAULT_TOL = 1e-10

#: default tolerance for cocycle residual checks
DEFAULT_TOL_COCYCLE = 1e-8

_MAX_RADIUS = 64.0


def kahan_sum(values) -> complex:
    """Compensated (Kahan) summation of complex values in the given order."""
    sr = si = cr = ci = 0.0
    for v in values:
        yr = v.real - cr
        tr = sr + yr
        cr = (tr - sr) - yr
        sr = tr
        yi = v.imag - ci
        ti = si + yi
        ci = (ti - si) - yi
        si = ti
    return complex(sr, si)


def theta_term(K, Z, omega) -> complex:
    """exp(pi i tK omega K + 2 pi i tK Z); K may be rational (a lattice point
    plus a characteristic shift)."""
    K = np.asarray(K, dtype=float)
    Z = np.asarray(Z, dtype=complex)
    omega = np.asarray(omega, dtype=complex)
    if K.shape != Z.shape or omega.shape != (K.size, K.size):
        raise ShapeMismatch("incompatible shapes for a theta term")
    return cmath.exp(1j * math.pi * (K @ omega @ K + 2.0 * (K @ Z)))


@dataclass(frozen=True)
class ThetaValue:
    """A truncated sum value together with an absolute bound on the omitted
    terms."""

    value: complex
    tail: float


@dataclass(frozen=True)
class Characteristic:
    """Rational shift a with Delta * a integral, stored reduced mod Z^n with
    components in [0, 1); Delta is a positive diagonal type with a
    divisibility chain."""

    a: tuple
    delta: tuple

    def __post_init__(self):
        delta = tuple(int(d) for d in self.delta)
        if any(d <= 0 for d in delta):
            raise BadCharacteristic("type entries must be positive")
        for d1, d2 in zip(delta, delta[1:]):
            if d2 % d1:
                raise BadCharacteristic("type entries must form a divisibility chain")
        a = tuple(Fraction(x) for x in self.a)
        if len(a) != len(delta):
            raise ShapeMismatch("characteristic and type lengths differ")
        for x, d in zip(a, delta):
            if (x * d).denominator != 1:
                raise BadCharacteristic("Delta * a is not integral")
        a = tuple(x - math.floor(x) for x in a)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "delta", delta)

    @property
    def n(self) -> int:
        return len(self.a)

    def a_float(self) -> np.ndarray:
        return np.array([float(x) for x in self.a])

    def delta_matrix(self) -> np.ndarray:
        return np.diag(np.array(self.delta, dtype=np.int64))


def reduced_characteristics(delta) -> list[Characteristic]:
    """All det(Delta) distinct reduced characteristics of the given type."""
    delta = tuple(int(d) for d in delta)
    axes = [[Fraction(j, d) for j in range(d)] for d in delta]
    return [Characteristic(a, delta) for a in itertools.product(*axes)]


# ---------------------------------------------------------------------------
# tail bound

def tail_bound(cone: ConeSpec, omega, Z, radius: float) -> float:
    """Upper bound for the sum of |Theta_K| over the cone points excluded by
    the radius, i.e. those with tK Q K > radius**2 (Q = Im omega).

    Construction (all steps are inequalities, so the result is a true
    bound): write K = s + G c and t = sqrt(tK Q K).  With lam the smallest
    eigenvalue of the coefficient Gram matrix tG Q G,

      * |Theta_K| = exp(-pi t^2 - 2 pi tK y), y = Im Z, and
        |tK y| <= alpha + beta t  with  beta = |tG y| / sqrt(lam),
        alpha = |ts y| + t_s beta,  t_s = sqrt(ts Q s);
      * the number of cone points with t <= T is at most
        (2 floor((T + t_s)/sqrt(lam)) + 3)^m.

    The tail is summed over unit shells [radius + j, radius + j + 1) with
    the shell count evaluated at the outer edge; the series is cut once a
    term ratio certifies geometric decay.  Requires radius >= beta + 1 (the
    shell maximum must be decreasing); smaller radii return +inf, which
    simply forces the adaptive loop to grow the radius.
    """
    omega = check_symmetric(omega)
    Q = omega.imag
    m = cone.rank
    if m == 0:
        return 0.0
    G = cone.generators.astype(float)
    A = G.T @ Q @ G
    eig = np.linalg.eigvalsh((A + A.T) / 2)
    lam = float(np.min(eig))
    if lam <= 1e-12 * max(1.0, float(np.max(np.abs(eig)))):
        raise NonPositiveRestriction("form is not positive definite on the cone span")
    s = cone.shift_float()
    y = np.asarray(Z, dtype=complex).imag
    sqrt_lam = math.sqrt(lam)
    t_s = math.sqrt(max(float(s @ Q @ s), 0.0)) if np.any(s) else 0.0
    beta = float(np.linalg.norm(G.T @ y)) / sqrt_lam
    alpha = abs(float(s @ y)) + t_s * beta
    if radius < beta + 1.0:
        return math.inf
    total = 0.0
    prev_term = None
    for j in range(0, 100000):
        t = radius + j
        count = (2 * math.floor((t + 1.0 + t_s) / sqrt_lam) + 3) ** m
        log_term = (
            math.log(count) + 2.0 * math.pi * alpha - math.pi * t * t + 2.0 * math.pi * beta * t
        )
        term = math.exp(log_term) if log_term < 700 else math.inf
        total += term
        if term == 0.0:
            break
        if prev_term is not None and term < prev_term / 2 and term < 1e-300:
            total += term  # geometric remainder, ratio <= 1/2
            break
        prev_term = term
        if j > 0 and term / max(total, 1e-300) < 1e-17 and term < prev_term:
            total += 2 * term
            break
    return total


# ---------------------------------------------------------------------------
# evaluator families

class Family:
    """Evaluation rule (omega, Z) -> (value, tail).  Families are immutable
    and deterministic; an Evaluator pins a family to one period matrix."""

    def value_tail(self, omega, Z) -> tuple[complex, float]:
        raise NotImplementedError


@dataclass(frozen=True)
class Evaluator:
    family: Family
    omega: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "omega", check_symmetric(self.omega))

    def __call__(self, Z) -> ThetaValue:
        v, t = self.family.value_tail(self.omega, np.asarray(Z, dtype=complex))
        return ThetaValue(v, t)


@dataclass(frozen=True)
class ConeSum(Family):
    """Sum of theta terms over a shifted cone, truncated adaptively until the
    tail bound clears the tolerance."""

    cone: ConeSpec
    tol: float = DEFAULT_TOL
    max_radius: float = _MAX_RADIUS

    def evaluate(self, omega, Z) -> tuple[complex, float, float]:
        omega = check_symmetric(omega)
        Z = np.asarray(Z, dtype=complex)
        if self.cone.rank == 0:
            return theta_term(self.cone.shift_float(), Z, omega), 0.0, 0.0
        radius = 4.0
        while True:
            bound = tail_bound(self.cone, omega, Z, radius)
            if bound <= self.tol:
                break
            radius += 2.0
            if radius > self.max_radius:
                raise RadiusOverflow(
                    "radius %g exceeded without reaching tol %g" % (self.max_radius, self.tol)
                )
        pts = enumerate_cone(self.cone.with_radius(radius), omega.imag)
        value = kahan_sum(theta_term(K, Z, omega) for K in pts)
        return value, bound, radius

    def value_tail(self, omega, Z):
        v, t, _ = self.evaluate(omega, Z)
        return v, t


@dataclass(frozen=True)
class WedgeSum(Family):
    """Signed sum over the wedge between a positive cone and its image under
    the unit shear at ``index``; the truncation is certified by comparing
    consecutive doubled cutoffs."""

    basis: SplitBasis
    index: int
    tol: float = DEFAULT_TOL
    start: int = 6
    max_cut: int = 96

    def value_tail(self, omega, Z):
        omega = check_symmetric(omega)
        Z = np.asarray(Z, dtype=complex)
        Q = omega.imag

        def partial(R: int) -> complex:
            pts = enumerate_wedge(self.basis, self.index, Q, R)
            return kahan_sum(sign * theta_term(K.astype(float), Z, omega) for K, sign in pts)

        R = self.start
        prev = partial(R)
        while True:
            R *= 2
            cur = partial(R)
            change = abs(cur - prev)
            if change < self.tol:
                return cur, change
            if R > self.max_cut:
                raise RadiusOverflow("wedge cutoff %d exceeded" % self.max_cut)
            prev = cur


@dataclass(frozen=True)
class LambdaShifted(Family):
    """Image of a family under the lattice action of the pair (M, N):

        f(Z) -> exp(2 pi i tN Z + pi i tN omega N) f(Z + Delta M + omega N).

    Prefactors and the argument shift are stored symbolically and applied
    exactly at evaluation time.
    """

    inner: Family
    mvec: tuple
    nvec: tuple
    delta: tuple | None = None

    def value_tail(self, omega, Z):
        omega = check_symmetric(omega)
        Z = np.asarray(Z, dtype=complex)
        M = np.array(self.mvec, dtype=float)
        N = np.array(self.nvec, dtype=float)
        if self.delta is not None:
            M = np.array(self.delta, dtype=float) * M
        pref = cmath.exp(1j * math.pi * (2.0 * (N @ Z) + N @ omega @ N))
        v, t = self.inner.value_tail(omega, Z + M + omega @ N)
        return pref * v, abs(pref) * t


@dataclass(frozen=True)
class ScaledFamily(Family):
    inner: Family
    factor: complex

    def value_tail(self, omega, Z):
        v, t = self.inner.value_tail(omega, Z)
        return self.factor * v, abs(self.factor) * t


# ---------------------------------------------------------------------------
# public operations

def cone_sum(Z, omega, cone: ConeSpec, tol: float = DEFAULT_TOL) -> ThetaValue:
    """Cone-restricted theta sum with certified tail <= tol."""
    v, t, _ = ConeSum(cone, tol).evaluate(omega, Z)
    return ThetaValue(v, t)


def theta_char(
    char: Characteristic, Z, omega, cone: ConeSpec, tol: float = DEFAULT_TOL
) -> ThetaValue:
    """Cone sum with every lattice point shifted by the characteristic."""
    shifted = cone.with_extra_shift(char.a)
    v, t, _ = ConeSum(shifted, tol).evaluate(omega, Z)
    return ThetaValue(v, t)


def cone_evaluator(omega, cone: ConeSpec, tol: float = DEFAULT_TOL) -> Evaluator:
    return Evaluator(ConeSum(cone, tol), np.asarray(omega, dtype=complex))


def lambda_action(Mvec, Nvec, f: Evaluator, omega, delta=None) -> Evaluator:
    """Act on an evaluator by the lattice pair (M, N); ``delta`` twists the
    translation part to Delta M for non-principal types."""
    omega = check_symmetric(omega)
    if np.max(np.abs(omega - f.omega)) > 1e-12:
        raise ShapeMismatch("evaluator is pinned to a different period matrix")
    if delta is None:
        dl = None
    else:
        d = np.asarray(delta)
        dl = tuple(int(x) for x in (np.diag(d) if d.ndim == 2 else d))
    fam = LambdaShifted(
        f.family,
        tuple(int(x) for x in np.asarray(Mvec).ravel()),
        tuple(int(x) for x in np.asarray(Nvec).ravel()),
        dl,
    )
    return Evaluator(fam, omega)


def wedge_function(basis: SplitBasis, omega, k: int | None = None, tol: float = DEFAULT_TOL) -> Evaluator:
    """Evaluator of the signed wedge sum attached to the unit shear at
    position k (defaults to the basis splitting index)."""
    idx = basis.k if k is None else k
    return Evaluator(WedgeSum(basis, idx, tol), np.asarray(omega, dtype=complex))


def sample_points(n: int, count: int = 5, seed: int = DEFAULT_SEED) -> list[np.ndarray]:
    """Deterministic pseudo-random probe points with |Re| <= 0.5, |Im| <= 0.3.

    Each component consumes two splitmix64 draws (real then imaginary part),
    components in order, points in order.
    """
    rng = SplitMix64(seed)
    pts = []
    for _ in range(count):
        Z = np.empty(n, dtype=complex)
        for i in range(n):
            re = rng.next_float() - 0.5
            im = 0.6 * rng.next_float() - 0.3
            Z[i] = complex(re, im)
        pts.append(Z)
    return pts


def _direction_pairs(columns: np.ndarray, k: int, n: int):
    """Unused differential directions for a cochain sitting at position
    (1..k; empty): every M-column and the N-columns beyond k.  ``columns``
    is the 2n x 2n coordinate matrix (N block first)."""
    dirs = []
    for j in range(k, n):
        col = columns[:, j]
        dirs.append(("N_%d" % (j + 1), tuple(col[n:]), tuple(col[:n])))
    for i in range(n):
        col = columns[:, n + i]
        dirs.append(("M_%d" % (i + 1), tuple(col[n:]), tuple(col[:n])))
    return dirs


def verify_cocycle(
    c: Evaluator,
    basis,
    omega,
    samples=5,
    k: int | None = None,
    delta=None,
    seed: int = DEFAULT_SEED,
) -> dict[str, float]:
    """Residuals of the untouched differentials applied to a cochain placed
    at position (1..k; empty): (N_j - 1) c for j > k and (M_i - 1) c for all
    i, evaluated at the sample points.

    ``basis`` is a SplitBasis or a 2n x 2n integer column matrix (the first
    n columns are the N-type directions).  Returns {direction: residual}.
    """
    omega = check_symmetric(omega)
    n = omega.shape[0]
    if isinstance(basis, SplitBasis):
        columns = basis.columns_2n()
        if k is None:
            k = basis.k
    else:
        columns = np.asarray(basis, dtype=np.int64)
        if k is None:
            raise ShapeMismatch("k is required with raw basis columns")
    if columns.shape != (2 * n, 2 * n):
        raise ShapeMismatch("basis columns must be 2n x 2n")
    if isinstance(samples, int):
        samples = sample_points(n, samples, seed)
    residuals: dict[str, float] = {}
    base_vals = [c(Z).value for Z in samples]
    for name, mvec, nvec in _direction_pairs(columns, k, n):
        acted = lambda_action(mvec, nvec, c, omega, delta=delta)
        resid = 0.0
        for Z, base in zip(samples, base_vals):
            resid = max(resid, abs(acted(Z).value - base))
        residuals[name] = resid
    return residuals
