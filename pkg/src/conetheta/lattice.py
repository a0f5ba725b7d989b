"""Integer lattice machinery: the rank-2n lattice with its reference
splitting, symplectic/theta-subgroup membership, split bases for an
indefinite form, and enumeration of positive cones and wedge regions.

Conventions.  A lattice vector is a 2n integer column (v-part, m-part):
the first n coordinates multiply the period matrix, the last n are plain
integer translations.  A split basis is stored as two n x n integer
matrices N and M whose columns are the basis vectors of the two halves,
tied by tN @ M = I.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    NonPositiveRestriction,
    NotFound,
    NotGamma12,
    NotSplitAfterTransform,
    NotSymplectic,
    ShapeMismatch,
    SignatureMismatch,
)
from .intmat import (
    as_int_matrix,
    int_det,
    is_primitive_columns,
    unimodular_completion,
    unimodular_inverse,
)
from .linalg import as_real_symmetric, signature

_POS_EIG_TOL = 1e-10


def _is_positive_definite(A: np.ndarray) -> bool:
    if A.shape[0] == 0:
        return True
    eig = np.linalg.eigvalsh((A + A.T) / 2)
    return bool(np.min(eig) > _POS_EIG_TOL * max(1.0, float(np.max(np.abs(eig)))))


@dataclass(frozen=True)
class SplitBasis:
    """Basis {N_1..N_n, M_1..M_n} with tN @ M = I and splitting index k."""

    N: np.ndarray
    M: np.ndarray
    k: int

    def __post_init__(self):
        N = as_int_matrix(self.N)
        M = as_int_matrix(self.M)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "M", M)
        n = N.shape[0]
        if N.shape != (n, n) or M.shape != (n, n):
            raise ShapeMismatch("N and M must be square of equal size")
        if not (0 <= self.k <= n):
            raise ShapeMismatch("index k out of range")
        if not np.array_equal(N.T @ M, np.eye(n, dtype=np.int64)):
            raise ShapeMismatch("tN @ M != I")

    @property
    def n(self) -> int:
        return int(self.N.shape[0])

    def columns_2n(self) -> np.ndarray:
        """The 2n x 2n block-diagonal coordinate matrix (N | M)."""
        n = self.n
        P = np.zeros((2 * n, 2 * n), dtype=np.int64)
        P[:n, :n] = self.N
        P[n:, n:] = self.M
        return P

    def positive_generators(self) -> np.ndarray:
        """Columns N_{k+1}..N_n spanning the positive cone."""
        return self.N[:, self.k:]

    @classmethod
    def identity(cls, n: int, k: int) -> "SplitBasis":
        eye = np.eye(n, dtype=np.int64)
        return cls(eye, eye.copy(), k)


@dataclass(frozen=True)
class ModularElement:
    """Element of Sp(2n, Z) stored as four n x n integer blocks."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        blocks = {}
        shape = None
        for name in "ABCD":
            blk = as_int_matrix(getattr(self, name))
            if shape is None:
                shape = blk.shape
            if blk.shape != shape or blk.shape[0] != blk.shape[1]:
                raise ShapeMismatch("blocks must be square and equally sized")
            blocks[name] = blk
        for name, blk in blocks.items():
            object.__setattr__(self, name, blk)

    @property
    def n(self) -> int:
        return int(self.A.shape[0])

    def matrix(self) -> np.ndarray:
        return np.block([[self.A, self.B], [self.C, self.D]]).astype(np.int64)

    @classmethod
    def from_matrix(cls, M) -> "ModularElement":
        M = as_int_matrix(M)
        if M.shape[0] % 2:
            raise ShapeMismatch("matrix size must be even")
        n = M.shape[0] // 2
        return cls(M[:n, :n], M[:n, n:], M[n:, :n], M[n:, n:])

    @classmethod
    def identity(cls, n: int) -> "ModularElement":
        eye = np.eye(n, dtype=np.int64)
        zero = np.zeros((n, n), dtype=np.int64)
        return cls(eye, zero, zero.copy(), eye.copy())

    def __matmul__(self, other: "ModularElement") -> "ModularElement":
        return ModularElement.from_matrix(self.matrix() @ other.matrix())

    def inverse(self) -> "ModularElement":
        # symplectic inverse: (tD, -tB; -tC, tA)
        return ModularElement(self.D.T, -self.B.T, -self.C.T, self.A.T)

    def is_identity(self) -> bool:
        return np.array_equal(self.matrix(), np.eye(2 * self.n, dtype=np.int64))


def is_symplectic(g: ModularElement) -> bool:
    """Exact check of the three block relations defining Sp(2n, Z)."""
    A, B, C, D = g.A, g.B, g.C, g.D
    eye = np.eye(g.n, dtype=np.int64)
    return (
        np.array_equal(A.T @ C, C.T @ A)
        and np.array_equal(B.T @ D, D.T @ B)
        and np.array_equal(A.T @ D - C.T @ B, eye)
    )


def is_gamma12(g: ModularElement) -> bool:
    """Theta-subgroup membership: diag(tA C) and diag(tB D) both even."""
    if not is_symplectic(g):
        raise NotSymplectic("element is not symplectic")
    d1 = np.diag(g.A.T @ g.C)
    d2 = np.diag(g.B.T @ g.D)
    return bool(np.all(d1 % 2 == 0) and np.all(d2 % 2 == 0))


@dataclass(frozen=True)
class ConeSpec:
    """Shifted sublattice cone: points shift + sum_i c_i * gen_i with the
    quadratic form bounded by radius**2."""

    generators: np.ndarray  # n x m integer, primitive independent columns
    shift: tuple  # rational n-vector (Fractions)
    radius: float

    def __post_init__(self):
        G = as_int_matrix(self.generators)
        if G.ndim != 2:
            raise ShapeMismatch("generators must form an n x m matrix")
        object.__setattr__(self, "generators", G)
        shift = tuple(Fraction(s) for s in self.shift)
        if len(shift) != G.shape[0]:
            raise ShapeMismatch("shift length does not match ambient dimension")
        object.__setattr__(self, "shift", shift)
        if self.radius < 0:
            raise ShapeMismatch("radius must be nonnegative")
        if G.shape[1]:
            if np.linalg.matrix_rank(G) != G.shape[1]:
                raise ShapeMismatch("generators are linearly dependent")
            if not is_primitive_columns(G):
                raise ShapeMismatch("generators are not a primitive sublattice basis")

    @property
    def n(self) -> int:
        return int(self.generators.shape[0])

    @property
    def rank(self) -> int:
        return int(self.generators.shape[1])

    def shift_float(self) -> np.ndarray:
        return np.array([float(s) for s in self.shift])

    def with_radius(self, radius: float) -> "ConeSpec":
        return ConeSpec(self.generators, self.shift, radius)

    def with_extra_shift(self, extra) -> "ConeSpec":
        new = tuple(a + Fraction(b) for a, b in zip(self.shift, extra))
        return ConeSpec(self.generators, new, self.radius)

    @classmethod
    def full_lattice(cls, n: int, radius: float = 0.0) -> "ConeSpec":
        return cls(np.eye(n, dtype=np.int64), (0,) * n, radius)


def is_split_basis(basis: SplitBasis, Q, k: int) -> bool:
    """True iff Q is positive definite on the last n-k N-columns and Q^{-1}
    on the last n-k M-columns."""
    Q = as_real_symmetric(Q)
    n = basis.n
    if signature(Q) != (k, n - k):
        raise SignatureMismatch("signature(Q) != (%d, %d)" % (k, n - k))
    Npos = basis.N[:, k:].astype(float)
    Mpos = basis.M[:, k:].astype(float)
    Qinv = np.linalg.inv(Q)
    return _is_positive_definite(Npos.T @ Q @ Npos) and _is_positive_definite(
        Mpos.T @ Qinv @ Mpos
    )


def _short_vectors(n: int, bound: int) -> list[np.ndarray]:
    """Nonzero integer vectors with sup-norm <= bound, first nonzero entry
    positive, sorted by (euclidean norm, lexicographic)."""
    vecs = []
    ranges = [range(-bound, bound + 1)] * n
    for coords in itertools.product(*ranges):
        if all(c == 0 for c in coords):
            continue
        first = next(c for c in coords if c != 0)
        if first < 0:
            continue
        vecs.append(np.array(coords, dtype=np.int64))
    vecs.sort(key=lambda v: (float(v @ v), tuple(int(x) for x in v)))
    return vecs


def find_split_basis(Q, k: int, bound: int = 3) -> SplitBasis:
    """Search for a split basis with N-entries bounded by ``bound``.

    Strategy: enumerate candidate positive columns from short vectors
    (ordered by norm), complete them to a unimodular matrix, then perturb the
    completion by integer multiples of the positive columns until the dual
    positivity condition holds.  Failure raises NotFound; the search being
    exhaustive up to the bound, this is evidence but not proof of
    nonexistence.
    """
    Q = as_real_symmetric(Q)
    n = Q.shape[0]
    if signature(Q) != (k, n - k):
        raise SignatureMismatch("signature(Q) != (%d, %d)" % (k, n - k))
    if bound < 1:
        raise NotFound("empty search space (bound < 1)")
    reference = SplitBasis.identity(n, k)
    if is_split_basis(reference, Q, k):
        return reference
    Qinv = np.linalg.inv(Q)
    m = n - k
    shorts = _short_vectors(n, bound)
    positives = [v for v in shorts if (m == 0) or float(v @ Q @ v) > 0]

    def dual_condition(Nfull: np.ndarray) -> bool:
        M = unimodular_inverse(Nfull).T
        Mpos = M[:, k:].astype(float)
        return _is_positive_definite(Mpos.T @ Qinv @ Mpos)

    if m == 0:
        # no positivity constraint on N; only the dual form must be positive,
        # which for k = n means Q^{-1} restricted to nothing: identity works
        eye = np.eye(n, dtype=np.int64)
        return SplitBasis(eye, eye.copy(), k)

    candidates = itertools.combinations(range(len(positives)), m)
    tried = 0
    for idxs in candidates:
        tried += 1
        if tried > 200000:
            break
        V = np.column_stack([positives[i] for i in idxs])
        if np.linalg.matrix_rank(V) != m:
            continue
        if not _is_positive_definite(V.astype(float).T @ Q @ V.astype(float)):
            continue
        if not is_primitive_columns(V):
            continue
        Cbase = unimodular_completion(V)
        # adjust the completion by V @ X, preserving unimodularity
        adjust = itertools.product(*([range(-bound, bound + 1)] * (k * m)))
        for flat in adjust:
            X = np.array(flat, dtype=np.int64).reshape(m, k)
            Ccols = Cbase + V @ X
            if Ccols.size and np.max(np.abs(Ccols)) > bound:
                continue
            if np.max(np.abs(V)) > bound:
                continue
            Nfull = np.column_stack([Ccols, V])
            if abs(int_det(Nfull)) != 1:
                continue
            if dual_condition(Nfull):
                basis = SplitBasis(Nfull, unimodular_inverse(Nfull).T, k)
                if is_split_basis(basis, Q, k):
                    return basis
    raise NotFound("no split basis with entries bounded by %d" % bound)


def enumerate_cone(cone: ConeSpec, Q) -> list[np.ndarray]:
    """All points K = shift + sum c_i gen_i with tK Q K <= radius**2, sorted
    by (tK Q K, lexicographic coordinates)."""
    Q = as_real_symmetric(Q)
    if Q.shape[0] != cone.n:
        raise ShapeMismatch("form and cone dimensions differ")
    s = cone.shift_float()
    m = cone.rank
    if m == 0:
        return [s]
    G = cone.generators.astype(float)
    A = G.T @ Q @ G
    eig = np.linalg.eigvalsh((A + A.T) / 2)
    lam = float(np.min(eig))
    if lam <= _POS_EIG_TOL * max(1.0, float(np.max(np.abs(eig)))):
        raise NonPositiveRestriction("form is not positive definite on the cone span")
    b = G.T @ Q @ s
    c_star = np.linalg.solve(A, -b)
    q_min = float(s @ Q @ s + b @ c_star)
    r2 = cone.radius**2
    if r2 < q_min - 1e-12:
        return []
    half = np.sqrt(max(r2 - q_min, 0.0) / lam) + 1e-9
    los = [int(np.ceil(c_star[i] - half)) for i in range(m)]
    his = [int(np.floor(c_star[i] + half)) for i in range(m)]
    points = []
    for coeffs in itertools.product(*[range(lo, hi + 1) for lo, hi in zip(los, his)]):
        c = np.array(coeffs, dtype=float)
        K = s + G @ c
        norm = float(K @ Q @ K)
        if norm <= r2:
            points.append((norm, tuple(K), K))
    points.sort(key=lambda t: (t[0], t[1]))
    return [K for _, _, K in points]


def enumerate_wedge(
    basis: SplitBasis, g_type_ic_index: int, Q, radius, transformed_gens=None
) -> list[tuple[np.ndarray, int]]:
    """Signed lattice points realising the difference of the two families of
    shifted positive cones attached to the unipotent basis change
    N_{idx+1} -> N_{idx+1} - N_idx.

    Points are truncated to coefficient sup-norm <= radius in the basis
    (N_idx, ..., N_n) and returned as (K, sign) sorted by a positive
    definite majorant of Q (eigenvalue absolute values of the restricted
    Gram matrix), ties broken lexicographically.  Passing
    ``transformed_gens`` overrides the default transformed cone; with the
    original generators the families coincide and the list is empty.
    """
    Q = as_real_symmetric(Q)
    idx = g_type_ic_index
    n = basis.n
    if not (1 <= idx <= n - 1):
        raise ShapeMismatch("unipotent index out of range")
    Ncols = basis.N
    shift_dir = Ncols[:, idx - 1]
    plain = Ncols[:, idx:]
    if transformed_gens is None:
        transformed = plain.copy()
        transformed[:, 0] = transformed[:, 0] - shift_dir
    else:
        transformed = as_int_matrix(transformed_gens)
    for label, gens in (("original", plain), ("transformed", transformed)):
        Gf = gens.astype(float)
        if not _is_positive_definite(Gf.T @ Q @ Gf):
            raise NotSplitAfterTransform("%s cone is not positive for the form" % label)

    R = int(np.floor(radius))
    if R < 0:
        return []
    m = plain.shape[1]
    counts: dict[tuple[int, ...], int] = defaultdict(int)
    coeff_ranges = [range(-R, R + 1)] * m
    for r in range(0, 2 * R + 1):
        base = r * shift_dir
        for coeffs in itertools.product(*coeff_ranges):
            cvec = np.array(coeffs, dtype=np.int64)
            counts[tuple(int(x) for x in base + transformed @ cvec)] += 1
            counts[tuple(int(x) for x in base + plain @ cvec)] -= 1

    # restrict to the window where the shell counts are complete
    span = np.column_stack([shift_dir, plain])
    span_inv = np.linalg.pinv(span.astype(float))
    gram = span.astype(float).T @ Q @ span.astype(float)
    vals, vecs = np.linalg.eigh((gram + gram.T) / 2)
    majorant = vecs @ np.diag(np.abs(vals)) @ vecs.T

    out = []
    for coords, cnt in counts.items():
        if cnt == 0:
            continue
        K = np.array(coords, dtype=np.int64)
        c = span_inv @ K
        c_int = np.rint(c)
        if np.max(np.abs(c - c_int)) > 1e-9 or np.max(np.abs(c_int)) > R:
            continue
        norm = float(c_int @ majorant @ c_int)
        sign = 1 if cnt > 0 else -1
        if abs(cnt) != 1:
            raise NotSplitAfterTransform("unexpected multiplicity in wedge shells")
        out.append((norm, tuple(int(x) for x in K), K, sign))
    out.sort(key=lambda t: (t[0], t[1]))
    return [(K, sign) for _, _, K, sign in out]


def transform_basis(g: ModularElement, basis: SplitBasis) -> tuple[np.ndarray, np.ndarray]:
    """Apply g to the basis.

    Returns (columns, S): ``columns`` is the 2n x 2n integer matrix whose
    first n columns are the transformed N-vectors and last n the transformed
    M-vectors (in reference coordinates; the result need not respect the
    splitting), and S is the change-of-basis element of Sp(2n, Z) relating
    the two resolutions, S = (NM)^{-1} tg (NM).
    """
    if not is_gamma12(g):
        raise NotGamma12("element is not in the theta subgroup")
    P = basis.columns_2n()
    gt_inv = g.inverse().matrix().T
    columns = gt_inv @ P
    Pinv = unimodular_inverse(P)
    S = Pinv @ g.matrix().T @ P
    return columns.astype(np.int64), S.astype(np.int64)


# ---------------------------------------------------------------------------
# generators of the theta subgroup, used by the randomised suites

def gamma12_generators(n: int) -> list[ModularElement]:
    gens = []
    eye = np.eye(n, dtype=np.int64)
    zero = np.zeros((n, n), dtype=np.int64)
    J = ModularElement(zero, -eye, eye.copy(), zero.copy())
    gens.append(J)
    # upper/lower unipotents with even diagonal
    for i in range(n):
        B = np.zeros((n, n), dtype=np.int64)
        B[i, i] = 2
        gens.append(ModularElement(eye, B, zero, eye.copy()))
        gens.append(ModularElement(eye, zero, B.copy(), eye.copy()))
    for i in range(n):
        for j in range(i + 1, n):
            B = np.zeros((n, n), dtype=np.int64)
            B[i, j] = B[j, i] = 1
            gens.append(ModularElement(eye, B, zero, eye.copy()))
            gens.append(ModularElement(eye, zero, B.copy(), eye.copy()))
    # GL_n block-diagonal elements
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            A = eye.copy()
            A[i, j] = 1
            gens.append(ModularElement(A.T, zero, zero, unimodular_inverse(A)))
    return gens


def random_gamma12(n: int, rng, length: int = 3) -> ModularElement:
    """Random word in the theta-subgroup generators and their inverses."""
    gens = gamma12_generators(n)
    g = ModularElement.identity(n)
    for _ in range(length):
        h = rng.choice(gens)
        if rng.next_int(0, 1):
            h = h.inverse()
        g = g @ h
    return g
