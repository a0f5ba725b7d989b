"""Exact group-ring algebra over the rank-2n integer lattice: Koszul
differentials, telescoping decompositions x - 1 = sum_j R_j (x'_j - 1),
and the induced chain map between the resolutions of two bases.

Coefficients are Python ints (arbitrary precision); a group-ring element
is a finite map from exponent vectors to nonzero integers.  All operations
are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotSymplectic, ShapeMismatch
from .intmat import as_int_matrix
from .lattice import ModularElement, is_symplectic


class GroupRingElement:
    """Finite integer combination of lattice elements, stored sparsely as
    {exponent tuple: coefficient}.  Immutable by convention."""

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms: dict | None = None):
        self.rank = rank
        clean = {}
        if terms:
            for exp, coef in terms.items():
                if coef == 0:
                    continue
                if len(exp) != rank:
                    raise ShapeMismatch("exponent length != rank")
                clean[tuple(int(e) for e in exp)] = int(coef)
        self.terms = clean

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, rank: int) -> "GroupRingElement":
        return cls(rank)

    @classmethod
    def one(cls, rank: int) -> "GroupRingElement":
        return cls(rank, {(0,) * rank: 1})

    @classmethod
    def monomial(cls, exp, coef: int = 1) -> "GroupRingElement":
        exp = tuple(int(e) for e in exp)
        return cls(len(exp), {exp: coef})

    # -- ring structure ----------------------------------------------------
    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        out = dict(self.terms)
        for exp, coef in other.terms.items():
            out[exp] = out.get(exp, 0) + coef
        return GroupRingElement(self.rank, out)

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(self.rank, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        out: dict[tuple, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, 0) + c1 * c2
        return GroupRingElement(self.rank, out)

    def scale(self, c: int) -> "GroupRingElement":
        return GroupRingElement(self.rank, {e: c * v for e, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def augmentation(self) -> int:
        """Image under the map sending every lattice monomial to 1."""
        return sum(self.terms.values())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupRingElement)
            and self.rank == other.rank
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.rank, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        if not self.terms:
            return "GR(0)"
        bits = ["%+d*x^%r" % (c, list(e)) for e, c in sorted(self.terms.items())]
        return "GR(" + " ".join(bits) + ")"


def gr_multiply(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    """Convolution product; exponent vectors add."""
    return a * b


def x_minus_one(rank: int, exp) -> GroupRingElement:
    return GroupRingElement(rank, {tuple(int(e) for e in exp): 1, (0,) * rank: -1})


def geometric_sum(rank: int, index: int, e: int) -> GroupRingElement:
    """Group-ring element g with x^e - 1 = g * (x - 1) for the generator at
    ``index``: x^{e-1}+...+1 for e>0, 0 for e=0, -(x^{-1}+...+x^{e}) for e<0."""
    terms = {}
    if e > 0:
        powers = range(0, e)
        coef = 1
    elif e < 0:
        powers = range(e, 0)
        coef = -1
    else:
        return GroupRingElement.zero(rank)
    for p in powers:
        exp = [0] * rank
        exp[index] = p
        terms[tuple(exp)] = coef
    return GroupRingElement(rank, terms)


def telescope_decompose(exp, basis_order=None) -> list[GroupRingElement]:
    """Coefficients R_j with x - 1 = sum_j R_j (x'_j - 1) for the monomial x
    with the given exponent vector, peeling factors in ``basis_order``
    (default: ascending index).  R_j = (prod of earlier factors) * geom_j."""
    exp = [int(e) for e in exp]
    rank = len(exp)
    order = list(basis_order) if basis_order is not None else list(range(rank))
    if sorted(order) != list(range(rank)):
        raise ShapeMismatch("basis_order must be a permutation of 0..rank-1")
    out = [GroupRingElement.zero(rank) for _ in range(rank)]
    prefix = GroupRingElement.one(rank)
    for j in order:
        if exp[j]:
            out[j] = prefix * geometric_sum(rank, j, exp[j])
            step = [0] * rank
            step[j] = exp[j]
            prefix = prefix * GroupRingElement.monomial(step)
    return out


@dataclass(frozen=True)
class KoszulChain:
    """Element of Z[lattice] tensor wedge^p W: map from strictly increasing
    index tuples (0-based, into the 2n wedge generators) to coefficients."""

    rank: int
    degree: int
    components: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for subset, coef in self.components.items():
            subset = tuple(int(i) for i in subset)
            if len(subset) != self.degree or list(subset) != sorted(set(subset)):
                raise ShapeMismatch("subsets must be strictly increasing of the degree")
            if any(i < 0 or i >= self.rank for i in subset):
                raise ShapeMismatch("wedge index out of range")
            if not coef.is_zero():
                clean[subset] = coef
        object.__setattr__(self, "components", clean)

    @classmethod
    def generator(cls, rank: int, subset) -> "KoszulChain":
        subset = tuple(int(i) for i in subset)
        return cls(rank, len(subset), {subset: GroupRingElement.one(rank)})

    def __add__(self, other: "KoszulChain") -> "KoszulChain":
        if (self.rank, self.degree) != (other.rank, other.degree):
            raise ShapeMismatch("chain shapes differ")
        out = dict(self.components)
        for subset, coef in other.components.items():
            out[subset] = out.get(subset, GroupRingElement.zero(self.rank)) + coef
        return KoszulChain(self.rank, self.degree, out)

    def __sub__(self, other: "KoszulChain") -> "KoszulChain":
        neg = {s: -c for s, c in other.components.items()}
        return self + KoszulChain(other.rank, other.degree, neg)

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, KoszulChain)
            and self.rank == other.rank
            and self.degree == other.degree
            and self.components == other.components
        )


def _basis_exponent(basis: np.ndarray | None, rank: int, index: int):
    if basis is None:
        exp = [0] * rank
        exp[index] = 1
        return tuple(exp)
    return tuple(int(x) for x in basis[:, index])


def koszul_d(chain: KoszulChain, basis=None) -> KoszulChain:
    """Koszul differential d(a (x) w_{p_1}..w_{p_k}) =
    sum_i (-1)^{i+1} a (x_{p_i} - 1) (x) w_{p_1}..^w_{p_i}..w_{p_k}.

    ``basis``: optional 2n x 2n integer matrix whose column p is the exponent
    vector of the generator x_p (default: reference basis).
    """
    if chain.degree < 1:
        raise ShapeMismatch("differential needs degree >= 1")
    if basis is not None:
        basis = as_int_matrix(basis)
    rank = chain.rank
    out: dict[tuple, GroupRingElement] = {}
    for subset, coef in chain.components.items():
        for pos, p in enumerate(subset):
            sign = -1 if pos % 2 else 1
            rest = subset[:pos] + subset[pos + 1 :]
            factor = x_minus_one(rank, _basis_exponent(basis, rank, p))
            term = (coef * factor).scale(sign)
            out[rest] = out.get(rest, GroupRingElement.zero(rank)) + term
    return KoszulChain(rank, chain.degree - 1, out)


def gr_det(mat: list[list[GroupRingElement]], rank: int) -> GroupRingElement:
    """Determinant over the group ring by cofactor expansion (sizes <= 4)."""
    size = len(mat)
    if size == 0:
        return GroupRingElement.one(rank)
    if size == 1:
        return mat[0][0]
    out = GroupRingElement.zero(rank)
    for j in range(size):
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        term = mat[0][j] * gr_det(minor, rank)
        out = out + (term if j % 2 == 0 else -term)
    return out


def s_star(S, chain: KoszulChain, basis_order=None) -> KoszulChain:
    """Chain map induced by the basis change x_i = prod_j (x'_j)^{S_ji}:

        1 (x) w_{p_1}..w_{p_k}  |->  sum over increasing {t_1<..<t_k} of
        det(R_{p_i t_j}) (x) w_{t_1}..w_{t_k},

    where the R rows come from telescope_decompose of each column of S with
    the given peeling order.  Components arise from ordered index tuples
    normalised to increasing subsets; the determinant's alternating
    structure carries the sign.  Any peeling order yields a chain map; the
    orders differ by a chain homotopy.
    """
    S = as_int_matrix(S)
    if not is_symplectic(ModularElement.from_matrix(S)):
        raise NotSymplectic("basis-change matrix is not symplectic")
    rank = chain.rank
    if S.shape != (rank, rank):
        raise ShapeMismatch("matrix size does not match chain rank")
    rows = {i: telescope_decompose(S[:, i], basis_order) for i in range(rank)}
    import itertools

    out: dict[tuple, GroupRingElement] = {}
    for subset, coef in chain.components.items():
        k = len(subset)
        for target in itertools.combinations(range(rank), k):
            mat = [[rows[p][t] for t in target] for p in subset]
            det = gr_det(mat, rank)
            if det.is_zero():
                continue
            term = coef * det
            out[target] = out.get(target, GroupRingElement.zero(rank)) + term
    return KoszulChain(rank, chain.degree, out)


def verify_chain_map(S, n: int, maxdeg: int, basis_order=None) -> bool:
    """Exact check of s_* o d = d' o s_* on every generator 1 (x) w_subset of
    degree <= maxdeg, where d uses the transformed basis exponents (columns
    of S) and d' the reference basis."""
    S = as_int_matrix(S)
    rank = 2 * n
    if S.shape != (rank, rank):
        raise ShapeMismatch("matrix must be 2n x 2n")
    if not is_symplectic(ModularElement.from_matrix(S)):
        raise NotSymplectic("basis-change matrix is not symplectic")
    import itertools

    for deg in range(1, maxdeg + 1):
        for subset in itertools.combinations(range(rank), deg):
            gen = KoszulChain.generator(rank, subset)
            lhs = s_star(S, koszul_d(gen, basis=S), basis_order)
            rhs = koszul_d(s_star(S, gen, basis_order), basis=None)
            if lhs != rhs:
                return False
    return True


# ---------------------------------------------------------------------------
# the five structural basis-change types, used by the randomised suites

def _block_diag_symplectic(A) -> np.ndarray:
    from .intmat import unimodular_inverse

    A = as_int_matrix(A)
    n = A.shape[0]
    S = np.zeros((2 * n, 2 * n), dtype=np.int64)
    S[:n, :n] = A
    S[n:, n:] = unimodular_inverse(A).T
    return S


def type_Ia(A) -> np.ndarray:
    """Block-diagonal change fixing the first k basis vectors: A must have an
    identity top-left k x k block."""
    return _block_diag_symplectic(A)


def type_Ib(n: int, k: int) -> np.ndarray:
    """Unit shear adding generator k to generator k-1 (1-based), acting
    inside the first half."""
    A = np.eye(n, dtype=np.int64)
    if k >= 2:
        A[k - 2, k - 1] = 1
    return _block_diag_symplectic(A)


def type_Ic(n: int, k: int) -> np.ndarray:
    """Unit shear adding generator k+1 to generator k (1-based)."""
    A = np.eye(n, dtype=np.int64)
    A[k - 1, k] = 1
    return _block_diag_symplectic(A)


def type_II(B) -> np.ndarray:
    """Lower unipotent (I, 0; B, I) with B symmetric."""
    B = as_int_matrix(B)
    n = B.shape[0]
    if not np.array_equal(B, B.T):
        raise NotSymplectic("type II requires a symmetric block")
    S = np.eye(2 * n, dtype=np.int64)
    S[n:, :n] = B
    return S


def type_III(n: int) -> np.ndarray:
    """The interchange (0, I; -I, 0)."""
    S = np.zeros((2 * n, 2 * n), dtype=np.int64)
    S[:n, n:] = np.eye(n, dtype=np.int64)
    S[n:, :n] = -np.eye(n, dtype=np.int64)
    return S


def random_type_word(n: int, k: int, length: int, rng) -> np.ndarray:
    """Product of random type Ia/Ib/Ic/II/III matrices."""
    S = np.eye(2 * n, dtype=np.int64)
    for _ in range(length):
        which = rng.next_int(0, 4)
        if which == 0:
            # identity k x k top-left block, unit lower-triangular completion
            A = np.eye(n, dtype=np.int64)
            for i in range(k, n):
                for j in range(i):
                    A[i, j] = rng.next_int(-2, 2)
            step = type_Ia(A)
        elif which == 1:
            step = type_Ib(n, max(k, 2))
        elif which == 2:
            step = type_Ic(n, min(k, n - 1) or 1)
        elif which == 3:
            B = np.zeros((n, n), dtype=np.int64)
            for i in range(n):
                for j in range(i, n):
                    B[i, j] = B[j, i] = rng.next_int(-2, 2)
            step = type_II(B)
        else:
            step = type_III(n)
        S = S @ step
    return S
