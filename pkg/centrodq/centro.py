"""
    Structured algebra for centrosymmetric (JQJ = Q) and skew-centrosymmetric (JQJ = -Q) matrices.

    With n = 2m (or 2m + 1) such a matrix is stored as two m x m blocks,

        centro:  [[A, JCJ], [C, JAJ]]        skew:  [[A, -JCJ], [C, -JAJ]]

    plus a bordering center row / column when n is odd. The orthogonal change of basis to
    symmetric vectors [y; Jy]/sqrt(2) and skew-symmetric vectors [y; -Jy]/sqrt(2) turns a centro
    matrix into diag(A + JC, A - JC) and a skew one into [[0, A + JC], [A - JC, 0]], so a
    determinant, an inverse or an eigenproblem costs two half-size problems, a quarter of the
    dense work. Multiplying by J only reverses indices and is never counted.
"""
import enum
import math
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np

from . import kernel
from .errors import ClassificationMismatchError, InvalidArgumentError, SingularMatrixError
from .kernel import OpCounter
from .weights import ABS_FLOOR, CLASSIFY_TOL, Symmetry, classify_symmetry

LOGGER = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
LABEL_TOL = 1e-8


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"


class VectorLabel(enum.Enum):
    SYMMETRIC = "symmetric"
    SKEW_SYMMETRIC = "skew-symmetric"
    UNLABELED = "unlabeled"


def reverse_apply(v: np.ndarray, side: str = "left") -> np.ndarray:
    """ Multiply by the contra-identity J without arithmetic.

        side="left" reverses rows (J v), "right" reverses columns (M J), "both" gives J M J.

        >>> reverse_apply(np.array([1, 2, 3]))
        array([3, 2, 1])
    """
    a = np.asarray(v)
    if side == "left":
        return a[::-1].copy()
    if side == "right":
        if a.ndim < 2:
            return a[::-1].copy()
        return a[:, ::-1].copy()
    if side == "both":
        return a[::-1, ::-1].copy()
    raise InvalidArgumentError(f"side must be 'left', 'right' or 'both', got {side!r}")


def _j(a: np.ndarray) -> np.ndarray:
    return a[::-1]


def _jj(a: np.ndarray) -> np.ndarray:
    return a[::-1, ::-1]


def structure_defect(q: np.ndarray, symmetry: Symmetry) -> float:
    """ max|Q -+ JQJ| relative to max|Q| (0 for the zero matrix). """
    q = np.asarray(q)
    scale = float(np.max(np.abs(q))) if q.size else 0.0
    if scale <= ABS_FLOOR:
        return 0.0
    sign = 1.0 if symmetry is Symmetry.CENTRO else -1.0
    return float(np.max(np.abs(q - sign * _jj(q)))) / scale


@dataclass(frozen=True)
class CentroBlocks:
    """ Half-size storage of a centrosymmetric matrix [[A, JCJ], [C, JAJ]].
        For odd n the center column [x; q; Jx] and center row [y^T, q, y^T J] border the blocks.
    """
    a: np.ndarray
    c: np.ndarray
    center_col: Optional[np.ndarray] = None
    center_row: Optional[np.ndarray] = None
    center: float = 0.0

    sign = 1.0
    symmetry = Symmetry.CENTRO

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.a))
        c = np.atleast_2d(np.asarray(self.c))
        if a.shape != c.shape or a.shape[0] != a.shape[1]:
            raise InvalidArgumentError(f"blocks must be square and equal, got {a.shape} and {c.shape}")
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'c', c)
        if (self.center_col is None) != (self.center_row is None):
            raise InvalidArgumentError("odd blocks need both a center row and a center column")
        if self.center_col is not None:
            object.__setattr__(self, 'center_col', np.asarray(self.center_col).reshape(-1))
            object.__setattr__(self, 'center_row', np.asarray(self.center_row).reshape(-1))

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @property
    def parity(self) -> Parity:
        return Parity.EVEN if self.center_col is None else Parity.ODD

    @property
    def n(self) -> int:
        return 2 * self.m + (self.parity is Parity.ODD)

    def assemble(self) -> np.ndarray:
        """ The dense n x n matrix. """
        s = self.sign
        a, c = self.a, self.c
        if self.parity is Parity.EVEN:
            return np.block([[a, s * _jj(c)], [c, s * _jj(a)]])
        x = self.center_col.reshape(-1, 1)
        y = self.center_row.reshape(1, -1)
        q = np.array([[self.center]], dtype=np.result_type(a, x))
        return np.block([
            [a, x, s * _jj(c)],
            [y, q, s * y[:, ::-1]],
            [c, s * _j(x), s * _jj(a)],
        ])


@dataclass(frozen=True)
class SkewCentroBlocks(CentroBlocks):
    """ Half-size storage of a skew-centrosymmetric matrix [[A, -JCJ], [C, -JAJ]].
        For odd n the center entry is necessarily zero.
    """
    sign = -1.0
    symmetry = Symmetry.SKEW_CENTRO

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, 'center', 0.0)


Blocks = Union[CentroBlocks, SkewCentroBlocks]


@dataclass(frozen=True)
class SpectralPair:
    """ One eigenvalue with its unit eigenvector and mirror-symmetry label. """
    eigenvalue: complex
    eigenvector: Optional[np.ndarray] = field(repr=False)
    label: VectorLabel

    def to_repr(self):
        return {
            "eigenvalue": complex(self.eigenvalue),
            "label": self.label.value,
            "eigenvector": self.eigenvector,
        }


def split(q: np.ndarray, symmetry: Symmetry, tol: float = CLASSIFY_TOL) -> Blocks:
    """ Read the half-size blocks of a structured matrix.

        >>> split(np.array([[2., 1.], [1., 2.]]), Symmetry.CENTRO).c
        array([[1.]])
    """
    q = kernel._square(q)
    if symmetry not in (Symmetry.CENTRO, Symmetry.SKEW_CENTRO):
        raise InvalidArgumentError(f"cannot split a matrix of class {symmetry.value}")
    defect = structure_defect(q, symmetry)
    if defect > tol:
        raise ClassificationMismatchError(f"matrix is not {symmetry.value}", f"relative defect {defect:.3g}")
    n = q.shape[0]
    m = n // 2
    cls = CentroBlocks if symmetry is Symmetry.CENTRO else SkewCentroBlocks
    a = q[:m, :m].copy()
    c = q[n - m:, :m].copy()
    if n % 2 == 0:
        return cls(a, c)
    return cls(a, c, center_col=q[:m, m].copy(), center_row=q[m, :m].copy(), center=q[m, m])


def structured(q: np.ndarray, tol: float = CLASSIFY_TOL) -> Optional[Blocks]:
    """ Split q with whatever symmetry it has, None when it has none. """
    symmetry = classify_symmetry(q, tol)
    if symmetry is Symmetry.NONE:
        return None
    return split(q, symmetry, tol)


def similarity_transform(n: int) -> np.ndarray:
    """ Orthogonal T whose leading columns span the symmetric vectors and whose trailing m
        columns span the skew-symmetric ones. T^T Q T is diag(S, K) for centro Q and
        [[0, H], [G, 0]] for skew-centro Q.
    """
    m = n // 2
    eye = np.eye(m)
    jay = eye[::-1]
    t = np.zeros((n, n))
    t[:m, :m] = eye / SQRT2
    t[n - m:, :m] = jay / SQRT2
    t[:m, n - m:] = eye / SQRT2
    t[n - m:, n - m:] = -jay / SQRT2
    if n % 2:
        t[m, m] = 1.0
    return t


def half_blocks(b: Blocks, counter: OpCounter = None) -> Tuple[np.ndarray, np.ndarray]:
    """ The two half-size matrices the structure reduces to.

        Centro: (S, K) with S = A + JC acting on symmetric vectors and K = A - JC on
        skew-symmetric ones. Skew-centro: (H, G) with H = A + JC mapping skew to symmetric
        vectors and G = A - JC mapping symmetric to skew vectors. For odd n the symmetric side
        gains the center coordinate, scaled by sqrt(2).
    """
    plus = b.a + _j(b.c)
    minus = b.a - _j(b.c)
    kernel._tally(counter, adds=2 * b.m * b.m)
    if b.parity is Parity.EVEN:
        return plus, minus
    x = b.center_col.reshape(-1, 1) * SQRT2
    y = b.center_row.reshape(1, -1) * SQRT2
    kernel._tally(counter, multiplies=2 * b.m)
    if isinstance(b, SkewCentroBlocks):
        h = np.vstack([plus, y])
        g = np.hstack([minus, x])
        return h, g
    s = np.block([[plus, x], [y, np.array([[b.center]], dtype=np.result_type(plus, x))]])
    return s, minus


def _from_half_blocks(cls, sym: np.ndarray, other: np.ndarray, m: int, odd: bool,
                      counter: OpCounter = None) -> Blocks:
    """ Inverse of half_blocks() for square half blocks: rebuild the block storage from (S, K)
        or, for even skew matrices, from (H, G).
    """
    if not odd:
        a = (sym + other) / 2.0
        c = _j(sym - other) / 2.0
        kernel._tally(counter, 2 * m * m, 2 * m * m)
        return cls(a, c)
    a = (sym[:m, :m] + other) / 2.0
    c = _j(sym[:m, :m] - other) / 2.0
    kernel._tally(counter, 2 * m * m + 2 * m, 2 * m * m)
    return cls(a, c, center_col=sym[:m, m] / SQRT2, center_row=sym[m, :m] / SQRT2, center=sym[m, m])


def det_centro(b: CentroBlocks, counter: OpCounter = None) -> float:
    """ det Q = det(A + JC) det(A - JC), two half-size LU factorizations.

        >>> det_centro(split(np.array([[2., 1.], [1., 2.]]), Symmetry.CENTRO))
        3.0
    """
    if isinstance(b, SkewCentroBlocks):
        raise InvalidArgumentError("det_centro() expects centro blocks, use det_skew()")
    s, k = half_blocks(b, counter)
    det = kernel.lu_det(s, counter) * kernel.lu_det(k, counter)
    kernel._tally(counter, 1)
    return det


def det_skew(b: SkewCentroBlocks, counter: OpCounter = None) -> float:
    """ det Q = (-1)^m det(A + JC) det(A - JC).

        The (-1)^m comes from swapping the two off-diagonal blocks of [[0, H], [G, 0]]; without it
        [[1, -2], [2, -1]] would get -3 instead of its determinant 3. Odd skew-centro matrices
        are singular, det Q = det(-JQJ) = -det Q.
    """
    if not isinstance(b, SkewCentroBlocks):
        raise InvalidArgumentError("det_skew() expects skew-centro blocks, use det_centro()")
    if b.parity is Parity.ODD:
        return 0.0
    h, g = half_blocks(b, counter)
    det = (-1.0) ** b.m * kernel.lu_det(h, counter) * kernel.lu_det(g, counter)
    kernel._tally(counter, 1)
    return det


def _half_inverse(m: np.ndarray, name: str, counter: OpCounter) -> np.ndarray:
    try:
        return kernel.lu_inverse(m, counter)
    except SingularMatrixError as e:
        raise SingularMatrixError(f"half-size factor {name} is singular", pivot=e.pivot, factor=name)


def inv_centro(b: CentroBlocks, counter: OpCounter = None) -> CentroBlocks:
    """ Inverse of a centrosymmetric matrix, again centrosymmetric.

        With S = A + JC and K = A - JC the inverse has blocks P = (S^-1 + K^-1)/2 and
        R = J (S^-1 - K^-1)/2; the J on R is what makes Q Q^-1 = I.
    """
    if isinstance(b, SkewCentroBlocks):
        raise InvalidArgumentError("inv_centro() expects centro blocks, use inv_skew()")
    s, k = half_blocks(b, counter)
    s_inv = _half_inverse(s, "A+JC", counter)
    k_inv = _half_inverse(k, "A-JC", counter)
    return _from_half_blocks(CentroBlocks, s_inv, k_inv, b.m, b.parity is Parity.ODD, counter)


def inv_skew(b: SkewCentroBlocks, counter: OpCounter = None) -> SkewCentroBlocks:
    """ Inverse of a skew-centrosymmetric matrix, again skew-centrosymmetric.

        [[0, H], [G, 0]]^-1 = [[0, G^-1], [H^-1, 0]], so the inverse has blocks
        P = ((A - JC)^-1 + (A + JC)^-1)/2 and R = J ((A - JC)^-1 - (A + JC)^-1)/2.
    """
    if not isinstance(b, SkewCentroBlocks):
        raise InvalidArgumentError("inv_skew() expects skew-centro blocks, use inv_centro()")
    if b.parity is Parity.ODD:
        raise SingularMatrixError("odd skew-centrosymmetric matrices are singular", factor="Q")
    h, g = half_blocks(b, counter)
    h_inv = _half_inverse(h, "A+JC", counter)
    g_inv = _half_inverse(g, "A-JC", counter)
    return _from_half_blocks(SkewCentroBlocks, g_inv, h_inv, b.m, False, counter)


def _embed_symmetric(u: np.ndarray, m: int, odd: bool) -> np.ndarray:
    """ Full vector of symmetric coordinates, [u; Ju]/sqrt(2) (with the center entry when odd). """
    if odd:
        head = u[:m] / SQRT2
        return np.concatenate([head, u[m:m + 1], _j(head)])
    head = u / SQRT2
    return np.concatenate([head, _j(head)])


def _embed_skew(w: np.ndarray, odd: bool) -> np.ndarray:
    head = w / SQRT2
    middle = np.zeros(1, dtype=head.dtype) if odd else np.zeros(0, dtype=head.dtype)
    return np.concatenate([head, middle, -_j(head)])


def _sorted_pairs(pairs: List[SpectralPair]) -> List[SpectralPair]:
    values = np.array([p.eigenvalue for p in pairs], dtype=complex)
    order = np.lexsort((values.imag, values.real))
    return [pairs[i] for i in order]


def eig_centro(b: CentroBlocks, vectors: bool = True, counter: OpCounter = None) -> List[SpectralPair]:
    """ Eigenpairs of a centrosymmetric matrix from the two half-size problems.

        Eigenvalues of A + JC belong to symmetric eigenvectors [y; Jy]/sqrt(2), those of A - JC
        to skew-symmetric ones [y; -Jy]/sqrt(2). Pairs come back sorted by eigenvalue.
    """
    if isinstance(b, SkewCentroBlocks):
        raise InvalidArgumentError("eig_centro() expects centro blocks, use eig_skew()")
    odd = b.parity is Parity.ODD
    s, k = half_blocks(b, counter)
    pairs = []
    for matrix, label in ((s, VectorLabel.SYMMETRIC), (k, VectorLabel.SKEW_SYMMETRIC)):
        if matrix.shape[0] == 0:
            continue
        if vectors:
            values, vecs = kernel.eig_dense(matrix, vectors=True, counter=counter)
        else:
            values, vecs = kernel.eig_dense(matrix, counter=counter), None
        for i, value in enumerate(values):
            vector = None
            if vecs is not None:
                if label is VectorLabel.SYMMETRIC:
                    vector = _embed_symmetric(vecs[:, i], b.m, odd)
                else:
                    vector = _embed_skew(vecs[:, i], odd)
            pairs.append(SpectralPair(complex(value), vector, label))
    LOGGER.debug("centro eigenproblem n=%d split into %d + %d", b.n, s.shape[0], k.shape[0])
    return _sorted_pairs(pairs)


def eig_skew(b: SkewCentroBlocks, vectors: bool = True, counter: OpCounter = None) -> List[SpectralPair]:
    """ Eigenpairs of a skew-centrosymmetric matrix from one half-size problem.

        In symmetric / skew coordinates Q is [[0, H], [G, 0]], so its square is block diagonal and
        the eigenvalues are +-sqrt(mu) for the eigenvalues mu of the m x m product G H. For an
        eigenvector z of G H and lambda = sqrt(mu), the full vectors are sym(Hz/lambda) +- skew(z).
        Odd n adds one zero eigenvalue.
    """
    if not isinstance(b, SkewCentroBlocks):
        raise InvalidArgumentError("eig_skew() expects skew-centro blocks, use eig_centro()")
    odd = b.parity is Parity.ODD
    h, g = half_blocks(b, counter)
    product = kernel.matmul(g, h, counter)
    if vectors:
        mus, zs = kernel.eig_dense(product, vectors=True, counter=counter)
    else:
        mus, zs = kernel.eig_dense(product, counter=counter), None
    scale = max(float(np.max(np.abs(mus))) if mus.size else 0.0, 1.0)
    dense = None
    pairs = []
    for i, mu in enumerate(mus):
        lam = complex(np.sqrt(complex(mu)))
        for sign in (1.0, -1.0):
            value = sign * lam
            vector = None
            if zs is not None:
                if abs(lam) > LABEL_TOL * math.sqrt(scale):
                    w = kernel.matmul(h, zs[:, i], counter) / lam
                    vector = _embed_symmetric(w, b.m, odd) + sign * _embed_skew(zs[:, i], odd)
                    vector = vector / np.linalg.norm(vector)
                else:
                    dense = b.assemble() if dense is None else dense
                    vector = kernel.inverse_iteration(dense, value, counter)
            pairs.append(SpectralPair(value, vector, VectorLabel.UNLABELED))
    if odd:
        vector = None
        if vectors:
            dense = b.assemble() if dense is None else dense
            vector = kernel.inverse_iteration(dense, 0.0, counter)
        pairs.append(SpectralPair(0j, vector, VectorLabel.UNLABELED))
    values = kernel.realify(np.array([p.eigenvalue for p in pairs]))
    pairs = [SpectralPair(complex(v), p.eigenvector, p.label) for v, p in zip(values, pairs)]
    return _sorted_pairs(pairs)


def solve_centro(b: CentroBlocks, rhs: np.ndarray, counter: OpCounter = None) -> np.ndarray:
    """ Solve Q x = rhs through the two half-size systems (rhs may hold several columns). """
    if isinstance(b, SkewCentroBlocks):
        raise InvalidArgumentError("solve_centro() expects centro blocks")
    rhs = np.asarray(rhs)
    n, m = b.n, b.m
    if rhs.shape[0] != n:
        raise InvalidArgumentError(f"right-hand side has {rhs.shape[0]} rows, expected {n}")
    odd = b.parity is Parity.ODD
    top, bottom = rhs[:m], rhs[n - m:]
    sym = (top + _j(bottom)) / SQRT2
    skew = (top - _j(bottom)) / SQRT2
    if odd:
        sym = np.concatenate([sym, rhs[m:m + 1]])
    s, k = half_blocks(b, counter)
    try:
        u = kernel.lu_solve(s, sym, counter)
    except SingularMatrixError as e:
        raise SingularMatrixError("half-size factor A+JC is singular", pivot=e.pivot, factor="A+JC")
    try:
        w = kernel.lu_solve(k, skew, counter)
    except SingularMatrixError as e:
        raise SingularMatrixError("half-size factor A-JC is singular", pivot=e.pivot, factor="A-JC")
    columns = 1 if rhs.ndim == 1 else rhs.shape[1]
    kernel._tally(counter, 4 * m * columns, 4 * m * columns)
    head = (u[:m] + w) / SQRT2
    tail = _j(u[:m] - w) / SQRT2
    if odd:
        return np.concatenate([head, u[m:m + 1], tail])
    return np.concatenate([head, tail])


def kron_class(c1: Symmetry, c2: Symmetry) -> Symmetry:
    """ Symmetry class of P (x) Q: the contra-identity of the product is J (x) J, so
        signs multiply.

        >>> kron_class(Symmetry.SKEW_CENTRO, Symmetry.SKEW_CENTRO)
        <Symmetry.CENTRO: 'centro'>
    """
    if c1 is Symmetry.NONE or c2 is Symmetry.NONE:
        raise InvalidArgumentError("kron_class() needs centro or skew-centro operands")
    return Symmetry.CENTRO if c1 is c2 else Symmetry.SKEW_CENTRO


def label_of(v: np.ndarray, tol: float = LABEL_TOL) -> VectorLabel:
    """ Mirror symmetry of a vector: v = Jv, v = -Jv, or neither. """
    v = np.asarray(v)
    if np.linalg.norm(v - _j(v)) <= tol * max(np.linalg.norm(v), 1.0):
        return VectorLabel.SYMMETRIC
    if np.linalg.norm(v + _j(v)) <= tol * max(np.linalg.norm(v), 1.0):
        return VectorLabel.SKEW_SYMMETRIC
    return VectorLabel.UNLABELED
