"""
    Dense linear algebra with multiply counting.

    Every routine takes an optional :class:`OpCounter`. The counter is owned by the caller
    and only ever passed down explicitly, so concurrent computations never share one.
    Counting follows the textbook operation model: a scalar multiplication or division
    counts as one multiply, complex or real alike.
"""
import cmath
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple, Union

import numpy as np

from .errors import InvalidArgumentError, NumericFailureError, SingularMatrixError

LOGGER = logging.getLogger(__name__)

# pivots below PIVOT_TOL * max|M| are singular
PIVOT_TOL = 1e-13
# QR sweeps allowed per eigenvalue before giving up
ITERATION_CAP_PER_EIGENVALUE = 60
# imaginary parts below REAL_TOL * spectral radius are dropped
REAL_TOL = 1e-8
EPS = np.finfo(float).eps
INVERSE_ITERATION_STEPS = 3


@dataclass
class OpCounter:
    """ Multiply / add tally of one computation. """
    multiplies: int = 0
    adds: int = 0
    label: Optional[str] = field(default=None, compare=False)

    def count(self, multiplies: int = 0, adds: int = 0):
        self.multiplies += int(multiplies)
        self.adds += int(adds)

    def absorb(self, other: 'OpCounter'):
        self.count(other.multiplies, other.adds)

    def to_repr(self) -> Dict:
        return {"multiplies": self.multiplies, "adds": self.adds}


def _tally(counter: Optional[OpCounter], multiplies: int = 0, adds: int = 0):
    if counter is not None:
        counter.count(multiplies, adds)


def _square(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidArgumentError(f"{name} must be square, got shape {a.shape}")
    return a


def _working_copy(m: np.ndarray) -> np.ndarray:
    dtype = complex if np.iscomplexobj(m) else float
    return np.array(m, dtype=dtype, copy=True)


@dataclass(frozen=True)
class LUFactors:
    """ P M = L U packed in one array; L has a unit diagonal. """
    lu: np.ndarray
    perm: np.ndarray
    sign: int
    singular_at: Optional[int] = None

    @property
    def n(self) -> int:
        return self.lu.shape[0]


def lu_factor(m: np.ndarray, counter: OpCounter = None, tol: float = PIVOT_TOL,
              perturb_zero_pivots: bool = False) -> LUFactors:
    """ LU decomposition with partial pivoting.

        :param tol: relative pivot threshold, a smaller pivot raises SingularMatrixError
        :param perturb_zero_pivots: replace tiny pivots by eps * max|M| instead of raising
            (used by inverse iteration, where the shift makes the matrix nearly singular on purpose)
    """
    a = _working_copy(_square(m))
    n = a.shape[0]
    perm = np.arange(n)
    sign = 1
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    threshold = tol * scale
    singular_at = None

    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if p != k:
            a[[k, p]] = a[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        pivot = a[k, k]
        if abs(pivot) <= threshold or pivot == 0:
            if perturb_zero_pivots:
                a[k, k] = pivot = EPS * max(scale, 1.0)
            else:
                if singular_at is None:
                    singular_at = k
                if tol > 0:
                    raise SingularMatrixError("matrix is singular to working precision", pivot=k)
                continue
        rest = n - k - 1
        if rest:
            a[k + 1:, k] /= pivot
            a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
            _tally(counter, rest + rest * rest, rest * rest)
    return LUFactors(a, perm, sign, singular_at)


def lu_det(m: np.ndarray, counter: OpCounter = None) -> float:
    """ Determinant from a partial-pivoted LU; the sign tracks row swaps. A zero pivot gives 0.

        >>> lu_det(np.array([[0., 1.], [1., 0.]]))
        -1.0
    """
    a = _square(m)
    if a.shape[0] == 0:
        return 1.0
    factors = lu_factor(a, counter, tol=0.0)
    if factors.singular_at is not None:
        return 0.0
    diag = np.diag(factors.lu)
    _tally(counter, len(diag) - 1)
    det = factors.sign * np.prod(diag)
    return det if np.iscomplexobj(det) else float(det)


def lu_solve_factored(factors: LUFactors, b: np.ndarray, counter: OpCounter = None) -> np.ndarray:
    """ Solve with precomputed factors. b may be a vector or a matrix of right-hand sides. """
    if factors.singular_at is not None:
        raise SingularMatrixError("cannot solve with a singular factorization", pivot=factors.singular_at)
    rhs = np.asarray(b)
    n = factors.n
    if rhs.shape[0] != n:
        raise InvalidArgumentError(f"right-hand side has {rhs.shape[0]} rows, expected {n}")
    dtype = complex if (np.iscomplexobj(rhs) or np.iscomplexobj(factors.lu)) else float
    x = np.array(rhs[factors.perm], dtype=dtype, copy=True)
    columns = 1 if x.ndim == 1 else x.shape[1]
    lu = factors.lu
    # forward, unit lower
    for i in range(1, n):
        x[i] -= lu[i, :i] @ x[:i]
    # backward
    for i in range(n - 1, -1, -1):
        if i + 1 < n:
            x[i] -= lu[i, i + 1:] @ x[i + 1:]
        x[i] /= lu[i, i]
    _tally(counter, n * n * columns, (n * n - n) * columns)
    return x


def lu_solve(m: np.ndarray, b: np.ndarray, counter: OpCounter = None) -> np.ndarray:
    """ Solve M x = b. """
    return lu_solve_factored(lu_factor(m, counter), b, counter)


def lu_inverse(m: np.ndarray, counter: OpCounter = None) -> np.ndarray:
    """ Inverse by factoring once and solving against the identity. """
    a = _square(m)
    factors = lu_factor(a, counter)
    return lu_solve_factored(factors, np.eye(a.shape[0]), counter)


def matmul(a: np.ndarray, b: np.ndarray, counter: OpCounter = None) -> np.ndarray:
    """ Matrix (or matrix-vector) product, counted as rows * inner * cols multiplies. """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-1] != b.shape[0]:
        raise InvalidArgumentError(f"cannot multiply shapes {a.shape} and {b.shape}")
    rows = a.shape[0] if a.ndim == 2 else 1
    inner = b.shape[0]
    cols = b.shape[1] if b.ndim == 2 else 1
    _tally(counter, rows * inner * cols, rows * (inner - 1) * cols)
    return a @ b


def kron(p: np.ndarray, q: np.ndarray, counter: OpCounter = None) -> np.ndarray:
    """ Kronecker product, (P x Q)[i*qr + k, j*qc + l] = P_ij Q_kl. """
    p = np.atleast_2d(np.asarray(p))
    q = np.atleast_2d(np.asarray(q))
    _tally(counter, p.size * q.size)
    return np.kron(p, q)


def hessenberg(m: np.ndarray, counter: OpCounter = None) -> np.ndarray:
    """ Upper Hessenberg form by Householder reflections (similarity, eigenvalues kept). """
    h = _working_copy(_square(m))
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        v = x.copy()
        phase = v[0] / abs(v[0]) if v[0] != 0 else 1.0
        v[0] += phase * alpha
        v_norm = np.linalg.norm(v)
        if v_norm == 0.0:
            continue
        v /= v_norm
        rows = n - k - 1
        # H <- (I - 2vv*) H (I - 2vv*)
        h[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
        _tally(counter, 2 * rows * (n - k) + 2 * n * rows + 2 * rows, 2 * rows * (n - k) + 2 * n * rows)
    return h


def _wilkinson_shift(a: complex, b: complex, c: complex, d: complex) -> complex:
    """ Eigenvalue of [[a, b], [c, d]] closest to d. """
    half = (a - d) / 2.0
    disc = cmath.sqrt(half * half + b * c)
    mu1 = d - b * c / (half + disc) if (half + disc) != 0 else d
    mu2 = d - b * c / (half - disc) if (half - disc) != 0 else d
    return mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2


def _qr_sweep(block: np.ndarray, mu: complex, counter: Optional[OpCounter]):
    """ One shifted QR step on an unreduced Hessenberg block, in place: B <- R Q + mu I. """
    m = block.shape[0]
    idx = np.arange(m)
    block[idx, idx] -= mu
    rotations = []
    for k in range(m - 1):
        x, y = block[k, k], block[k + 1, k]
        r = np.hypot(abs(x), abs(y))
        if r == 0.0:
            c, s = 1.0, 0.0
        else:
            c, s = x / r, y / r
        top = block[k, k:].copy()
        bottom = block[k + 1, k:].copy()
        block[k, k:] = np.conj(c) * top + np.conj(s) * bottom
        block[k + 1, k:] = -s * top + c * bottom
        rotations.append((c, s))
        _tally(counter, 4 * (m - k), 2 * (m - k))
    for k, (c, s) in enumerate(rotations):
        left = block[:k + 2, k].copy()
        right = block[:k + 2, k + 1].copy()
        block[:k + 2, k] = c * left + s * right
        block[:k + 2, k + 1] = -np.conj(s) * left + np.conj(c) * right
        _tally(counter, 4 * (k + 2), 2 * (k + 2))
    block[idx, idx] += mu


def _hessenberg_eigenvalues(h: np.ndarray, counter: Optional[OpCounter]) -> np.ndarray:
    """ Shifted QR iteration with deflation on a (complex) Hessenberg matrix. """
    h = np.array(h, dtype=complex)
    n = h.shape[0]
    values = np.empty(n, dtype=complex)
    hi = n - 1
    iterations = 0
    total = 0
    while hi >= 0:
        if hi == 0:
            values[0] = h[0, 0]
            break
        # find the start of the active unreduced block
        lo = hi
        while lo > 0:
            sub = abs(h[lo, lo - 1])
            ref = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if ref == 0.0:
                ref = np.max(np.abs(h[:hi + 1, :hi + 1]))
            if sub <= EPS * ref:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            values[hi] = h[hi, hi]
            hi -= 1
            iterations = 0
            continue

        iterations += 1
        total += 1
        if iterations > ITERATION_CAP_PER_EIGENVALUE:
            raise NumericFailureError("QR iteration did not converge", iterations=total)
        if iterations % 11 == 0:
            # exceptional shift breaks cycles
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1]) * (1.0 + 0.5j)
        else:
            mu = _wilkinson_shift(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])
        _qr_sweep(h[lo:hi + 1, lo:hi + 1], mu, counter)
    LOGGER.debug("QR iteration: n=%d, %d sweeps", n, total)
    return values


def realify(values: np.ndarray) -> np.ndarray:
    """ Zero imaginary parts below REAL_TOL * spectral radius. """
    values = np.array(values, dtype=complex)
    if values.size == 0:
        return values
    radius = float(np.max(np.abs(values)))
    small = np.abs(values.imag) <= REAL_TOL * max(radius, EPS)
    values[small] = values[small].real
    return values


def sort_eigenvalues(values: np.ndarray) -> np.ndarray:
    """ Deterministic order: by real part, then imaginary part. """
    order = np.lexsort((values.imag, values.real))
    return values[order]


def inverse_iteration(m: np.ndarray, value: complex, counter: OpCounter = None) -> np.ndarray:
    """ Unit eigenvector for an eigenvalue estimate by shifted inverse iteration. """
    a = np.asarray(m, dtype=complex)
    n = a.shape[0]
    scale = max(float(np.max(np.abs(a))), 1.0)
    shifted = a - (value + 1e-10 * scale) * np.eye(n)
    factors = lu_factor(shifted, counter, tol=0.0, perturb_zero_pivots=True)
    x = np.ones(n, dtype=complex) + 0.1 * np.arange(n)
    x /= np.linalg.norm(x)
    for _ in range(INVERSE_ITERATION_STEPS):
        x = lu_solve_factored(factors, x, counter)
        norm = np.linalg.norm(x)
        if not np.isfinite(norm) or norm == 0.0:
            raise NumericFailureError("inverse iteration broke down", value=value)
        x /= norm
    # fix the phase so the largest component is real and positive
    k = int(np.argmax(np.abs(x)))
    x *= abs(x[k]) / x[k]
    return x


def eig_dense(m: np.ndarray, vectors: bool = False, counter: OpCounter = None) \
        -> Union[np.ndarray, Tuple[np.ndarray, np.ndarray]]:
    """ Eigenvalues of a real square matrix: Hessenberg reduction then shifted QR.

        Values come back as a complex array sorted by (real, imag), with negligible imaginary
        parts removed. With vectors=True the unit eigenvectors are returned as columns too.

        >>> eig_dense(np.diag([3., 1., 2.]))
        array([1.+0.j, 2.+0.j, 3.+0.j])
    """
    a = _square(m)
    if a.shape[0] == 0:
        empty = np.empty(0, dtype=complex)
        return (empty, np.empty((0, 0), dtype=complex)) if vectors else empty
    h = hessenberg(a, counter)
    values = sort_eigenvalues(realify(_hessenberg_eigenvalues(h, counter)))
    if not vectors:
        return values
    vecs = np.column_stack([inverse_iteration(a, v, counter) for v in values])
    return values, vecs
