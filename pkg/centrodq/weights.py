"""
    Differential quadrature weighting coefficients.

    The derivative of order m at node i is approximated by sum_j w_ij f(x_j), exact for
    every polynomial of degree <= n-1. First order weights come from the Lagrange
    interpolant directly, higher orders from the recursion

        w_ij^(m) = m (A_ij w_ii^(m-1) - w_ij^(m-1) / (x_i - x_j)),   i != j

    and every diagonal is the negative sum of its row (the derivative of a constant is zero).
    On a mirror symmetric grid the order m matrix satisfies w_ij = (-1)^m w_{n+1-i,n+1-j}.
"""
import enum
import math
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np

from .errors import DegenerateGridError, InsufficientNodesError, InvalidArgumentError
from .grid import Grid, GridKind, SYMMETRY_TOL, check_symmetry

LOGGER = logging.getLogger(__name__)

CLASSIFY_TOL = 1e-10
# below this max-norm a matrix is treated as zero
ABS_FLOOR = 1e-13


class Symmetry(enum.Enum):
    CENTRO = "centro"
    SKEW_CENTRO = "skew-centro"
    NONE = "none"


@dataclass(frozen=True)
class WeightMatrix:
    """ Dense n x n weighting coefficients of one derivative order. """
    order: int
    values: np.ndarray = field(repr=False)
    grid: Grid = field(repr=False)
    symmetry: Symmetry

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def to_repr(self) -> Dict:
        """ Get the Json representation (as a Python Object)."""
        return {
            "order": self.order,
            "n": self.n,
            "symmetry": self.symmetry.value,
            "grid": self.grid.to_repr(),
            "values": self.values.tolist(),
        }

    def csv_rows(self) -> List[List[float]]:
        return self.values.tolist()


def classify_symmetry(values: np.ndarray, tol: float = CLASSIFY_TOL) -> Symmetry:
    """ Classify a square matrix as centrosymmetric (JQJ = Q), skew-centrosymmetric (JQJ = -Q)
        or neither. The tolerance is relative to the max-norm; the zero matrix is Centro.
    """
    q = np.asarray(values)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {q.shape}")
    scale = float(np.max(np.abs(q))) if q.size else 0.0
    if scale <= ABS_FLOOR:
        return Symmetry.CENTRO
    mirrored = q[::-1, ::-1]
    limit = tol * scale
    if np.max(np.abs(q - mirrored)) <= limit:
        return Symmetry.CENTRO
    if np.max(np.abs(q + mirrored)) <= limit:
        return Symmetry.SKEW_CENTRO
    return Symmetry.NONE


def _classify_weights(values: np.ndarray, order: int, g: Grid) -> Symmetry:
    """ Measured symmetry of a weight matrix. """
    measured = classify_symmetry(values)
    if check_symmetry(g, SYMMETRY_TOL):
        expected = Symmetry.SKEW_CENTRO if order % 2 else Symmetry.CENTRO
        if measured is not expected:
            LOGGER.warning("order %d weights on a symmetric grid (n=%d) classify %s, expected %s",
                           order, g.n, measured.value, expected.value)
    return measured


def _node_differences(g: Grid) -> np.ndarray:
    x = g.nodes
    diff = x[:, None] - x[None, :]
    off = ~np.eye(g.n, dtype=bool)
    if np.any(diff[off] == 0.0):
        raise DegenerateGridError("grid has duplicate nodes")
    return diff


def _first_order_values(g: Grid) -> np.ndarray:
    x = g.nodes
    n = g.n
    diff = _node_differences(g)  # x_i - x_k
    # M(x_i) = prod_{k != i} (x_i - x_k)
    safe = diff + np.eye(n)
    prod = np.prod(safe, axis=1)
    values = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                # (1/(x_j - x_i)) prod_{k != i,j} (x_i - x_k)/(x_j - x_k) == M(x_i) / ((x_i - x_j) M(x_j))
                values[i, j] = prod[i] / (diff[i, j] * prod[j])
    np.fill_diagonal(values, 0.0)
    np.fill_diagonal(values, -values.sum(axis=1))
    LOGGER.debug("first order weights on %s grid, n=%d, spread=%.3g", g.kind.value, n, np.ptp(x))
    return values


def first_order(g: Grid) -> WeightMatrix:
    """ First order weights from the Lagrange interpolant.

        >>> first_order(make_uniform(3)).values
        array([[-3.,  4., -1.],
               [-1.,  0.,  1.],
               [ 1., -4.,  3.]])
    """
    values = _first_order_values(g)
    return WeightMatrix(1, values, g, _classify_weights(values, 1, g))


def _recurse(first: np.ndarray, previous: np.ndarray, diff: np.ndarray, m: int) -> np.ndarray:
    """ Order m weights from order m-1 weights. """
    n = first.shape[0]
    off = ~np.eye(n, dtype=bool)
    inv_diff = np.zeros_like(diff)
    inv_diff[off] = 1.0 / diff[off]
    values = m * (first * np.diag(previous)[:, None] - previous * inv_diff)
    np.fill_diagonal(values, 0.0)
    np.fill_diagonal(values, -values.sum(axis=1))
    return values


def weight_matrices(g: Grid, m_max: int) -> List[WeightMatrix]:
    """ Weight matrices of orders 1..m_max in one pass of the recursion. """
    if m_max < 1:
        raise InvalidArgumentError(f"derivative order must be >= 1, got {m_max}")
    if m_max >= g.n:
        raise InsufficientNodesError(f"order {m_max} needs at least {m_max + 1} nodes, grid has {g.n}")
    diff = _node_differences(g)
    first = _first_order_values(g)
    result = [WeightMatrix(1, first, g, _classify_weights(first, 1, g))]
    previous = first
    for m in range(2, m_max + 1):
        previous = _recurse(first, previous, diff, m)
        result.append(WeightMatrix(m, previous, g, _classify_weights(previous, m, g)))
    return result


def higher_order(g: Grid, m: int) -> WeightMatrix:
    """ Weights of derivative order m >= 2. """
    if m < 2:
        raise InvalidArgumentError(f"higher_order() expects an order >= 2, got {m}")
    return weight_matrices(g, m)[-1]


def _raw_chebyshev(g: Grid) -> np.ndarray:
    if g.kind is not GridKind.CHEBYSHEV:
        raise InvalidArgumentError(f"closed form weights need a chebyshev grid, got {g.kind.value}")
    # undo x = (1 - r)/2
    return 1.0 - 2.0 * g.nodes


def chebyshev_closed_form(g: Grid) -> WeightMatrix:
    """ First order weights from the closed form for Chebyshev roots,

            A_ij = (-1)^(i-j) / (r_i - r_j) * sqrt((1 - r_j^2) / (1 - r_i^2)),   i != j

        evaluated on the raw roots r and rescaled by dr/dx = -2. The diagonal is the negative
        row sum. Diagnostic only: first_order() is the production path.
    """
    r = _raw_chebyshev(g)
    n = g.n
    i = np.arange(n)
    sign = np.where((i[:, None] - i[None, :]) % 2 == 0, 1.0, -1.0)
    diff = r[:, None] - r[None, :]
    np.fill_diagonal(diff, 1.0)
    ratio = np.sqrt((1.0 - r[None, :] ** 2) / (1.0 - r[:, None] ** 2))
    raw = sign * ratio / diff
    values = -2.0 * raw
    np.fill_diagonal(values, 0.0)
    np.fill_diagonal(values, -values.sum(axis=1))
    return WeightMatrix(1, values, g, _classify_weights(values, 1, g))


def chebyshev_printed_diagonal(g: Grid) -> np.ndarray:
    """ The diagonal r_i / (1 - r_i^2) of the printed closed form, rescaled to [0, 1].
        It is exactly twice the diagonal the interpolant gives, which is r_i / (2 (1 - r_i^2)).
    """
    r = _raw_chebyshev(g)
    return -2.0 * r / (1.0 - r ** 2)


def apply(w: WeightMatrix, samples: Sequence[float]) -> np.ndarray:
    """ Derivative estimates at every node from function samples. """
    f = np.asarray(samples, dtype=float)
    if f.shape != (w.n,):
        raise InvalidArgumentError(f"expected {w.n} samples, got shape {f.shape}")
    return w.values @ f


def scaled(w: WeightMatrix, length: float) -> np.ndarray:
    """ Values of w for a physical interval of the given length: order m scales by length^-m. """
    return w.values * (1.0 / length) ** w.order


def monomial_derivative(x: np.ndarray, p: int, m: int) -> np.ndarray:
    """ d^m/dx^m x^p evaluated at x. """
    if m > p:
        return np.zeros_like(x, dtype=float)
    return math.factorial(p) / math.factorial(p - m) * np.asarray(x, dtype=float) ** (p - m)
