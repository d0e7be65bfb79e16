"""
    Discrete point sets on the unit interval.
    A grid is immutable once built. Uniform and shifted-Chebyshev grids are mirror
    symmetric about 1/2, which is what every structured fast path relies on.
"""
import enum
import math
import logging
from dataclasses import dataclass, field
from typing import Dict, Sequence

import numpy as np

from .errors import DegenerateGridError, InvalidArgumentError

LOGGER = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12


class GridKind(enum.Enum):
    UNIFORM = "uniform"
    CHEBYSHEV = "chebyshev"
    SUPPORTED_CHEBYSHEV = "chebyshev-supported"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Grid:
    """ Ordered nodes on [0, 1].

        >>> g = make_chebyshev(8)
        >>> g.n, g.kind
        (8, <GridKind.CHEBYSHEV: 'chebyshev'>)
    """
    kind: GridKind
    nodes: np.ndarray = field(repr=False)

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        nodes.setflags(write=False)
        object.__setattr__(self, 'nodes', nodes)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def span(self) -> float:
        """ Distance between the first and the last node. """
        return float(self.nodes[-1] - self.nodes[0])

    def to_repr(self) -> Dict:
        """ Get the Json representation (as a Python Object)."""
        return {
            "kind": self.kind.value,
            "n": self.n,
            "nodes": self.nodes.tolist(),
        }

    @staticmethod
    def from_repr(data: Dict) -> 'Grid':
        return make_custom(data["nodes"], kind=GridKind(data.get("kind", GridKind.CUSTOM.value)))

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return self.kind == other.kind and np.array_equal(self.nodes, other.nodes)

    def __hash__(self):
        return hash((self.kind, self.nodes.tobytes()))


def _check_count(n: int):
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 2:
        raise InvalidArgumentError(f"a grid needs at least 2 nodes, got {n!r}")


def make_uniform(n: int) -> Grid:
    """ Equally spaced nodes (i-1)/(n-1), endpoints included. """
    _check_count(n)
    nodes = np.arange(n, dtype=float) / (n - 1)
    # exact mirror images, linspace rounding is not symmetric
    half = n // 2
    nodes[n - half:] = 1.0 - nodes[:half][::-1]
    return Grid(GridKind.UNIFORM, nodes)


def make_chebyshev(n: int) -> Grid:
    """ Roots of the degree n Chebyshev polynomial, cos((2i-1)pi/(2n)), mapped onto [0, 1]
        by x = (1 - r)/2. The result is ascending and strictly inside (0, 1).
    """
    _check_count(n)
    i = np.arange(1, n + 1)
    roots = np.cos((2 * i - 1) * math.pi / (2 * n))
    nodes = (1.0 - roots) / 2.0
    half = n // 2
    nodes[n - half:] = 1.0 - nodes[:half][::-1]
    if n % 2:
        nodes[half] = 0.5
    return Grid(GridKind.CHEBYSHEV, nodes)


def make_supported_chebyshev(n: int) -> Grid:
    """ Supports at 0 and 1 with the n-2 roots of the degree n-2 Chebyshev polynomial between them.
        This is the node set structural members are solved on when a chebyshev grid is asked for.

        >>> make_supported_chebyshev(3).nodes.tolist()
        [0.0, 0.5, 1.0]
    """
    _check_count(n)
    inner = n - 2
    if inner >= 2:
        roots = make_chebyshev(inner).nodes
    else:
        roots = np.full(inner, 0.5)
    return Grid(GridKind.SUPPORTED_CHEBYSHEV, np.concatenate([[0.0], roots, [1.0]]))


def member_grid(g: Grid) -> Grid:
    """ The grid a beam, plate or transport problem is discretized on: a chebyshev grid gets its
        end nodes moved onto the supports, every other grid is used as given.
    """
    if g.kind is GridKind.CHEBYSHEV:
        return make_supported_chebyshev(g.n)
    return g


def make_custom(nodes: Sequence[float], kind: GridKind = GridKind.CUSTOM) -> Grid:
    """ Build a grid from caller supplied nodes in [0, 1]. Nodes are sorted. """
    values = np.sort(np.asarray(nodes, dtype=float).ravel())
    _check_count(len(values))
    if not np.all(np.isfinite(values)):
        raise InvalidArgumentError("grid nodes must be finite")
    if values[0] < 0.0 or values[-1] > 1.0:
        raise InvalidArgumentError(f"grid nodes must lie in [0, 1], got [{values[0]}, {values[-1]}]")
    if np.any(np.diff(values) <= 0.0):
        raise DegenerateGridError("grid nodes must be distinct")
    return Grid(kind, values)


def check_symmetry(g: Grid, tol: float = SYMMETRY_TOL) -> bool:
    """ True when x[n+1-i] = 1 - x[i] for every node, within tol. """
    if tol <= 0:
        raise InvalidArgumentError(f"tolerance must be positive, got {tol}")
    return symmetry_defect(g) <= tol


def symmetry_defect(g: Grid) -> float:
    """ max |x[i] + x[n+1-i] - 1| """
    return float(np.max(np.abs(g.nodes + g.nodes[::-1] - 1.0)))


def make_grid(kind: str or GridKind, n: int) -> Grid:
    """ Factory used by the configuration layer. """
    kind = GridKind(kind)
    if kind is GridKind.UNIFORM:
        return make_uniform(n)
    if kind is GridKind.CHEBYSHEV:
        return make_chebyshev(n)
    if kind is GridKind.SUPPORTED_CHEBYSHEV:
        return make_supported_chebyshev(n)
    raise InvalidArgumentError("custom grids need explicit nodes, use make_custom()")
