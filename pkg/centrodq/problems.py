"""
    Boundary-condition-modified DQ operators and their solvers.

    Boundary conditions are folded into the weighting matrices:

    * simply supported: A_bar = A, B_bar = B with its first and last rows zeroed (w'' = 0),
      C_bar = A B_bar and D_bar = B B_bar. Dropping the end rows and columns (w = 0) leaves
      (n-2) x (n-2) operators, and D_bar is exactly B_int B_int.
    * clamped: the slope conditions w'(0) = w'(1) = 0 are solved for the values at the second
      and the second to last node, leaving n-4 unknowns. Every weight matrix acts on the nodal
      values rebuilt from those unknowns and is kept at the remaining nodes only.

    The reduced unknowns map back to nodal values through a transfer matrix, which is also how
    mode shapes get their boundary values. On a mirror symmetric grid A_bar, C_bar are
    skew-centrosymmetric and B_bar, D_bar centrosymmetric, so every assembled plate operator is
    centrosymmetric and its eigenproblem splits in two.

    Chebyshev grids are solved on their supported form (grid.member_grid). Any other grid uses
    its first and last nodes as the ends of a unit length member: order m weights are
    multiplied by (x_n - x_1)^m, a no-op whenever the grid spans [0, 1].
"""
import enum
import math
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from . import centro, kernel
from .centro import VectorLabel
from .errors import (ClassificationMismatchError, InvalidArgumentError, NumericFailureError,
                     UnsupportedBoundaryError)
from .grid import Grid, check_symmetry, member_grid, SYMMETRY_TOL
from .kernel import OpCounter
from .weights import Symmetry, classify_symmetry, weight_matrices

LOGGER = logging.getLogger(__name__)

OPERATOR_TOL = 1e-10
# |Im lambda| or negative Re lambda above this fraction of the spectral radius ends the real spectrum
SPECTRUM_TOL = 1e-8


class Support(enum.Enum):
    SIMPLY_SUPPORTED = "simply-supported"
    CLAMPED = "clamped"


class SolvePath(enum.Enum):
    AUTO = "auto"
    DENSE = "dense"
    FACTORIZED = "factorized"


class EdgeKind(enum.Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


@dataclass(frozen=True)
class BeamProblem:
    grid: Grid
    bc: Support = Support.SIMPLY_SUPPORTED

    def __post_init__(self):
        if self.grid.n < 6:
            raise InvalidArgumentError(f"a beam needs at least 6 grid points, got {self.grid.n}")


@dataclass(frozen=True)
class PlateProblem:
    """ Rectangular plate, alpha = a/b. alpha = 0 decouples the y direction. """
    grid_x: Grid
    grid_y: Grid
    alpha: float = 1.0
    bc: Support = Support.SIMPLY_SUPPORTED

    def __post_init__(self):
        if not self.alpha >= 0.0:
            raise InvalidArgumentError(f"aspect ratio must be >= 0, got {self.alpha}")
        for g in (self.grid_x, self.grid_y):
            if g.n < 6:
                raise InvalidArgumentError(f"a plate needs at least 6 grid points per direction, got {g.n}")


@dataclass(frozen=True)
class SkewPlateProblem:
    """ Skew plate, theta the skew angle in degrees (90 is rectangular), beta the aspect ratio. """
    grid_x: Grid
    grid_y: Grid
    theta: float = 90.0
    beta: float = 1.0
    bc: Support = Support.CLAMPED

    def __post_init__(self):
        if not 0.0 < self.theta <= 90.0:
            raise InvalidArgumentError(f"skew angle must be in (0, 90] degrees, got {self.theta}")
        if not self.beta > 0.0:
            raise InvalidArgumentError(f"aspect ratio must be > 0, got {self.beta}")
        for g in (self.grid_x, self.grid_y):
            if g.n < 6:
                raise InvalidArgumentError(f"a plate needs at least 6 grid points per direction, got {g.n}")

    @property
    def cos_theta(self) -> float:
        value = math.cos(math.radians(self.theta))
        return 0.0 if abs(value) < 1e-15 else value


@dataclass(frozen=True)
class EdgeCondition:
    """ Dirichlet values, or a prescribed derivative along +x / +y (Neumann). None means zeros. """
    kind: EdgeKind = EdgeKind.DIRICHLET
    values: Optional[np.ndarray] = None

    def values_for(self, count: int) -> np.ndarray:
        if self.values is None:
            return np.zeros(count)
        values = np.asarray(self.values, dtype=float).reshape(-1)
        if values.shape != (count,):
            raise InvalidArgumentError(f"edge expects {count} values, got {values.shape[0]}")
        return values


@dataclass(frozen=True)
class ConvDiffProblem:
    """ Steady convection-diffusion on the unit square,

            -c phi_ij + alpha sum_k b^x_ik phi_kj + beta sum_k b^y_jk phi_ik = source_ij

        at interior nodes, with c = sink_term_coeff. Edges default to: west Dirichlet with the
        inlet values, east and north Dirichlet zero, south zero derivative.
    """
    grid_x: Grid
    grid_y: Grid
    alpha: float = 1.0
    beta: float = 1.0
    sink_term_coeff: float = 0.0
    inlet_values: Optional[np.ndarray] = None
    west: Optional[EdgeCondition] = None
    east: Optional[EdgeCondition] = None
    south: Optional[EdgeCondition] = None
    north: Optional[EdgeCondition] = None
    source: Optional[np.ndarray] = None

    def __post_init__(self):
        for g in (self.grid_x, self.grid_y):
            if g.n < 3:
                raise InvalidArgumentError(f"convection-diffusion needs at least 3 grid points per direction, got {g.n}")

    def edges(self) -> Dict[str, EdgeCondition]:
        return {
            "west": self.west or EdgeCondition(EdgeKind.DIRICHLET, self.inlet_values),
            "east": self.east or EdgeCondition(EdgeKind.DIRICHLET),
            "south": self.south or EdgeCondition(EdgeKind.NEUMANN),
            "north": self.north or EdgeCondition(EdgeKind.DIRICHLET),
        }


@dataclass(frozen=True)
class ModifiedOperatorSet:
    """ Boundary-condition-modified weighting matrices of orders 1 to 4 over the reduced unknowns.
        transfer (n x size) rebuilds nodal values, boundary nodes included, from reduced ones.
    """
    abar: np.ndarray = field(repr=False)
    bbar: np.ndarray = field(repr=False)
    cbar: np.ndarray = field(repr=False)
    dbar: np.ndarray = field(repr=False)
    transfer: np.ndarray = field(repr=False)
    support: Optional[Support] = None

    @property
    def size(self) -> int:
        return self.dbar.shape[0]

    def symmetries(self) -> Dict[str, Symmetry]:
        return {
            "abar": classify_symmetry(self.abar, OPERATOR_TOL),
            "bbar": classify_symmetry(self.bbar, OPERATOR_TOL),
            "cbar": classify_symmetry(self.cbar, OPERATOR_TOL),
            "dbar": classify_symmetry(self.dbar, OPERATOR_TOL),
        }


@dataclass
class FrequencyResult:
    """ Nondimensional frequencies in ascending order with mode labels and the path used. """
    frequencies: np.ndarray
    labels: List[VectorLabel]
    path: SolvePath
    modes: Optional[np.ndarray] = field(default=None, repr=False)
    counter: OpCounter = field(default_factory=OpCounter)
    problem: str = ""
    reference: Optional[np.ndarray] = None

    def relative_errors(self) -> Optional[np.ndarray]:
        if self.reference is None:
            return None
        ref = np.asarray(self.reference, dtype=float)[:len(self.frequencies)]
        return (self.frequencies[:len(ref)] - ref) / ref

    def with_reference(self, reference: Sequence[float]) -> 'FrequencyResult':
        self.reference = np.asarray(reference, dtype=float)
        return self

    def head(self, count: int) -> 'FrequencyResult':
        """ Keep the lowest count modes. """
        self.frequencies = self.frequencies[:count]
        self.labels = self.labels[:count]
        if self.modes is not None:
            self.modes = self.modes[:count]
        return self

    def to_repr(self) -> Dict:
        errors = self.relative_errors()
        modes = []
        for i, omega in enumerate(self.frequencies):
            mode = {"mode": i + 1, "frequency": float(omega), "label": self.labels[i].value}
            if errors is not None and i < len(errors):
                mode["reference"] = float(self.reference[i])
                mode["relative_error"] = float(errors[i])
            modes.append(mode)
        return {
            "problem": self.problem,
            "path": self.path.value,
            "modes": modes,
            "counter": self.counter.to_repr(),
        }

    def csv_rows(self) -> List[List]:
        errors = self.relative_errors()
        rows = []
        for i, omega in enumerate(self.frequencies):
            error = float(errors[i]) if errors is not None and i < len(errors) else ""
            rows.append([i + 1, float(omega), self.labels[i].value, error])
        return rows


@dataclass
class ConvDiffResult:
    """ Full nodal solution phi[i, j] = phi(x_i, y_j) of a convection-diffusion problem. """
    solution: np.ndarray
    path: SolvePath
    residual: float
    grid_x: Grid = field(repr=False)
    grid_y: Grid = field(repr=False)
    counter: OpCounter = field(default_factory=OpCounter)

    @property
    def interior(self) -> np.ndarray:
        return self.solution[1:-1, 1:-1]

    def to_repr(self) -> Dict:
        return {
            "problem": "conv-diff",
            "path": self.path.value,
            "residual": self.residual,
            "x": self.grid_x.nodes.tolist(),
            "y": self.grid_y.nodes.tolist(),
            "solution": self.solution.tolist(),
            "counter": self.counter.to_repr(),
        }

    def csv_rows(self) -> List[List]:
        rows = []
        for i, x in enumerate(self.grid_x.nodes):
            for j, y in enumerate(self.grid_y.nodes):
                rows.append([i + 1, j + 1, float(x), float(y), float(self.solution[i, j])])
        return rows


def _member_weights(g: Grid, order: int) -> List[np.ndarray]:
    """ Weight matrices of orders 1..order for a unit member spanning the first to last node. """
    return [w.values * g.span ** w.order for w in weight_matrices(g, order)]


def _clamped_transfer(a: np.ndarray, keep: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    transfer = np.zeros((n, len(keep)))
    transfer[keep, np.arange(len(keep))] = 1.0
    ends, neighbours = [0, n - 1], [1, n - 2]
    # w' = 0 at both ends, solved for the two nodes next to the supports
    transfer[neighbours] = -kernel.lu_solve(a[np.ix_(ends, neighbours)], a[np.ix_(ends, keep)])
    return transfer


def modified_operators(g: Grid, support: Support) -> ModifiedOperatorSet:
    """ A_bar, B_bar, C_bar, D_bar over the unknowns left once the end conditions are applied:
        n-2 interior values when simply supported, n-4 when clamped.
    """
    g = member_grid(g)
    n = g.n
    if support is Support.SIMPLY_SUPPORTED:
        a, b = _member_weights(g, 2)
        keep = np.arange(1, n - 1)
        bbar = b.copy()
        bbar[[0, -1], :] = 0.0
        inner = np.ix_(keep, keep)
        return ModifiedOperatorSet(a[inner].copy(), bbar[inner].copy(), (a @ bbar)[inner], (b @ bbar)[inner],
                                   np.eye(n)[:, keep], support)
    if support is Support.CLAMPED:
        a, b, c, d = _member_weights(g, 4)
        keep = np.arange(2, n - 2)
        transfer = _clamped_transfer(a, keep)
        abar, bbar, cbar, dbar = ((w @ transfer)[keep] for w in (a, b, c, d))
        return ModifiedOperatorSet(abar, bbar, cbar, dbar, transfer, support)
    raise InvalidArgumentError(f"unknown support {support!r}")


def _beam_operators(p: BeamProblem) -> ModifiedOperatorSet:
    if not check_symmetry(member_grid(p.grid), SYMMETRY_TOL):
        LOGGER.warning("beam grid is not mirror symmetric, its operator has no centro structure")
    return modified_operators(p.grid, p.bc)


def beam_operator(p: BeamProblem) -> np.ndarray:
    """ The fourth-order operator of a beam, boundary conditions included.

        >>> from centrodq.grid import make_uniform
        >>> op = beam_operator(BeamProblem(make_uniform(8)))
        >>> classify_symmetry(op)
        <Symmetry.CENTRO: 'centro'>
    """
    return _beam_operators(p).dbar


def _operator_pair(grid_x: Grid, grid_y: Grid, support: Support) -> Tuple[ModifiedOperatorSet, ModifiedOperatorSet]:
    return modified_operators(grid_x, support), modified_operators(grid_y, support)


def _require_clamped(p: SkewPlateProblem):
    if p.bc is not Support.CLAMPED:
        raise UnsupportedBoundaryError(
            "no built-in modified operators for simply supported skew plates",
            "the boundary condition couples w,xx (or w,yy) with the cross derivative w,xy; "
            "pass modified operator sets explicitly")


def plate_operator(p: PlateProblem,
                   operators: Optional[Tuple[ModifiedOperatorSet, ModifiedOperatorSet]] = None) -> np.ndarray:
    """ I (x) D_x + 2 alpha^2 B_y (x) B_x + alpha^4 D_y (x) I acting on vec(W), W[i, j] = w(x_i, y_j)
        over the reduced unknowns of each direction.
    """
    ox, oy = operators or _operator_pair(p.grid_x, p.grid_y, p.bc)
    ix = np.eye(ox.size)
    iy = np.eye(oy.size)
    a2 = p.alpha ** 2
    return kernel.kron(iy, ox.dbar) + 2.0 * a2 * kernel.kron(oy.bbar, ox.bbar) + a2 * a2 * kernel.kron(oy.dbar, ix)


def skew_plate_operator(p: SkewPlateProblem,
                        operators: Optional[Tuple[ModifiedOperatorSet, ModifiedOperatorSet]] = None) -> np.ndarray:
    """ Skew plate operator in normalized skew coordinates,

            I (x) D_x - 4 beta cos(theta) A_y (x) C_x + 2 beta^2 (1 + 2 cos^2 theta) B_y (x) B_x
              - 4 beta^3 cos(theta) C_y (x) A_x + beta^4 D_y (x) I

        whose eigenvalues are omega_bar^2 = (rho h a^4 omega^2 / D) sin^4(theta).

        :param operators: caller supplied (x, y) modified operator sets; required for simply
            supported edges, whose cross-derivative boundary condition has no built-in construction
    """
    if operators is None:
        _require_clamped(p)
        operators = _operator_pair(p.grid_x, p.grid_y, p.bc)
    ox, oy = operators
    ix = np.eye(ox.size)
    iy = np.eye(oy.size)
    cos = p.cos_theta
    beta = p.beta
    op = kernel.kron(iy, ox.dbar) + beta ** 4 * kernel.kron(oy.dbar, ix)
    op = op + 2.0 * beta ** 2 * (1.0 + 2.0 * cos * cos) * kernel.kron(oy.bbar, ox.bbar)
    if cos != 0.0:
        op = op - 4.0 * beta * cos * kernel.kron(oy.abar, ox.cbar)
        op = op - 4.0 * beta ** 3 * cos * kernel.kron(oy.cbar, ox.abar)
    return op


def _choose_path(op: np.ndarray, requested: SolvePath) -> SolvePath:
    symmetry = classify_symmetry(op, OPERATOR_TOL)
    if requested is SolvePath.DENSE:
        return SolvePath.DENSE
    if symmetry is Symmetry.CENTRO:
        return SolvePath.FACTORIZED
    if requested is SolvePath.FACTORIZED:
        raise ClassificationMismatchError("factorized path needs a centrosymmetric operator",
                                          f"operator classifies {symmetry.value}")
    LOGGER.warning("operator is not centrosymmetric, falling back to the dense eigensolver")
    return SolvePath.DENSE


def _eigenproblem(op: np.ndarray, path: SolvePath, vectors: bool,
                  counter: OpCounter) -> Tuple[np.ndarray, List[VectorLabel], Optional[np.ndarray]]:
    if path is SolvePath.FACTORIZED:
        pairs = centro.eig_centro(centro.split(op, Symmetry.CENTRO, OPERATOR_TOL), vectors, counter)
        values = np.array([p.eigenvalue for p in pairs], dtype=complex)
        labels = [p.label for p in pairs]
        vecs = np.column_stack([p.eigenvector for p in pairs]) if vectors else None
        return values, labels, vecs
    if vectors:
        values, vecs = kernel.eig_dense(op, vectors=True, counter=counter)
        labels = [centro.label_of(vecs[:, i]) for i in range(len(values))]
        return values, labels, vecs
    values = kernel.eig_dense(op, counter=counter)
    return values, [VectorLabel.UNLABELED] * len(values), None


def _to_frequencies(values: np.ndarray, count: Optional[int]) -> Tuple[np.ndarray, np.ndarray]:
    """ Indices of the lowest eigenvalues (by real part) and their sqrt. The scan stops at the
        first eigenvalue that is complex or negative; the upper spectrum of a non-symmetric DQ
        operator holds complex pairs. count=None takes every
        eigenvalue below that point.
    """
    order = np.lexsort((values.imag, values.real))
    radius = max(float(np.max(np.abs(values))), kernel.EPS)
    admissible = 0
    for value in values[order]:
        if abs(value.imag) > SPECTRUM_TOL * radius or value.real < -SPECTRUM_TOL * radius:
            break
        admissible += 1
    if admissible == 0:
        raise NumericFailureError("operator has no real non-negative lowest eigenvalue",
                                  value=complex(values[order[0]]))
    wanted = admissible if count is None else count
    if wanted > admissible:
        LOGGER.warning("%d modes requested, only the lowest %d are real (next eigenvalue %s)",
                       count, admissible, complex(values[order[admissible]]))
        wanted = admissible
    order = order[:wanted]
    return order, np.sqrt(np.maximum(values[order].real, 0.0))


def solve_frequencies(op: np.ndarray, count: Optional[int] = None, path: SolvePath = SolvePath.AUTO,
                      vectors: bool = True, counter: OpCounter = None, problem: str = "") -> FrequencyResult:
    """ Frequencies sqrt(lambda) of an assembled operator, lowest first. With count=None every
        mode below the first complex (or negative) eigenvalue is returned.
    """
    size = op.shape[0]
    if count is not None and not 1 <= count <= size:
        raise InvalidArgumentError(f"can return between 1 and {size} modes, {count} requested")
    counter = counter if counter is not None else OpCounter()
    chosen = _choose_path(op, path)
    values, labels, vecs = _eigenproblem(op, chosen, vectors, counter)
    order, omegas = _to_frequencies(values, count)
    modes = None
    if vecs is not None:
        modes = np.real(vecs[:, order]).T
    LOGGER.debug("%s: %s path, %d multiplies", problem or "operator", chosen.value, counter.multiplies)
    return FrequencyResult(omegas, [labels[i] for i in order], chosen, modes, counter, problem)


def beam_frequencies(p: BeamProblem, count: Optional[int] = None, path: SolvePath = SolvePath.AUTO,
                     vectors: bool = True, counter: OpCounter = None) -> FrequencyResult:
    """ Beam frequencies; mode shapes are nodal, end values included. """
    ops = _beam_operators(p)
    result = solve_frequencies(ops.dbar, count, path, vectors, counter, f"beam/{p.bc.value}")
    if result.modes is not None:
        result.modes = (ops.transfer @ result.modes.T).T
    return result


def _plate_modes(result: FrequencyResult, ox: ModifiedOperatorSet, oy: ModifiedOperatorSet) -> FrequencyResult:
    if result.modes is not None:
        shapes = [ox.transfer @ v.reshape((ox.size, oy.size), order="F") @ oy.transfer.T for v in result.modes]
        result.modes = np.array(shapes)
    return result


def plate_frequencies(p: PlateProblem, count: Optional[int] = None, path: SolvePath = SolvePath.AUTO,
                      vectors: bool = True, counter: OpCounter = None) -> FrequencyResult:
    operators = _operator_pair(p.grid_x, p.grid_y, p.bc)
    result = solve_frequencies(plate_operator(p, operators), count, path, vectors, counter, f"plate/{p.bc.value}")
    return _plate_modes(result, *operators)


def skew_plate_frequencies(p: SkewPlateProblem, count: Optional[int] = None, path: SolvePath = SolvePath.AUTO,
                           vectors: bool = True, counter: OpCounter = None,
                           operators: Optional[Tuple[ModifiedOperatorSet, ModifiedOperatorSet]] = None) \
        -> FrequencyResult:
    if operators is None:
        _require_clamped(p)
        operators = _operator_pair(p.grid_x, p.grid_y, p.bc)
    result = solve_frequencies(skew_plate_operator(p, operators), count, path, vectors, counter,
                               f"skew-plate/{p.bc.value}")
    return _plate_modes(result, *operators)


def beam_effort(p: BeamProblem) -> Dict:
    """ Multiply counts of the beam eigenproblem: dense, both half blocks, and the symmetric
        half block alone (enough for the fundamental, whose mode is symmetric).
    """
    op = beam_operator(p)
    dense = OpCounter()
    kernel.eig_dense(op, counter=dense)
    two_block = OpCounter()
    blocks = centro.split(op, Symmetry.CENTRO, OPERATOR_TOL)
    centro.eig_centro(blocks, vectors=False, counter=two_block)
    one_block = OpCounter()
    sym, _ = centro.half_blocks(blocks, one_block)
    kernel.eig_dense(sym, counter=one_block)
    return {
        "n": p.grid.n,
        "dense": dense.multiplies,
        "two_block": two_block.multiplies,
        "one_block": one_block.multiplies,
        "two_block_ratio": two_block.multiplies / dense.multiplies,
        "one_block_ratio": one_block.multiplies / dense.multiplies,
    }


def simply_supported_exact(count: int) -> np.ndarray:
    """ (k pi)^2, k = 1..count """
    k = np.arange(1, count + 1)
    return (k * math.pi) ** 2


def clamped_clamped_roots(count: int) -> np.ndarray:
    """ Smallest positive roots of cos(l) cosh(l) = 1; the k-th lies in (k pi, (k+1) pi). """
    def characteristic(lam: float) -> float:
        return math.cos(lam) * math.cosh(lam) - 1.0

    return np.array([brentq(characteristic, k * math.pi, (k + 1) * math.pi, xtol=1e-14)
                     for k in range(1, count + 1)])


def clamped_clamped_exact(count: int) -> np.ndarray:
    """ Nondimensional clamped-clamped beam frequencies lambda_k^2. """
    return clamped_clamped_roots(count) ** 2


def plate_exact(alpha: float, count: int, terms: int = 8) -> np.ndarray:
    """ Navier solution of the simply supported plate, pi^2 (p^2 + alpha^2 q^2), lowest first. """
    values = sorted(math.pi ** 2 * (p * p + alpha * alpha * q * q)
                    for p in range(1, terms + 1) for q in range(1, terms + 1))
    return np.array(values[:count])


def _interior_operator(p: ConvDiffProblem) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """ Rows of the discrete equation at interior nodes over all nodes (column-major node order),
        plus the first order weights used by Neumann edges.
    """
    ax, bx = _member_weights(member_grid(p.grid_x), 2)
    ay, by = _member_weights(member_grid(p.grid_y), 2)
    nx, ny = p.grid_x.n, p.grid_y.n
    full = (p.alpha * kernel.kron(np.eye(ny), bx) + p.beta * kernel.kron(by, np.eye(nx))
            - p.sink_term_coeff * np.eye(nx * ny))
    return full, ax, ay


def _boundary_rows(p: ConvDiffProblem, ax: np.ndarray, ay: np.ndarray,
                   boundary: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """ One equation per boundary node. A node on any Dirichlet edge takes that edge's value;
        otherwise the west/east (then south/north) derivative condition applies.
    """
    nx, ny = p.grid_x.n, p.grid_y.n
    edges = p.edges()
    values = {
        "west": edges["west"].values_for(ny),
        "east": edges["east"].values_for(ny),
        "south": edges["south"].values_for(nx),
        "north": edges["north"].values_for(nx),
    }
    rows = np.zeros((len(boundary), nx * ny))
    rhs = np.zeros(len(boundary))
    for r, node in enumerate(boundary):
        i, j = node % nx, node // nx
        on = [name for name, hit in (("west", i == 0), ("east", i == nx - 1),
                                     ("south", j == 0), ("north", j == ny - 1)) if hit]
        dirichlet = [name for name in on if edges[name].kind is EdgeKind.DIRICHLET]
        name = dirichlet[0] if dirichlet else on[0]
        position = j if name in ("west", "east") else i
        rhs[r] = values[name][position]
        if edges[name].kind is EdgeKind.DIRICHLET:
            rows[r, node] = 1.0
        elif name in ("west", "east"):
            # d/dx at (i, j): sum_k a^x_ik phi_kj
            rows[r, j * nx + np.arange(nx)] = ax[i]
        else:
            rows[r, np.arange(ny) * nx + i] = ay[j]
    return rows, rhs


def convdiff_solve(p: ConvDiffProblem, path: SolvePath = SolvePath.AUTO,
                   counter: OpCounter = None) -> ConvDiffResult:
    """ Substructured solve: interior unknowns are eliminated through the centrosymmetric interior
        operator, phi_I = K_II^-1 (f - K_IB phi_B), leaving a small system in the boundary values.
        With path=DENSE the whole system is solved monolithically instead.
    """
    counter = counter if counter is not None else OpCounter()
    nx, ny = p.grid_x.n, p.grid_y.n
    full, ax, ay = _interior_operator(p)
    nodes = np.arange(nx * ny)
    i_idx, j_idx = nodes % nx, nodes // nx
    is_interior = (i_idx > 0) & (i_idx < nx - 1) & (j_idx > 0) & (j_idx < ny - 1)
    interior = nodes[is_interior]
    boundary = nodes[~is_interior]

    source = np.zeros((nx - 2, ny - 2)) if p.source is None else np.asarray(p.source, dtype=float)
    if source.shape != (nx - 2, ny - 2):
        raise InvalidArgumentError(f"source must have shape {(nx - 2, ny - 2)}, got {source.shape}")
    f = source.reshape(-1, order="F")

    k_ii = full[np.ix_(interior, interior)]
    k_ib = full[np.ix_(interior, boundary)]
    m_b, g = _boundary_rows(p, ax, ay, boundary)
    m_bi = m_b[:, interior]
    m_bb = m_b[:, boundary]

    phi = np.zeros(nx * ny)
    chosen = path
    if path is not SolvePath.DENSE:
        symmetry = classify_symmetry(k_ii, OPERATOR_TOL)
        if symmetry is Symmetry.CENTRO:
            chosen = SolvePath.FACTORIZED
        elif path is SolvePath.FACTORIZED:
            raise ClassificationMismatchError("interior operator is not centrosymmetric",
                                              f"operator classifies {symmetry.value}")
        else:
            LOGGER.warning("interior operator is not centrosymmetric, eliminating with dense LU")
            chosen = SolvePath.DENSE

    if chosen is SolvePath.FACTORIZED:
        blocks = centro.split(k_ii, Symmetry.CENTRO, OPERATOR_TOL)
        rhs = np.column_stack([f, k_ib])
        eliminated = centro.solve_centro(blocks, rhs, counter)
        x0, y = eliminated[:, 0], eliminated[:, 1:]
        reduced = m_bb - kernel.matmul(m_bi, y, counter)
        phi_b = kernel.lu_solve(reduced, g - kernel.matmul(m_bi, x0, counter), counter)
        phi[boundary] = phi_b
        phi[interior] = x0 - kernel.matmul(y, phi_b, counter)
        LOGGER.debug("conv-diff: %d interior unknowns eliminated, %d boundary unknowns", len(interior), len(boundary))
    else:
        system = np.zeros((nx * ny, nx * ny))
        rhs = np.zeros(nx * ny)
        system[:len(interior), interior] = k_ii
        system[:len(interior), boundary] = k_ib
        rhs[:len(interior)] = f
        system[len(interior):, interior] = m_bi
        system[len(interior):, boundary] = m_bb
        rhs[len(interior):] = g
        phi = kernel.lu_solve(system, rhs, counter)

    residual = max(float(np.max(np.abs(k_ii @ phi[interior] + k_ib @ phi[boundary] - f), initial=0.0)),
                   float(np.max(np.abs(m_b @ phi - g), initial=0.0)))
    if residual > 1e-8 * max(1.0, float(np.max(np.abs(phi)))):
        LOGGER.warning("conv-diff residual %.3g, boundary data may be inconsistent", residual)
    return ConvDiffResult(phi.reshape((nx, ny), order="F"), chosen, residual, member_grid(p.grid_x),
                          member_grid(p.grid_y), counter)
