"""
    Differential quadrature on symmetric grids, with the centrosymmetric structure of the
    weighting matrices used to halve determinants, inverses, linear solves and eigenproblems.

    >>> from centrodq import BeamProblem, beam_frequencies, make_uniform
    >>> result = beam_frequencies(BeamProblem(make_uniform(8)), count=2)
    >>> [round(float(w), 4) for w in result.frequencies]
    [9.8683, 39.2411]
"""
import logging

from .errors import (DQError, InvalidArgumentError, DegenerateGridError, InsufficientNodesError,
                     ClassificationMismatchError, UnsupportedBoundaryError, SingularMatrixError,
                     NumericFailureError, OutputError)
from .grid import (Grid, GridKind, make_uniform, make_chebyshev, make_supported_chebyshev, make_custom,
                   member_grid, check_symmetry)
from .weights import (Symmetry, WeightMatrix, classify_symmetry, first_order, higher_order, weight_matrices,
                      chebyshev_closed_form, chebyshev_printed_diagonal, apply)
from .kernel import OpCounter, lu_det, lu_solve, lu_inverse, eig_dense
from .centro import (CentroBlocks, SkewCentroBlocks, SpectralPair, VectorLabel, reverse_apply, split,
                     half_blocks, det_centro, det_skew, inv_centro, inv_skew, eig_centro, eig_skew,
                     solve_centro, kron_class)
from .problems import (Support, SolvePath, EdgeKind, EdgeCondition, BeamProblem, PlateProblem,
                       SkewPlateProblem, ConvDiffProblem, ModifiedOperatorSet, FrequencyResult, ConvDiffResult,
                       modified_operators, beam_operator, beam_frequencies, beam_effort, plate_operator,
                       plate_frequencies, skew_plate_operator, skew_plate_frequencies, convdiff_solve)
from .analysis import (TruncationReport, BenchReport, truncation_profile, error_bounds, error_estimate,
                       bench_structured)

LOGGER = logging.getLogger(__name__)
