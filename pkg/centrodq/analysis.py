"""
    Truncation error of DQ derivatives and the multiply-count benchmark of the structured paths.
"""
import math
import time
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import psutil
from scipy.optimize import linear_sum_assignment

from . import centro, kernel
from .centro import CentroBlocks, SkewCentroBlocks
from .errors import InvalidArgumentError
from .grid import Grid
from .kernel import OpCounter
from .weights import monomial_derivative, weight_matrices

LOGGER = logging.getLogger(__name__)

AGREEMENT_TOL = 1e-8
BENCH_OPS = ("det", "inv", "eig")


@dataclass
class TruncationReport:
    """ Per-node error of an order m DQ derivative against the analytic derivative. """
    grid: Grid = field(repr=False)
    order: int
    approx: np.ndarray = field(repr=False)
    exact: np.ndarray = field(repr=False)
    k_bound: Optional[float] = None
    function: str = ""

    @property
    def errors(self) -> np.ndarray:
        return self.approx - self.exact

    @property
    def argmax(self) -> int:
        """ 1-based node of the largest absolute error. """
        return int(np.argmax(np.abs(self.errors))) + 1

    @property
    def max_error(self) -> float:
        return float(np.max(np.abs(self.errors)))

    @property
    def estimate(self) -> Optional[np.ndarray]:
        if self.k_bound is None:
            return None
        return error_estimate(self.grid, self.k_bound)

    @property
    def bounds(self) -> Optional[Tuple[float, Optional[float]]]:
        if self.k_bound is None:
            return None
        return error_bounds(self.grid.n, self.k_bound)

    def to_repr(self) -> Dict:
        data = {
            "function": self.function,
            "order": self.order,
            "grid": self.grid.to_repr(),
            "errors": self.errors.tolist(),
            "argmax": self.argmax,
            "max_error": self.max_error,
        }
        if self.k_bound is not None:
            end, center = self.bounds
            data["k_bound"] = self.k_bound
            data["estimate"] = self.estimate.tolist()
            data["end_bound"] = end
            data["center_bound"] = center
        return data

    def csv_rows(self) -> List[List]:
        estimate = self.estimate
        rows = []
        for i, x in enumerate(self.grid.nodes):
            rows.append([i + 1, float(x), float(self.approx[i]), float(self.exact[i]), float(self.errors[i]),
                         "" if estimate is None else float(estimate[i])])
        return rows


def truncation_profile(g: Grid, f: Sequence[float], f_prime: Sequence[float], order: int = 1,
                       k_bound: Optional[float] = None, function: str = "") -> TruncationReport:
    """ Compare the order m DQ derivative of samples f with analytic derivative values f_prime.

        >>> from centrodq.grid import make_uniform
        >>> g = make_uniform(5)
        >>> truncation_profile(g, g.nodes ** 4, 4 * g.nodes ** 3).max_error < 1e-9
        True
    """
    f = np.asarray(f, dtype=float)
    f_prime = np.asarray(f_prime, dtype=float)
    if f.shape != (g.n,) or f_prime.shape != (g.n,):
        raise InvalidArgumentError(f"expected {g.n} samples and derivative values, "
                                   f"got {f.shape[0] if f.ndim else 0} and {f_prime.shape[0] if f_prime.ndim else 0}")
    if k_bound is not None and not k_bound > 0:
        raise InvalidArgumentError(f"derivative bound K must be > 0, got {k_bound}")
    w = weight_matrices(g, order)[-1]
    return TruncationReport(g, order, w.values @ f, f_prime, k_bound, function)


def error_bounds(n: int, k_bound: float) -> Tuple[float, Optional[float]]:
    """ (end, center) truncation bounds for n nodes and |f^(n)| <= K:

            end    = K / (n (n-1)^(n-1))
            center = (n/2 - 1)! (n/2)! K / (n! (n-1)^(n-1))

        The center bound only exists for even n and is None otherwise.
    """
    if n < 2:
        raise InvalidArgumentError(f"bounds need at least 2 nodes, got {n}")
    if not k_bound > 0:
        raise InvalidArgumentError(f"derivative bound K must be > 0, got {k_bound}")
    power = Fraction((n - 1) ** (n - 1))
    end = k_bound * float(1 / (n * power))
    if n % 2:
        LOGGER.debug("no center bound for odd n=%d", n)
        return end, None
    half = n // 2
    center = k_bound * float(Fraction(math.factorial(half - 1) * math.factorial(half), math.factorial(n)) / power)
    return end, center


def bound_ratio(n: int) -> Fraction:
    """ end bound / center bound, exactly. n=8 gives 35. """
    if n < 2 or n % 2:
        raise InvalidArgumentError(f"the bound ratio needs an even n >= 2, got {n}")
    half = n // 2
    return Fraction(math.factorial(n), n * math.factorial(half - 1) * math.factorial(half))


def error_estimate(g: Grid, k_bound: float) -> np.ndarray:
    """ K |W'(x_i)| / n! per node, W(x) = prod_k (x - x_k). """
    if not k_bound > 0:
        raise InvalidArgumentError(f"derivative bound K must be > 0, got {k_bound}")
    x = g.nodes
    diff = np.abs(x[:, None] - x[None, :]) + np.eye(g.n)
    return k_bound * np.prod(diff, axis=1) / math.factorial(g.n)


def _runge(x: np.ndarray, order: int) -> np.ndarray:
    u = 2.0 * x - 1.0
    q = 1.0 + 25.0 * u * u
    if order == 0:
        return 1.0 / q
    if order == 1:
        return 2.0 * (-50.0 * u / q ** 2)
    if order == 2:
        return 4.0 * (3750.0 * u * u - 50.0) / q ** 3
    raise InvalidArgumentError(f"runge derivatives are available up to order 2, got {order}")


def builtin_function(name: str) -> Callable[[np.ndarray, int], np.ndarray]:
    """ Test function by name, called as fn(x, m) for its m-th derivative (m=0 the values).

        Known names: exp, sin2pi, runge (1/(1+25(2x-1)^2)) and monomial:p.
    """
    if name == "exp":
        return lambda x, m: np.exp(x)
    if name == "sin2pi":
        return lambda x, m: (2.0 * math.pi) ** m * np.sin(2.0 * math.pi * x + m * math.pi / 2.0)
    if name == "runge":
        return _runge
    if name.startswith("monomial:"):
        try:
            p = int(name.split(":", 1)[1])
        except ValueError:
            raise InvalidArgumentError(f"bad monomial degree in {name!r}")
        if p < 0:
            raise InvalidArgumentError(f"monomial degree must be >= 0, got {p}")
        return lambda x, m: monomial_derivative(x, p, m)
    raise InvalidArgumentError(f"unknown function {name!r}, use exp, sin2pi, runge or monomial:p")


def profile_builtin(g: Grid, name: str, order: int = 1, k_bound: Optional[float] = None) -> TruncationReport:
    fn = builtin_function(name)
    return truncation_profile(g, fn(g.nodes, 0), fn(g.nodes, order), order, k_bound, name)


def random_centro(n: int, rng: np.random.Generator) -> CentroBlocks:
    """ Centrosymmetric matrix with block entries uniform in [-1, 1]. """
    m = n // 2
    a = rng.uniform(-1.0, 1.0, (m, m))
    c = rng.uniform(-1.0, 1.0, (m, m))
    if n % 2 == 0:
        return CentroBlocks(a, c)
    return CentroBlocks(a, c, rng.uniform(-1.0, 1.0, m), rng.uniform(-1.0, 1.0, m), rng.uniform(-1.0, 1.0))


def random_skew_centro(n: int, rng: np.random.Generator) -> SkewCentroBlocks:
    """ Skew-centrosymmetric matrix with block entries uniform in [-1, 1]. """
    m = n // 2
    a = rng.uniform(-1.0, 1.0, (m, m))
    c = rng.uniform(-1.0, 1.0, (m, m))
    if n % 2 == 0:
        return SkewCentroBlocks(a, c)
    return SkewCentroBlocks(a, c, rng.uniform(-1.0, 1.0, m), rng.uniform(-1.0, 1.0, m))


def spectrum_distance(a: np.ndarray, b: np.ndarray) -> float:
    """ Largest distance between matched eigenvalues (optimal matching), relative to the radius. """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise InvalidArgumentError(f"spectra differ in size: {a.shape[0]} vs {b.shape[0]}")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    radius = max(float(np.max(np.abs(a))), 1.0)
    return float(np.max(cost[rows, cols])) / radius


@dataclass(frozen=True)
class BenchRow:
    op: str
    symmetry: str
    n: int
    dense_mults: int
    factored_mults: int
    discrepancy: float

    @property
    def ratio(self) -> float:
        return self.factored_mults / self.dense_mults if self.dense_mults else float("nan")

    def to_repr(self) -> Dict:
        return {
            "op": self.op,
            "symmetry": self.symmetry,
            "n": self.n,
            "dense_mults": self.dense_mults,
            "factored_mults": self.factored_mults,
            "ratio": self.ratio,
            "discrepancy": self.discrepancy,
        }


@dataclass
class BenchReport:
    seed: int
    trials: int
    rows: List[BenchRow] = field(default_factory=list)
    resources: Optional[Dict] = None

    def ratio(self, op: str, n: int, symmetry: str = "centro") -> float:
        for row in self.rows:
            if row.op == op and row.n == n and row.symmetry == symmetry:
                return row.ratio
        raise KeyError((op, n, symmetry))

    def series(self, op: str, symmetry: str = "centro") -> List[Tuple[int, float]]:
        return [(row.n, row.ratio) for row in self.rows if row.op == op and row.symmetry == symmetry]

    @property
    def agrees(self) -> bool:
        return all(row.discrepancy <= AGREEMENT_TOL for row in self.rows)

    def to_repr(self) -> Dict:
        data = {
            "seed": self.seed,
            "trials": self.trials,
            "rows": [row.to_repr() for row in self.rows],
        }
        if self.resources is not None:
            data["resources"] = self.resources
        return data

    def csv_rows(self) -> List[List]:
        return [[r.op, r.symmetry, r.n, r.dense_mults, r.factored_mults, r.ratio, r.discrepancy] for r in self.rows]


def _relative(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1.0)


def _bench_det(blocks, dense: np.ndarray) -> Tuple[OpCounter, OpCounter, float]:
    d, f = OpCounter(label="dense"), OpCounter(label="factored")
    expected = kernel.lu_det(dense, d)
    got = centro.det_skew(blocks, f) if isinstance(blocks, SkewCentroBlocks) else centro.det_centro(blocks, f)
    return d, f, _relative(expected, got)


def _bench_inv(blocks, dense: np.ndarray) -> Tuple[OpCounter, OpCounter, float]:
    d, f = OpCounter(label="dense"), OpCounter(label="factored")
    expected = kernel.lu_inverse(dense, d)
    inverse = centro.inv_skew(blocks, f) if isinstance(blocks, SkewCentroBlocks) else centro.inv_centro(blocks, f)
    got = inverse.assemble()
    scale = max(float(np.max(np.abs(expected))), 1.0)
    return d, f, float(np.max(np.abs(expected - got))) / scale


def _bench_eig(blocks, dense: np.ndarray) -> Tuple[OpCounter, OpCounter, float]:
    d, f = OpCounter(label="dense"), OpCounter(label="factored")
    expected = kernel.eig_dense(dense, counter=d)
    if isinstance(blocks, SkewCentroBlocks):
        pairs = centro.eig_skew(blocks, vectors=False, counter=f)
    else:
        pairs = centro.eig_centro(blocks, vectors=False, counter=f)
    got = np.array([p.eigenvalue for p in pairs])
    return d, f, spectrum_distance(expected, got)


_BENCHES = {"det": _bench_det, "inv": _bench_inv, "eig": _bench_eig}


def _bench_size(n: int, trials: int, seed: int, ops: Sequence[str]) -> List[BenchRow]:
    rng = np.random.default_rng([seed, n])
    rows = []
    for symmetry, generate in (("centro", random_centro), ("skew-centro", random_skew_centro)):
        totals = {op: [0, 0, 0.0] for op in ops}
        for _ in range(trials):
            blocks = generate(n, rng)
            dense = blocks.assemble()
            for op in ops:
                d, f, discrepancy = _BENCHES[op](blocks, dense)
                total = totals[op]
                total[0] += d.multiplies
                total[1] += f.multiplies
                total[2] = max(total[2], discrepancy)
        for op in ops:
            dense_mults, factored_mults, discrepancy = totals[op]
            if discrepancy > AGREEMENT_TOL:
                LOGGER.warning("%s %s n=%d: factored and dense results differ by %.3g", symmetry, op, n, discrepancy)
            rows.append(BenchRow(op, symmetry, n, dense_mults, factored_mults, discrepancy))
    LOGGER.debug("bench n=%d done (%d trials)", n, trials)
    return rows


def bench_structured(sizes: Sequence[int], trials: int = 1, seed: int = 0, ops: Sequence[str] = BENCH_OPS,
                     workers: Optional[int] = None, measure_resources: bool = False) -> BenchReport:
    """ Multiply counts of dense and factorized det, inverse and eigenvalues on random centro and
        skew-centro matrices. Each size draws from its own generator seeded with (seed, n), so the
        report does not depend on how sizes are scheduled across workers.

        :param measure_resources: add wall-clock and process CPU seconds and resident memory (not reproducible)
    """
    sizes = list(sizes)
    if not sizes:
        raise InvalidArgumentError("bench needs at least one size")
    for n in sizes:
        if n < 4 or n % 2:
            raise InvalidArgumentError(f"bench sizes must be even and >= 4, got {n}")
    if trials < 1:
        raise InvalidArgumentError(f"trials must be >= 1, got {trials}")
    unknown = [op for op in ops if op not in _BENCHES]
    if unknown:
        raise InvalidArgumentError(f"unknown bench operations {unknown}, use {list(BENCH_OPS)}")

    process = psutil.Process() if measure_resources else None
    start = process.cpu_times() if process else None
    wall = time.perf_counter()
    with ThreadPoolExecutor(max_workers=workers) as executor:
        results = list(executor.map(lambda n: _bench_size(n, trials, seed, ops), sizes))
    report = BenchReport(seed, trials, [row for rows in results for row in rows])
    if process:
        end = process.cpu_times()
        report.resources = {
            "wall_seconds": time.perf_counter() - wall,
            "cpu_seconds": (end.user - start.user) + (end.system - start.system),
            "rss_bytes": process.memory_info().rss,
        }
    return report
