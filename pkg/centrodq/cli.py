"""
    Command line front end.

    stdout carries data only (csv or json); diagnostics and errors go to stderr.
    Exit codes: 0 success, 2 bad arguments, 3 numeric failure, 4 I/O failure.
"""
import sys
import logging
import argparse
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import analysis, definitions, problems
from .config import PROBLEMS, RunConfig, load_config, from_mapping, merge
from .errors import DQError, EXIT_OK, EXIT_USAGE, InvalidArgumentError, NumericFailureError
from .grid import Grid, GridKind, make_custom, make_grid
from .helpers import atomic_write, from_json, parse_float_list, parse_int_list, read_text, to_csv, to_json
from .weights import weight_matrices

LOGGER = logging.getLogger(__name__)

# most modes reported when --count is not given
DEFAULT_MODES = 6


@dataclass
class Output:
    """ One result ready to be rendered. """
    data: Dict
    header: List[str]
    rows: List[List]
    schema: str

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return to_csv(self.header, self.rows)
        return to_json(self.data) + "\n"


def _grid(cfg: RunConfig, n: Optional[int] = None) -> Grid:
    if cfg.grid == GridKind.CUSTOM.value:
        return make_custom(cfg.nodes)
    return make_grid(cfg.grid, n if n is not None else cfg.n)


def cmd_weights(cfg: RunConfig) -> Output:
    w = weight_matrices(_grid(cfg), cfg.order)[-1]
    header = ["row", "symmetry"] + [f"c{j + 1}" for j in range(w.n)]
    rows = [[i + 1, w.symmetry.value] + row for i, row in enumerate(w.csv_rows())]
    return Output(w.to_repr(), header, rows, "weights")


def _reference(cfg: RunConfig) -> Optional[Callable[[int], np.ndarray]]:
    """ Reference frequencies as a function of the mode count, checked before anything is solved. """
    if cfg.reference is None:
        return None
    if cfg.reference != "exact":
        return lambda count: np.asarray(cfg.reference, dtype=float)
    bc = cfg.resolved_bc
    if cfg.problem == "beam":
        if bc == problems.Support.CLAMPED.value:
            return problems.clamped_clamped_exact
        return problems.simply_supported_exact
    if cfg.problem == "plate" and bc == problems.Support.SIMPLY_SUPPORTED.value:
        return lambda count: problems.plate_exact(cfg.alpha, count)
    raise InvalidArgumentError(f"no exact reference for {cfg.problem} ({bc}), pass values instead")


def _frequency_output(result: problems.FrequencyResult) -> Output:
    return Output(result.to_repr(), ["mode", "frequency", "label", "relative_error"], result.csv_rows(), "frequencies")


def _inlet(cfg: RunConfig, ny: int) -> np.ndarray:
    values = cfg.inlet if cfg.inlet is not None else [1.0]
    if len(values) == 1:
        return np.full(ny, float(values[0]))
    return np.asarray(values, dtype=float)


def cmd_solve(cfg: RunConfig) -> Output:
    path = problems.SolvePath(cfg.path)
    bc = problems.Support(cfg.resolved_bc)
    gx = _grid(cfg)
    gy = _grid(cfg, cfg.ny) if cfg.ny is not None else gx
    if cfg.problem == "conv-diff":
        p = problems.ConvDiffProblem(gx, gy, cfg.alpha, cfg.beta, cfg.sink, _inlet(cfg, gy.n))
        solution = problems.convdiff_solve(p, path)
        return Output(solution.to_repr(), ["i", "j", "x", "y", "phi"], solution.csv_rows(), "conv-diff")
    reference = _reference(cfg)
    if cfg.problem == "beam":
        result = problems.beam_frequencies(problems.BeamProblem(gx, bc), cfg.count, path, vectors=False)
    elif cfg.problem == "plate":
        p = problems.PlateProblem(gx, gy, cfg.alpha, bc)
        result = problems.plate_frequencies(p, cfg.count, path, vectors=False)
    else:
        p = problems.SkewPlateProblem(gx, gy, cfg.theta, cfg.beta, bc)
        result = problems.skew_plate_frequencies(p, cfg.count, path, vectors=False)
    if cfg.count is None:
        result.head(DEFAULT_MODES)
    if reference is not None:
        result.with_reference(reference(len(result.frequencies)))
    return _frequency_output(result)


def cmd_bench(cfg: RunConfig) -> Output:
    report = analysis.bench_structured(cfg.sizes, cfg.trials, cfg.resolved_seed, cfg.ops, cfg.workers,
                                       cfg.resources)
    header = ["op", "symmetry", "n", "dense_mults", "factored_mults", "ratio", "discrepancy"]
    return Output(report.to_repr(), header, report.csv_rows(), "bench")


def cmd_error_profile(cfg: RunConfig) -> Output:
    report = analysis.profile_builtin(_grid(cfg), cfg.function, cfg.order, cfg.k_bound)
    header = ["node", "x", "approx", "exact", "error", "estimate"]
    return Output(report.to_repr(), header, report.csv_rows(), "truncation")


COMMANDS = {
    "weights": cmd_weights,
    "solve": cmd_solve,
    "bench": cmd_bench,
    "error-profile": cmd_error_profile,
}


def execute(cfg: RunConfig) -> str:
    """ Run one configured command and deliver its output (file or stdout). """
    cfg.validate()
    output = COMMANDS[cfg.command](cfg)
    if cfg.format == "json":
        definitions.validate(output.data, output.schema)
    text = output.render(cfg.format)
    if cfg.output:
        atomic_write(cfg.output, text)
    else:
        sys.stdout.write(text)
    return text


def cmd_schema(args: argparse.Namespace) -> int:
    if args.infer:
        schema = definitions.infer_schema(from_json(read_text(args.infer)))
    elif args.name:
        schema = definitions.get_schema(args.name)
    else:
        schema = definitions.SCHEMAS
    text = to_json(schema, pretty=True) + "\n"
    if args.output:
        atomic_write(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _as_dq_error(e: Exception) -> DQError:
    """ Errors outside the DQError hierarchy are reported as numeric failures. """
    if isinstance(e, DQError):
        return e
    return NumericFailureError(f"unexpected {type(e).__name__}: {e}")


def _run_case(index: int, case: Dict) -> int:
    try:
        execute(from_mapping(case))
        return EXIT_OK
    except Exception as e:
        error = _as_dq_error(e)
        LOGGER.error("case %d failed: %s", index, to_json(error.to_repr()))
        LOGGER.debug("case %d traceback", index, exc_info=True)
        return error.exit_code


def cmd_batch(args: argparse.Namespace) -> int:
    """ Run every case of a batch file concurrently, each to its own output file. """
    try:
        batch = from_json(read_text(args.file))
    except ValueError as e:
        raise InvalidArgumentError(f"batch file {args.file} is not valid json", str(e))
    definitions.validate(batch, "batch")
    cases = batch["cases"]
    workers = args.workers or batch.get("workers")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        codes = list(executor.map(_run_case, range(1, len(cases) + 1), cases))
    LOGGER.debug("batch: %d cases, %d failed", len(cases), sum(1 for c in codes if c != EXIT_OK))
    return max(codes)


def _int_list(text: str) -> List[int]:
    try:
        return parse_int_list(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def _float_list(text: str) -> List[float]:
    try:
        return parse_float_list(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}")


def _reference_arg(text: str):
    return "exact" if text == "exact" else _float_list(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="debug diagnostics on stderr")
    common.add_argument("--config", help="Json config file, overridden by flags")
    common.add_argument("--format", dest="format", choices=["csv", "json"], default=None)
    common.add_argument("--output", help="write to this file instead of stdout")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--grid", choices=[k.value for k in GridKind], default=None)
    grid.add_argument("--n", type=int, default=None)
    grid.add_argument("--nodes", type=_float_list, default=None, help="custom grid nodes, comma separated")

    parser = argparse.ArgumentParser(prog="centrodq", description="Differential quadrature with structured matrices")
    sub = parser.add_subparsers(dest="command")
    sub.required = True

    weights = sub.add_parser("weights", parents=[common, grid], help="dump a weighting coefficient matrix")
    weights.add_argument("--order", type=int, default=None)

    solve = sub.add_parser("solve", parents=[common, grid], help="solve a beam, plate or transport problem")
    solve.add_argument("problem", choices=PROBLEMS)
    solve.add_argument("--ny", type=int, default=None, help="grid points along y (defaults to --n)")
    solve.add_argument("--bc", choices=[s.value for s in problems.Support], default=None)
    solve.add_argument("--alpha", type=float, default=None)
    solve.add_argument("--beta", type=float, default=None)
    solve.add_argument("--theta", type=float, default=None, help="skew angle in degrees")
    solve.add_argument("--sink", type=float, default=None)
    solve.add_argument("--inlet", type=_float_list, default=None)
    solve.add_argument("--count", type=int, default=None)
    solve.add_argument("--path", choices=[p.value for p in problems.SolvePath], default=None)
    solve.add_argument("--reference", type=_reference_arg, default=None,
                       help="comma separated reference frequencies, or 'exact'")

    bench = sub.add_parser("bench", parents=[common], help="multiply counts, dense against factorized")
    bench.add_argument("--sizes", type=_int_list, default=None)
    bench.add_argument("--trials", type=int, default=None)
    bench.add_argument("--ops", type=lambda t: t.split(","), default=None)
    bench.add_argument("--workers", type=int, default=None)
    bench.add_argument("--seed", type=int, default=None)
    bench.add_argument("--resources", action="store_true", default=None, help="add cpu time and memory")

    profile = sub.add_parser("error-profile", parents=[common, grid], help="truncation error per node")
    profile.add_argument("--f", dest="function", default=None, help="exp, sin2pi, runge or monomial:p")
    profile.add_argument("--order", type=int, default=None)
    profile.add_argument("--k-bound", dest="k_bound", type=float, default=None)

    schema = sub.add_parser("schema", help="dump json schemas")
    schema.add_argument("name", nargs="?", choices=sorted(definitions.SCHEMAS))
    schema.add_argument("--infer", help="derive a schema from a json document")
    schema.add_argument("--output")
    schema.add_argument("-v", "--verbose", action="store_true")

    batch = sub.add_parser("batch", help="run the cases of a batch file")
    batch.add_argument("file")
    batch.add_argument("--workers", type=int, default=None)
    batch.add_argument("-v", "--verbose", action="store_true")
    return parser


def configure_logging(verbose: bool):
    logger = logging.getLogger("centrodq")
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger.handlers[:] = [handler]
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)
    logger.propagate = False


def main(argv: Sequence[str] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    configure_logging(args.verbose)
    try:
        if args.command == "schema":
            return cmd_schema(args)
        if args.command == "batch":
            return cmd_batch(args)
        cfg = load_config(args.config) if args.config else RunConfig()
        cfg = merge(cfg, vars(args))
        execute(cfg)
        return EXIT_OK
    except Exception as e:
        if args.verbose:
            LOGGER.exception("%s failed", args.command)
        error = _as_dq_error(e)
        sys.stderr.write(to_json(error.to_repr()) + "\n")
        return error.exit_code
