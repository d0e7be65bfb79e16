"""
    Run configuration: defaults, then a Json config file, then command line flags.
"""
import logging
from dataclasses import dataclass, field, fields, replace
from typing import Any, Dict, List, Optional, Union

from . import definitions
from .errors import InvalidArgumentError
from .helpers import env_seed, from_json, read_text

LOGGER = logging.getLogger(__name__)

COMMANDS = ("weights", "solve", "bench", "error-profile")
PROBLEMS = ("beam", "plate", "skew-plate", "conv-diff")


@dataclass(frozen=True)
class RunConfig:
    """ Everything one run of a subcommand needs. """
    command: str = "weights"
    problem: Optional[str] = None
    grid: str = "uniform"
    n: int = 8
    ny: Optional[int] = None
    nodes: Optional[List[float]] = None
    order: int = 1
    alpha: float = 1.0
    beta: float = 1.0
    theta: float = 90.0
    bc: Optional[str] = None
    sink: float = 0.0
    inlet: Optional[List[float]] = None
    count: Optional[int] = None
    path: str = "auto"
    reference: Optional[Union[List[float], str]] = None
    function: str = "exp"
    k_bound: Optional[float] = None
    sizes: List[int] = field(default_factory=lambda: [16, 32, 64])
    trials: int = 1
    ops: List[str] = field(default_factory=lambda: ["det", "inv", "eig"])
    workers: Optional[int] = None
    resources: bool = False
    seed: Optional[int] = None
    format: str = "json"
    output: Optional[str] = None

    @staticmethod
    def keys() -> List[str]:
        return [f.name for f in fields(RunConfig)]

    def to_repr(self) -> Dict:
        return {k: getattr(self, k) for k in self.keys() if getattr(self, k) is not None}

    @property
    def resolved_seed(self) -> int:
        """ Explicit seed, else DQ_SEED, else 0. """
        if self.seed is not None:
            return self.seed
        seed = env_seed()
        return 0 if seed is None else seed

    @property
    def resolved_bc(self) -> str:
        if self.bc is not None:
            return self.bc
        return "clamped" if self.problem == "skew-plate" else "simply-supported"

    def validate(self) -> 'RunConfig':
        """ Range checks done before dispatch. """
        if self.command not in COMMANDS:
            raise InvalidArgumentError(f"unknown command {self.command!r}")
        if self.command == "solve" and self.problem not in PROBLEMS:
            raise InvalidArgumentError(f"solve needs a problem among {', '.join(PROBLEMS)}, got {self.problem!r}")
        if self.grid == "custom" and not self.nodes:
            raise InvalidArgumentError("a custom grid needs explicit nodes")
        if self.grid != "custom" and self.n < 2:
            raise InvalidArgumentError(f"a grid needs at least 2 nodes, got {self.n}")
        if self.order < 1:
            raise InvalidArgumentError(f"derivative order must be >= 1, got {self.order}")
        if self.format not in ("csv", "json"):
            raise InvalidArgumentError(f"unknown output format {self.format!r}")
        if self.path not in ("auto", "dense", "factorized"):
            raise InvalidArgumentError(f"unknown solve path {self.path!r}")
        if self.trials < 1:
            raise InvalidArgumentError(f"trials must be >= 1, got {self.trials}")
        if self.k_bound is not None and not self.k_bound > 0:
            raise InvalidArgumentError(f"derivative bound K must be > 0, got {self.k_bound}")
        return self


def from_mapping(data: Dict[str, Any], base: RunConfig = None) -> RunConfig:
    """ Overlay a validated mapping on a base configuration. """
    definitions.validate(data, "config")
    base = base or RunConfig()
    return replace(base, **data)


def load_config(path: str, base: RunConfig = None) -> RunConfig:
    try:
        data = from_json(read_text(path))
    except ValueError as e:
        raise InvalidArgumentError(f"config file {path} is not valid json", str(e))
    if data is None:
        data = {}
    LOGGER.debug("loaded %d settings from %s", len(data), path)
    return from_mapping(data, base)


def merge(base: RunConfig, overrides: Dict[str, Any]) -> RunConfig:
    """ Apply command line values; None means the flag was not given. """
    values = {k: v for k, v in overrides.items() if v is not None and k in RunConfig.keys()}
    return replace(base, **values)
