import io
import os
import sys
import shutil
import tempfile
import contextlib
from functools import wraps
from typing import Iterator, List, Tuple

import numpy as np

from centrodq.grid import Grid, make_chebyshev, make_uniform

__filepath__ = os.path.dirname(os.path.abspath(__file__))


def symmetric_grids(sizes) -> Iterator[Grid]:
    """ Uniform and Chebyshev grids for every size. """
    for n in sizes:
        yield make_uniform(n)
        yield make_chebyshev(n)


def relative_error(got, expected) -> float:
    got = np.asarray(got)
    expected = np.asarray(expected)
    return float(np.max(np.abs(got - expected)) / max(float(np.max(np.abs(expected))), 1e-300))


@contextlib.contextmanager
def captured_output() -> Iterator[Tuple[io.StringIO, io.StringIO]]:
    """ Swap sys.stdout / sys.stderr for string buffers. """
    out, err = io.StringIO(), io.StringIO()
    old_out, old_err = sys.stdout, sys.stderr
    sys.stdout, sys.stderr = out, err
    try:
        yield out, err
    finally:
        sys.stdout, sys.stderr = old_out, old_err


def with_tempdir(f):
    """ Pass a fresh temporary directory as last argument, removed afterwards. """

    @wraps(f)
    def wrapper(*args, **kwargs):
        path = tempfile.mkdtemp(prefix="centrodq-test-")
        try:
            return f(*args, path, **kwargs)
        finally:
            shutil.rmtree(path, ignore_errors=True)

    return wrapper


def reflection_pairs(n: int) -> List[Tuple[int, int]]:
    return [(i, n - 1 - i) for i in range(n)]
