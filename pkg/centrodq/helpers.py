import io
import os
import csv
import json
import logging
import tempfile
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from .errors import OutputError

LOGGER = logging.getLogger(__name__)

# environment
DQ_SEED = "DQ_SEED"


def to_plain(data: Any) -> Any:
    """ Convert numpy arrays, numpy scalars and complex numbers to Json friendly Python objects. """
    if isinstance(data, np.ndarray):
        return [to_plain(v) for v in data.tolist()] if np.iscomplexobj(data) else data.tolist()
    if isinstance(data, (complex, np.complexfloating)):
        return {"re": float(data.real), "im": float(data.imag)}
    if isinstance(data, np.floating):
        return float(data)
    if isinstance(data, np.integer):
        return int(data)
    if isinstance(data, dict):
        return {k: to_plain(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [to_plain(v) for v in data]
    return data


def to_json(data: Any, pretty: bool = False) -> str:
    """ Convert Python object to json text. """
    if pretty:
        return json.dumps(to_plain(data), indent=2, sort_keys=True)
    return json.dumps(to_plain(data), separators=(',', ':'), sort_keys=True)


def from_json(data: str or bytes) -> Dict or None:
    """ Convert json text (or bytes) to Python object. """
    if not data:
        return None
    if isinstance(data, bytes):
        data = data.decode('utf-8')
    return json.loads(data)


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """ Render rows as csv text with a header line. """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _process_umask() -> int:
    mask = os.umask(0)
    os.umask(mask)
    return mask


# read once, os.umask cannot be queried without setting it
_UMASK = _process_umask()


def atomic_write(path: str, text: str):
    """ Write a text file by writing a temporary sibling then renaming it over the target. """
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp_path = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    except OSError as e:
        raise OutputError(f"cannot write {path}", str(e))

    try:
        with os.fdopen(fd, 'w', encoding='utf-8') as f:
            f.write(text)
        os.chmod(tmp_path, 0o666 & ~_UMASK)
        os.replace(tmp_path, path)
    except OSError as e:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise OutputError(f"cannot write {path}", str(e))
    LOGGER.debug("wrote %d bytes to %s", len(text), path)


def read_text(path: str) -> str:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return f.read()
    except OSError as e:
        raise OutputError(f"cannot read {path}", str(e))


def env_seed() -> Optional[int]:
    """ Read the seed fallback from the environment, None when unset or not an integer. """
    raw = os.environ.get(DQ_SEED)
    if raw is None or raw.strip() == "":
        return None
    try:
        return int(raw)
    except ValueError:
        LOGGER.warning("ignoring %s=%r, not an integer", DQ_SEED, raw)
        return None


def parse_int_list(text: str) -> List[int]:
    """ Parse "16,32,64" into [16, 32, 64]. """
    return [int(p) for p in text.split(',') if p.strip()]


def parse_float_list(text: str) -> List[float]:
    return [float(p) for p in text.split(',') if p.strip()]
