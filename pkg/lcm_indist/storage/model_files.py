"""
Model File Storage
Loads and saves model JSON files and writes simulated trajectories as CSV
"""
import json
import logging
from pathlib import Path
from typing import IO, Union

import pandas as pd
from pydantic import ValidationError

from ..core.graph_model import Model
from ..errors import ModelFileError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def load_model(path: PathLike) -> Model:
    """
    Read a model file: {"n", "edges": [[from, to], ...], "input", "output", "leaks"}.

    Only the schema is checked here; model invariants are left to validate().

    Raises:
        ModelFileError: the file is missing, is not JSON, or does not fit the schema
    """
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ModelFileError(f"cannot read {path}: {e.strerror or e}") from e
    except UnicodeDecodeError as e:
        raise ModelFileError(f"{path} is not UTF-8 text: byte {e.start} cannot be decoded") from e
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as e:
        raise ModelFileError(f"{path} is not valid JSON: {e.msg} (line {e.lineno})") from e
    try:
        model = Model.model_validate(data)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'model'}: {err['msg']}" for err in e.errors()
        )
        raise ModelFileError(f"{path} does not describe a model: {problems}") from e
    logger.debug("loaded %s from %s", model.describe(), path)
    return model


def model_to_json(model: Model) -> str:
    """Canonical text: sorted edges, ascending leaks, 2-space indent, trailing newline"""
    payload = {
        "n": model.n,
        "edges": [list(edge) for edge in model.edges],
        "input": model.input,
        "output": model.output,
        "leaks": list(model.leaks),
    }
    return json.dumps(payload, indent=2) + "\n"


def save_model(model: Model, path: PathLike) -> Path:
    path = Path(path)
    try:
        path.write_text(model_to_json(model), encoding="utf-8")
    except OSError as e:
        raise ModelFileError(f"cannot write {path}: {e.strerror or e}") from e
    return path


def write_trajectory_csv(trajectory, target: Union[PathLike, IO[str]]) -> None:
    """
    Columns t,y for an output trajectory, or t,x1..xn for full states,
    with 17 significant digits so the CSV reproduces the floats exactly.
    """
    frame = pd.DataFrame({"t": trajectory.times})
    values = trajectory.values
    if values.ndim == 1:
        frame["y"] = values
    else:
        for column in range(values.shape[1]):
            frame[f"x{column + 1}"] = values[:, column]
    try:
        frame.to_csv(target, index=False, float_format="%.17g", lineterminator="\n")
    except OSError as e:
        raise ModelFileError(f"cannot write trajectory: {e.strerror or e}") from e
