"""Matrix JSON schema and file loading with distinctly named failures.

Schema: {"dim": n, "dims": [d1, ...], "re": [[...]], "im": [[...]]} with
row-major n x n arrays of decimal numbers.  ``dims`` is optional and
defaults to the single factor [n].
"""

import json

import numpy as np

from .errors import SchemaError
from .linalg import as_hermitian, check_dims
from .states import DensityMatrix, density


def matrix_to_json(a, dims=None) -> dict:
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0]
    dims = list(dims) if dims is not None else [n]
    return {"dim": n, "dims": dims, "re": a.real.tolist(), "im": a.imag.tolist()}


def matrix_from_json(obj):
    """Parse the schema into (complex array, dims); raises SchemaError."""
    if not isinstance(obj, dict):
        raise SchemaError(f"expected a JSON object, got {type(obj).__name__}")
    for field in ("dim", "re", "im"):
        if field not in obj:
            raise SchemaError(f"missing field {field!r}")
    n = obj["dim"]
    if not isinstance(n, int) or n < 1:
        raise SchemaError(f"'dim' must be a positive integer, got {n!r}")
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"'re'/'im' must be numeric arrays: {exc}") from exc
    if re.shape != (n, n) or im.shape != (n, n):
        raise SchemaError(
            f"'re'/'im' must both be {n}x{n}, got {re.shape} and {im.shape}"
        )
    dims = obj.get("dims", [n])
    try:
        dims = check_dims(dims, n)
    except Exception as exc:
        raise SchemaError(str(exc)) from exc
    return re + 1j * im, dims


def save_matrix(path, a, dims=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_json(a, dims), fh)
        fh.write("\n")


def load_matrix(path):
    """Load a Hermitian matrix; returns (array, dims)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise SchemaError(f"{path}: cannot read: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON: {exc}") from exc
    a, dims = matrix_from_json(obj)
    return as_hermitian(a), dims


def load_density(path) -> DensityMatrix:
    a, dims = load_matrix(path)
    return density(a, dims)
