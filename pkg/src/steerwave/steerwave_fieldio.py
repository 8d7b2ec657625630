"""
Steerwave Field Files - Bit-exact storage of fields as a JSON header plus a raw payload.

A field named ``wavelet`` is stored as two files::

    wavelet.json   {"version": 1, "dtype": "f64", "order": "C", "shape": [64, 64],
                    "domain": "spatial", "grid": {"dim": 2, "N": 64, "dx": 1.0}}
    wavelet.bin    little-endian samples in row-major order
                   (complex values interleaved re, im)
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Type, Union

import numpy as np

from .steerwave_errors import (
    FieldDtypeError,
    FieldHeaderError,
    FieldIOError,
    FieldShapeError,
    FieldTruncatedError,
    GridError,
    NumericError,
)
from .steerwave_grid import Domain, GridSpec, ScalarField, SpectrumField

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

Field = Union[ScalarField, SpectrumField]
PathLike = Union[str, Path]

_DTYPES = {
    "f64": (np.dtype("<f8"), ScalarField),
    "c128": (np.dtype("<c16"), SpectrumField),
}
_REQUIRED_KEYS = ("version", "dtype", "order", "shape", "domain", "grid")


def field_paths(path: PathLike):
    """
    Resolve a field path to its (header, payload) pair.

    ``out/f``, ``out/f.json`` and ``out/f.bin`` all name the same field.
    """
    path = Path(path)
    if path.suffix in (".json", ".bin"):
        path = path.with_suffix("")
    return path.with_name(path.name + ".json"), path.with_name(path.name + ".bin")


def field_header(field: Field) -> Dict[str, Any]:
    """Build the JSON header that describes a field."""
    dtype = "c128" if isinstance(field, SpectrumField) else "f64"
    return {
        "version": FORMAT_VERSION,
        "dtype": dtype,
        "order": "C",
        "shape": list(field.grid.shape),
        "domain": field.domain.value,
        "grid": field.grid.to_dict(),
    }


def write_field(field: Field, path: PathLike) -> None:
    """
    Write a field as ``<path>.json`` plus ``<path>.bin``.

    Args:
        field: ScalarField or SpectrumField to store
        path: Base path (a .json or .bin suffix is accepted and ignored)
    """
    if not isinstance(field, (ScalarField, SpectrumField)):
        raise TypeError(f"Expected a ScalarField or SpectrumField, got {type(field).__name__}")
    header = field_header(field)
    wire_dtype = _DTYPES[header["dtype"]][0]
    header_path, payload_path = field_paths(path)
    try:
        header_path.write_text(json.dumps(header, sort_keys=True, indent=2) + "\n", encoding="utf-8")
        payload_path.write_bytes(field.values.astype(wire_dtype, copy=False).tobytes(order="C"))
    except OSError as exc:
        raise FieldIOError(f"Cannot write field {header_path.with_suffix('')}: {exc}") from exc
    logger.debug("Wrote %s field %s to %s", header["dtype"], header["shape"], payload_path)


def _parse_header(header_path: Path) -> Dict[str, Any]:
    try:
        text = header_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FieldIOError(f"Cannot read field header {header_path}: {exc}") from exc
    try:
        header = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FieldHeaderError(f"Field header {header_path} is not valid JSON: {exc}") from exc
    if not isinstance(header, dict):
        raise FieldHeaderError(f"Field header {header_path} must be a JSON object")

    missing = [key for key in _REQUIRED_KEYS if key not in header]
    if missing:
        raise FieldHeaderError(f"Field header {header_path} is missing {', '.join(missing)}")
    if header["version"] != FORMAT_VERSION:
        raise FieldHeaderError(f"Unsupported field format version {header['version']!r}")
    if header["dtype"] not in _DTYPES:
        raise FieldHeaderError(f"Unsupported field dtype {header['dtype']!r}")
    if header["order"] != "C":
        raise FieldHeaderError(f"Unsupported storage order {header['order']!r}")
    if header["domain"] not in [d.value for d in Domain]:
        raise FieldHeaderError(f"Unknown field domain {header['domain']!r}")
    if not isinstance(header["shape"], list) or not all(isinstance(n, int) for n in header["shape"]):
        raise FieldHeaderError(f"Field shape must be a list of integers, got {header['shape']!r}")
    return header


def read_field(path: PathLike, expect: Optional[Type[Field]] = None) -> Field:
    """
    Read a field written by write_field.

    Args:
        path: Base path (a .json or .bin suffix is accepted and ignored)
        expect: Optional field class the file must contain

    Returns:
        ScalarField for "f64" payloads, SpectrumField for "c128"

    Raises:
        FieldHeaderError: malformed or unsupported header
        FieldShapeError: shape disagrees with the grid or payload too long
        FieldDtypeError: stored kind differs from ``expect``
        FieldTruncatedError: payload shorter than declared
    """
    header_path, payload_path = field_paths(path)
    header = _parse_header(header_path)
    wire_dtype, field_cls = _DTYPES[header["dtype"]]
    if expect is not None and field_cls is not expect:
        raise FieldDtypeError(
            f"{header_path} holds {header['dtype']} data, expected a {expect.__name__}"
        )

    try:
        grid = GridSpec.from_dict(header["grid"])
    except (KeyError, TypeError, GridError) as exc:
        raise FieldHeaderError(f"Invalid grid in {header_path}: {exc}") from exc
    if tuple(header["shape"]) != grid.shape:
        raise FieldShapeError(f"Header shape {header['shape']} does not match grid shape {list(grid.shape)}")

    try:
        payload = payload_path.read_bytes()
    except OSError as exc:
        raise FieldIOError(f"Cannot read field payload {payload_path}: {exc}") from exc
    expected = grid.num_samples * wire_dtype.itemsize
    if len(payload) < expected:
        raise FieldTruncatedError(
            f"{payload_path} holds {len(payload)} bytes, header declares {expected}"
        )
    if len(payload) > expected:
        raise FieldShapeError(f"{payload_path} holds {len(payload)} bytes, header declares {expected}")

    values = np.frombuffer(payload, dtype=wire_dtype).reshape(grid.shape)
    try:
        field = field_cls(grid, values, Domain(header["domain"]))
    except NumericError as exc:
        raise FieldHeaderError(f"{payload_path} holds non-finite samples") from exc
    logger.debug("Read %s field %s from %s", header["dtype"], header["shape"], payload_path)
    return field
