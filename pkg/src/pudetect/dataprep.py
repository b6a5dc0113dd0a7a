"""Loading and cleaning of headerless flow-feature CSV files.

The pipeline turns raw text cells into a signed 64-bit integer matrix:
label derivation, missing-cell marking, categorical hashing, extreme-value
replacement and numeric coercion, in that order.
"""

from __future__ import annotations

import hashlib
import io
import os
import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

FNV_OFFSET_BASIS = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
HASH_MASK = 0x7FFF_FFFF_FFFF_FFFF

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

_MASK64 = 0xFFFF_FFFF_FFFF_FFFF
# ASCII-only numeric literal; anything else is categorical text.
_NUMERIC_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?\Z")
_INT_RE = re.compile(r"[+-]?\d+\Z")
# Decimal literals whose magnitude exceeds 10**_MAX_EXPONENT are hashed as text.
_MAX_EXPONENT = 4000


class DataFormatError(ValueError):
    """Raised when an input file is not a rectangular headerless CSV."""


class _Missing:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "MISSING"

    def __reduce__(self):
        return (_Missing, ())


MISSING = _Missing()
"""Marker substituted for empty cells."""


@dataclass(frozen=True)
class RawTable:
    """Row-major grid of text cells. Cells may be ``MISSING`` after
    :func:`replace_missing`."""

    cells: tuple[tuple, ...]

    def __post_init__(self) -> None:
        if not self.cells:
            raise DataFormatError("table has zero rows")
        width = len(self.cells[0])
        for i, row in enumerate(self.cells):
            if len(row) != width:
                raise DataFormatError(
                    f"row {i + 1} has {len(row)} columns, expected {width}"
                )

    @property
    def n_rows(self) -> int:
        return len(self.cells)

    @property
    def n_cols(self) -> int:
        return len(self.cells[0])

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence]) -> "RawTable":
        return cls(tuple(tuple(r) for r in rows))

    def column(self, j: int) -> list:
        return [row[j] for row in self.cells]


@dataclass(frozen=True)
class PreprocessSpec:
    label_column: int | None = None
    positive_label_text: str = "Benign"
    extreme_threshold: int = 10**15
    fill_value: int = 0
    hash_mask: int = field(default=HASH_MASK)

    def __post_init__(self) -> None:
        if not 0 < self.extreme_threshold <= INT64_MAX:
            raise ValueError("extreme_threshold must be in (0, 2**63 - 1]")
        if not INT64_MIN <= self.fill_value <= INT64_MAX:
            raise ValueError("fill_value must fit in a signed 64-bit integer")
        if not 0 <= self.hash_mask <= HASH_MASK:
            raise ValueError("hash_mask must keep hashes non-negative in int64")


@dataclass(frozen=True)
class PreparedDataset:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        if self.x.dtype != np.int64 or self.x.ndim != 2:
            raise ValueError("x must be a 2-D int64 matrix")
        if self.y.shape != (self.x.shape[0],):
            raise ValueError("y must have one entry per row of x")
        if not np.isin(self.y, (0, 1)).all():
            raise ValueError("y must be binary")

    @property
    def feature_count(self) -> int:
        return self.x.shape[1]

    @property
    def n_rows(self) -> int:
        return self.x.shape[0]

    def subset(self, idx: np.ndarray) -> "PreparedDataset":
        return PreparedDataset(self.x[idx], self.y[idx])

    def to_csv(self) -> str:
        """Render as headerless CSV, features first and ``y`` last."""
        buf = io.StringIO()
        for xrow, label in zip(self.x.tolist(), self.y.tolist()):
            buf.write(",".join(map(str, xrow)))
            buf.write(f",{label}\n")
        return buf.getvalue()

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.x, dtype="<i8").tobytes())
        h.update(np.ascontiguousarray(self.y, dtype="<i8").tobytes())
        return h.hexdigest()


def load_raw_csv(path: str | os.PathLike) -> RawTable:
    """Read a headerless comma-separated file; every line is a data row."""
    with open(path, "rb") as fh:
        data = fh.read()
    return parse_raw_csv(data.decode("utf-8"))


def parse_raw_csv(text: str) -> RawTable:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise DataFormatError("table has zero rows")
    rows = []
    width = None
    for lineno, line in enumerate(lines, start=1):
        if line.endswith("\r"):
            line = line[:-1]
        row = tuple(line.split(","))
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DataFormatError(
                f"line {lineno}: expected {width} fields, found {len(row)}"
            )
        rows.append(row)
    if width < 2:
        raise DataFormatError("need at least one feature column and a label column")
    return RawTable(tuple(rows))


def _label_index(table: RawTable, spec: PreprocessSpec) -> int:
    j = table.n_cols - 1 if spec.label_column is None else spec.label_column
    if not 0 <= j < table.n_cols:
        raise ValueError(f"label column {j} out of range for {table.n_cols} columns")
    return j


def derive_labels(table: RawTable, spec: PreprocessSpec) -> tuple[RawTable, np.ndarray]:
    j = _label_index(table, spec)
    y = np.fromiter(
        (row[j] == spec.positive_label_text for row in table.cells),
        dtype=np.int64,
        count=table.n_rows,
    )
    rest = RawTable(tuple(row[:j] + row[j + 1:] for row in table.cells))
    return rest, y


def replace_missing(table: RawTable) -> RawTable:
    return RawTable(
        tuple(tuple(MISSING if c == "" else c for c in row) for row in table.cells)
    )


def hash_categorical(cell: str, mask: int = HASH_MASK) -> int:
    """FNV-1a 64-bit over the UTF-8 bytes of ``cell``, masked non-negative."""
    h = FNV_OFFSET_BASIS
    for byte in cell.encode("utf-8", "surrogatepass"):
        h ^= byte
        h = (h * FNV_PRIME) & _MASK64
    return h & mask


def clamp_extremes(value: int, spec: PreprocessSpec) -> int:
    if abs(value) > spec.extreme_threshold:
        return hash_categorical(str(value), spec.hash_mask)
    return value


def _parse_number(cell: str) -> int | None:
    if not _NUMERIC_RE.match(cell):
        return None
    if _INT_RE.match(cell):
        return int(cell)
    try:
        d = Decimal(cell)
    except InvalidOperation:  # pragma: no cover - regex already filters
        return None
    if d.adjusted() > _MAX_EXPONENT:
        return None
    return int(d)  # truncates toward zero


def coerce_cell(cell, spec: PreprocessSpec) -> int:
    if cell is MISSING:
        return spec.fill_value
    number = _parse_number(cell)
    if number is None:
        return hash_categorical(cell, spec.hash_mask)
    return clamp_extremes(number, spec)


def coerce_numeric(table: RawTable, spec: PreprocessSpec) -> np.ndarray:
    cache: dict = {}
    out = np.empty((table.n_rows, table.n_cols), dtype=np.int64)
    for i, row in enumerate(table.cells):
        vals = []
        for cell in row:
            v = cache.get(cell)
            if v is None:
                v = cache[cell] = coerce_cell(cell, spec)
            vals.append(v)
        out[i] = vals
    return out


def prepare_table(table: RawTable, spec: PreprocessSpec | None = None) -> PreparedDataset:
    spec = spec or PreprocessSpec()
    features, y = derive_labels(table, spec)
    features = replace_missing(features)
    return PreparedDataset(coerce_numeric(features, spec), y)


def prepare(path: str | os.PathLike, spec: PreprocessSpec | None = None) -> PreparedDataset:
    return prepare_table(load_raw_csv(path), spec)


def load_prepared_csv(path: str | os.PathLike) -> PreparedDataset:
    """Read a file written by :meth:`PreparedDataset.to_csv`."""
    table = load_raw_csv(path)
    try:
        m = np.array([[int(c) for c in row] for row in table.cells], dtype=np.int64)
    except (ValueError, OverflowError) as exc:
        raise DataFormatError(f"{path}: not a prepared integer CSV ({exc})") from None
    return PreparedDataset(np.ascontiguousarray(m[:, :-1]), m[:, -1].copy())


def find_first_csv(directory: str | os.PathLike) -> Path | None:
    """Return the byte-wise smallest ``*.csv`` regular file in ``directory``."""
    directory = Path(directory)
    candidates = [
        entry.name
        for entry in os.scandir(directory)
        if entry.is_file() and entry.name.lower().endswith(".csv")
    ]
    if not candidates:
        return None
    return directory / min(candidates, key=os.fsencode)
