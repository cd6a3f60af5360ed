"""Loading delimited numeric files and preparing tail samples for the estimators."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

import numpy as np

from .samples import SortedSample

_DELIMITERS = (",", "\t", ";", " ")


class Transform(str, Enum):
    NONE = "none"
    ABS = "abs"
    NEGATE = "negate"


class Tail(str, Enum):
    UPPER = "upper"
    LOWER = "lower"


@dataclass(frozen=True)
class Dataset:
    raw: np.ndarray
    name: str
    transform: Transform = Transform.NONE

    def __post_init__(self):
        raw = np.asarray(self.raw, dtype=float)
        if raw.ndim != 1 or raw.size == 0:
            raise ValueError("dataset must be a nonempty 1-d array")
        if not np.all(np.isfinite(raw)):
            raise ValueError("dataset contains non-finite entries")
        object.__setattr__(self, "raw", raw)


def _detect_delimiter(line: str) -> str | None:
    for d in _DELIMITERS:
        if d in line and len([f for f in line.split(d) if f.strip()]) > 1:
            return d
    return None


def _split(line: str, delimiter: str | None) -> list[str]:
    if delimiter is None:
        return [line]
    if delimiter == " ":
        return line.split()
    return [f.strip() for f in line.split(delimiter)]


def load_numeric(path, column: str | int | None = None, delimiter: str | None = None) -> Dataset:
    """Parse one numeric column from a delimited text file.

    The delimiter is auto-detected among comma, tab, semicolon, and runs of
    spaces unless given.  Leading rows that fail numeric parsing are treated as
    headers and skipped (a header row may also name the column); once numeric
    data has started, any unparseable row is an error reported with its line
    number.
    """
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    values: list[float] = []
    col_index: int | None = column if isinstance(column, int) else None
    started = False
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if delimiter is None:
            delimiter = _detect_delimiter(line) or ""
        fields = _split(line, delimiter or None)
        if isinstance(column, str) and col_index is None:
            if column in [f.strip() for f in fields]:
                col_index = [f.strip() for f in fields].index(column)
                continue
        idx = col_index if col_index is not None else 0
        if idx >= len(fields):
            raise ValueError(f"{path.name} line {lineno}: expected at least {idx + 1} fields")
        try:
            value = float(fields[idx])
        except ValueError:
            if started:
                raise ValueError(
                    f"{path.name} line {lineno}: cannot parse {fields[idx]!r} as a number"
                ) from None
            continue  # header row
        started = True
        values.append(value)
    if isinstance(column, str) and col_index is None:
        raise ValueError(f"{path.name}: column {column!r} not found in any header row")
    if not values:
        raise ValueError(f"{path.name}: no numeric data found")
    return Dataset(np.asarray(values), name=path.stem, transform=Transform.NONE)


def with_transform(ds: Dataset, transform: Transform) -> Dataset:
    """Dataset with ABS or NEGATE applied to the stored values."""
    if transform is Transform.NONE:
        return replace(ds, transform=Transform.NONE)
    if transform is Transform.ABS:
        return Dataset(np.abs(ds.raw), ds.name, Transform.ABS)
    return Dataset(-ds.raw, ds.name, Transform.NEGATE)


def prepare_tail_sample(ds: Dataset, tail: Tail) -> SortedSample:
    """Descending sample of the requested tail.

    UPPER keeps the values as stored; LOWER negates them first so that the
    lower tail of the original data becomes an upper tail.  The applied
    transform chain is recorded in the sample provenance.
    """
    values = ds.raw if tail is Tail.UPPER else -ds.raw
    source = f"{ds.name} [transform={ds.transform.value}, tail={tail.value}]"
    return SortedSample.from_unsorted(values, source=source)


def data_dir() -> Path:
    """Directory searched for bundled datasets; EXGPD_DATA_DIR overrides."""
    override = os.environ.get("EXGPD_DATA_DIR")
    if override:
        return Path(override)
    return Path(__file__).parent / "data"


def _load_bundled(stem: str, n_expected: int) -> Dataset:
    path = data_dir() / f"{stem}.txt"
    if not path.exists():
        raise FileNotFoundError(
            f"{path} is not present. The {stem} dataset is publicly distributed with the "
            "R packages fExtremes/evir and cannot be redistributed here; save it as a "
            f"single-column text file at {path} (or under EXGPD_DATA_DIR) to enable the "
            f"real-data analyses. Expected n={n_expected}."
        )
    ds = load_numeric(path)
    return Dataset(ds.raw, name=stem, transform=Transform.NONE)


def load_danish() -> Dataset:
    """Danish fire losses (2,167 values, millions of 1985 DKK), if bundled."""
    return _load_bundled("danish", 2167)


def load_bmw() -> Dataset:
    """BMW daily stock log-returns (6,146 values, 1973-1996), if bundled."""
    return _load_bundled("bmw", 6146)
