"""Descending-ordered sample container shared by the samplers, estimators, and plots."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SortedSample:
    """Numeric dataset ordered largest first, with free-text provenance."""

    values: np.ndarray
    source: str = ""

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("sample must be a nonempty 1-d array")
        if not np.all(np.isfinite(values)):
            raise ValueError("sample contains non-finite values")
        if np.any(np.diff(values) > 0.0):
            raise ValueError("sample values must be nonincreasing")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_unsorted(cls, values, source: str = "") -> "SortedSample":
        values = np.asarray(values, dtype=float)
        return cls(np.sort(values)[::-1], source)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def shifted(self, c: float) -> "SortedSample":
        return SortedSample(self.values + c, self.source)
