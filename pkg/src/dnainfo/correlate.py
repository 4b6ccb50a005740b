"""Numeric substitution of bases and the biased discrete autocorrelation."""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .seqcore import ALPHABET, DnaInfoError, DnaSequence

# complementary bases get values of equal magnitude and opposite sign
DEFAULT_MAPPING: Mapping[str, float] = MappingProxyType({"A": -0.5, "T": 0.5, "G": -1.5, "C": 1.5})
DEFAULT_MAX_LAG = 10


class CorrelationError(DnaInfoError, ValueError):
    pass


@dataclass(frozen=True, eq=False)
class NumericSignal:
    values: np.ndarray
    source_id: str = ""
    mapping: Mapping[str, float] = field(default=DEFAULT_MAPPING)
    adjustment: str = "none"
    original_length: int | None = None

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.original_length is None:
            object.__setattr__(self, "original_length", int(values.size))

    def __len__(self) -> int:
        return int(self.values.size)


def substitute(seq: DnaSequence, mapping: Mapping[str, float] | None = None) -> NumericSignal:
    mapping = DEFAULT_MAPPING if mapping is None else mapping
    missing = set(ALPHABET) - set(mapping)
    if missing:
        raise CorrelationError(f"mapping lacks values for {sorted(missing)}")
    table = np.array([mapping[b] for b in ALPHABET], dtype=np.float64)
    return NumericSignal(table[seq.codes], seq.id, MappingProxyType(dict(mapping)))


@dataclass(frozen=True, eq=False)
class AutocorrSeries:
    lags: np.ndarray
    values: np.ndarray
    n: int
    max_lag: int
    source_id: str = ""

    def at(self, lag: int) -> float:
        if abs(lag) > self.max_lag:
            raise KeyError(lag)
        return float(self.values[lag + self.max_lag])

    def rows(self):
        return [(int(k), float(v)) for k, v in zip(self.lags, self.values)]


def autocorrelation(signal, max_lag: int = DEFAULT_MAX_LAG, center: bool = False) -> AutocorrSeries:
    """``R(k) = (1/N) * sum_{n<N-k} x[n] x[n+k]`` for lags -max_lag..max_lag.

    The estimator is biased (every lag divides by the full length N) and the
    negative lags mirror the positive ones. With ``center`` the signal mean
    is removed first.
    """
    if isinstance(signal, NumericSignal):
        x, source = signal.values, signal.source_id
    else:
        x, source = np.asarray(signal, dtype=np.float64).reshape(-1), ""
    n = x.size
    if max_lag < 0:
        raise CorrelationError(f"max_lag must be >= 0, got {max_lag}")
    if max_lag >= n:
        raise CorrelationError(f"max_lag {max_lag} must be smaller than the signal length {n}")
    if center:
        x = x - x.mean()
    half = np.array([np.dot(x[: n - k], x[k:]) for k in range(max_lag + 1)]) / n
    values = np.concatenate([half[:0:-1], half])
    return AutocorrSeries(np.arange(-max_lag, max_lag + 1), values, n, max_lag, source)
