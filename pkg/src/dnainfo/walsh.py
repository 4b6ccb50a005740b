"""Sequency-ordered fast Walsh-Hadamard transform and Kak's randomness coefficient.

``fwht_sequency([1, 2, 1, 1])`` gives ``[1.25, 0.25, -0.25, -0.25]``: the
forward transform is scaled by 1/N and rows are sorted by their number of
sign changes. The randomness coefficient of a sequence is the number of
distinct Walsh amplitudes divided by the transform length; a value of 1
means no amplitude repeats.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .correlate import NumericSignal, substitute
from .seqcore import DnaInfoError, DnaSequence

REL_TOL = 1e-9


class WalshError(DnaInfoError, ValueError):
    pass


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def _hadamard_natural(x: np.ndarray) -> np.ndarray:
    """Unnormalized butterfly, natural (Hadamard) row order."""
    a = np.array(x, dtype=np.float64)
    n = a.size
    h = 1
    while h < n:
        a = a.reshape(-1, 2, h)
        a = np.stack((a[:, 0] + a[:, 1], a[:, 0] - a[:, 1]), axis=1).reshape(-1)
        h *= 2
    return a


def sequency_permutation(n: int) -> np.ndarray:
    """Natural-order index of the Walsh function with ``s`` sign changes, for each s.

    That index is the bit reversal of the Gray code of ``s``.
    """
    if not is_power_of_two(n):
        raise WalshError(f"length {n} is not a power of two")
    bits = n.bit_length() - 1
    s = np.arange(n)
    gray = s ^ (s >> 1)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((gray >> b) & 1) << (bits - 1 - b)
    return rev


def walsh_transform(values, normalize: bool = True) -> np.ndarray:
    x = np.asarray(values, dtype=np.float64).reshape(-1)
    n = x.size
    if not is_power_of_two(n):
        raise WalshError(f"length {n} is not a power of two")
    out = _hadamard_natural(x)[sequency_permutation(n)]
    return out / n if normalize else out


@dataclass(frozen=True, eq=False)
class WalshSpectrum:
    coefficients: np.ndarray
    scaling: float

    def __len__(self) -> int:
        return int(self.coefficients.size)


def fwht_sequency(values) -> WalshSpectrum:
    coeffs = walsh_transform(values, normalize=True)
    coeffs.setflags(write=False)
    return WalshSpectrum(coeffs, 1.0 / coeffs.size)


def inverse_fwht_sequency(spectrum) -> np.ndarray:
    """Recover the input of :func:`fwht_sequency` (the Walsh matrix is its own inverse up to N)."""
    coeffs = spectrum.coefficients if isinstance(spectrum, WalshSpectrum) else spectrum
    return walsh_transform(coeffs, normalize=False)


def nearest_power_of_two(n: int) -> int:
    """Closest power of two to ``n``; ties go to the larger one."""
    if n < 1:
        raise WalshError(f"length must be >= 1, got {n}")
    lower = 1 << (n.bit_length() - 1)
    if lower == n:
        return n
    upper = lower * 2
    return upper if upper - n <= n - lower else lower


def adjust_to_power_of_two(signal: NumericSignal) -> NumericSignal:
    """Zero-pad or truncate the tail of ``signal`` to the nearest power of two."""
    n = len(signal)
    target = nearest_power_of_two(n)
    if target > n:
        values = np.concatenate([signal.values, np.zeros(target - n)])
        how = "padded"
    elif target < n:
        values = signal.values[:target]
        how = "truncated"
    else:
        values, how = signal.values, "none"
    return NumericSignal(values, signal.source_id, signal.mapping, how, n)


def count_independent(spectrum, rel_tol: float = REL_TOL) -> int:
    """Number of distinct amplitudes; ``x`` and ``-x`` count separately.

    Values closer than ``rel_tol`` times the largest magnitude are merged.
    """
    coeffs = spectrum.coefficients if isinstance(spectrum, WalshSpectrum) else spectrum
    values = np.sort(np.asarray(coeffs, dtype=np.float64).reshape(-1))
    if values.size == 0:
        return 0
    scale = float(np.max(np.abs(values)))
    tol = rel_tol * scale
    # consecutive sorted values start a new group when they differ by more than tol
    return 1 + int(np.count_nonzero(np.diff(values) > tol))


@dataclass(frozen=True)
class RandomnessReport:
    sequence_id: str
    original_length: int
    adjusted_length: int
    adjustment: str
    independent_count: int

    @property
    def r(self) -> float:
        return self.independent_count / self.adjusted_length

    @property
    def r_numerator(self) -> int:
        return self.independent_count

    @property
    def r_denominator(self) -> int:
        return self.adjusted_length


def randomness_coefficient(seq: DnaSequence, mapping: Mapping[str, float] | None = None) -> RandomnessReport:
    if len(seq) < 1:
        raise WalshError("randomness coefficient needs a non-empty sequence")
    adjusted = adjust_to_power_of_two(substitute(seq, mapping))
    count = count_independent(fwht_sequency(adjusted.values))
    return RandomnessReport(seq.id, len(seq), len(adjusted), adjusted.adjustment, count)


def sign_changes(row) -> int:
    row = np.asarray(row)
    return int(np.count_nonzero(np.sign(row[1:]) != np.sign(row[:-1])))


def walsh_matrix(n: int) -> np.ndarray:
    """Rows are the Walsh functions in sequency order (entries +1/-1)."""
    return np.stack([walsh_transform(e, normalize=False) for e in np.eye(n)], axis=1)

