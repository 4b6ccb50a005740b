"""Finite-length entropy correction against ensembles of uniform random sequences.

A sequence of length N cannot show more than ``log2(N / L)`` bits of L-block
entropy, so raw per-base entropies fall with L for purely finite-size
reasons. Each raw value is rescaled by ``delta = 2 / mean_random_h``, where
``mean_random_h`` is the per-base entropy of random sequences of the same
length averaged over the ensemble.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .entropy import DEFAULT_L_RANGE, CountMode, EntropyProfile, entropy_profile
from .seqcore import DnaInfoError, DnaSequence

DEFAULT_ENSEMBLE_SIZE = 30
DEFAULT_SEED = 20090213
RNG_ALGORITHM = "numpy PCG64, one SeedSequence.spawn child per ensemble member"
MAX_ENTROPY_PER_BASE = 2.0


class BenchmarkError(DnaInfoError, ValueError):
    pass


@dataclass(frozen=True)
class EnsembleConfig:
    length: int
    L_range: tuple[int, ...] = tuple(DEFAULT_L_RANGE)
    ensemble_size: int = DEFAULT_ENSEMBLE_SIZE
    seed: int = DEFAULT_SEED
    mode: CountMode = CountMode.NON_OVERLAPPING
    beta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "L_range", tuple(sorted(set(self.L_range))))
        object.__setattr__(self, "mode", CountMode.parse(self.mode))
        if self.ensemble_size < 1:
            raise BenchmarkError(f"ensemble_size must be >= 1, got {self.ensemble_size}")
        if self.length < 0:
            raise BenchmarkError(f"length must be >= 0, got {self.length}")
        if not self.L_range:
            raise BenchmarkError("empty L range")
        if self.length < max(self.L_range):
            raise BenchmarkError(
                f"length {self.length} is shorter than the largest block length {max(self.L_range)}"
            )
        if not 0 <= self.seed < 2**64:
            raise BenchmarkError("seed must be a 64-bit unsigned integer")


def generate_random_sequence(length: int, rng: np.random.Generator, id: str = "random") -> DnaSequence:
    """Draw ``length`` i.i.d. uniform bases from ``rng``."""
    if length < 0:
        raise BenchmarkError(f"length must be >= 0, got {length}")
    return DnaSequence(rng.integers(0, 4, size=length, dtype=np.uint8), id)


def member_rngs(seed: int, count: int) -> list[np.random.Generator]:
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.PCG64(child)) for child in children]


def ensemble_members(config: EnsembleConfig) -> list[DnaSequence]:
    """The random sequences a :func:`correction_table` call averages over."""
    rngs = member_rngs(config.seed, config.ensemble_size)
    return [generate_random_sequence(config.length, rng, f"random_{i}") for i, rng in enumerate(rngs)]


@dataclass(frozen=True)
class CorrectionEntry:
    L: int
    mean_random_h: float
    delta: float


@dataclass(frozen=True)
class CorrectionTable:
    length: int
    entries: tuple[CorrectionEntry, ...]
    ensemble_size: int
    seed: int | None = None
    rng_algorithm: str = RNG_ALGORITHM

    def delta(self, L: int) -> float:
        for e in self.entries:
            if e.L == L:
                return e.delta
        raise KeyError(L)

    @property
    def L_values(self) -> list[int]:
        return [e.L for e in self.entries]


def _table_from_profiles(profiles: Sequence[EntropyProfile], length: int,
                         seed: int | None) -> CorrectionTable:
    L_values = profiles[0].L_values
    # members are reduced in index order so the mean does not depend on scheduling
    per_base = np.array([[p.per_base(L) for L in L_values] for p in profiles])
    means = per_base.mean(axis=0)
    entries = []
    for L, mean in zip(L_values, means):
        mean = float(mean)
        if mean <= 0:
            raise BenchmarkError(f"degenerate ensemble: mean random entropy is 0 at L={L}")
        entries.append(CorrectionEntry(L, mean, MAX_ENTROPY_PER_BASE / mean))
    return CorrectionTable(length, tuple(entries), len(profiles), seed)


def correction_table_from_sequences(sequences: Sequence[DnaSequence], L_range: Iterable[int],
                                    mode=CountMode.NON_OVERLAPPING, beta: float = 0.0,
                                    seed: int | None = None) -> CorrectionTable:
    """Build a correction table from an explicit ensemble."""
    if not sequences:
        raise BenchmarkError("ensemble is empty")
    lengths = {len(s) for s in sequences}
    if len(lengths) != 1:
        raise BenchmarkError(f"ensemble members differ in length: {sorted(lengths)}")
    L_range = tuple(L_range)
    profiles = [entropy_profile(s, L_range, mode, beta) for s in sequences]
    return _table_from_profiles(profiles, lengths.pop(), seed)


def correction_table(config: EnsembleConfig) -> CorrectionTable:
    return correction_table_from_sequences(
        ensemble_members(config), config.L_range, config.mode, config.beta, config.seed
    )


@dataclass(frozen=True)
class CorrectedEntry:
    L: int
    h_raw: float
    delta: float
    h_corrected: float


@dataclass(frozen=True)
class CorrectedProfile:
    sequence_id: str
    length: int
    entries: tuple[CorrectedEntry, ...]


def corrected_profile(profile: EntropyProfile, table: CorrectionTable) -> CorrectedProfile:
    """Multiply each raw per-base entropy by the matching correction factor.

    Values above 2 bits/base are kept as they are.
    """
    prof_L, table_L = set(profile.L_values), set(table.L_values)
    if prof_L != table_L:
        missing = sorted(prof_L ^ table_L)
        raise BenchmarkError(f"profile and correction table L values differ; missing L: {missing}")
    if profile.length != table.length:
        raise BenchmarkError(
            f"correction table was built for length {table.length}, "
            f"sequence {profile.sequence_id!r} has length {profile.length}"
        )
    entries = []
    for e in profile.entries:
        delta = table.delta(e.L)
        entries.append(CorrectedEntry(e.L, e.per_base, delta, e.per_base * delta))
    return CorrectedProfile(profile.sequence_id, profile.length, tuple(entries))


def benchmark_sequence(seq: DnaSequence, L_range: Iterable[int] = DEFAULT_L_RANGE,
                       ensemble_size: int = DEFAULT_ENSEMBLE_SIZE, seed: int = DEFAULT_SEED,
                       mode=CountMode.NON_OVERLAPPING, beta: float = 0.0):
    """Raw profile, length-matched correction table and corrected profile for one sequence."""
    L_range = tuple(L_range)
    profile = entropy_profile(seq, L_range, mode, beta)
    config = EnsembleConfig(len(seq), L_range, ensemble_size, seed, mode, beta)
    table = correction_table(config)
    return profile, table, corrected_profile(profile, table)
