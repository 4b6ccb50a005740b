"""Block entropy of DNA sequences from L-mer frequencies.

Blocks are packed into integers two bits per base (A=0, T=1, G=2, C=3, most
significant base first), so counting is a ``bincount`` over block codes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .seqcore import DnaInfoError, DnaSequence, decode, encode

DEFAULT_L_RANGE = range(2, 10)
# dense counting up to 4**11 slots; sparse (np.unique) beyond
_DENSE_MAX_L = 11
# int64 holds 31 two-bit digits
MAX_L = 31


class CountMode(str, enum.Enum):
    NON_OVERLAPPING = "non_overlapping"
    SLIDING = "sliding"

    @classmethod
    def parse(cls, value) -> CountMode:
        if isinstance(value, cls):
            return value
        aliases = {"blocks": cls.NON_OVERLAPPING, "non-overlapping": cls.NON_OVERLAPPING}
        return aliases.get(value) or cls(value)


class EntropyError(DnaInfoError, ValueError):
    pass


def block_codes(seq: DnaSequence, L: int, mode=CountMode.NON_OVERLAPPING) -> np.ndarray:
    """Integer code of every counted L-block, in reading order."""
    mode = CountMode.parse(mode)
    n = len(seq)
    if L < 1:
        raise EntropyError(f"block length must be >= 1, got {L}")
    if L > MAX_L:
        raise EntropyError(f"block length {L} exceeds supported maximum {MAX_L}")
    if L > n:
        raise EntropyError(f"block longer than sequence (L={L}, N={n})")
    codes = seq.codes.astype(np.int64)
    if mode is CountMode.NON_OVERLAPPING:
        nblocks = n // L
        weights = 4 ** np.arange(L - 1, -1, -1, dtype=np.int64)
        return codes[: nblocks * L].reshape(nblocks, L) @ weights
    out = codes[: n - L + 1].copy()
    for j in range(1, L):
        out <<= 2
        out += codes[j : n - L + 1 + j]
    return out


def encode_block(block: str) -> int:
    value = 0
    for c in encode(block):
        value = (value << 2) | int(c)
    return value


def decode_block(code: int, L: int) -> str:
    digits = [(code >> (2 * (L - 1 - j))) & 3 for j in range(L)]
    return decode(np.array(digits, dtype=np.uint8))


@dataclass(frozen=True, eq=False)
class BlockDistribution:
    """Observed L-block counts plus the smoothing constant ``beta``.

    Only observed blocks are stored (``codes`` sorted ascending, ``freqs``
    aligned with it); unseen blocks have count zero.
    """

    L: int
    codes: np.ndarray
    freqs: np.ndarray
    total_blocks: int
    beta: float = 0.0
    mode: CountMode = CountMode.NON_OVERLAPPING

    @property
    def d(self) -> int:
        return 4**self.L

    @property
    def counts(self) -> dict[str, int]:
        return {decode_block(int(c), self.L): int(f) for c, f in zip(self.codes, self.freqs)}

    def count(self, block: str) -> int:
        code = encode_block(block)
        i = int(np.searchsorted(self.codes, code))
        if i < self.codes.size and self.codes[i] == code:
            return int(self.freqs[i])
        return 0

    def _denominator(self) -> float:
        if self.total_blocks == 0:
            raise EntropyError("distribution has no blocks")
        return self.total_blocks + self.beta * self.d

    def probabilities(self) -> np.ndarray:
        """Estimated probabilities of the observed blocks, aligned with ``codes``."""
        return (self.freqs + self.beta) / self._denominator()

    def unseen_probability(self) -> float:
        """Estimated probability of any single unobserved block."""
        return self.beta / self._denominator()


def count_blocks(seq: DnaSequence, L: int, mode=CountMode.NON_OVERLAPPING,
                 beta: float = 0.0) -> BlockDistribution:
    if beta < 0:
        raise EntropyError(f"beta must be >= 0, got {beta}")
    mode = CountMode.parse(mode)
    codes = block_codes(seq, L, mode)
    if L <= _DENSE_MAX_L:
        dense = np.bincount(codes, minlength=4**L)
        observed = np.flatnonzero(dense)
        freqs = dense[observed]
    else:
        observed, freqs = np.unique(codes, return_counts=True)
    return BlockDistribution(L, observed.astype(np.int64), freqs.astype(np.int64),
                             int(codes.size), float(beta), mode)


def estimate_probability(dist: BlockDistribution, block: str) -> float:
    """Smoothed frequency estimate ``(n(g) + beta) / (n + beta * 4**L)``."""
    if len(block) != dist.L:
        raise EntropyError(f"block {block!r} does not have length L={dist.L}")
    return (dist.count(block) + dist.beta) / dist._denominator()


def block_entropy(dist: BlockDistribution) -> float:
    """Shannon entropy in bits over all 4**L blocks (0 log 0 = 0)."""
    p = dist.probabilities()
    h = -float(np.sum(p * np.log2(p)))
    unseen = dist.d - dist.codes.size
    if dist.beta > 0 and unseen:
        p0 = dist.unseen_probability()
        h -= unseen * p0 * math.log2(p0)
    return h if h > 0 else 0.0


@dataclass(frozen=True)
class ProfileEntry:
    L: int
    block_entropy: float
    per_base: float


@dataclass(frozen=True)
class EntropyProfile:
    sequence_id: str
    length: int
    entries: tuple[ProfileEntry, ...]
    mode: CountMode = CountMode.NON_OVERLAPPING
    beta: float = 0.0
    log_base: int = 2

    @property
    def L_values(self) -> list[int]:
        return [e.L for e in self.entries]

    def per_base(self, L: int) -> float:
        for e in self.entries:
            if e.L == L:
                return e.per_base
        raise KeyError(L)


def entropy_profile(seq: DnaSequence, L_range: Iterable[int] = DEFAULT_L_RANGE,
                    mode=CountMode.NON_OVERLAPPING, beta: float = 0.0) -> EntropyProfile:
    mode = CountMode.parse(mode)
    entries = []
    for L in sorted(set(L_range)):
        H = block_entropy(count_blocks(seq, L, mode, beta))
        entries.append(ProfileEntry(L, H, H / L))
    return EntropyProfile(seq.id, len(seq), tuple(entries), mode, float(beta))
