"""Core DNA sequence model: validated 2-bit base codes, regions, composition."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

ALPHABET = "ATGC"

# A=0, T=1, G=2, C=3: complementing a base flips the low bit.
_ENCODE = np.full(256, 255, dtype=np.uint8)
for _code, _base in enumerate(ALPHABET):
    _ENCODE[ord(_base)] = _code
    _ENCODE[ord(_base.lower())] = _code
_DECODE = np.frombuffer(ALPHABET.encode("ascii"), dtype=np.uint8)


class DnaInfoError(Exception):
    """Base class for all errors raised by this package."""


class SequenceError(DnaInfoError, ValueError):
    """A character outside {A, T, G, C} or an otherwise malformed sequence."""

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class RegionError(DnaInfoError, ValueError):
    pass


def encode(text: str) -> np.ndarray:
    """Convert base letters (any case) to a uint8 array of 2-bit codes.

    Raises SequenceError carrying the 1-based position of the first bad
    character.
    """
    try:
        raw = np.frombuffer(text.encode("ascii"), dtype=np.uint8)
    except UnicodeEncodeError:
        raw = None
    if raw is None:
        for i, ch in enumerate(text):
            if ch.upper() not in ALPHABET:
                raise SequenceError(f"invalid base {ch!r} at position {i + 1}", i + 1)
    codes = _ENCODE[raw]
    bad = np.flatnonzero(codes == 255)
    if bad.size:
        pos = int(bad[0])
        raise SequenceError(f"invalid base {text[pos]!r} at position {pos + 1}", pos + 1)
    return codes


def decode(codes: np.ndarray) -> str:
    return _DECODE[np.asarray(codes, dtype=np.uint8)].tobytes().decode("ascii")


@dataclass(frozen=True, eq=False)
class DnaSequence:
    """An immutable DNA sequence stored as one 2-bit code per base.

    Use :meth:`from_text` to build one from letters; ``str(seq)`` gives the
    canonical uppercase form back.
    """

    codes: np.ndarray
    id: str = ""

    def __post_init__(self):
        codes = np.array(self.codes, dtype=np.uint8).reshape(-1)
        if codes.size and codes.max() > 3:
            raise SequenceError("base codes must lie in 0..3")
        codes.setflags(write=False)
        object.__setattr__(self, "codes", codes)

    @classmethod
    def from_text(cls, text: str, id: str = "") -> DnaSequence:
        return cls(encode(text), id)

    @property
    def text(self) -> str:
        return decode(self.codes)

    def __len__(self) -> int:
        return int(self.codes.size)

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        preview = self.text if len(self) <= 20 else self.text[:17] + "..."
        return f"DnaSequence({preview!r}, id={self.id!r}, length={len(self)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, DnaSequence):
            return NotImplemented
        return self.id == other.id and np.array_equal(self.codes, other.codes)

    def __hash__(self) -> int:
        return hash((self.id, self.codes.tobytes()))

    def with_id(self, id: str) -> DnaSequence:
        return DnaSequence(self.codes, id)


class RegionKind(str, enum.Enum):
    EXON = "exon"
    INTRON = "intron"
    OTHER = "other"


class Orientation(str, enum.Enum):
    FORWARD = "forward"
    COMPLEMENT = "complement"


@dataclass(frozen=True)
class Region:
    """A 1-based, inclusive span of a genome."""

    id: str
    kind: RegionKind
    start: int
    end: int
    orientation: Orientation = Orientation.FORWARD

    def __post_init__(self):
        object.__setattr__(self, "kind", RegionKind(self.kind))
        object.__setattr__(self, "orientation", Orientation(self.orientation))
        if self.start < 1:
            raise RegionError(f"region {self.id!r}: start {self.start} must be >= 1")
        if self.start > self.end:
            raise RegionError(f"region {self.id!r}: start {self.start} > end {self.end}")

    def __len__(self) -> int:
        return self.end - self.start + 1


@dataclass(frozen=True)
class BaseComposition:
    p_A: float
    p_T: float
    p_G: float
    p_C: float

    def as_dict(self) -> dict[str, float]:
        return {"A": self.p_A, "T": self.p_T, "G": self.p_G, "C": self.p_C}


def composition(seq: DnaSequence) -> BaseComposition:
    n = len(seq)
    if n == 0:
        raise SequenceError("empty sequence")
    counts = np.bincount(seq.codes, minlength=4)
    return BaseComposition(*(float(c) / n for c in counts))


def reverse_complement(seq: DnaSequence) -> DnaSequence:
    return DnaSequence(seq.codes[::-1] ^ 1, seq.id)


def extract_region(genome: DnaSequence, region: Region) -> DnaSequence:
    if region.end > len(genome):
        raise RegionError(
            f"region {region.id!r} ({region.start}..{region.end}) exceeds "
            f"sequence length {len(genome)}"
        )
    part = DnaSequence(genome.codes[region.start - 1 : region.end], region.id)
    if region.orientation is Orientation.COMPLEMENT:
        part = reverse_complement(part)
    return part


def concat_regions(
    genome: DnaSequence, regions: Iterable[Region], id: str = "concatenated"
) -> DnaSequence:
    parts = [extract_region(genome, r).codes for r in regions]
    if not parts:
        return DnaSequence(np.empty(0, dtype=np.uint8), id)
    return DnaSequence(np.concatenate(parts), id)


def concat_sequences(seqs: Sequence[DnaSequence], id: str = "concatenated") -> DnaSequence:
    if not seqs:
        return DnaSequence(np.empty(0, dtype=np.uint8), id)
    return DnaSequence(np.concatenate([s.codes for s in seqs]), id)
