"""Readers for FASTA, GenBank-style ORIGIN blocks and exon/intron feature tables."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .seqcore import (
    DnaInfoError,
    DnaSequence,
    Orientation,
    Region,
    RegionError,
    RegionKind,
    SequenceError,
    encode,
    extract_region,
)

ORIGIN_GROUP = 10
ORIGIN_GROUPS_PER_LINE = 6


class ParseError(DnaInfoError, ValueError):
    """Malformed input, located by source, line and (optionally) column."""

    def __init__(self, message: str, line: int | None = None,
                 column: int | None = None, source: str | None = None):
        self.reason = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(self._format())

    def _format(self) -> str:
        where = []
        if self.source:
            where.append(str(self.source))
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.column is not None:
            where.append(f"column {self.column}")
        return f"{', '.join(where)}: {self.reason}" if where else self.reason


def _lines(text: str) -> list[str]:
    return [ln.rstrip("\r") for ln in text.split("\n")]


def parse_fasta(text: str, source: str | None = None) -> list[DnaSequence]:
    """Parse FASTA text into sequences.

    The header line (minus ``>``) becomes the id. Whitespace inside record
    bodies is ignored and bases are case-insensitive; anything else outside
    {A, T, G, C} is an error located by line and column.
    """
    records: list[DnaSequence] = []
    header: str | None = None
    header_line = 0
    chunks: list[np.ndarray] = []

    def close():
        if header is None:
            return
        if not chunks:
            raise ParseError(f"record {header!r} has an empty body", header_line, source=source)
        records.append(DnaSequence(np.concatenate(chunks), header))

    for lineno, line in enumerate(_lines(text), start=1):
        if line.startswith(">"):
            close()
            header = line[1:].strip()
            header_line = lineno
            chunks = []
            continue
        if not line.strip():
            continue
        if header is None:
            raise ParseError("sequence data before the first '>' header", lineno, source=source)
        # keep original columns for error reporting: validate per whitespace-free run
        col = 0
        for token in line.split():
            col = line.index(token, col)
            try:
                chunks.append(encode(token))
            except SequenceError as exc:
                offset = sum(len(c) for c in chunks)
                raise ParseError(
                    f"record {header!r} position {offset + exc.position}: "
                    f"invalid base {token[exc.position - 1]!r}",
                    lineno, col + exc.position, source,
                ) from None
            col += len(token)
    close()
    return records


def render_fasta(seqs, width: int = 60) -> str:
    out = []
    for seq in seqs:
        out.append(f">{seq.id}\n")
        text = seq.text
        for i in range(0, len(text), width):
            out.append(text[i : i + width] + "\n")
    return "".join(out)


def parse_origin_block(text: str, id: str = "", source: str | None = None) -> DnaSequence:
    """Parse a GenBank ``ORIGIN`` block such as::

        ORIGIN
                1 gtaagtagtt cacagaatgt ...
               61 caaacatcct ...
        //

    Each line carries the 1-based offset of its first base and 1-6 groups
    of 1-10 bases. Offsets are checked against the number of bases read so
    far. A ``//`` line is required to end the block.
    """
    chunks: list[np.ndarray] = []
    consumed = 0
    seen_data = False
    terminated = False
    for lineno, line in enumerate(_lines(text), start=1):
        stripped = line.strip()
        if terminated:
            if stripped:
                raise ParseError("content after '//' terminator", lineno, source=source)
            continue
        if not stripped:
            continue
        if stripped == "//":
            terminated = True
            continue
        if stripped.upper().startswith("ORIGIN"):
            if seen_data or stripped.upper() != "ORIGIN":
                raise ParseError("unexpected ORIGIN line", lineno, source=source)
            continue
        fields = stripped.split()
        offset_field = fields[0]
        if not offset_field.isdigit():
            raise ParseError(f"expected a numeric offset, found {offset_field!r}",
                             lineno, line.index(offset_field) + 1, source)
        offset = int(offset_field)
        if offset != consumed + 1:
            raise ParseError(f"offset {offset} expected {consumed + 1}", lineno, source=source)
        groups = fields[1:]
        if not groups:
            raise ParseError("line has an offset but no bases", lineno, source=source)
        if len(groups) > ORIGIN_GROUPS_PER_LINE:
            raise ParseError(f"{len(groups)} base groups on one line (max {ORIGIN_GROUPS_PER_LINE})",
                             lineno, source=source)
        col = line.index(offset_field) + len(offset_field)
        for group in groups:
            col = line.index(group, col)
            if len(group) > ORIGIN_GROUP:
                raise ParseError(f"base group {group!r} has {len(group)} bases (max {ORIGIN_GROUP})",
                                 lineno, col + 1, source)
            try:
                codes = encode(group)
            except SequenceError as exc:
                raise ParseError(
                    f"invalid base {group[exc.position - 1]!r} at sequence position "
                    f"{consumed + exc.position}",
                    lineno, col + exc.position, source,
                ) from None
            chunks.append(codes)
            consumed += len(group)
            col += len(group)
        seen_data = True
    if not terminated:
        raise ParseError("missing '//' terminator", source=source)
    codes = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.uint8)
    return DnaSequence(codes, id)


def render_origin_block(seq: DnaSequence) -> str:
    text = seq.text.lower()
    per_line = ORIGIN_GROUP * ORIGIN_GROUPS_PER_LINE
    out = ["ORIGIN\n"]
    for start in range(0, len(text), per_line):
        chunk = text[start : start + per_line]
        groups = [chunk[i : i + ORIGIN_GROUP] for i in range(0, len(chunk), ORIGIN_GROUP)]
        out.append(f"{start + 1:>9} {' '.join(groups)}\n")
    out.append("//\n")
    return "".join(out)


_STRANDS = {"+": Orientation.FORWARD, "complement": Orientation.COMPLEMENT}


def parse_features(text: str, source: str | None = None) -> list[Region]:
    """Parse the feature table: ``id<TAB>kind<TAB>start<TAB>end<TAB>strand``.

    ``kind`` is exon, intron or other; ``strand`` is ``+`` or ``complement``.
    Blank lines and ``#`` comments are skipped.
    """
    regions: list[Region] = []
    seen: dict[str, int] = {}
    for lineno, line in enumerate(_lines(text), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = [f.strip() for f in line.split("\t")]
        if len(fields) != 5:
            raise ParseError(f"expected 5 tab-separated fields, found {len(fields)}",
                             lineno, source=source)
        fid, kind, start, end, strand = fields
        if not fid:
            raise ParseError("empty feature id", lineno, 1, source)
        try:
            kind_ = RegionKind(kind.lower())
        except ValueError:
            raise ParseError(f"unknown feature kind {kind!r} (expected exon, intron or other)",
                             lineno, source=source) from None
        try:
            start_, end_ = int(start), int(end)
        except ValueError:
            raise ParseError(f"non-numeric bounds {start!r}..{end!r}", lineno, source=source) from None
        if strand not in _STRANDS:
            raise ParseError(f"unknown strand {strand!r} (expected '+' or 'complement')",
                             lineno, source=source)
        if fid in seen:
            raise ParseError(f"duplicate feature id {fid!r} (first on line {seen[fid]})",
                             lineno, source=source)
        try:
            region = Region(fid, kind_, start_, end_, _STRANDS[strand])
        except RegionError as exc:
            raise ParseError(str(exc), lineno, source=source) from None
        seen[fid] = lineno
        regions.append(region)
    return regions


def render_features(regions) -> str:
    strand = {Orientation.FORWARD: "+", Orientation.COMPLEMENT: "complement"}
    return "".join(
        f"{r.id}\t{r.kind.value}\t{r.start}\t{r.end}\t{strand[r.orientation]}\n" for r in regions
    )


def sniff_format(text: str) -> str:
    """Return ``"fasta"`` or ``"origin"`` from the first non-blank character."""
    for ch in text:
        if ch.isspace():
            continue
        if ch == ">":
            return "fasta"
        if ch.isdigit() or ch in "Oo":
            return "origin"
        break
    raise ParseError("cannot detect sequence format (expected '>' header, offset or ORIGIN)")


def _read_text(path) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def read_sequences(path) -> list[DnaSequence]:
    """Read every record from a FASTA or ORIGIN-block file."""
    text = _read_text(path)
    source = os.fspath(path)
    try:
        fmt = sniff_format(text)
    except ParseError as exc:
        raise ParseError(exc.reason, source=source) from None
    if fmt == "fasta":
        return parse_fasta(text, source)
    stem = os.path.splitext(os.path.basename(source))[0]
    return [parse_origin_block(text, stem, source)]


@dataclass(frozen=True)
class AnnotatedGenome:
    sequence: DnaSequence
    features: tuple[Region, ...] = field(default_factory=tuple)
    source_path: str = ""

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))
        ids = set()
        for region in self.features:
            if region.id in ids:
                raise RegionError(f"duplicate feature id {region.id!r}")
            ids.add(region.id)
            if region.end > len(self.sequence):
                raise RegionError(
                    f"feature {region.id!r} ({region.start}..{region.end}) exceeds "
                    f"sequence length {len(self.sequence)}"
                )

    def exons(self) -> list[Region]:
        return [r for r in self.features if r.kind is RegionKind.EXON]

    def extract(self, region: Region) -> DnaSequence:
        return extract_region(self.sequence, region)


def load_annotated(sequence_path, features_path=None) -> AnnotatedGenome:
    seqs = read_sequences(sequence_path)
    if len(seqs) != 1:
        raise ParseError(f"expected exactly one genome record, found {len(seqs)}",
                         source=os.fspath(sequence_path))
    features: list[Region] = []
    if features_path is not None:
        features = parse_features(_read_text(features_path), os.fspath(features_path))
        # bounds are also checked by AnnotatedGenome; done here to keep file context
        for region in features:
            if region.end > len(seqs[0]):
                raise RegionError(
                    f"{os.fspath(features_path)}: feature {region.id!r} "
                    f"({region.start}..{region.end}) exceeds sequence length {len(seqs[0])}"
                )
    return AnnotatedGenome(seqs[0], tuple(features), os.fspath(sequence_path))
