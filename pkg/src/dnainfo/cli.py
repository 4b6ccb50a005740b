"""Command-line interface: ``dnainfo <command> --input FILE [options]``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from . import __version__
from .benchmark import (
    DEFAULT_ENSEMBLE_SIZE,
    DEFAULT_SEED,
    RNG_ALGORITHM,
    EnsembleConfig,
    corrected_profile,
    correction_table,
)
from .correlate import DEFAULT_MAX_LAG, autocorrelation, substitute
from .entropy import CountMode, entropy_profile
from .ingest import load_annotated, read_sequences, render_fasta
from .seqcore import DnaInfoError, concat_sequences
from .walsh import randomness_coefficient

TOTAL_CODING_ID = "total_coding"

ENTROPY_COLUMNS = ["sequence_id", "length", "L", "block_entropy", "h_per_base"]
BENCHMARK_COLUMNS = ["sequence_id", "length", "L", "mean_random_h", "delta"]
REPORT_COLUMNS = ["sequence_id", "length", "L", "h_raw", "delta", "h_corrected"]
AUTOCORR_COLUMNS = ["lag", "value"]
WALSH_COLUMNS = ["sequence_id", "original_length", "adjusted_length", "adjustment",
                 "independent_count", "r_numerator", "r_denominator"]


class UsageError(DnaInfoError):
    pass


def parse_L_range(text: str) -> tuple[int, ...]:
    """``"3..9"``, ``"3-9"`` or ``"5"`` to a tuple of block lengths."""
    text = text.strip()
    for sep in ("..", "-", ":"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            break
    else:
        lo = hi = text
    try:
        lo_, hi_ = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid L range {text!r} (use e.g. 3..9)") from None
    if lo_ < 1 or hi_ < lo_:
        raise argparse.ArgumentTypeError(f"invalid L range {text!r}: need 1 <= low <= high")
    return tuple(range(lo_, hi_ + 1))


def _nonnegative_float(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits unsigned")
    return value


def warn(message: str):
    print(f"dnainfo: warning: {message}", file=sys.stderr)


def fmt(value: float) -> str:
    return format(value, "#.6g")


def analysis_sequences(input_path, features_path=None, warn_no_exons=True):
    """Sequences to analyse: every record, or every feature plus ``total_coding``."""
    if features_path is None:
        return read_sequences(input_path)
    genome = load_annotated(input_path, features_path)
    seqs = [genome.extract(r) for r in genome.features]
    exons = [s for s, r in zip(seqs, genome.features) if r.kind.value == "exon"]
    if exons:
        seqs.append(concat_sequences(exons, TOTAL_CODING_ID))
    elif warn_no_exons:
        warn(f"feature table has no exons; no {TOTAL_CODING_ID} record written")
    return seqs


def _resolve_seed(args) -> int:
    if getattr(args, "seed_from_clock", False):
        return time.time_ns() % 2**64
    return args.seed


def _metadata(args, **extra) -> dict:
    meta = {"tool": "dnainfo", "version": __version__, "command": args.command}
    meta.update(extra)
    return meta


def _write_csv(out, columns, rows, metadata=None):
    if metadata:
        for key, value in metadata.items():
            out.write(f"# {key}: {value}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)


def _emit(args, text: str):
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _json_dump(metadata, rows) -> str:
    return json.dumps({"metadata": metadata, "rows": rows}, indent=2) + "\n"


def _require_input(args):
    if not args.input:
        raise UsageError(f"{args.command}: --input is required")


def cmd_extract(args) -> str:
    _require_input(args)
    if not args.features:
        raise UsageError("extract: --features is required")
    return render_fasta(analysis_sequences(args.input, args.features))


def cmd_entropy(args) -> str:
    _require_input(args)
    meta = _metadata(args, mode=args.mode.value, beta=args.beta, log_base=2)
    rows = []
    for seq in analysis_sequences(args.input, args.features):
        profile = entropy_profile(seq, args.L, args.mode, args.beta)
        for e in profile.entries:
            rows.append({"sequence_id": seq.id, "length": len(seq), "L": e.L,
                         "block_entropy": e.block_entropy, "h_per_base": e.per_base})
    return _render(args, ENTROPY_COLUMNS, rows, meta)


def _ensemble_meta(args, seed):
    return _metadata(args, seed=seed, rng=RNG_ALGORITHM, ensemble_size=args.ensemble_size,
                     mode=args.mode.value, beta=args.beta, log_base=2)


def cmd_benchmark(args) -> str:
    seed = _resolve_seed(args)
    if args.length is not None:
        targets = [("random", args.length)]
    else:
        _require_input(args)
        targets = [(s.id, len(s)) for s in analysis_sequences(args.input, args.features)]
    rows = []
    for seq_id, length in targets:
        table = correction_table(EnsembleConfig(length, args.L, args.ensemble_size, seed,
                                                args.mode, args.beta))
        for e in table.entries:
            rows.append({"sequence_id": seq_id, "length": length, "L": e.L,
                         "mean_random_h": e.mean_random_h, "delta": e.delta})
    return _render(args, BENCHMARK_COLUMNS, rows, _ensemble_meta(args, seed))


def cmd_report(args) -> str:
    _require_input(args)
    seed = _resolve_seed(args)
    rows = []
    tables = {}
    for seq in analysis_sequences(args.input, args.features):
        profile = entropy_profile(seq, args.L, args.mode, args.beta)
        # the ensemble depends only on the length, so equal-length sequences share it
        if len(seq) not in tables:
            tables[len(seq)] = correction_table(
                EnsembleConfig(len(seq), args.L, args.ensemble_size, seed, args.mode, args.beta))
        corrected = corrected_profile(profile, tables[len(seq)])
        for e in corrected.entries:
            rows.append({"sequence_id": seq.id, "length": len(seq), "L": e.L,
                         "h_raw": e.h_raw, "delta": e.delta, "h_corrected": e.h_corrected})
    return _render(args, REPORT_COLUMNS, rows, _ensemble_meta(args, seed))


def cmd_autocorr(args) -> str:
    _require_input(args)
    series = []
    for seq in analysis_sequences(args.input, args.features):
        series.append(autocorrelation(substitute(seq), args.max_lag, center=args.center))
    meta = _metadata(args, max_lag=args.max_lag, center=args.center)
    if args.format == "json":
        rows = [{"sequence_id": s.source_id, "lag": lag, "value": value}
                for s in series for lag, value in s.rows()]
        return _json_dump(meta, rows)
    out = io.StringIO()
    for s in series:
        out.write(f"# sequence_id: {s.source_id}\n")
        _write_csv(out, AUTOCORR_COLUMNS, [(lag, fmt(v)) for lag, v in s.rows()])
    return out.getvalue()


def cmd_walsh(args) -> str:
    _require_input(args)
    rows = []
    for seq in analysis_sequences(args.input, args.features):
        rep = randomness_coefficient(seq)
        rows.append({"sequence_id": rep.sequence_id, "original_length": rep.original_length,
                     "adjusted_length": rep.adjusted_length, "adjustment": rep.adjustment,
                     "independent_count": rep.independent_count,
                     "r_numerator": rep.r_numerator, "r_denominator": rep.r_denominator})
    if args.format == "json":
        return _json_dump(_metadata(args), rows)
    out = io.StringIO()
    _write_csv(out, WALSH_COLUMNS, [[r[c] for c in WALSH_COLUMNS] for r in rows])
    return out.getvalue()


def _render(args, columns, rows, metadata) -> str:
    if args.format == "json":
        return _json_dump(metadata, rows)
    out = io.StringIO()
    table = [[fmt(r[c]) if isinstance(r[c], float) else r[c] for c in columns] for r in rows]
    _write_csv(out, columns, table, metadata)
    return out.getvalue()


COMMANDS = {
    "extract": cmd_extract,
    "entropy": cmd_entropy,
    "benchmark": cmd_benchmark,
    "autocorr": cmd_autocorr,
    "walsh": cmd_walsh,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dnainfo",
        description="Block entropy, autocorrelation and Walsh randomness of DNA sequences.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="FASTA or ORIGIN-block sequence file")
    common.add_argument("--features", help="feature TSV (id, kind, start, end, strand)")
    common.add_argument("--output", help="output path (default: standard output)")

    fmt_opt = argparse.ArgumentParser(add_help=False)
    fmt_opt.add_argument("--format", choices=("csv", "json"), default="csv")

    est = argparse.ArgumentParser(add_help=False)
    est.add_argument("--L", type=parse_L_range, default=tuple(range(2, 10)),
                     help="block lengths, e.g. 3..9 (default 2..9)")
    est.add_argument("--mode", type=CountMode.parse, default=CountMode.NON_OVERLAPPING,
                     help="blocks (non_overlapping, default) or sliding")
    est.add_argument("--beta", type=_nonnegative_float, default=0.0,
                     help="pseudo-count added to every block (0 = maximum likelihood)")

    ens = argparse.ArgumentParser(add_help=False)
    ens.add_argument("--ensemble-size", type=_positive_int, default=DEFAULT_ENSEMBLE_SIZE)
    ens.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    ens.add_argument("--seed-from-clock", action="store_true",
                     help="seed from the system clock instead (recorded in the output)")

    sub.add_parser("extract", parents=[common],
                   help="write each feature (and total_coding) as FASTA")
    sub.add_parser("entropy", parents=[common, fmt_opt, est], help="raw block-entropy profile")
    bench = sub.add_parser("benchmark", parents=[common, fmt_opt, est, ens],
                           help="random-ensemble correction factors")
    bench.add_argument("--length", type=_positive_int,
                       help="benchmark this length instead of the input sequences")
    sub.add_parser("report", parents=[common, fmt_opt, est, ens],
                   help="raw, correction and corrected entropies")
    ac = sub.add_parser("autocorr", parents=[common, fmt_opt], help="normalized autocorrelation")
    ac.add_argument("--max-lag", type=_nonnegative_int, default=DEFAULT_MAX_LAG)
    ac.add_argument("--center", action="store_true", help="subtract the signal mean first")
    sub.add_parser("walsh", parents=[common, fmt_opt], help="Kak randomness coefficient")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _emit(args, COMMANDS[args.command](args))
    except (DnaInfoError, OSError) as exc:
        print(f"dnainfo: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
