import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from dnainfo import DnaSequence, parse_fasta, reverse_complement
from dnainfo.cli import REPORT_COLUMNS, WALSH_COLUMNS, main, parse_L_range
from dnainfo.ingest import render_fasta


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def data_rows(text):
    return list(csv.DictReader(line for line in io.StringIO(text) if not line.startswith("#")))


@pytest.fixture
def genome(tmp_path):
    (tmp_path / "g.fa").write_text(">g\nATGCAT\n")
    (tmp_path / "f.tsv").write_text("e1\texon\t1\t3\t+\ne2\texon\t4\t6\tcomplement\n")
    return tmp_path


@pytest.fixture
def random_fasta(tmp_path):
    rng = np.random.default_rng(31)
    seqs = [DnaSequence(rng.integers(0, 4, 197, dtype=np.uint8), "r197"),
            DnaSequence(rng.integers(0, 4, 300, dtype=np.uint8), "r300")]
    path = tmp_path / "r.fa"
    path.write_text(render_fasta(seqs))
    return path


@pytest.mark.parametrize("text, expected", [("3..9", tuple(range(3, 10))), ("2-4", (2, 3, 4)), ("5", (5,))])
def test_parse_L_range(text, expected):
    assert parse_L_range(text) == expected


def test_extract(genome, capsys):
    code, out, _ = run(["extract", "--input", str(genome / "g.fa"), "--features", str(genome / "f.tsv")], capsys)
    assert code == 0
    recs = parse_fasta(out)
    assert [r.id for r in recs] == ["e1", "e2", "total_coding"]
    assert str(recs[1]) == str(reverse_complement(DnaSequence.from_text("CAT")))
    assert str(recs[2]) == "ATG" + "ATG"


def test_extract_without_exons_warns(genome, capsys):
    (genome / "i.tsv").write_text("i1\tintron\t1\t6\t+\n")
    code, out, err = run(["extract", "--input", str(genome / "g.fa"), "--features", str(genome / "i.tsv")], capsys)
    assert code == 0
    assert [r.id for r in parse_fasta(out)] == ["i1"]
    assert "no exons" in err


def test_extract_bounds_error(genome, capsys):
    (genome / "bad.tsv").write_text("e9\texon\t1\t7\t+\n")
    code, out, err = run(["extract", "--input", str(genome / "g.fa"), "--features", str(genome / "bad.tsv")], capsys)
    assert code == 1
    assert out == ""
    assert "e9" in err and "bad.tsv" in err


def test_parse_error_reports_line(tmp_path, capsys):
    (tmp_path / "x.fa").write_text(">x\nACGT\nACNT\n")
    code, _, err = run(["entropy", "--input", str(tmp_path / "x.fa")], capsys)
    assert code == 1
    assert "x.fa, line 3, column 3" in err


def test_entropy_csv(tmp_path, capsys):
    (tmp_path / "a.fa").write_text(">a\n" + "A" * 20 + "\n")
    code, out, _ = run(["entropy", "--input", str(tmp_path / "a.fa"), "--L", "2..3"], capsys)
    assert code == 0
    rows = data_rows(out)
    assert [(r["L"], r["block_entropy"], r["h_per_base"]) for r in rows] == [("2", "0.00000", "0.00000"), ("3", "0.00000", "0.00000")]
    assert "# mode: non_overlapping" in out


def test_report_rows_and_metadata(random_fasta, capsys):
    code, out, _ = run(["report", "--input", str(random_fasta), "--L", "3..9", "--seed", "5"], capsys)
    assert code == 0
    header = [line for line in out.splitlines() if not line.startswith("#")][0]
    assert header.split(",") == REPORT_COLUMNS
    rows = data_rows(out)
    assert len(rows) == 14
    assert {r["sequence_id"] for r in rows} == {"r197", "r300"}
    for key in ("seed: 5", "rng: numpy PCG64", "ensemble_size: 30", "mode: non_overlapping", "beta: 0.0", "version: "):
        assert f"# {key}" in out
    for r in rows:
        assert float(r["h_corrected"]) == pytest.approx(float(r["h_raw"]) * float(r["delta"]), rel=1e-5)
        assert 1.85 <= float(r["h_corrected"]) <= 2.15


def test_report_byte_identical(random_fasta, tmp_path):
    outs = []
    for name in ("a.csv", "b.csv"):
        assert main(["report", "--input", str(random_fasta), "--output", str(tmp_path / name)]) == 0
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1]


def test_report_json(random_fasta, capsys):
    code, out, _ = run(["report", "--input", str(random_fasta), "--L", "3..4", "--format", "json",
                        "--ensemble-size", "3", "--mode", "sliding", "--beta", "1"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["metadata"]["mode"] == "sliding"
    assert doc["metadata"]["ensemble_size"] == 3
    assert list(doc["rows"][0]) == REPORT_COLUMNS
    assert len(doc["rows"]) == 4


def test_seed_from_clock_recorded(random_fasta, capsys):
    code, out, _ = run(["benchmark", "--input", str(random_fasta), "--L", "3", "--ensemble-size", "2",
                        "--seed-from-clock", "--format", "json"], capsys)
    assert code == 0
    assert isinstance(json.loads(out)["metadata"]["seed"], int)


def test_benchmark_by_length(capsys):
    code, out, _ = run(["benchmark", "--length", "100000", "--L", "3", "--ensemble-size", "2"], capsys)
    assert code == 0
    (row,) = data_rows(out)
    assert float(row["delta"]) == pytest.approx(1.0, abs=0.01)


def test_autocorr_csv(tmp_path, capsys):
    (tmp_path / "s.fa").write_text(">s\nATGC\n")
    code, out, _ = run(["autocorr", "--input", str(tmp_path / "s.fa"), "--max-lag", "1"], capsys)
    assert code == 0
    rows = data_rows(out)
    assert [(r["lag"], float(r["value"])) for r in rows] == [("-1", -0.8125), ("0", 1.25), ("1", -0.8125)]


def test_autocorr_lag_too_large(tmp_path, capsys):
    (tmp_path / "s.fa").write_text(">s\nATGC\n")
    code, _, err = run(["autocorr", "--input", str(tmp_path / "s.fa")], capsys)
    assert code == 1
    assert "max_lag" in err


def test_walsh_csv(tmp_path, capsys):
    (tmp_path / "s.fa").write_text(">s\nAAAA\n>t\n" + "ACGT" * 50 + "\n")
    code, out, _ = run(["walsh", "--input", str(tmp_path / "s.fa")], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split(",") == WALSH_COLUMNS
    assert lines[1] == "s,4,4,none,2,2,4"
    assert lines[2].startswith("t,200,256,padded,")


def test_origin_input(data_dir, capsys):
    code, out, _ = run(["walsh", "--input", str(data_dir / "intron_1092.origin"), "--format", "json"], capsys)
    assert code == 0
    (row,) = json.loads(out)["rows"]
    assert (row["sequence_id"], row["original_length"], row["adjusted_length"]) == ("intron_1092", 1092, 1024)


def test_missing_input(capsys):
    code, _, err = run(["entropy"], capsys)
    assert code == 1
    assert "--input" in err


def test_bad_flag_values():
    with pytest.raises(SystemExit) as exc:
        main(["entropy", "--input", "x", "--beta", "-1"])
    assert exc.value.code == 2


def test_console_entry_point(random_fasta):
    proc = subprocess.run([sys.executable, "-m", "dnainfo.cli", "walsh", "--input", str(random_fasta)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith(",".join(WALSH_COLUMNS))
