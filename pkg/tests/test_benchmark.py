import dataclasses

import numpy as np
import pytest

from dnainfo import EnsembleConfig, correction_table, corrected_profile, entropy_profile, generate_random_sequence
from dnainfo.benchmark import (
    BenchmarkError,
    CorrectionEntry,
    CorrectionTable,
    benchmark_sequence,
    correction_table_from_sequences,
    ensemble_members,
)
from dnainfo.entropy import EntropyProfile, ProfileEntry


def test_generate_empty():
    assert len(generate_random_sequence(0, np.random.default_rng(1))) == 0


def test_generate_deterministic():
    a = generate_random_sequence(8, np.random.default_rng(99))
    b = generate_random_sequence(8, np.random.default_rng(99))
    assert str(a) == str(b)


def test_generate_uniform_frequencies():
    s = generate_random_sequence(100_000, np.random.default_rng(3))
    freqs = np.bincount(s.codes, minlength=4) / len(s)
    assert np.all((freqs >= 0.24) & (freqs <= 0.26))


def test_config_validation():
    with pytest.raises(BenchmarkError):
        EnsembleConfig(100, ensemble_size=0)
    with pytest.raises(BenchmarkError, match="shorter"):
        EnsembleConfig(5, L_range=(3, 9))


def test_ensemble_members_seeded():
    cfg = EnsembleConfig(50, (3,), ensemble_size=4, seed=11)
    a, b = ensemble_members(cfg), ensemble_members(cfg)
    assert [str(s) for s in a] == [str(s) for s in b]
    assert len({str(s) for s in a}) == 4
    other = ensemble_members(dataclasses.replace(cfg, seed=12))
    assert str(other[0]) != str(a[0])


def test_delta_arithmetic():
    table = CorrectionTable(10, (CorrectionEntry(3, 1.5, 2 / 1.5),), 1)
    assert table.delta(3) == pytest.approx(4 / 3)


def test_long_sequence_needs_no_correction():
    table = correction_table(EnsembleConfig(100_000, (3,), ensemble_size=5, seed=1))
    assert table.entries[0].mean_random_h == pytest.approx(2.0, abs=0.01)
    assert table.delta(3) == pytest.approx(1.0, abs=0.01)


def test_short_sequence_delta_near_nine():
    # 39 bases hold 4 blocks of 9; four distinct blocks give 2 bits, i.e. 2/9 per base
    table = correction_table(EnsembleConfig(39, (9,), ensemble_size=30, seed=5))
    assert table.entries[0].mean_random_h == pytest.approx(2 / 9, rel=1e-2)
    assert table.delta(9) == pytest.approx(9, rel=1e-2)


def test_degenerate_ensemble():
    seqs = [generate_random_sequence(1, np.random.default_rng(0))]
    with pytest.raises(BenchmarkError, match="degenerate ensemble"):
        correction_table_from_sequences(seqs, [1])


def _profile(values, length=100, id="s"):
    return EntropyProfile(id, length, tuple(ProfileEntry(L, h * L, h) for L, h in values))


def _table(values, length=100):
    return CorrectionTable(length, tuple(CorrectionEntry(L, m, 2 / m) for L, m in values), 1)


def test_corrected_zero_and_identity():
    prof = _profile([(3, 0.0), (4, 1.7)])
    out = corrected_profile(prof, CorrectionTable(100, (CorrectionEntry(3, 2, 1.0), CorrectionEntry(4, 2, 1.0)), 1))
    assert [(e.L, e.h_corrected) for e in out.entries] == [(3, 0.0), (4, 1.7)]


def test_corrected_is_exact_product_without_clamp():
    out = corrected_profile(_profile([(5, 1.9)]), _table([(5, 1.6)]))
    (e,) = out.entries
    assert e.h_corrected == 1.9 * (2 / 1.6)
    assert e.h_corrected > 2


def test_corrected_mismatch_errors():
    with pytest.raises(BenchmarkError, match=r"missing L: \[4\]"):
        corrected_profile(_profile([(3, 1.0), (4, 1.0)]), _table([(3, 1.5)]))
    with pytest.raises(BenchmarkError, match="length"):
        corrected_profile(_profile([(3, 1.0)], length=50), _table([(3, 1.5)]))


@pytest.mark.parametrize("scale", [0.5, 3.0])
def test_corrected_scale_free(scale):
    raw = [(3, 1.7), (4, 1.4), (5, 1.1)]
    ens = [(3, 1.9), (4, 1.8), (5, 1.5)]
    base = corrected_profile(_profile(raw), _table(ens))
    scaled = corrected_profile(_profile([(L, h * scale) for L, h in raw]),
                               _table([(L, m * scale) for L, m in ens]))
    for a, b in zip(base.entries, scaled.entries):
        assert a.h_corrected == pytest.approx(b.h_corrected, rel=1e-12)


def test_single_member_self_consistency():
    cfg = EnsembleConfig(197, tuple(range(3, 10)), ensemble_size=1, seed=42)
    (member,) = ensemble_members(cfg)
    out = corrected_profile(entropy_profile(member, cfg.L_range), correction_table(cfg))
    for e in out.entries:
        assert e.h_corrected == pytest.approx(2.0, abs=1e-9)


def test_table_is_deterministic():
    cfg = EnsembleConfig(300, (2, 3, 4), ensemble_size=6, seed=8)
    assert correction_table(cfg) == correction_table(cfg)


def test_mean_random_h_nonincreasing_in_L():
    # averaged over 30 seeds at N=200; from L=4 on, 4**L exceeds the block count
    means = np.mean(
        [[e.mean_random_h for e in correction_table(EnsembleConfig(200, range(4, 10), 30, seed)).entries]
         for seed in range(30)],
        axis=0,
    )
    assert np.all(np.diff(means) <= 0)


def test_random_197_corrected_near_two():
    rng = np.random.default_rng(2024)
    s = generate_random_sequence(197, rng, "probe")
    _, _, corrected = benchmark_sequence(s, range(3, 10), 30, seed=77)
    assert all(1.85 <= e.h_corrected <= 2.15 for e in corrected.entries)
