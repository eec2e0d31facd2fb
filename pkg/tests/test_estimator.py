"""
Tests for the sampling loop and the checkpoint files: partitioning,
determinism across worker counts, resume, and CSV/sidecar handling.
Run from the project root: pytest tests/test_estimator.py
"""

import os
import sys

import numpy as np
import pytest

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from algorithms.checkpoint import (
    CSV_HEADER,
    Checkpoint,
    CheckpointError,
    CheckpointWriter,
    Counters,
    merge,
    read_checkpoints,
    read_sidecar,
    resume,
    scenario_from_params,
    scenario_params,
)
from algorithms.estimator import (
    BLOCK_SIZE,
    checkpoint_indices,
    default_interval,
    pseudo_uniforms,
    run,
    split_aligned,
    tally_block,
)
from sequence.qrng import make_sequence
from states.rmt import bures, hilbert_schmidt, variate_count

HS_REBIT = hilbert_schmidt(2, 2, "real")
HS_QUBIT = hilbert_schmidt(2, 2)


def _spec(scenario, alpha0=0.5):
    return make_sequence(variate_count(scenario), alpha0)


def _params(scenario, name, spec, **extra):
    return dict(scenario_params(scenario), scenario=name, d=spec.d, alpha0=spec.alpha0, **extra)


def _rows_without_time(path):
    with open(path, "r") as f:
        return [line.rsplit(",", 1)[0] for line in f.read().splitlines()]


def test_checkpoint_indices():
    assert checkpoint_indices(0, 25_000, 10_000) == [10_000, 20_000, 25_000]
    assert checkpoint_indices(15_000, 30_000, 10_000) == [20_000, 30_000]
    assert checkpoint_indices(10_000, 20_000, 10_000) == [20_000]
    assert checkpoint_indices(500, 500, 100) == []


def test_split_aligned_cuts_at_absolute_multiples():
    assert split_aligned(5, 25, 10) == [(5, 10), (10, 20), (20, 25)]
    assert split_aligned(10, 20, 10) == [(10, 20)]
    assert split_aligned(7, 7, 10) == []


def test_default_interval():
    assert default_interval(HS_QUBIT) == 5_000_000
    assert default_interval(hilbert_schmidt(2, 3)) == 1_000_000


def test_counters_merge_and_fractions():
    a = Counters(n_total=10, n_skipped=1, n_ppt=4, n_ppt_det_greater=2)
    b = Counters(n_total=30, n_skipped=0, n_ppt=6, n_ppt_det_greater=3, n_realign_entangled=5)
    c = a + b
    assert c == merge(b, a)
    assert c.n_indices == 41
    assert c.p_ppt == 10 / 40
    assert c.det_greater_frac == 0.5
    assert Counters().p_ppt is None
    assert Counters().det_greater_frac is None
    assert merge(a, Counters()) == a


def test_realign_fractions_need_realignment():
    off = Counters(n_total=10, n_ppt=4)
    assert off.realign_frac is None
    assert off.bound_frac is None
    on = Counters(n_total=10, n_ppt=4, n_realign_entangled=5, n_bound_entangled=1, realign=True)
    assert on.realign_frac == 0.5
    assert on.bound_frac == 0.1
    assert merge(off, on).realign
    assert Counters(realign=True).realign_frac is None
    spec = _spec(HS_QUBIT)
    assert tally_block(HS_QUBIT, spec, 1, 100).realign_frac is None
    assert tally_block(HS_QUBIT, spec, 1, 100, with_realign=True).realign_frac is not None


def test_tally_block_counts_every_index():
    spec = _spec(HS_QUBIT)
    counters = tally_block(HS_QUBIT, spec, 1000, 4000)
    assert counters.n_indices == 3000
    assert counters.n_skipped == 0
    assert 0 < counters.n_ppt < counters.n_total


def test_tally_block_is_additive():
    spec = _spec(HS_REBIT)
    whole = tally_block(HS_REBIT, spec, 0, 5000, with_realign=True)
    parts = merge(tally_block(HS_REBIT, spec, 0, 2100, with_realign=True),
                  tally_block(HS_REBIT, spec, 2100, 5000, with_realign=True))
    assert whole == parts


def test_zero_offset_skips_index_zero():
    spec = _spec(HS_QUBIT, alpha0=0.0)
    counters = tally_block(HS_QUBIT, spec, 0, 10)
    assert counters.n_skipped == 1
    assert counters.n_total == 9


def test_debug_checks_pass_on_valid_samples():
    spec = _spec(bures(2, 2))
    counters = tally_block(bures(2, 2), spec, 1, 513, debug=True)
    assert counters.n_total == 512


def test_default_offset_skips_index_zero():
    # alpha0 = 1/2 puts every coordinate of point 0 at the median: all normals are 0
    for scenario in (HS_QUBIT, bures(2, 2)):
        spec = _spec(scenario)
        assert tally_block(scenario, spec, 0, 1).n_skipped == 1
        counters = tally_block(scenario, spec, 0, 512)
        assert counters.n_skipped == 1
        assert counters.n_total == 511


def test_run_checkpoints_and_final_counters():
    spec = _spec(HS_QUBIT)
    result = run(HS_QUBIT, spec, 0, 25_000, 10_000, scenario_id="two-qubit-hs")
    assert [cp.n for cp in result.checkpoints] == [10_000, 20_000, 25_000]
    assert result.checkpoints[-1].counters == result.counters
    assert result.counters.n_indices == 25_000
    totals = [cp.counters.n_total for cp in result.checkpoints]
    assert totals == sorted(totals)


def test_run_empty_range():
    spec = _spec(HS_QUBIT)
    result = run(HS_QUBIT, spec, 100, 100, 10)
    assert result.checkpoints == []
    assert result.counters == Counters()


def test_run_validates_inputs():
    spec = _spec(HS_QUBIT)
    with pytest.raises(ValueError):
        run(HS_QUBIT, make_sequence(20), 0, 10, 10)
    with pytest.raises(ValueError):
        run(HS_QUBIT, spec, 10, 5, 10)
    with pytest.raises(ValueError):
        run(HS_QUBIT, spec, 0, 10, 0)
    with pytest.raises(ValueError):
        run(HS_QUBIT, spec, 0, 10, 10, sampler="sobol")
    with pytest.raises(ValueError):
        run(HS_QUBIT, spec, 0, 10, 10, threads=0)


def test_two_rebit_estimate_near_known_value():
    spec = _spec(HS_REBIT)
    result = run(HS_REBIT, spec, 0, 40_000, 40_000)
    assert abs(result.counters.p_ppt - 29 / 64) < 0.02


def test_two_qubit_estimate_and_det_partition():
    spec = _spec(HS_QUBIT)
    result = run(HS_QUBIT, spec, 0, 40_000, 40_000)
    assert abs(result.counters.p_ppt - 8 / 33) < 0.015
    assert abs(result.counters.det_greater_frac - 0.5) < 0.05


def test_worker_count_does_not_change_counters():
    spec = _spec(HS_QUBIT)
    single = run(HS_QUBIT, spec, 3_000, 3_000 + 3 * BLOCK_SIZE, 10_000, threads=1)
    pooled = run(HS_QUBIT, spec, 3_000, 3_000 + 3 * BLOCK_SIZE, 10_000, threads=2)
    assert [cp.counters for cp in single.checkpoints] == [cp.counters for cp in pooled.checkpoints]


def test_pseudo_sampler_is_index_addressed():
    whole = pseudo_uniforms(4, 0, 2 * BLOCK_SIZE, seed=5)
    part = pseudo_uniforms(4, BLOCK_SIZE - 10, BLOCK_SIZE + 10, seed=5)
    np.testing.assert_array_equal(part, whole[BLOCK_SIZE - 10:BLOCK_SIZE + 10])
    assert not np.array_equal(pseudo_uniforms(4, 0, 10, seed=6), whole[:10])


def test_pseudo_run_deterministic_across_workers():
    spec = _spec(HS_REBIT)
    a = run(HS_REBIT, spec, 0, 20_000, 10_000, sampler="pseudo", seed=3, threads=1)
    b = run(HS_REBIT, spec, 0, 20_000, 10_000, sampler="pseudo", seed=3, threads=2)
    assert a.counters == b.counters
    assert abs(a.counters.p_ppt - 29 / 64) < 0.03


def test_checkpoint_row_formats():
    cp = Checkpoint("two-qubit-hs", 100, Counters(100, 0, 25, 12), conjecture_value=0.25, unix_time=12.5)
    row = cp.to_row()
    assert len(row) == len(CSV_HEADER)
    assert row[6] == "" and row[7] == ""
    assert row[8] == repr(0.25)
    assert row[10] == repr(1.0)
    assert row[11] == "12.500"
    back = Checkpoint.from_row(row)
    assert back.counters == cp.counters
    assert back.n == 100 and not back.realign


def test_checkpoint_row_with_realign():
    c = Counters(10, 0, 4, 2, n_realign_entangled=6, n_bound_entangled=1, realign=True)
    row = Checkpoint("x", 10, c, realign=True, unix_time=0.0).to_row()
    assert row[6] == "6" and row[7] == "1"
    assert row[10] == ""
    assert Checkpoint.from_row(row).counters == c


def test_malformed_row_rejected():
    with pytest.raises(CheckpointError):
        Checkpoint.from_row(["x", "ten"] + [""] * 10)
    with pytest.raises(CheckpointError):
        Checkpoint.from_row(["x", "10"])


def test_writer_and_reader(tmp_path):
    path = str(tmp_path / "run.csv")
    spec = _spec(HS_QUBIT)
    writer = CheckpointWriter(path, _params(HS_QUBIT, "two-qubit-hs", spec, interval=5000))
    result = run(HS_QUBIT, spec, 0, 12_000, 5000, scenario_id="two-qubit-hs",
                 conjecture_value=8 / 33, writer=writer)
    back = read_checkpoints(path)
    assert [cp.n for cp in back] == [5000, 10_000, 12_000]
    assert [cp.counters for cp in back] == [cp.counters for cp in result.checkpoints]
    params = read_sidecar(path)
    assert params["format_version"] == 1
    assert scenario_from_params(params) == HS_QUBIT


def test_header_only_csv_cannot_resume(tmp_path):
    path = str(tmp_path / "empty.csv")
    spec = _spec(HS_QUBIT)
    CheckpointWriter(path, _params(HS_QUBIT, "two-qubit-hs", spec))
    assert read_checkpoints(path) == []
    with pytest.raises(CheckpointError):
        resume(path)


def test_reader_errors(tmp_path):
    with pytest.raises(CheckpointError):
        read_checkpoints(str(tmp_path / "missing.csv"))
    empty = tmp_path / "blank.csv"
    empty.write_text("")
    with pytest.raises(CheckpointError):
        read_checkpoints(str(empty))
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b,c\n")
    with pytest.raises(CheckpointError):
        read_checkpoints(str(bad))


def test_resume_matches_uninterrupted_run(tmp_path):
    spec = _spec(HS_QUBIT)
    params = _params(HS_QUBIT, "two-qubit-hs", spec, interval=4000)

    full_path = str(tmp_path / "full.csv")
    run(HS_QUBIT, spec, 0, 20_000, 4000, scenario_id="two-qubit-hs",
        writer=CheckpointWriter(full_path, params))

    split_path = str(tmp_path / "split.csv")
    run(HS_QUBIT, spec, 0, 10_000, 4000, scenario_id="two-qubit-hs",
        writer=CheckpointWriter(split_path, params))
    point = resume(split_path, expected_scenario="two-qubit-hs")
    assert point.n == 10_000
    assert point.scenario == HS_QUBIT
    run(HS_QUBIT, spec, point.n, 20_000, 4000, scenario_id="two-qubit-hs", initial=point.counters,
        writer=CheckpointWriter(split_path, params, append=True), threads=2)

    full_rows = _rows_without_time(full_path)
    split_rows = _rows_without_time(split_path)
    # the split run has one extra row at its interruption point
    assert [r for r in split_rows if not r.startswith("two-qubit-hs,10000,")] == full_rows
    assert read_checkpoints(split_path)[-1].counters == read_checkpoints(full_path)[-1].counters


def test_resume_rejects_other_scenario(tmp_path):
    path = str(tmp_path / "run.csv")
    spec = _spec(HS_QUBIT)
    run(HS_QUBIT, spec, 0, 1000, 1000, scenario_id="two-qubit-hs",
        writer=CheckpointWriter(path, _params(HS_QUBIT, "two-qubit-hs", spec)))
    with pytest.raises(CheckpointError):
        resume(path, expected_scenario="two-rebit-hs")


def test_realignment_fractions_on_hs_qubit_qudit():
    # trace-norm realignment catches only a small share of the entangled 2x4 states
    scenario = hilbert_schmidt(2, 4)
    counters = tally_block(scenario, _spec(scenario), 1, 8193, with_realign=True)
    assert counters.n_total == 8192
    assert 0.005 < counters.realign_frac < 0.05
    assert counters.n_bound_entangled == 0
    assert counters.n_realign_entangled < counters.n_total - counters.n_ppt


class _StopAfterFirstRow(CheckpointWriter):
    def append(self, checkpoint):
        super().append(checkpoint)
        raise RuntimeError("interrupted")


def test_sidecar_records_last_index_reached(tmp_path):
    path = str(tmp_path / "cut.csv")
    spec = _spec(HS_QUBIT)
    writer = _StopAfterFirstRow(path, _params(HS_QUBIT, "two-qubit-hs", spec, interval=5000, n_end=0))
    assert read_sidecar(path)["n_end"] == 0
    with pytest.raises(RuntimeError):
        run(HS_QUBIT, spec, 0, 12_000, 5000, scenario_id="two-qubit-hs", writer=writer)
    assert read_sidecar(path)["n_end"] == 5000
    assert [cp.n for cp in read_checkpoints(path)] == [5000]
