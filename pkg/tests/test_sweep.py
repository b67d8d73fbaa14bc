import json

import pytest

from vlft_lab.core.exceptions import ConfigValidationError
from vlft_lab.models.enums import RowStatus
from vlft_lab.schemas.sweep import CSV_COLUMNS, SimulationBlock, SweepRow
from vlft_lab.sweep.config_loader import list_presets, load_config, validate_config
from vlft_lab.sweep.csv_io import emit_csv, read_csv
from vlft_lab.sweep.runner import rows_to_frame, run_sweep


def write_config(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


# ---------------------------------------------------------
# load_config
# ---------------------------------------------------------
def test_minimal_config(tmp_path):
    path = write_config(tmp_path, {"bsc": 0.0789, "k_list": [8, 16], "curves": [{"kind": "infinite"}]})
    cfg = load_config(path)
    assert cfg.channel.bsc == 0.0789
    assert cfg.k_list == [8, 16]
    assert cfg.curves[0].label == "infinite"


def test_decreasing_k_list_rejected(tmp_path):
    path = write_config(tmp_path, {"bsc": 0.0789, "k_list": [16, 8], "curves": []})
    with pytest.raises(ConfigValidationError, match="strictly increasing"):
        load_config(path)


def test_unknown_key_is_named(tmp_path):
    path = write_config(tmp_path, {"bsc": 0.1, "k_list": [8], "curvez": []})
    with pytest.raises(ConfigValidationError, match="unknown key 'curvez'"):
        load_config(path)


def test_all_problems_listed():
    with pytest.raises(ConfigValidationError) as info:
        validate_config({"k_list": [4, "many"], "curves": [{"kind": "sideways"}]})
    problems = info.value.problems
    assert any(p.startswith("channel") for p in problems)
    assert any("k_list" in p for p in problems)
    assert any("curves.0.kind" in p for p in problems)
    assert len(problems) >= 3


def test_duplicate_labels_rejected():
    with pytest.raises(ConfigValidationError, match="duplicate curve labels"):
        validate_config(
            {"bsc": 0.1, "k_list": [8], "curves": [{"kind": "infinite"}, {"kind": "infinite"}]}
        )


def test_finite_kind_needs_block_length():
    with pytest.raises(ConfigValidationError, match="block_length"):
        validate_config({"bsc": 0.1, "k_list": [8], "curves": [{"kind": "repeated"}]})


def test_malformed_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"bsc": 0.1,, }', encoding="utf-8")
    with pytest.raises(ConfigValidationError, match="line 1"):
        load_config(path)


def test_missing_file():
    with pytest.raises(FileNotFoundError):
        load_config("definitely-not-a-preset")


def test_presets_load():
    fig1 = load_config("fig1")
    assert fig1.channel.bsc == 0.0789
    assert fig1.k_list == [8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256, 384, 512]
    assert [c.label for c in fig1.curves] == ["N=inf", "N=l+10log(l)+30", "Delta=0.3C", "Delta=0.4C"]
    assert fig1.curves[1].block_length.a == 10 and fig1.curves[1].block_length.b == 30

    fig2 = load_config("fig2")
    kinds = [c.increment.kind for c in fig2.curves[:3]]
    assert kinds == ["fixed", "log_log", "linear_log"]
    assert fig2.curves[2].increment.c == 0.15
    assert fig2.curves[3].kind.value == "arq"

    assert set(list_presets()) >= {"fig1", "fig2"}


def test_generic_channel_config():
    cfg = validate_config(
        {
            "channel": {"transition": [[0.7, 0.2, 0.1], [0.1, 0.3, 0.6]], "input_dist": [0.4, 0.6]},
            "k_list": [2],
            "curves": [{"kind": "infinite", "xi_method": "DmcDtConvolution", "grid_step": 0.001}],
        }
    )
    assert not cfg.channel.to_channel().is_bsc


def test_dmc_rejects_bsc_closed_form():
    channel = {"transition": [[0.7, 0.2, 0.1], [0.1, 0.3, 0.6]], "input_dist": [0.4, 0.6]}
    with pytest.raises(ConfigValidationError, match="BscRcuExact needs a BSC"):
        validate_config(
            {"channel": channel, "k_list": [2], "curves": [{"kind": "infinite", "xi_method": "BscRcuExact"}]}
        )
    with pytest.raises(ConfigValidationError, match="m_convention M"):
        validate_config(
            {"channel": channel, "k_list": [2], "curves": [{"kind": "infinite", "m_convention": "M_minus_one"}]}
        )


def test_dt_curve_rejects_m_minus_one():
    with pytest.raises(ConfigValidationError, match="m_convention M"):
        validate_config(
            {
                "bsc": 0.1,
                "k_list": [2],
                "curves": [{"kind": "infinite", "xi_method": "DmcDtConvolution", "m_convention": "M_minus_one"}],
            }
        )


# ---------------------------------------------------------
# run_sweep
# ---------------------------------------------------------
def small_config(**extra):
    data = {
        "bsc": 0.0789,
        "k_list": [4, 8],
        "curves": [
            {"label": "b", "kind": "repeated", "block_length": {"kind": "log_over_c_delta", "delta_frac": 0.4}},
            {"label": "a", "kind": "infinite"},
            {
                "label": "c",
                "kind": "combined",
                "block_length": {"kind": "log_over_c_delta", "delta_frac": 0.4},
                "increment": {"kind": "log_log"},
            },
            {"label": "d", "kind": "arq"},
        ],
    }
    data.update(extra)
    return validate_config(data)


def test_empty_curve_list():
    cfg = validate_config({"bsc": 0.1, "k_list": [8], "curves": []})
    assert run_sweep(cfg) == []


def test_rows_sorted_and_consistent():
    rows = run_sweep(small_config(), workers=3)
    assert [(r.label, r.k) for r in rows] == [
        (label, k) for label in "abcd" for k in (4, 8)
    ]
    for r in rows:
        assert r.status == RowStatus.ok
        assert r.throughput == pytest.approx(r.k / r.ell, rel=1e-12)
        assert r.k <= r.converse_log_m
    combined = [r for r in rows if r.label == "c" and r.k == 8][0]
    assert combined.I == 3 and combined.n_1 == 3
    assert combined.N == combined.n_1 + (combined.m - 1) * combined.I
    arq = [r for r in rows if r.label == "d"][0]
    assert arq.m == 1 and arq.I == arq.N


def test_thread_count_does_not_change_rows():
    assert run_sweep(small_config(), workers=1) == run_sweep(small_config(), workers=4)


def test_infeasible_point_is_marked():
    cfg = validate_config(
        {
            "bsc": 0.0,
            "k_list": [1, 2],
            "curves": [{"label": "short", "kind": "repeated", "block_length": {"kind": "fixed", "N": 1}}],
        }
    )
    rows = run_sweep(cfg)
    assert [r.status for r in rows] == [RowStatus.infeasible, RowStatus.infeasible]
    assert rows[0].ell is None and rows[0].N == 1


def test_simulation_columns():
    cfg = small_config(k_list=[8], simulation={"trials": 200, "seed": 1, "max_k": 8})
    rows = run_sweep(cfg)
    for r in rows:
        assert r.sim_mean is not None and r.sim_stderr is not None
        assert r.sim_mean <= r.ell + 4 * r.sim_stderr + 1e-9


def test_sweep_on_generic_channel():
    cfg = validate_config(
        {
            "transition": [[0.7, 0.2, 0.1], [0.1, 0.3, 0.6]],
            "input_dist": [0.4, 0.6],
            "k_list": [2, 3],
            "curves": [
                {"label": "inf", "kind": "infinite", "grid_step": 0.01},
                {"label": "rep", "kind": "repeated", "block_length": {"kind": "fixed", "N": 20}, "grid_step": 0.01},
            ],
        }
    )
    assert cfg.curves[0].xi_method is None
    rows = run_sweep(cfg)
    assert [(r.label, r.k) for r in rows] == [("inf", 2), ("inf", 3), ("rep", 2), ("rep", 3)]
    for r in rows:
        assert r.status == RowStatus.ok
        assert r.throughput == pytest.approx(r.k / r.ell, rel=1e-12)
        assert r.k <= r.converse_log_m


def test_simulation_skipped_above_max_k():
    rows = run_sweep(small_config(k_list=[4]), simulation=SimulationBlock(trials=10, max_k=3))
    assert all(r.sim_mean is None for r in rows)


# ---------------------------------------------------------
# CSV
# ---------------------------------------------------------
def test_header_only_for_zero_rows(tmp_path):
    path = emit_csv([], tmp_path / "empty.csv")
    assert path.read_bytes() == (",".join(CSV_COLUMNS) + "\n").encode("utf-8")


def test_csv_round_trip(tmp_path):
    rows = [
        SweepRow(label="x", k=8, M_log2=8.0, N=23, n_1=1, I=1, m=23, ell=17.25, epsilon=0.0,
                 throughput=0.463768115942, converse_log_m=16.5, sim_mean=16.75, sim_stderr=0.125),
        SweepRow(label="y, quoted", k=16, M_log2=16.0, status=RowStatus.infeasible),
    ]
    path = emit_csv(rows, tmp_path / "rows.csv")
    assert read_csv(path) == rows


def test_csv_columns_are_fixed():
    assert CSV_COLUMNS == (
        "label", "k", "M_log2", "N", "n_1", "I", "m", "ell", "epsilon",
        "throughput", "converse_log_m", "sim_mean", "sim_stderr", "status",
    )


def test_csv_byte_identical_across_runs(tmp_path):
    a = emit_csv(run_sweep(small_config()), tmp_path / "a.csv")
    b = emit_csv(run_sweep(small_config(), workers=2), tmp_path / "b.csv")
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text(encoding="utf-8")
    assert "\r" not in text and text.endswith("\n")


def test_csv_write_error_names_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match="file"):
        emit_csv([], blocker / "out.csv")


def test_rows_to_frame_columns():
    frame = rows_to_frame(run_sweep(small_config(k_list=[4])))
    assert list(frame.columns) == list(CSV_COLUMNS)
    assert len(frame) == 4
