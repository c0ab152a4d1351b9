"""End-to-end runs of the command-line drivers."""

import json

import numpy as np
import pytest

from vilenkin.cli import ExperimentConfig, load_config, main, run


def read_csv(path):
    lines = path.read_text().strip().splitlines()
    header = lines[0].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
    return header, rows


def test_identity_check_clean_run(tmp_path, capsys):
    out = tmp_path / "idents.csv"
    code = main(
        [
            "identity-check",
            "--group",
            "2,2,2",
            "--weights",
            "riesz",
            "--function",
            "random:5",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["check", "n", "j", "residual"]
    assert {r["check"] for r in rows} == {
        "reflection",
        "weight-sum",
        "abel-kernel",
        "abel-mean",
        "block",
    }
    assert all(float(r["residual"]) <= 1e-12 for r in rows)
    text = capsys.readouterr().out
    assert text.count("-> ok") == 5


def test_kernel_profile_fejer_hand_row(tmp_path):
    out = tmp_path / "prof.csv"
    code = main(
        [
            "kernel-profile",
            "--group",
            "2",
            "--levels",
            "3",
            "--family",
            "fejer",
            "--n-max",
            "4",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["n", "l1", "integral_re", "integral_im", "tail"]
    assert [r["n"] for r in rows] == ["1", "2", "3", "4"]
    last = rows[-1]
    assert float(last["l1"]) == pytest.approx(1.0, abs=1e-13)
    assert float(last["integral_re"]) == pytest.approx(1.0, abs=1e-13)
    assert float(last["tail"]) == pytest.approx(0.125, abs=1e-13)


def test_kernel_profile_block_mode(tmp_path):
    out = tmp_path / "prof.csv"
    code = main(
        [
            "kernel-profile",
            "--group",
            "2",
            "--levels",
            "6",
            "--family",
            "t",
            "--weights",
            "logpow:0.5",
            "--tail-rank",
            "2",
            "--block",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    _, rows = read_csv(out)
    assert [r["n"] for r in rows] == ["2", "4", "8", "16", "32", "64"]
    tails = [float(r["tail"]) for r in rows]
    assert tails[-1] < 0.05
    assert all(a > b for a, b in zip(tails, tails[1:]))


def test_converge_constant_function_norlund_errors_vanish(tmp_path):
    out = tmp_path / "conv.csv"
    code = main(
        [
            "converge",
            "--group",
            "2,3,2",
            "--weights",
            "nlog",
            "--form",
            "norlund",
            "--function",
            "constant",
            "--p",
            "1",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    _, rows = read_csv(out)
    assert len(rows) == 11  # n = 2..12
    assert all(float(r["err"]) < 1e-13 for r in rows)
    assert rows[0]["mean_id"] == "nlog|norlund"


def test_converge_pointwise_block(tmp_path):
    out = tmp_path / "conv.csv"
    code = main(
        [
            "converge",
            "--group",
            "2",
            "--levels",
            "3",
            "--weights",
            "constant",
            "--form",
            "norlund",
            "--function",
            "indicator:1,0",
            "--point",
            "0,0,0",
            "--block",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    _, rows = read_csv(out)
    assert [r["n"] for r in rows] == ["1", "2", "4", "8"]
    assert all(r["mode"] == "block" for r in rows)
    # the n = 8 Fejer error at 0 is exactly 1/16
    assert float(rows[-1]["err"]) == pytest.approx(1 / 16, abs=1e-14)


def test_classify_weights_row(tmp_path):
    out = tmp_path / "cls.csv"
    code = main(
        ["classify-weights", "--weights", "logpow:0.5", "--n-max", "2000", "--out", str(out)]
    )
    assert code == 0
    _, rows = read_csv(out)
    assert len(rows) == 1
    row = rows[0]
    assert row["family"] == "logpow:0.5"
    assert row["monotonicity"] == "non-decreasing"
    assert row["gate"] == "b"
    assert np.isfinite(float(row["fn01_sup"]))


def test_bench_transform_agrees(tmp_path):
    out = tmp_path / "bench.csv"
    code = main(
        ["bench-transform", "--group", "2,3", "--levels", "4", "--seed", "3", "--out", str(out)]
    )
    assert code == 0
    _, rows = read_csv(out)
    assert [r["method"] for r in rows] == ["naive", "fast"]
    assert all(float(r["max_abs_diff"]) <= 1e-10 for r in rows)


def test_json_config_with_flag_override(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(
        json.dumps({"group": "2", "levels": 3, "weights": "riesz", "n_max": 4})
    )
    out = tmp_path / "prof.csv"
    code = main(
        [
            "kernel-profile",
            "--config",
            str(cfg_path),
            "--family",
            "fejer",
            "--weights",
            "constant",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    _, rows = read_csv(out)
    # n_max from the file, weights overridden by the flag
    assert [r["n"] for r in rows] == ["1", "2", "3", "4"]


def test_load_config_precedence_and_validation(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"weights": "riesz", "p": 2.0}))
    cfg = load_config(cfg_path, {"weights": "constant", "p": None})
    assert cfg.weights == "constant"
    assert cfg.p == 2.0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"mystery": 1}))
    from vilenkin.cli import ConfigError

    with pytest.raises(ConfigError):
        load_config(bad, {})
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json", {})


def test_config_errors_exit_2(tmp_path, capsys):
    cases = [
        ["kernel-profile", "--group", "2,1"],
        ["kernel-profile", "--group", "2", "--levels", "40"],  # resolution overflow
        ["kernel-profile", "--group", "2,3,2", "--weights", "mystery"],
        ["kernel-profile", "--group", "2,3,2", "--n-max", "99"],
        ["kernel-profile", "--group", "2,3,2", "--family", "box"],
        ["converge", "--group", "2,3,2", "--function", "mystery"],
        ["converge", "--group", "2,3,2", "--point", "9,9,9"],
        ["converge", "--group", "2,3,2", "--form", "mystery"],
        ["identity-check", "--group", "2,3,2", "--function", "indicator:9,0"],
    ]
    for argv in cases:
        out = tmp_path / "x.csv"
        code = main(argv + ["--out", str(out)])
        assert code == 2, argv
        assert "config error" in capsys.readouterr().err


def test_unknown_command_and_flags_exit_2(capsys):
    assert main(["mystery-command"]) == 2
    assert main(["kernel-profile", "--mystery"]) == 2
    capsys.readouterr()


def test_csv_artifacts_are_deterministic(tmp_path):
    argv = [
        "converge",
        "--group",
        "2,3,2",
        "--weights",
        "riesz",
        "--function",
        "random:7",
        "--p",
        "1",
    ]
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main(argv + ["--out", str(out1)]) == 0
    assert main(argv + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_default_output_path(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code = main(["classify-weights", "--weights", "riesz", "--n-max", "100"])
    assert code == 0
    assert (tmp_path / "classify_weights.csv").exists()


def test_run_rejects_unknown_command():
    from vilenkin.cli import ConfigError

    with pytest.raises(ConfigError):
        run("mystery", ExperimentConfig())
