import pytest

from coopbeam.cli import load_config_file, main, parse_range


def test_parse_range_inclusive():
    assert parse_range("0.2:0.4:0.05") == [0.2, 0.25, 0.3, 0.35, 0.4]
    assert parse_range("2:12:1") == [float(s) for s in range(2, 13)]
    assert parse_range("4:4:1") == [4.0]


def test_parse_range_rejects_garbage():
    import argparse
    for bad in ("1:2", "2:1:0.5", "a:b:c", "1:5:0"):
        with pytest.raises((argparse.ArgumentTypeError, ValueError)):
            parse_range(bad)


def test_load_config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# comment line\n"
        "trials = 5000\n"
        "alpha = 0.3,0.4   # inline comment\n"
        "\n"
        "seed=7\n"
    )
    values = load_config_file(str(path))
    assert values == {"trials": "5000", "alpha": "0.3,0.4", "seed": "7"}


def test_load_config_file_rejects_bad_line(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("trials 5000\n")
    with pytest.raises(ValueError):
        load_config_file(str(path))


def test_point_command_success(tmp_path, capsys):
    rc = main(["point", "--alpha", "0.4", "--snr-db", "4",
               "--trials", "2000", "--seed", "3"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "k = 6" in out
    assert "feasible = True" in out
    assert "p_out_analytical_printed" in out
    assert "p_out_analytical_complex_convention" in out


def test_point_command_infeasible_exit_code(capsys):
    # broadcast noise doubled: bound 30 > p1 = 18 at alpha = 0.3
    rc = main(["point", "--alpha", "0.3", "--snr-db", "6",
               "--sigma-nbr2", "2.0", "--trials", "1000"])
    assert rc == 1
    assert "feasible = False" in capsys.readouterr().out


def test_point_requires_alpha_and_snr(capsys):
    assert main(["point", "--snr-db", "4", "--trials", "100"]) == 2
    assert main(["point", "--alpha", "0.4", "--trials", "100"]) == 2


def test_invalid_config_exit_code(capsys):
    rc = main(["alpha-sweep", "--alpha", "1.4", "--trials", "100"])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_alpha_sweep_writes_default_name_in_outdir(tmp_path, monkeypatch,
                                                   capsys):
    monkeypatch.setenv("COOPBEAM_OUTDIR", str(tmp_path))
    rc = main(["alpha-sweep", "--alpha", "0.3", "--snr-db", "6",
               "--trials", "1000", "--seed", "1"])
    assert rc == 0
    out_file = tmp_path / "alpha-sweep.csv"
    assert out_file.exists()
    text = out_file.read_text()
    assert text.startswith("# coopbeam")
    assert "snr_db,alpha,k,feasible" in text


def test_out_flag_overrides_outdir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("COOPBEAM_OUTDIR", str(tmp_path / "unused"))
    target = tmp_path / "explicit.csv"
    rc = main(["corr-sweep", "--snr-db", "6", "--corr", "0",
               "--corr", "0.5", "--trials", "1000", "--out", str(target)])
    assert rc == 0
    assert target.exists()


def test_config_file_with_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("trials = 1000\nseed = 5\nalpha = 0.3\nsnr_db = 6\n")
    out = tmp_path / "a.csv"
    rc = main(["alpha-sweep", "--config", str(cfg), "--seed", "9",
               "--out", str(out)])
    assert rc == 0
    text = out.read_text()
    assert "# master_seed = 9" in text      # flag beats file
    assert "# trials = 1000" in text        # file value used
    assert "# alpha_grid = 0.3" in text


def test_snr_sweep_no_baseline_flag(tmp_path, capsys):
    out = tmp_path / "s.csv"
    rc = main(["snr-sweep", "--snr-db", "5", "--trials", "1000",
               "--no-baseline", "--out", str(out)])
    assert rc == 0
    text = out.read_text()
    assert "mimo3x3" not in text


def test_workers_flag_output_identical(tmp_path, capsys):
    texts = []
    for workers, name in ((1, "w1.csv"), (8, "w8.csv")):
        out = tmp_path / name
        rc = main(["snr-sweep", "--snr-db-range", "4:6:1",
                   "--trials", "20000", "--seed", "11",
                   "--workers", str(workers), "--out", str(out)])
        assert rc == 0
        texts.append(out.read_text())
    assert texts[0] == texts[1]


def test_unknown_config_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("fidelity = 11\n")
    rc = main(["alpha-sweep", "--config", str(cfg)])
    assert rc == 2
