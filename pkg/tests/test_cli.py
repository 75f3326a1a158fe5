from pathlib import Path

import pytest

from cookiedim.cli import main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def cfg(name: str) -> str:
    return str(CONFIGS / name)


def test_moran_output(capsys):
    assert main(["moran", "0.3333333333333333", "0.3333333333333333"]) == 0
    assert "dimension 0.630929753" in capsys.readouterr().out


def test_moran_bad_ratios(capsys):
    assert main(["moran", "0.7", "0.5"]) == 2
    assert "error" in capsys.readouterr().err


def test_dim_stationary_affine(capsys, tmp_path):
    assert main(["dim", cfg("two_affine.toml"), "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "dim J(thirds) = 0.6309297536" in out
    assert "dim J(quarters) = 0.5000000000" in out
    assert (tmp_path / "dim_stationary.csv").exists()


def test_dim_sequence_trace(capsys, tmp_path):
    code = main(["dim", cfg("two_affine.toml"), cfg("blocks_supergeometric.toml"), "--out", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "hausdorff ~ 0.50" in out
    assert "no limit claim" in out
    rows = (tmp_path / "dim_trace.csv").read_text().splitlines()
    assert rows[0] == "n,root,error_radius,route"
    assert len(rows) == 7


def test_dim_non_affine_needs_fallback(capsys):
    assert main(["dim", cfg("ex61.toml"), "--depth-cap", "4096"]) == 3
    err = capsys.readouterr().err
    assert "best achievable tolerance" in err
    assert "--allow-fallback" in err


def test_dim_ex61_with_fallback(capsys):
    assert main(["dim", cfg("ex61.toml"), "--depth-cap", "65536", "--allow-fallback"]) == 0
    out = capsys.readouterr().out
    assert "dim J(F0F1)" in out
    assert "not certified by the error radii" in out


def test_verify_failure_exit_code(capsys):
    assert main(["verify", "thm-main-affine"]) == 1
    captured = capsys.readouterr()
    assert "[thm-main-affine] FAIL" in captured.out
    assert "first failure" in captured.err


def test_verify_pass(capsys):
    assert main(["verify", "thm-main-supergeometric"]) == 0
    assert "[thm-main-supergeometric] PASS" in capsys.readouterr().out


def test_sweep_kink_table_and_outputs(capsys, tmp_path):
    assert main(["sweep", cfg("sweep_moran.toml"), "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    lines = [ln.split() for ln in out.splitlines() if ln.strip().startswith(("min", "max"))]
    assert [ln[0] for ln in lines] == ["min", "max"]
    assert abs(float(lines[0][1]) - 4 / 15) < 0.00075
    header = (tmp_path / "sweep.csv").read_text().splitlines()[0]
    assert header == "a,dim_1,dim_2,min_env,max_env,err_1,err_2"
    svg = (tmp_path / "sweep.svg").read_text()
    assert svg.startswith("<svg") and "<circle" in svg


def test_sweep_csv_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["sweep", cfg("sweep_moran.toml"), "--grid", "31", "--out", str(a)]) == 0
    assert main(["sweep", cfg("sweep_moran.toml"), "--grid", "31", "--out", str(b)]) == 0
    assert (a / "sweep.csv").read_bytes() == (b / "sweep.csv").read_bytes()
    assert (a / "sweep.svg").read_bytes() == (b / "sweep.svg").read_bytes()


def test_boxdim(capsys):
    assert main(["boxdim", cfg("middle_thirds.toml"), "--eps", *[str(3.0**-j) for j in range(2, 9)]]) == 0
    assert "box dimension 0.6309" in capsys.readouterr().out


def test_boxdim_composed(capsys):
    assert main(["boxdim", cfg("ex61.toml"), "--compose", "F0F1", "--depth", "8"]) == 0
    assert "box dimension" in capsys.readouterr().out
    assert main(["boxdim", cfg("ex61.toml"), "--compose", "F9"]) == 2


@pytest.mark.parametrize("text, needle", [
    ("[[systems]\n", "error"),
    ('[[systems]]\nbranches = [{type = "spline"}]\n', "unknown branch type"),
    ('[[systems]]\nbranches = [{type = "affine", a = 0.6, b = 0.0}, {type = "affine", a = 0.6, b = 0.4}]\n',
     "error"),
])
def test_config_errors(capsys, tmp_path, text, needle):
    path = tmp_path / "bad.toml"
    path.write_text(text)
    assert main(["dim", str(path)]) == 2
    assert needle in capsys.readouterr().err


def test_missing_file(capsys):
    assert main(["dim", "/nonexistent/system.toml"]) == 2


def test_bad_run_options(capsys):
    assert main(["moran", "0.3", "--tol", "-1"]) == 2
    assert main(["moran", "0.3", "--depth-cap", "0"]) == 2
