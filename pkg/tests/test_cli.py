"""Command-line interface, exercised in process through main(argv)."""

import json

import pytest

from cubiclines.cli import _lambda_grid, main
from cubiclines.surfaces import MONOMIALS

FERMAT = [1 if sorted(m, reverse=True)[0] == 3 else 0 for m in MONOMIALS]
CONE = [1 if sorted(m, reverse=True)[0] == 3 and m[3] == 0 else 0 for m in MONOMIALS]


def _surface_file(tmp_path, name, **data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_verify_command(capsys):
    assert main(["verify-theorem1", "--p", "7"]) == 0
    out = capsys.readouterr().out
    assert "passed 9/9" in out
    assert out.count("ok") >= 9


def test_verify_rejects_bad_prime(capsys):
    assert main(["verify-theorem1", "--p", "6"]) == 2
    assert "error" in capsys.readouterr().err


def test_count_fermat(tmp_path, capsys):
    path = _surface_file(tmp_path, "f.json", p=7, coeffs=FERMAT)
    assert main(["count", "--surface", path]) == 0
    assert capsys.readouterr().out.strip() == "27"
    path5 = _surface_file(tmp_path, "f5.json", p=5, coeffs=FERMAT, N=6)
    assert main(["count", "--surface", path5]) == 0
    assert capsys.readouterr().out.strip() == "3"


def test_count_p_flag(tmp_path, capsys):
    path = _surface_file(tmp_path, "f.json", coeffs=FERMAT)
    assert main(["count", "--surface", path, "--p", "7"]) == 0
    assert capsys.readouterr().out.strip() == "27"
    both = _surface_file(tmp_path, "g.json", p=7, coeffs=FERMAT)
    assert main(["count", "--surface", both, "--p", "5"]) == 2
    assert "disagrees" in capsys.readouterr().err


def test_count_bad_inputs(tmp_path, capsys):
    missing = str(tmp_path / "nope.json")
    assert main(["count", "--surface", missing]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["count", "--surface", str(bad)]) == 2
    nop = _surface_file(tmp_path, "nop.json", coeffs=FERMAT)
    assert main(["count", "--surface", nop]) == 2
    capsys.readouterr()


def test_count_singular_surface(tmp_path, capsys):
    path = _surface_file(tmp_path, "cone.json", p=7, coeffs=CONE)
    assert main(["count", "--surface", path]) == 4
    assert "solver failure" in capsys.readouterr().err


def test_padic_command_writes_files(tmp_path, capsys):
    out = str(tmp_path / "haar.csv")
    rc = main(["padic", "--measure", "haar", "--p", "5", "--precision", "3",
               "--samples", "25", "--seed", "3", "--out", out])
    assert rc == 0
    text = capsys.readouterr().out
    assert "measure haar" in text and "mean" in text
    assert (tmp_path / "haar.csv").read_text().startswith("count,probability")
    meta = json.loads((tmp_path / "haar.csv.meta.json").read_text())
    assert meta["measure"] == "haar" and meta["samples"] == 25


def test_padic_command_rejects_bad_prime(capsys):
    assert main(["padic", "--measure", "haar", "--p", "9",
                 "--samples", "5"]) == 2
    assert "error" in capsys.readouterr().err


def test_real_command_and_plot(tmp_path, capsys):
    out = str(tmp_path / "curve.csv")
    rc = main(["real", "--lambda-grid", "0.2:0.4:0.2", "--samples", "15",
               "--seed", "4", "--out", out])
    assert rc == 0
    assert "lambda=0.20000" in capsys.readouterr().out
    svg = str(tmp_path / "curve.svg")
    assert main(["plot-curve", "--in", out, "--out", svg]) == 0
    capsys.readouterr()
    body = (tmp_path / "curve.svg").read_text()
    assert body.startswith("<svg") and "<polyline" in body
    assert body.count("<circle") == 2


def test_plot_rejects_wrong_csv(tmp_path, capsys):
    wrong = tmp_path / "dist.csv"
    wrong.write_text("count,probability\n3,1.0\n")
    assert main(["plot-curve", "--in", str(wrong), "--out",
                 str(tmp_path / "x.svg")]) == 2
    assert main(["plot-curve", "--in", str(tmp_path / "absent.csv"), "--out",
                 str(tmp_path / "y.svg")]) == 2
    capsys.readouterr()


def test_lambda_grid_parsing():
    assert _lambda_grid("0.1:0.3:0.1") == [0.1, 0.2, 0.3]
    assert _lambda_grid("0.5:0.5:1") == [0.5]
    import argparse

    with pytest.raises(argparse.ArgumentTypeError):
        _lambda_grid("0.1:0.3")
    with pytest.raises(argparse.ArgumentTypeError):
        _lambda_grid("0.3:0.1:0.1")
    with pytest.raises(argparse.ArgumentTypeError):
        _lambda_grid("0.1:0.3:0")


def test_real_requires_exactly_one_lambda_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["real", "--samples", "5"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["real", "--lambda", "0.3", "--lambda-grid", "0.1:0.2:0.1"])
    assert exc.value.code == 2
    capsys.readouterr()
