import json
import math

import numpy as np
import pytest

import fraclog


def test_special_functions():
    assert abs(fraclog.tau0(0.5) + 0.5) < 1e-4
    assert fraclog.c_tau(-0.9, 0.5) > 0
    assert fraclog.admissible_p(2.5, 0.5)
    assert not fraclog.admissible_p(2.0, 0.5)
    assert fraclog.blowup_exponent(2.5, 0.5) == pytest.approx(-2 / 3)
    assert fraclog.picone_form(2, 1, 1, 2) == pytest.approx(4.5)
    assert fraclog.remark11_gap(3, 0.5) == pytest.approx(1.0)


def test_errors_carry_their_kind():
    with pytest.raises(fraclog.FraclogError) as info:
        fraclog.blowup_exponent(2.0, 0.5)
    assert info.value.args[0] == "domain error"


def test_operator_on_constants():
    g = fraclog.build_grid(1.0, 0.02)
    values = np.full(len(g), 2.0)
    out = fraclog.apply_fractional_laplacian(values, g, 0.5, fraclog.ConstantExterior(2.0))
    assert out.shape == (len(g.interior),)
    assert np.max(np.abs(out)) < 1e-9


def test_eigen_and_solve():
    g = fraclog.build_grid(1.0, 0.02)
    mu1, phi = fraclog.first_eigenpair(g, 0.5)
    assert 7.0 < mu1 < 7.4
    assert phi.max() == pytest.approx(1.0)

    spec = fraclog.ProblemSpec(g, mu=50.0)
    newton = fraclog.solve(spec)
    mono = fraclog.solve(spec, "monotone_super")
    assert newton["converged"] and mono["converged"]
    assert np.max(np.abs(newton["solution"] - mono["solution"])) < 1e-6
    assert 0.9 < newton["solution"][g.center_index()] <= 1.0


def test_blowup_rate():
    g = fraclog.build_grid(1.0, 0.004)
    rep = fraclog.solve_blowup(fraclog.ProblemSpec(g))
    slope, _, samples = fraclog.fit_boundary_rate(rep["solution"], g, 0.016, 0.125)
    assert samples > 5
    assert slope == pytest.approx(-2 / 3, rel=0.1)


def test_squeeze_rows():
    rows = fraclog.run_squeeze(16.0, 2.5, 0.5, [4.0], 0.02)
    (row,) = rows
    assert row["v_center"] <= row["target"] <= row["w_center"]
    assert row["target"] == pytest.approx(16 ** (1 / 1.5))


def test_config_and_run(tmp_path):
    text, errors = fraclog.parse_config(["ctau", "points=3"])
    assert errors == [] and "points = 3" in text
    text, errors = fraclog.parse_config(["blowup", "p=2"])
    assert text is None and "admissible window" in errors[0]

    outputs = fraclog.run(["ctau", "points=3"], str(tmp_path))
    csv = (tmp_path / outputs[0]).read_text()
    assert csv.splitlines()[0] == "tau,c_tau"
    assert len(csv.splitlines()) == 4
    manifest = json.loads((tmp_path / outputs[-1]).read_text())
    assert manifest["status"] == "ok"

    with pytest.raises(fraclog.FraclogError):
        fraclog.run(["blowup", "p=2"], str(tmp_path / "bad"))
    failed = list((tmp_path / "bad").glob("blowup_*.json"))
    assert len(failed) == 1
    assert json.loads(failed[0].read_text())["status"] == "failed"
