import json
import math

import numpy as np
import pytest

import morrey


def test_grid_properties():
    g = morrey.Grid(2, 16, 2.0)
    assert (g.n, g.N, g.L) == (2, 16, 2.0)
    assert g.h == pytest.approx(0.125)
    assert g.coordinates()[0] == pytest.approx(-1.0)
    assert g.dyadic_radii()[0] == pytest.approx(2 * g.h)


def test_semigroup_on_plane_wave():
    g = morrey.Grid(1, 64, 2 * math.pi)
    x = g.coordinates()
    f = np.exp(3j * x)
    out = morrey.apply_P(g, f, "heat", 0.1)
    assert np.allclose(out, math.exp(-0.9) * f, atol=1e-12)
    q = morrey.apply_Q(g, f, "poisson", 0.5)
    assert np.allclose(q, 1.5 * math.exp(-1.5) * f, atol=1e-12)


def test_constants_have_zero_seminorms():
    g = morrey.Grid(1, 128, 1.0)
    c = np.full(128, 2.5 + 0j)
    assert morrey.classical_seminorm(g, c, 2.0, 0.5, stride=4)["value"] < 1e-12
    assert morrey.semigroup_seminorm(g, c, 2.0, 0.5, "poisson", stride=4)["value"] < 1e-12
    assert morrey.carleson_tent_norm(g, c, 0.5, stride=4, nodes=64)["value"] < 1e-12


def test_square_function_ratio():
    g = morrey.Grid(1, 128, 2 * math.pi)
    f = morrey.trig_field(g, 20, 3)
    assert morrey.g_function_ratio(g, f, "heat", t_min=1e-6, t_max=1e3) == pytest.approx(0.5, abs=1e-4)


def test_calderon():
    assert morrey.calderon_constant(1) == pytest.approx(7.2)
    assert morrey.calderon_integral(2, 1e-4, 30.0, 2048) == pytest.approx(5 / 72, rel=1e-6)
    g = morrey.Grid(1, 128, 2 * math.pi)
    f = morrey.trig_field(g, 30, 5)
    back = morrey.calderon_reproduce(g, f, "poisson", 512)
    assert np.linalg.norm(back - f) <= 1e-3 * np.linalg.norm(f)
    with pytest.raises(morrey.TruncationError):
        morrey.calderon_reproduce(g, f, "heat", 64, t_min=1e-2, t_max=1.0)


def test_atoms_and_pairing():
    g = morrey.Grid(1, 128, 2.0)
    profile = g.coordinates().astype(complex)
    atom, checks = morrey.make_atom(g, profile, g.origin, 0.25, 2.0, 0.5)
    assert checks["ok"]
    assert abs(morrey.pair(g, np.ones(128, complex), atom)) < 1e-12
    with pytest.raises(morrey.DegenerateAtom):
        morrey.make_atom(g, np.ones(128, complex), g.origin, 0.25, 2.0, 0.5)


def test_input_errors():
    g = morrey.Grid(1, 16, 1.0)
    with pytest.raises(ValueError):
        morrey.classical_seminorm(g, np.zeros(15, complex), 2.0, 0.5)
    with pytest.raises(morrey.ParameterError):
        morrey.classical_seminorm(g, np.zeros(16, complex), 2.0, 1.0)


def test_run_command(tmp_path):
    cfg = json.dumps({"grid": {"n": 1, "N": 64}, "time": {"K": 128}})
    code, log = morrey.run_command("selftest", cfg, str(tmp_path / "out"), 2)
    assert code == 0
    report = json.loads((tmp_path / "out" / "selftest.json").read_text())
    assert report["schema"] == "morrey.selftest/1" and report["passed"]
    code, _ = morrey.run_command("norms", json.dumps({"grid": {"N": 100}}), str(tmp_path / "bad"))
    assert code == 2
    assert not (tmp_path / "bad").exists()
