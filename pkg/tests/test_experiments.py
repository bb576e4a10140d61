import os
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from isotangent.exceptions import InputError
from isotangent.experiments import (
    ScenarioConfig,
    ScenarioKind,
    domination_summary,
    generate_scenario,
    jordan_radius,
    read_csv,
    run_ensemble,
    run_figure,
    run_hermitian_block_figure,
    run_jordan_figure,
    run_residual_figure,
)
from isotangent.linalg import spectral_gaps
from isotangent.svgplot import render_csv


def test_defaults():
    cfg = ScenarioConfig.default("unif")
    assert (cfg.n, cfg.norm_target, cfg.t) == (200, 1e-3, 1.0)
    assert ScenarioConfig.default("sqr").norm_target == 0.3
    assert ScenarioConfig.default("herm-block").norm_target == 1e-2
    assert ScenarioConfig.default("jordan").n == 100


@pytest.mark.parametrize("kwargs", [{"n": 1}, {"norm_target": 0.0}, {"seed": -1}, {"t": -1.0}])
def test_config_validation(kwargs):
    with pytest.raises(InputError):
        ScenarioConfig.default("unif", **kwargs)


def test_custom_requires_diag():
    with pytest.raises(InputError):
        ScenarioConfig.default("custom")
    cfg = ScenarioConfig.default("custom", diag=[1.0, 3.0, 4.0])
    assert cfg.n == 3


@pytest.mark.parametrize("kind", list(ScenarioKind))
def test_norm_and_determinism(kind):
    extra = {"diag": np.arange(1.0, 11.0)} if kind is ScenarioKind.CUSTOM else {"n": 12}
    cfg = ScenarioConfig.default(kind, seed=7, **extra)
    a = generate_scenario(cfg)
    b = generate_scenario(cfg)
    assert np.array_equal(a.E, b.E) and np.array_equal(a.B, b.B)
    assert np.linalg.norm(a.E, 2) == pytest.approx(cfg.norm_target, rel=1e-10)
    np.testing.assert_allclose(a.D @ a.B - a.B @ a.D, a.E, atol=1e-15)
    assert not np.diag(a.B).any()
    other = generate_scenario(ScenarioConfig.default(kind, seed=8, **extra))
    assert not np.array_equal(a.E, other.E)


def test_equispaced_rho():
    sc = generate_scenario(ScenarioConfig.default("unif"))
    rho = np.linalg.norm(sc.E, 2) / spectral_gaps(sc.d)
    np.testing.assert_allclose(rho, 1e-3, rtol=1e-12)


def test_square_spaced_top_gap():
    sc = generate_scenario(ScenarioConfig.default("sqr"))
    assert spectral_gaps(sc.d)[-1] == 399
    assert 0.3 / 399 == pytest.approx(7.5e-4, rel=0.01)


def test_hermitian_block_structure():
    sc = generate_scenario(ScenarioConfig.default("herm-block"))
    np.testing.assert_array_equal(sc.d[:100], 1)
    np.testing.assert_array_equal(sc.d[100:], np.arange(2, 102))
    np.testing.assert_allclose(sc.E, sc.E.conj().T, atol=1e-18)
    np.testing.assert_allclose(sc.B, -sc.B.conj().T)
    assert np.isrealobj(sc.B) or not sc.B.imag.any()


def test_residual_figure_files(tmp_path):
    cfg = ScenarioConfig.default("sqrroot", n=40, output_path=str(tmp_path))
    res = run_residual_figure(cfg)
    names = sorted(os.path.basename(p) for p in res.paths)
    assert names == ["cubicsqrroot.csv", "linearsqrroot.csv", "quadraticsqrroot.csv"]
    meta, columns, data = read_csv(res.paths[0])
    assert columns == ("n", "err", "bound", "boundsharp")
    np.testing.assert_array_equal(data[:, 0], np.arange(1, 41))
    for key in ("kind", "n", "norm_target", "seed", "eta_min", "rho_max", "version"):
        assert key in meta
    assert all(good == feasible for good, feasible, _ in domination_summary(res).values())


def test_sqrroot_rho_at_the_top():
    res = run_residual_figure(ScenarioConfig.default("sqrroot"), write=False)
    # gap between sqrt(200) and sqrt(199)
    assert float(res.metadata["rho_max"]) == pytest.approx(1e-3 / (np.sqrt(200) - np.sqrt(199)), rel=1e-9)
    assert float(res.metadata["rho_max"]) == pytest.approx(0.0282, abs=1e-4)


def test_byte_identical_output(tmp_path):
    for sub in ("a", "b"):
        run_figure(ScenarioConfig.default("unif", n=30, seed=3, output_path=str(tmp_path / sub)))
    for name in ("linearequi.csv", "quadraticequi.csv", "cubicequi.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_infeasible_rows_marked(tmp_path):
    diag = np.array([1.0, 1.01, 3.0, 5.0])
    cfg = ScenarioConfig.default("custom", diag=diag, norm_target=0.05, output_path=str(tmp_path))
    res = run_residual_figure(cfg)
    lin = res.tables["linear"]
    assert np.all(lin[:2, 2] == -1)
    assert np.all(lin[2:, 2] > 0)


def test_hermitian_block_figure(tmp_path):
    res = run_hermitian_block_figure(ScenarioConfig.default("herm-block", output_path=str(tmp_path)))
    meta, columns, data = read_csv(res.paths[0])
    assert columns == ("n", "err", "bound")
    assert float(meta["gap"]) == 1.0
    assert float(meta["norm_E"]) == pytest.approx(1e-2, rel=1e-10)
    assert np.all(data[:, 2] < 1e-6) and np.all(data[:, 2] >= data[:, 1])


def test_jordan_figure(tmp_path):
    cfg = ScenarioConfig.default("jordan", output_path=str(tmp_path))
    res = run_jordan_figure(cfg)
    meta, columns, data = read_csv(res.paths[0])
    assert columns == ("real", "imag")
    assert data.shape == (100, 2)
    assert float(meta["radius"]) == pytest.approx(10 ** (-0.06), rel=1e-12)
    assert jordan_radius(cfg) == pytest.approx(0.8710, abs=1e-4)


def test_jordan_zero_perturbation():
    cfg = ScenarioConfig.default("jordan", n=10, t=0.0)
    lam = run_jordan_figure(cfg, write=False).tables["eigenvalues"]
    np.testing.assert_array_equal(lam, 0)


def test_ensemble_subdirectories(tmp_path):
    cfg = ScenarioConfig.default("unif", n=20, seed=5, output_path=str(tmp_path))
    results = run_ensemble(cfg, 3)
    assert [r.metadata["seed"] for r in results] == [5, 6, 7]
    assert (tmp_path / "seed-6" / "linearequi.csv").exists()
    with pytest.raises(InputError):
        run_ensemble(cfg, 0)


def test_ensemble_thread_cap(tmp_path, monkeypatch):
    monkeypatch.setenv("ISOTANGENT_THREADS", "1")
    cfg = ScenarioConfig.default("unif", n=15, output_path=str(tmp_path))
    serial = run_ensemble(cfg, 2, write=False)
    monkeypatch.setenv("ISOTANGENT_THREADS", "4")
    parallel = run_ensemble(cfg, 2, write=False)
    for a, b in zip(serial, parallel):
        np.testing.assert_array_equal(a.tables["cubic"], b.tables["cubic"])


def test_wrong_runner_kind():
    with pytest.raises(InputError):
        run_jordan_figure(ScenarioConfig.default("unif"))
    with pytest.raises(InputError):
        run_residual_figure(ScenarioConfig.default("jordan"))


def test_svg_rendering(tmp_path):
    res = run_figure(ScenarioConfig.default("unif", n=20, output_path=str(tmp_path)))
    jor = run_figure(ScenarioConfig.default("jordan", n=20, output_path=str(tmp_path)))
    for path in res.paths + jor.paths:
        svg = path.replace(".csv", ".svg")
        render_csv(path, svg)
        root = ET.parse(svg).getroot()
        assert root.tag.endswith("svg")
