import numpy as np
import pytest

from hvdw import _kernels_py, kernels

compiled = pytest.importorskip("hvdw._kernels")


@pytest.fixture
def data():
    rng = np.random.default_rng(7)
    gaps = rng.uniform(-0.2, 30.0, 150)
    gaps[np.abs(gaps) < 1e-3] = 0.5
    return gaps, rng.normal(size=(150, 18)), np.geomspace(1e-5, 1e3, 64)


def test_backend_selected():
    assert kernels.BACKEND == "cython"


def test_imag_axis_equivalence(data):
    g, w, u = data
    np.testing.assert_allclose(compiled.imag_axis_sum(g, w, u), _kernels_py.imag_axis_sum(g, w, u), rtol=1e-12, atol=1e-12)


def test_real_axis_equivalence(data):
    g, w, _ = data
    om = np.linspace(0, 0.1, 17) + 1e-4
    np.testing.assert_allclose(compiled.real_axis_sum(g, w, om), _kernels_py.real_axis_sum(g, w, om), rtol=1e-11, atol=1e-9)


def test_pair_sum_equivalence(data):
    g, w, _ = data
    ga, gb = np.abs(g) + 0.1, np.abs(g[:40]) + 0.2
    np.testing.assert_allclose(
        compiled.pair_sum(ga, w, gb, w[:40, :5]), _kernels_py.pair_sum(ga, w, gb, w[:40, :5]), rtol=1e-12, atol=1e-12
    )


def test_pure_python_switch(monkeypatch):
    import importlib

    monkeypatch.setenv("HVDW_PURE_PYTHON", "1")
    try:
        mod = importlib.reload(kernels)
        assert mod.BACKEND == "python"
        assert mod.pair_sum is _kernels_py.pair_sum
    finally:
        monkeypatch.delenv("HVDW_PURE_PYTHON")
        importlib.reload(kernels)
