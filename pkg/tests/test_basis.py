import numpy as np
import pytest

from hvdw import atomic, basis, quadrature
from hvdw.atomic import BoundState, SelectionRuleError


def test_matrices_match_quadrature():
    l, size, scale = 2, 12, 0.3
    S, H = basis.sturmian_matrices(l, size, scale)
    r, w = quadrature.radial_grid(400.0, order=40)
    chi = basis.sturmian_values(l, size, scale, r)
    np.testing.assert_allclose((chi * w) @ chi.T, S, atol=1e-12)
    np.testing.assert_allclose((chi * (w / r)) @ chi.T, np.eye(size), atol=1e-12)


@pytest.mark.parametrize("n,l", [(1, 0), (2, 1), (12, 2), (12, 3)])
def test_scale_one_over_n_reproduces_level(n, l):
    b = basis.build_channel_basis(l, 40, 1.0 / n)
    assert np.min(np.abs(b.energies - atomic.bound_energy(n))) < 1e-12


def test_pseudo_states_orthonormal_and_spectrum_has_continuum():
    b = basis.build_channel_basis(1, 60, 0.5)
    T = b.transform
    np.testing.assert_allclose(T.T @ b.overlap() @ T, np.eye(60), atol=1e-10)
    assert b.continuum_count > 0
    assert np.all(np.diff(b.energies) > 0)


def test_dipole_vector_against_exact_elements():
    dv = basis.dipole_vector(BoundState(1, 0), basis.build_channel_basis(1, 60, 0.5))
    k = np.argmin(np.abs(dv.gaps - (atomic.bound_energy(2) + 0.5)))
    assert abs(dv.amplitudes[k]) == pytest.approx(atomic.radial_dipole(1, 0, 2, 1), rel=1e-12)
    with pytest.raises(SelectionRuleError):
        basis.dipole_vector(BoundState(3, 2), basis.build_channel_basis(2, 10, 0.3))


def test_closure_sum_rule():
    # sum_v <1s|r|v>^2 = <1s|r^2|1s> = 3
    dv = basis.dipole_vector(BoundState(1, 0), basis.build_channel_basis(1, 80, 1.0))
    assert np.sum(dv.amplitudes**2) == pytest.approx(3.0, rel=1e-12)


def test_bad_specifications():
    with pytest.raises(basis.BasisError):
        basis.build_channel_basis(3, 3, 0.5)
    with pytest.raises(basis.BasisError):
        basis.build_channel_basis(1, 10, -1.0)


def test_memoised_instances():
    assert basis.build_channel_basis(1, 30, 0.25) is basis.build_channel_basis(1, 30, 0.25)


def test_disk_cache_roundtrip(tmp_path, monkeypatch):
    basis.clear_cache()
    monkeypatch.setenv(basis.CACHE_ENV, str(tmp_path))
    first = basis.build_channel_basis(2, 25, 0.2)
    files = list(tmp_path.iterdir())
    assert len(files) == 1 and files[0].read_bytes()[:8] == basis.CACHE_MAGIC
    basis.clear_cache()
    second = basis.build_channel_basis(2, 25, 0.2)
    assert second is not first
    np.testing.assert_array_equal(first.energies, second.energies)
    np.testing.assert_array_equal(first.transform, second.transform)
    basis.clear_cache()


def test_truncated_cache_rejected(tmp_path):
    b = basis.build_channel_basis(1, 10, 0.5)
    path = tmp_path / "x.bin"
    basis.write_cache(b, path)
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(basis.BasisError, match="truncated"):
        basis.read_cache(path)
    path.write_bytes(b"NOTMAGIC" + bytes(100))
    with pytest.raises(basis.BasisError):
        basis.read_cache(path)


def test_convergence_scan():
    rows = basis.convergence_scan(lambda size: 1.0 / size, [10, 20, 40])
    assert [r[0] for r in rows] == [10, 20, 40]
    assert np.isnan(rows[0][2]) and rows[2][2] == pytest.approx(1 / 40 - 1 / 20)
    with pytest.raises(ValueError):
        basis.convergence_scan(lambda s: s, [20, 10])
