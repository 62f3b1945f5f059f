import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st
from sympy.physics.hydrogen import R_nl
from sympy.physics.quantum.cg import CG
from sympy.physics.wigner import gaunt

from hvdw import atomic
from hvdw.atomic import AveragingScheme, BoundState, SelectionRuleError


def exact_radial_dipole(n1, l1, n2, l2):
    r = sp.symbols("r", positive=True)
    return float(sp.integrate(R_nl(n1, l1, r, 1) * R_nl(n2, l2, r, 1) * r**3, (r, 0, sp.oo)))


@pytest.mark.parametrize("n1,l1,n2,l2", [(1, 0, 2, 1), (2, 1, 3, 2), (3, 2, 4, 1), (4, 3, 5, 2), (3, 1, 3, 2)])
def test_radial_dipole_matches_symbolic(n1, l1, n2, l2):
    assert atomic.radial_dipole(n1, l1, n2, l2) == pytest.approx(exact_radial_dipole(n1, l1, n2, l2), rel=1e-12)


def test_radial_dipole_closed_forms():
    assert atomic.radial_dipole(2, 1, 1, 0) == pytest.approx(2**7 * np.sqrt(6) / 3**5, rel=1e-13)
    # within one n manifold: |<n l-1| r |n l>| = (3/2) n sqrt(n^2 - l^2)
    for n, l in [(12, 2), (12, 3), (8, 2)]:
        assert abs(atomic.radial_dipole(n, l - 1, n, l)) == pytest.approx(1.5 * n * np.sqrt(n * n - l * l), rel=1e-12)


@pytest.mark.parametrize("n,l", [(1, 0), (3, 2), (12, 2), (12, 3)])
def test_radial_function_normalised(n, l):
    from hvdw import quadrature

    value = quadrature.integrate_adaptive(lambda r: (r * atomic.radial_function(n, l, r)) ** 2, 0, atomic.radial_extent(n))
    assert value == pytest.approx(1.0, rel=1e-13)


def test_selection_rule():
    with pytest.raises(SelectionRuleError):
        atomic.radial_dipole(3, 2, 2, 0)
    assert atomic.angular_dipole_factor(2, 0, 0, 0, "z") == 0.0


@pytest.mark.parametrize("kwargs", [dict(n=0, l=0), dict(n=2, l=2), dict(n=3, l=1, m=2)])
def test_bound_state_validation(kwargs):
    with pytest.raises(ValueError):
        BoundState(**kwargs)


def test_labels_and_energies():
    s = BoundState(12, 2)
    assert s.label == "12D"
    assert s.energy == -0.5 / 144
    assert atomic.transition_gap(BoundState(2, 1), s) == pytest.approx(-0.5 / 4 + 0.5 / 144)


def _oracle_spherical(l, m, lp, mp, q):
    # <l m| rhat_q |l' m'> = sqrt(4 pi / 3) int Y*_lm Y_1q Y_l'm'
    # gaunt integrates Y_l1m1 Y_l2m2 Y_l3m3; Y*_lm = (-1)^m Y_l,-m
    return float(sp.sqrt(4 * sp.pi / 3) * (-1) ** m * gaunt(l, 1, lp, -m, q, mp))


@pytest.mark.parametrize("l,lp", [(0, 1), (1, 2), (2, 1), (2, 3), (3, 2)])
def test_spherical_factor_matches_gaunt_oracle(l, lp):
    for m in range(-l, l + 1):
        for mp in range(-lp, lp + 1):
            for q in (-1, 0, 1):
                assert atomic.spherical_dipole_factor(l, m, lp, mp, q) == pytest.approx(
                    _oracle_spherical(l, m, lp, mp, q), abs=1e-14
                )


def test_cartesian_components_from_spherical_harmonics():
    # <1 m| x |0 0> etc. from explicit integrals over the sphere
    theta, phi = sp.symbols("theta phi", real=True)
    comps = {"x": sp.sin(theta) * sp.cos(phi), "y": sp.sin(theta) * sp.sin(phi), "z": sp.cos(theta)}
    for m in (-1, 0, 1):
        for name, expr in comps.items():
            integrand = sp.conjugate(sp.Ynm(1, m, theta, phi).expand(func=True)) * expr * sp.Ynm(0, 0, theta, phi).expand(func=True)
            exact = complex(sp.integrate(sp.integrate(integrand * sp.sin(theta), (phi, 0, 2 * sp.pi)), (theta, 0, sp.pi)))
            assert atomic.angular_dipole_factor(1, m, 0, 0, name) == pytest.approx(exact, abs=1e-14)


@pytest.mark.parametrize("l,lp", [(2, 1), (2, 3), (0, 1)])
def test_direct_angular_tensor_average_is_isotropic(l, lp):
    avg = sum(atomic.direct_angular_tensor(l, m, lp) for m in range(-l, l + 1)) / (2 * l + 1)
    weight = (max(l, lp)) / (2 * l + 1) / 3
    np.testing.assert_allclose(avg, weight * np.eye(3), atol=1e-15)


def test_fine_structure_weights_equal_projection_average():
    # sum over J, mu of |<l ml, 1/2 ms | J mu>|^2 / (2(2l+1)) gives 1/(2l+1) per ml
    for l in (1, 2, 3):
        half = sp.Rational(1, 2)
        for ml in range(-l, l + 1):
            total = 0
            for J in (l - half, l + half):
                for ms in (-half, half):
                    total += CG(l, ml, half, ms, J, ml + ms).doit() ** 2
            assert sp.simplify(total / (2 * (2 * l + 1))) == sp.Rational(1, 2 * l + 1)
        fs = atomic.averaging_weights(AveragingScheme.FINE_STRUCTURE, l)
        assert fs == atomic.averaging_weights(AveragingScheme.PROJECTION, l)
        assert sum(w for _, w in fs) == pytest.approx(1.0)


def test_single_projection_weights():
    assert atomic.averaging_weights("single-projection", 2, 1) == [(1, 1.0)]
    with pytest.raises(ValueError):
        atomic.averaging_weights("single-projection", 2, 3)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 4), st.integers(-4, 4), st.integers(-5, 5), st.sampled_from([-1, 0, 1]))
def test_spherical_factor_hermiticity(l, m, mp, q):
    lp = l + 1
    if abs(m) > l or abs(mp) > lp:
        return
    lhs = atomic.spherical_dipole_factor(l, m, lp, mp, q)
    # rhat_q^dagger = (-1)^q rhat_{-q}
    rhs = (-1) ** q * atomic.spherical_dipole_factor(lp, mp, l, m, -q)
    assert lhs == pytest.approx(rhs, abs=1e-14)
