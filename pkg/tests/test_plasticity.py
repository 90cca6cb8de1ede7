import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from revplast.errors import ApexSingularityError
from revplast.plasticity import (DruckerPrager, flow_direction,
                                 potential_direction, stress_invariants,
                                 yield_value)
from revplast.tensors import SQRT2

VM = DruckerPrager(friction_angle=0.0, shear_strength=0.12)


def test_invariants_hydrostatic():
    mean, eq = stress_invariants(np.array([2.5, 2.5, 2.5, 0, 0, 0]))
    assert mean == pytest.approx(2.5)
    assert eq == pytest.approx(0.0, abs=1e-15)


def test_invariants_uniaxial():
    t = 0.3
    mean, eq = stress_invariants(np.array([0, 0, -t, 0, 0, 0]))
    assert mean == pytest.approx(-t / 3.0)
    assert eq == pytest.approx(t)


def test_invariants_pure_shear():
    s = 0.25
    mean, eq = stress_invariants(np.array([0, 0, 0, 0, 0, SQRT2 * s]))
    assert mean == pytest.approx(0.0)
    assert eq == pytest.approx(np.sqrt(3.0) * s)


def test_von_mises_uniaxial_at_yield():
    sig = np.array([0, 0, -0.12, 0, 0, 0])
    assert yield_value(VM, sig) == pytest.approx(0.0, abs=1e-15)
    assert yield_value(VM, -sig) == pytest.approx(0.0, abs=1e-15)


def test_yield_at_zero_stress():
    assert yield_value(VM, np.zeros(6)) == pytest.approx(-0.12)


def test_frictional_hydrostatic():
    model = DruckerPrager(friction_angle=np.pi / 6.0, shear_strength=0.12)
    p = 0.8
    sig = p * np.array([1.0, 1, 1, 0, 0, 0])
    assert yield_value(model, sig) == pytest.approx(p * np.tan(np.pi / 6.0) - 0.12)


def test_flow_uniaxial_compression():
    sig = np.array([0, 0, -0.2, 0, 0, 0])
    n = flow_direction(VM, sig)
    assert n == pytest.approx([0.5, 0.5, -1.0, 0, 0, 0])
    assert n[:3].sum() == pytest.approx(0.0, abs=1e-15)


def test_flow_dilatancy_trace():
    model = DruckerPrager(friction_angle=0.3, shear_strength=0.12)
    sig = np.array([0.1, -0.05, 0.02, 0.03, 0.0, 0.01])
    n = flow_direction(model, sig)
    assert n[:3].sum() == pytest.approx(np.tan(0.3), rel=1e-13)


@pytest.mark.parametrize("friction", [0.0, 0.3])
def test_flow_matches_finite_difference(friction, rng):
    # associated flow: direction equals the yield-function gradient
    model = DruckerPrager(friction_angle=friction, shear_strength=0.12)
    step = 1e-6 * model.shear_strength
    for _ in range(100):
        sig = rng.normal(size=6) * 0.2
        if stress_invariants(sig)[1] < 1e-3:
            continue
        n = flow_direction(model, sig)
        grad = np.empty(6)
        for k in range(6):
            up, dn = sig.copy(), sig.copy()
            up[k] += step
            dn[k] -= step
            grad[k] = (yield_value(model, up) - yield_value(model, dn)) / (2 * step)
        assert np.abs(n - grad).max() < 1e-6


@given(st.floats(min_value=1e-3, max_value=1e3),
       st.lists(st.floats(min_value=-10, max_value=10), min_size=6, max_size=6))
def test_yield_positive_homogeneity(c, entries):
    sig = np.array(entries)
    scaled_model = DruckerPrager(friction_angle=0.2, shear_strength=c * 0.12)
    model = DruckerPrager(friction_angle=0.2, shear_strength=0.12)
    left = yield_value(scaled_model, c * sig)
    right = c * yield_value(model, sig)
    assert left == pytest.approx(right, rel=1e-12, abs=1e-12 * c)


@given(st.floats(min_value=1e-3, max_value=1e3))
def test_flow_scale_invariance(c):
    sig = np.array([0.3, -0.1, 0.05, 0.07, -0.02, 0.01])
    n1 = flow_direction(VM, sig)
    n2 = flow_direction(VM, c * sig)
    assert np.abs(n1 - n2).max() < 1e-12


def test_apex_error():
    with pytest.raises(ApexSingularityError):
        flow_direction(VM, 0.5 * np.array([1.0, 1, 1, 0, 0, 0]))


def test_model_validation():
    with pytest.raises(ValueError):
        DruckerPrager(friction_angle=0.0, shear_strength=0.0)
    with pytest.raises(ValueError):
        DruckerPrager(friction_angle=-0.1, shear_strength=0.12)
    with pytest.raises(ValueError):
        DruckerPrager(friction_angle=1.8, shear_strength=0.12)


def test_non_associated_potential_accepted():
    model = DruckerPrager(friction_angle=0.4, shear_strength=0.12, dilation_angle=0.1)
    assert model.potential_angle == pytest.approx(0.1)
    sig = np.array([0.1, -0.05, 0.02, 0.03, 0.0, 0.01])
    n_yield = flow_direction(model, sig)
    n_pot = potential_direction(model, sig)
    assert n_pot[:3].sum() == pytest.approx(np.tan(0.1), rel=1e-12)
    assert not np.allclose(n_yield, n_pot)
