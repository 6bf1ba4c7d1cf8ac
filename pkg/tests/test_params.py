import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from diatomic_langevin import PhysicalParams, noise_amplitude, paper_n2_params, stokes_friction

positive = st.floats(min_value=1e-30, max_value=1e30, allow_nan=False, allow_infinity=False)


def test_stokes_friction_zero_inputs():
    assert stokes_friction(0.0, 5.0) == 0.0
    assert stokes_friction(3.0, 0.0) == 0.0


def test_stokes_friction_unit():
    # 6*pi to 50 digits via mpmath
    assert stokes_friction(1.0, 1.0) == pytest.approx(18.849555921538759430775860299677, rel=1e-15)


@given(positive, positive, st.floats(min_value=0.0, max_value=1e3))
def test_stokes_friction_linear(gamma, radius, a):
    assert stokes_friction(a * gamma, radius) == pytest.approx(a * stokes_friction(gamma, radius), rel=1e-12)


def test_stokes_friction_rejects_negative():
    with pytest.raises(ValueError):
        stokes_friction(-1.0, 1.0)


def test_noise_amplitude_degenerate():
    assert noise_amplitude(PhysicalParams(1.0, 0.0, 4.1, 0.0)).epsilon == 0.0
    assert noise_amplitude(PhysicalParams(1.0, 2.0, 0.0, 0.0)).epsilon == 0.0


def test_noise_amplitude_n2(n2):
    # sqrt(2 * 2.9229e-9 * 1.16265e-23 * 4.1) at 50 digits
    eps = noise_amplitude(n2)
    assert eps.epsilon == pytest.approx(5.2788388322622618215909966937342e-16, rel=1e-14)
    assert eps.squared == pytest.approx(2.7866139417e-31, rel=1e-14)


@given(positive, positive, st.floats(min_value=0.0, max_value=1e6))
def test_fluctuation_dissipation_roundtrip(mass, friction, kT):
    p = PhysicalParams(mass, friction, kT, 0.0)
    prod = 2 * friction * mass
    # stay inside the normal float range for the full product
    assume(1e-280 < prod < 1e280 and (kT == 0 or 1e-280 < prod * kT < 1e280))
    assert noise_amplitude(p).squared / prod == pytest.approx(kT, rel=1e-12, abs=1e-300)


def test_paper_preset_values():
    preset = paper_n2_params()
    assert preset.params.mass == 1.16265e-23
    assert preset.params.friction == 2.9229e-9
    assert preset.params.thermal_energy == 4.1
    assert preset.spring_constant == 2240000.0
    assert preset.params.bond_length == 0.0
    assert paper_n2_params(0.11).params.bond_length == 0.11


@pytest.mark.parametrize("kwargs", [
    dict(mass=0.0, friction=1.0, thermal_energy=1.0, bond_length=0.0),
    dict(mass=1.0, friction=-1.0, thermal_energy=1.0, bond_length=0.0),
    dict(mass=1.0, friction=1.0, thermal_energy=-1.0, bond_length=0.0),
    dict(mass=1.0, friction=1.0, thermal_energy=1.0, bond_length=-0.1),
    dict(mass=math.nan, friction=1.0, thermal_energy=1.0, bond_length=0.0),
])
def test_invalid_params(kwargs):
    with pytest.raises(ValueError):
        PhysicalParams(**kwargs)
