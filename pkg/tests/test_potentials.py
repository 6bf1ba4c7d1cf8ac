import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from diatomic_langevin import Cubic, Harmonic, Morse, energy, force

POTENTIALS = [
    Harmonic(2.24e6, 0.11),
    Harmonic(2.0, 1.0),
    Morse(945.0, 26.8, 0.11),
    Morse(2.0, 1.5, 1.0),
    Cubic(2.24e6, 2.5, 0.11),
    Cubic(3.0, -0.7, 1.0),
]


def fd_force(p, x):
    h = 1e-7 * np.maximum(1.0, np.abs(x))
    return -(energy(p, x + h) - energy(p, x - h)) / (2 * h)


def test_harmonic_energy_values():
    assert energy(Harmonic(2.24e6, 0.3), 0.3) == 0.0
    assert energy(Harmonic(2.0, 1.0), 2.0) == 1.0


def test_morse_well_bottom():
    assert energy(Morse(4.0, 2.0, 0.5), 0.5) == 0.0


@pytest.mark.parametrize("p", POTENTIALS)
def test_force_zero_at_bond_length(p):
    assert force(p, p.b) == 0.0


def test_harmonic_force_value():
    assert force(Harmonic(2.24e6, 0.0), 1e-3) == pytest.approx(-2240.0, rel=1e-15)


@pytest.mark.parametrize("p", POTENTIALS)
def test_force_matches_finite_difference(p):
    # away from the zero of the force the relative check is meaningful
    scale = 1.0 / getattr(p, "beta", 10.0)
    d = np.concatenate([-np.geomspace(1e-2, 1.0, 50), np.geomspace(1e-2, 1.0, 50)]) * scale
    x = p.b + d
    f = force(p, x)
    mask = np.abs(f) > 1e-6 * np.abs(f).max()
    np.testing.assert_allclose(f[mask], fd_force(p, x)[mask], rtol=1e-5)


@pytest.mark.parametrize("p", [p for p in POTENTIALS if not isinstance(p, Cubic)])
def test_minimum_at_bond_length(p):
    for delta in np.geomspace(1e-4, 0.5, 30):
        assert energy(p, p.b + delta) > energy(p, p.b)
        assert energy(p, p.b - delta) > energy(p, p.b)


# dyadic offsets keep b +/- delta exact, so symmetry holds bit for bit
@given(st.integers(min_value=-(10 << 20), max_value=10 << 20))
def test_harmonic_symmetric(n):
    delta = n / 2**20
    p = Harmonic(3.7, 2.0)
    assert energy(p, p.b + delta) == energy(p, p.b - delta)


@pytest.mark.parametrize("p", [Morse(945.0, 26.8, 0.11), Morse(2.0, 1.5, 1.0)])
def test_morse_quadratic_near_minimum(p):
    delta = 1e-3 / p.beta
    assert energy(p, p.b + delta) == pytest.approx(p.D * p.beta**2 * delta**2, rel=1e-2)


def test_vectorised():
    p = Morse(2.0, 1.5, 1.0)
    x = np.linspace(0.5, 2.0, 7)
    np.testing.assert_array_equal(force(p, x), [force(p, xi) for xi in x])


@pytest.mark.parametrize("cls,args", [
    (Harmonic, (0.0,)),
    (Harmonic, (1.0, -1.0)),
    (Morse, (0.0, 1.0)),
    (Morse, (1.0, 0.0)),
    (Cubic, (-1.0, 1.0)),
])
def test_invalid(cls, args):
    with pytest.raises(ValueError):
        cls(*args)
