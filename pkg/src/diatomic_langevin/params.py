"""Physical parameters and derived constants.

Units throughout are pN, nm and s: mass in pN*s^2/nm, friction in pN*s/nm,
thermal energy in pN*nm, spring constants in pN/nm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalParams:
    """Mass, friction, thermal energy and ideal bond length of the molecule."""

    mass: float
    friction: float
    thermal_energy: float
    bond_length: float

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass!r}")
        if not self.friction >= 0:
            raise ValueError(f"friction must be nonnegative, got {self.friction!r}")
        if not self.thermal_energy >= 0:
            raise ValueError(f"thermal_energy must be nonnegative, got {self.thermal_energy!r}")
        if not self.bond_length >= 0:
            raise ValueError(f"bond_length must be nonnegative, got {self.bond_length!r}")


@dataclass(frozen=True)
class NoiseAmplitude:
    """Amplitude of the random force; ``epsilon * dW`` has momentum units."""

    epsilon: float

    @property
    def squared(self) -> float:
        return self.epsilon * self.epsilon


def stokes_friction(viscosity: float, radius: float) -> float:
    """Friction coefficient of a sphere of ``radius`` in a fluid of ``viscosity``."""
    if viscosity < 0 or radius < 0:
        raise ValueError("viscosity and radius must be nonnegative")
    return 6.0 * math.pi * viscosity * radius


def noise_amplitude(p: PhysicalParams) -> NoiseAmplitude:
    """Fluctuation-dissipation amplitude with ``epsilon**2 = 2 * friction * mass * kT``.

    Note the mass factor: as a consequence the small-step stationary velocity
    variance is ``kT`` rather than ``kT / m``.
    """
    return NoiseAmplitude(math.sqrt(2.0 * p.friction * p.mass * p.thermal_energy))


# N2 in water at room temperature.
N2_MASS = 1.16265e-23
N2_FRICTION = 2.9229e-9
N2_THERMAL_ENERGY = 4.1
N2_SPRING_CONSTANT = 2.24e6


@dataclass(frozen=True)
class Preset:
    params: PhysicalParams
    spring_constant: float


def paper_n2_params(bond_length: float = 0.0) -> Preset:
    """Parameter set for N2 in water.

    No bond length is supplied with these values, so it is left to the caller;
    ``bond_length=0`` makes ``x`` the bond-stretch fluctuation itself.
    """
    params = PhysicalParams(
        mass=N2_MASS,
        friction=N2_FRICTION,
        thermal_energy=N2_THERMAL_ENERGY,
        bond_length=bond_length,
    )
    return Preset(params, N2_SPRING_CONSTANT)


N2_WATER = paper_n2_params()
