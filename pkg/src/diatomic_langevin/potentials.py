"""Bond-stretching potentials and their forces.

All functions accept scalars or numpy arrays for ``x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np


@dataclass(frozen=True)
class Harmonic:
    """``V = k_s (x - b)^2 / 2``."""

    k_s: float
    b: float = 0.0

    def __post_init__(self):
        if not self.k_s > 0:
            raise ValueError("k_s must be positive")
        if not self.b >= 0:
            raise ValueError("b must be nonnegative")


@dataclass(frozen=True)
class Morse:
    """``V = D (1 - exp(-beta (x - b)))^2``.

    ``D`` is taken in whatever energy unit the caller uses; it must be
    consistent with pN*nm if mixed with the other parameters.
    """

    D: float
    beta: float
    b: float = 0.0

    def __post_init__(self):
        if not (self.D > 0 and self.beta > 0):
            raise ValueError("D and beta must be positive")
        if not self.b >= 0:
            raise ValueError("b must be nonnegative")


@dataclass(frozen=True)
class Cubic:
    """``V = k_s (x - b)^2 + k_s k_c (x - b)^3`` (GROMACS cubic bond)."""

    k_s: float
    k_c: float
    b: float = 0.0

    def __post_init__(self):
        if not self.k_s > 0:
            raise ValueError("k_s must be positive")
        if not self.b >= 0:
            raise ValueError("b must be nonnegative")


Potential = Union[Harmonic, Morse, Cubic]


def energy(p: Potential, x):
    d = x - p.b
    if isinstance(p, Harmonic):
        return 0.5 * p.k_s * d * d
    if isinstance(p, Morse):
        s = 1.0 - np.exp(-p.beta * d)
        return p.D * s * s
    if isinstance(p, Cubic):
        return p.k_s * d * d + p.k_s * p.k_c * d * d * d
    raise TypeError(f"unknown potential {p!r}")


def force(p: Potential, x):
    """Analytic ``-dV/dx``."""
    d = x - p.b
    if isinstance(p, Harmonic):
        return -p.k_s * d
    if isinstance(p, Morse):
        e = np.exp(-p.beta * d)
        return -2.0 * p.D * p.beta * e * (1.0 - e)
    if isinstance(p, Cubic):
        return -(2.0 * p.k_s * d + 3.0 * p.k_s * p.k_c * d * d)
    raise TypeError(f"unknown potential {p!r}")
