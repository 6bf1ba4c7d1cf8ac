"""Euler time-stepping of the Langevin equation.

    x' = x + v dt
    v' = v - (eta/m) v dt + (F(x)/m) dt + (eps/m) dW

Random numbers come from numpy's PCG64 bit generator with its ziggurat
``standard_normal`` transform; ``GENERATOR_VERSION`` changes whenever the
stream for a given seed would change.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .params import PhysicalParams, noise_amplitude
from .potentials import Potential, force

GENERATOR_VERSION = "pcg64-ziggurat-1"

DIVERGENCE_GUARD = 1e100


class NoiseMode(str, enum.Enum):
    VARIANCE_DT = "variance-dt"
    UNIT = "unit"
    NONE = "none"


class DivergenceError(ArithmeticError):
    """Raised when a step leaves the ``DIVERGENCE_GUARD`` box."""

    def __init__(self, state):
        super().__init__(f"state {state} exceeded divergence guard {DIVERGENCE_GUARD:g}")
        self.state = state


@dataclass(frozen=True)
class State:
    x: float
    v: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.v])


@dataclass(frozen=True)
class SimulationConfig:
    dt: float
    n_steps: int
    seed: int = 0
    noise_mode: NoiseMode = NoiseMode.VARIANCE_DT

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if self.n_steps < 0:
            raise ValueError(f"n_steps must be nonnegative, got {self.n_steps!r}")
        object.__setattr__(self, "noise_mode", NoiseMode(self.noise_mode))


@dataclass
class Trajectory:
    """Positions and velocities at ``times[k] = k * dt``.

    If the run blew up, ``diverged`` is set and the arrays stop at the last
    finite state; ``diverged_at`` is the index of the step that failed.
    """

    times: np.ndarray
    x: np.ndarray
    v: np.ndarray
    diverged: bool = False
    diverged_at: int | None = None

    def __len__(self):
        return len(self.times)

    def __getitem__(self, k) -> State:
        return State(float(self.x[k]), float(self.v[k]))

    @property
    def states(self) -> list[State]:
        return [self[k] for k in range(len(self))]


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _noise_scale(dt: float, mode: NoiseMode) -> float:
    mode = NoiseMode(mode)
    if mode is NoiseMode.VARIANCE_DT:
        return math.sqrt(dt)
    if mode is NoiseMode.UNIT:
        return 1.0
    return 0.0


def wiener_increment(rng: np.random.Generator, dt: float, noise_mode=NoiseMode.VARIANCE_DT) -> float:
    """One Gaussian increment with variance ``dt`` (or 1 in unit mode)."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    return float(rng.standard_normal()) * _noise_scale(dt, noise_mode)


def draw_increments(rng: np.random.Generator, n: int, dt: float, noise_mode) -> np.ndarray:
    """``n`` successive increments; identical to ``n`` calls of ``wiener_increment``."""
    if NoiseMode(noise_mode) is NoiseMode.NONE:
        return np.zeros(n)
    return rng.standard_normal(n) * _noise_scale(dt, noise_mode)


def _advance(x, v, pot, dt, damping, inv_mass, kick):
    # shared by the scalar and the vectorised ensemble paths
    x_new = x + v * dt
    v_new = v - damping * v * dt + force(pot, x) * inv_mass * dt + kick
    return x_new, v_new


def euler_step(s: State, p: PhysicalParams, pot: Potential, dt: float, dW: float) -> State:
    """Advance one Euler step with Wiener increment ``dW``.

    Raises
    ------
    DivergenceError
        If either component of the new state is non-finite or exceeds the guard.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    eps = noise_amplitude(p).epsilon
    x, v = _advance(s.x, s.v, pot, dt, p.friction / p.mass, 1.0 / p.mass, eps / p.mass * dW)
    new = State(float(x), float(v))
    if not (abs(new.x) <= DIVERGENCE_GUARD and abs(new.v) <= DIVERGENCE_GUARD):
        raise DivergenceError(new)
    return new


def simulate(init: State, p: PhysicalParams, pot: Potential, cfg: SimulationConfig) -> Trajectory:
    """Run ``cfg.n_steps`` Euler steps from ``init``.

    The result is a deterministic function of the arguments and
    ``GENERATOR_VERSION``. A blow-up truncates the trajectory instead of raising.
    """
    n = cfg.n_steps
    dW = draw_increments(make_rng(cfg.seed), n, cfg.dt, cfg.noise_mode)
    kicks = noise_amplitude(p).epsilon / p.mass * dW
    damping = p.friction / p.mass
    inv_mass = 1.0 / p.mass

    xs = np.empty(n + 1)
    vs = np.empty(n + 1)
    x, v = float(init.x), float(init.v)
    xs[0], vs[0] = x, v
    for k in range(n):
        x, v = _advance(x, v, pot, cfg.dt, damping, inv_mass, kicks[k])
        if not (abs(x) <= DIVERGENCE_GUARD and abs(v) <= DIVERGENCE_GUARD):
            return Trajectory(np.arange(k + 1) * cfg.dt, xs[: k + 1], vs[: k + 1], True, k + 1)
        xs[k + 1], vs[k + 1] = x, v
    return Trajectory(np.arange(n + 1) * cfg.dt, xs, vs)
