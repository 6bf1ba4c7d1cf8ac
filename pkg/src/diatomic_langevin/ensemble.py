"""Monte Carlo ensembles of independent trajectories.

Statistics are taken across trajectories at fixed time indices after a
burn-in, then averaged over the sampled indices. Standard errors come from
the spread of the per-trajectory contributions, which are independent
because every trajectory has its own seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .covariance import CovarianceTriple
from .integrator import (
    DIVERGENCE_GUARD,
    DivergenceError,
    SimulationConfig,
    State,
    _advance,
    draw_increments,
    make_rng,
)
from .params import PhysicalParams, noise_amplitude
from .potentials import Harmonic, Potential
from .stability import analyze_stability

BURN_IN_RELAXATION_TIMES = 20
CHUNK = 2048


class UnstableStepError(ValueError):
    pass


def equilibration_time(p: PhysicalParams) -> float:
    """Velocity relaxation time ``m / eta``."""
    if p.friction == 0:
        raise ValueError("equilibration time is infinite without friction")
    return p.mass / p.friction


def default_burn_in(p: PhysicalParams, dt: float) -> int:
    return math.ceil(BURN_IN_RELAXATION_TIMES * equilibration_time(p) / dt)


@dataclass(frozen=True)
class EnsembleConfig:
    """``burn_in_steps=None`` means 20 velocity relaxation times.

    Trajectory ``i`` uses seed ``base_seed + i``; ``sim.seed`` is ignored.
    """

    n_trajectories: int
    sim: SimulationConfig
    burn_in_steps: int | None = None
    sample_stride: int = 1
    base_seed: int = 0

    def __post_init__(self):
        if self.n_trajectories < 2:
            raise ValueError("an ensemble needs at least 2 trajectories")
        if self.burn_in_steps is not None and self.burn_in_steps < 0:
            raise ValueError("burn_in_steps must be nonnegative")
        if self.sample_stride < 1:
            raise ValueError("sample_stride must be at least 1")


@dataclass(frozen=True)
class EnsembleEstimate:
    mean_x: float
    mean_v: float
    triple: CovarianceTriple
    stderr_var_x: float
    stderr_var_v: float
    stderr_cov: float
    n_samples: int
    stderr_mean_x: float = 0.0
    stderr_mean_v: float = 0.0
    n_trajectories: int = 0
    sample_steps: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=int), repr=False)


def sample_indices(n_steps: int, burn_in: int, stride: int) -> np.ndarray:
    if burn_in > n_steps:
        raise ValueError(f"burn-in of {burn_in} steps leaves nothing of a {n_steps}-step run")
    return np.arange(burn_in, n_steps + 1, stride)


def _run_chunk(init, p, pot, sim, seeds, idx):
    n = len(seeds)
    dW = np.stack([draw_increments(make_rng(s), sim.n_steps, sim.dt, sim.noise_mode) for s in seeds], axis=1) \
        if n else np.empty((sim.n_steps, 0))
    kicks = noise_amplitude(p).epsilon / p.mass * dW
    damping = p.friction / p.mass
    inv_mass = 1.0 / p.mass

    x = np.full(n, float(init.x))
    v = np.full(n, float(init.v))
    xs = np.empty((n, len(idx)))
    vs = np.empty((n, len(idx)))
    j = 0
    if j < len(idx) and idx[j] == 0:
        xs[:, 0], vs[:, 0] = x, v
        j = 1
    for k in range(sim.n_steps):
        x, v = _advance(x, v, pot, sim.dt, damping, inv_mass, kicks[k])
        bad = ~((np.abs(x) <= DIVERGENCE_GUARD) & (np.abs(v) <= DIVERGENCE_GUARD))
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            err = DivergenceError(State(float(x[i]), float(v[i])))
            err.seed, err.step = int(seeds[i]), k + 1
            raise err
        if j < len(idx) and idx[j] == k + 1:
            xs[:, j], vs[:, j] = x, v
            j += 1
    return xs, vs


def run_ensemble(
    init: State,
    p: PhysicalParams,
    pot: Potential,
    ec: EnsembleConfig,
    force: bool = False,
) -> EnsembleEstimate:
    """Simulate ``ec.n_trajectories`` trajectories and estimate moments.

    Raises
    ------
    UnstableStepError
        For a harmonic bond with an unstable step, unless ``force`` is set.
    DivergenceError
        If any trajectory blows up; ``seed`` and ``step`` are attached.
    """
    sim = ec.sim
    if isinstance(pot, Harmonic) and not force:
        rep = analyze_stability(p, pot.k_s, sim.dt)
        if not rep.is_stable:
            raise UnstableStepError(
                f"dt={sim.dt!r} is unstable (spectral radius {rep.spectral_radius:.6g}); pass force=True to run anyway"
            )
    burn_in = ec.burn_in_steps if ec.burn_in_steps is not None else default_burn_in(p, sim.dt)
    idx = sample_indices(sim.n_steps, burn_in, ec.sample_stride)

    n = ec.n_trajectories
    seeds = ec.base_seed + np.arange(n)
    parts = [_run_chunk(init, p, pot, sim, seeds[a : a + CHUNK], idx) for a in range(0, n, CHUNK)]
    X = np.concatenate([xs for xs, _ in parts])
    V = np.concatenate([vs for _, vs in parts])
    return _estimate(X, V, idx)


def _estimate(X: np.ndarray, V: np.ndarray, idx: np.ndarray) -> EnsembleEstimate:
    n, T = X.shape
    # fluctuations can be ~1e-15 of the bond length; work relative to one sample
    x_ref, v_ref = X[0, 0], V[0, 0]
    X = X - x_ref
    V = V - v_ref
    dx = X - X.mean(axis=0)
    dv = V - V.mean(axis=0)
    bessel = n / (n - 1)
    # per-trajectory contributions; their mean is the pooled unbiased estimate
    qxx = (dx * dx).mean(axis=1) * bessel
    qxv = (dx * dv).mean(axis=1) * bessel
    qvv = (dv * dv).mean(axis=1) * bessel
    xbar = X.mean(axis=1)
    vbar = V.mean(axis=1)

    def se(q):
        return float(q.std(ddof=1) / math.sqrt(n))

    return EnsembleEstimate(
        mean_x=float(x_ref + xbar.mean()),
        mean_v=float(v_ref + vbar.mean()),
        triple=CovarianceTriple(float(qxx.mean()), float(qxv.mean()), float(qvv.mean())),
        stderr_var_x=se(qxx),
        stderr_var_v=se(qvv),
        stderr_cov=se(qxv),
        n_samples=n * T,
        stderr_mean_x=se(xbar),
        stderr_mean_v=se(vbar),
        n_trajectories=n,
        sample_steps=idx,
    )
