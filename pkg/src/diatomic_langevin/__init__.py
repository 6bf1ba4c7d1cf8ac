"""Langevin dynamics of a harmonically bound diatomic in implicit solvent.

Euler time-stepping of the Langevin equation, the stationary covariance of
the resulting linear recursion, stability classification of the step size,
and Monte Carlo ensembles to check one against the other.
"""

from .params import (
    N2_WATER,
    NoiseAmplitude,
    PhysicalParams,
    noise_amplitude,
    paper_n2_params,
    stokes_friction,
)
from .potentials import Cubic, Harmonic, Morse, Potential, energy, force
from .integrator import (
    DivergenceError,
    NoiseMode,
    SimulationConfig,
    State,
    Trajectory,
    euler_step,
    simulate,
    wiener_increment,
)
from .covariance import (
    CovarianceTriple,
    PoleError,
    SingularSystemError,
    UpdateMatrices,
    build_update,
    closed_form_covariance,
    solve_stationary,
    stationary_mean,
)
from .stability import StabilityReport, analyze_stability, critical_dt
from .ensemble import EnsembleConfig, EnsembleEstimate, equilibration_time, run_ensemble

__version__ = "0.1.0"

__all__ = [
    "N2_WATER",
    "NoiseAmplitude",
    "PhysicalParams",
    "noise_amplitude",
    "paper_n2_params",
    "stokes_friction",
    "Cubic",
    "Harmonic",
    "Morse",
    "Potential",
    "energy",
    "force",
    "DivergenceError",
    "NoiseMode",
    "SimulationConfig",
    "State",
    "Trajectory",
    "euler_step",
    "simulate",
    "wiener_increment",
    "CovarianceTriple",
    "PoleError",
    "SingularSystemError",
    "UpdateMatrices",
    "build_update",
    "closed_form_covariance",
    "solve_stationary",
    "stationary_mean",
    "StabilityReport",
    "analyze_stability",
    "critical_dt",
    "EnsembleConfig",
    "EnsembleEstimate",
    "equilibration_time",
    "run_ensemble",
]
