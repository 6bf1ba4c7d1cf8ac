"""Step-size stability of the Euler map for the harmonic bond."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .covariance import build_update, spectral_radius
from .params import PhysicalParams


@dataclass(frozen=True)
class StabilityReport:
    """Stability verdict for one step size.

    ``paper_condition_holds`` is ``k_s dt^2 < eta dt``. ``is_stable`` is the
    ground truth, spectral radius of ``C`` below one. ``jury_margins`` are
    ``(1 - det C, p(1), p(-1))`` for the characteristic polynomial
    ``p(z) = z^2 - tr(C) z + det(C)``; all three are positive exactly when
    the map is stable.
    """

    dt: float
    dt_critical: float
    det_c: float
    trace_c: float
    spectral_radius: float
    complex_eigenvalues: bool
    paper_condition_holds: bool
    is_stable: bool
    jury_margins: tuple[float, float, float]

    @property
    def verdict(self) -> str:
        return "STABLE" if self.is_stable else "UNSTABLE"


def critical_dt(p: PhysicalParams, k_s: float) -> float:
    """Largest step with ``k_s dt^2 < eta dt``, i.e. ``eta / k_s``."""
    if not k_s > 0:
        raise ValueError("k_s must be positive")
    return p.friction / k_s


def analyze_stability(p: PhysicalParams, k_s: float, dt: float) -> StabilityReport:
    if not dt > 0:
        raise ValueError("dt must be positive")
    m, eta = p.mass, p.friction
    # closed forms rather than C entries, so det C - 1 keeps full precision
    det_c = 1.0 - eta * dt / m + k_s * dt * dt / m
    trace_c = 2.0 - eta * dt / m
    one_minus_det = dt * (eta - k_s * dt) / m
    p_plus = k_s * dt * dt / m
    p_minus = 1.0 + trace_c + det_c
    C = build_update(p, k_s, dt).C
    rho = spectral_radius(C)
    return StabilityReport(
        dt=dt,
        dt_critical=critical_dt(p, k_s),
        det_c=det_c,
        trace_c=trace_c,
        spectral_radius=rho,
        complex_eigenvalues=trace_c * trace_c < 4.0 * det_c,
        paper_condition_holds=k_s * dt * dt < eta * dt,
        is_stable=rho < 1.0,
        jury_margins=(one_minus_det, p_plus, p_minus),
    )


def stability_grid(p: PhysicalParams, k_s: float, dts) -> list[StabilityReport]:
    return [analyze_stability(p, k_s, float(dt)) for dt in np.asarray(dts, dtype=float)]
