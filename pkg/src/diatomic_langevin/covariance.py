"""Stationary covariance of the Euler recursion for the harmonic bond.

For ``F(x) = -k_s (x - b)`` one Euler step is the affine map

    z' = C z + eps B dW + k_s b B dt,   C = I + dt A,   B = (0, 1/m)

and the stationary covariance ``Sigma`` solves ``Sigma = C Sigma C^T + eps^2 B B^T dt``.
The constant drift shifts the mean to ``(b, 0)`` but leaves ``Sigma`` alone,
so nothing here depends on the bond length except ``drift_offset``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import NoiseAmplitude, PhysicalParams

# Relative cancellation below which a vanishing denominator factor is refused.
POLE_RTOL = 1e-3


class PoleError(ZeroDivisionError):
    pass


class SingularSystemError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class UpdateMatrices:
    C: np.ndarray
    B: np.ndarray
    drift_offset: np.ndarray
    A: np.ndarray
    dt: float

    @property
    def P(self) -> np.ndarray:
        """``C - I``, formed without subtracting the identity."""
        return self.dt * self.A


@dataclass(frozen=True)
class CovarianceTriple:
    """Position variance, position-velocity covariance, velocity variance.

    ``stable`` records whether the step size the triple was computed for is
    inside the stability region; past it the numbers satisfy the fixed-point
    equation but describe no stationary distribution.
    """

    var_x: float
    cov_xv: float
    var_v: float
    stable: bool | None = None

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.var_x, self.cov_xv, self.var_v)

    def matrix(self) -> np.ndarray:
        return np.array([[self.var_x, self.cov_xv], [self.cov_xv, self.var_v]])

    def is_valid_covariance(self) -> bool:
        return self.var_x >= 0 and self.var_v >= 0 and self.cov_xv**2 <= self.var_x * self.var_v


def drift_matrix(p: PhysicalParams, k_s: float) -> np.ndarray:
    return np.array([[0.0, 1.0], [-k_s / p.mass, -p.friction / p.mass]])


def build_update(p: PhysicalParams, k_s: float, dt: float) -> UpdateMatrices:
    if not dt > 0:
        raise ValueError("dt must be positive")
    A = drift_matrix(p, k_s)
    C = np.eye(2) + dt * A
    B = np.array([0.0, 1.0 / p.mass])
    return UpdateMatrices(C=C, B=B, drift_offset=k_s * p.bond_length * B * dt, A=A, dt=dt)


def stationary_mean(p: PhysicalParams) -> tuple[float, float]:
    """Fixed point of the noiseless harmonic recursion."""
    return (p.bond_length, 0.0)


def spectral_radius(C: np.ndarray) -> float:
    """Largest eigenvalue modulus of a real 2x2 matrix, from trace and determinant."""
    tr = C[0, 0] + C[1, 1]
    det = C[0, 0] * C[1, 1] - C[0, 1] * C[1, 0]
    disc = tr * tr - 4.0 * det
    if disc < 0:
        return float(np.sqrt(det))
    r = np.sqrt(disc)
    # avoid cancellation in the smaller root
    big = 0.5 * (tr + np.copysign(r, tr))
    small = det / big if big != 0 else 0.0
    return float(max(abs(big), abs(small)))


def lyapunov_system(P: np.ndarray) -> np.ndarray:
    """Coefficients of ``C Sigma C^T - Sigma`` acting on ``(var_x, cov_xv, var_v)``.

    Takes ``P = C - I``: for small steps every ``c**2 - 1`` would otherwise
    cancel catastrophically.
    """
    (p11, p12), (p21, p22) = P
    c11, c22 = 1.0 + p11, 1.0 + p22
    return np.array([
        [p11 * (2.0 + p11), 2.0 * c11 * p12, p12 * p12],
        [c11 * p21, p11 + p22 + p11 * p22 + p12 * p21, p12 * c22],
        [p21 * p21, 2.0 * p21 * c22, p22 * (2.0 + p22)],
    ])


def _pow2_scale(v):
    return 2.0 ** -np.round(np.log2(v))


def singular_factors(P: np.ndarray) -> tuple[float, float]:
    """Relative size of the two factors of ``det`` that can vanish at a stable edge.

    ``det`` of the 3x3 system is ``(det C - 1) p(1) p(-1)`` with
    ``p(z) = z^2 - tr(C) z + det(C)``. The ``p(1)`` factor only shrinks with
    the step and cancels against the right-hand side; the other two vanish
    on the stability boundary. Each is returned divided by the sum of the
    magnitudes of its terms, so ``0`` means complete cancellation.
    """
    (p11, p12), (p21, p22) = P
    cross = p12 * p21
    one_minus_det = p11 + p22 + p11 * p22 - cross
    a = abs(one_minus_det) / (abs(p11) + abs(p22) + abs(p11 * p22) + abs(cross))
    p_minus = (2.0 + p11) * (2.0 + p22) - cross
    b = abs(p_minus) / (abs((2.0 + p11) * (2.0 + p22)) + abs(cross))
    return a, b


def solve_stationary(u: UpdateMatrices, eps: NoiseAmplitude | float, dt: float) -> CovarianceTriple:
    """Solve the 3x3 stationary-covariance system by pivoted elimination.

    The entries span ~80 orders of magnitude for molecular parameters, so
    rows and columns are first scaled by powers of two, which is exact.

    Raises
    ------
    SingularSystemError
        If ``1 - det C`` or ``p(-1)`` is within ``POLE_RTOL`` of cancelling,
        i.e. the step sits on (or numerically at) the stability boundary.
    """
    eps2 = eps.squared if isinstance(eps, NoiseAmplitude) else float(eps) ** 2
    P = u.P
    if min(singular_factors(P)) <= POLE_RTOL:
        raise SingularSystemError("stationary covariance system is singular at this step size")
    M = lyapunov_system(P)
    b1, b2 = u.B
    rhs = -eps2 * dt * np.array([b1 * b1, b1 * b2, b2 * b2])

    col = np.abs(M).max(axis=0)
    if not np.all(col > 0):
        raise SingularSystemError("stationary covariance system has a zero column")
    cs = _pow2_scale(col)
    E = M * cs
    rs = _pow2_scale(np.abs(E).max(axis=1))
    y = np.linalg.solve(E * rs[:, None], rs * rhs)
    var_x, cov_xv, var_v = (cs * y).tolist()
    return CovarianceTriple(var_x, cov_xv, var_v, stable=spectral_radius(u.C) < 1.0)


def closed_form_covariance(p: PhysicalParams, k_s: float, dt: float) -> CovarianceTriple:
    """Closed-form stationary covariance of the Euler scheme, harmonic bond.

    Raises
    ------
    PoleError
        If ``eta - k_s dt`` or the quadratic denominator factor is within
        ``POLE_RTOL`` of cancelling.
    """
    m, eta, kT = p.mass, p.friction, p.thermal_energy
    # same relative measures as singular_factors, so both routes refuse alike
    lin = eta - k_s * dt
    if abs(lin) <= POLE_RTOL * (eta + k_s * dt):
        raise PoleError(f"dt={dt!r} is at the pole dt = eta/k_s = {eta / k_s!r}")
    head = 4.0 * m * k_s - 2.0 * k_s * eta * dt
    tail = k_s * k_s * dt * dt
    quad = head + tail
    if abs(quad) <= POLE_RTOL * (abs(head) + tail):
        raise PoleError(f"dt={dt!r} is at a root of the quadratic denominator factor")
    den = lin * quad
    var_x = 2.0 * eta * kT * m * (2.0 * m - eta * dt + k_s * dt * dt) / den
    var_v = 4.0 * eta * kT * m * k_s / den
    cov_xv = -2.0 * eta * kT * m * dt * k_s / den
    C = np.eye(2) + dt * drift_matrix(p, k_s)
    return CovarianceTriple(var_x, cov_xv, var_v, stable=spectral_radius(C) < 1.0)


def fixed_point_residual(u: UpdateMatrices, eps: NoiseAmplitude | float, dt: float, t: CovarianceTriple) -> float:
    """``||C S C^T + eps^2 B B^T dt - S|| / ||S||`` in the Frobenius norm."""
    eps2 = eps.squared if isinstance(eps, NoiseAmplitude) else float(eps) ** 2
    S = t.matrix()
    R = u.C @ S @ u.C.T + eps2 * dt * np.outer(u.B, u.B) - S
    return float(np.linalg.norm(R) / np.linalg.norm(S))
