"""Von Neumann analysis of the generalized (hybrid) Yee update in 1D.

A test wave Psi0 * zeta^n * exp(i k_z z) inserted into the hybrid update
gives a 2x2 amplification matrix whose characteristic polynomial is

    zeta^2 - 2 b zeta + d = 0

with b = trace/2 and d = determinant.  Both are evaluated in closed form
here.  ``amplification_matrix`` builds the same matrix directly from the
stencil symbols and serves as an independent cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class StabilityPoint:
    S: float
    n: float
    beta: float
    theta_z: float
    zeta: complex

    @property
    def N_lambda(self) -> float:
        return 2 * np.pi / self.theta_z


def courant_limit(n: float, beta: float) -> float:
    """Largest stable Courant factor S = c dt/dz for index n and velocity beta."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if abs(beta) >= 1:
        raise ValueError("|beta| must be < 1")
    return n / (1 + n * abs(beta))


def _fold(beta: float, theta_z):
    # The v < 0 stencils are the z-mirror of the v > 0 ones, so the
    # spectrum at (-|beta|, theta) equals the one at (|beta|, -theta).
    return abs(beta), (theta_z if beta >= 0 else -np.asarray(theta_z))


def char_coeffs(S, n, beta, theta_z):
    """Return (b, d) of zeta^2 - 2 b zeta + d = 0."""
    beta, th = _fold(beta, theta_z)
    c, c2 = np.cos(th), np.cos(2 * th)
    s, s2 = np.sin(th), np.sin(2 * th)
    # half the trace of the amplification matrix
    b = (1 - S**2 * (1 - c) / (n * n) + S * beta * (c - c2 / 4 - 0.75)
         - 1j * S * beta * (s / 2 - s2 / 4))
    d = (np.exp(-1j * th) * (1 - S * beta + S * beta * c)
         * (S * beta + (1 - S * beta) * c + 1j * s))
    return b, d


def characteristic_roots(S, n, beta, theta_z):
    """Both amplification factors, larger modulus first."""
    b, d = char_coeffs(S, n, beta, theta_z)
    r = np.sqrt(b * b - d + 0j)
    z1, z2 = b + r, b - r
    swap = np.abs(z2) > np.abs(z1)
    return np.where(swap, z2, z1), np.where(swap, z1, z2)


def amplification_matrix(S, n, beta, theta_z, mu=1.0):
    """2x2 map (B, D)^{n-1} -> (B, D)^n of the hybrid stencil for one Fourier mode.

    Built from the same averages and upwind differences as ``hybrid``:
    B average two cells upstream, centered D average, one-sided
    differences toward the upstream side.
    """
    eps = n * n / mu
    beta, th = _fold(beta, theta_z)
    x = np.exp(1j * th)
    h = np.exp(0.5j * th)
    cz = h - 1 / h
    dB = 1 - 1 / x
    b_avg = (h**-3 + h**-1) / 2
    d_avg = (h + 1 / h) / 2
    m1 = np.array([[1 + S * cz * beta * b_avg - beta * S * dB, -S * cz / eps], [0, 1]])
    m2 = np.array([[1, 0], [-S * cz / mu, 1 + S * cz * beta * d_avg - beta * S * dB]])
    return m2 @ m1


def solve_S(zeta, n, beta, theta_z):
    """Roots in S of the characteristic equation at fixed zeta and theta.

    The equation is quadratic in S: S^2 + p S + q = 0.
    """
    beta, th = _fold(beta, theta_z)
    zeta = complex(zeta)
    u = 1 - np.cos(th)
    e = np.exp(-1j * th)
    n2 = n * n
    c1 = (np.cos(th) - np.cos(2 * th) / 4 - 0.75) - 1j * (np.sin(th) / 2 - np.sin(2 * th) / 4)
    A = u * (2 * zeta / n2 - beta**2 * u * e)
    B = beta * (u * (e - 1) - 2 * zeta * c1)
    C = (1 - zeta) ** 2
    if abs(A) < 1e-300:
        return np.array([-C / B, np.nan + 0j])
    p, q = B / A, C / A
    r = np.sqrt(p * p / 4 - q + 0j)
    return np.array([-p / 2 + r, -p / 2 - r])


def attenuation_curve(n, beta, S, N_lambda):
    """|zeta| of the forward and backward waves versus cells per wavelength.

    The forward wave exp(i(k z - w t)) has zeta with negative phase for
    k > 0; the backward wave is the other root.
    """
    N_lambda = np.asarray(N_lambda, dtype=float)
    th = 2 * np.pi / N_lambda
    z1, z2 = characteristic_roots(S, n, beta, th)
    fwd = np.where(np.angle(z1) <= 0, z1, z2)
    bwd = np.where(np.angle(z1) <= 0, z2, z1)
    return np.abs(fwd), np.abs(bwd)


def max_growth(S, n, beta, n_theta=2001):
    th = np.linspace(1e-6, np.pi, n_theta)
    z1, _ = characteristic_roots(S, n, beta, th)
    return float(np.abs(z1).max())
