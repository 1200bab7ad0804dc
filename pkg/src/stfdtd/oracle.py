"""Closed-form scattering at moving perturbation interfaces.

Media are at rest in the lab frame; only the boundary moves, along z,
with normalized velocity beta (beta < 0 is motion toward -z).  Angles are
measured from the z axis.  Natural units c = 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq


class DegenerateDenominator(ValueError):
    pass


class EvanescentTransmission(ValueError):
    pass


class HorizonCrossed(ValueError):
    pass


@dataclass(frozen=True)
class UniformInterfaceProblem:
    n1: float
    n2: float
    beta: float
    theta_i: float = 0.0
    omega_i: float = 2 * np.pi
    eta1: float | None = None
    eta2: float | None = None

    @property
    def z1(self):
        return 1 / self.n1 if self.eta1 is None else self.eta1

    @property
    def z2(self):
        return 1 / self.n2 if self.eta2 is None else self.eta2


@dataclass(frozen=True)
class ScatteringPrediction:
    Gamma: float
    T: float
    a_r: float
    a_t: float
    Z1: float
    Z2: float
    omega_r: float
    omega_t: float
    k_i: tuple
    k_r: tuple
    k_t: tuple
    theta_r: float
    theta_t: float


def deflection_angles(p: UniformInterfaceProblem):
    """(theta_r, theta_t) in radians.

    The transmitted-angle closed form carries the factor
    (1 - n1 beta cos theta_i); with the opposite sign it disagrees with
    phase matching on the interface (see ``phase_matched_waves``).
    """
    n1, n2, b = p.n1, p.n2, p.beta
    c, s = np.cos(p.theta_i), np.sin(p.theta_i)
    den = (n1 * b - c) ** 2 + s**2
    cos_r = ((n1**2 * b**2 + 1) * c - 2 * n1 * b) / den
    disc = n2**2 * (n1 * b - c) ** 2 + (n2**2 - n1**2) * s**2
    if disc < 0:
        raise EvanescentTransmission(f"discriminant {disc:.3g} < 0")
    cos_t = (n1**2 * b * s**2 + (1 - n1 * b * c) * np.sqrt(disc)) / (n2 * den)
    cos_r = min(max(cos_r, -1.0), 1.0)
    cos_t = min(max(cos_t, -1.0), 1.0)
    return float(np.arccos(cos_r)), float(np.arccos(cos_t))


def phase_matched_waves(p: UniformInterfaceProblem):
    """Independent route to the scattered waves: k_y and w - beta k_z are
    shared by all waves on the interface z = beta t, and k = n w in each
    medium.  Returns (omega_r, k_rz, omega_t, k_tz) with k_rz > 0 meaning
    propagation toward -z."""
    n1, n2, b, w = p.n1, p.n2, p.beta, p.omega_i
    ky = n1 * w * np.sin(p.theta_i)
    kz = n1 * w * np.cos(p.theta_i)
    inv = w - b * kz
    # reflected: w_r + b k = inv, k^2 + ky^2 = n1^2 w_r^2 (k = |k_rz|)
    a2, a1, a0 = 1 - n1**2 * b**2, 2 * n1**2 * b * inv, ky**2 - n1**2 * inv**2
    k_r = (-a1 + np.sqrt(a1 * a1 - 4 * a2 * a0)) / (2 * a2)
    # transmitted: w_t - b k = inv, k^2 + ky^2 = n2^2 w_t^2
    a2, a1, a0 = 1 - n2**2 * b**2, -2 * n2**2 * b * inv, ky**2 - n2**2 * inv**2
    k_t = (-a1 + np.sqrt(a1 * a1 - 4 * a2 * a0)) / (2 * a2)
    return inv - b * k_r, k_r, inv + b * k_t, k_t


def scattering_coeffs(p: UniformInterfaceProblem):
    """(Gamma, T, a_r, a_t, Z1, Z2) for the s-polarized electric field."""
    th_r, th_t = deflection_angles(p)
    n1, n2, b = p.n1, p.n2, p.beta
    ci, cr, ct = np.cos(p.theta_i), np.cos(th_r), np.cos(th_t)
    dens = (1 + n1 * b * cr, 1 - n2 * b * ct, ci - n1 * b, ct - n2 * b)
    if min(abs(x) for x in dens) < 1e-14:
        raise DegenerateDenominator("luminal or grazing parameters")
    a_r = (1 - n1 * b * ci) / dens[0]
    a_t = (1 - n1 * b * ci) / dens[1]
    Z1 = (1 - n1 * b * ci) / dens[2] * p.z1
    Z2 = (1 - n2 * b * ct) / dens[3] * p.z2
    gamma = a_r * (Z2 - Z1) / (Z2 + Z1)
    t = a_t * 2 * Z2 / (Z2 + Z1)
    return gamma, t, a_r, a_t, Z1, Z2


def frequency_shifts(p: UniformInterfaceProblem):
    """(omega_r, omega_t, k_r, k_t); k vectors as (k_y, k_z) with the
    reflected k_z negative.  |k| = n omega in each medium."""
    th_r, th_t = deflection_angles(p)
    n1, n2, b, w = p.n1, p.n2, p.beta, p.omega_i
    ci = np.cos(p.theta_i)
    w_r = (1 - n1 * b * ci) / (1 + n1 * b * np.cos(th_r)) * w
    w_t = (1 - n1 * b * ci) / (1 - n2 * b * np.cos(th_t)) * w
    ky = n1 * w * np.sin(p.theta_i)
    k_r = (ky, -n1 * w_r * np.cos(th_r))
    k_t = (ky, n2 * w_t * np.cos(th_t))
    return w_r, w_t, k_r, k_t


def predict(p: UniformInterfaceProblem) -> ScatteringPrediction:
    g, t, a_r, a_t, Z1, Z2 = scattering_coeffs(p)
    th_r, th_t = deflection_angles(p)
    w_r, w_t, k_r, k_t = frequency_shifts(p)
    k_i = (p.n1 * p.omega_i * np.sin(p.theta_i), p.n1 * p.omega_i * np.cos(p.theta_i))
    return ScatteringPrediction(g, t, a_r, a_t, Z1, Z2, w_r, w_t, k_i, k_r, k_t, th_r, th_t)


# ---------------------------------------------------------------------------
# frame hopping

def lorentz_boost(fields: dict, beta: float) -> dict:
    """Boost s-polarized fields (Ex, By, Bz, Dx, Hy, Hz) into a frame moving
    with velocity beta along z."""
    g = 1 / np.sqrt(1 - beta**2)
    out = dict(fields)
    if "Ex" in fields:
        out["Ex"] = g * (fields["Ex"] - beta * fields["By"])
        out["By"] = g * (fields["By"] - beta * fields["Ex"])
    if "Dx" in fields:
        out["Dx"] = g * (fields["Dx"] - beta * fields["Hy"])
        out["Hy"] = g * (fields["Hy"] - beta * fields["Dx"])
    return out


def lorentz_event(t, z, beta):
    g = 1 / np.sqrt(1 - beta**2)
    return g * (t - beta * z), g * (z - beta * t)


def comoving_frequency(omega, k_z, beta):
    g = 1 / np.sqrt(1 - beta**2)
    return g * (omega - beta * k_z)


# ---------------------------------------------------------------------------
# pulses

def gaussian_spectrum(ky, kz, sigma_y, sigma_z, k_iy, k_iz, A=1.0):
    """Spectrum of A exp(i k_i.r) exp(-(y/sy)^2 - (z/sz)^2), prefactor
    sigma_y sigma_z / (16 pi) kept as published."""
    return (sigma_y * sigma_z / (16 * np.pi) * A
            * np.exp(-(sigma_y * (ky - k_iy)) ** 2 / 4)
            * np.exp(-(sigma_z * (kz - k_iz)) ** 2 / 4))


def gaussian_spectrum_norm(sigma_y, sigma_z, A=1.0):
    """Closed form of the integral of |gaussian_spectrum|^2 over the k plane."""
    pref = sigma_y * sigma_z / (16 * np.pi) * A
    return pref**2 * 2 * np.pi / (sigma_y * sigma_z)


def pulse_scatter_spectrum(p: UniformInterfaceProblem, ky, kz, sigma_y, sigma_z, k_i):
    """Map the incident Gaussian spectrum sampled at (ky, kz) onto the
    scattered wavevectors.

    Each incident component is treated as a plane wave of angle
    atan2(ky, kz) and frequency |k|/n1.  Returns dict with keys 'r' and
    't', each a tuple (ky, kz_scattered, amplitude) of arrays, amplitude
    = coefficient * E_i / a.
    """
    ky = np.asarray(ky, float)
    kz = np.asarray(kz, float)
    k_iy, k_iz = k_i
    Ei = gaussian_spectrum(ky, kz, sigma_y, sigma_z, k_iy, k_iz)
    out = {"r": [], "t": []}
    flat = zip(ky.ravel(), kz.ravel(), Ei.ravel())
    for y, z, e in flat:
        kk = np.hypot(y, z)
        q = UniformInterfaceProblem(p.n1, p.n2, p.beta, np.arctan2(abs(y), z), kk / p.n1,
                                    p.eta1, p.eta2)
        g, t, a_r, a_t, *_ = scattering_coeffs(q)
        _, _, k_r, k_t = frequency_shifts(q)
        out["r"].append((y, k_r[1], g * e / a_r))
        out["t"].append((y, k_t[1], t * e / a_t))
    res = {}
    for key, rows in out.items():
        arr = np.array(rows).T
        res[key] = tuple(a.reshape(ky.shape) for a in arr)
    return res


# ---------------------------------------------------------------------------
# wedge

def _normal_hit(n_from, n_to, beta_along):
    """Normal incidence from medium n_from on an interface whose velocity
    projected on the propagation direction is beta_along."""
    p = UniformInterfaceProblem(n_from, n_to, beta_along, 0.0, 1.0)
    g, t, *_ = scattering_coeffs(p)
    w_r, w_t, _, _ = frequency_shifts(p)
    return g, t, w_r, w_t


def wedge_cascade(eps, v1, v2, omega_i=2 * np.pi, bounces=3, amplitude=1.0):
    """Successive reflection events on a two-interface wedge.

    Medium 1 | interface I (v1) | medium 2 | interface II (v2) | medium 3,
    normal incidence from medium 1.  Event 0 is the reflection at I back
    into medium 1; events 1, 2, ... alternate between II and I inside
    medium 2 as the pulse bounces.  Each entry holds the event's interface,
    the medium the reflected pulse travels in, its frequency and amplitude,
    and the pulse that escapes through the far side at that event.
    """
    n1, n2, n3 = np.sqrt(eps)
    g, t, w_r, w_t = _normal_hit(n1, n2, v1)
    out = [{"interface": "I", "medium": 1, "omega": w_r * omega_i, "amplitude": g * amplitude,
            "omega_escaped": w_t * omega_i, "amplitude_escaped": t * amplitude}]
    w, a = w_t * omega_i, t * amplitude
    for m in range(1, bounces):
        if m % 2:
            # forward wave in medium 2 reflects at II
            g, t, w_r, w_t = _normal_hit(n2, n3, v2)
            name = "II"
        else:
            # backward wave meets I; mirror z so it travels toward +z
            g, t, w_r, w_t = _normal_hit(n2, n1, -v1)
            name = "I"
        out.append({"interface": name, "medium": 2, "omega": w_r * w, "amplitude": g * a,
                    "omega_escaped": w_t * w, "amplitude_escaped": t * a})
        w, a = w_r * w, g * a
    return out


# ---------------------------------------------------------------------------
# accelerated interface

@dataclass(frozen=True)
class AcceleratedInterfaceProblem:
    n1: float
    n2: float
    a_prime: float
    beta0: float = 0.0
    z0: float = 0.0
    eta1: float | None = None
    eta2: float | None = None

    @property
    def xi0(self):
        return np.arcsinh(self.beta0 / np.sqrt(1 - self.beta0**2))

    def position(self, t):
        a, x0 = self.a_prime, self.xi0
        return (np.sqrt(1 + (a * t + np.sinh(x0)) ** 2) - np.cosh(x0)) / a + self.z0

    def rapidity(self, t):
        """xi + xi0 at lab time t on the interface."""
        return np.arcsinh(self.a_prime * t + np.sinh(self.xi0))

    def velocity(self, t):
        return np.tanh(self.rapidity(t))


def _emission_time(p: AcceleratedInterfaceProblem, z, t, speed, t_lo, n_scan=256):
    """Latest event on the trajectory from which the characteristic
    z - speed (t - te) reaches (z, t).  A decelerating interface can cross
    the same characteristic twice; the later crossing is the causal one."""
    f = lambda te: p.position(te) - (z - speed * (t - te))
    ts = np.linspace(t_lo, t, n_scan)
    fs = f(ts)
    ch = np.nonzero(np.sign(fs[1:]) != np.sign(fs[:-1]))[0]
    if fs[-1] == 0:
        return float(t)
    if not ch.size:
        raise HorizonCrossed("no emission event on the trajectory")
    j = ch[-1]
    return brentq(f, ts[j], ts[j + 1], xtol=1e-13, rtol=1e-15, maxiter=200)


def accelerated_scattered_fields(p: AcceleratedInterfaceProblem, incident, z, t, t_min=None):
    """Reflected and transmitted E at lab points (z, t).

    ``incident(z, t)`` is the incident field in medium 1 travelling toward
    +z.  The amplitude and argument stretch factors are the closed-form
    rapidity-dependent ones, with the rapidity taken at the event where the
    scattered characteristic through (z, t) leaves the interface.  At that
    event the incident phase is read directly, which is the exact content
    of the stretched argument r (k_i z + w_i t).
    Points on the wrong side of the interface return 0.
    """
    z = np.atleast_1d(np.asarray(z, float))
    t = np.broadcast_to(np.asarray(t, float), z.shape)
    eta1 = 1 / p.n1 if p.eta1 is None else p.eta1
    eta2 = 1 / p.n2 if p.eta2 is None else p.eta2
    fr = (eta2 - eta1) / (eta2 + eta1)
    ft = 2 * eta2 / (eta2 + eta1)
    if t_min is None:
        t_min = -10 * abs(1 / p.a_prime)
    er = np.zeros(z.shape)
    et = np.zeros(z.shape)
    for j, (zz, tt) in enumerate(zip(z, t)):
        zs = p.position(tt)
        if zz <= zs:
            te = _emission_time(p, zz, tt, -1 / p.n1, t_min)
            th = np.tanh(p.rapidity(te))
            r = (1 - p.n1 * th) / (1 + p.n1 * th)
            # incident phase at the emission event; r stretches amplitude
            er[j] = fr * r * incident(p.position(te), te)
        else:
            te = _emission_time(p, zz, tt, 1 / p.n2, t_min)
            th = np.tanh(p.rapidity(te))
            r = (1 - p.n1 * th) / (1 - p.n2 * th)
            et[j] = ft * r * incident(p.position(te), te)
    return er, et


def accelerated_limit_factors(p: AcceleratedInterfaceProblem, t):
    """Amplitude factors (reflected, transmitted) of the closed form at lab time t."""
    th = p.velocity(t)
    eta1, eta2 = 1 / p.n1, 1 / p.n2
    r = (1 - p.n1 * th) / (1 + p.n1 * th)
    s = (1 - p.n1 * th) / (1 - p.n2 * th)
    return (eta2 - eta1) / (eta2 + eta1) * r, 2 * eta2 / (eta2 + eta1) * s
