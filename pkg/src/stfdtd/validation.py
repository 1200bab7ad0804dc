"""Reproduction runs for the published figures, each compared with its
closed-form reference.  Every runner returns a list of Check rows and a
dict of raw series for the report figures."""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import oracle
from .conventional import FieldState, step_conventional, update_B
from .diagnostics import (DirectionProbe, InitialPulse, LineSource, PointProbe, SourceSpec,
                          envelope, instantaneous_frequency, lobe_moments, measure_angles,
                          normalized_xcorr, signed_peak, spectrum)
from .grid import GridSpec, InterfaceTrajectory, MaterialMap
from .hybrid import Simulation, energy_growth
from .stability import attenuation_curve, courant_limit

GAMMA_MOVING, T_MOVING = -2 / 9, 8 / 9


@dataclass
class Check:
    criterion: int
    name: str
    measured: float
    target: str
    passed: bool
    detail: str = ""

    def row(self):
        m = self.measured
        ms = f"{m:.6g}" if isinstance(m, (float, int, np.floating)) else str(m)
        return [str(self.criterion), self.name, ms, self.target, "PASS" if self.passed else "FAIL",
                self.detail]


def _rel(a, b):
    return abs(a - b) / abs(b)


# ---------------------------------------------------------------------------
# Fig. 2: uniform interface eps 1 -> 4, v = 0.2c, baseband pulse

def fig2_coefficients(scale=1, scheme="local_hybrid", time_switch="D", beta=0.2, eps2=4.0,
                      closure="jump"):
    """Gamma and T for the 1+1D uniform-interface run at mesh density
    ``scale`` (dz = 1/scale in units where the pulse 1/e half-width is 20).

    Gamma is the signed peak of the reflected field at a probe in the
    scattered-field region over the incident peak.  T is the largest
    transmitted field seen more than 12 units beyond the interface.
    """
    dz = 1.0 / scale
    S = 0.5
    g = GridSpec(int(1600 * scale), 1, dz, dz, S * dz, int(round(1500 / (S * dz))))
    mat = MaterialMap([(1.0, 1.0), (eps2, 1.0)], [InterfaceTrajectory("uniform", 400.0, beta)])
    src = LineSource(SourceSpec(tau=20.0, T0=100.0, location=int(50 * scale)))
    pr = PointProbe("reflected", int(40 * scale))
    sim = Simulation(g, mat, [src], [pr], scheme=scheme, time_switch=time_switch, closure=closure)
    off = int(12 * scale)
    acc = {"inc": 0.0, "T": 0.0}

    def cb(s):
        acc["inc"] = max(acc["inc"], abs(src.incident_E(src.ks)))
        kc = int(np.floor(mat.positions([0.0], s.n * g.dt)[0, 0] / dz))
        seg = s.E[kc + off:-3, 0]
        if seg.size:
            acc["T"] = max(acc["T"], float(np.abs(seg).max()))

    wall = sim.run(callback=cb)
    t, v = pr.array()
    gamma = signed_peak(t, v)[1] / acc["inc"]
    return {"Gamma": float(gamma), "T": acc["T"] / acc["inc"], "wall": wall, "t": t,
            "reflected": v / acc["inc"], "scale": scale}


def run_fig2(scales=(1, 2), hybrid_scale=4):
    """Criteria 1 (conventional failure) and 2 (hybrid correctness)."""
    checks, data = [], {"conventional": [], "hybrid": None}
    for sc in scales:
        data["conventional"].append(fig2_coefficients(sc, "conventional_only", "E"))
    fin = data["conventional"][-1]
    eg = _rel(fin["Gamma"], GAMMA_MOVING) * 100
    et = _rel(fin["T"], T_MOVING) * 100
    conv_g = _rel(fin["Gamma"], -1 / 3)
    conv_t = _rel(fin["T"], 2 / 3)
    checks.append(Check(1, "conventional Gamma -> -1/3", fin["Gamma"], "within 2% of -1/3",
                        conv_g <= 0.02, f"scales {list(scales)}"))
    checks.append(Check(1, "conventional T -> 2/3", fin["T"], "within 2% of 2/3", conv_t <= 0.02))
    checks.append(Check(1, "reflection error vs moving value [%]", eg, "50.31 +- 2",
                        abs(eg - 50.31) <= 2))
    checks.append(Check(1, "transmission error vs moving value [%]", et, "24.98 +- 2",
                        abs(et - 24.98) <= 2))
    h = fig2_coefficients(hybrid_scale, "local_hybrid")
    data["hybrid"] = h
    checks.append(Check(2, "hybrid Gamma", h["Gamma"], "-2/9 within 2%",
                        _rel(h["Gamma"], GAMMA_MOVING) <= 0.02, f"scale {hybrid_scale}"))
    checks.append(Check(2, "hybrid T", h["T"], "8/9 within 2%", _rel(h["T"], T_MOVING) <= 0.02))
    return checks, data


# ---------------------------------------------------------------------------
# Fig. 5 and Eq. 14: stability

def run_fig5(pairs=None, steps=10_000):
    """Criteria 6 (empirical bracket of S_max) and 7 (attenuation)."""
    if pairs is None:
        pairs = [(n, b) for n in (1.0, 1.5, 2.0) for b in (0.0, 0.2, 0.3)]
    checks, rows = [], []
    for n, b in pairs:
        smax = courant_limit(n, b)
        lo = energy_growth(n, b, 0.95 * smax, steps=steps)
        hi = energy_growth(n, b, 1.05 * smax, steps=steps)
        rows.append((n, b, smax, lo, hi))
        checks.append(Check(6, f"n={n:g} beta={b:g} growth at 0.95 S_max", lo, "< 1.01",
                            lo < 1.01))
        checks.append(Check(6, f"n={n:g} beta={b:g} growth at 1.05 S_max", hi, "> 10", hi > 10))
    n, b = 1.5, 0.3
    S = courant_limit(n, b)
    nl = np.linspace(2.0, 40.0, 761)
    fwd, bwd = attenuation_curve(n, b, S, nl)
    low = float(fwd[nl < 10].min())
    high = float(fwd[nl >= 20].min())
    checks.append(Check(7, "min |zeta| for N_lambda < 10", low, "< 0.95", low < 0.95))
    checks.append(Check(7, "min |zeta| for N_lambda >= 20", high, "> 0.95", high > 0.95))
    return checks, {"growth": rows, "N_lambda": nl, "fwd": fwd, "bwd": bwd, "S": S}


# ---------------------------------------------------------------------------
# Fig. 6: oblique incidence in 2+1D

def fig6_run(nl=20, S=0.2, Lz=40.0, Ly=30.0, t_end=30.0, sigma_perp=5.0, z_int=25.0,
             z_pulse=12.0, y_pulse=8.0, beta=-0.3, eps2=3.0, theta_deg=20.0, tau=5.0):
    """Initial modulated Gaussian (1/e half-width tau periods along the
    propagation direction, sigma_perp across) aimed at a moving interface;
    angles and k peaks come from the 2D spectra of the final snapshot on
    either side of the interface."""
    dz = 1.0 / nl
    g = GridSpec(int(Lz * nl), int(Ly * nl), dz, dz, S * dz, int(round(t_end / (S * dz))))
    mat = MaterialMap([(1.0, 1.0), (eps2, 1.0)], [InterfaceTrajectory("uniform", z_int, beta)])
    th = np.radians(theta_deg)
    src = InitialPulse(SourceSpec(kind="spatial_initial_pulse", omega=2 * np.pi, tau=tau, theta=th,
                                  sigma_y=sigma_perp, y0=y_pulse, z0=z_pulse))
    sim = Simulation(g, mat, [src], [])
    wall = sim.run()
    E = sim.E
    kc = int(mat.positions([0.0], g.n_steps * g.dt)[0, 0] / dz)
    gap = nl
    Er, Et = E[:kc - gap], E[kc + gap:]
    ar, kr, _ = measure_angles(Er, dz, dz, -1)
    at, kt, _ = measure_angles(Et, dz, dz, +1)
    bins_r = (2 * np.pi / (Er.shape[0] * dz), 2 * np.pi / (g.ny * dz))
    bins_t = (2 * np.pi / (Et.shape[0] * dz), 2 * np.pi / (g.ny * dz))
    p = oracle.UniformInterfaceProblem(1.0, np.sqrt(eps2), beta, th, 2 * np.pi)
    return {"theta_r": ar, "theta_t": at, "k_r": kr, "k_t": kt, "bins_r": bins_r,
            "bins_t": bins_t, "pred": oracle.predict(p), "E": E, "wall": wall, "dz": dz, "kc": kc}


def run_fig6(**kw):
    r = fig6_run(**kw)
    pr = r["pred"]
    checks = []
    tr, tt = np.degrees(pr.theta_r), np.degrees(pr.theta_t)
    checks.append(Check(3, "theta_r [deg]", r["theta_r"], f"{tr:.2f} +- 0.5",
                        abs(r["theta_r"] - tr) <= 0.5))
    checks.append(Check(3, "theta_t [deg]", r["theta_t"], f"{tt:.2f} +- 0.5",
                        abs(r["theta_t"] - tt) <= 0.5))
    # oracle k vectors are (k_y, k_z); measured peaks are (k_z, k_y)
    for lab, meas, ref, bins, n in (("reflected", r["k_r"], pr.k_r, r["bins_r"], 1.0),
                                    ("transmitted", r["k_t"], pr.k_t, r["bins_t"], np.sqrt(3.0))):
        dkz = abs(meas[0] - ref[1]) / bins[0]
        dky = abs(meas[1] - ref[0]) / bins[1]
        checks.append(Check(3, f"{lab} k_z peak offset [bins]", dkz, "<= 1", dkz <= 1))
        checks.append(Check(3, f"{lab} k_y peak offset [bins]", dky, "<= 1", dky <= 1))
        w_meas = np.hypot(*meas) / n
        w_ref = pr.omega_r if lab == "reflected" else pr.omega_t
        dw = abs(w_meas - w_ref) / (np.hypot(*bins) / n)
        checks.append(Check(3, f"{lab} omega from k peak [bins]", dw, "<= 1", dw <= 1,
                            f"omega {w_meas:.4f} vs {w_ref:.4f}"))
    return checks, r


# ---------------------------------------------------------------------------
# Fig. 7: wedge

def wedge_kinematics(zI, zII, v1, v2, n2, T0, z_probe_r):
    """Pulse-center event times for the first bounces (incident peak at z
    at time T0 + z in medium 1)."""
    c2 = 1 / n2
    z1 = (zI + v1 * T0) / (1 - v1)
    t1 = T0 + z1
    t2 = (zII - z1 + c2 * t1) / (c2 - v2)
    z2 = zII + v2 * t2
    t3 = (z2 + c2 * t2 - zI) / (c2 + v1)
    z3 = zI + v1 * t3
    t4 = (zII - z3 + c2 * t3) / (c2 - v2)
    z4 = zII + v2 * t4
    t_meet = (zII - zI) / (v1 - v2)
    zp = z3 + 0.25 * (zII + v2 * t3 - z3)
    ev = {"t1": t1, "z1": z1, "t2": t2, "z2": z2, "t3": t3, "z3": z3, "t4": t4, "z4": z4,
          "t_meet": t_meet, "z_probe": zp}
    ev["R1_at_r"] = t1 + (z1 - z_probe_r)
    ev["esc_at_r"] = t3 + (z3 - z_probe_r)
    ev["T1_at_p"] = t1 + (zp - z1) / c2
    ev["R2_at_p"] = t2 + (z2 - zp) / c2
    ev["R3_at_p"] = t3 + (zp - z3) / c2
    ev["R4_at_p"] = t4 + (z4 - zp) / c2
    return ev


def wedge_run(nl=200, S=0.5, eps=(1.0, 3.0, 6.0), v1=0.2, v2=-0.3, zI=20.0, zII=60.0, tau=3.0,
              T0=12.0, z_src=6.0, z_r=3.0):
    n2 = np.sqrt(eps[1])
    ev = wedge_kinematics(zI, zII, v1, v2, n2, T0, z_r)
    t_end = min(ev["R3_at_p"] + 4.0, ev["t_meet"] - 1.0)
    dz = 1.0 / nl
    L = zII + 20.0
    g = GridSpec(int(L * nl), 1, dz, dz, S * dz, int(round(t_end / (S * dz))))
    mat = MaterialMap([(e, 1.0) for e in eps],
                      [InterfaceTrajectory("uniform", zI, v1), InterfaceTrajectory("uniform", zII, v2)])
    src = LineSource(SourceSpec(omega=2 * np.pi, tau=tau, T0=T0, location=int(round(z_src * nl))))
    pr_r = PointProbe("medium1", int(round(z_r * nl)))
    pr_m = DirectionProbe("medium2", int(round(ev["z_probe"] * nl)))
    sim = Simulation(g, mat, [src], [pr_r, pr_m])
    wall = sim.run()
    t1, r = pr_r.array()
    t2, fwd, bwd = pr_m.array()

    def gate(t, v, lo, hi):
        m = (t >= lo) & (t <= hi)
        return t[m], v[m]
    pulses = [
        gate(t1, r, 0.0, 0.5 * (ev["R1_at_r"] + ev["esc_at_r"])),
        gate(t2, bwd, 0.5 * (ev["T1_at_p"] + ev["R2_at_p"]), 0.5 * (ev["R2_at_p"] + ev["R4_at_p"])),
        gate(t2, fwd, 0.5 * (ev["T1_at_p"] + ev["R3_at_p"]), t2[-1]),
    ]
    moments = [lobe_moments(t, v) for t, v in pulses]
    return {"events": ev, "pulses": pulses, "moments": moments, "wall": wall,
            "ref": oracle.wedge_cascade(eps, v1, v2, 2 * np.pi, bounces=3)}


def run_fig7(**kw):
    r = wedge_run(**kw)
    checks = []
    for j, ((wc, bw), ref) in enumerate(zip(r["moments"], r["ref"]), 1):
        err = _rel(wc, ref["omega"])
        checks.append(Check(4, f"reflection {j} center frequency / omega_i", wc / (2 * np.pi),
                            f"{ref['omega'] / (2 * np.pi):.4f} within 2%", err <= 0.02,
                            f"interface {ref['interface']}, medium {ref['medium']}"))
    bws = [m[1] for m in r["moments"]]
    inc = all(b2 > b1 for b1, b2 in zip(bws, bws[1:]))
    checks.append(Check(4, "rms bandwidth strictly increasing", " < ".join(f"{b:.3f}" for b in bws),
                        "strictly increasing", inc))
    return checks, r


# ---------------------------------------------------------------------------
# Fig. 8: accelerated interface

def accel_run(nl=100, S=0.2, a_prime=-0.2, beta0=0.5, eps2=3.0, sigma=1.5, z_pulse=10.0,
              z_probe=1.5, t_end=18.5, Lz=25.0):
    """Initial modulated Gaussian (1/e half-width sigma wavelengths) in
    vacuum behind an interface with constant proper acceleration.  The
    interface starts at beta0 moving away from the pulse so that the whole
    pulse scatters while n2 |beta| < 1.  The reflected wave is the -z part
    of the field at a probe behind the pulse."""
    dz = 1.0 / nl
    g = GridSpec(int(Lz * nl), 1, dz, dz, S * dz, int(round(t_end / (S * dz))))
    z0 = z_pulse + 2 * sigma + 0.3
    tr = InterfaceTrajectory("accelerated", z0, a_prime=a_prime, beta0=beta0)
    mat = MaterialMap([(1.0, 1.0), (eps2, 1.0)], [tr])
    src = InitialPulse(SourceSpec(kind="spatial_initial_pulse", omega=2 * np.pi, tau=sigma,
                                  sigma_z=sigma, z0=z_pulse))
    kp = int(round(z_probe * nl))
    pr = DirectionProbe("reflected", kp)
    sim = Simulation(g, mat, [src], [pr])
    wall = sim.run()
    t, _, b = pr.array()
    t, b = t[::5], b[::5]
    p = oracle.AcceleratedInterfaceProblem(1.0, np.sqrt(eps2), a_prime, beta0, z0)
    er, _ = oracle.accelerated_scattered_fields(p, lambda z, tt: src.field(0.0, z, tt, 1.0),
                                                np.full(t.shape, kp * dz), t, t_min=-30.0)
    return {"t": t, "sim": b, "oracle": er, "wall": wall, "problem": p}


def chirp_monotonic(t, v, level=0.1, smooth=0.5, stride=0.1):
    """Instantaneous frequency over the part of the pulse whose envelope
    exceeds ``level`` of its peak, averaged over ``smooth`` time units and
    sampled every ``stride``; returns (strictly increasing?, times,
    frequencies)."""
    tm, f, env = instantaneous_frequency(t, v)
    env = 0.5 * (env[1:] + env[:-1])
    m = env >= level * env.max()
    dt = t[1] - t[0]
    w = max(int(round(smooth / dt)), 1)
    f = np.convolve(f, np.ones(w) / w, mode="same")
    idx = np.where(m)[0]
    idx = idx[(idx >= w) & (idx < len(f) - w)]
    st = max(int(round(stride / dt)), 1)
    fs = f[idx][::st]
    return bool(np.all(np.diff(fs) > 0)), tm[idx][::st], fs


def run_fig8(**kw):
    r = accel_run(**kw)
    xc = normalized_xcorr(r["sim"], r["oracle"])
    mono, tt, ff = chirp_monotonic(r["t"], r["sim"])
    r["chirp"] = (tt, ff)
    checks = [Check(5, "normalized cross-correlation vs closed form", xc, "> 0.98", xc > 0.98),
              Check(5, "reflected chirp strictly monotonic", f"{ff[0] / (2 * np.pi):.3f} -> "
                    f"{ff[-1] / (2 * np.pi):.3f} omega_i", "strictly increasing", mono,
                    f"{len(ff)} samples")]
    return checks, r


# ---------------------------------------------------------------------------
# Fig. 9: curved interface (qualitative)

def curved_run(beta, nl=20, S=0.2, Lz=35.0, Ly=20.0, R=6.0, sigma_y=4.0, tau=6.0, T0=15.0,
               z_meet=14.0, t_end=62.0):
    """Parabolic interface z = z_v + (y - y0)^2 / (2 R) between eps 1 and 3,
    lit by a normally incident beam.  The vertex is at z_meet when the
    incident peak arrives there, for any beta, so static and moving runs
    share the same geometry at the moment of scattering.  The focus is the
    maximum of the time-integrated E^2 on the axis inside medium 2, the
    spot width its transverse FWHM there."""
    dz = 1.0 / nl
    ny = int(Ly * nl) + 1
    g = GridSpec(int(Lz * nl), ny, dz, dz, S * dz, int(round(t_end / (S * dz))))
    y0 = (ny - 1) * dz / 2
    zv0 = z_meet - beta * (T0 + z_meet)
    tr = InterfaceTrajectory("curved_parabolic", zv0, beta=beta,
                             shape_coeffs=(0.0, 0.0, 1 / (2 * R)), y0=y0)
    mat = MaterialMap([(1.0, 1.0), (3.0, 1.0)], [tr])
    src = LineSource(SourceSpec(omega=2 * np.pi, tau=tau, T0=T0, location=int(1.5 * nl),
                                sigma_y=sigma_y, y0=y0))
    sim = Simulation(g, mat, [src], [])
    flu = np.zeros((g.nz, ny))

    def cb(s):
        E = s.E
        np.add(flu, np.where(s.state.eps > 1.5, E * E, 0.0), out=flu)

    wall = sim.run(callback=cb)
    i0 = (ny - 1) // 2
    ax = flu[:, i0]
    k = int(np.argmax(ax))
    zf = float(g.z[k])
    if 0 < k < g.nz - 1:
        a, b, c = ax[k - 1], ax[k], ax[k + 1]
        den = a - 2 * b + c
        zf += 0.0 if den == 0 else 0.5 * (a - c) / den * dz
    prof = flu[k]
    above = np.where(prof >= 0.5 * prof.max())[0]
    width = float((above[-1] - above[0]) * dz)
    return {"z_focus": zf, "width": width, "axis": ax, "fluence": flu, "wall": wall, "dz": dz}


def run_fig9(**kw):
    st = curved_run(0.0, **kw)
    mv = curved_run(-0.3, **kw)
    ratio = mv["width"] / st["width"]
    checks = [Check(9, "focal z moving - static", mv["z_focus"] - st["z_focus"], "> 0",
                    mv["z_focus"] > st["z_focus"],
                    f"static {st['z_focus']:.3f}, moving {mv['z_focus']:.3f}"),
              Check(9, "focal width moving / static", ratio, "within 20% of 1",
                    abs(ratio - 1) <= 0.2, f"static {st['width']:.3f}, moving {mv['width']:.3f}")]
    return checks, {"static": st, "moving": mv}


# ---------------------------------------------------------------------------
# Appendix C: matching

def matching_run(scale=8, beta=-0.3, eps=1.5, wavelength=None, tau=20.0, delay=100.0):
    """Moving numerical interface between identical media: reflection at a
    scattered-field probe over the incident peak, and the spectral peak of
    the transmitted pulse over that of the incident pulse at the same
    node.  ``wavelength`` None gives the baseband Fig. 2 pulse."""
    dz = 1.0 / scale
    S = 0.5
    g = GridSpec(int(1600 * scale), 1, dz, dz, S * dz, int(round(1500 / (S * dz))))
    mat = MaterialMap([(eps, 1.0), (eps, 1.0)], [InterfaceTrajectory("uniform", 600.0, beta)])
    omega = 0.0 if wavelength is None else 2 * np.pi / wavelength
    src = LineSource(SourceSpec(omega=omega, tau=tau, T0=delay, location=int(50 * scale)))
    pr_r = PointProbe("reflected", int(40 * scale))
    k_t = int(1200 * scale)
    pr_t = PointProbe("transmitted", k_t)
    inc = {"peak": 0.0, "series": []}

    def cb(s):
        inc["peak"] = max(inc["peak"], abs(src.incident_E(src.ks)))
        inc["series"].append(src.incident_E(k_t))

    sim = Simulation(g, mat, [src], [pr_r, pr_t])
    wall = sim.run(callback=cb)
    _, r = pr_r.array()
    t, tr = pr_t.array()
    _, _, w_t = spectrum(tr, t[1] - t[0], pad=16)
    _, _, w_i = spectrum(np.array(inc["series"]), t[1] - t[0], pad=16)
    shift = abs(w_t / w_i - 1) if w_i > 0 else np.nan
    return {"reflection": float(np.abs(r).max() / inc["peak"]), "shift": shift,
            "w_t": w_t, "w_i": w_i, "wall": wall, "t": t, "transmitted": tr,
            "incident": np.array(inc["series"])}


def run_matching(scale=8, carrier_scale=4):
    """Reflection from the Fig. 2 baseband pulse; frequency shift from a
    modulated pulse (20 length units per carrier wavelength)."""
    r = matching_run(scale)
    c = matching_run(carrier_scale, wavelength=20.0, tau=40.0, delay=150.0)
    return [Check(8, "reflected / incident amplitude", r["reflection"], "< 1e-3",
                  r["reflection"] < 1e-3, f"baseband pulse, scale {scale}"),
            Check(8, "transmitted frequency shift", c["shift"], "< 1e-3", c["shift"] < 1e-3,
                  f"omega_t {c['w_t']:.6f}, omega_i {c['w_i']:.6f}; carrier pulse reflection "
                  f"{c['reflection']:.2e} at scale {carrier_scale}")], {"baseband": r, "carrier": c}


# ---------------------------------------------------------------------------
# reduction and oracle invariants

def reduction_error(ny=1, steps=600):
    """Largest relative difference between the local hybrid and the
    conventional field histories with every interface at rest."""
    nz = 300
    g = GridSpec(nz, ny, 1.0, 1.0, 0.5 / np.sqrt(2) if ny > 1 else 0.5, steps)
    mats = MaterialMap([(1.0, 1.0), (4.0, 1.0)], [InterfaceTrajectory("uniform", 150.3, 0.0)])
    out = []
    for scheme in ("local_hybrid", "conventional_only"):
        src = LineSource(SourceSpec(tau=10.0, T0=40.0, location=20, sigma_y=ny / 4 if ny > 1 else np.inf,
                                    y0=ny / 2))
        sim = Simulation(g, mats, [src], [], scheme=scheme)
        hist = []
        sim.run(callback=lambda s: hist.append(s.state.D.copy()))
        out.append(np.array(hist))
    scale = np.abs(out[1]).max()
    return float(np.abs(out[0] - out[1]).max() / scale)


def oracle_static_error(rng=None, n_cases=50):
    """beta = 0 oracle against Fresnel (TE) and Snell over random cases."""
    rng = np.random.default_rng(0) if rng is None else rng
    worst = 0.0
    for _ in range(n_cases):
        n1, n2 = rng.uniform(1, 3, 2)
        th = rng.uniform(0, 0.9 * (np.arcsin(min(n2 / n1, 1.0)) if n2 < n1 else np.pi / 2))
        p = oracle.UniformInterfaceProblem(n1, n2, 0.0, th, 2 * np.pi)
        pr = oracle.predict(p)
        tt = np.arcsin(n1 * np.sin(th) / n2)
        c1, c2 = n1 * np.cos(th), n2 * np.cos(tt)
        g = (c1 - c2) / (c1 + c2)
        t = 2 * c1 / (c1 + c2)
        worst = max(worst, abs(pr.Gamma - g), abs(pr.T - t), abs(pr.theta_t - tt),
                    abs(pr.theta_r - th), abs(pr.omega_r / p.omega_i - 1), abs(pr.omega_t / p.omega_i - 1))
    return worst


def frame_round_trip_error(rng=None, n_cases=50):
    rng = np.random.default_rng(1) if rng is None else rng
    worst = 0.0
    for _ in range(n_cases):
        f = dict(zip(("Ex", "By", "Bz", "Dx", "Hy", "Hz"), rng.standard_normal(6)))
        b = rng.uniform(-0.95, 0.95)
        back = oracle.lorentz_boost(oracle.lorentz_boost(f, b), -b)
        worst = max(worst, max(abs(back[k] - f[k]) / max(abs(f[k]), 1.0) for k in f))
        t, z = rng.standard_normal(2)
        t2, z2 = oracle.lorentz_event(*oracle.lorentz_event(t, z, b), -b)
        worst = max(worst, abs(t2 - t), abs(z2 - z))
    return worst


def pure_space_shared_sample(seed=2):
    """Stationary interface: the B updates on either side of the interface
    node read the same stored E sample.  Returns the largest mismatch
    between the update increments and -S times the differences of that
    single E array."""
    rng = np.random.default_rng(seed)
    g = GridSpec(40, 1, 1.0, 1.0, 0.5, 1)
    st = FieldState.zeros(g)
    st.eps[20:] = 4.0
    st.D[:] = rng.standard_normal((40, 1))
    st.By[:] = rng.standard_normal((39, 1))
    E = st.E
    By, _ = update_B(st, g)
    k = 20
    left = (st.By[k - 1] - By[k - 1]) / g.S     # E[k] - E[k-1]
    right = (st.By[k] - By[k]) / g.S            # E[k+1] - E[k]
    e_from_left = left + E[k - 1]
    e_from_right = E[k + 1] - right
    return float(max(abs(e_from_left - E[k]).max(), abs(e_from_right - E[k]).max(),
                     abs(e_from_left - e_from_right).max()))


def pure_time_d_hold(seed=3):
    """Instantaneous eps switch everywhere: with the D-form update the
    stored D is carried across the switch untouched; only E = D/eps
    changes.  Returns max |D_after - (D_before + curl H)|."""
    rng = np.random.default_rng(seed)
    g = GridSpec(40, 1, 1.0, 1.0, 0.5, 1)
    st = FieldState.zeros(g)
    st.D[:] = rng.standard_normal((40, 1))
    st.By[:] = rng.standard_normal((39, 1))
    ref = st.copy()
    step_conventional(st, g, np.full((40, 1), 4.0), time_switch="D", abc=False)
    By = ref.By - g.S * (ref.E[1:] - ref.E[:-1])
    expect = ref.D.copy()
    expect[1:-1] -= g.S * (By[1:] - By[:-1])
    return float(np.abs(st.D - expect).max())


def run_invariants():
    checks = []
    e1 = reduction_error(1)
    e2 = reduction_error(24, steps=300)
    checks.append(Check(10, "v=0 hybrid vs conventional history (1D)", e1, "<= 1e-12", e1 <= 1e-12))
    checks.append(Check(10, "v=0 hybrid vs conventional history (2D)", e2, "<= 1e-12", e2 <= 1e-12))
    eo = oracle_static_error()
    checks.append(Check(10, "beta=0 oracle vs Fresnel/Snell", eo, "<= 1e-12", eo <= 1e-12))
    ef = frame_round_trip_error()
    checks.append(Check(10, "frame-hopping round trip", ef, "<= 1e-12", ef <= 1e-12))
    es = pure_space_shared_sample()
    checks.append(Check(10, "pure-space: shared E sample at interface", es, "<= 1e-12", es <= 1e-12))
    et = pure_time_d_hold()
    checks.append(Check(10, "pure-time: D unchanged by eps switch", et, "<= 1e-12", et <= 1e-12))
    return checks, {}


FIGURES = {
    "fig2": run_fig2,
    "fig5": run_fig5,
    "fig6": run_fig6,
    "fig7": run_fig7,
    "fig8": run_fig8,
    "fig9": run_fig9,
    "matching": run_matching,
    "invariants": run_invariants,
}


def run_figure(fig_id, **kw):
    t0 = time.perf_counter()
    checks, data = FIGURES[fig_id](**kw)
    return checks, data, time.perf_counter() - t0
