"""Sources, probes and measurements on simulation output."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.signal import hilbert


class PulseOverlap(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# sources

@dataclass
class SourceSpec:
    kind: str = "line_time_pulse"      # or spatial_initial_pulse
    E0: float = 1.0
    omega: float = 0.0                 # carrier; 0 gives a baseband Gaussian
    tau: float = 1.0                   # temporal 1/e half-width
    T0: float = 0.0                    # delay
    location: int = 10                 # TF/SF plane (node index)
    theta: float = 0.0                 # incidence angle for the initial pulse
    sigma_y: float = np.inf
    sigma_z: float | None = None       # along propagation; default tau/n
    y0: float = 0.0
    z0: float = 0.0

    def waveform(self, t):
        env = self.E0 * np.exp(-((t - self.T0) / self.tau) ** 2)
        return env if self.omega == 0 else env * np.cos(self.omega * (t - self.T0))


class LineSource:
    """Total-field/scattered-field plane at node ``ks`` fed by a 1D
    auxiliary grid in the local medium, with an optional transverse
    profile exp(-((y-y0)/sigma_y)^2).  Nodes k >= ks hold the total field."""

    def __init__(self, spec: SourceSpec):
        self.s = spec

    def attach(self, sim):
        g = sim.spec
        ks = self.s.location
        if not 2 <= ks < g.nz - 2:
            raise ValueError("source plane outside the grid")
        if sim.hybrid and sim.region is not None:
            lo, hi = sim.region.k_min.min(), sim.region.k_max.max()
            if lo - 2 <= ks <= hi + 2:
                from .hybrid import SourceInTransitionRegion
                raise SourceInTransitionRegion(f"source plane {ks} inside a transition band")
        self.ks = ks
        self.eps = float(sim.state.eps[ks].mean())
        self.S = g.S
        self.dt = g.dt
        n = g.nz
        self.Da = np.zeros(n)
        self.Ba = np.zeros(n - 1)
        if np.isfinite(self.s.sigma_y):
            self.profile = np.exp(-((g.y - self.s.y0) / self.s.sigma_y) ** 2)
        else:
            self.profile = np.ones(g.ny)
        self.Ba_new = self.Ba

    def correct_B(self, By, Bz, n):
        ks = self.ks
        self.Ba_new = self.Ba - self.S * (self.Da[1:] - self.Da[:-1]) / self.eps
        By[ks - 1] += self.S * (self.Da[ks] / self.eps) * self.profile

    def correct_D(self, D, n):
        D[self.ks] += self.S * self.Ba_new[self.ks - 1] * self.profile

    def advance(self, n):
        Da, Ba = self.Da, self.Ba_new
        Dn = Da.copy()
        Dn[1:-1] = Da[1:-1] - self.S * (Ba[1:] - Ba[:-1])
        Dn[0] = self.eps * self.s.waveform((n + 0.5) * self.dt)
        q = (self.S / np.sqrt(self.eps) - 1) / (self.S / np.sqrt(self.eps) + 1)
        Dn[-1] = Da[-2] + q * (Dn[-2] - Da[-1])
        self.Da, self.Ba = Dn, Ba

    def incident_E(self, k):
        """Incident field currently at node k (time of the stored D)."""
        return self.Da[k] / self.eps


class InitialPulse:
    """Modulated Gaussian wave packet placed in the grid at t = 0,
    travelling at angle theta from z in the medium at its center."""

    def __init__(self, spec: SourceSpec):
        self.s = spec

    def field(self, y, z, t, n1):
        s = self.s
        c, sn = np.cos(s.theta), np.sin(s.theta)
        yy, zz = y - s.y0, z - s.z0
        par = yy * sn + zz * c - t / n1
        perp = yy * c - zz * sn
        sig_par = s.sigma_z if s.sigma_z is not None else s.tau / n1
        env = np.exp(-(par / sig_par) ** 2)
        if np.isfinite(s.sigma_y):
            env = env * np.exp(-(perp / s.sigma_y) ** 2)
        k = n1 * s.omega
        return s.E0 * env * np.cos(k * par)

    def attach(self, sim):
        g, st = sim.spec, sim.state
        kc = int(np.clip(round(self.s.z0 / g.dz), 0, g.nz - 1))
        eps = float(st.eps[kc].mean())
        n1 = np.sqrt(eps)
        z = g.z[:, None]
        y = g.y[None, :]
        st.D[:] = eps * self.field(y, z, -0.5 * g.dt, n1) * (st.eps == eps)
        zy = (np.arange(g.nz - 1)[:, None] + 0.5) * g.dz
        st.By[:] = n1 * np.cos(self.s.theta) * self.field(y, zy, 0.0, n1)
        if g.ny > 1:
            yz = (np.arange(g.ny - 1)[None, :] + 0.5) * g.dy
            st.Bz[:] = -n1 * np.sin(self.s.theta) * self.field(yz, z, 0.0, n1)

    def correct_B(self, By, Bz, n):
        pass

    def correct_D(self, D, n):
        pass

    def advance(self, n):
        pass


def make_source(spec: SourceSpec):
    if spec.kind == "line_time_pulse":
        return LineSource(spec)
    if spec.kind == "spatial_initial_pulse":
        return InitialPulse(spec)
    raise ValueError(f"unknown source kind {spec.kind!r}")


def inject_source(state, spec: SourceSpec, n, dt=1.0):
    """Soft additive injection of the source waveform on D at one plane."""
    if spec.E0 == 0:
        return state
    state.D[spec.location] += state.eps[spec.location] * spec.waveform((n + 0.5) * dt)
    return state


# ---------------------------------------------------------------------------
# probes

class PointProbe:
    def __init__(self, name, k, i=0, field="E"):
        self.name, self.k, self.i, self.field = name, k, i, field
        self.t = []
        self.values = []

    def attach(self, sim):
        self.dt = sim.spec.dt

    def record(self, sim):
        st = sim.state
        if self.field == "E":
            v = st.D[self.k, self.i] / st.eps[self.k, self.i]
            tt = (sim.n - 0.5) * self.dt
        else:
            v = st.By[self.k, self.i] / st.mu_y[self.k, self.i]
            tt = sim.n * self.dt
        self.t.append(tt)
        self.values.append(v)

    def array(self):
        return np.array(self.t), np.array(self.values)

    def write(self, path):
        t, v = self.array()
        np.savetxt(path, np.column_stack([t, v]), delimiter=",", header="t,value",
                   comments="", fmt="%.12g")


class DirectionProbe:
    """Forward and backward parts of a 1D field at node k.

    After step n the state holds B^n and E^{n+1/2}; E^{n-1/2} from the
    previous step pairs with H averaged over B^{n-1}, B^n and the two cells
    around k.  With the local index n the +z part is (E + H/n)/2 and the
    -z part (E - H/n)/2."""

    def __init__(self, name, k, i=0):
        self.name, self.k, self.i = name, k, i
        self.t, self.fwd, self.bwd = [], [], []
        self._prev = None

    def attach(self, sim):
        self.dt = sim.spec.dt

    def record(self, sim):
        st, k, i = sim.state, self.k, self.i
        h = 0.5 * (st.By[k - 1, i] / st.mu_y[k - 1, i] + st.By[k, i] / st.mu_y[k, i])
        e = st.D[k, i] / st.eps[k, i]
        nidx = np.sqrt(st.eps[k, i] * 0.5 * (st.mu_y[k - 1, i] + st.mu_y[k, i]))
        if self._prev is not None:
            e_old, h_old, n_old = self._prev
            hm = 0.5 * (h + h_old)
            self.t.append((sim.n - 1.5) * self.dt)
            self.fwd.append(0.5 * (e_old + hm / n_old))
            self.bwd.append(0.5 * (e_old - hm / n_old))
        self._prev = (e, h, nidx)

    def array(self):
        return np.array(self.t), np.array(self.fwd), np.array(self.bwd)


class SnapshotProbe:
    """Full physical Ex snapshots at given steps (kept in memory)."""

    def __init__(self, name, steps):
        self.name = name
        self.steps = set(int(s) for s in steps)
        self.frames = {}

    def attach(self, sim):
        pass

    def record(self, sim):
        if sim.n in self.steps:
            self.frames[sim.n] = sim.state.E.copy()


class RowProbe:
    """Physical Ex along z on one row, every ``every`` steps."""

    def __init__(self, name, i=0, every=1):
        self.name, self.i, self.every = name, i, every
        self.steps = []
        self.rows = []

    def attach(self, sim):
        pass

    def record(self, sim):
        if sim.n % self.every == 0:
            self.steps.append(sim.n)
            self.rows.append(sim.state.E[:, self.i].copy())

    def array(self):
        return np.array(self.steps), np.array(self.rows)


def write_snapshot(path, E, spec, step):
    """Header line then comma-separated rows with 12 significant digits."""
    path = Path(path)
    nz, ny = E.shape
    with path.open("w") as f:
        f.write(f"# nz={nz} ny={ny} dz={spec.dz:.12g} dy={spec.dy:.12g} dt={spec.dt:.12g} step={step}\n")
        np.savetxt(f, E, delimiter=",", fmt="%.12g")


def read_snapshot(path):
    path = Path(path)
    with path.open() as f:
        head = f.readline()[1:].split()
    meta = {k: float(v) for k, v in (h.split("=") for h in head)}
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return meta, data


# ---------------------------------------------------------------------------
# spectral analysis

def quad_peak(x, y, j):
    """Sub-sample peak position and height of y around index j."""
    if j <= 0 or j >= len(y) - 1:
        return x[j], y[j]
    a, b, c = y[j - 1], y[j], y[j + 1]
    den = a - 2 * b + c
    d = 0.0 if den == 0 else 0.5 * (a - c) / den
    return x[j] + d * (x[1] - x[0]), b - 0.25 * (a - c) * d


def spectrum(values, d, pad=4):
    """One-sided magnitude spectrum with zero padding; returns
    (angular frequency grid, magnitude, peak angular frequency)."""
    values = np.asarray(values, float)
    nfft = 1 << int(np.ceil(np.log2(len(values) * pad)))
    mag = np.abs(np.fft.rfft(values, nfft)) * d
    w = 2 * np.pi * np.fft.rfftfreq(nfft, d)
    j = int(np.argmax(mag))
    wp, _ = quad_peak(w, mag, j)
    return w, mag, float(max(wp, 0.0))


def spectrum_2d(field2d, dz, dy, pad=4):
    """|FFT| of a (nz, ny) field on a zero-padded k grid; returns
    (kz, ky, magnitude) with fftshifted axes."""
    nz, ny = field2d.shape
    Nz = 1 << int(np.ceil(np.log2(nz * pad)))
    Ny = 1 << int(np.ceil(np.log2(ny * pad)))
    F = np.fft.fftshift(np.abs(np.fft.fft2(field2d, (Nz, Ny))))
    kz = np.fft.fftshift(2 * np.pi * np.fft.fftfreq(Nz, dz))
    ky = np.fft.fftshift(2 * np.pi * np.fft.fftfreq(Ny, dy))
    return kz, ky, F


def peak_2d(kz, ky, F, kz_sign=None):
    """Peak (kz, ky) of a 2D spectrum with quadratic refinement; kz_sign
    restricts to one half plane (a real field has mirror peaks)."""
    G = F.copy()
    if kz_sign is not None:
        G[(np.sign(kz) != kz_sign), :] = 0
    a, b = np.unravel_index(np.argmax(G), G.shape)
    kzp, _ = quad_peak(kz, G[:, b], a)
    kyp, _ = quad_peak(ky, G[a, :], b)
    return kzp, kyp, (kz[1] - kz[0], ky[1] - ky[0])


def measure_angles(field2d, dz, dy, direction):
    """Propagation angle from z of the dominant plane-wave component in a
    windowed snapshot; direction +1 for +z travel, -1 for -z."""
    kz, ky, F = spectrum_2d(field2d, dz, dy)
    kzp, kyp, bins = peak_2d(kz, ky, F, kz_sign=direction)
    # a real field has its twin at (-kz, -ky); fold onto kz direction given
    return float(np.degrees(np.arctan2(abs(kyp), abs(kzp)))), (kzp, kyp), bins


def envelope(values):
    return np.abs(hilbert(np.asarray(values, float)))


def signed_peak(t, values):
    """Largest-magnitude sample with sign, refined by a 3-point parabola."""
    values = np.asarray(values, float)
    j = int(np.argmax(np.abs(values)))
    tp, vp = quad_peak(np.asarray(t, float), values, j)
    return tp, vp


def measure_coefficients(reflected, transmitted_peak, incident_peak):
    """Gamma from the signed reflected peak, T from the transmitted peak,
    both over the incident peak.  ``reflected`` is (t, values)."""
    _, r = signed_peak(*reflected)
    return r / incident_peak, transmitted_peak / incident_peak


def centroid_frequency(t, values, pad=4):
    w, mag, _ = spectrum(values, t[1] - t[0], pad)
    p = mag**2
    return float(np.sum(w * p) / np.sum(p))


def rms_bandwidth(t, values, pad=4):
    w, mag, _ = spectrum(values, t[1] - t[0], pad)
    p = mag**2
    wc = np.sum(w * p) / np.sum(p)
    return float(np.sqrt(np.sum((w - wc) ** 2 * p) / np.sum(p)))


def normalized_xcorr(a, b):
    """Peak normalized cross-correlation over integer lags."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    c = np.correlate(a, b, mode="full")
    return float(np.max(c) / np.sqrt(np.sum(a * a) * np.sum(b * b)))


def instantaneous_frequency(t, values):
    z = hilbert(np.asarray(values, float))
    ph = np.unwrap(np.angle(z))
    return 0.5 * (t[1:] + t[:-1]), np.diff(ph) / np.diff(t), np.abs(z)


def lobe_moments(t, values, floor=0.01, pad=4):
    """Center frequency and rms bandwidth of the main spectral lobe.

    Power is taken over the contiguous band around the spectral peak where
    the magnitude stays above ``floor`` times the peak, so grid-scale noise
    far from the pulse does not bias the moments."""
    w, mag, _ = spectrum(values, t[1] - t[0], pad)
    j = int(np.argmax(mag))
    lo, hi = j, j
    thr = floor * mag[j]
    while lo > 0 and mag[lo - 1] >= thr:
        lo -= 1
    while hi < len(mag) - 1 and mag[hi + 1] >= thr:
        hi += 1
    ww, p = w[lo:hi + 1], mag[lo:hi + 1] ** 2
    wc = np.sum(ww * p) / np.sum(p)
    return float(wc), float(np.sqrt(np.sum((ww - wc) ** 2 * p) / np.sum(p)))
