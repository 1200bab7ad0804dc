"""Staggered grid, moving interfaces, material assignment and the
per-step transition bands.

Index conventions (array index -> physical position, units of dz, dy):

    D, E     [k, i]  at (k,     i)      time n + 1/2
    By, Hy   [k, i]  at (k+1/2, i)      time n
    Bz, Hz   [k, i]  at (k,     i+1/2)  time n

so By has shape (nz-1, ny) and Bz has shape (nz, ny-1).  ny = 1 is the
1+1D case and every y derivative drops out.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .stability import courant_limit


class OverlappingTransitionRegions(RuntimeError):
    pass


class ValidationError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    nz: int
    ny: int
    dz: float
    dy: float
    dt: float
    n_steps: int = 0

    def __post_init__(self):
        if self.nz < 1 or self.ny < 1:
            raise ValidationError("grid.nz and grid.ny must be >= 1")
        if min(self.dz, self.dy, self.dt) <= 0:
            raise ValidationError("grid.dz, grid.dy, grid.dt must be > 0")

    @property
    def S(self) -> float:
        return self.dt / self.dz

    @property
    def Sy(self) -> float:
        return self.dt / self.dy

    @cached_property
    def z(self):
        return np.arange(self.nz) * self.dz

    @cached_property
    def y(self):
        return np.arange(self.ny) * self.dy


KINDS = ("uniform", "accelerated", "curved_parabolic", "piecewise_linear")


@dataclass(frozen=True)
class InterfaceTrajectory:
    kind: str = "uniform"
    z0: float = 0.0
    beta: float = 0.0
    a_prime: float = 0.0
    beta0: float = 0.0
    shape_coeffs: tuple = ()
    segments: tuple = ()
    y0: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown trajectory kind {self.kind!r}")
        if self.kind in ("uniform", "curved_parabolic") and abs(self.beta) >= 1:
            raise ValidationError("superluminal interface velocity")
        if self.kind == "accelerated":
            if abs(self.beta0) >= 1:
                raise ValidationError("superluminal initial velocity")
            if self.a_prime == 0:
                raise ValidationError("accelerated trajectory needs a_prime != 0")
        if self.kind == "piecewise_linear":
            if not self.segments:
                raise ValidationError("piecewise trajectory needs segments")
            if any(abs(b) >= 1 for _, b in self.segments):
                raise ValidationError("superluminal segment velocity")
            ts = [t for t, _ in self.segments]
            if ts != sorted(ts) or ts[0] > 0:
                raise ValidationError("segments must be time-ordered and start at t <= 0")

    @property
    def xi0(self):
        return np.arcsinh(self.beta0 / np.sqrt(1 - self.beta0**2))

    def _shape(self, y):
        y = np.asarray(y, float) - self.y0
        return sum(c * y**j for j, c in enumerate(self.shape_coeffs)) if self.shape_coeffs else 0.0 * y

    def position(self, y, t):
        y = np.asarray(y, float)
        if self.kind == "uniform":
            return self.z0 + self.beta * t + 0.0 * y
        if self.kind == "curved_parabolic":
            return self.z0 + self._shape(y) + self.beta * t
        if self.kind == "accelerated":
            a, x0 = self.a_prime, self.xi0
            z = (np.sqrt(1 + (a * t + np.sinh(x0)) ** 2) - np.cosh(x0)) / a
            return self.z0 + z + 0.0 * y
        z = self.z0
        segs = list(self.segments) + [(np.inf, 0.0)]
        for (ta, b), (tb, _) in zip(segs[:-1], segs[1:]):
            if t <= ta:
                break
            z += b * (min(t, tb) - max(ta, 0.0))
        return z + 0.0 * y

    def velocity(self, y, t):
        y = np.asarray(y, float)
        if self.kind in ("uniform", "curved_parabolic"):
            return self.beta + 0.0 * y
        if self.kind == "accelerated":
            return np.tanh(np.arcsinh(self.a_prime * t + np.sinh(self.xi0))) + 0.0 * y
        b = self.segments[0][1]
        for ts, bs in self.segments:
            if t >= ts:
                b = bs
        return b + 0.0 * y


@dataclass
class MaterialMap:
    media: list  # [(eps, mu), ...]
    interfaces: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.media) != len(self.interfaces) + 1:
            raise ValidationError("need exactly one more medium than interfaces")
        for eps, mu in self.media:
            if eps < 1 or mu < 1:
                raise ValidationError("media need eps >= 1 and mu >= 1")

    @property
    def eps(self):
        return np.array([m[0] for m in self.media], float)

    @property
    def mu(self):
        return np.array([m[1] for m in self.media], float)

    def positions(self, y, t):
        """Interface positions, shape (n_interfaces, len(y))."""
        y = np.atleast_1d(np.asarray(y, float))
        if not self.interfaces:
            return np.zeros((0, y.size))
        return np.array([tr.position(y, t) for tr in self.interfaces]).reshape(-1, y.size)

    def velocities(self, y, t):
        y = np.atleast_1d(np.asarray(y, float))
        if not self.interfaces:
            return np.zeros((0, y.size))
        return np.array([tr.velocity(y, t) for tr in self.interfaces]).reshape(-1, y.size)

    def max_index(self):
        return float(np.sqrt((self.eps * self.mu).max()))

    def min_index(self):
        return float(np.sqrt((self.eps * self.mu).min()))


def medium_index(mat: MaterialMap, z, y, t):
    """Medium number at points z (column) for rows y; z <= position -> left."""
    pos = mat.positions(y, t)  # (m, ny)
    z = np.asarray(z, float)[:, None]
    idx = np.zeros((z.shape[0], pos.shape[1]), dtype=int)
    for p in pos:
        idx += (z > p[None, :]).astype(int)
    return idx


def eval_epsilon(mat: MaterialMap, spec: GridSpec, k, i, n):
    """Relative permittivity at node (k, i) for E^{n+1/2}, interface taken at time n dt."""
    idx = medium_index(mat, np.atleast_1d(k) * spec.dz, np.atleast_1d(i) * spec.dy, n * spec.dt)
    out = mat.eps[idx]
    return out.item() if out.size == 1 else out


def epsilon_field(mat: MaterialMap, spec: GridSpec, n):
    return mat.eps[medium_index(mat, spec.z, spec.y, n * spec.dt)]


def mu_fields(mat: MaterialMap, spec: GridSpec, n):
    """mu at By and Bz sample points."""
    t = n * spec.dt
    zy = (np.arange(spec.nz - 1) + 0.5) * spec.dz
    mu_y = mat.mu[medium_index(mat, zy, spec.y, t)]
    yz = (np.arange(spec.ny - 1) + 0.5) * spec.dy
    mu_z = mat.mu[medium_index(mat, spec.z, yz, t)] if spec.ny > 1 else np.ones((spec.nz, 0))
    return mu_y, mu_z


@dataclass
class TransitionRegion:
    """Per row and interface: the interface node kc (interface between kc
    and kc+1), the first band node k_min and the last band node k_max.
    Arrays have shape (n_interfaces, ny)."""
    kc: np.ndarray
    k_min: np.ndarray
    k_max: np.ndarray
    beta: np.ndarray
    position: np.ndarray
    half: int

    @property
    def width_cells(self):
        return 2 * self.half + 1

    def nodes(self, m):
        """Band node indices for interface m, shape (2*half+2, ny)."""
        off = np.arange(-self.half, self.half + 2)
        return self.kc[m][None, :] + off[:, None]

    def hybrid_mask(self, nz):
        ny = self.kc.shape[1]
        mask = np.zeros((nz, ny), dtype=bool)
        rows = np.arange(ny)
        for m in range(self.kc.shape[0]):
            nd = self.nodes(m)
            mask[nd, np.broadcast_to(rows, nd.shape)] = True
        return mask


def classify_cells(mat: MaterialMap, spec: GridSpec, n, half=2, margin=3):
    """Transition bands for step n.

    Each band holds nodes kc-half .. kc+1+half (2*half+2 points, 2*half+1
    cells), where kc = floor(position/dz).  The same band is used for both
    signs of v; the stencils that reach upstream (two cells for the B
    average) stay inside it or read the neighbouring conventional values.
    """
    t = n * spec.dt
    pos = mat.positions(spec.y, t)
    beta = mat.velocities(spec.y, t)
    kc = np.floor(pos / spec.dz + 1e-12).astype(int)
    k_min = kc - half
    k_max = kc + 1 + half
    if k_min.size:
        if k_min.min() < margin or k_max.max() > spec.nz - 1 - margin:
            raise OverlappingTransitionRegions("transition band reaches the domain edge")
        for m in range(kc.shape[0] - 1):
            if np.any(k_max[m] + 2 >= k_min[m + 1]):
                raise OverlappingTransitionRegions(
                    f"bands of interfaces {m} and {m + 1} intersect at step {n}")
    return TransitionRegion(kc, k_min, k_max, beta, pos, half)


def check_courant(spec: GridSpec, mat: MaterialMap, unsafe=False):
    """Courant check with the smallest index and largest |beta| present
    (the bound n/(1+n|beta|) grows with n); divided by sqrt 2 in 2D."""
    t = np.linspace(0, max(spec.n_steps, 1) * spec.dt, 64)
    bmax = 0.0
    for tr in mat.interfaces:
        for tt in t:
            bmax = max(bmax, float(np.abs(tr.velocity(spec.y, tt)).max()))
    smax = courant_limit(mat.min_index(), bmax)
    if spec.ny > 1:
        smax /= np.sqrt(2)
    if spec.ny > 1:
        smax = min(smax, courant_2d_static(spec, mat.min_index()))
    if spec.S > smax + 1e-12 and not unsafe:
        raise ValidationError(f"dt too large: S = {spec.S:.6g} exceeds S_max = {smax:.6g}")
    return smax


def courant_2d_static(spec, n):
    return n / np.sqrt(1 + (spec.dz / spec.dy) ** 2)
