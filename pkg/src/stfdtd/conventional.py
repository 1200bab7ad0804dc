"""Conventional s-polarized Yee stepper (Dx, By, Bz) with a first-order
Mur boundary."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridSpec


class NonFiniteField(FloatingPointError):
    pass


@dataclass
class FieldState:
    D: np.ndarray   # (nz, ny) at n + 1/2
    By: np.ndarray  # (nz-1, ny) at n
    Bz: np.ndarray  # (nz, ny-1) at n
    eps: np.ndarray  # permittivity used for E = D/eps at the stored D time
    mu_y: np.ndarray
    mu_z: np.ndarray

    @classmethod
    def zeros(cls, spec: GridSpec, eps=None):
        nz, ny = spec.nz, spec.ny
        eps = np.ones((nz, ny)) if eps is None else np.array(eps, float)
        return cls(np.zeros((nz, ny)), np.zeros((nz - 1, ny)), np.zeros((nz, ny - 1)),
                   eps, np.ones((nz - 1, ny)), np.ones((nz, ny - 1)))

    @property
    def E(self):
        return self.D / self.eps

    @property
    def Hy(self):
        return self.By / self.mu_y

    @property
    def Hz(self):
        return self.Bz / self.mu_z

    def copy(self):
        return FieldState(*(a.copy() for a in (self.D, self.By, self.Bz, self.eps, self.mu_y, self.mu_z)))

    def energy(self, spec: GridSpec):
        w = np.sum(self.D * self.E) + np.sum(self.By * self.Hy) + np.sum(self.Bz * self.Hz)
        return 0.5 * w * spec.dz * spec.dy


def update_B(state: FieldState, spec: GridSpec, E=None):
    """B^{n-1} -> B^n from E^{n-1/2}; returns the new (By, Bz)."""
    E = state.E if E is None else E
    By = state.By - spec.S * (E[1:] - E[:-1])
    Bz = state.Bz + spec.Sy * (E[:, 1:] - E[:, :-1]) if spec.ny > 1 else state.Bz
    return By, Bz


def curl_H(Hy, Hz, spec: GridSpec):
    """dt * (curl H)_x on the interior D nodes, full (nz, ny) array with
    zeros on the boundary nodes that the Mur update owns."""
    nz, ny = spec.nz, spec.ny
    out = np.zeros((nz, ny))
    out[1:-1] = -spec.S * (Hy[1:] - Hy[:-1])
    if ny > 1:
        out[:, 1:-1] += spec.Sy * (Hz[:, 1:] - Hz[:, :-1])
        out[:, 0] = 0.0
        out[:, -1] = 0.0
    out[0] = 0.0
    out[-1] = 0.0
    return out


def mur_coeff(courant, n_index):
    c = courant / n_index
    return (c - 1) / (c + 1)


def apply_abc(D_new, D_old, eps, spec: GridSpec, mu=1.0, eps_old=None):
    """First-order Mur update of the boundary D nodes, in place.

    The recurrence runs on E = D/eps node by node, so a boundary node next
    to one of different permittivity (a curved interface meeting the edge)
    takes the neighbour's field and not its flux.  z ends use the one-way
    equation along z with the local index; y ends (2D only) along y.
    Corners take the z-end value.
    """
    eps_old = eps if eps_old is None else eps_old
    E_new = D_new / eps
    E_old = D_old / eps_old
    if spec.ny > 1:
        for j, jn in ((0, 1), (-1, -2)):
            q = mur_coeff(spec.Sy, np.sqrt(eps[:, j] * mu))
            E_new[1:-1, j] = E_old[1:-1, jn] + q[1:-1] * (E_new[1:-1, jn] - E_old[1:-1, j])
        D_new[:, 0] = eps[:, 0] * E_new[:, 0]
        D_new[:, -1] = eps[:, -1] * E_new[:, -1]
    for k, kn in ((0, 1), (-1, -2)):
        q = mur_coeff(spec.S, np.sqrt(eps[k] * mu))
        D_new[k] = eps[k] * (E_old[kn] + q * (E_new[kn] - E_old[k]))
    return D_new


def step_conventional(state: FieldState, spec: GridSpec, eps_next, mu_y=None, mu_z=None,
                      time_switch="D", abc=True, check=False):
    """Advance one full step: B^{n-1}, D^{n-1/2} -> B^n, D^{n+1/2}.

    ``eps_next`` is the permittivity for E^{n+1/2}.  With time_switch "D"
    the stored D is carried across a change of eps untouched (the update is
    written for D and E = D/eps).  With "E" the stored D is rescaled where
    eps changes so that E is carried across the switch instead, which is
    what an update written directly for E with a coefficient dt/eps does.
    """
    By, Bz = update_B(state, spec)
    if mu_y is not None:
        state.mu_y, state.mu_z = mu_y, mu_z
    D, eps_old = state.D, state.eps
    if time_switch == "E":
        D = D * (eps_next / state.eps)
        eps_old = eps_next
    elif time_switch != "D":
        raise ValueError("time_switch must be 'D' or 'E'")
    D_new = D + curl_H(By / state.mu_y, Bz / state.mu_z, spec)
    if abc:
        apply_abc(D_new, D, eps_next, spec, eps_old=eps_old)
    state.By, state.Bz, state.D, state.eps = By, Bz, D_new, np.asarray(eps_next, float)
    if check and not np.all(np.isfinite(D_new)):
        raise NonFiniteField("non-finite field after conventional step")
    return state
