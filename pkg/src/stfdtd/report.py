"""Matplotlib figures for the validation runs."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, out, name):
    path = Path(out) / f"{name}.png"
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def _fig2(d, out):
    fig, ax = plt.subplots(figsize=(7, 3.5))
    for r in d["conventional"]:
        ax.plot(r["t"], r["reflected"], label=f"conventional, dz=1/{r['scale']}")
    h = d["hybrid"]
    ax.plot(h["t"], h["reflected"], "k", label=f"hybrid, dz=1/{h['scale']}")
    ax.axhline(-2 / 9, ls="--", c="g", lw=0.8, label="moving value -2/9")
    ax.axhline(-1 / 3, ls=":", c="r", lw=0.8, label="stationary value -1/3")
    ax.set_xlabel("t")
    ax.set_ylabel("reflected E / incident peak")
    ax.legend(fontsize=8)
    return [_save(fig, out, "fig2_reflection")]


def _fig5(d, out):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.plot(d["N_lambda"], d["fwd"], label="forward")
    ax.plot(d["N_lambda"], d["bwd"], label="backward")
    ax.axhline(0.95, ls=":", c="k", lw=0.8)
    ax.set_xlabel("cells per wavelength")
    ax.set_ylabel("|zeta|")
    ax.set_title(f"n=1.5, beta=0.3, S={d['S']:.4f}")
    ax.legend()
    return [_save(fig, out, "fig5_attenuation")]


def _fig6(d, out):
    E, dz = d["E"], d["dz"]
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ext = [0, E.shape[1] * dz, 0, E.shape[0] * dz]
    v = np.abs(E).max()
    ax.imshow(E, origin="lower", extent=ext, cmap="RdBu_r", vmin=-v, vmax=v, aspect="auto")
    ax.axhline(d["kc"] * dz, c="k", lw=0.8)
    ax.set_xlabel("y")
    ax.set_ylabel("z")
    ax.set_title(f"theta_r={d['theta_r']:.2f}, theta_t={d['theta_t']:.2f} deg")
    return [_save(fig, out, "fig6_snapshot")]


def _fig7(d, out):
    fig, axs = plt.subplots(3, 1, figsize=(7, 6))
    for j, (ax, (t, v)) in enumerate(zip(axs, d["pulses"]), 1):
        ax.plot(t, v, lw=0.7)
        wc, bw = d["moments"][j - 1]
        ax.set_title(f"reflection {j}: omega_c/omega_i={wc / (2 * np.pi):.3f}, "
                     f"bandwidth={bw:.3f}", fontsize=9)
    axs[-1].set_xlabel("t")
    return [_save(fig, out, "fig7_wedge")]


def _fig8(d, out):
    fig, axs = plt.subplots(2, 1, figsize=(7, 5))
    axs[0].plot(d["t"], d["sim"], label="simulated")
    axs[0].plot(d["t"], d["oracle"], "--", label="closed form")
    axs[0].legend(fontsize=8)
    axs[0].set_ylabel("reflected E")
    tt, ff = d["chirp"]
    axs[1].plot(tt, ff / (2 * np.pi), ".-")
    axs[1].set_ylabel("omega / omega_i")
    axs[1].set_xlabel("t")
    return [_save(fig, out, "fig8_accelerated")]


def _fig9(d, out):
    fig, axs = plt.subplots(1, 2, figsize=(9, 4))
    for ax, key in zip(axs, ("static", "moving")):
        r = d[key]
        F = r["fluence"]
        ax.imshow(F, origin="lower", aspect="auto", cmap="magma",
                  extent=[0, F.shape[1] * r["dz"], 0, F.shape[0] * r["dz"]])
        ax.axhline(r["z_focus"], c="c", lw=0.8)
        ax.set_title(f"{key}: focus z={r['z_focus']:.2f}, width={r['width']:.2f}", fontsize=9)
        ax.set_xlabel("y")
    axs[0].set_ylabel("z")
    return [_save(fig, out, "fig9_fluence")]


def _matching(d, out):
    d = d["carrier"]
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.plot(d["t"], d["incident"], label="incident (auxiliary grid)")
    ax.plot(d["t"], d["transmitted"], "--", label="transmitted")
    ax.set_xlabel("t")
    ax.legend(fontsize=8)
    return [_save(fig, out, "matching_transmitted")]


RENDERERS = {"fig2": _fig2, "fig5": _fig5, "fig6": _fig6, "fig7": _fig7, "fig8": _fig8,
             "fig9": _fig9, "matching": _matching}


def render(fig_id, data, out):
    """Write the figures for one validation run; returns the file paths."""
    f = RENDERERS.get(fig_id)
    return f(data, out) if f and data else []
