"""Static figures in display units (cm, min); data files stay SI."""

from __future__ import annotations

from pathlib import Path

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    # reproducible SVG output
    matplotlib.rcParams["svg.hashsalt"] = "fokas-richards"
    matplotlib.rcParams["svg.fonttype"] = "none"
    return plt


def _save(fig, path: Path, fmt: str) -> Path:
    fig.savefig(path, format=fmt, metadata={"Date": None} if fmt == "svg" else None)
    return path


def profile_and_heatmap(grid, base: str | Path, fmt: str = "svg") -> list[Path]:
    """Write theta-vs-depth profiles (one curve per time) and a theta(x, t) map."""
    plt = _pyplot()
    base = Path(base)
    stem = base.with_suffix("")
    x_cm = grid.xs * 100.0
    t_min = grid.ts / 60.0

    fig, ax = plt.subplots(figsize=(5, 4))
    for j, t in enumerate(t_min):
        ax.plot(x_cm, grid.theta[:, j], label=f"{t:g} min")
    ax.set_xlabel("depth x (cm)")
    ax.set_ylabel(r"water content $\theta$")
    ax.legend(fontsize="small")
    fig.tight_layout()
    out = [_save(fig, Path(f"{stem}_profiles.{fmt}"), fmt)]
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(5, 4))
    mesh = ax.pcolormesh(t_min, x_cm, np.ma.masked_invalid(grid.theta), shading="nearest")
    fig.colorbar(mesh, ax=ax, label=r"$\theta$")
    ax.set_xlabel("t (min)")
    ax.set_ylabel("depth x (cm)")
    ax.invert_yaxis()
    fig.tight_layout()
    out.append(_save(fig, Path(f"{stem}_heatmap.{fmt}"), fmt))
    plt.close(fig)
    return out


def convergence_plot(rows, base: str | Path, fmt: str = "svg") -> Path:
    """Log-scale max error against number of series terms."""
    plt = _pyplot()
    Ns = [r[0] for r in rows]
    errs = [max(r[1], 1e-300) for r in rows]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog(Ns, errs, "o-")
    ax.set_xlabel("series terms N")
    ax.set_ylabel(r"max$_x$ |$\theta_N - \theta$|")
    fig.tight_layout()
    path = Path(base).with_suffix(f".{fmt}")
    _save(fig, path, fmt)
    plt.close(fig)
    return path
