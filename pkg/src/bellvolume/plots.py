"""Figure rendering for the report path: every sweep/section/survey run can
drop a matplotlib figure next to its CSV. Figures are presentation artifacts;
the CSV stays the quantitative record."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .experiments import SectionGrid, SweepRow

_RC = {
    "figure.figsize": (5.2, 3.6),
    "figure.dpi": 130,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
    "legend.fontsize": 8,
}


def _normalized(values: np.ndarray) -> np.ndarray:
    top = np.max(np.abs(values))
    return values / top if top > 0 else values


def sweep_figure(rows: list[SweepRow], path: Path, param_label: str) -> None:
    """Entanglement, I_max and V against the family parameter, each scaled to
    peak at 1 so the three curves share an axis."""
    with plt.rc_context(_RC):
        x = [r.params[0] for r in rows]
        ent = _normalized(np.array([r.entanglement for r in rows]))
        imax = _normalized(np.array([r.i_max for r in rows]))
        vol = _normalized(np.array([r.volume.fraction for r in rows]))
        fig, ax = plt.subplots()
        ax.plot(x, ent, "o-", ms=3.5, label="entanglement")
        ax.plot(x, imax, "^-", ms=3.5, label="I_max")
        ax.plot(x, vol, "s-", ms=3.5, label="V")
        ax.set_xlabel(param_label)
        ax.set_ylabel("normalized to maximum 1")
        ax.legend()
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def noise_figure(rows: list[SweepRow], path: Path) -> None:
    """Concurrence and violation volume against the white-noise fraction."""
    with plt.rc_context(_RC):
        x = [r.params[0] for r in rows]
        fig, ax = plt.subplots()
        ax.plot(x, [r.entanglement for r in rows], "o-", ms=3.5, label="concurrence")
        ax.set_xlabel("noise fraction F")
        ax.set_ylabel("concurrence")
        ax2 = ax.twinx()
        ax2.plot(x, [r.volume.fraction for r in rows], "s-", ms=3.5, color="C3", label="V")
        ax2.set_ylabel("violation volume V", color="C3")
        ax2.grid(False)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def section_figure(grid: SectionGrid, path: Path, title: str = "") -> None:
    """Violation mask of a 2-D section, axes in radians over [0, 2pi)."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(4.4, 4.0))
        ax.imshow(
            grid.violation_mask.T,
            origin="lower",
            extent=(0, 2 * np.pi, 0, 2 * np.pi),
            cmap="Blues",
            interpolation="nearest",
            aspect="equal",
        )
        ax.grid(False)
        ax.set_xlabel(grid.axis_pair[0])
        ax.set_ylabel(grid.axis_pair[1])
        if title:
            ax.set_title(title, fontsize=9)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def survey_figure(rows: list[SweepRow], path: Path) -> None:
    """Heatmap of V over the (lambda1, lambda2) grid."""
    with plt.rc_context(_RC):
        l1 = sorted({r.params[0] for r in rows})
        l2 = sorted({r.params[1] for r in rows})
        grid = np.full((len(l1), len(l2)), np.nan)
        for r in rows:
            grid[l1.index(r.params[0]), l2.index(r.params[1])] = r.volume.fraction
        fig, ax = plt.subplots(figsize=(4.8, 4.0))
        mesh = ax.pcolormesh(l2, l1, grid, shading="nearest", cmap="viridis")
        fig.colorbar(mesh, ax=ax, label="violation volume V")
        ax.set_xlabel("lambda2")
        ax.set_ylabel("lambda1")
        ax.grid(False)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
