"""
Static chart generation for scenario results
"""

import os
from typing import List, Optional

import numpy as np
import pandas as pd
from loguru import logger

from .styles import ChartStyles, plt


class Visualizer:
    """
    Scenario chart generator

    Renders power traces, consumption maps, protocol shapes and excitation
    scans from the tables the scenario runner writes.
    """

    def __init__(
        self,
        output_dir: str = "output/charts",
        dpi: int = 150,
        figsize: tuple = (10, 6),
    ):
        """
        Initialize Visualizer

        Args:
            output_dir: Directory for saving charts
            dpi: DPI for saved images
            figsize: Default figure size
        """
        self.output_dir = output_dir
        self.dpi = dpi
        self.figsize = figsize
        self.saved: List[str] = []

        os.makedirs(output_dir, exist_ok=True)
        ChartStyles.setup_matplotlib(figsize, dpi)

        logger.info(f"Visualizer initialized. Output dir: {output_dir}")

    def _save(self, fig: plt.Figure, name: str) -> str:
        path = os.path.join(self.output_dir, f"{name}.png")
        fig.savefig(path, dpi=self.dpi, bbox_inches="tight")
        plt.close(fig)
        self.saved.append(path)
        logger.info(f"Saved chart {path}")
        return path

    def plot_power_trace(self, frame: pd.DataFrame, name: str, title: Optional[str] = None) -> str:
        """
        Total power and load power versus time

        Args:
            frame: Trace table (t, P_total, P_load, optionally P_total_harmonic)
            name: File stem
            title: Chart title

        Returns:
            Path of the saved PNG
        """
        fig, ax = plt.subplots(figsize=self.figsize)
        ax.plot(frame["t"], frame["P_total"], color=ChartStyles.color("P_total"), lw=2, label="P total")
        ax.plot(
            frame["t"], frame["P_load"], color=ChartStyles.color("P_load"), lw=1.5, ls="--", label="P load"
        )
        if "P_total_harmonic" in frame:
            step = max(len(frame) // 60, 1)
            ax.plot(
                frame["t"].iloc[::step], frame["P_total_harmonic"].iloc[::step], "o",
                color=ChartStyles.color("P_total_harmonic"), ms=4, label="P total (small oscillations)",
            )
        ax.axhline(0.0, color=ChartStyles.COLORS["dark"], lw=0.8)
        ax.set_xlabel("t (s)")
        ax.set_ylabel("Power (W)")
        ax.set_title(title or "Engine power", fontweight="bold")
        ax.legend(loc="best")
        return self._save(fig, name)

    def plot_energy_map(self, frame: pd.DataFrame, name: str, title: Optional[str] = None) -> str:
        """Contour map of the consumption over the (gamma, M) grid"""
        table = frame.pivot(index="M", columns="gamma", values="E_total")
        gamma = table.columns.to_numpy(dtype=float)
        M = table.index.to_numpy(dtype=float)

        fig, ax = plt.subplots(figsize=self.figsize)
        if len(gamma) > 1 and len(M) > 1:
            mesh = ax.contourf(gamma, M, table.to_numpy(), levels=20, cmap=ChartStyles.CONTOUR_CMAP)
        else:
            mesh = ax.scatter(
                np.repeat(gamma, len(M)), np.tile(M, len(gamma)),
                c=table.to_numpy().T.ravel(), cmap=ChartStyles.CONTOUR_CMAP,
            )
        fig.colorbar(mesh, ax=ax, label="Consumption (J)")
        ax.set_xlabel("gamma (kg/s)")
        ax.set_ylabel("M (kg)")
        eta = float(frame["eta"].iloc[0]) if len(frame) else float("nan")
        ax.set_title(title or f"Energy consumption, eta = {eta:g}", fontweight="bold")
        return self._save(fig, name)

    def plot_protocol(self, frame: pd.DataFrame, name: str, title: Optional[str] = None) -> str:
        """Trolley trajectory with the reference load trajectory (and alpha when present)"""
        fig, ax = plt.subplots(figsize=self.figsize)
        ax.plot(frame["t"], frame["x"], color=ChartStyles.color("x"), lw=2, label="x (trolley)")
        if "xi" in frame:
            ax.plot(frame["t"], frame["xi"], color=ChartStyles.color("xi"), lw=1.5, ls="--", label="xi (load)")
        if "alpha" in frame:
            ax.plot(frame["t"], frame["alpha"], color=ChartStyles.color("alpha"), lw=1.5, ls=":", label="alpha")
        ax.set_xlabel("t (s)")
        ax.set_ylabel("Position (m)")
        ax.set_title(title or "Transport protocol", fontweight="bold")
        ax.legend(loc="best")
        return self._save(fig, name)

    def plot_excitation_scan(self, frame: pd.DataFrame, name: str, title: Optional[str] = None) -> str:
        """dE / K0 versus initial angle"""
        fig, ax = plt.subplots(figsize=self.figsize)
        ax.plot(
            frame["theta_i_deg"], frame["dE_over_K0"], color=ChartStyles.color("dE_over_K0"),
            lw=2, marker="o", ms=3,
        )
        ax.set_xlabel("Initial angle (deg)")
        ax.set_ylabel("dE / K0")
        ax.set_title(title or "Final load excitation", fontweight="bold")
        return self._save(fig, name)
