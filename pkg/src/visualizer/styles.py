"""
Chart styling configuration
"""

from typing import Dict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


class ChartStyles:
    """Chart styling utilities"""

    COLORS = {
        "primary": "#2E86AB",
        "dark": "#343A40",
    }

    PALETTE = [
        "#2E86AB",  # Blue
        "#A23B72",  # Magenta
        "#F18F01",  # Orange
        "#28A745",  # Green
        "#6C757D",  # Gray
        "#17A2B8",  # Cyan
        "#DC3545",  # Red
        "#6610F2",  # Purple
    ]

    # One color per quantity, shared by every chart
    SERIES_COLORS = {
        "P_total": "#2E86AB",
        "P_load": "#A23B72",
        "P_total_harmonic": "#F18F01",
        "x": "#343A40",
        "xi": "#28A745",
        "alpha": "#A23B72",
        "dE_over_K0": "#DC3545",
    }

    CONTOUR_CMAP = "viridis"

    @classmethod
    def setup_matplotlib(cls, figsize: tuple = (10, 6), dpi: int = 150) -> None:
        """Apply the project style to matplotlib"""
        try:
            plt.style.use("seaborn-v0_8-whitegrid")
        except OSError:
            plt.style.use("ggplot")

        plt.rcParams.update({
            "figure.figsize": figsize,
            "figure.dpi": dpi,
            "axes.labelsize": 12,
            "axes.titlesize": 14,
            "xtick.labelsize": 10,
            "ytick.labelsize": 10,
            "legend.fontsize": 10,
            "figure.titlesize": 16,
            "axes.prop_cycle": matplotlib.cycler(color=cls.PALETTE),
        })

    @classmethod
    def color(cls, series: str) -> str:
        return cls.SERIES_COLORS.get(series, cls.COLORS["primary"])

    @classmethod
    def rc_overrides(cls, figsize: tuple = (10, 6)) -> Dict[str, object]:
        """rcParams written into standalone plot scripts"""
        return {
            "figure.figsize": list(figsize),
            "axes.grid": True,
            "axes.labelsize": 12,
            "axes.titlesize": 14,
        }
