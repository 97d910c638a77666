"""
Visualization Module
"""

from .charts import Visualizer
from .plot_script import PLOT_KINDS, render_plot_script, write_plot_script
from .styles import ChartStyles

__all__ = ["Visualizer", "ChartStyles", "PLOT_KINDS", "render_plot_script", "write_plot_script"]
