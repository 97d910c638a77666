"""
Standalone matplotlib scripts that redraw a written CSV
"""

from pathlib import Path
from typing import Dict

from loguru import logger

from .styles import ChartStyles

_HEADER = '''#!/usr/bin/env python3
"""Plot {csv_name} (generated by sta-crane)"""

from pathlib import Path

import matplotlib.pyplot as plt
import pandas as pd

plt.rcParams.update({rc})
frame = pd.read_csv(Path(__file__).with_name("{csv_name}"))
fig, ax = plt.subplots()
'''

_BODIES: Dict[str, str] = {
    "trace": '''ax.plot(frame["t"], frame["P_total"], color="{P_total}", label="P total")
ax.plot(frame["t"], frame["P_load"], "--", color="{P_load}", label="P load")
if "P_total_harmonic" in frame:
    ax.plot(frame["t"], frame["P_total_harmonic"], ":", color="{P_total_harmonic}", label="P total (small oscillations)")
ax.set_xlabel("t (s)")
ax.set_ylabel("Power (W)")
ax.legend()
''',
    "energy_map": '''table = frame.pivot(index="M", columns="gamma", values="E_total")
mesh = ax.contourf(table.columns, table.index, table.to_numpy(), levels=20, cmap="{cmap}")
fig.colorbar(mesh, ax=ax, label="Consumption (J)")
ax.set_xlabel("gamma (kg/s)")
ax.set_ylabel("M (kg)")
''',
    "protocol": '''ax.plot(frame["t"], frame["x"], color="{x}", label="x (trolley)")
if "xi" in frame:
    ax.plot(frame["t"], frame["xi"], "--", color="{xi}", label="xi (load)")
ax.set_xlabel("t (s)")
ax.set_ylabel("Position (m)")
ax.legend()
''',
    "scan": '''ax.plot(frame["theta_i_deg"], frame["dE_over_K0"], "o-", color="{dE_over_K0}")
ax.set_xlabel("Initial angle (deg)")
ax.set_ylabel("dE / K0")
''',
}

_FOOTER = '''ax.set_title("{title}")
fig.savefig(Path(__file__).with_suffix(".png"), dpi=150, bbox_inches="tight")
plt.show()
'''

PLOT_KINDS = tuple(_BODIES)


def render_plot_script(csv_name: str, kind: str, title: str, figsize: tuple = (10, 6)) -> str:
    """Script text for one CSV kind (trace, energy_map, protocol, scan)"""
    if kind not in _BODIES:
        raise ValueError(f"no plot script for '{kind}'")
    colors = dict(ChartStyles.SERIES_COLORS, cmap=ChartStyles.CONTOUR_CMAP)
    return (
        _HEADER.format(csv_name=csv_name, rc=repr(ChartStyles.rc_overrides(figsize)))
        + _BODIES[kind].format(**colors)
        + _FOOTER.format(title=title)
    )


def write_plot_script(
    csv_path: Path, kind: str, title: str, figsize: tuple = (10, 6)
) -> Path:
    """Write <csv stem>_plot.py next to the CSV"""
    script = csv_path.with_name(f"{csv_path.stem}_plot.py")
    script.write_text(render_plot_script(csv_path.name, kind, title, figsize))
    logger.info(f"Wrote plot script {script}")
    return script
