"""
CSV emission and text summaries for scenario runs
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from loguru import logger

from ..energy.models import EnergyReport, PowerTrace
from ..largeangle.models import ExcitationResult
from ..model.models import SimTrace

TRACE_COLUMNS = [
    "t", "x", "xdot", "xddot", "theta", "thetadot", "q", "qdot",
    "E_load", "E_total", "P_load", "P_total",
]
ENERGY_MAP_COLUMNS = [
    "M", "gamma", "eta", "E_plus", "E_minus", "E_total", "bound_simple", "bound_tight",
]
SCAN_COLUMNS = ["theta_i_deg", "dE", "dE_over_K0"]
FLOAT_FORMAT = "%.12g"


def trace_frame(
    trace: SimTrace, power: PowerTrace, harmonic: Optional[PowerTrace] = None
) -> pd.DataFrame:
    """Trace table; adds P_total_harmonic when a harmonic comparison is given"""
    frame = pd.DataFrame({
        "t": trace.t,
        "x": trace.x,
        "xdot": trace.xdot,
        "xddot": trace.xddot,
        "theta": trace.theta,
        "thetadot": trace.theta_dot,
        "q": trace.q,
        "qdot": trace.q_dot,
        "E_load": trace.E_load,
        "E_total": trace.E_total,
        "P_load": power.P_load,
        "P_total": power.P_total,
    }, columns=TRACE_COLUMNS)
    if harmonic is not None:
        frame["P_total_harmonic"] = harmonic.P_total
    return frame


def energy_map_row(M: float, gamma: float, report: EnergyReport) -> Dict[str, Any]:
    return {
        "M": M,
        "gamma": gamma,
        "eta": report.eta,
        "E_plus": report.e_plus,
        "E_minus": report.e_minus,
        "E_total": report.e_total,
        "bound_simple": report.bound_simple,
        "bound_tight": report.bound_tight,
    }


def energy_map_frame(rows: List[Dict[str, Any]]) -> pd.DataFrame:
    return pd.DataFrame(rows, columns=ENERGY_MAP_COLUMNS)


def scan_frame(results: Sequence[ExcitationResult]) -> pd.DataFrame:
    return pd.DataFrame(
        [{"theta_i_deg": r.theta_i_deg, "dE": r.dE, "dE_over_K0": r.dE_scaled} for r in results],
        columns=SCAN_COLUMNS,
    )


def write_csv(frame: pd.DataFrame, path: Path, float_format: str = FLOAT_FORMAT) -> Path:
    """Write a table with headers and 12 significant digits"""
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=float_format, lineterminator="\n")
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def format_summary(title: str, values: Dict[str, Any]) -> str:
    """Aligned key/value block for standard output"""
    width = max((len(k) for k in values), default=0)
    lines = [title, "-" * max(len(title), 20)]
    for key, value in values.items():
        if isinstance(value, dict):
            lines.append(f"{key}:")
            inner = max((len(k) for k in value), default=0)
            lines.extend(f"  {k:<{inner}}  {v}" for k, v in value.items())
        else:
            lines.append(f"{key:<{width}}  {value}")
    return "\n".join(lines)
