from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple, Union

import numpy as np
import pandas as pd

from orchestration.sweeps import write_table
from utils.errors import InvalidArgumentError

SweepKind = Literal["spacing", "uavs"]

# (group keys, {panel file stem: metric column})
_PANELS: Dict[str, Tuple[List[str], Dict[str, str]]] = {
    "spacing": (["altitude", "spacing"], {"psi": "psi_ghz", "psucc": "p_succ"}),
    "uavs": (["scheme", "num_uavs"], {"psucc": "p_succ", "psi": "psi_ghz", "utility": "utility"}),
}


def aggregate(table: pd.DataFrame, keys: List[str], metric: str) -> pd.DataFrame:
    """Mean and population std (ddof=0) of ``metric`` over seeds per grid point"""
    ok = table[table["status"] == "ok"].astype({metric: float})
    grouped = ok.groupby(keys, sort=True)[metric]
    out = pd.DataFrame(
        {
            "mean": grouped.mean(),
            "std": grouped.agg(lambda s: float(np.std(s.to_numpy(dtype=float), ddof=0))),
            "seeds": grouped.count(),
        }
    )
    return out.reset_index()


def emit_plot_data(
    table: pd.DataFrame,
    kind: SweepKind,
    out_dir: Union[str, Path],
    label: Optional[str] = None,
) -> List[Path]:
    """Write one aggregated CSV per panel, e.g. ``spacing_psucc.csv`` or ``uavs_hotspot_psucc.csv``"""
    if kind not in _PANELS:
        raise InvalidArgumentError("kind", f"expected one of {sorted(_PANELS)}, got {kind!r}")
    keys, panels = _PANELS[kind]
    prefix = f"{kind}_{label}" if label else kind

    written = []
    for stem, metric in panels.items():
        written.append(write_table(aggregate(table, keys, metric), Path(out_dir) / f"{prefix}_{stem}.csv"))
    return written
