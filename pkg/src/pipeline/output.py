"""
Result files: per-site CSV tables and a YAML run summary.

Every float is written with 17 significant digits so that identical runs
produce byte-identical files.
"""

from pathlib import Path

import numpy as np
import pandas as pd
import yaml

from src.state.measure import Measure, gamma_measure
from src.state.spinor import SpinorField
from src.utils.logging import setup_logger

logger = setup_logger("output")

FLOAT_FORMAT = "%.17g"
SPINOR_COLUMNS = ["site", "mu", "reL", "imL", "reR", "imR"]


def spinor_to_frame(psi: SpinorField) -> pd.DataFrame:
    mu = gamma_measure(psi)
    return pd.DataFrame({
        "site": psi.sites,
        "mu": mu.values,
        "reL": psi.left.real,
        "imL": psi.left.imag,
        "reR": psi.right.real,
        "imR": psi.right.imag,
    }, columns=SPINOR_COLUMNS)


def measure_to_frame(mu: Measure) -> pd.DataFrame:
    return pd.DataFrame({"site": mu.sites, "mu": mu.values})


class _SummaryDumper(yaml.SafeDumper):
    pass


def _represent_float(dumper: yaml.SafeDumper, value: float) -> yaml.Node:
    if np.isnan(value):
        text = ".nan"
    elif np.isinf(value):
        text = ".inf" if value > 0 else "-.inf"
    else:
        text = FLOAT_FORMAT % value
        # YAML 1.1 only resolves floats that carry a dot
        if "." not in text:
            text = text.replace("e", ".0e") if "e" in text else text + ".0"
    return dumper.represent_scalar("tag:yaml.org,2002:float", text)


_SummaryDumper.add_representer(float, _represent_float)


def to_builtin(value):
    """Recursively convert numpy scalars, arrays and complex numbers to YAML-safe types."""
    if isinstance(value, dict):
        return {str(k): to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_builtin(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_builtin(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if value is None or isinstance(value, str):
        return value
    return str(value)


def write_csv(frame: pd.DataFrame, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.debug(f"Wrote {len(frame)} rows to {path}")
    return path


def write_summary(summary: dict, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        yaml.dump(to_builtin(summary), fh, Dumper=_SummaryDumper, sort_keys=False, default_flow_style=False)
    return path


def write_result(result, out_dir: str | Path) -> list[Path]:
    """Write every table of a CommandResult plus summary.yaml into out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = [write_csv(frame, out_dir / f"{name}.csv") for name, frame in result.tables.items()]
    written.append(write_summary(result.summary, out_dir / "summary.yaml"))
    logger.info(f"Results saved to {out_dir}")
    return written
