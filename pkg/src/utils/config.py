"""
Settings and run-configuration loading.

Responsibilities:
- Load config/settings.yaml defaults
- Parse angles ("1/3pi", "pi/3", raw radians) and complex scalars
- Build a validated RunConfig from a YAML run document
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from src.coins.matrix import CoinMatrix, CPhiParams, build_coin
from src.state.topology import Topology
from src.utils.validation import ConfigError

PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent
SETTINGS_PATH = PROJECT_ROOT / "config" / "settings.yaml"

COMMANDS = ("simulate", "eigenstate", "cycle-check", "period", "rw-check", "dichotomy")
COIN_COMMANDS = ("simulate", "eigenstate", "cycle-check", "period")
INITIAL_STATES = ("eigenstate", "localized", "random")

DEFAULT_SETTINGS: dict[str, Any] = {
    "logging": {"level": "INFO"},
    "tolerances": {
        "unitarity": 1e-12,
        "eigen_residual": 1e-10,
        "uniformity": 1e-9,
        "stationarity": 1e-9,
        "cycle_product": 1e-10,
        "pairwise": 1e-12,
        "spectrum": 1e-9,
        "dense_residual": 1e-9,
        "norm": 1e-10,
        "period": 1e-9,
        "rw": 1e-12,
        "lambda_snap": 1e-9,
    },
    "defaults": {
        "psi0": ["1", "0"],
        "steps": 0,
        "initial": "eigenstate",
        "max_period": 10,
        "line_window": 50,
        "theta": "1/4pi",
        "irrational_scan": 1000,
        "output_dir": "results",
    },
}

_NUMBER = r"(?:\d+(?:\.\d*)?|\.\d+)"
_ANGLE_RE = re.compile(
    rf"^(?P<sign>[+-]?)(?P<num>{_NUMBER})?(?:/(?P<den>{_NUMBER}))?\*?pi(?:/(?P<div>{_NUMBER}))?$"
)


def _mapping(value: Any, name: str) -> dict:
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigError(f"{name} must be a mapping, got {type(value).__name__}")
    return value


def _tolerance_value(name: str, value: Any) -> float:
    if isinstance(value, bool):
        raise ConfigError(f"Tolerance {name} is not a number: {value!r}")
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"Tolerance {name} is not a number: {value!r}") from None


def _parse_seed(value: Any) -> int | None:
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ConfigError(f"seed must be an integer, got {value!r}")
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"seed must be an integer, got {value!r}") from None


def load_settings(path: str | Path | None = None) -> dict:
    """
    Load settings.yaml merged over the built-in defaults.
    """
    settings = {key: dict(value) for key, value in DEFAULT_SETTINGS.items()}
    path = Path(path) if path is not None else SETTINGS_PATH
    if path.exists():
        with open(path) as fh:
            loaded = yaml.safe_load(fh) or {}
        if not isinstance(loaded, dict):
            raise ConfigError(f"Settings file {path} must contain a mapping")
        for key, value in loaded.items():
            if isinstance(value, dict):
                settings.setdefault(key, {}).update(value)
            else:
                settings[key] = value
    tolerances = _mapping(settings["tolerances"], "tolerances")
    settings["tolerances"] = {name: _tolerance_value(name, value) for name, value in tolerances.items()}
    return settings


def angle_ratio(value: Any) -> Fraction | None:
    """
    Rational multiple of pi carried by an angle string, e.g. "2/3pi" -> 2/3.
    None for raw radians or decimal coefficients.
    """
    if not isinstance(value, str):
        return None
    match = _ANGLE_RE.match(value.replace(" ", "").lower())
    if match is None:
        return None
    parts = [match.group("num"), match.group("den"), match.group("div")]
    if any(p is not None and not p.isdigit() for p in parts):
        return None
    ratio = Fraction(int(parts[0]) if parts[0] else 1)
    for p in parts[1:]:
        if p is not None:
            if int(p) == 0:
                raise ConfigError(f"Zero denominator in angle {value!r}")
            ratio /= int(p)
    return -ratio if match.group("sign") == "-" else ratio


def parse_angle(value: Any) -> float:
    """
    Angle in radians from a number or a multiple of pi ("1/3pi", "pi/3", "-pi", "0.25pi").
    """
    if isinstance(value, bool):
        raise ConfigError(f"Invalid angle: {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"Invalid angle: {value!r}")
    text = value.replace(" ", "").lower()
    match = _ANGLE_RE.match(text)
    if match is None:
        try:
            return float(text)
        except ValueError:
            raise ConfigError(f"Invalid angle: {value!r}") from None
    coef = float(match.group("num")) if match.group("num") else 1.0
    for key in ("den", "div"):
        if match.group(key) is not None:
            denom = float(match.group(key))
            if denom == 0:
                raise ConfigError(f"Zero denominator in angle {value!r}")
            coef /= denom
    if match.group("sign") == "-":
        coef = -coef
    return coef * np.pi


def parse_complex(value: Any) -> complex:
    """
    Complex scalar from a number, a Python complex literal ("0.5-1j"), or
    a mapping {angle: ..., modulus: 1} meaning modulus * e^{i angle}.
    """
    if isinstance(value, dict):
        if "angle" not in value:
            raise ConfigError(f"Complex mapping needs an 'angle' key: {value!r}")
        modulus = float(value.get("modulus", 1.0))
        return complex(modulus * np.exp(1j * parse_angle(value["angle"])))
    if isinstance(value, bool):
        raise ConfigError(f"Invalid complex value: {value!r}")
    if isinstance(value, (int, float, complex)):
        return complex(value)
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", ""))
        except ValueError:
            raise ConfigError(f"Invalid complex value: {value!r}") from None
    raise ConfigError(f"Invalid complex value: {value!r}")


def parse_tolerance_overrides(items: list[str] | None, known: dict[str, float]) -> dict[str, float]:
    overrides = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError(f"Tolerance override must look like NAME=VALUE, got {item!r}")
        name, raw = item.split("=", 1)
        name = name.strip()
        if name not in known:
            raise ConfigError(f"Unknown tolerance {name!r}; known: {', '.join(sorted(known))}")
        try:
            overrides[name] = float(raw)
        except ValueError:
            raise ConfigError(f"Tolerance {name} is not a number: {raw!r}") from None
    return overrides


@dataclass(frozen=True)
class RunConfig:
    command: str
    topology: Topology
    tolerances: dict[str, float]
    cphi: CPhiParams | None = None
    coins: tuple[CoinMatrix, ...] | None = None
    hopping: tuple[float, ...] | None = None
    start: int = 0
    lam: complex | None = None
    psi0: tuple[complex, complex] = (1 + 0j, 0j)
    steps: int = 0
    initial: str = "eigenstate"
    max_period: int = 10
    scan_width: int | None = None
    phi_ratio: Fraction | None = None
    theta: float = np.pi / 4
    irrational_scan: int = 1000
    seed: int | None = None
    output_dir: str = "results"
    raw: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def model_kind(self) -> str | None:
        if self.cphi is not None:
            return "cphi"
        if self.coins is not None:
            return "coins"
        if self.hopping is not None:
            return "hopping"
        return None

    @property
    def eigenvalue(self) -> complex | None:
        """Configured lambda, falling back to e^{i phi} for C_phi models."""
        if self.lam is not None:
            return self.lam
        if self.cphi is not None:
            return self.cphi.eigenvalue
        return None


def _parse_topology(data: Any, default_window: int) -> Topology:
    if data is None:
        return Topology.line(default_window)
    if not isinstance(data, dict) or len(data) != 1:
        raise ConfigError(f"topology must be {{line: L}} or {{cycle: m}}, got {data!r}")
    (kind, size), = data.items()
    try:
        size = int(size)
    except (TypeError, ValueError):
        raise ConfigError(f"Topology size must be an integer, got {size!r}") from None
    try:
        if kind == "line":
            return Topology.line(size)
        if kind == "cycle":
            return Topology.cycle(size)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    raise ConfigError(f"Unknown topology kind {kind!r}")


def _parse_coin(entry: Any, k: int) -> CoinMatrix:
    if isinstance(entry, dict):
        if "theta" not in entry:
            raise ConfigError(f"Coin {k} needs theta (and optionally omega)")
        return build_coin(parse_angle(entry["theta"]), parse_angle(entry.get("omega", 0.0)))
    try:
        mat = np.array([[parse_complex(v) for v in row] for row in entry], dtype=complex)
        return CoinMatrix.from_array(mat)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"Coin {k} must be {{theta, omega}} or a 2x2 matrix: {exc}") from None


def run_config_from_dict(data: dict, settings: dict | None = None, tol_overrides: list[str] | None = None, seed: int | None = None, output_dir: str | None = None) -> RunConfig:
    """
    Validate a run document and turn it into a RunConfig.

    Raises:
        ConfigError: malformed or inconsistent configuration
        DomainError: well-formed but mathematically invalid parameters
    """
    settings = settings or load_settings()
    defaults = settings["defaults"]
    if not isinstance(data, dict):
        raise ConfigError("Run config must be a mapping")

    command = data.get("command")
    if command not in COMMANDS:
        raise ConfigError(f"command must be one of {', '.join(COMMANDS)}; got {command!r}")

    tolerances = dict(settings["tolerances"])
    for name, value in _mapping(data.get("tolerances"), "tolerances").items():
        if name not in tolerances:
            raise ConfigError(f"Unknown tolerance {name!r}")
        tolerances[name] = _tolerance_value(name, value)
    tolerances.update(parse_tolerance_overrides(tol_overrides, tolerances))

    topology = _parse_topology(data.get("topology"), int(defaults["line_window"]))

    model = data.get("model") or {}
    if not isinstance(model, dict):
        raise ConfigError("model must be a mapping")
    sources = [key for key in ("cphi", "coins", "hopping") if key in model]
    if len(sources) > 1:
        raise ConfigError(f"Exactly one model source allowed, got {sources}")

    cphi = coins = hopping = None
    phi_ratio = None
    theta = parse_angle(defaults["theta"])
    if "cphi" in model:
        block = _mapping(model["cphi"], "cphi")
        if "theta" not in block:
            raise ConfigError("cphi model needs theta")
        if "phi" in block:
            phi = parse_angle(block["phi"])
            phi_ratio = angle_ratio(block["phi"])
        elif command == "cycle-check" and topology.is_cycle and topology.size % 2 == 0:
            phi = np.pi / (topology.size // 2)
            phi_ratio = Fraction(1, topology.size // 2)
        else:
            raise ConfigError("cphi model needs phi")
        theta = parse_angle(block["theta"])
        cphi = CPhiParams(theta=theta, phi=phi, omega0=parse_angle(block.get("omega0", 0.0)))
    elif "coins" in model:
        entries = model["coins"]
        if not isinstance(entries, list) or not entries:
            raise ConfigError("coins must be a non-empty list")
        coins = tuple(_parse_coin(entry, k) for k, entry in enumerate(entries))
    elif "hopping" in model:
        entries = model["hopping"]
        if not isinstance(entries, list) or not entries:
            raise ConfigError("hopping must be a non-empty list")
        try:
            hopping = tuple(float(p) for p in entries)
        except (TypeError, ValueError):
            raise ConfigError("hopping entries must be numbers") from None
        if any(p < 0 or p > 1 for p in hopping):
            raise ConfigError("hopping probabilities must lie in [0, 1]")

    if command in COIN_COMMANDS and cphi is None and coins is None:
        raise ConfigError(f"{command} needs a coin model (cphi or coins)")
    if command == "rw-check" and hopping is None:
        raise ConfigError("rw-check needs a hopping model")
    if command == "dichotomy" and (coins is not None or hopping is not None):
        raise ConfigError("dichotomy only accepts an optional cphi block (for theta)")
    if command == "cycle-check" and not topology.is_cycle:
        raise ConfigError("cycle-check requires a cycle topology")
    if command == "dichotomy" and topology.is_cycle:
        raise ConfigError("dichotomy witnesses live on a line window")
    if command == "period" and topology.is_cycle:
        raise ConfigError("period detection works on the line")
    if command == "cycle-check" and cphi is None:
        raise ConfigError("cycle-check needs a cphi model")

    lam = parse_complex(data["lambda"]) if data.get("lambda") is not None else None
    psi0_raw = data.get("psi0", defaults["psi0"])
    if not isinstance(psi0_raw, (list, tuple)) or len(psi0_raw) != 2:
        raise ConfigError("psi0 must be a list of two complex numbers")
    psi0 = tuple(parse_complex(v) for v in psi0_raw)

    initial = data.get("initial", defaults["initial"])
    if initial not in INITIAL_STATES:
        raise ConfigError(f"initial must be one of {', '.join(INITIAL_STATES)}")
    needs_lambda = command == "eigenstate" or (command == "simulate" and initial == "eigenstate")
    if needs_lambda and coins is not None and lam is None:
        raise ConfigError("Explicit coin lists need an explicit lambda")

    try:
        steps = int(data.get("steps", defaults["steps"]))
        max_period = int(data.get("max_period", defaults["max_period"]))
        scan_width = int(data["scan_width"]) if data.get("scan_width") is not None else None
        start = int(model.get("start", 0))
        irrational_scan = int(data.get("irrational_scan", defaults["irrational_scan"]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"Integer field malformed: {exc}") from None
    if steps < 0:
        raise ConfigError("steps must be >= 0")
    if max_period < 1:
        raise ConfigError("max_period must be >= 1")
    if command == "dichotomy" and max_period < 2:
        raise ConfigError("dichotomy needs max_period >= 2")

    output = _mapping(data.get("output"), "output")
    out_dir = output_dir or output.get("dir") or defaults["output_dir"]

    return RunConfig(
        command=command,
        topology=topology,
        tolerances=tolerances,
        cphi=cphi,
        coins=coins,
        hopping=hopping,
        start=start,
        lam=lam,
        psi0=psi0,
        steps=steps,
        initial=initial,
        max_period=max_period,
        scan_width=scan_width,
        phi_ratio=phi_ratio,
        theta=theta,
        irrational_scan=irrational_scan,
        seed=_parse_seed(seed if seed is not None else data.get("seed")),
        output_dir=str(out_dir),
        raw=data,
    )


def load_run_config(path: str | Path, settings: dict | None = None, tol_overrides: list[str] | None = None, seed: int | None = None, output_dir: str | None = None) -> RunConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise ConfigError(f"Could not parse {path}: {exc}") from None
    return run_config_from_dict(data, settings, tol_overrides, seed, output_dir)


def load_sweep(path: str | Path) -> list[dict]:
    """A sweep file is a YAML list of run documents, or a mapping with a `runs` list."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Sweep file not found: {path}")
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise ConfigError(f"Could not parse {path}: {exc}") from None
    if isinstance(data, dict):
        data = data.get("runs")
    if not isinstance(data, list) or not data:
        raise ConfigError("Sweep file must hold a non-empty list of run configs")
    return data
