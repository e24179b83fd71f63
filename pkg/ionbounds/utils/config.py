import json
import os
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .errors import ConfigError


APP_NAME = "ionbounds"
OUTPUT_DIR_ENV = "IONBOUNDS_OUTPUT_DIR"

COMMANDS = ("report", "figure1", "figure2", "sweep", "constants")
SHIFT_MODES = ("estimate", "quadrature", "exact")

MIN_FIGURE_SAMPLES = 400
# 401 points put the quarter-cycle times on the figure grids
DEFAULT_FIGURE_SAMPLES = 401
MAX_SWEEP_ROWS = 10**7


def output_dir() -> str:
    # Prefer IONBOUNDS_OUTPUT_DIR, fallback to the working directory
    path = os.environ.get(OUTPUT_DIR_ENV) or os.getcwd()
    os.makedirs(path, exist_ok=True)
    return path


def resolve_output_path(path: Optional[str], default_name: str) -> str:
    """Relative or missing paths land in ``output_dir()``."""
    if not path:
        return os.path.join(output_dir(), default_name)
    if os.path.isabs(path):
        return path
    return os.path.join(output_dir(), path)


@dataclass
class SweepConfig:
    shape: str = "cosine"
    E0: List[float] = field(default_factory=list)
    omega: List[float] = field(default_factory=list)
    tau: List[float] = field(default_factory=list)
    omega_tau: List[float] = field(default_factory=list)  # alternative to tau: tau = value / omega
    ramp_cycles: Optional[float] = None

    def durations(self, omega: float) -> List[float]:
        if self.omega_tau:
            return [v / omega for v in self.omega_tau]
        return list(self.tau)

    @property
    def size(self) -> int:
        n_tau = len(self.omega_tau) if self.omega_tau else len(self.tau)
        return len(self.E0) * len(self.omega) * n_tau


@dataclass
class RunConfig:
    command: str = "report"
    pulse: Dict[str, Any] = field(default_factory=dict)
    state: Tuple[int, int, int] = (1, 0, 0)
    drop_spreading: bool = False
    shift_mode: str = "estimate"
    output_path: Optional[str] = None
    workers: int = 1
    include_spreading: bool = True  # figure 2 only
    samples: int = DEFAULT_FIGURE_SAMPLES
    sweep: Optional[SweepConfig] = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}, expected one of {COMMANDS}", field="command")
        if self.shift_mode not in SHIFT_MODES:
            raise ConfigError(f"expected one of {SHIFT_MODES}, got {self.shift_mode!r}", field="shift_mode")
        if self.command == "report" and not self.pulse:
            raise ConfigError("a pulse config is required for 'report'", field="pulse")
        if self.command == "sweep" and self.sweep is None:
            raise ConfigError("a sweep config is required for 'sweep'", field="pulse")
        if self.samples < MIN_FIGURE_SAMPLES:
            raise ConfigError(f"at least {MIN_FIGURE_SAMPLES} samples are required, got {self.samples}", field="samples")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}", field="workers")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def load_json(path: str) -> Dict[str, Any]:
    """Read a JSON object, reporting decoder errors with their line number."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ConfigError("file not found", path=path) from None
    except json.JSONDecodeError as exc:
        raise ConfigError(exc.msg, path=path, line=exc.lineno) from None
    if not isinstance(data, dict):
        raise ConfigError(f"expected a JSON object, got {type(data).__name__}", path=path)
    return data


def _key_line(path: str, key: str) -> Optional[int]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            for number, text in enumerate(f, start=1):
                if f'"{key}"' in text:
                    return number
    except OSError:
        return None
    return None


def locate(exc: ConfigError, path: str) -> ConfigError:
    """Attach the file and the line of the offending key to an error raised while interpreting it."""
    if exc.path is not None:
        return exc
    line = _key_line(path, exc.field) if exc.field else None
    message = str(exc)
    if exc.field:
        message = message.split(": ", 1)[-1]
    return ConfigError(message, path=path, line=line, field=exc.field)


_SWEEP_LISTS = ("E0", "omega", "tau", "omega_tau")
_SWEEP_KEYS = ("shape", *_SWEEP_LISTS, "ramp_cycles")


def _number_list(data: Dict[str, Any], key: str) -> List[float]:
    raw = data.get(key, [])
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        raw = [raw]
    if not isinstance(raw, list):
        raise ConfigError(f"expected a list of numbers, got {raw!r}", field=key)
    values = []
    for item in raw:
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise ConfigError(f"expected a number, got {item!r}", field=key)
        values.append(float(item))
    return values


def sweep_from_dict(data: Dict[str, Any]) -> SweepConfig:
    unknown = sorted(set(data) - set(_SWEEP_KEYS))
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown}", field=unknown[0])
    shape = data.get("shape", "cosine")
    if shape not in ("cosine", "cosine_ramped", "constant"):
        raise ConfigError(f"sweeps support cosine, cosine_ramped and constant pulses, got {shape!r}", field="shape")
    if "tau" in data and "omega_tau" in data:
        raise ConfigError("give either 'tau' or 'omega_tau', not both", field="omega_tau")
    lists = {key: _number_list(data, key) for key in _SWEEP_LISTS}
    if shape == "constant" and not lists["omega"]:
        # omega is not a parameter of the square pulse; one placeholder value keeps the product shape
        lists["omega"] = [1.0]
    if shape == "constant" and lists["omega_tau"]:
        raise ConfigError("a constant pulse has no carrier frequency", field="omega_tau")
    if any(w <= 0.0 for w in lists["omega"]):
        raise ConfigError("frequencies must be positive", field="omega")
    ramp = data.get("ramp_cycles")
    if shape == "cosine_ramped" and ramp is None:
        raise ConfigError("required for shape 'cosine_ramped'", field="ramp_cycles")
    config = SweepConfig(shape=shape, ramp_cycles=None if ramp is None else float(ramp), **lists)
    if config.size > MAX_SWEEP_ROWS:
        raise ConfigError(f"sweep has {config.size} rows, more than the limit of {MAX_SWEEP_ROWS}", field="E0")
    return config


def load_sweep_config(path: str) -> SweepConfig:
    try:
        return sweep_from_dict(load_json(path))
    except ConfigError as exc:
        raise locate(exc, path) from None
