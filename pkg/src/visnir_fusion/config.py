"""Run configuration as a flat ``key = value`` text file.

Lines starting with ``#`` and blank lines are ignored. ``input`` may be
given more than once.
"""
from dataclasses import dataclass, replace
from typing import Optional

from .complementarity import XDogParams
from .decomposition import FilterParams
from .fusion import ArctanIParams


class ConfigError(ValueError):
    pass


# config key -> (section, attribute)
PARAM_KEYS = {
    "wgif_radius": ("filter_params", "wgif_radius"),
    "wgif_eps": ("filter_params", "wgif_eps"),
    "wgif_lambda": ("filter_params", "wgif_lambda"),
    "gif_radius": ("filter_params", "gif_radius"),
    "gif_eps": ("filter_params", "gif_eps"),
    "xdog_sigma": ("xdog_params", "sigma"),
    "xdog_k": ("xdog_params", "k"),
    "xdog_p": ("xdog_params", "p"),
    "xdog_eps_t": ("xdog_params", "eps_t"),
    "xdog_phi": ("xdog_params", "phi"),
    "alpha": ("arctan_params", "alpha"),
    "y_clamp": ("arctan_params", "y_clamp"),
}
INT_KEYS = {"wgif_radius", "gif_radius", "bit_depth", "jobs"}


@dataclass(frozen=True)
class FusionConfig:
    filter_params: FilterParams = FilterParams()
    xdog_params: XDogParams = XDogParams()
    arctan_params: ArctanIParams = ArctanIParams()
    inputs: tuple = ()
    output_dir: Optional[str] = None
    report: Optional[str] = None
    bit_depth: int = 8
    jobs: int = 1

    def __post_init__(self):
        if self.bit_depth not in (8, 16):
            raise ConfigError(f"bit_depth must be 8 or 16, got {self.bit_depth}")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")

    def to_dict(self) -> dict:
        d = {}
        for key, (section, attr) in PARAM_KEYS.items():
            d[key] = getattr(getattr(self, section), attr)
        d["input"] = list(self.inputs)
        d["output_dir"] = self.output_dir
        d["report"] = self.report
        d["bit_depth"] = self.bit_depth
        d["jobs"] = self.jobs
        return d


def _convert(key, value):
    try:
        if key in INT_KEYS:
            return int(value)
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"bad value for {key}: {value!r}") from None


def with_overrides(config: FusionConfig, values: dict) -> FusionConfig:
    """Return ``config`` with the given flat keys replaced; None values are skipped."""
    sections = {}
    run = {}
    for key, value in values.items():
        if value is None:
            continue
        if key in PARAM_KEYS:
            section, attr = PARAM_KEYS[key]
            sections.setdefault(section, {})[attr] = _convert(key, value)
        elif key == "input":
            items = [value] if isinstance(value, str) else list(value)
            run["inputs"] = tuple(items)
        elif key in ("output_dir", "report"):
            run[key] = str(value)
        elif key in ("bit_depth", "jobs"):
            run[key] = _convert(key, value)
        else:
            raise ConfigError(f"unknown config key: {key}")
    try:
        for section, attrs in sections.items():
            run[section] = replace(getattr(config, section), **attrs)
        return replace(config, **run)
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(str(e)) from None


def parse_config(text: str, base: FusionConfig = FusionConfig()) -> FusionConfig:
    values = {}
    inputs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "input":
            inputs.append(value)
        else:
            values[key] = value
    if inputs:
        values["input"] = inputs
    return with_overrides(base, values)


def load_config(path) -> FusionConfig:
    try:
        with open(path) as f:
            return parse_config(f.read())
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e


def serialize_config(config: FusionConfig) -> str:
    lines = []
    for key, value in config.to_dict().items():
        if key == "input":
            lines.extend(f"input = {v}" for v in value)
        elif value is not None:
            lines.append(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")
    return "\n".join(lines) + "\n"
