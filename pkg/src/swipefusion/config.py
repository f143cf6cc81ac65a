"""Run configuration: a versioned JSON document whose sections map onto the
component settings.  Relative paths resolve against the config file's folder.

Example::

    {
      "version": 1,
      "layout": null, "vocab": null, "phrases": null, "dev_phrases": null, "corpus": null,
      "noise_profile": "medium",
      "sim": {"noise_std": 0.15},
      "filter": {"lam": 0.75, "sigma": 0.1},
      "decoder": {"channel_sigma": 0.3, "letter_penalty": 2.0},
      "edit_costs": {"omit": -1.22, "stray": -1.22, "sub_adjacent": -0.77, "sub_far": -2.0,
                     "free_end_insertion": false},
      "fusion": {"swipe_correction_coeff": 0.3, "lm_coeff": 0.3, "num_suggestions": 5},
      "lm": {"order": 3, "discount": 0.75, "gamma": 0.2, "smoothing": 0.0001},
      "conditions": ["fusion", "naive"],
      "ablation": ["GDM", "GDM+SSCM", "GDM+SSCM+CLM"],
      "tune": {"swipe_correction_coeff": [0, 0.1, 0.2], "lm_coeff": [0, 0.1, 0.2]},
      "seed": 0, "n_phrases": null, "block_size": 10
    }

``null`` paths select the packaged defaults.  ``free_end_insertion`` defaults
to false in runs: every omitted intended character costs ``omit``, including
a trailing one.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .filtering import FilterParams
from .fusion import FusionConfig
from .simulate import NOISE_PROFILES, SimConfig, profile

CONFIG_VERSION = 1
CONDITIONS = ("fusion", "naive")
STAGES = ("GDM", "GDM+SSCM", "GDM+SSCM+CLM")
_PATHS = ("layout", "vocab", "phrases", "dev_phrases", "corpus")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class LMSettings:
    order: int = 3
    discount: float = 0.75
    gamma: float = 0.2
    smoothing: float = 1e-4


@dataclass(frozen=True)
class DecoderSettings:
    step: float = 0.4
    n_min: int = 8
    n_max: int = 48
    channel_sigma: float = 0.3
    letter_penalty: float = 2.0
    vertex_radius: float = 1.0


@dataclass(frozen=True)
class RunConfig:
    layout: Path | None = None
    vocab: Path | None = None
    phrases: Path | None = None
    dev_phrases: Path | None = None
    corpus: Path | None = None
    noise_profile: str = "medium"
    sim: SimConfig = field(default_factory=lambda: profile("medium"))
    filter: FilterParams = field(default_factory=FilterParams)
    decoder: DecoderSettings = field(default_factory=DecoderSettings)
    edit_costs: dict = field(default_factory=lambda: {"free_end_insertion": False})
    fusion: FusionConfig = field(default_factory=FusionConfig)
    lm: LMSettings = field(default_factory=LMSettings)
    conditions: tuple = CONDITIONS
    ablation: tuple = STAGES
    tune_grid: dict = field(default_factory=lambda: {"swipe_correction_coeff": [0.0, 0.1, 0.2, 0.3],
                                                     "lm_coeff": [0.0, 0.1, 0.2, 0.3]})
    seed: int = 0
    n_phrases: int | None = None
    block_size: int = 10

    def __post_init__(self):
        bad = set(self.conditions) - set(CONDITIONS) - set(STAGES)
        if bad:
            raise ConfigError(f"unknown conditions {sorted(bad)}")
        bad = set(self.ablation) - set(STAGES)
        if bad:
            raise ConfigError(f"unknown ablation stages {sorted(bad)}")
        if not self.conditions and not self.ablation:
            raise ConfigError("select at least one condition or ablation stage")
        for name in _PATHS:
            p = getattr(self, name)
            if p is not None and not Path(p).is_file():
                raise ConfigError(f"{name} file not found: {p}")
        if self.block_size < 1:
            raise ConfigError("block_size must be positive")

    def with_noise_profile(self, name: str) -> "RunConfig":
        if name not in NOISE_PROFILES:
            raise ConfigError(f"unknown noise profile {name!r}")
        return replace(self, noise_profile=name, sim=replace(self.sim, **NOISE_PROFILES[name]))


def _section(cls, data, what):
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigError(f"section {what!r} must be an object")
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown keys in {what!r}: {sorted(unknown)}")
    try:
        return cls(**data)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"section {what!r}: {e}") from None


def parse_config(data: dict, base: Path | None = None) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    version = data.get("version", CONFIG_VERSION)
    if version != CONFIG_VERSION:
        raise ConfigError(f"unsupported config version {version}")
    known = {f.name for f in fields(RunConfig)} | {"version", "tune"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    kw = {}
    for name in _PATHS:
        if data.get(name) is not None:
            p = Path(data[name])
            kw[name] = p if p.is_absolute() or base is None else base / p
    name = data.get("noise_profile", "medium")
    if name not in NOISE_PROFILES:
        raise ConfigError(f"unknown noise profile {name!r}")
    kw["noise_profile"] = name
    sim = data.get("sim") or {}
    try:
        kw["sim"] = profile(name, **sim)
    except TypeError as e:
        raise ConfigError(f"section 'sim': {e}") from None
    kw["filter"] = _section(FilterParams, data.get("filter"), "filter")
    kw["decoder"] = _section(DecoderSettings, data.get("decoder"), "decoder")
    kw["lm"] = _section(LMSettings, data.get("lm"), "lm")
    kw["edit_costs"] = {"free_end_insertion": False, **(data.get("edit_costs") or {})}
    try:
        kw["fusion"] = FusionConfig().with_overrides(data.get("fusion") or {})
    except (TypeError, ValueError) as e:
        raise ConfigError(f"section 'fusion': {e}") from None
    for key in ("conditions", "ablation"):
        if key in data:
            kw[key] = tuple(data[key])
    if "tune" in data:
        kw["tune_grid"] = data["tune"]
    for key in ("seed", "n_phrases", "block_size"):
        if key in data:
            kw[key] = data[key]
    return RunConfig(**kw)


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}:{e.lineno}: {e.msg}") from None
    return parse_config(data, path.parent)
