"""Run configuration: a flat key/value text file with CLI-flag overrides.

Every experiment is described by a config so runs are reproducible and
diffable.  Keys, one per line, ``key = value``; ``%`` starts a comment::

    data = data/iris.csv
    class = class
    distance = dims=* weights=equal norm=none
    mode = unsupervised
    f_alpha = 0.01
    min_leaf = 2
    prune = on
    validation_fraction = 0.25
    seed = 7

``dims=*`` resolves to every numeric descriptive attribute in
unsupervised mode and to the class attribute alone in supervised mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .dataset import (
    Dataset,
    encode_nominals,
    parse_attribute_mapping,
    parse_csv,
    parse_interpretations,
    set_class,
)
from .induction import InduceConfig
from .logic import TemplateSet, parse_template_spec
from .metrics import DistanceSpec


class ConfigError(ValueError):
    pass


_BOOL = {"on": True, "off": False, "true": True, "false": False, "yes": True, "no": False}


@dataclass
class RunConfig:
    data: str | None = None
    interpretations: str | None = None
    mapping: str | None = None
    templates: str | None = None
    class_attr: str | None = None
    nominal: str = ""  # comma list of column names, or * for all
    dims: str = "*"
    weights: str = "equal"
    norm: str = "none"
    split_score: str = "inter_distance"
    f_alpha: float = 0.01
    min_leaf: int = 2
    max_depth: int | None = None
    max_conjunction: int = 2
    mode: str = "unsupervised"
    prune: bool = True
    validation_fraction: float = 0.25
    prune_ties: bool = False
    stratify_validation: bool = False
    class_boundaries: tuple[float, ...] = ()
    seed: int = 0
    k: int = 10
    jobs: int = 1
    emit: str = "text,structured"
    out: str = "run"

    def validate(self):
        if (self.data is None) == (self.interpretations is None):
            raise ConfigError("exactly one data source required: data= or interpretations=")
        if self.mode not in ("supervised", "unsupervised"):
            raise ConfigError(f"mode must be supervised or unsupervised, got {self.mode!r}")
        if not (0.0 < self.f_alpha <= 1.0):
            raise ConfigError("f_alpha must lie in (0, 1]")
        if not (0.0 < self.validation_fraction < 1.0):
            raise ConfigError("validation_fraction must lie strictly between 0 and 1")
        for part in self.emit.split(","):
            if part not in ("text", "structured"):
                raise ConfigError(f"unknown emit format {part!r}")
        return self


_KEY_ALIASES = {"class": "class_attr"}

_INT_KEYS = {"min_leaf", "max_conjunction", "seed", "k", "jobs"}
_FLOAT_KEYS = {"f_alpha", "validation_fraction"}
_BOOL_KEYS = {"prune", "prune_ties", "stratify_validation"}


def parse_config(text: str, base: RunConfig | None = None) -> RunConfig:
    cfg = base if base is not None else RunConfig()
    known = {f.name for f in fields(RunConfig)}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        if line.startswith("distance ") or line.startswith("distance="):
            # `distance dims=<names> weights=<reals> norm=<kind>`, with or
            # without an equals sign after the keyword
            value = line[len("distance"):].lstrip(" =")
            cfg = _apply_distance_line(cfg, value, lineno)
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key = value, got {line!r}")
        key, _, value = line.partition("=")
        key = _KEY_ALIASES.get(key.strip(), key.strip())
        value = value.strip()
        if key not in known:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        cfg = replace(cfg, **{key: _convert(key, value, lineno)})
    return cfg


def _apply_distance_line(cfg, value, lineno):
    for part in value.split():
        if "=" not in part:
            raise ConfigError(f"config line {lineno}: distance parts look like dims=...: {part!r}")
        k, _, v = part.partition("=")
        if k not in ("dims", "weights", "norm"):
            raise ConfigError(f"config line {lineno}: unknown distance field {k!r}")
        cfg = replace(cfg, **{k: v})
    return cfg


def _convert(key, value, lineno=0):
    try:
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _BOOL_KEYS:
            if value.lower() not in _BOOL:
                raise ValueError(value)
            return _BOOL[value.lower()]
        if key == "max_depth":
            return None if value.lower() in ("none", "unlimited") else int(value)
        if key == "class_boundaries":
            return tuple(float(t) for t in value.split(",") if t)
        return value
    except ValueError:
        raise ConfigError(f"config line {lineno}: bad value {value!r} for {key}")


def load_config(path: str, overrides: dict | None = None) -> RunConfig:
    cfg = RunConfig()
    if path:
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"config file not found: {path}")
        cfg = parse_config(p.read_text())
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        key = _KEY_ALIASES.get(key, key)
        if isinstance(value, str):
            value = _convert(key, value)
        cfg = replace(cfg, **{key: value})
    return cfg.validate()


# ---------------------------------------------------------------------------
# Turning a config into runnable objects


@dataclass
class PreparedRun:
    """A config resolved against its data: everything induction needs."""

    dataset: Dataset
    config: RunConfig
    induce: InduceConfig
    templates: TemplateSet = field(default_factory=TemplateSet)


def _read(path: str, what: str) -> str:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"{what} file not found: {path}")
    return p.read_text()


def load_dataset(cfg: RunConfig) -> Dataset:
    """Load, class-mark and numerically encode the configured data source."""
    if cfg.data is not None:
        if cfg.nominal == "*":
            force = "*"
        else:
            force = tuple(n.strip() for n in cfg.nominal.split(",") if n.strip())
        ds = parse_csv(_read(cfg.data, "data"), force_nominal=force)
    else:
        mapping = parse_attribute_mapping(_read(cfg.mapping, "mapping")) if cfg.mapping else None
        ds = parse_interpretations(_read(cfg.interpretations, "interpretations"), mapping)
    if cfg.class_attr:
        ds = set_class(ds, cfg.class_attr)
    return encode_nominals(ds)


def resolve_dims(cfg: RunConfig, ds: Dataset) -> tuple[int, ...]:
    if cfg.dims == "*":
        if cfg.mode == "supervised":
            if ds.class_index is None:
                raise ConfigError("supervised dims=* needs a class attribute")
            return (ds.class_index,)
        dims = tuple(ds.numeric_descriptive())
        if not dims:
            raise ConfigError("dims=* found no numeric descriptive attributes")
        return dims
    try:
        return tuple(ds.attribute_index(name.strip()) for name in cfg.dims.split(","))
    except Exception as exc:
        raise ConfigError(str(exc))


def prepare_run(cfg: RunConfig) -> PreparedRun:
    ds = load_dataset(cfg)
    dims = resolve_dims(cfg, ds)
    if cfg.weights in ("equal", "", None):
        weights = None
    else:
        weights = tuple(float(t) for t in cfg.weights.split(","))
        if len(weights) != len(dims):
            raise ConfigError("one weight per distance dimension required")
    spec = DistanceSpec(dims=dims, weights=weights, normalization=cfg.norm)
    templates = TemplateSet()
    if cfg.templates:
        templates = parse_template_spec(_read(cfg.templates, "templates"))
    induce = InduceConfig(
        distance=spec,
        templates=templates,
        split_score=cfg.split_score,
        f_alpha=cfg.f_alpha,
        min_leaf=cfg.min_leaf,
        max_depth=cfg.max_depth,
        max_conjunction=cfg.max_conjunction,
        seed=cfg.seed,
    )
    return PreparedRun(dataset=ds, config=cfg, induce=induce, templates=templates)
