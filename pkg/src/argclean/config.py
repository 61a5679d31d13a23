"""Run configuration: a single TOML file with CLI-flag overrides.

Defaults follow the published operating point: counts without stopwords,
m=100 candidates per n for n in 1..5, tau=0.95, frequency floors 200/2000.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field, fields

if sys.version_info >= (3, 11):  # pragma: no cover
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError
from .patterns import PatternType


@dataclass
class RunConfig:
    # corpus
    corpus_path: str = ""
    corpus_format: str = "generic_jsonl"
    field_mapping: dict = field(default_factory=dict)
    stopwords_path: str = ""
    include_conclusions: bool = False
    # patterns
    scoring: str = "counts"
    stopword_mode: str = "without_stopwords"
    m: int = 100
    n_min: int = 1
    n_max: int = 5
    # bootstrap
    tau: float = 0.95
    min_freq_irrelevance: int = 200
    min_freq_relevance: int = 2000
    k_max: int = 20
    # run
    rng_seed: int = 0
    sample_fraction: float = 0.1
    workers: int = 1
    output_dir: str = "out"
    per_iter_annotation: int = 100
    cleanse_to_fixpoint: bool = False
    # service
    host: str = "127.0.0.1"
    port: int = 8765
    state_dir: str = "workbench-state"
    static_dir: str = ""

    def __post_init__(self):
        if not 0.0 < self.tau <= 1.0:
            raise ConfigError(f"tau must be in (0, 1], got {self.tau}")
        if not 0.0 < self.sample_fraction <= 1.0:
            raise ConfigError(f"sample_fraction must be in (0, 1], got {self.sample_fraction}")
        if self.n_min < 1 or self.n_max < self.n_min:
            raise ConfigError(f"invalid n range [{self.n_min}, {self.n_max}]")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")

    @property
    def ptype(self) -> PatternType:
        return PatternType(self.scoring, self.stopword_mode)

    def out(self, name: str) -> str:
        os.makedirs(self.output_dir, exist_ok=True)
        return os.path.join(self.output_dir, name)


_SECTIONS = {
    "corpus": {
        "path": "corpus_path",
        "format": "corpus_format",
        "field_mapping": "field_mapping",
        "stopwords": "stopwords_path",
        "include_conclusions": "include_conclusions",
    },
    "patterns": {
        "scoring": "scoring",
        "stopword_mode": "stopword_mode",
        "m": "m",
        "n_min": "n_min",
        "n_max": "n_max",
    },
    "bootstrap": {
        "tau": "tau",
        "min_freq_irrelevance": "min_freq_irrelevance",
        "min_freq_relevance": "min_freq_relevance",
        "k_max": "k_max",
    },
    "run": {
        "rng_seed": "rng_seed",
        "sample_fraction": "sample_fraction",
        "workers": "workers",
        "output_dir": "output_dir",
        "per_iter_annotation": "per_iter_annotation",
        "cleanse_to_fixpoint": "cleanse_to_fixpoint",
    },
    "service": {
        "host": "host",
        "port": "port",
        "state_dir": "state_dir",
        "static_dir": "static_dir",
    },
}


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            payload = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: invalid TOML: {exc}")
    kwargs = {}
    for section, mapping in _SECTIONS.items():
        body = payload.pop(section, {})
        if not isinstance(body, dict):
            raise ConfigError(f"{path}: section [{section}] must be a table")
        for key, value in body.items():
            if key not in mapping:
                raise ConfigError(f"{path}: unknown key {key!r} in section [{section}]")
            kwargs[mapping[key]] = value
    if payload:
        raise ConfigError(f"{path}: unknown top-level sections {sorted(payload)}")
    return RunConfig(**kwargs)


def config_to_toml(config: RunConfig) -> str:
    """Serialize a config back to TOML (used by the demo generator)."""
    lines = []
    values = {f.name: getattr(config, f.name) for f in fields(config)}
    for section, mapping in _SECTIONS.items():
        body = []
        for key, attr in mapping.items():
            value = values[attr]
            if value == getattr(RunConfig(), attr):
                continue
            if isinstance(value, bool):
                body.append(f"{key} = {'true' if value else 'false'}")
            elif isinstance(value, (int, float)):
                body.append(f"{key} = {value}")
            elif isinstance(value, dict):
                if value:
                    inner = ", ".join(f'"{k}" = "{v}"' for k, v in value.items())
                    body.append(f"{key} = {{ {inner} }}")
            else:
                body.append(f'{key} = "{value}"')
        if body:
            lines.append(f"[{section}]")
            lines.extend(body)
            lines.append("")
    return "\n".join(lines)
