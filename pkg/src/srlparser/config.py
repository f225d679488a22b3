"""Run configuration: a `key = value` text file plus CLI overrides.

Config keys mirror the RunConfig and ModelConfig field names; values
given on the command line win over the file.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from .model import ModelConfig

MODE_FULL = "full"
MODE_GOLD = "gold-predicates"


@dataclass
class RunConfig:
    train_path: str | None = None
    dev_path: str | None = None
    input_path: str | None = None
    output_path: str | None = None
    model_path: str | None = None
    vector_file: str | None = None
    train_context: str | None = None
    dev_context: str | None = None
    context_file: str | None = None
    log_path: str | None = None
    mode: str = MODE_FULL
    seed: int = 1
    epochs: int = 600
    batch: int = 32
    patience: int = 0
    decay_patience: int = 10
    jobs: int = 1
    model: ModelConfig = field(default_factory=ModelConfig)

    @property
    def gold_mode(self) -> bool:
        return self.mode == MODE_GOLD

    def validate(self) -> None:
        if self.mode not in (MODE_FULL, MODE_GOLD):
            raise ValueError(f"mode must be {MODE_FULL!r} or {MODE_GOLD!r}, got {self.mode!r}")
        if self.batch < 1 or self.epochs < 0 or self.jobs < 1:
            raise ValueError("batch and jobs must be positive, epochs non-negative")
        self.model.validate()


_RUN_FIELDS = {f.name: f.type for f in dataclasses.fields(RunConfig) if f.name != "model"}
_MODEL_FIELDS = {f.name: f.type for f in dataclasses.fields(ModelConfig)}


def parse_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = stripped.partition("=")
            values[key.strip()] = value.strip()
    return values


def _convert(key: str, value: str, typename: str):
    base = typename.replace(" ", "")
    if base in ("int", "int|None"):
        return int(value)
    if base == "float":
        return float(value)
    if base == "bool":
        lowered = value.lower()
        if lowered in ("true", "yes", "1", "on"):
            return True
        if lowered in ("false", "no", "0", "off"):
            return False
        raise ValueError(f"{key}: cannot parse boolean {value!r}")
    return value


def build_run_config(file_values: dict[str, str] | None = None,
                     overrides: dict[str, object] | None = None) -> RunConfig:
    """Merge defaults, config-file entries, and CLI overrides (in that order)."""
    run = RunConfig()
    for key, raw in (file_values or {}).items():
        if key in _RUN_FIELDS:
            setattr(run, key, _convert(key, raw, str(_RUN_FIELDS[key])))
        elif key in _MODEL_FIELDS:
            setattr(run.model, key, _convert(key, raw, str(_MODEL_FIELDS[key])))
        else:
            raise ValueError(f"unknown configuration key {key!r}")
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key in _RUN_FIELDS:
            setattr(run, key, value)
        elif key in _MODEL_FIELDS:
            setattr(run.model, key, value)
        else:
            raise ValueError(f"unknown configuration key {key!r}")
    return run
