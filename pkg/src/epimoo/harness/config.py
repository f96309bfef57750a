"""Experiment configuration: defaults, presets, flat key=value files, seeds.

The config file format is a flat, human-editable ``key = value`` document;
``#`` starts a comment, lists are comma-separated.  Every key mirrors an
ExperimentConfig field and unknown keys are rejected.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from epimoo.blocking import BlockingPolicy
from epimoo.errors import ConfigError
from epimoo.moead import DEParams
from epimoo.problems import suite_catalog

VARIANTS = ("baseline", "e", "eib", "eip")
ALL_PROBLEMS = tuple(p.name for p in suite_catalog())

# scale knobs only; the protocol (cycles, clock, interval) stays put
PRESETS = {
    "desk": {"population": 100, "dimension": 10, "runs": 10},
    "paper": {"population": 500, "dimension": None, "runs": 20},
}


@dataclass(frozen=True)
class ExperimentConfig:
    problems: tuple[str, ...] = ALL_PROBLEMS
    variants: tuple[str, ...] = VARIANTS
    population: int = 500
    cycles: int = 2
    generations: int | None = None  # overrides cycles when set
    tau_t: int = 5
    n_t: int = 10
    runs: int = 20
    base_seed: int = 1234
    interval: int = 2
    reinit_fraction: float = 0.2
    dimension: int | None = None
    pf_points: int = 1000
    common_seeds: bool = False
    # DE / neighborhood parameters
    f_scale: float = 0.5
    cr: float = 1.0
    pm: float | None = None
    eta_m: float = 20.0
    delta: float = 0.9
    nr: int = 2
    t_neighbors: int = 20
    # blocking parameters
    block_probability: float = 0.1
    block_size: int = 6
    max_block_probability: float = 0.8
    probability_quantum: float = 0.01
    block_shields_mutation: bool = False
    schedule_span: str = "run"

    def __post_init__(self) -> None:
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        if self.population < max(3, self.t_neighbors):
            raise ConfigError("population must be at least max(3, t_neighbors)")
        if self.interval < 1:
            raise ConfigError("interval must be >= 1")
        if not self.problems:
            raise ConfigError("no problems selected")
        unknown = set(self.problems) - set(ALL_PROBLEMS)
        if unknown:
            raise ConfigError(f"unknown problems: {sorted(unknown)}; catalog has {ALL_PROBLEMS}")
        bad = set(self.variants) - set(VARIANTS)
        if bad:
            raise ConfigError(f"unknown variants: {sorted(bad)}; pick from {VARIANTS}")
        if not self.variants:
            raise ConfigError("no variants selected")
        if self.total_generations % self.interval != 0:
            raise ConfigError(
                f"total generations {self.total_generations} not divisible by interval {self.interval}"
            )
        if not 0.0 <= self.reinit_fraction <= 1.0:
            raise ConfigError("reinit_fraction must lie in [0, 1]")
        self.de_params()  # surfaces DE validation errors as config errors

    @property
    def cycle_generations(self) -> int:
        return 2 * self.tau_t * self.n_t

    @property
    def total_generations(self) -> int:
        return self.generations if self.generations is not None else self.cycles * self.cycle_generations

    def de_params(self) -> DEParams:
        return DEParams(
            f_scale=self.f_scale,
            cr=self.cr,
            pm=self.pm,
            eta_m=self.eta_m,
            delta=self.delta,
            nr=self.nr,
            t_neighbors=self.t_neighbors,
        )

    def blocking_policy(self, variant: str) -> BlockingPolicy:
        if variant not in VARIANTS:
            raise ConfigError(f"unknown variant {variant!r}")
        return BlockingPolicy(
            variant="off" if variant == "baseline" else variant,
            base_probability=self.block_probability,
            base_block_size=self.block_size,
            max_probability=self.max_block_probability,
            probability_quantum=self.probability_quantum,
            block_shields_mutation=self.block_shields_mutation,
            schedule_span=self.schedule_span,
        )

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def fingerprint(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()[:16]

    def seed_for(self, problem: str, variant: str, run_index: int) -> int:
        tag = "*" if self.common_seeds else variant
        digest = hashlib.sha256(f"{problem}|{tag}|{run_index}".encode()).digest()
        cell = int.from_bytes(digest[:8], "big")
        return (self.base_seed ^ cell) & (2**63 - 1)

    def cells(self) -> list[tuple[str, str, int]]:
        return [
            (problem, variant, run)
            for problem in self.problems
            for variant in self.variants
            for run in range(self.runs)
        ]


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(ExperimentConfig)}
_LIST_FIELDS = {"problems", "variants"}
_OPTIONAL_INT = {"generations", "dimension"}
_OPTIONAL_FLOAT = {"pm"}
_BOOL_FIELDS = {"common_seeds", "block_shields_mutation"}
_STR_FIELDS = {"schedule_span"}
_INT_FIELDS = {
    "population", "cycles", "tau_t", "n_t", "runs", "base_seed", "interval",
    "pf_points", "nr", "t_neighbors", "block_size",
}


def _coerce(key: str, raw: str):
    raw = raw.strip()
    if key in _LIST_FIELDS:
        return tuple(item.strip().lower() for item in raw.split(",") if item.strip())
    if key in _BOOL_FIELDS:
        if raw.lower() in ("true", "yes", "1"):
            return True
        if raw.lower() in ("false", "no", "0"):
            return False
        raise ConfigError(f"{key}: expected a boolean, got {raw!r}")
    if key in _OPTIONAL_INT or key in _OPTIONAL_FLOAT:
        if raw.lower() in ("none", ""):
            return None
        return int(raw) if key in _OPTIONAL_INT else float(raw)
    if key in _INT_FIELDS:
        return int(raw)
    if key in _STR_FIELDS:
        return raw.lower()
    return float(raw)


def parse_config_text(text: str) -> dict:
    """Parse a flat key=value document into config field overrides."""
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = stripped.split("=", 1)
        key = key.strip().lower()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = _coerce(key, raw)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from exc
    return values


def load_config_file(path: str | Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    return parse_config_text(path.read_text())


def build_config(
    file_values: dict | None = None,
    preset: str | None = None,
    overrides: dict | None = None,
) -> ExperimentConfig:
    """Merge defaults < config file < preset < explicit overrides."""
    merged: dict = {}
    merged.update(file_values or {})
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; pick from {sorted(PRESETS)}")
        merged.update(PRESETS[preset])
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    try:
        return ExperimentConfig(**merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
