"""Scenario configuration for the verification suites.

A flat JSON-friendly record; unknown or ill-typed fields fail validation
with the offending names listed.  Identical config plus seed implies
byte-identical reports.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields


def _default_tolerances() -> dict:
    return {
        "twist_symplecto": 1e-6,
        "strictness": 1e-8,
        "conformality": 1e-10,
        "liouville": 1e-6,
        "positivity_floor": 1e-8,
        "pipeline_vs_closed": 1e-6,
        "twist_matrix": 1e-9,
        "pre_surgery": 1e-10,
        "page_speed": 1e-8,
        "giroux_residual": 1e-5,
        "giroux_path": 1e-5,
        "glue_overlap": 1e-8,
        "transfer_theta": 1e-12,
        "window_exponent_low": 0.7,
        "window_exponent_high": 1.3,
    }


@dataclass
class ScenarioConfig:
    suite: str = "all"
    seed: int = 0
    out_dir: str | None = None

    # geometry parameters
    epsilon: float = 0.1
    window_epsilon: float = 0.24  # page half-angle for the smoothing-window scan
    p0: float = 1.0
    twist_k: int = 1
    scale_C: float = 4.0
    deltas: list = field(default_factory=lambda: [0.05, 0.1])
    window_deltas: list = field(default_factory=lambda: [0.02, 0.01, 0.005])
    a_values: list = field(default_factory=lambda: [10.0, 100.0, 1000.0, 10000.0])

    # dimensions
    sphere_dims: list = field(default_factory=lambda: [1, 2, 3])
    model_dims: list = field(default_factory=lambda: [[2, 1], [3, 1], [3, 2]])
    page_blocks: list = field(default_factory=lambda: [2, 3, 4])  # z,w block sizes

    # sample counts
    n_twist: int = 500
    n_strict: int = 500
    n_liouville: int = 100
    n_surface_scan: int = 10000
    n_monodromy: int = 200
    n_giroux: int = 200
    n_giroux_numeric: int = 6
    n_chains: int = 1000
    n_nonconnected: int = 100
    n_window: int = 24

    # numerics
    h_fd: float = 1e-5
    flow_step: float = 1e-3
    giroux_flow_step: float = 0.02
    quad_nodes: int = 32
    search_depth: int = 6

    tolerances: dict = field(default_factory=_default_tolerances)

    def __post_init__(self):
        problems = []
        if self.suite not in SUITE_NAMES:
            problems.append(f"suite: unknown name {self.suite!r}, expected one of {sorted(SUITE_NAMES)}")
        for name in ("epsilon", "window_epsilon"):
            v = getattr(self, name)
            if not 0.0 < v < 0.25:
                problems.append(f"{name}: page half-angle must lie in (0, 1/4), got {v}")
        if self.p0 <= 0:
            problems.append(f"p0: must be positive, got {self.p0}")
        if self.twist_k < 1:
            problems.append(f"twist_k: must be a positive integer, got {self.twist_k}")
        if self.scale_C <= 0:
            problems.append(f"scale_C: must be positive, got {self.scale_C}")
        for name in [f.name for f in fields(self) if f.name.startswith("n_")]:
            if getattr(self, name) < 1:
                problems.append(f"{name}: sample count must be >= 1")
        for key, value in self.tolerances.items():
            if not value > 0:
                problems.append(f"tolerances.{key}: must be positive, got {value}")
        missing = set(_default_tolerances()) - set(self.tolerances)
        if missing:
            problems.append(f"tolerances: missing keys {sorted(missing)}")
        if problems:
            raise ConfigError(problems)

    def tol(self, key: str) -> float:
        return float(self.tolerances[key])

    def as_dict(self) -> dict:
        return asdict(self)


class ConfigError(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("invalid scenario config:\n  " + "\n  ".join(problems))


SUITE_NAMES = {"dehn-twist", "weinstein-strictness", "monodromy", "giroux",
               "binding", "moves", "all"}


def config_from_dict(data: dict) -> ScenarioConfig:
    known = {f.name for f in fields(ScenarioConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError([f"unknown fields: {sorted(unknown)}"])
    merged_tol = _default_tolerances()
    merged_tol.update(data.get("tolerances", {}))
    data = dict(data)
    data["tolerances"] = merged_tol
    return ScenarioConfig(**data)


def load_config(path: str) -> ScenarioConfig:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"not valid JSON: {exc}"]) from exc
    if not isinstance(data, dict):
        raise ConfigError(["config root must be a JSON object"])
    return config_from_dict(data)
