"""Run configuration: a small JSON-backed settings record shared by the CLI."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass


@dataclass(frozen=True)
class RunConfig:
    ode_tol: float = 1e-11
    newton_tol: float = 1e-12
    hyperbolicity_margin: float = 1e-3
    exponent_bound: int = 10_000
    density_resolution: float = 0.2
    radius_factor: float = 0.35
    walk_seed: int = 7
    output_dir: str = "."
    write_csv: bool = False
    write_svg: bool = False

    def __post_init__(self):
        for name in ("ode_tol", "newton_tol", "hyperbolicity_margin", "density_resolution"):
            if getattr(self, name) <= 0:
                raise ValueError(f"config field {name} must be positive")
        if self.exponent_bound <= 0:
            raise ValueError("config field exponent_bound must be positive")

    @staticmethod
    def from_dict(d: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(RunConfig)}
        bad = sorted(set(d) - known)
        if bad:
            raise ValueError(f"unknown config field(s): {', '.join(bad)}")
        return RunConfig(**d)

    @staticmethod
    def load(path: str | None) -> "RunConfig":
        """Read from path, else $FOLIATION_LAB_CONFIG, else defaults."""
        if path is None:
            path = os.environ.get("FOLIATION_LAB_CONFIG")
        if path is None:
            return RunConfig()
        with open(path) as fh:
            return RunConfig.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]
