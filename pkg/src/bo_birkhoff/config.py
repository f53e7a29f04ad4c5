"""Run configuration, hashing and artifact output."""
from __future__ import annotations

import csv
import hashlib
import json
import os
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from . import __version__
from .direct import IntegratorConfig
from .inverse import NewtonConfig
from .lax import CONV_TOL, GAP_TOL

OUT_ENV = "BO_BIRKHOFF_OUT"


@dataclass(frozen=True)
class RunConfig:
    M: int = 128
    M_B: int | None = None
    gap_tol: float = GAP_TOL
    conv_tol: float = CONV_TOL
    fd_step: float = 1e-5
    newton: NewtonConfig = field(default_factory=NewtonConfig)
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    out: str = "out"
    seed: int = 0

    def __post_init__(self):
        if self.M_B is not None and self.M < 2 * self.M_B:
            raise ValueError(f"M = {self.M} must be at least 2 M_B = {2 * self.M_B}")
        for name in ("gap_tol", "conv_tol", "fd_step"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        # the Galerkin cutoff is shared by every block
        object.__setattr__(self, "newton", replace(self.newton, M=self.M))
        object.__setattr__(self, "integrator", replace(self.integrator, M=self.M))

    def to_json(self) -> dict:
        d = asdict(self)
        return d

    @classmethod
    def from_json(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        # an emitted config.json carries a stamp that is not part of the config
        data = {k: v for k, v in data.items() if k != "_meta"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        if "newton" in data:
            data["newton"] = NewtonConfig(**{"M": data.get("M", 128), **data["newton"]})
        if "integrator" in data:
            data["integrator"] = IntegratorConfig(**{"M": data.get("M", 128), **data["integrator"]})
        return cls(**data)

    def digest(self) -> str:
        """Hash of every field that can change a result; ``out`` is left out."""
        d = self.to_json()
        d.pop("out")
        blob = json.dumps(d, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def load_config(path: str | os.PathLike | None = None, **overrides) -> RunConfig:
    """Config from a JSON file (or defaults), with non-``None`` overrides applied."""
    data = {}
    if path is not None:
        with open(path) as fh:
            data = json.load(fh)
    for k, v in overrides.items():
        if v is not None:
            data[k] = v
    if OUT_ENV in os.environ and overrides.get("out") is None:
        data["out"] = os.environ[OUT_ENV]
    return RunConfig.from_json(data)


def _dump(obj, path: Path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_artifacts(cfg: RunConfig, command: str, result: dict, series: list[dict] | None = None,
                    out: str | None = None) -> Path:
    """Write ``config.json``, ``result.json`` and optionally ``series.csv``."""
    d = Path(out if out is not None else cfg.out)
    d.mkdir(parents=True, exist_ok=True)
    stamp = {"version": __version__, "config_hash": cfg.digest(), "command": command}
    _dump({**cfg.to_json(), "_meta": stamp}, d / "config.json")
    _dump({**result, "_meta": stamp}, d / "result.json")
    if series:
        with open(d / "series.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            cols = list(series[0])
            w.writerow(cols)
            for row in series:
                w.writerow([_fmt(row[c]) for c in cols])
    return d


def _fmt(x):
    if isinstance(x, float):
        return f"{x:.17g}"
    return x
