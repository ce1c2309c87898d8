"""Search bounds for the bounded intersection searches."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class SearchConfig:
    k_min: float = -50.0
    k_max: float = 50.0
    k_step: float = 0.5
    t_scan: float = 20.0      # hard cap on the curve parameter
    residual_tol: float = 1e-8
    max_bisect: int = 80
    t_samples: int = 400      # scan points per branch
    rho_max: float = 80.0     # scan curves out to this distance from their first point

    def k_grid(self) -> np.ndarray:
        n = int(round((self.k_max - self.k_min) / self.k_step))
        return self.k_min + self.k_step * np.arange(n + 1)

    def updated(self, **kw) -> "SearchConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw)

    @classmethod
    def from_mapping(cls, items: dict) -> "SearchConfig":
        types = {f.name: f.type for f in fields(cls)}
        kw = {}
        for key, raw in items.items():
            if key not in types:
                raise ValueError(f"unknown search option {key!r}")
            kw[key] = int(raw) if types[key] == "int" else float(raw)
        return cls(**kw)

    @classmethod
    def from_file(cls, path) -> "SearchConfig":
        return cls.from_mapping(read_key_values(path))


def read_key_values(path) -> dict:
    """Parse ``key=value`` lines; blank lines and ``#`` comments are skipped."""
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{n}: expected key=value")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out
