"""Run configuration: flat key=value files with command-line overrides."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, fields
from typing import Optional


@dataclass
class RunConfig:
    n_sites: int = 16
    n_layers: int = 1
    coupling: float = 1.0
    sector: Optional[int] = 0  # momentum index m; None disables projection
    reference: str = "singlet"
    alpha: float = 0.1  # learning rate in units of 1/J
    k_max: int = 1000
    seed: int = 1
    eps_reg: float = 1e-6
    out: Optional[str] = None
    mode: str = "ground"

    def validate(self) -> None:
        if self.n_sites < 2:
            raise ValueError("n-sites must be >= 2")
        if self.n_sites % 2 and self.mode in ("ground", "excited"):
            raise ValueError(f"{self.reference} reference needs an even site count")
        if self.n_layers < 1:
            raise ValueError("layers must be >= 1")
        if self.coupling <= 0:
            raise ValueError("coupling must be positive")
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")
        if self.k_max < 1:
            raise ValueError("iters must be >= 1")
        if self.eps_reg <= 0:
            raise ValueError("eps-reg must be positive")
        if self.reference not in ("singlet", "triplet"):
            raise ValueError("reference must be singlet or triplet")


_PARSERS = {
    "n_sites": int,
    "n_layers": int,
    "coupling": float,
    "sector": lambda s: None if s.lower() in ("none", "") else int(s),
    "reference": str,
    "alpha": float,
    "k_max": int,
    "seed": int,
    "eps_reg": float,
    "out": str,
    "mode": str,
}

# config files accept the CLI flag spellings as well
_ALIASES = {"layers": "n_layers", "iters": "k_max"}


def parse_config_file(path: str) -> dict:
    """Read one ``key = value`` pair per line; '#' starts a comment."""
    values: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            key = _ALIASES.get(key, key)
            if key not in _PARSERS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _PARSERS[key](value)
    return values


def build_config(file_values: dict | None = None, overrides: dict | None = None) -> RunConfig:
    """Defaults, then config-file values, then explicit CLI overrides.

    Every key present in a source is applied, including explicit None
    (used to switch the momentum projection off); absent keys keep the
    previous layer's value.
    """
    cfg = RunConfig()
    for source in (file_values or {}, overrides or {}):
        for key, value in source.items():
            setattr(cfg, key, value)
    return cfg


def config_hash(cfg: RunConfig) -> str:
    """Stable short hash of the run-defining fields (output path excluded)."""
    canon = "\n".join(
        f"{f.name} = {getattr(cfg, f.name)}" for f in fields(RunConfig) if f.name != "out"
    )
    return hashlib.sha1(canon.encode()).hexdigest()[:12]
