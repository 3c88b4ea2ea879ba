"""Sweep configuration and its flat key-value (TOML) file format.

Example::

    sizes = [21, 34, 55]
    V = 2.0
    h_grid = [1e-9]           # or h_min / h_max / h_points (log-spaced)
    probe = "single"          # or "half_filled"
    observables = ["qfi", "ofi_cdw", "ofi_h2"]
    phase_samples = 200
    seed = 20240611
    # phi_fixed = 0.0
    # fillings = [10, 28, 44] # half_filled only, one per size
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from ..model import is_fibonacci
from ..probes import default_filling

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

QUANTITIES = ("qfi", "ofi_cdw", "ofi_h2")
PROBE_KINDS = ("single", "half_filled")
DEFAULT_H_GRID = tuple(np.logspace(-10, 1, 40))


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"config key {key!r}: {message}")
        self.key = key


@dataclass(frozen=True)
class SweepConfig:
    sizes: tuple[int, ...]
    V: float = 2.0
    h_grid: tuple[float, ...] = DEFAULT_H_GRID
    probe_kind: str = "single"
    fillings: tuple[int, ...] | None = None
    observables: tuple[str, ...] = QUANTITIES
    phase_samples: int | None = None
    seed: int = 0
    phi_fixed: float | None = None

    def __post_init__(self):
        sizes = tuple(int(L) for L in self.sizes)
        if not sizes:
            raise ConfigError("sizes", "must list at least one size")
        bad = [L for L in sizes if L < 2 or not is_fibonacci(L)]
        if bad:
            raise ConfigError("sizes", f"all sizes must be Fibonacci numbers >= 2, got {bad}")
        object.__setattr__(self, "sizes", sizes)

        h_grid = tuple(float(h) for h in self.h_grid)
        if not h_grid or any(h <= 0 for h in h_grid) or any(b <= a for a, b in zip(h_grid, h_grid[1:])):
            raise ConfigError("h_grid", "must be strictly positive and strictly ascending")
        object.__setattr__(self, "h_grid", h_grid)

        if self.probe_kind not in PROBE_KINDS:
            raise ConfigError("probe", f"must be one of {PROBE_KINDS}, got {self.probe_kind!r}")

        obs = tuple(self.observables)
        unknown = [q for q in obs if q not in QUANTITIES]
        if not obs or unknown or len(set(obs)) != len(obs):
            raise ConfigError("observables", f"must be distinct entries of {QUANTITIES}, got {list(obs)}")
        object.__setattr__(self, "observables", obs)

        if self.fillings is not None:
            if self.probe_kind != "half_filled":
                raise ConfigError("fillings", "only meaningful for probe = 'half_filled'")
            fills = tuple(int(n) for n in self.fillings)
            if len(fills) != len(sizes):
                raise ConfigError("fillings", f"need one filling per size ({len(sizes)}), got {len(fills)}")
            for L, n in zip(sizes, fills):
                if not 1 <= n <= L:
                    raise ConfigError("fillings", f"n_f={n} out of range for L={L}")
            object.__setattr__(self, "fillings", fills)

        phi_fixed = self.phi_fixed
        if phi_fixed is None and self.probe_kind == "half_filled":
            phi_fixed = 0.0
        if phi_fixed is not None:
            phi_fixed = float(phi_fixed)
            if not 0.0 <= phi_fixed < 1.0:
                raise ConfigError("phi_fixed", f"must lie in [0, 1), got {phi_fixed}")
        object.__setattr__(self, "phi_fixed", phi_fixed)

        samples = self.phase_samples
        if samples is None:
            samples = 1 if phi_fixed is not None else 200
        if int(samples) != samples or samples < 1:
            raise ConfigError("phase_samples", f"must be a positive integer, got {samples!r}")
        object.__setattr__(self, "phase_samples", int(samples))

        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ConfigError("seed", f"must be an integer in [0, 2^64), got {self.seed!r}")
        object.__setattr__(self, "seed", int(self.seed))

    def filling(self, L: int) -> int | None:
        """Particle number for size ``L``; None for the single-particle probe."""
        if self.probe_kind == "single":
            return None
        if self.fillings is not None:
            return self.fillings[self.sizes.index(L)]
        return default_filling(L)

    @classmethod
    def from_mapping(cls, raw: Mapping) -> "SweepConfig":
        allowed = {
            "sizes", "V", "h_grid", "h_min", "h_max", "h_points", "probe", "fillings",
            "observables", "phase_samples", "seed", "phi_fixed",
        }
        for key in raw:
            if key not in allowed:
                raise ConfigError(key, "unknown key")
        if "sizes" not in raw:
            raise ConfigError("sizes", "required")
        kw: dict = {}

        def typed(key, kind, convert=None):
            value = raw[key]
            if not isinstance(value, kind) or isinstance(value, bool):
                raise ConfigError(key, f"expected {getattr(kind, '__name__', kind)}, got {value!r}")
            return convert(value) if convert else value

        def int_list(key):
            value = typed(key, list)
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
                raise ConfigError(key, f"expected a list of integers, got {value!r}")
            return tuple(value)

        kw["sizes"] = int_list("sizes")
        if "V" in raw:
            kw["V"] = typed("V", (int, float), float)
        if "h_grid" in raw:
            if any(k in raw for k in ("h_min", "h_max", "h_points")):
                raise ConfigError("h_grid", "give either h_grid or h_min/h_max/h_points, not both")
            grid = typed("h_grid", list)
            if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in grid):
                raise ConfigError("h_grid", f"expected a list of numbers, got {grid!r}")
            kw["h_grid"] = tuple(float(x) for x in grid)
        elif any(k in raw for k in ("h_min", "h_max", "h_points")):
            for k in ("h_min", "h_max", "h_points"):
                if k not in raw:
                    raise ConfigError(k, "required together with the other h_* keys")
            lo = typed("h_min", (int, float), float)
            hi = typed("h_max", (int, float), float)
            n = typed("h_points", int)
            if lo <= 0 or hi <= lo or n < 1:
                raise ConfigError("h_min", "need 0 < h_min < h_max and h_points >= 1")
            kw["h_grid"] = tuple(np.logspace(np.log10(lo), np.log10(hi), n))
        if "probe" in raw:
            kw["probe_kind"] = typed("probe", str)
        if "fillings" in raw:
            kw["fillings"] = int_list("fillings")
        if "observables" in raw:
            obs = typed("observables", list)
            if not all(isinstance(x, str) for x in obs):
                raise ConfigError("observables", f"expected a list of strings, got {obs!r}")
            kw["observables"] = tuple(obs)
        if "phase_samples" in raw:
            kw["phase_samples"] = typed("phase_samples", int)
        if "seed" in raw:
            kw["seed"] = typed("seed", int)
        if "phi_fixed" in raw:
            kw["phi_fixed"] = typed("phi_fixed", (int, float), float)
        return cls(**kw)

    @classmethod
    def from_text(cls, text: str) -> "SweepConfig":
        try:
            raw = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError("<file>", f"not valid key-value text: {exc}") from exc
        return cls.from_mapping(raw)

    @classmethod
    def from_file(cls, path: str | Path) -> "SweepConfig":
        return cls.from_text(Path(path).read_text())

    def to_text(self) -> str:
        def num(x: float) -> str:
            return repr(float(x))

        lines = [
            f"sizes = [{', '.join(str(L) for L in self.sizes)}]",
            f"V = {num(self.V)}",
            f"h_grid = [{', '.join(num(h) for h in self.h_grid)}]",
            f'probe = "{self.probe_kind}"',
            f"observables = [{', '.join(repr(q).replace(chr(39), chr(34)) for q in self.observables)}]",
            f"phase_samples = {self.phase_samples}",
            f"seed = {self.seed}",
        ]
        if self.fillings is not None:
            lines.append(f"fillings = [{', '.join(str(n) for n in self.fillings)}]")
        if self.phi_fixed is not None:
            lines.append(f"phi_fixed = {num(self.phi_fixed)}")
        return "\n".join(lines) + "\n"
