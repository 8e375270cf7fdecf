"""Simulation configuration and its flat ``key = value`` file format."""
from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .lds import LdsMatrix, build_lds, import_matrix
from .simlink import LinkSetup

CHANNELS = ("awgn", "rayleigh_flat")
DETECTORS = ("ml", "pda")


class ConfigError(ValueError):
    pass


def resolve_matrix(spec: str, base_dir: Path | None = None) -> tuple[np.ndarray, str]:
    """Normalized spreading matrix and an identifier for ``lds:<q>``, ``identity:<n>`` or a file."""
    if spec.startswith("lds:"):
        q = int(spec[4:])
        C = build_lds(q)
        return C.normalized(), f"lds_q{q}_{C.L}x{C.K}"
    if spec.startswith("identity:"):
        n = int(spec[9:])
        if n < 1:
            raise ConfigError("identity size must be positive")
        return np.eye(n), f"identity_{n}"
    path = Path(spec)
    if base_dir is not None and not path.is_absolute():
        path = base_dir / path
    C: LdsMatrix = import_matrix(path)
    return C.normalized(), path.stem


@dataclass
class SimConfig:
    matrix: str = "lds:2"
    amplitudes: tuple[float, ...] | None = None
    modulation: str = "4qam"
    channel: str = "awgn"
    detector: str = "pda"
    snr_grid_db: tuple[float, ...] = (0.0, 4.0, 8.0)
    seed: int = 1
    max_trials: int = 100_000
    min_bit_errors: int = 200
    pda_max_iters: int = 10
    pda_damping: float = 0.0
    block_size: int = 256
    workers: int = 1
    matrix_id: str | None = None
    base_dir: Path | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.modulation.lower() != "4qam":
            raise ConfigError(f"modulation: only 4qam is supported, got {self.modulation!r}")
        if self.channel not in CHANNELS:
            raise ConfigError(f"channel: expected one of {CHANNELS}, got {self.channel!r}")
        if self.detector not in DETECTORS:
            raise ConfigError(f"detector: expected one of {DETECTORS}, got {self.detector!r}")
        if not self.snr_grid_db:
            raise ConfigError("snr_grid_db: must not be empty")
        for key in ("max_trials", "min_bit_errors", "pda_max_iters", "block_size", "workers"):
            if getattr(self, key) <= 0:
                raise ConfigError(f"{key}: must be positive")
        if not 0 <= self.pda_damping < 1:
            raise ConfigError("pda_damping: must lie in [0, 1)")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed: must be a 64-bit unsigned integer")
        if self.amplitudes is not None and any(a <= 0 for a in self.amplitudes):
            raise ConfigError("amplitudes: must be positive")

    def spreading(self) -> tuple[np.ndarray, str]:
        C, ident = resolve_matrix(self.matrix, self.base_dir)
        return C, self.matrix_id or ident

    def link_setup(self) -> LinkSetup:
        C, _ = self.spreading()
        K = C.shape[1]
        amps = np.ones(K) if self.amplitudes is None else np.asarray(self.amplitudes, dtype=float)
        if len(amps) != K:
            raise ConfigError(f"amplitudes: expected {K} values, got {len(amps)}")
        return LinkSetup(C, amps, self.channel, self.pda_max_iters, self.pda_damping)


_FLOAT_LIST = ("amplitudes", "snr_grid_db")
_INT = ("seed", "max_trials", "min_bit_errors", "pda_max_iters", "block_size", "workers")
_FLOAT = ("pda_damping",)


def parse_config(text: str, base_dir: Path | None = None) -> SimConfig:
    known = {f.name for f in fields(SimConfig)} - {"base_dir"}
    kw: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in kw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            if key in _FLOAT_LIST:
                kw[key] = tuple(float(v) for v in value.split(",") if v.strip())
            elif key in _INT:
                kw[key] = int(value)
            elif key in _FLOAT:
                kw[key] = float(value)
            else:
                kw[key] = value
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {value!r}") from None
    return SimConfig(base_dir=base_dir, **kw)


def load_config(path) -> SimConfig:
    path = Path(path)
    return parse_config(path.read_text(), base_dir=path.parent)


def dump_config(cfg: SimConfig) -> str:
    lines = []
    for f in fields(SimConfig):
        if f.name == "base_dir":
            continue
        v = getattr(cfg, f.name)
        if v is None:
            continue
        if isinstance(v, tuple):
            v = ", ".join(repr(float(x)) for x in v)
        lines.append(f"{f.name} = {v}")
    return "\n".join(lines) + "\n"
