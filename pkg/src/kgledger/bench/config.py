from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from ..gas import GasSchedule
from ..ledger import PRIVATE_MAX_TX_BYTES
from ..strategies import DEFAULT_BATCH_SIZE, STRATEGY_NAMES


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class BenchConfig:
    input_v1: Path | None = None
    input_v2: Path | None = None
    strategies: tuple[str, ...] = STRATEGY_NAMES
    batch_size: int = DEFAULT_BATCH_SIZE
    max_tx_payload_bytes: int = PRIVATE_MAX_TX_BYTES
    gas_overrides: dict = field(default_factory=dict)
    bucket_width: int = 100_000
    output_dir: Path = Path("bench-out")
    seed: int = 0
    # used when no input files are given
    synthetic_triples: int = 10_000
    anchor_per: str = "batch"
    parallel: bool = False

    def __post_init__(self) -> None:
        for name in ("input_v1", "input_v2", "output_dir"):
            v = getattr(self, name)
            if v is not None and not isinstance(v, Path):
                object.__setattr__(self, name, Path(v))
        if isinstance(self.strategies, str):
            object.__setattr__(self, "strategies", tuple(s for s in self.strategies.split(",") if s))
        else:
            object.__setattr__(self, "strategies", tuple(self.strategies))
        if self.bucket_width < 1:
            raise ConfigError("bucket_width must be at least 1")
        if not self.strategies:
            raise ConfigError("at least one strategy must be selected")
        unknown = [s for s in self.strategies if s not in STRATEGY_NAMES]
        if unknown:
            raise ConfigError(f"unknown strategies {unknown}; choose from {list(STRATEGY_NAMES)}")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be at least 1")
        if self.max_tx_payload_bytes < 1:
            raise ConfigError("max_tx_payload_bytes must be positive")
        if self.synthetic_triples < 0:
            raise ConfigError("synthetic_triples must be non-negative")
        if self.anchor_per not in ("batch", "op"):
            raise ConfigError("anchor_per must be 'batch' or 'op'")
        try:
            self.schedule
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    @property
    def schedule(self) -> GasSchedule:
        return GasSchedule.from_dict(self.gas_overrides)

    @classmethod
    def from_file(cls, path: str | Path) -> BenchConfig:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: dict) -> BenchConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def with_overrides(self, **overrides) -> BenchConfig:
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("input_v1", "input_v2", "output_dir"):
            d[k] = None if d[k] is None else str(d[k])
        d["strategies"] = list(self.strategies)
        return d
