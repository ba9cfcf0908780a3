"""Scenario configuration and its flat key-value file format."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path

import yaml


class ConfigError(ValueError):
    """Invalid scenario configuration. ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class SystemConfig:
    """
    All scenario dimensions and scalars.

    Defaults are the desk-scale setup (32 transmit antennas); the
    full-size scenario only changes ``n_tx`` to 96.

    Attributes
    ----------
    n_tx : int
        Transmit antennas.
    n_rx : int
        Receive (UE) antennas; also the number of streams. Must be even.
    n_rf : int
        Available RF chains, ``1 <= n_rf <= n_tx``.
    n_clusters : int
        Multipath clusters of the communication channel.
    n_targets : int
        Radar targets.
    rho : float
        Communication weight of the joint rate, in [0, 1].
    p_max_com, p_max_rad : float
        Linear power budgets of the two operations.
    snr_db : float
        Operating SNR; the receiver noise floor is ``10**(-snr_db/10)``.
    spacing_ratio : float
        Antenna spacing over wavelength.
    """

    n_tx: int = 32
    n_rx: int = 4
    n_rf: int = 4
    n_clusters: int = 6
    n_targets: int = 3
    rho: float = 0.5
    p_max_com: float = 1.0
    p_max_rad: float = 1.0
    snr_db: float = 0.0
    spacing_ratio: float = 0.5

    def __post_init__(self):
        for name in ("n_tx", "n_rx", "n_rf", "n_clusters", "n_targets"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(name, f"expected an integer, got {value!r}")
            if value < 1:
                raise ConfigError(name, f"must be >= 1, got {value}")
        if self.n_rf > self.n_tx:
            raise ConfigError("n_rf", f"must not exceed n_tx={self.n_tx}, got {self.n_rf}")
        if self.n_rx % 2:
            raise ConfigError("n_rx", f"must be even, got {self.n_rx}")
        if self.n_targets > self.n_tx:
            raise ConfigError("n_targets", f"must not exceed n_tx={self.n_tx}")
        for name in ("rho", "p_max_com", "p_max_rad", "snr_db", "spacing_ratio"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(name, f"expected a number, got {value!r}")
            object.__setattr__(self, name, float(value))
        if not 0.0 <= self.rho <= 1.0:
            raise ConfigError("rho", f"must lie in [0, 1], got {self.rho}")
        for name in ("p_max_com", "p_max_rad", "spacing_ratio"):
            if not getattr(self, name) > 0:
                raise ConfigError(name, f"must be > 0, got {getattr(self, name)}")

    @property
    def n_streams(self) -> int:
        return self.n_rx

    @property
    def noise_floor(self) -> float:
        return 10.0 ** (-self.snr_db / 10.0)

    def replace(self, **changes) -> "SystemConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


REFERENCE_SCALE = {"n_tx": 96, "n_rx": 4, "n_rf": 4, "n_clusters": 6, "n_targets": 3}


def config_from_mapping(data: dict | None) -> SystemConfig:
    """Build a config from a flat mapping, rejecting unknown keys."""
    data = dict(data or {})
    known = {f.name for f in fields(SystemConfig)}
    for key in data:
        if key not in known:
            raise ConfigError(str(key), "unknown configuration key")
    return SystemConfig(**data)


def parse_config(path: str | Path) -> SystemConfig:
    """
    Read a flat ``key: value`` file into a validated :class:`SystemConfig`.

    Omitted keys take the dataclass defaults; an empty file yields the
    desk-scale defaults.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"config file not found: {path}")
    data = yaml.safe_load(path.read_text())
    if data is not None and not isinstance(data, dict):
        raise ConfigError("<root>", "expected a flat key-value mapping")
    for key, value in (data or {}).items():
        if isinstance(value, (dict, list)):
            raise ConfigError(str(key), "nested values are not supported")
    return config_from_mapping(data)
