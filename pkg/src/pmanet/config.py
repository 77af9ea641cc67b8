"""Scenario description, protocol presets and the flat ``key=value`` format.

Every field is addressable by a dotted key (``radio.range``,
``protocol.olsr.hello_interval``); config files and CLI flags use the same
names.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Mapping, Optional, Tuple

from .radio import RadioModel

PROTOCOLS = ("dsdv", "fsr", "olsr")
PRESETS = ("original", "modified")


class ConfigError(ValueError):
    """Invalid scenario or sweep configuration."""


@dataclass
class DsdvConfig:
    periodic_interval: float = 15.0
    trigger_update_time: float = 15.0
    settling_count: int = 6
    npdu_capacity: int = 100
    loss_threshold: int = 3


@dataclass
class FsrConfig:
    inner_interval: float = 5.0
    outer_interval: float = 20.0
    scope_radius: int = 2
    loss_threshold: int = 3


@dataclass
class OlsrConfig:
    hello_interval: float = 2.0
    tc_interval: float = 5.0
    hello_loss_threshold: int = 3
    trigger_rate_limit: float = 0.5
    topology_hold_factor: float = 3.0


PRESET_VALUES: Dict[str, Dict[str, Dict[str, Any]]] = {
    "dsdv": {
        "original": {"periodic_interval": 15.0, "trigger_update_time": 15.0, "settling_count": 6},
        "modified": {"periodic_interval": 15.0, "trigger_update_time": 30.0, "settling_count": 7},
    },
    "fsr": {
        "original": {"inner_interval": 5.0, "outer_interval": 20.0},
        "modified": {"inner_interval": 1.0, "outer_interval": 5.0},
    },
    "olsr": {
        "original": {"hello_interval": 2.0, "tc_interval": 5.0},
        "modified": {"hello_interval": 1.0, "tc_interval": 3.0},
    },
}

_PROTOCOL_CLASSES = {"dsdv": DsdvConfig, "fsr": FsrConfig, "olsr": OlsrConfig}


def preset(protocol: str, name: str, **overrides: Any):
    """Protocol configuration for a named preset, with optional overrides."""
    if protocol not in PRESET_VALUES:
        raise ConfigError(f"unknown protocol {protocol!r}")
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}")
    values = dict(PRESET_VALUES[protocol][name])
    values.update(overrides)
    try:
        return _PROTOCOL_CLASSES[protocol](**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


@dataclass
class MobilityConfig:
    model: str = "random_waypoint"  # or "static"
    speed: float = 20.0
    pause: float = 2.0


@dataclass
class TrafficConfig:
    num_flows: int = 20
    rate: float = 4.0
    packet_size: int = 512
    stagger: float = 10.0


@dataclass
class ScenarioConfig:
    protocol: str = "dsdv"
    preset: str = "original"
    nodes: int = 50
    area_x: float = 1000.0
    area_y: float = 1000.0
    sim_time: float = 900.0
    seed: int = 1
    ttl: int = 32
    connected_placement: bool = False
    radio: RadioModel = field(default_factory=RadioModel)
    mobility: MobilityConfig = field(default_factory=MobilityConfig)
    traffic: TrafficConfig = field(default_factory=TrafficConfig)
    protocol_overrides: Dict[str, Any] = field(default_factory=dict)

    def protocol_config(self):
        return preset(self.protocol, self.preset, **self.protocol_overrides.get(self.protocol, {}))

    def validate(self) -> "ScenarioConfig":
        if self.protocol not in PROTOCOLS:
            raise ConfigError(f"protocol must be one of {PROTOCOLS}, got {self.protocol!r}")
        if self.preset not in PRESETS:
            raise ConfigError(f"preset must be one of {PRESETS}, got {self.preset!r}")
        if self.nodes < 1:
            raise ConfigError("nodes must be >= 1")
        if not (self.area_x > 0 and self.area_y > 0):
            raise ConfigError("area dimensions must be > 0")
        if self.sim_time < 0:
            raise ConfigError("sim_time must be >= 0")
        if self.ttl < 1:
            raise ConfigError("ttl must be >= 1")
        try:
            self.radio.validate()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.mobility.model not in ("random_waypoint", "static"):
            raise ConfigError(f"unknown mobility model {self.mobility.model!r}")
        if self.mobility.model == "random_waypoint" and not self.mobility.speed > 0:
            raise ConfigError("mobility.speed must be > 0 for random_waypoint")
        if self.mobility.pause < 0:
            raise ConfigError("mobility.pause must be >= 0")
        t = self.traffic
        if t.num_flows < 0:
            raise ConfigError("traffic.num_flows must be >= 0")
        if t.num_flows > 0:
            if not t.rate > 0:
                raise ConfigError("traffic.rate must be > 0")
            if t.packet_size < 1:
                raise ConfigError("traffic.packet_size must be >= 1")
            if t.num_flows > self.nodes * (self.nodes - 1):
                raise ConfigError(
                    f"traffic.num_flows={t.num_flows} exceeds the {self.nodes * (self.nodes - 1)} ordered node pairs"
                )
        if t.stagger < 0:
            raise ConfigError("traffic.stagger must be >= 0")
        for proto, values in self.protocol_overrides.items():
            if proto not in PROTOCOLS:
                raise ConfigError(f"override for unknown protocol {proto!r}")
            preset(proto, self.preset, **values)
        _check_protocol(self.protocol_config())
        return self

    def replace(self, **changes: Any) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def with_values(self, values: Mapping[str, Any]) -> "ScenarioConfig":
        """Copy with dotted-key assignments applied (values may be strings)."""
        cfg = from_mapping(as_mapping(self))
        for key, raw in values.items():
            set_value(cfg, key, raw)
        return cfg


def _check_protocol(pc) -> None:
    for f in dataclasses.fields(pc):
        v = getattr(pc, f.name)
        if not v > 0:
            raise ConfigError(f"{f.name} must be > 0, got {v}")
    if isinstance(pc, FsrConfig):
        if not pc.inner_interval <= pc.outer_interval:
            raise ConfigError("fsr inner_interval must not exceed outer_interval")


# dotted-key plumbing

_SECTIONS = {"radio": RadioModel, "mobility": MobilityConfig, "traffic": TrafficConfig}
_TOP_ALIASES = {"area.x": "area_x", "area.y": "area_y"}


def _coerce(value: Any, kind) -> Any:
    if not isinstance(value, str):
        return kind(value) if kind in (int, float) and not isinstance(value, bool) else value
    text = value.strip()
    if kind is bool:
        low = text.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"not a boolean: {value!r}")
    if kind is int:
        try:
            return int(text)
        except ValueError:
            f = float(text)
            if f != int(f):
                raise ConfigError(f"not an integer: {value!r}") from None
            return int(f)
    if kind is float:
        return float(text)
    return text


def _field_type(cls, name: str):
    hints = {"int": int, "float": float, "str": str, "bool": bool}
    for f in dataclasses.fields(cls):
        if f.name == name:
            t = f.type if isinstance(f.type, str) else getattr(f.type, "__name__", str(f.type))
            return hints.get(t, str)
    raise KeyError(name)


def known_keys() -> Tuple[str, ...]:
    keys = [f.name for f in dataclasses.fields(ScenarioConfig) if f.name not in _SECTIONS and f.name != "protocol_overrides"]
    keys = [k for k in keys if k not in ("area_x", "area_y")] + list(_TOP_ALIASES)
    for section, cls in _SECTIONS.items():
        keys += [f"{section}.{f.name}" for f in dataclasses.fields(cls)]
    for proto, cls in _PROTOCOL_CLASSES.items():
        keys += [f"protocol.{proto}.{f.name}" for f in dataclasses.fields(cls)]
    return tuple(keys)


def set_value(cfg: ScenarioConfig, key: str, raw: Any) -> None:
    key = key.strip()
    try:
        if key in _TOP_ALIASES:
            key = _TOP_ALIASES[key]
        parts = key.split(".")
        if len(parts) == 1:
            if key in _SECTIONS or key == "protocol_overrides":
                raise KeyError(key)
            setattr(cfg, key, _coerce(raw, _field_type(ScenarioConfig, key)))
        elif len(parts) == 2 and parts[0] in _SECTIONS:
            section = getattr(cfg, parts[0])
            setattr(section, parts[1], _coerce(raw, _field_type(_SECTIONS[parts[0]], parts[1])))
        elif len(parts) == 3 and parts[0] == "protocol" and parts[1] in _PROTOCOL_CLASSES:
            kind = _field_type(_PROTOCOL_CLASSES[parts[1]], parts[2])
            cfg.protocol_overrides.setdefault(parts[1], {})[parts[2]] = _coerce(raw, kind)
        else:
            raise KeyError(key)
    except KeyError:
        raise ConfigError(f"unknown configuration key {key!r}") from None
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {exc}") from None


def as_mapping(cfg: ScenarioConfig) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for f in dataclasses.fields(ScenarioConfig):
        if f.name in _SECTIONS or f.name == "protocol_overrides":
            continue
        out[f.name] = getattr(cfg, f.name)
    for section in _SECTIONS:
        for k, v in dataclasses.asdict(getattr(cfg, section)).items():
            out[f"{section}.{k}"] = v
    for proto, values in sorted(cfg.protocol_overrides.items()):
        for k, v in sorted(values.items()):
            out[f"protocol.{proto}.{k}"] = v
    return out


def from_mapping(values: Mapping[str, Any]) -> ScenarioConfig:
    cfg = ScenarioConfig()
    for key, raw in values.items():
        set_value(cfg, key, raw)
    return cfg


def parse_config_text(text: str) -> Dict[str, str]:
    """Parse flat ``key=value`` lines; ``#`` starts a comment."""
    values: Dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def load_config(
    path: Optional[str],
    overrides: Optional[Mapping[str, Any]] = None,
    defaults: Optional[Mapping[str, Any]] = None,
) -> ScenarioConfig:
    """Defaults, then the file, then ``overrides``; the result is validated."""
    values: Dict[str, Any] = dict(defaults or {})
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                values.update(parse_config_text(fh.read()))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
    if overrides:
        values.update(overrides)
    return from_mapping(values).validate()


def dump_config(cfg: ScenarioConfig) -> str:
    return "".join(f"{k}={v}\n" for k, v in as_mapping(cfg).items())


def iter_keys(prefix: str) -> Iterable[str]:
    return (k for k in known_keys() if k.startswith(prefix))
