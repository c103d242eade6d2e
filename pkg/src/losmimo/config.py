"""Scenario configuration: flat `key = value` text files.

Keys mirror the simulation-parameter table; `#` starts a comment. Parsing
then re-serializing is idempotent.
"""

from dataclasses import dataclass, fields

from .errors import ConfigurationError

_SCHEMES = ("MR", "ZF")
_LINKS = ("DL", "UL")


@dataclass
class ScenarioConfig:
    cells: int = 7
    antennas_per_cell: int = 4096
    users_per_cell: int = 18
    carrier_ghz: float = 60.0
    bandwidth_hz: float = 50e6
    bs_noise_figure_db: float = 9.0
    mobile_noise_figure_db: float = 9.0
    bs_power_w: float = 2.0
    mobile_power_w: float = 0.2
    bs_array_height_m: float = 30.0
    user_height_m: float = 1.5
    cell_radius_m: float = 200.0
    min_bs_distance_m: float = 10.0
    drops: int = 50
    seed: int = 1
    schemes: str = "MR,ZF"
    links: str = "DL,UL"
    single_cell_series: bool = True

    def scheme_list(self) -> list[str]:
        return [s.strip() for s in self.schemes.split(",") if s.strip()]

    def link_list(self) -> list[str]:
        return [s.strip() for s in self.links.split(",") if s.strip()]

    def validate(self) -> None:
        positive = [
            "antennas_per_cell", "users_per_cell", "carrier_ghz", "bandwidth_hz",
            "bs_power_w", "mobile_power_w", "cell_radius_m", "drops",
        ]
        for name in positive:
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"{name} must be positive, got {getattr(self, name)}")
        if self.cells not in (1, 7):
            raise ConfigurationError(f"cells must be 1 or 7, got {self.cells}")
        if self.min_bs_distance_m < 0 or self.min_bs_distance_m >= self.cell_radius_m:
            raise ConfigurationError("min_bs_distance_m must be in [0, cell_radius_m)")
        for s in self.scheme_list():
            if s not in _SCHEMES:
                raise ConfigurationError(f"unknown scheme {s!r}")
        for s in self.link_list():
            if s not in _LINKS:
                raise ConfigurationError(f"unknown link {s!r}")
        if not self.scheme_list() or not self.link_list():
            raise ConfigurationError("at least one scheme and one link required")
        if "ZF" in self.scheme_list() and self.users_per_cell > self.antennas_per_cell:
            raise ConfigurationError("ZF requires users_per_cell <= antennas_per_cell")


_FIELD_TYPES = {f.name: f.type for f in fields(ScenarioConfig)}


def _parse_value(name: str, raw: str):
    kind = _FIELD_TYPES[name]
    if kind in (bool, "bool"):
        if raw.lower() in ("true", "1", "yes"):
            return True
        if raw.lower() in ("false", "0", "no"):
            return False
        raise ConfigurationError(f"bad boolean for {name}: {raw!r}")
    if kind in (int, "int"):
        return int(raw)
    if kind in (float, "float"):
        return float(raw)
    return raw


def parse_config(text: str) -> ScenarioConfig:
    cfg = ScenarioConfig()
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected key = value, got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in _FIELD_TYPES:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        try:
            setattr(cfg, key, _parse_value(key, raw))
        except ValueError as exc:
            raise ConfigurationError(f"line {lineno}: bad value for {key}: {raw!r}") from exc
    cfg.validate()
    return cfg


def load_config(path) -> ScenarioConfig:
    with open(path) as fh:
        return parse_config(fh.read())


def serialize_config(cfg: ScenarioConfig) -> str:
    lines = []
    for f in fields(ScenarioConfig):
        value = getattr(cfg, f.name)
        if isinstance(value, bool):
            value = "true" if value else "false"
        elif isinstance(value, float):
            value = repr(value)
        lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"
