"""
    JSON experiment documents.

    A document has the sections ``network``, ``links``, ``mobility``,
    ``sweep`` and ``sim``. Parsing resolves every link's correlation, so the
    output of ``ExperimentConfig.to_dict`` re-parses to an equal object.
"""

import contextlib
import dataclasses
import json
import logging
import math
import re
import typing

from . import fading
from .errors import ConfigError, DomainError
from .mcsim import SimConfig
from .network import NetworkConfig, PowerSplit


logger = logging.getLogger(__name__)

SPEED_UNITS: typing.Dict[str, float] = {
    "m/s": 1.0,
    "mi/h": fading.METERS_PER_SECOND_PER_MPH,
    "mph": fading.METERS_PER_SECOND_PER_MPH,
    "km/h": 1.0 / 3.6,
}

SPEED_RE = re.compile(
    r"^\s*(?P<value>[-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?)\s*"
    r"(?P<unit>m/s|mi/h|mph|km/h)\s*$"
)

SECTIONS = ("network", "links", "mobility", "sweep", "sim")

_MISSING = object()

PathItem = typing.Union[str, int]


def parse_speed(value: typing.Any) -> float:
    "Speed in m/s from a number (m/s) or a string such as ``\"32 mi/h\"``."
    if isinstance(value, bool):
        raise DomainError(f'invalid speed {value!r}')
    if isinstance(value, (int, float)):
        speed = float(value)
    elif isinstance(value, str):
        match = SPEED_RE.match(value)
        if not match:
            raise DomainError(
                f'invalid speed {value!r}; expected a number followed by one '
                f'of {", ".join(SPEED_UNITS)}'
            )
        speed = float(match.group("value")) * SPEED_UNITS[match.group("unit")]
    else:
        raise DomainError(f'invalid speed {value!r}')
    if not speed >= 0 or not math.isfinite(speed):
        raise DomainError(f'speed must be finite and non-negative, got {value!r}')
    return speed


def _locate(source: typing.Optional[str], path: typing.Sequence[PathItem]) -> typing.Optional[int]:
    "Line of the deepest key of ``path`` found in ``source``."
    if not source:
        return None
    pos = -1
    for key in path:
        if isinstance(key, int):
            continue
        match = re.compile(rf'"{re.escape(key)}"\s*:').search(source, max(pos, 0))
        if not match:
            break
        pos = match.start()
    if pos < 0:
        return None
    return source.count("\n", 0, pos) + 1


class _Section:
    "A JSON object together with its location in the source document."

    def __init__(
        self,
        data: typing.Any,
        path: typing.Tuple[PathItem, ...],
        source: typing.Optional[str]
    ):
        self.path = path
        self.source = source
        if not isinstance(data, dict):
            raise self.error("must be an object")
        self.data: typing.Dict[str, typing.Any] = data


    def error(self, message: str, key: typing.Optional[str] = None) -> ConfigError:
        path = self.path + ((key,) if key is not None else ())
        name = ".".join(str(p) for p in path) or "document"
        return ConfigError(f'{name}: {message}', _locate(self.source, path))


    def check_keys(self, allowed: typing.Iterable[str]) -> None:
        allowed = set(allowed)
        for key in self.data:
            if key not in allowed:
                raise self.error("unknown key", key)


    def __contains__(self, key: str) -> bool:
        return key in self.data


    def raw(self, key: str, default: typing.Any = _MISSING) -> typing.Any:
        if key not in self.data:
            if default is _MISSING:
                raise self.error(f'missing required key "{key}"')
            return default
        return self.data[key]


    def number(self, key: str, default: typing.Any = _MISSING) -> float:
        value = self.raw(key, default)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise self.error(f'expected a number, got {value!r}', key)
        return float(value)


    def integer(self, key: str, default: typing.Any = _MISSING) -> int:
        value = self.raw(key, default)
        if isinstance(value, bool) or not isinstance(value, int):
            raise self.error(f'expected an integer, got {value!r}', key)
        return value


    def string(self, key: str, default: typing.Any = _MISSING) -> str:
        value = self.raw(key, default)
        if not isinstance(value, str):
            raise self.error(f'expected a string, got {value!r}', key)
        return value


    def section(self, key: str, optional: bool = False) -> typing.Optional["_Section"]:
        if optional and key not in self.data:
            return None
        return _Section(self.raw(key), self.path + (key,), self.source)


    @contextlib.contextmanager
    def domain(self, key: typing.Optional[str] = None) -> typing.Iterator[None]:
        "Report a DomainError raised inside the block at this section."
        try:
            yield
        except DomainError as e:
            raise self.error(str(e), key) from e


@dataclasses.dataclass(frozen=True)
class SweepSpec:
    "P/N0 grid in dB from ``snr_db_start`` to ``snr_db_stop`` inclusive."
    snr_db_start: float
    snr_db_stop: float
    snr_db_step: float


    def __post_init__(self):
        for name in ("snr_db_start", "snr_db_stop", "snr_db_step"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f'{name} must be finite')
        if not self.snr_db_step > 0:
            raise DomainError("snr_db_step must be positive")
        if self.snr_db_start > self.snr_db_stop:
            raise DomainError("snr_db_start must not exceed snr_db_stop")


    def points(self) -> typing.List[float]:
        count = math.floor(
            (self.snr_db_stop - self.snr_db_start) / self.snr_db_step + 1e-9
        ) + 1
        return [self.snr_db_start + i * self.snr_db_step for i in range(count)]


    def to_dict(self) -> typing.Dict[str, float]:
        return {
            "snr_db_start": self.snr_db_start,
            "snr_db_stop": self.snr_db_stop,
            "snr_db_step": self.snr_db_step,
        }


def _link_to_dict(link: fading.LinkStats) -> typing.Dict[str, float]:
    return {
        "avg_gain": link.avg_gain,
        "est_err_var": link.est_err_var,
        "tv_err_var": link.tv_err_var,
        "corr": link.corr,
    }


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    network: NetworkConfig
    mobility: typing.Optional[fading.MobilityParams] = None
    sweep: typing.Optional[SweepSpec] = None
    sim: typing.Optional[SimConfig] = None


    @classmethod
    def from_dict(
        cls,
        data: typing.Any,
        source: typing.Optional[str] = None
    ) -> "ExperimentConfig":
        """
        Validate a parsed document. ``source`` is the text it was parsed
        from and only serves to put line numbers on errors.
        """
        root = _Section(data, (), source)
        root.check_keys(SECTIONS)
        mobility = _parse_mobility(root.section("mobility", optional=True))
        network = _parse_network(
            typing.cast(_Section, root.section("network")),
            typing.cast(_Section, root.section("links")),
            mobility
        )
        sweep_section = root.section("sweep", optional=True)
        sweep = None
        if sweep_section is not None:
            sweep_section.check_keys(("snr_db_start", "snr_db_stop", "snr_db_step"))
            with sweep_section.domain():
                sweep = SweepSpec(
                    sweep_section.number("snr_db_start"),
                    sweep_section.number("snr_db_stop"),
                    sweep_section.number("snr_db_step")
                )
        sim_section = root.section("sim", optional=True)
        sim = None
        if sim_section is not None:
            sim_section.check_keys(("trials", "seed", "mode", "workers"))
            with sim_section.domain():
                sim = SimConfig(
                    trials=sim_section.integer("trials"),
                    seed=sim_section.integer("seed", 0),
                    mode=sim_section.string("mode", "gamma-draw"),  # type: ignore
                    workers=sim_section.integer("workers", 1)
                )
        return cls(network, mobility, sweep, sim)


    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f'invalid JSON: {e.msg}', e.lineno) from e
        return cls.from_dict(data, text)


    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        try:
            with open(path, mode="r", encoding="utf-8") as config_fd:
                text = config_fd.read()
        except OSError as e:
            raise ConfigError(f'cannot read {path}: {e.strerror}') from e
        logger.debug("Loading experiment from %s", path)
        return cls.from_text(text)


    def to_dict(self) -> typing.Dict[str, typing.Any]:
        net = self.network
        network: typing.Dict[str, typing.Any] = {
            "n": net.n,
            "n_d": net.n_d,
            "relays": net.relays,
            "code_rate": net.code_rate,
            "block_len": net.block_len,
            "gamma0": net.gamma0,
            "n_a": net.n_a,
            "noise_density": net.noise_density,
            "total_power": net.total_power,
            "cw_slots": net.cw_slots,
            "split": net.power_split.to_dict(),
        }
        document: typing.Dict[str, typing.Any] = {
            "network": network,
            "links": {
                "sd": _link_to_dict(net.sd),
                "sr": [_link_to_dict(link) for link in net.sr],
                "rd": [_link_to_dict(link) for link in net.rd],
            },
        }
        if self.mobility is not None:
            document["mobility"] = {
                "carrier_hz": self.mobility.carrier_hz,
                "symbol_rate": self.mobility.symbol_rate,
                "speed": self.mobility.speed_mps,
                "wave_speed": self.mobility.wave_speed_mps,
            }
        if self.sweep is not None:
            document["sweep"] = self.sweep.to_dict()
        if self.sim is not None:
            document["sim"] = {
                "trials": self.sim.trials,
                "seed": self.sim.seed,
                "mode": self.sim.mode,
                "workers": self.sim.workers,
            }
        return document


    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _parse_mobility(section: typing.Optional[_Section]) -> typing.Optional[fading.MobilityParams]:
    if section is None:
        return None
    section.check_keys(("carrier_hz", "symbol_rate", "speed", "wave_speed"))
    with section.domain("speed"):
        speed = parse_speed(section.raw("speed", 0.0))
    with section.domain():
        return fading.MobilityParams(
            carrier_hz=section.number("carrier_hz"),
            speed_mps=speed,
            symbol_rate=section.number("symbol_rate"),
            wave_speed_mps=section.number("wave_speed", fading.SPEED_OF_LIGHT)
        )


def _parse_link(
    section: _Section,
    mobility: typing.Optional[fading.MobilityParams]
) -> fading.LinkStats:
    section.check_keys(("avg_gain", "est_err_var", "tv_err_var", "corr", "speed"))
    if "corr" in section and "speed" in section:
        raise section.error('give either "corr" or "speed", not both')
    if "corr" in section:
        corr = section.number("corr")
    elif "speed" in section:
        if mobility is None:
            raise section.error('"speed" needs a mobility section', "speed")
        with section.domain("speed"):
            speed = parse_speed(section.raw("speed"))
        corr = fading.correlation_coefficient(
            dataclasses.replace(mobility, speed_mps=speed)
        )
    elif mobility is not None:
        corr = fading.correlation_coefficient(mobility)
    else:
        corr = 1.0
    with section.domain():
        return fading.LinkStats(
            avg_gain=section.number("avg_gain"),
            est_err_var=section.number("est_err_var", 0.0),
            tv_err_var=section.number("tv_err_var", 0.0),
            corr=corr
        )


def _parse_relay_links(
    links: _Section,
    key: str,
    relays: int,
    mobility: typing.Optional[fading.MobilityParams]
) -> typing.Tuple[fading.LinkStats, ...]:
    value = links.raw(key)
    if isinstance(value, dict):
        link = _parse_link(_Section(value, links.path + (key,), links.source), mobility)
        return (link,) * relays
    if not isinstance(value, list):
        raise links.error("expected an object or a list of objects", key)
    if len(value) != relays:
        raise links.error(f'expected {relays} entries, got {len(value)}', key)
    return tuple(
        _parse_link(_Section(item, links.path + (key, i), links.source), mobility)
        for i, item in enumerate(value)
    )


def _parse_split(section: _Section) -> PowerSplit:
    section.check_keys(("beta0", "beta_r"))
    beta_r = section.raw("beta_r")
    if not isinstance(beta_r, list) or any(
        isinstance(b, bool) or not isinstance(b, (int, float)) for b in beta_r
    ):
        raise section.error("expected a list of numbers", "beta_r")
    with section.domain():
        return PowerSplit(section.number("beta0"), tuple(beta_r))


def _parse_network(
    section: _Section,
    links: _Section,
    mobility: typing.Optional[fading.MobilityParams]
) -> NetworkConfig:
    section.check_keys((
        "n", "n_d", "relays", "code_rate", "block_len", "gamma0", "rate_target",
        "n_a", "noise_density", "total_power", "cw_slots", "split"
    ))
    links.check_keys(("sd", "sr", "rd"))
    if ("gamma0" in section) == ("rate_target" in section):
        raise section.error('give exactly one of "gamma0" and "rate_target"')
    if "gamma0" in section:
        gamma0 = section.number("gamma0")
    else:
        gamma0 = 2.0 ** (2.0 * section.number("rate_target")) - 1.0
    relays = section.integer("relays")
    if relays < 1:
        raise section.error("must be at least 1", "relays")
    split_section = section.section("split", optional=True)
    split = _parse_split(split_section) if split_section is not None else None
    sd = _parse_link(typing.cast(_Section, links.section("sd")), mobility)
    sr = _parse_relay_links(links, "sr", relays, mobility)
    rd = _parse_relay_links(links, "rd", relays, mobility)
    with section.domain():
        return NetworkConfig(
            n=section.integer("n"),
            n_d=section.integer("n_d"),
            relays=relays,
            code_rate=section.number("code_rate"),
            block_len=section.integer("block_len"),
            gamma0=gamma0,
            sd=sd,
            sr=sr,
            rd=rd,
            n_a=section.integer("n_a", 2),
            noise_density=section.number("noise_density", 1.0),
            total_power=section.number("total_power", 1.0),
            split=split,
            cw_slots=section.integer("cw_slots", 2)
        )
