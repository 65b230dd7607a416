"""
    Value types describing one selective decode-and-forward network.
"""

import dataclasses
import itertools
import math
import typing

from .errors import DomainError
from .fading import LinkStats


_SPLIT_SLACK = 1e-9


@dataclasses.dataclass(frozen=True)
class PowerSplit:
    """
    Fractions of the total power given to the source (``beta0``) and to each
    relay (``beta_r``). A fraction may be zero only for a node that a
    degenerate allocation leaves silent.
    """
    beta0: float
    beta_r: typing.Tuple[float, ...]


    def __post_init__(self):
        beta_r = tuple(float(b) for b in self.beta_r)
        object.__setattr__(self, "beta0", float(self.beta0))
        object.__setattr__(self, "beta_r", beta_r)
        for beta in self.fractions:
            if not beta >= 0 or not math.isfinite(beta):
                raise DomainError(f'power fractions must be non-negative, got {beta!r}')
        if sum(self.fractions) > 1.0 + _SPLIT_SLACK:
            raise DomainError(
                f'power fractions sum to {sum(self.fractions)!r}, more than 1'
            )


    @classmethod
    def equal(cls, relays: int) -> "PowerSplit":
        "Source and every relay get 1 / (relays + 1)."
        share = 1.0 / (relays + 1)
        return cls(share, (share,) * relays)


    @property
    def fractions(self) -> typing.Tuple[float, ...]:
        return (self.beta0,) + self.beta_r


    def to_dict(self) -> typing.Dict[str, typing.Any]:
        return {"beta0": self.beta0, "beta_r": list(self.beta_r)}


@dataclasses.dataclass(frozen=True)
class DecodeSet:
    "Relays (1-based) that decoded the source codeword."
    members: typing.FrozenSet[int] = frozenset()


    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(int(r) for r in self.members))
        if any(r < 1 for r in self.members):
            raise DomainError("relay indices start at 1")


    def __contains__(self, relay: int) -> bool:
        return relay in self.members


    def __len__(self) -> int:
        return len(self.members)


    def validate(self, relays: int) -> None:
        if any(r > relays for r in self.members):
            raise DomainError(
                f'decode set {sorted(self.members)} exceeds {relays} relays'
            )


    @classmethod
    def all_subsets(cls, relays: int) -> typing.Iterator["DecodeSet"]:
        indices = range(1, relays + 1)
        for size in range(relays + 1):
            for members in itertools.combinations(indices, size):
                yield cls(frozenset(members))


def _positive_int(name: str, value: typing.Any) -> int:
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise DomainError(f'{name} must be a positive integer, got {value!r}')
    return int(value)


@dataclasses.dataclass(frozen=True)
class NetworkConfig:
    """
    An L-relay network: source and relays carry ``n`` antennas, the
    destination ``n_d``. ``sr`` and ``rd`` hold one ``LinkStats`` per relay.
    """
    n: int
    n_d: int
    relays: int
    code_rate: float
    block_len: int
    gamma0: float
    sd: LinkStats
    sr: typing.Tuple[LinkStats, ...]
    rd: typing.Tuple[LinkStats, ...]
    n_a: int = 2
    noise_density: float = 1.0
    total_power: float = 1.0
    split: typing.Optional[PowerSplit] = None
    cw_slots: int = 2


    def __post_init__(self):
        for name in ("n", "n_d", "relays", "block_len", "n_a", "cw_slots"):
            object.__setattr__(self, name, _positive_int(name, getattr(self, name)))
        object.__setattr__(self, "sr", tuple(self.sr))
        object.__setattr__(self, "rd", tuple(self.rd))
        if not 0 < self.code_rate <= 1:
            raise DomainError(f'code_rate must lie in (0, 1], got {self.code_rate!r}')
        if not self.gamma0 >= 0 or not math.isfinite(self.gamma0):
            raise DomainError(f'gamma0 must be finite and non-negative, got {self.gamma0!r}')
        if not self.noise_density > 0:
            raise DomainError("noise_density must be positive")
        if not self.total_power > 0 or not math.isfinite(self.total_power):
            raise DomainError("total_power must be finite and positive")
        if len(self.sr) != self.relays or len(self.rd) != self.relays:
            raise DomainError(
                f'expected {self.relays} SR and RD links, got {len(self.sr)} '
                f'and {len(self.rd)}'
            )
        if self.split is None:
            object.__setattr__(self, "split", PowerSplit.equal(self.relays))
        elif len(self.split.beta_r) != self.relays:
            raise DomainError(
                f'power split has {len(self.split.beta_r)} relay fractions '
                f'for {self.relays} relays'
            )
        if not self.split.beta0 > 0:
            raise DomainError("the source power fraction must be positive")


    @property
    def power_split(self) -> PowerSplit:
        assert self.split is not None
        return self.split


    @property
    def snr_unit(self) -> float:
        "P / (N0 N R_C), the per-unit-fraction transmit SNR."
        return self.total_power / (self.noise_density * self.n * self.code_rate)


    @property
    def rho_source(self) -> float:
        return self.power_split.beta0 * self.snr_unit


    def rho_relay(self, r: int) -> float:
        return self.power_split.beta_r[r - 1] * self.snr_unit


    @property
    def is_perfect_static(self) -> bool:
        return all(
            link.is_perfect_static
            for link in (self.sd,) + self.sr + self.rd
        )


    def with_power(self, total_power: float) -> "NetworkConfig":
        return dataclasses.replace(self, total_power=total_power)


    def with_snr_db(self, snr_db: float) -> "NetworkConfig":
        "Total power such that P / N0 equals ``snr_db``."
        return self.with_power(self.noise_density * 10.0 ** (snr_db / 10.0))


    def with_split(self, split: PowerSplit) -> "NetworkConfig":
        return dataclasses.replace(self, split=split)


    def perfect_csi_static(self) -> "NetworkConfig":
        return dataclasses.replace(
            self,
            sd=self.sd.perfect_csi_static(),
            sr=tuple(link.perfect_csi_static() for link in self.sr),
            rd=tuple(link.perfect_csi_static() for link in self.rd)
        )
