"""
    Time-selective Rayleigh channel with mobile nodes and imperfect CSI.

    Node mobility sets the codeword-to-codeword correlation through Jakes'
    model; the channel then evolves as a first-order autoregressive process
    and the receiver's estimation error caps the effective SNR.
"""

import dataclasses
import logging
import math
import typing

import numpy as np

from . import specfun
from .errors import DomainError, ShapeError


logger = logging.getLogger(__name__)

SPEED_OF_LIGHT = 2.99792458e8
METERS_PER_SECOND_PER_MPH = 0.44704


@dataclasses.dataclass(frozen=True)
class MobilityParams:
    carrier_hz: float
    speed_mps: float
    symbol_rate: float
    wave_speed_mps: float = SPEED_OF_LIGHT


    def __post_init__(self):
        if not self.carrier_hz > 0:
            raise DomainError("carrier_hz must be positive")
        if not self.symbol_rate > 0:
            raise DomainError("symbol_rate must be positive")
        if not self.speed_mps >= 0 or not math.isfinite(self.speed_mps):
            raise DomainError("speed_mps must be finite and non-negative")
        if not self.wave_speed_mps > 0:
            raise DomainError("wave_speed_mps must be positive")


    @property
    def doppler_argument(self) -> float:
        "2 pi f_c v_p / (R_S C_p), the argument handed to J0."
        return (
            2.0 * math.pi * self.carrier_hz * self.speed_mps
            / (self.symbol_rate * self.wave_speed_mps)
        )


@dataclasses.dataclass(frozen=True)
class LinkStats:
    """
    Second-order statistics of one fading link.

    ``avg_gain`` is the per-entry channel variance, ``est_err_var`` the
    variance of the channel estimation error, ``tv_err_var`` the variance
    of the time-variation error and ``corr`` the AR(1) coefficient.
    """
    avg_gain: float
    est_err_var: float = 0.0
    tv_err_var: float = 0.0
    corr: float = 1.0


    def __post_init__(self):
        if not self.avg_gain > 0 or not math.isfinite(self.avg_gain):
            raise DomainError("avg_gain must be finite and positive")
        if not self.est_err_var >= 0:
            raise DomainError("est_err_var must be non-negative")
        if not self.tv_err_var >= 0:
            raise DomainError("tv_err_var must be non-negative")
        if not abs(self.corr) <= 1.0:
            raise DomainError("corr must lie in [-1, 1]")


    @property
    def is_perfect_static(self) -> bool:
        return (
            self.est_err_var == 0.0
            and self.tv_err_var == 0.0
            and self.corr == 1.0
        )


    def perfect_csi_static(self) -> "LinkStats":
        return dataclasses.replace(
            self, est_err_var=0.0, tv_err_var=0.0, corr=1.0
        )


def correlation_coefficient(m: MobilityParams) -> float:
    "Jakes correlation between consecutive codewords."
    return specfun.bessel_j0(m.doppler_argument)


def effective_gain(link: LinkStats) -> float:
    "Average gain seen through the channel estimate."
    return link.avg_gain + link.est_err_var


def m_factor(
    rho: float,
    link: LinkStats,
    cw_index: int,
    n_a: int
) -> float:
    """
    Effective SNR scaling of codeword ``cw_index`` within a block.

    The estimation-error variance weighs the part of the channel still
    correlated with the estimate; the time-variation variance weighs the
    part that has decorrelated since the estimate was taken.
    """
    if not rho > 0:
        raise DomainError(f'rho must be positive, got {rho!r}')
    if int(cw_index) != cw_index or cw_index < 1:
        raise DomainError(f'cw_index must be a positive integer, got {cw_index!r}')
    if int(n_a) != n_a or n_a < 1:
        raise DomainError(f'n_a must be a positive integer, got {n_a!r}')
    decay = link.corr ** (2 * (int(cw_index) - 1))
    return rho * decay / (
        1.0
        + rho * decay * n_a * link.est_err_var
        + rho * (1.0 - decay) * n_a * link.tv_err_var
    )


def ar1_step(
    prev: np.ndarray,
    corr: float,
    innovation: np.ndarray
) -> np.ndarray:
    "H(k) = corr H(k-1) + sqrt(1 - corr^2) Q(k), entrywise."
    prev = np.asarray(prev)
    innovation = np.asarray(innovation)
    if prev.shape != innovation.shape:
        raise ShapeError(
            f'prev has shape {prev.shape} but innovation has shape '
            f'{innovation.shape}'
        )
    if not abs(corr) <= 1.0:
        raise DomainError("corr must lie in [-1, 1]")
    return corr * prev + math.sqrt(1.0 - corr * corr) * innovation


def draw_channel(
    rows: int,
    cols: int,
    avg_gain: float,
    rng: np.random.Generator,
    size: typing.Optional[int] = None
) -> np.ndarray:
    """
    Circularly-symmetric complex Gaussian matrix with per-entry variance
    ``avg_gain``. With ``size`` the result stacks that many independent
    matrices along a leading axis.
    """
    if rows < 1 or cols < 1:
        raise DomainError("rows and cols must be positive")
    if not avg_gain > 0:
        raise DomainError("avg_gain must be positive")
    shape = (rows, cols) if size is None else (int(size), rows, cols)
    std = math.sqrt(avg_gain / 2.0)
    return std * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def frobenius_gain(h: np.ndarray) -> np.ndarray:
    "Squared Frobenius norm over the last two axes."
    h = np.asarray(h)
    return np.sum(h.real ** 2 + h.imag ** 2, axis=(-2, -1))
