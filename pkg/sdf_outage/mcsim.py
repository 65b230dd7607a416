"""
    Monte Carlo estimate of the per-block outage probability.

    Trials are cut into fixed-size chunks. Every chunk draws from its own
    Philox stream keyed by (seed, chunk index), and chunks reduce to integer
    event counts, so an estimate does not depend on how many processes ran.
"""

import concurrent.futures
import dataclasses
import functools
import logging
import math
import typing

import numpy as np

from . import fading
from . import outage
from .errors import DomainError
from .network import NetworkConfig


logger = logging.getLogger(__name__)

SimMode = typing.Literal["gamma-draw", "ar1-trajectory"]
SIM_MODES: typing.Tuple[str, ...] = ("gamma-draw", "ar1-trajectory")

CHUNK_TRIALS = 1 << 14
_MAX_SEED = 1 << 64


@dataclasses.dataclass(frozen=True)
class SimConfig:
    trials: int
    seed: int = 0
    mode: SimMode = "gamma-draw"
    workers: int = 1


    def __post_init__(self):
        if isinstance(self.trials, bool) or int(self.trials) != self.trials or self.trials < 1:
            raise DomainError(f'trials must be a positive integer, got {self.trials!r}')
        if isinstance(self.seed, bool) or int(self.seed) != self.seed or not 0 <= self.seed < _MAX_SEED:
            raise DomainError(f'seed must be an unsigned 64-bit integer, got {self.seed!r}')
        if self.mode not in SIM_MODES:
            raise DomainError(f'unknown simulation mode {self.mode!r}')
        if int(self.workers) != self.workers or self.workers < 1:
            raise DomainError(f'workers must be a positive integer, got {self.workers!r}')
        object.__setattr__(self, "trials", int(self.trials))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "workers", int(self.workers))


@dataclasses.dataclass(frozen=True)
class OutageEstimate:
    """
    ``p_hat`` is the fraction of outage codewords over ``trials`` blocks and
    ``stderr`` the standard error of the per-block outage fraction.
    """
    p_hat: float
    stderr: float
    trials: int


    def __post_init__(self):
        if not 0.0 <= self.p_hat <= 1.0:
            raise DomainError(f'p_hat must lie in [0, 1], got {self.p_hat!r}')
        if not self.stderr >= 0:
            raise DomainError(f'stderr must be non-negative, got {self.stderr!r}')


    @property
    def expected_events(self) -> float:
        return self.p_hat * self.trials


    def z_score(self, reference: float) -> float:
        "Distance of ``reference`` from the estimate in standard errors."
        diff = self.p_hat - reference
        if self.stderr == 0.0:
            return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
        return diff / self.stderr


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    "Independent stream for chunk ``chunk`` of a run seeded with ``seed``."
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=(chunk,)))
    )


def _m(rho: float, link: fading.LinkStats, cw_index: int, n_a: int) -> float:
    if rho == 0.0:
        return 0.0
    return fading.m_factor(rho, link, cw_index, n_a)


def _outage_events(
    cfg: NetworkConfig,
    snr_sd: np.ndarray,
    snr_sr: np.ndarray,
    snr_rd: np.ndarray
) -> np.ndarray:
    # Decode is strict (> gamma0); outage includes equality (<= gamma0).
    decoded = snr_sr > cfg.gamma0
    combined = snr_sd + np.sum(np.where(decoded, snr_rd, 0.0), axis=0)
    return combined <= cfg.gamma0


def _gamma_draw_counts(
    cfg: NetworkConfig,
    rng: np.random.Generator,
    size: int
) -> np.ndarray:
    a = outage.sr_shape(cfg)
    s = outage.direct_shape(cfg)
    counts = np.zeros(size, dtype=np.int64)
    for cw_index in range(1, cfg.block_len + 1):
        scales = outage.link_scales(cfg, cw_index)
        snr_sd = rng.gamma(s, scales.sd, size)
        snr_sr = np.stack([rng.gamma(a, scale, size) for scale in scales.sr])
        snr_rd = np.stack([rng.gamma(s, scale, size) for scale in scales.rd])
        counts += _outage_events(cfg, snr_sd, snr_sr, snr_rd)
    return counts


class _Trajectory:
    """
    Channel matrices of one link for a chunk of blocks.

    The receiver estimates the channel once, on the first codeword of the
    block, and keeps that estimate while the true channel evolves. The
    decorrelation of later codewords enters through the M factor.
    """

    def __init__(
        self,
        link: fading.LinkStats,
        rows: int,
        cols: int,
        rng: np.random.Generator,
        size: int
    ):
        self.link = link
        self.rows = rows
        self.cols = cols
        self.channel = fading.draw_channel(rows, cols, link.avg_gain, rng, size=size)
        if link.est_err_var > 0:
            error = fading.draw_channel(rows, cols, link.est_err_var, rng, size=size)
        else:
            error = np.zeros_like(self.channel)
        self.estimate = self.channel + error


    def advance(self, rng: np.random.Generator) -> None:
        innovation = fading.draw_channel(
            self.rows, self.cols, self.link.avg_gain, rng, size=len(self.channel)
        )
        self.channel = fading.ar1_step(self.channel, self.link.corr, innovation)


    def estimate_gain(self) -> np.ndarray:
        return fading.frobenius_gain(self.estimate)


def _trajectory_counts(
    cfg: NetworkConfig,
    rng: np.random.Generator,
    size: int
) -> np.ndarray:
    sd = _Trajectory(cfg.sd, cfg.n_d, cfg.n, rng, size)
    sr = [_Trajectory(link, cfg.n, cfg.n, rng, size) for link in cfg.sr]
    rd = [_Trajectory(link, cfg.n_d, cfg.n, rng, size) for link in cfg.rd]
    counts = np.zeros(size, dtype=np.int64)
    for cw_index in range(1, cfg.block_len + 1):
        if cw_index > 1:
            for trajectory in [sd] + sr + rd:
                trajectory.advance(rng)
        rho_s = cfg.rho_source
        snr_sd = _m(rho_s, cfg.sd, cw_index, cfg.n_a) * sd.estimate_gain()
        snr_sr = np.stack([
            _m(rho_s, t.link, cw_index, cfg.n_a) * t.estimate_gain() for t in sr
        ])
        snr_rd = np.stack([
            _m(cfg.rho_relay(r), t.link, cw_index, cfg.n_a) * t.estimate_gain()
            for r, t in enumerate(rd, start=1)
        ])
        counts += _outage_events(cfg, snr_sd, snr_sr, snr_rd)
    return counts


def _simulate_chunk(
    cfg: NetworkConfig,
    mode: str,
    seed: int,
    chunk: typing.Tuple[int, int]
) -> typing.Tuple[int, int]:
    index, size = chunk
    rng = chunk_rng(seed, index)
    if mode == "gamma-draw":
        counts = _gamma_draw_counts(cfg, rng, size)
    else:
        counts = _trajectory_counts(cfg, rng, size)
    return int(counts.sum()), int(np.sum(counts * counts))


def _chunks(trials: int) -> typing.List[typing.Tuple[int, int]]:
    return [
        (index, min(CHUNK_TRIALS, trials - start))
        for index, start in enumerate(range(0, trials, CHUNK_TRIALS))
    ]


def _estimate(events: int, squares: int, trials: int, block_len: int) -> OutageEstimate:
    p_hat = events / (trials * block_len)
    if trials < 2:
        stderr = math.sqrt(p_hat * (1.0 - p_hat) / (trials * block_len))
    else:
        # Sample variance of the per-block fraction k / block_len.
        mean = events / trials
        variance = max(squares - events * mean, 0.0) / (trials - 1) / block_len ** 2
        stderr = math.sqrt(variance / trials)
    return OutageEstimate(min(p_hat, 1.0), stderr, trials)


def simulate_outage(cfg: NetworkConfig, sim: SimConfig) -> OutageEstimate:
    """
    Estimate ``outage.per_block_outage`` by drawing ``sim.trials`` blocks of
    ``cfg.block_len`` codewords each.
    """
    task = functools.partial(_simulate_chunk, cfg, sim.mode, sim.seed)
    chunks = _chunks(sim.trials)
    if sim.workers <= 1 or len(chunks) == 1:
        results = [task(chunk) for chunk in chunks]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=sim.workers) as pool:
            results = list(pool.map(task, chunks))
    events = sum(r[0] for r in results)
    squares = sum(r[1] for r in results)
    estimate = _estimate(events, squares, sim.trials, cfg.block_len)
    logger.info(
        "%s: %d blocks, %d outage codewords, p_hat=%r (stderr %r)",
        sim.mode, sim.trials, events, estimate.p_hat, estimate.stderr
    )
    return estimate


def simulate_curve(
    cfg: NetworkConfig,
    snr_db: typing.Sequence[float],
    sim: SimConfig
) -> typing.List[OutageEstimate]:
    "simulate_outage at each P/N0 (dB) in ``snr_db``, all with ``sim.seed``."
    return [simulate_outage(cfg.with_snr_db(point), sim) for point in snr_db]
