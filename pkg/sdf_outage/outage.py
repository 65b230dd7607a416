"""
    Closed-form per-block average outage probability of the multi-relay
    selective decode-and-forward network, its high-SNR asymptotic and the
    achievable diversity order.
"""

import concurrent.futures
import dataclasses
import functools
import logging
import math
import typing

import numpy as np

from . import fading
from . import gammasum
from . import power
from . import specfun
from .errors import DomainError
from .network import DecodeSet, NetworkConfig
from .specfun import DEFAULT_ACCURACY, Accuracy


logger = logging.getLogger(__name__)

OutageMode = typing.Literal["total-probability", "paper-literal"]
AsymptoticMode = typing.Literal["paper-literal", "leading-term"]

OUTAGE_MODES: typing.Tuple[str, ...] = ("total-probability", "paper-literal")
ASYMPTOTIC_MODES: typing.Tuple[str, ...] = ("paper-literal", "leading-term")


@dataclasses.dataclass(frozen=True)
class LinkScales:
    """
    Gamma scales M(k) * (avg_gain + est_err_var) of every link for one
    codeword index. A zero scale marks a link that carries no signal.
    """
    sd: float
    sr: typing.Tuple[float, ...]
    rd: typing.Tuple[float, ...]


def sr_shape(cfg: NetworkConfig) -> int:
    "Gamma shape of a source-relay SNR (square N x N channel)."
    return cfg.n * cfg.n


def direct_shape(cfg: NetworkConfig) -> int:
    "Gamma shape of a source- or relay-destination SNR."
    return cfg.n * cfg.n_d


def _check_cw_index(cfg: NetworkConfig, cw_index: int) -> None:
    if int(cw_index) != cw_index or not 1 <= cw_index <= cfg.block_len:
        raise DomainError(
            f'codeword index must lie in 1..{cfg.block_len}, got {cw_index!r}'
        )


def _check_relay(cfg: NetworkConfig, r: int) -> None:
    if int(r) != r or not 1 <= r <= cfg.relays:
        raise DomainError(f'relay index must lie in 1..{cfg.relays}, got {r!r}')


def _scale(rho: float, link: fading.LinkStats, cw_index: int, n_a: int) -> float:
    if rho == 0.0:
        return 0.0
    return fading.m_factor(rho, link, cw_index, n_a) * fading.effective_gain(link)


def link_scales(cfg: NetworkConfig, cw_index: int) -> LinkScales:
    _check_cw_index(cfg, cw_index)
    rho_s = cfg.rho_source
    return LinkScales(
        sd=_scale(rho_s, cfg.sd, cw_index, cfg.n_a),
        sr=tuple(_scale(rho_s, link, cw_index, cfg.n_a) for link in cfg.sr),
        rd=tuple(
            _scale(cfg.rho_relay(r), link, cw_index, cfg.n_a)
            for r, link in enumerate(cfg.rd, start=1)
        )
    )


def _gamma_cdf(shape: int, scale: float, gamma0: float, acc: Accuracy) -> float:
    if gamma0 == 0.0:
        return 0.0
    if scale == 0.0:
        return 1.0
    return specfun.lower_incomplete_gamma_regularized(shape, gamma0 / scale, acc)


def _gamma_sf(shape: int, scale: float, gamma0: float, acc: Accuracy) -> float:
    if gamma0 == 0.0:
        return 1.0
    if scale == 0.0:
        return 0.0
    return specfun.upper_incomplete_gamma_regularized(shape, gamma0 / scale, acc)


def relay_outage_prob(
    cfg: NetworkConfig,
    r: int,
    cw_index: int,
    acc: Accuracy = DEFAULT_ACCURACY
) -> float:
    "Probability that relay ``r`` fails to decode codeword ``cw_index``."
    _check_relay(cfg, r)
    _check_cw_index(cfg, cw_index)
    scale = _scale(cfg.rho_source, cfg.sr[r - 1], cw_index, cfg.n_a)
    return _gamma_cdf(sr_shape(cfg), scale, cfg.gamma0, acc)


def _combined_from_scales(
    cfg: NetworkConfig,
    scales: LinkScales,
    psi: DecodeSet,
    acc: Accuracy
) -> float:
    if cfg.gamma0 == 0.0:
        return 0.0
    shape = direct_shape(cfg)
    components = [(shape, scales.sd)] + [
        (shape, scales.rd[r - 1]) for r in sorted(psi.members)
    ]
    # A silent branch adds nothing to the combined SNR.
    components = [c for c in components if c[1] > 0.0]
    if not components:
        return 1.0
    return gammasum.sum_cdf(
        gammasum.GammaMixture(tuple(components)), cfg.gamma0, acc
    )


def combined_outage_prob(
    cfg: NetworkConfig,
    psi: DecodeSet,
    cw_index: int,
    acc: Accuracy = DEFAULT_ACCURACY
) -> float:
    """
    Probability that the direct link plus the relays in ``psi`` fall at or
    below the threshold after combining.
    """
    psi.validate(cfg.relays)
    return _combined_from_scales(cfg, link_scales(cfg, cw_index), psi, acc)


def _block_outage(
    cfg: NetworkConfig,
    scales: LinkScales,
    mode: str,
    acc: Accuracy
) -> float:
    a = sr_shape(cfg)
    fail = [_gamma_cdf(a, s, cfg.gamma0, acc) for s in scales.sr]
    success = [_gamma_sf(a, s, cfg.gamma0, acc) for s in scales.sr]
    total = 0.0
    for psi in DecodeSet.all_subsets(cfg.relays):
        weight = 1.0
        for r in range(1, cfg.relays + 1):
            if r in psi:
                if mode == "total-probability":
                    weight *= success[r - 1]
            else:
                weight *= fail[r - 1]
        if weight == 0.0:
            continue
        total += weight * _combined_from_scales(cfg, scales, psi, acc)
    return total


def per_block_outage(
    cfg: NetworkConfig,
    mode: OutageMode = "total-probability",
    acc: Accuracy = DEFAULT_ACCURACY
) -> float:
    """
    Outage probability averaged over the codewords of a block.

    ``total-probability`` weighs every decode set by the probability that
    exactly its relays decode. ``paper-literal`` keeps only the failure
    factors of the relays outside the set and drops the success factors.
    """
    if mode not in OUTAGE_MODES:
        raise DomainError(f'unknown outage mode {mode!r}')
    cache: typing.Dict[LinkScales, float] = {}
    total = 0.0
    for cw_index in range(1, cfg.block_len + 1):
        scales = link_scales(cfg, cw_index)
        if scales not in cache:
            cache[scales] = _block_outage(cfg, scales, mode, acc)
        total += cache[scales]
    value = total / cfg.block_len
    logger.debug(
        "per_block_outage(%s) at P=%r: %r (%d distinct codeword states)",
        mode, cfg.total_power, value, len(cache)
    )
    if mode == "total-probability":
        return min(max(value, 0.0), 1.0)
    return value


def _check_asymptotic(cfg: NetworkConfig) -> None:
    if cfg.relays != 2:
        raise DomainError("the asymptotic expression is derived for two relays")
    if not cfg.is_perfect_static:
        raise DomainError(
            "the asymptotic expression assumes perfect CSI and static nodes"
        )
    if not all(beta > 0 for beta in cfg.power_split.fractions):
        raise DomainError("the asymptotic expression needs every node transmitting")


def _leading_term(cfg: NetworkConfig) -> float:
    a = sr_shape(cfg)
    s = direct_shape(cfg)
    log_gamma0 = math.log(cfg.gamma0)
    log_terms = []
    for cw_index in range(1, cfg.block_len + 1):
        scales = link_scales(cfg, cw_index)
        log_fail = [
            a * (log_gamma0 - math.log(scale)) - specfun.ln_gamma(a + 1)
            for scale in scales.sr
        ]
        for psi in DecodeSet.all_subsets(cfg.relays):
            branch = [scales.sd] + [scales.rd[r - 1] for r in sorted(psi.members)]
            shape = s * len(branch)
            log_term = (
                sum(log_fail[r - 1] for r in range(1, cfg.relays + 1) if r not in psi)
                + shape * log_gamma0 - specfun.ln_gamma(shape + 1)
                - s * sum(math.log(scale) for scale in branch)
            )
            log_terms.append(log_term)
    return float(np.exp(np.logaddexp.reduce(log_terms))) / cfg.block_len


def asymptotic_outage(
    cfg: NetworkConfig,
    mode: AsymptoticMode = "leading-term"
) -> float:
    """
    High-SNR approximation of the per-block outage for two relays with
    perfect CSI and static nodes.

    ``paper-literal`` evaluates the three-term K1, K2, K3 expression at the
    configured power split. ``leading-term`` keeps the lowest-order term of
    every CDF in the total-probability expansion and drops the decode
    success factors.
    """
    if mode not in ASYMPTOTIC_MODES:
        raise DomainError(f'unknown asymptotic mode {mode!r}')
    _check_asymptotic(cfg)
    if cfg.gamma0 == 0.0:
        return 0.0
    if mode == "paper-literal":
        consts = power.k_constants(cfg, "literal")
        return power.objective(cfg.power_split, consts)
    return _leading_term(cfg)


def diversity_order(n: int, n_d: int, l: int) -> int:
    "N N_D + N L min(N, N_D) for static nodes with perfect CSI."
    for name, value in (("n", n), ("n_d", n_d), ("l", l)):
        if int(value) != value or value < 1:
            raise DomainError(f'{name} must be a positive integer, got {value!r}')
    return n * n_d + n * l * min(n, n_d)


def _outage_at(
    cfg: NetworkConfig,
    snr_db: float,
    mode: str,
    acc: Accuracy
) -> float:
    return per_block_outage(cfg.with_snr_db(snr_db), mode, acc)  # type: ignore


def outage_curve(
    cfg: NetworkConfig,
    snr_db: typing.Sequence[float],
    mode: OutageMode = "total-probability",
    acc: Accuracy = DEFAULT_ACCURACY,
    workers: int = 1
) -> typing.List[float]:
    "per_block_outage at each P/N0 (dB) in ``snr_db``, in order."
    evaluate = functools.partial(_outage_at, cfg, mode=mode, acc=acc)
    if workers <= 1:
        return [evaluate(point) for point in snr_db]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate, snr_db))
