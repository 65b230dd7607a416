"""
    Source/relay power allocation for the two-relay network.

    The high-SNR outage is a posynomial in the power fractions. Minimising it
    over the simplex is convex in log coordinates, so the solver works with
    softmax logits and refines the best point of a dense simplex lattice.
"""

import dataclasses
import logging
import math
import typing

import numpy as np
from scipy import optimize as sp_optimize

from . import specfun
from .errors import DomainError, OptimizationError
from .network import NetworkConfig, PowerSplit


logger = logging.getLogger(__name__)

Variant = typing.Literal["literal", "symmetrized"]
VARIANTS: typing.Tuple[str, ...] = ("literal", "symmetrized")

# (log coefficient, (power of beta0, power of beta1, power of beta2))
Term = typing.Tuple[float, typing.Tuple[int, int, int]]


def _log_or_minus_inf(name: str, value: float) -> float:
    if not value >= 0 or not math.isfinite(value):
        raise DomainError(f'{name} must be finite and non-negative, got {value!r}')
    return math.log(value) if value > 0 else -math.inf


@dataclasses.dataclass(frozen=True)
class ObjectiveConstants:
    """
    Coefficients (kept as logarithms) and integer exponents of the
    three-term outage objective.

    A coefficient of zero, i.e. ``log_k = -inf``, drops its term.
    """
    log_k1: float
    log_k2: float
    log_k3: float
    exponents: typing.Tuple[int, int, int, int, int, int]
    variant: Variant = "literal"


    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise DomainError(f'unknown objective variant {self.variant!r}')
        exponents = tuple(self.exponents)
        if len(exponents) != 6:
            raise DomainError(f'expected 6 exponents, got {len(exponents)}')
        for e in exponents:
            if isinstance(e, bool) or int(e) != e or e < 0:
                raise DomainError(f'exponents must be non-negative integers, got {e!r}')
        object.__setattr__(self, "exponents", tuple(int(e) for e in exponents))
        for name in ("log_k1", "log_k2", "log_k3"):
            value = float(getattr(self, name))
            if math.isnan(value) or value == math.inf:
                raise DomainError(f'{name} must be finite or -inf, got {value!r}')
            object.__setattr__(self, name, value)


    @classmethod
    def from_values(
        cls,
        k1: float,
        k2: float,
        k3: float,
        exponents: typing.Sequence[int],
        variant: Variant = "literal"
    ) -> "ObjectiveConstants":
        return cls(
            _log_or_minus_inf("k1", k1),
            _log_or_minus_inf("k2", k2),
            _log_or_minus_inf("k3", k3),
            tuple(exponents),  # type: ignore
            variant
        )


    @property
    def k1(self) -> float:
        return math.exp(self.log_k1)


    @property
    def k2(self) -> float:
        return math.exp(self.log_k2)


    @property
    def k3(self) -> float:
        return math.exp(self.log_k3)


    def scaled(self, factor: float) -> "ObjectiveConstants":
        "Every coefficient multiplied by ``factor``."
        if not factor > 0 or not math.isfinite(factor):
            raise DomainError("scale factor must be finite and positive")
        shift = math.log(factor)
        return dataclasses.replace(
            self,
            log_k1=self.log_k1 + shift,
            log_k2=self.log_k2 + shift,
            log_k3=self.log_k3 + shift
        )


    def terms(self) -> typing.List[Term]:
        "Monomials with a non-zero coefficient."
        e1, e2, e3, e4, e5, e6 = self.exponents
        if self.variant == "literal":
            candidates: typing.List[Term] = [
                (self.log_k1, (e1, 0, 0)),
                (self.log_k2, (e2 + e3, 0, e4)),
                (self.log_k3, (e5, e6, 0)),
            ]
        else:
            candidates = [
                (self.log_k1, (e1, 0, 0)),
                (self.log_k2, (e2 + e3, e4, 0)),
                (self.log_k2, (e2 + e3, 0, e4)),
                (self.log_k3, (e5, e6, e6)),
            ]
        return [term for term in candidates if term[0] > -math.inf]


def _check_two_relays(cfg: NetworkConfig) -> None:
    if cfg.relays != 2:
        raise DomainError("power allocation is defined for two relays")
    if not cfg.is_perfect_static:
        raise DomainError("power allocation assumes perfect CSI and static nodes")
    if cfg.sr[0].avg_gain != cfg.sr[1].avg_gain or cfg.rd[0].avg_gain != cfg.rd[1].avg_gain:
        raise DomainError("power allocation assumes statistically identical relays")
    if not cfg.gamma0 > 0:
        raise DomainError("power allocation needs a positive threshold")


def _literal_constants(cfg: NetworkConfig) -> ObjectiveConstants:
    a = cfg.n * cfg.n
    s = cfg.n * cfg.n_d
    lg = specfun.ln_gamma
    log_gamma0 = math.log(cfg.gamma0)
    log_nrc = math.log(cfg.n * cfg.code_rate)
    log_noise = math.log(cfg.noise_density / cfg.total_power)
    log_sr = math.log(cfg.sr[0].avg_gain)
    log_sd = math.log(cfg.sd.avg_gain)
    log_rd = math.log(cfg.rd[0].avg_gain)

    log_k1 = (
        (2 * a + s) * (log_gamma0 + log_nrc + log_noise)
        - 2 * a * log_sr - s * log_sd
        - 2 * lg(a + 1) - math.log(s)
    )
    log_k2 = (
        math.log(2.0) + (a + s) * log_gamma0
        + (a + 4 * s) * (log_nrc + log_noise)
        - a * log_sr - s * log_sd - 2 * s * log_rd
        - lg(a + 1) - lg(2 * s)
    )
    log_k3 = (
        (3 * s - 1) * log_gamma0
        - 3 * s * math.log(4.0 * cfg.total_power ** 2)
        - lg(3 * s)
    )
    exponents = (2 * a + s, 2 * a + s, a + 2 * s, 2 * s, 3 * s, 3 * s)
    return ObjectiveConstants(log_k1, log_k2, log_k3, exponents, "literal")


def _symmetrized_constants(cfg: NetworkConfig) -> ObjectiveConstants:
    a = cfg.n * cfg.n
    s = cfg.n * cfg.n_d
    lg = specfun.ln_gamma
    # log of gamma0 / (P / (N0 N R_C)), the threshold in units of the SNR scale
    log_u = math.log(cfg.gamma0) - math.log(cfg.snr_unit)
    log_sr = math.log(cfg.sr[0].avg_gain)
    log_sd = math.log(cfg.sd.avg_gain)
    log_rd = math.log(cfg.rd[0].avg_gain)

    log_k1 = (
        (2 * a + s) * log_u - 2 * a * log_sr - s * log_sd
        - 2 * lg(a + 1) - lg(s + 1)
    )
    log_k2 = (
        (a + 2 * s) * log_u - a * log_sr - s * log_sd - s * log_rd
        - lg(a + 1) - lg(2 * s + 1)
    )
    log_k3 = 3 * s * log_u - s * log_sd - 2 * s * log_rd - lg(3 * s + 1)
    exponents = (2 * a + s, a, s, s, s, s)
    return ObjectiveConstants(log_k1, log_k2, log_k3, exponents, "symmetrized")


def k_constants(cfg: NetworkConfig, variant: Variant = "literal") -> ObjectiveConstants:
    """
    Objective constants of a two-relay, perfect-CSI, static network with
    identical relays.

    ``literal`` keeps the three closed-form terms K1, K2, K3. ``symmetrized``
    carries the lowest-order coefficient of every decode set, so that its
    objective equals ``outage.asymptotic_outage(cfg, "leading-term")`` at
    any split.
    """
    if variant not in VARIANTS:
        raise DomainError(f'unknown objective variant {variant!r}')
    _check_two_relays(cfg)
    if variant == "literal":
        return _literal_constants(cfg)
    return _symmetrized_constants(cfg)


def _fractions(split: PowerSplit) -> typing.Tuple[float, float, float]:
    fractions = split.fractions
    if len(fractions) != 3:
        raise DomainError(
            f'the objective takes a two-relay split, got {len(fractions) - 1} relays'
        )
    return fractions  # type: ignore


def _log_objective(log_beta: np.ndarray, terms: typing.Sequence[Term]) -> np.ndarray:
    "log of the objective at ``log_beta`` of shape (..., 3)."
    values = [
        log_k - log_beta @ np.asarray(powers, dtype=float)
        for log_k, powers in terms
    ]
    return np.logaddexp.reduce(np.stack(values), axis=0)


def objective(split: PowerSplit, consts: ObjectiveConstants) -> float:
    """
    Objective value at ``split``. A fraction may be zero only when no live
    term depends on it.
    """
    fractions = _fractions(split)
    terms = consts.terms()
    if not terms:
        return 0.0
    for i, beta in enumerate(fractions):
        if beta <= 0 and any(powers[i] > 0 for _, powers in terms):
            raise DomainError(f'power fraction {i} must be positive, got {beta!r}')
    log_beta = np.array([math.log(b) if b > 0 else 0.0 for b in fractions])
    value = float(_log_objective(log_beta, terms))
    try:
        return math.exp(value)
    except OverflowError:
        return math.inf


def _split(fractions: typing.Sequence[float]) -> PowerSplit:
    return PowerSplit(float(fractions[0]), (float(fractions[1]), float(fractions[2])))


def grid_minimum(
    consts: ObjectiveConstants,
    resolution: int = 200
) -> typing.Tuple[PowerSplit, float]:
    """
    Best point of the simplex lattice (i, j, resolution - i - j) / resolution
    with every coordinate positive, and the objective there.
    """
    if int(resolution) != resolution or resolution < 3:
        raise DomainError("resolution must be an integer of at least 3")
    resolution = int(resolution)
    terms = consts.terms()
    i, j = np.meshgrid(np.arange(1, resolution), np.arange(1, resolution), indexing="ij")
    mask = i + j < resolution
    points = np.stack([i[mask], j[mask], resolution - i[mask] - j[mask]], axis=-1) / resolution
    if not terms:
        return _split(points[0]), 0.0
    values = _log_objective(np.log(points), terms)
    best = int(np.argmin(values))
    logger.debug(
        "grid_minimum over %d lattice points: %r at %r",
        len(points), float(values[best]), points[best].tolist()
    )
    return _split(points[best]), math.exp(float(values[best]))


def _corner(terms: typing.Sequence[Term]) -> PowerSplit:
    # One monomial beta^-p on the simplex is minimised at beta_i = p_i / sum(p).
    _, powers = terms[0]
    total = float(sum(powers))
    return _split([p / total for p in powers])


def optimize_power(
    consts: ObjectiveConstants,
    tol: float = 1e-10,
    grid_resolution: int = 200
) -> PowerSplit:
    """
    Minimiser of ``objective`` over the simplex beta0 + beta1 + beta2 = 1.

    Fractions no live term depends on get zero power. The search starts from
    ``grid_minimum`` and runs BFGS on the log objective in softmax
    coordinates, where it is convex.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    terms = consts.terms()
    if not terms:
        raise DomainError("every objective coefficient is zero")
    if len(terms) == 1:
        return _corner(terms)

    active = [i for i in range(3) if any(powers[i] > 0 for _, powers in terms)]
    if len(active) == 1:
        return _split([1.0 if i in active else 0.0 for i in range(3)])
    log_k = np.array([t[0] for t in terms])
    powers = np.array([[t[1][i] for i in active] for t in terms], dtype=float)

    def unpack(v: np.ndarray) -> np.ndarray:
        logits = np.append(v, 0.0)
        return logits - np.logaddexp.reduce(logits)

    def fun(v: np.ndarray) -> float:
        return float(np.logaddexp.reduce(log_k - powers @ unpack(v)))

    def jac(v: np.ndarray) -> np.ndarray:
        log_beta = unpack(v)
        log_terms = log_k - powers @ log_beta
        weights = np.exp(log_terms - np.logaddexp.reduce(log_terms))
        beta = np.exp(log_beta)
        # d/dv_j of -p . log(beta) is -p_j + sum(p) beta_j
        grad = -(weights @ powers) + (weights @ powers.sum(axis=1)) * beta
        return grad[:-1]

    start, grid_value = grid_minimum(consts, grid_resolution)
    start_log = np.log(np.array(start.fractions)[active])
    v0 = start_log[:-1] - start_log[-1]
    best_v, best_f = v0, fun(v0)

    result = sp_optimize.minimize(
        fun, v0, jac=jac, method="BFGS",
        options={"gtol": tol, "maxiter": 2000}
    )
    logger.debug(
        "BFGS finished after %d iterations: %s (f=%r, grid f=%r)",
        result.nit, result.message, result.fun, best_f
    )
    if np.all(np.isfinite(result.x)) and fun(result.x) <= best_f:
        best_v, best_f = result.x, fun(result.x)

    fractions = [0.0, 0.0, 0.0]
    for i, beta in zip(active, np.exp(unpack(best_v))):
        fractions[i] = float(beta)
    best = _split(fractions)

    gradient = float(np.linalg.norm(jac(best_v)))
    if not result.success and gradient > math.sqrt(tol):
        raise OptimizationError(
            f'power allocation did not converge: {result.message} '
            f'(gradient norm {gradient:.3g})',
            best=best
        )
    if math.exp(best_f) > grid_value * (1.0 + 1e-12):
        raise OptimizationError(
            "power allocation ended above the lattice minimum", best=best
        )
    return best
