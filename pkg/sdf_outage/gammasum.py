"""
    Distribution of a sum of independent Gamma variates with arbitrary
    shapes and scales, written as a single Gamma series whose weights follow
    a linear recursion.

    Every function here works with scale parameters. Callers holding rates
    must invert them before building a ``GammaMixture``.
"""

import dataclasses
import logging
import math
import typing

import numpy as np

from . import specfun
from .errors import AccuracyError, DomainError
from .specfun import DEFAULT_ACCURACY, Accuracy


logger = logging.getLogger(__name__)

CdfMethod = typing.Literal["incomplete-gamma", "hypergeometric"]


@dataclasses.dataclass(frozen=True)
class GammaMixture:
    "Independent Gamma(shape, scale) summands."
    components: typing.Tuple[typing.Tuple[float, float], ...]


    def __post_init__(self):
        components = tuple(
            (float(shape), float(scale)) for shape, scale in self.components
        )
        if not components:
            raise DomainError("a Gamma mixture needs at least one component")
        for shape, scale in components:
            if not shape > 0 or not math.isfinite(shape):
                raise DomainError(f'shape must be finite and positive, got {shape!r}')
            if not scale > 0 or not math.isfinite(scale):
                raise DomainError(f'scale must be finite and positive, got {scale!r}')
        object.__setattr__(self, "components", components)


    @property
    def total_shape(self) -> float:
        return sum(shape for shape, _ in self.components)


    @property
    def mean(self) -> float:
        return sum(shape * scale for shape, scale in self.components)


    def canonical(self) -> "GammaMixture":
        "Same mixture with components sorted by (scale, shape)."
        return GammaMixture(
            tuple(sorted(self.components, key=lambda c: (c[1], c[0])))
        )


class SeriesState:
    """
    Weights of the single-series representation of a mixture.

    ``base_scale`` is the smallest scale, ``norm_const`` the product of
    (base_scale / scale_i) ** shape_i and ``deltas`` the recursion weights,
    extended on demand by ``delta``.
    """

    def __init__(self, mix: GammaMixture):
        mix = mix.canonical()
        shapes = np.array([shape for shape, _ in mix.components])
        scales = np.array([scale for _, scale in mix.components])
        self.mixture = mix
        self.base_scale = float(scales.min())
        self.total_shape = float(shapes.sum())
        self.log_norm_const = float(
            np.sum(shapes * np.log(self.base_scale / scales))
        )
        if self.log_norm_const < -700.0:
            raise AccuracyError(
                "scale spread too wide: normalising constant underflows"
            )
        self.norm_const = math.exp(self.log_norm_const)
        self._shapes = shapes
        self._ratios = 1.0 - self.base_scale / scales
        self.max_ratio = float(self._ratios.max())
        self._g = np.zeros(1)
        self._deltas = np.ones(1)
        self._size = 1


    def __repr__(self) -> str:
        return (
            f'<{type(self).__name__} [{len(self.mixture.components)} '
            f'components, {self._size} weights] at 0x{id(self):x}>'
        )


    @property
    def deltas(self) -> typing.List[float]:
        return self._deltas[:self._size].tolist()


    def _grow(self, n: int) -> None:
        capacity = max(2 * len(self._deltas), n + 1)
        powers = np.arange(capacity, dtype=float)
        # g_i = sum_j shape_j * ratio_j ** i
        g = (self._shapes[:, None] * self._ratios[:, None] ** powers[None, :]).sum(axis=0)
        g[0] = 0.0
        deltas = np.zeros(capacity)
        deltas[:self._size] = self._deltas[:self._size]
        self._g = g
        self._deltas = deltas


    def delta(self, n: int) -> float:
        if n >= len(self._deltas):
            self._grow(n)
        g = self._g
        deltas = self._deltas
        for k in range(self._size - 1, n):
            deltas[k + 1] = np.dot(g[1:k + 2], deltas[k::-1]) / (k + 1)
        self._size = max(self._size, n + 1)
        return float(deltas[n])


    def log_envelope(self, n: int) -> float:
        """
        log of (total_shape)_n q^n / n!, q the largest ratio. It bounds
        delta_n because each factor (1 - ratio_j z) ** -shape_j of the
        generating function is dominated coefficientwise by (1 - q z) ** -shape_j.
        """
        if self.max_ratio == 0.0:
            return -math.inf if n > 0 else 0.0
        rho = self.total_shape
        return (
            specfun.ln_gamma(rho + n) - specfun.ln_gamma(rho)
            - specfun.ln_gamma(n + 1) + n * math.log(self.max_ratio)
        )


    def tail_weight(self, n: int) -> float:
        "Upper bound on the series mass norm_const * sum_{k > n} delta_k."
        if self.max_ratio == 0.0:
            return 0.0
        rho = self.total_shape
        ratio = self.max_ratio * max(1.0, (rho + n + 1) / (n + 2))
        if ratio >= 1.0:
            return math.inf
        return math.exp(self.log_norm_const + self.log_envelope(n + 1)) / (1.0 - ratio)


def series_state(mix: GammaMixture, n_max: int = 0) -> SeriesState:
    state = SeriesState(mix)
    state.delta(n_max)
    return state


def delta_coefficients(mix: GammaMixture, n_max: int) -> typing.List[float]:
    "[delta_0, ..., delta_n_max] for the canonical ordering of ``mix``."
    if n_max < 0:
        raise DomainError("n_max must be non-negative")
    return series_state(mix, n_max).deltas[:n_max + 1]


def _check_point(xi: float) -> float:
    xi = float(xi)
    if not xi >= 0:
        raise DomainError(f'xi must be non-negative, got {xi!r}')
    return xi


def sum_pdf(
    mix: GammaMixture,
    xi: float,
    acc: Accuracy = DEFAULT_ACCURACY
) -> float:
    "Density of the sum at ``xi``."
    xi = _check_point(xi)
    state = SeriesState(mix)
    rho = state.total_shape
    theta = state.base_scale
    if math.isinf(xi):
        return 0.0
    if xi == 0.0:
        if rho < 1.0:
            return math.inf
        if rho == 1.0:
            return state.norm_const / theta
        return 0.0

    x = xi / theta
    log_xi = math.log(xi)
    log_theta = math.log(theta)
    q = state.max_ratio

    def log_density(n: int) -> float:
        s = rho + n
        return (s - 1.0) * log_xi - x - specfun.ln_gamma(s) - s * log_theta

    # Summing the envelope of delta_n over all n bounds the whole series by
    # norm_const x^(rho-1) e^(-(1-q) x) / (Gamma(rho) theta). The terms past
    # n carry at most the Poisson(q x) tail P(n + 1, q x) of that bound.
    log_bound = (
        state.log_norm_const + (rho - 1.0) * math.log(x) - (1.0 - q) * x
        - specfun.ln_gamma(rho) - log_theta
    )
    if log_bound < math.log(acc.abs_tol):
        return 0.0
    bound = math.exp(log_bound)

    total = 0.0
    for n in range(acc.max_terms):
        delta = state.delta(n)
        if delta > 0.0:
            total += state.norm_const * delta * math.exp(log_density(n))
        if q == 0.0:
            break
        if n + 1 >= q * x and bound * specfun.lower_incomplete_gamma_regularized(
            n + 1, q * x, acc
        ) < acc.abs_tol:
            break
    else:
        raise AccuracyError(
            f'sum_pdf did not converge within {acc.max_terms} terms'
        )
    return max(total, 0.0)


def _hypergeometric_term(s: float, x: float, acc: Accuracy) -> float:
    "P(s, x) through x^s 1F1(s; 1 + s; -x) / (s Gamma(s))."
    log_scale = s * math.log(x) - math.log(s) - specfun.ln_gamma(s)
    return math.exp(log_scale) * specfun.kummer_1f1(s, 1.0 + s, -x, acc)


def sum_cdf(
    mix: GammaMixture,
    xi: float,
    acc: Accuracy = DEFAULT_ACCURACY,
    method: CdfMethod = "incomplete-gamma"
) -> float:
    """
    Distribution function of the sum at ``xi``.

    Each series term is norm_const * delta_n * P(total_shape + n, xi /
    base_scale). The ``hypergeometric`` method evaluates the same P through
    Kummer's function and exists as an independent cross-check.
    """
    xi = _check_point(xi)
    if xi == 0.0:
        return 0.0
    if math.isinf(xi):
        return 1.0
    if method == "incomplete-gamma":
        def regularized(s: float, x: float) -> float:
            return specfun.lower_incomplete_gamma_regularized(s, x, acc)
    elif method == "hypergeometric":
        def regularized(s: float, x: float) -> float:
            return _hypergeometric_term(s, x, acc)
    else:
        raise DomainError(f'unknown cdf method {method!r}')

    state = SeriesState(mix)
    rho = state.total_shape
    x = xi / state.base_scale

    total = 0.0
    p_n = regularized(rho, x)
    for n in range(acc.max_terms):
        delta = state.delta(n)
        total += state.norm_const * delta * p_n
        weight = state.tail_weight(n)
        if weight == 0.0:
            break
        # P(s, x) is non-increasing in s, so the next term bounds the rest.
        p_n = regularized(rho + n + 1, x)
        if weight * p_n < acc.abs_tol:
            logger.debug("sum_cdf at xi=%r used %d terms", xi, n + 1)
            break
    else:
        raise AccuracyError(
            f'sum_cdf did not converge within {acc.max_terms} terms'
        )
    return min(max(total, 0.0), 1.0)


def sum_sample(
    mix: GammaMixture,
    size: int,
    rng: np.random.Generator
) -> np.ndarray:
    "Draw ``size`` realisations of the sum."
    total = np.zeros(size)
    for shape, scale in mix.components:
        total += rng.gamma(shape, scale, size)
    return total
