"""
    Scalar special functions behind the closed-form outage expressions:
    Bessel J0, log-gamma, the regularized incomplete gamma pair and Kummer's
    confluent hypergeometric function.
"""

import dataclasses
import logging
import math
import typing

from scipy import special

from .errors import AccuracyError, DomainError


logger = logging.getLogger(__name__)

_EPS = 2.220446049250313e-16
_FPMIN = 1.0e-300


@dataclasses.dataclass(frozen=True)
class Accuracy:
    """
    Truncation control shared by every series in the package.

    ``abs_tol`` bounds the neglected remainder of a series. Quantities that
    are not bounded by one (``kummer_1f1``) apply it to the remainder
    relative to the partial sum. ``max_terms`` caps the number of terms
    before an ``AccuracyError`` is raised.
    """
    abs_tol: float = 1e-12
    max_terms: int = 10_000


    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")
        if int(self.max_terms) < 1:
            raise DomainError("max_terms must be at least 1")


    @property
    def tol(self) -> float:
        "Stopping tolerance, never tighter than machine precision."
        return max(self.abs_tol, _EPS)


DEFAULT_ACCURACY = Accuracy()


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f'{name} must be finite, got {value!r}')
    return value


def bessel_j0(x: float) -> float:
    "Bessel function of the first kind of order zero."
    return float(special.j0(_finite("x", x)))


def ln_gamma(x: float) -> float:
    "Natural logarithm of the Gamma function for x > 0."
    x = _finite("x", x)
    if x <= 0:
        raise DomainError(f'ln_gamma requires x > 0, got {x!r}')
    return float(special.gammaln(x))


def _incomplete_gamma_args(s: float, x: float) -> typing.Tuple[float, float]:
    s = _finite("s", s)
    x = float(x)
    if s <= 0:
        raise DomainError(f'shape s must be positive, got {s!r}')
    if not x >= 0:
        raise DomainError(f'x must be non-negative, got {x!r}')
    return s, x


def _log_prefactor(s: float, x: float) -> float:
    "log(x^s e^-x / Gamma(s))"
    return s * math.log(x) - x - ln_gamma(s)


def _series_p(s: float, x: float, acc: Accuracy) -> float:
    # x < s + 1, so every ratio x / (s + n) below is < 1 and decreasing.
    term = 1.0 / s
    total = term
    ap = s
    for _ in range(acc.max_terms):
        ap += 1.0
        term *= x / ap
        total += term
        ratio = x / (ap + 1.0)
        if term * ratio / (1.0 - ratio) <= total * acc.tol:
            return total * math.exp(_log_prefactor(s, x))
    raise AccuracyError(
        f'incomplete gamma series for s={s!r}, x={x!r} did not converge '
        f'within {acc.max_terms} terms'
    )


def _continued_fraction_q(s: float, x: float, acc: Accuracy) -> float:
    # Modified Lentz evaluation, valid for x >= s + 1.
    b = x + 1.0 - s
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, acc.max_terms + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= acc.tol:
            return math.exp(_log_prefactor(s, x)) * h
    raise AccuracyError(
        f'incomplete gamma continued fraction for s={s!r}, x={x!r} did not '
        f'converge within {acc.max_terms} terms'
    )


def lower_incomplete_gamma_regularized(
    s: float,
    x: float,
    acc: Accuracy = DEFAULT_ACCURACY
) -> float:
    """
    P(s, x) = gamma(s, x) / Gamma(s).

    Uses the power series below x = s + 1 and the continued fraction for
    the complement above it. Both are scaled in log space so large shapes
    do not overflow.
    """
    s, x = _incomplete_gamma_args(s, x)
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < s + 1.0:
        return min(_series_p(s, x, acc), 1.0)
    return max(1.0 - _continued_fraction_q(s, x, acc), 0.0)


def upper_incomplete_gamma_regularized(
    s: float,
    x: float,
    acc: Accuracy = DEFAULT_ACCURACY
) -> float:
    "Q(s, x) = 1 - P(s, x), evaluated without cancellation in its tail."
    s, x = _incomplete_gamma_args(s, x)
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < s + 1.0:
        return max(1.0 - _series_p(s, x, acc), 0.0)
    return min(_continued_fraction_q(s, x, acc), 1.0)


def _log_kummer_positive_terms(
    a: float,
    b: float,
    x: float,
    acc: Accuracy
) -> float:
    """
    log of 1F1(a; b; x) for a, b, x > 0, where every term is positive.

    For a >= 1 the term ratio is decreasing, so the terms are unimodal: the
    sum starts at the largest term and walks outward in both directions.
    This keeps the term count near sqrt(x) instead of x.
    """
    log_x = math.log(x)

    def ratio(n: int) -> float:
        return (a + n) * x / ((b + n) * (n + 1))

    def log_term(n: int) -> float:
        return (
            ln_gamma(a + n) - ln_gamma(a)
            + ln_gamma(b) - ln_gamma(b + n)
            + n * log_x - ln_gamma(n + 1)
        )

    peak = 0
    if a >= 1.0 and ratio(0) > 1.0:
        disc = max((b + 1.0 - x) ** 2 - 4.0 * (b - a * x), 0.0)
        peak = max(0, int(math.ceil((x - b - 1.0 + math.sqrt(disc)) / 2.0)))
        while peak > 0 and ratio(peak - 1) <= 1.0:
            peak -= 1
        while ratio(peak) > 1.0:
            peak += 1

    tol = acc.tol
    total = 1.0
    count = 0

    relative = 1.0
    n = peak
    while True:
        relative *= ratio(n)
        n += 1
        total += relative
        count += 1
        # Every later ratio is bounded by this one.
        bound = ratio(n) if a >= 1.0 else x / (b + n)
        if relative == 0.0 or (
            bound < 1.0 and relative * bound / (1.0 - bound) <= tol * total
        ):
            break
        if count >= acc.max_terms:
            raise AccuracyError(
                f'1F1({a!r}; {b!r}; {x!r}) did not converge within '
                f'{acc.max_terms} terms'
            )

    relative = 1.0
    for k in range(peak, 0, -1):
        relative /= ratio(k - 1)
        total += relative
        count += 1
        # k - 1 terms remain below, none larger than this one.
        if relative * (k - 1) <= tol * total:
            break
        if count >= acc.max_terms:
            raise AccuracyError(
                f'1F1({a!r}; {b!r}; {x!r}) did not converge within '
                f'{acc.max_terms} terms'
            )

    logger.debug("1F1(%r; %r; %r): peak term %d, %d terms", a, b, x, peak, count)
    return log_term(peak) + math.log(total)


def _kummer_positive_argument(
    a: float,
    b: float,
    x: float,
    acc: Accuracy
) -> typing.Tuple[float, float]:
    "Sign and log-magnitude of 1F1(a; b; x) for x > 0."
    if a == 0.0:
        return 1.0, 0.0
    if a > 0 and b > 0:
        return 1.0, _log_kummer_positive_terms(a, b, x, acc)

    term = 1.0
    total = 1.0
    for n in range(acc.max_terms):
        term *= (a + n) * x / ((b + n) * (n + 1))
        total += term
        if term == 0.0:
            break
        ratio = abs((a + n + 1) * x / ((b + n + 1) * (n + 2)))
        if ratio < 1.0 and abs(term) * ratio / (1.0 - ratio) <= acc.tol * abs(total):
            break
    else:
        raise AccuracyError(
            f'1F1({a!r}; {b!r}; {x!r}) did not converge within '
            f'{acc.max_terms} terms'
        )
    if total == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, total), math.log(abs(total))


def kummer_1f1(
    a: float,
    b: float,
    z: float,
    acc: Accuracy = DEFAULT_ACCURACY
) -> float:
    """
    Confluent hypergeometric function 1F1(a; b; z).

    Negative arguments go through Kummer's transformation
    1F1(a; b; z) = e^z 1F1(b - a; b; -z), so the summed series has
    positive terms and the exponential is applied in log space.
    """
    a = _finite("a", a)
    b = _finite("b", b)
    z = _finite("z", z)
    if b <= 0 and b == math.floor(b):
        raise DomainError(f'b must not be a non-positive integer, got {b!r}')
    if z == 0.0:
        return 1.0
    if z < 0:
        sign, log_value = _kummer_positive_argument(b - a, b, -z, acc)
        log_value += z
    else:
        sign, log_value = _kummer_positive_argument(a, b, z, acc)
    try:
        return sign * math.exp(log_value)
    except OverflowError:
        return sign * math.inf
