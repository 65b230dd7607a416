import math

import numpy as np
import pytest
from scipy import integrate, special, stats

from sdf_outage import gammasum
from sdf_outage.errors import AccuracyError, DomainError
from sdf_outage.gammasum import GammaMixture


THREE_COMPONENT = [
    GammaMixture(((4.0, 1.0), (4.0, 2.5), (4.0, 0.6))),
    GammaMixture(((1.0, 3.0), (2.0, 0.5), (0.5, 1.2))),
    GammaMixture(((4.0, 10.0), (8.0, 1.0), (2.0, 4.0))),
]


def convolution_cdf(mix: GammaMixture, xi: float) -> float:
    (a1, t1), (a2, t2) = mix.components
    first = stats.gamma(a1, scale=t1)
    second = stats.gamma(a2, scale=t2)
    value, _ = integrate.quad(
        lambda t: first.pdf(t) * second.cdf(xi - t),
        0.0, xi, epsabs=1e-13, epsrel=1e-12, limit=200
    )
    return value


def test_single_component_is_gamma_cdf():
    mix = GammaMixture(((3.5, 2.0),))
    for xi in (0.1, 1.0, 7.0, 30.0):
        assert gammasum.sum_cdf(mix, xi) == pytest.approx(
            special.gammainc(3.5, xi / 2.0), abs=1e-12
        )


def test_equal_scales_collapse():
    mix = GammaMixture(((2.0, 1.5), (4.0, 1.5), (1.0, 1.5)))
    assert gammasum.delta_coefficients(mix, 6) == [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    for xi in np.linspace(0.05, 40.0, 20):
        assert gammasum.sum_cdf(mix, xi) == pytest.approx(
            special.gammainc(7.0, xi / 1.5), abs=1e-12
        )


@pytest.mark.parametrize("a1", [1.0, 4.0])
@pytest.mark.parametrize("a2", [1.0, 4.0])
@pytest.mark.parametrize("t1", [0.5, 2.0])
@pytest.mark.parametrize("t2", [0.5, 2.0])
def test_two_components_match_convolution(a1, a2, t1, t2):
    mix = GammaMixture(((a1, t1), (a2, t2)))
    for xi in (0.5 * mix.mean, mix.mean, 2.0 * mix.mean):
        assert gammasum.sum_cdf(mix, xi) == pytest.approx(
            convolution_cdf(mix, xi), abs=1e-6
        )


def test_pdf_matches_convolution():
    mix = GammaMixture(((2.0, 0.7), (3.0, 1.9)))
    first = stats.gamma(2.0, scale=0.7)
    second = stats.gamma(3.0, scale=1.9)
    for xi in (0.5, 3.0, 9.0):
        expected, _ = integrate.quad(
            lambda t: first.pdf(t) * second.pdf(xi - t), 0.0, xi,
            epsabs=1e-13, epsrel=1e-12
        )
        assert gammasum.sum_pdf(mix, xi) == pytest.approx(expected, abs=1e-9)


def test_pdf_integrates_to_cdf():
    mix = THREE_COMPONENT[0]
    xi = mix.mean
    area, _ = integrate.quad(lambda t: gammasum.sum_pdf(mix, t), 0.0, xi, epsabs=1e-12)
    assert area == pytest.approx(gammasum.sum_cdf(mix, xi), abs=1e-8)


MEAN_CHECK = THREE_COMPONENT + [
    GammaMixture(((2.0, 0.5), (3.0, 1.7), (1.5, 3.0))),
    GammaMixture(((1.0, 1.0), (1.0, 2.0))),
]


@pytest.mark.parametrize("mix", MEAN_CHECK)
def test_pdf_has_mixture_mean(mix):
    def moment(power):
        def integrand(t):
            return t ** power * gammasum.sum_pdf(mix, t)
        head, _ = integrate.quad(integrand, 0.0, mix.mean, limit=200)
        tail, _ = integrate.quad(integrand, mix.mean, math.inf, limit=200)
        return head + tail
    assert moment(0) == pytest.approx(1.0, abs=1e-7)
    assert moment(1) == pytest.approx(mix.mean, rel=1e-6)


def test_pdf_far_tail_is_zero():
    mix = MEAN_CHECK[3]
    assert 0.0 < gammasum.sum_pdf(mix, 100.0) < 1e-6
    for xi in (3000.0, 7489.0, 1e6):
        assert gammasum.sum_pdf(mix, xi) == 0.0


def test_delta_recursion_by_hand():
    # Scales 1 and 2: ratio 1/2, so g_i = 2^-i and delta_k = 2^-k.
    mix = GammaMixture(((1.0, 1.0), (1.0, 2.0)))
    assert gammasum.delta_coefficients(mix, 3) == pytest.approx(
        [1.0, 0.5, 0.25, 0.125], rel=1e-15
    )


def test_pdf_at_zero():
    assert gammasum.sum_pdf(GammaMixture(((0.5, 1.0),)), 0.0) == math.inf
    assert gammasum.sum_pdf(GammaMixture(((1.0, 2.0),)), 0.0) == pytest.approx(0.5)
    assert gammasum.sum_pdf(GammaMixture(((2.0, 2.0),)), 0.0) == 0.0


@pytest.mark.parametrize("mix", THREE_COMPONENT)
def test_hypergeometric_path_agrees(mix):
    for fraction in (0.1, 0.5, 1.0, 2.0, 4.0):
        xi = fraction * mix.mean
        direct = gammasum.sum_cdf(mix, xi)
        via_kummer = gammasum.sum_cdf(mix, xi, method="hypergeometric")
        assert via_kummer == pytest.approx(direct, rel=1e-7, abs=1e-14)


@pytest.mark.parametrize("mix", THREE_COMPONENT)
def test_monotone_in_threshold(mix):
    values = [gammasum.sum_cdf(mix, xi) for xi in np.linspace(0.0, 5.0 * mix.mean, 100)]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
    assert values[0] == 0.0
    assert 0.0 <= min(values) and max(values) <= 1.0


@pytest.mark.parametrize("index", range(len(THREE_COMPONENT)))
def test_matches_empirical_cdf(index):
    mix = THREE_COMPONENT[index]
    samples = gammasum.sum_sample(mix, 200_000, np.random.default_rng(100 + index))
    trials = len(samples)
    for quantile in (0.1, 0.5, 0.9):
        xi = float(np.quantile(samples, quantile))
        p = gammasum.sum_cdf(mix, xi)
        empirical = float(np.mean(samples <= xi))
        stderr = math.sqrt(p * (1.0 - p) / trials)
        assert abs(empirical - p) <= 3.0 * stderr + 1e-9


def test_component_order_does_not_matter():
    mix = THREE_COMPONENT[1]
    reordered = GammaMixture(tuple(reversed(mix.components)))
    for xi in (0.3, 2.0, 6.0):
        assert gammasum.sum_cdf(reordered, xi) == gammasum.sum_cdf(mix, xi)


def test_deltas_sum_to_inverse_norm_const():
    # sum(delta_n) = 1 / norm_const because the series weights sum to one.
    mix = GammaMixture(((2.0, 1.0), (2.0, 1.3)))
    state = gammasum.series_state(mix, 400)
    assert sum(state.deltas) * state.norm_const == pytest.approx(1.0, rel=1e-10)


def test_far_tail_is_one():
    mix = THREE_COMPONENT[2]
    assert gammasum.sum_cdf(mix, 1e3 * mix.mean) == pytest.approx(1.0, abs=1e-12)
    assert gammasum.sum_cdf(mix, math.inf) == 1.0


def test_errors():
    with pytest.raises(DomainError):
        GammaMixture(())
    with pytest.raises(DomainError):
        GammaMixture(((0.0, 1.0),))
    with pytest.raises(DomainError):
        GammaMixture(((1.0, -1.0),))
    with pytest.raises(DomainError):
        gammasum.sum_cdf(THREE_COMPONENT[0], -1.0)
    with pytest.raises(DomainError):
        gammasum.sum_cdf(THREE_COMPONENT[0], 1.0, method="bogus")
    with pytest.raises(AccuracyError):
        gammasum.sum_cdf(GammaMixture(((100.0, 1e-4), (100.0, 1e4))), 1.0)
