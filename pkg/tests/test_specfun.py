import math

import pytest
from scipy import special

from sdf_outage import specfun
from sdf_outage.errors import AccuracyError, DomainError


def test_bessel_j0():
    assert specfun.bessel_j0(0.0) == 1.0
    assert specfun.bessel_j0(1.0) == pytest.approx(0.7651976866, abs=1e-10)
    with pytest.raises(DomainError):
        specfun.bessel_j0(math.inf)


@pytest.mark.parametrize("x", [-8.0, -5.5, -1.0, 0.3, 2.0, 4.7, 6.5, 8.0])
def test_bessel_j0_power_series(x):
    terms = []
    term = 1.0
    for k in range(41):
        terms.append(term)
        term *= -(x / 2.0) ** 2 / ((k + 1) ** 2)
    assert specfun.bessel_j0(x) == pytest.approx(math.fsum(terms), abs=1e-12)


def test_bessel_j0_first_zero():
    assert specfun.bessel_j0(2.4048255577) == pytest.approx(0.0, abs=1e-9)
    assert specfun.bessel_j0(2.40) > 0.0 > specfun.bessel_j0(2.41)


@pytest.mark.parametrize("s", [0.5, 1.0, 2.5, 4.0])
@pytest.mark.parametrize("x", [0.1, 1.0, 3.0, 5.0])
def test_lower_incomplete_gamma_alternating_series(s, x):
    # gamma(s, x) = x^s sum_l (-x)^l / (l! (s + l))
    terms = []
    power = 1.0
    for l in range(120):
        terms.append(power / (s + l))
        power *= -x / (l + 1)
    unregularized = x ** s * math.fsum(terms)
    assert specfun.lower_incomplete_gamma_regularized(s, x) * math.gamma(s) == pytest.approx(
        unregularized, rel=1e-10
    )


def test_ln_gamma():
    assert specfun.ln_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-14)
    assert specfun.ln_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)
    with pytest.raises(DomainError):
        specfun.ln_gamma(0.0)


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 4.0, 8.0, 12.5, 30.0, 100.0])
@pytest.mark.parametrize("x", [1e-3, 0.1, 1.0, 5.0, 10.0, 50.0, 200.0])
def test_lower_incomplete_gamma_matches_scipy(s, x):
    expected = special.gammainc(s, x)
    assert specfun.lower_incomplete_gamma_regularized(s, x) == pytest.approx(
        expected, rel=1e-10, abs=1e-12
    )


@pytest.mark.parametrize("s, x", [(2.0, 50.0), (4.0, 80.0), (12.0, 100.0)])
def test_upper_incomplete_gamma_tail_is_relative_accurate(s, x):
    expected = special.gammaincc(s, x)
    assert expected < 1e-15
    assert specfun.upper_incomplete_gamma_regularized(s, x) == pytest.approx(
        expected, rel=1e-9
    )


def test_incomplete_gamma_pair_sums_to_one():
    for s in (0.7, 3.0, 16.0):
        for x in (0.2, 3.0, 17.0, 40.0):
            p = specfun.lower_incomplete_gamma_regularized(s, x)
            q = specfun.upper_incomplete_gamma_regularized(s, x)
            assert p + q == pytest.approx(1.0, abs=1e-12)


def test_incomplete_gamma_edges():
    assert specfun.lower_incomplete_gamma_regularized(3.0, 0.0) == 0.0
    assert specfun.lower_incomplete_gamma_regularized(3.0, math.inf) == 1.0
    assert specfun.upper_incomplete_gamma_regularized(3.0, 0.0) == 1.0
    with pytest.raises(DomainError):
        specfun.lower_incomplete_gamma_regularized(3.0, -1.0)
    with pytest.raises(DomainError):
        specfun.lower_incomplete_gamma_regularized(0.0, 1.0)


def test_incomplete_gamma_term_cap():
    with pytest.raises(AccuracyError):
        specfun.lower_incomplete_gamma_regularized(
            1.0, 0.5, specfun.Accuracy(max_terms=1)
        )


@pytest.mark.parametrize("z", [-30.0, -3.0, 0.5, 20.0])
def test_kummer_closed_form(z):
    # 1F1(1; 2; z) = (e^z - 1) / z
    assert specfun.kummer_1f1(1.0, 2.0, z) == pytest.approx(math.expm1(z) / z, rel=1e-10)


@pytest.mark.parametrize("a, z", [(2.5, 3.0), (2.5, -7.0), (6.0, -40.0)])
def test_kummer_equal_parameters(a, z):
    assert specfun.kummer_1f1(a, a, z) == pytest.approx(math.exp(z), rel=1e-10)


@pytest.mark.parametrize("s", [0.5, 2.0, 4.0, 8.0, 12.0])
@pytest.mark.parametrize("x", [0.3, 5.0, 60.0, 1000.0, 1e4])
def test_kummer_incomplete_gamma_identity(s, x):
    # 1F1(s; s + 1; -x) = s x^-s Gamma(s) P(s, x)
    log_scale = math.log(s) - s * math.log(x) + special.gammaln(s)
    expected = math.exp(log_scale) * special.gammainc(s, x)
    assert specfun.kummer_1f1(s, s + 1.0, -x) == pytest.approx(expected, rel=1e-8)


def test_kummer_edges():
    assert specfun.kummer_1f1(3.0, 4.0, 0.0) == 1.0
    with pytest.raises(DomainError):
        specfun.kummer_1f1(1.0, -2.0, 1.0)
    assert specfun.kummer_1f1(1.0, 2.0, 800.0) == math.inf


def test_accuracy_validation():
    with pytest.raises(DomainError):
        specfun.Accuracy(abs_tol=0.0)
    with pytest.raises(DomainError):
        specfun.Accuracy(max_terms=0)
    assert specfun.Accuracy(abs_tol=1e-30).tol > 1e-30
