import math

import mpmath
import numpy as np
import pytest
import scipy.special

import libbh


def test_ln_gamma_grid_1():
    x = np.linspace(1e-3, 50.0, 5001)
    value = libbh.ln_gamma(x)
    assert value.shape == x.shape
    assert np.allclose(value, scipy.special.gammaln(x), rtol=1e-13, atol=1e-14)


def test_ln_gamma_reflection_region():
    x = np.array([1e-8, 1e-4, 0.01, 0.1, 0.25, 0.4, 0.499999])
    assert np.allclose(
        libbh.ln_gamma(x), scipy.special.gammaln(x), rtol=1e-13, atol=1e-14
    )


def test_ln_gamma_special_values():
    assert math.isclose(libbh.ln_gamma(0.5), 0.5 * math.log(math.pi), rel_tol=1e-13)
    assert abs(libbh.ln_gamma(1.0)) < 1e-14
    assert abs(libbh.ln_gamma(2.0)) < 1e-14
    assert math.isclose(libbh.ln_gamma(11.0), math.log(3628800.0), rel_tol=1e-13)

    # Gamma(3/2) = sqrt(pi)/2
    assert math.isclose(
        libbh.ln_gamma(1.5), math.log(0.5 * math.sqrt(math.pi)), rel_tol=1e-13
    )


def test_ln_gamma_scalar_type():
    assert isinstance(libbh.ln_gamma(3.5), float)
    assert isinstance(libbh.ln_gamma(np.array([3.5])), np.ndarray)


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5, math.nan, math.inf])
def test_ln_gamma_domain_error(x):
    with pytest.raises(libbh.DomainError):
        libbh.ln_gamma(x)

    with pytest.raises(libbh.DomainError):
        libbh.ln_gamma(np.array([1.0, x]))


def test_ln_gamma_extended():
    precision = libbh.Precision(extended=True, dps=40)
    value = libbh.ln_gamma(0.75, precision)
    assert isinstance(value, mpmath.mpf)
    with mpmath.workdps(40):
        expected = mpmath.loggamma(mpmath.mpf(0.75))
        assert abs(value - expected) < mpmath.mpf(10) ** -35

    # agrees with the double precision path
    assert math.isclose(float(value), libbh.ln_gamma(0.75), rel_tol=1e-13)

    with pytest.raises(libbh.DomainError):
        libbh.ln_gamma(np.array([1.0, 2.0]), precision)

    with pytest.raises(libbh.DomainError):
        libbh.ln_gamma(-1.0, precision)


def test_euler_gamma():
    assert abs(libbh.euler_gamma() - np.euler_gamma) < 1e-16

    precision = libbh.Precision(extended=True, dps=45)
    value = libbh.euler_gamma(precision)
    with mpmath.workdps(45):
        assert abs(value - mpmath.euler) < mpmath.mpf(10) ** -44


def test_euler_gamma_harmonic_sum():
    # H_n - ln n with the Euler-Maclaurin tail through 1/n^6
    n = 10**6
    h_n = math.fsum(1.0 / k for k in range(1, n + 1))
    estimate = (
        h_n
        - math.log(n)
        - 1.0 / (2 * n)
        + 1.0 / (12 * n**2)
        - 1.0 / (120 * n**4)
        + 1.0 / (252 * n**6)
    )
    assert abs(libbh.euler_gamma() - estimate) < 1e-14

    precision = libbh.Precision(extended=True, dps=45)
    with mpmath.workdps(45):
        m = mpmath.mpf(n)
        estimate = (
            mpmath.harmonic(n)
            - mpmath.log(m)
            - 1 / (2 * m)
            + 1 / (12 * m**2)
            - 1 / (120 * m**4)
            + 1 / (252 * m**6)
        )
        assert abs(libbh.euler_gamma(precision) - estimate) < mpmath.mpf(10) ** -40


@pytest.mark.parametrize(
    "x", np.concatenate([np.geomspace(1e-3, 1.0, 40), np.linspace(1.0, 49.0, 97)])
)
def test_ln_gamma_recurrence(x):
    # ln Gamma(x + 1) - ln Gamma(x) = ln x
    upper, lower = libbh.ln_gamma(x + 1.0), libbh.ln_gamma(x)
    tol = 2e-13 * (abs(upper) + abs(lower)) + 1e-14
    assert abs((upper - lower) - math.log(x)) < tol


# dyadic x keeps 1 - x exact
@pytest.mark.parametrize("x", [k / 1024 for k in range(1, 512, 9)])
def test_ln_gamma_reflection_consistency(x):
    # Gamma(x) Gamma(1 - x) = pi / sin(pi x)
    total = libbh.ln_gamma(x) + libbh.ln_gamma(1.0 - x)
    expected = math.log(math.pi / math.sin(math.pi * x))
    assert math.isclose(total, expected, rel_tol=1e-13, abs_tol=1e-13)

    precision = libbh.Precision(extended=True, dps=40)
    with mpmath.workdps(40):
        total = libbh.ln_gamma(x, precision) + libbh.ln_gamma(1.0 - x, precision)
        xm = mpmath.mpf(x)
        expected = mpmath.log(mpmath.pi / mpmath.sin(mpmath.pi * xm))
        assert abs(total - expected) < mpmath.mpf(10) ** -30


def test_Precision_1():
    precision = libbh.Precision()
    assert precision.rel_tol == 1e-13
    assert precision.abs_tol == 1e-15
    assert precision.extended is False
    assert precision.isclose(1.0, 1.0 + 1e-14)
    assert not precision.isclose(1.0, 1.0 + 1e-12)

    data = libbh.Precision(extended=True, dps=50).to_dict()
    assert data == {"rel_tol": 1e-13, "abs_tol": 1e-15, "extended": True, "dps": 50}
    restored = libbh.Precision.from_dict(data)
    assert restored.extended is True
    assert restored.dps == 50

    assert libbh.Precision.from_dict({}).extended is False


def test_Precision_errors():
    with pytest.raises(libbh.DomainError):
        libbh.Precision(rel_tol=0.0)
    with pytest.raises(libbh.DomainError):
        libbh.Precision(abs_tol=-1.0)
    with pytest.raises(libbh.DomainError):
        libbh.Precision(dps=10)


@pytest.mark.parametrize(
    "data",
    [
        {"extended": "false"},
        {"extended": 1},
        {"dps": 40.5},
        {"dps": "40"},
        {"rel_tol": "1e-13"},
    ],
)
def test_Precision_from_dict_strict_types(data):
    with pytest.raises(libbh.ParsingError):
        libbh.Precision.from_dict(data)
