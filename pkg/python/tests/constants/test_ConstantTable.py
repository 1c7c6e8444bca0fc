import concurrent.futures
import math

import numpy as np
import pytest

import libbh
from libbh import Family, FamilySpec, KhinchineMode


def test_base_cases_real():
    spec = FamilySpec(Family.RecursiveReal)
    pytest.helpers.assert_log_close(
        libbh.log_constant(spec, 2).log_value, math.sqrt(2.0), rel_tol=1e-14
    )
    pytest.helpers.assert_log_close(
        libbh.log_constant(spec, 3).log_value, 2.0 ** (5.0 / 6.0), rel_tol=1e-14
    )


def test_base_cases_complex():
    spec = FamilySpec(Family.RecursiveComplex)
    for m in range(2, 7):
        expected = (2.0 / math.sqrt(math.pi)) ** (m - 1)
        pytest.helpers.assert_log_close(
            libbh.log_constant(spec, m).log_value, expected, rel_tol=1e-14
        )


@pytest.mark.parametrize("m", [2, 3, 7, 16, 100])
def test_closed_forms(m):
    value = libbh.log_constant(FamilySpec(Family.Original), m).value
    expected = m ** ((m + 1.0) / (2.0 * m)) * 2.0 ** ((m - 1.0) / 2.0)
    assert math.isclose(value, expected, rel_tol=1e-13)

    value = libbh.log_constant(FamilySpec(Family.DavieKaijser), m).value
    assert math.isclose(value, 2.0 ** ((m - 1.0) / 2.0), rel_tol=1e-13)

    value = libbh.log_constant(FamilySpec(Family.Queffelec), m).value
    expected = (2.0 / math.sqrt(math.pi)) ** (m - 1)
    assert math.isclose(value, expected, rel_tol=1e-13)


def test_recursion_matches_direct_evaluation(recursive_spec):
    expected = pytest.helpers.naive_log_constants(recursive_spec, 300)
    values = libbh.constant_table(recursive_spec, 300)
    assert [v.m for v in values] == list(range(2, 301))
    for v in values:
        assert math.isclose(v.log_value, expected[v.m], rel_tol=1e-12, abs_tol=1e-13)


def test_recursion_first_steps(expected_values):
    spec = FamilySpec(Family.RecursiveReal)
    expected = expected_values["recursive_real_gamma_log_constants"]
    for m, log_value in expected.items():
        value = libbh.log_constant(spec, int(m))
        assert math.isclose(value.log_value, log_value, abs_tol=1e-5)

    spec = FamilySpec(Family.RecursiveReal, KhinchineMode.HaagerupPiecewise)
    expected = expected_values["recursive_real_haagerup_constants"]
    for m, value in expected.items():
        constant = libbh.log_constant(spec, int(m))
        assert math.isclose(constant.value, value, rel_tol=1e-13)


def test_modes_differ(recursive_gamma_spec):
    haagerup = FamilySpec(recursive_gamma_spec.family, KhinchineMode.HaagerupPiecewise)
    # A_p is smaller below p0 in the Haagerup mode, so C_m is larger
    assert (
        libbh.log_constant(haagerup, 8).log_value
        > libbh.log_constant(recursive_gamma_spec, 8).log_value
    )


def test_constant_table_1():
    spec = FamilySpec(Family.RecursiveReal)
    values = libbh.constant_table(spec, 16)
    assert len(values) == 15
    assert values[0].m == 2
    assert values[-1].m == 16
    assert all(isinstance(v, libbh.LogValue) for v in values)
    assert values[-1].log_value == libbh.log_constant(spec, 16).log_value


def test_ratio_1(recursive_spec):
    table = libbh.get_constant_table(recursive_spec)
    for n in [2, 3, 10, 1000]:
        expected = math.exp(table[n + 1] - table[n])
        assert math.isclose(libbh.ratio(recursive_spec, n), expected, rel_tol=1e-14)


def test_ratio_series_1(recursive_spec):
    series = libbh.ratio_series(recursive_spec, 2**12)
    assert len(series) == 2**12 - 2
    assert series[0][0] == 2
    assert series[len(series) - 1][0] == 2**12 - 1
    assert series.violations == []
    assert np.all(series.ratios >= 1.0 - 1e-12)

    n, d = next(iter(series))
    assert (n, d) == series[0]
    assert math.isclose(d, libbh.ratio(recursive_spec, 2), rel_tol=1e-14)


def test_ratio_series_closed_form():
    series = libbh.ratio_series(FamilySpec(Family.DavieKaijser), 100)
    assert np.allclose(series.ratios, math.sqrt(2.0), rtol=1e-13)


def test_non_decreasing(recursive_spec):
    log_c = libbh.get_constant_table(recursive_spec).log_constants(2, 2**16)
    assert np.all(np.diff(log_c) >= math.log1p(-1e-12))


def test_family_ordering_at_1024():
    def log_c(name):
        return libbh.log_constant(FamilySpec.from_str(name), 1024).log_value

    assert log_c("recursive-real") < log_c("queffelec")
    assert log_c("recursive-complex") < log_c("queffelec")
    assert log_c("queffelec") < log_c("davie-kaijser")
    assert log_c("davie-kaijser") < log_c("original")


def test_overflowing_constant():
    value = libbh.log_constant(FamilySpec(Family.DavieKaijser), 10**5)
    assert value.value == math.inf
    assert math.isclose(value.log_value, 0.5 * (10**5 - 1) * math.log(2.0))


def test_get_constant_table():
    spec = FamilySpec(Family.RecursiveComplex, KhinchineMode.HaagerupPiecewise)
    assert libbh.get_constant_table(spec) is libbh.get_constant_table(spec)
    assert libbh.get_constant_table(
        FamilySpec(Family.Queffelec, KhinchineMode.HaagerupPiecewise)
    ) is libbh.get_constant_table(FamilySpec(Family.Queffelec))


def test_incremental_growth(recursive_spec):
    whole = libbh.ConstantTable(recursive_spec)
    whole.ensure(5000)

    grown = libbh.ConstantTable(recursive_spec)
    for m in [4, 9, 17, 600, 601, 5000]:
        grown.ensure(m)
        assert grown.m_max >= m
    assert np.allclose(
        grown.log_constants(2, 5000), whole.log_constants(2, 5000), rtol=1e-14
    )


def test_concurrent_growth():
    spec = FamilySpec(Family.RecursiveReal)
    table = libbh.ConstantTable(spec)
    degrees = [10, 5000, 77, 2**14, 3, 999, 2**14 + 1, 12345]
    with concurrent.futures.ThreadPoolExecutor(max_workers=8) as executor:
        values = list(executor.map(lambda m: table[m], degrees))

    expected = libbh.get_constant_table(spec)
    for m, value in zip(degrees, values):
        assert math.isclose(value, expected[m], rel_tol=1e-14)


def test_domain_errors():
    spec = FamilySpec(Family.RecursiveReal)
    for m in [1, 0, -3, 2.5, True, "4"]:
        with pytest.raises(libbh.DomainError):
            libbh.log_constant(spec, m)
    with pytest.raises(libbh.DomainError):
        libbh.constant_table(spec, 1)
    with pytest.raises(libbh.DomainError):
        libbh.ratio(spec, 1)
    with pytest.raises(libbh.DomainError):
        libbh.ratio_series(spec, 2)
    with pytest.raises(libbh.DomainError):
        libbh.get_constant_table(spec).log_constants(1, 10)


@pytest.mark.slow
def test_log_constant_finite_at_2_20(recursive_spec):
    value = libbh.log_constant(recursive_spec, 2**20)
    assert value.m == 2**20
    assert math.isfinite(value.log_value)
    assert value.log_value > libbh.log_constant(recursive_spec, 2**19).log_value


@pytest.mark.slow
def test_constant_table_to_one_million():
    spec = FamilySpec(Family.RecursiveReal)
    values = libbh.constant_table(spec, 10**6)
    assert len(values) == 10**6 - 1
    assert values[-1].m == 10**6
    assert all(math.isfinite(v.log_value) for v in values)


@pytest.mark.parametrize("mode", list(KhinchineMode))
def test_ratio_series_complex_decreases(mode):
    series = libbh.ratio_series(FamilySpec(Family.RecursiveComplex, mode), 100)
    assert len(series) == 98
    assert series[len(series) - 1][1] < series[0][1]
    assert series.violations == []
