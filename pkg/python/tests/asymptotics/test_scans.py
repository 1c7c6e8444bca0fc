import logging
import math

import numpy as np
import pytest

import libbh
from libbh import Family, FamilySpec


def test_check_contraction_1(recursive_spec):
    result = libbh.check_contraction(recursive_spec, 1.5, 100, 10**5)
    assert isinstance(result, libbh.ScanResult)
    assert result.succeeded
    assert math.isclose(result.threshold, 1.5**0.625, rel_tol=1e-15)
    assert 100 <= result.index < 100 + (10**5 - 100) // 2
    assert result.tail_max < result.threshold
    if result.witness is not None:
        assert result.witness == result.index
        assert result.witness_value >= result.threshold


def test_check_contraction_self_consistent(recursive_gamma_spec):
    n_start, n_end = 100, 10**5
    table = libbh.get_constant_table(recursive_gamma_spec)
    K = math.exp(float(table.log_ratios(n_start + 1, n_end).max())) + 1e-9
    result = libbh.check_contraction(recursive_gamma_spec, K, n_start, n_end)
    assert result.succeeded

    # D_n < K^(5/8) beyond the index
    tail = np.exp(table.log_ratios(result.index + 1, n_end))
    assert np.all(tail < K**0.625)


def test_check_contraction_hypothesis_error():
    spec = FamilySpec(Family.RecursiveReal)
    with pytest.raises(libbh.HypothesisError) as e:
        libbh.check_contraction(spec, 1.001, 100, 10**4)
    assert e.value.witness == 101
    assert e.value.value >= 1.001
    assert math.isclose(e.value.value, libbh.ratio(spec, 101), rel_tol=1e-14)


def test_check_contraction_errors():
    spec = FamilySpec(Family.RecursiveReal)
    with pytest.raises(libbh.DomainError):
        libbh.check_contraction(spec, 1.0, 100, 1000)
    with pytest.raises(libbh.DomainError):
        libbh.check_contraction(spec, 1.5, 100, 100)
    with pytest.raises(libbh.DomainError):
        libbh.check_contraction(spec, 1.5, 0, 1000)


def test_check_contraction_fails_for_davie_kaijser():
    # D_n = sqrt(2) never contracts
    spec = FamilySpec(Family.DavieKaijser)
    result = libbh.check_contraction(spec, 1.5, 100, 1000)
    assert not result.succeeded
    assert result.witness == 1000
    assert result.index == 1000
    assert result.tail_max is None


def test_check_square_root_reduction(recursive_spec):
    result = libbh.check_square_root_reduction(recursive_spec, 1.5, 100, 10**5)
    assert isinstance(result, libbh.ReductionResult)
    assert result.succeeded
    assert math.isclose(result.bound, math.sqrt(1.5), rel_tol=1e-15)
    assert result.second is not None
    assert result.index >= result.first.index
    assert result.second.tail_max < result.bound

    data = result.to_dict()
    assert data["succeeded"] is True
    assert data["first"]["succeeded"] is True
    assert data["index"] == result.index


def test_envelope_s0(recursive_spec):
    result = libbh.envelope(recursive_spec, 0, 1.5, 10**5)
    assert result.succeeded
    assert result.index == 1
    assert result.witness is None
    assert result.tail_max < 1.5


@pytest.mark.slow
def test_envelope_s6(recursive_gamma_spec):
    result = libbh.envelope(recursive_gamma_spec, 6, 1.5, 10**6)
    assert math.isclose(result.threshold, 1.5 ** (1.0 / 64.0), rel_tol=1e-15)
    assert result.succeeded
    assert 1 <= result.index < 10**6 // 2
    assert result.tail_max < result.threshold


def test_envelope_small_C(caplog):
    spec = FamilySpec(Family.RecursiveReal)
    with caplog.at_level(logging.WARNING, logger="libbh"):
        result = libbh.envelope(spec, 0, 1.0 + 1e-9, 1000)
    assert not result.succeeded
    assert result.witness == 1000
    assert result.witness_value >= 1.0 + 1e-9
    assert "does not bound" in caplog.text


def test_envelope_indices_non_decreasing(recursive_gamma_spec):
    indices = [
        libbh.envelope(recursive_gamma_spec, s, 1.5, 10**5).index for s in range(6)
    ]
    assert indices == sorted(indices)


def test_envelope_errors():
    spec = FamilySpec(Family.RecursiveReal)
    with pytest.raises(libbh.DomainError):
        libbh.envelope(spec, -1, 1.5, 1000)
    with pytest.raises(libbh.DomainError):
        libbh.envelope(spec, 0, 1.0, 1000)
    with pytest.raises(libbh.DomainError):
        libbh.envelope(spec, 0, 1.5, 1)


def test_threshold_index(recursive_spec):
    results = [
        libbh.threshold_index(recursive_spec, t, 2**20)
        for t in [1.1, 1.01, 1.001]
    ]
    assert all(r.succeeded for r in results)
    indices = [r.index for r in results]
    assert indices == sorted(indices)

    table = libbh.get_constant_table(recursive_spec)
    for threshold, result in zip([1.1, 1.01, 1.001], results):
        tail = np.exp(table.log_ratios(result.index + 1, 2**20))
        assert np.all(tail < threshold)
        if result.witness is not None:
            assert libbh.ratio(recursive_spec, result.index) >= threshold

    with pytest.raises(libbh.DomainError):
        libbh.threshold_index(recursive_spec, 1.0, 100)


def test_dyadic_block_sups(recursive_spec):
    sups = libbh.dyadic_block_sups(recursive_spec, 8, 19)
    assert sups.shape == (12,)
    assert np.all(np.diff(sups) < 0.0)

    table = libbh.get_constant_table(recursive_spec)
    block = np.exp(table.log_ratios(2**8, 2**9 - 1))
    assert math.isclose(sups[0], block.max(), rel_tol=1e-15)

    tail = np.exp(table.log_ratios(2**19, 2**20))
    assert np.all(tail >= 1.0 - 1e-12)
    assert np.all(tail < 1.0001)


def test_ScanResult_to_dict():
    spec = FamilySpec(Family.RecursiveReal)
    data = libbh.envelope(spec, 0, 1.5, 1000).to_dict()
    assert data["family"] == "recursive-real/gamma"
    assert data["witness"] is None
    assert data["witness_value"] is None
    assert data["succeeded"] is True
    assert data["index"] == 1


def test_scan_tail_fraction(recursive_spec):
    n_max = 2**12
    result = libbh.threshold_index(recursive_spec, 1.01, n_max)
    assert result.tail_fraction == libbh.STABLE_TAIL_FRACTION == 0.5
    assert result.to_dict()["tail_fraction"] == 0.5
    share = (n_max - result.index) / (n_max - 1)
    assert result.succeeded == (share > 0.5)
    assert 0.5 < share < 1.0

    loose = libbh.threshold_index(recursive_spec, 1.01, n_max, tail_fraction=share / 2)
    assert loose.succeeded
    assert loose.index == result.index
    strict = libbh.threshold_index(
        recursive_spec, 1.01, n_max, tail_fraction=(1.0 + share) / 2
    )
    assert not strict.succeeded
    assert strict.index == result.index
    assert strict.tail_fraction == (1.0 + share) / 2


@pytest.mark.parametrize("tail_fraction", [0.0, 1.0, -0.25, 1.5, math.nan])
def test_scan_tail_fraction_errors(tail_fraction):
    spec = FamilySpec(Family.RecursiveReal)
    with pytest.raises(libbh.DomainError):
        libbh.threshold_index(spec, 1.1, 1000, tail_fraction=tail_fraction)
    with pytest.raises(libbh.DomainError):
        libbh.check_contraction(spec, 1.5, 100, 1000, tail_fraction=tail_fraction)
    with pytest.raises(libbh.DomainError):
        libbh.envelope(spec, 0, 1.5, 1000, tail_fraction=tail_fraction)
