import itertools
import math

import numpy as np
import pytest

import libbh
from libbh import MultilinearForm, ScalarField


def test_bh_lhs():
    form = libbh.littlewood_form()
    assert math.isclose(libbh.bh_lhs(form), 4.0**0.75, rel_tol=1e-14)

    form = MultilinearForm(np.zeros((3, 3)))
    assert libbh.bh_lhs(form) == 0.0

    rng = np.random.default_rng(0)
    for shape in [(2, 2), (3, 3, 3), (2, 2, 2, 2)]:
        form = MultilinearForm(rng.standard_normal(shape))
        assert math.isclose(
            libbh.bh_lhs(form), pytest.helpers.naive_bh_lhs(form), rel_tol=1e-13
        )


def test_bh_lhs_extreme_scale():
    coeffs = np.full((2, 2), 1e200)
    form = MultilinearForm(coeffs)
    assert math.isclose(libbh.bh_lhs(form), 1e200 * 4.0**0.75, rel_tol=1e-13)
    form = MultilinearForm(coeffs * 1e-400)
    assert math.isclose(libbh.bh_lhs(form), 1e-200 * 4.0**0.75, rel_tol=1e-13)


def test_sup_norm_real_examples(expected_values):
    estimate = libbh.sup_norm_real(libbh.littlewood_form())
    assert estimate.is_exact
    assert estimate.value == expected_values["littlewood_real_sup"]

    coeffs = np.zeros((3, 3))
    coeffs[1, 2] = -2.5
    assert libbh.sup_norm_real(MultilinearForm(coeffs)).value == 2.5

    assert libbh.sup_norm_real(MultilinearForm(np.eye(2))).value == 2.0
    assert libbh.sup_norm_real(MultilinearForm(np.zeros((2, 2, 2)))).value == 0.0
    assert libbh.sup_norm_real(MultilinearForm(np.ones((1, 1, 1)))).value == 1.0


def test_sup_norm_real_witness():
    rng = np.random.default_rng(1)
    form = MultilinearForm(rng.standard_normal((3, 3, 3)))
    estimate = libbh.sup_norm_real(form)
    assert len(estimate.witness) == 3
    for z in estimate.witness:
        assert set(np.abs(z).tolist()) == {1.0}
    assert math.isclose(
        abs(form.evaluate(*estimate.witness)), estimate.value, rel_tol=1e-13
    )
    assert estimate.witness[0][0] == 1.0

    data = estimate.to_dict()
    assert data["is_exact"] is True
    assert len(data["witness"]) == 3


@pytest.mark.parametrize("m, N", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2)])
def test_sup_norm_real_brute_force(m, N):
    for index in range(10):
        for dist in libbh.Distribution:
            form = libbh.random_form(m, N, seed=11, dist=dist, index=index)
            expected = pytest.helpers.brute_force_sup_norm_real(form)
            value = libbh.sup_norm_real(form).value
            assert math.isclose(value, expected, rel_tol=1e-12, abs_tol=1e-12)


def test_sup_norm_real_dominates_grid():
    rng = np.random.default_rng(2)
    form = MultilinearForm(rng.standard_normal((3, 3)))
    sup = libbh.sup_norm_real(form).value
    grid = [-1.0, -0.5, 0.0, 0.5, 1.0]
    for z1 in itertools.product(grid, repeat=3):
        for z2 in itertools.product(grid, repeat=3):
            assert abs(form.evaluate(np.array(z1), np.array(z2))) <= sup * (1 + 1e-12)


def test_sup_norm_real_invariances():
    rng = np.random.default_rng(3)
    form = MultilinearForm(rng.standard_normal((3, 3, 3)))
    sup = libbh.sup_norm_real(form).value

    assert math.isclose(libbh.sup_norm_real(form.scaled(-2.5)).value, 2.5 * sup)
    for slot in range(3):
        permuted = form.permuted(slot, [2, 0, 1])
        assert math.isclose(
            libbh.sup_norm_real(permuted).value, sup, rel_tol=1e-13
        )


def test_sup_norm_real_errors():
    with pytest.raises(libbh.ResourceError):
        libbh.sup_norm_real(MultilinearForm(np.zeros((5,) * 5)))
    with pytest.raises(libbh.ResourceError):
        libbh.sup_norm_real(MultilinearForm(np.zeros((3, 3))), max_vertex_bits=5)
    with pytest.raises(libbh.DomainError):
        libbh.sup_norm_real(MultilinearForm(np.eye(2), ScalarField.Complex))


def test_sup_norm_complex_littlewood(expected_values):
    form = libbh.littlewood_form(ScalarField.Complex)
    estimate = libbh.sup_norm_complex_lower(form)
    assert not estimate.is_exact
    expected = expected_values["littlewood_complex_sup"]
    assert expected - 1e-9 <= estimate.value <= expected + 1e-12
    for z in estimate.witness:
        assert np.allclose(np.abs(z), 1.0, rtol=1e-14)

    # dense phase grid: U is invariant under a common phase in each slot
    phases = np.exp(2j * np.pi * np.arange(64) / 64)
    best = max(
        abs(form.evaluate(np.array([1.0, a]), np.array([1.0, b])))
        for a in phases
        for b in phases
    )
    assert estimate.value >= best - 1e-12


def test_sup_norm_complex_single_entry():
    coeffs = np.zeros((3, 3), dtype=complex)
    coeffs[2, 0] = 3.0 - 4.0j
    estimate = libbh.sup_norm_complex_lower(MultilinearForm(coeffs))
    assert math.isclose(estimate.value, 5.0, rel_tol=1e-14)


def test_sup_norm_complex_dominates_real():
    for index in range(5):
        form = libbh.random_form(3, 3, seed=5, index=index)
        real = libbh.sup_norm_real(form).value
        complex_ = libbh.sup_norm_complex_lower(form).value
        assert complex_ >= real * (1.0 - 1e-12)


def test_sup_norm_complex_lower_bound_property():
    form = libbh.random_form(3, 2, ScalarField.Complex, seed=6)
    estimate = libbh.sup_norm_complex_lower(form, restarts=4, iters=50)

    # the value is attained at the witness
    assert math.isclose(
        abs(form.evaluate(*estimate.witness)), estimate.value, rel_tol=1e-13
    )

    # a lower bound can only improve with more starts
    more = libbh.sup_norm_complex_lower(form, restarts=16, iters=50)
    assert more.value >= estimate.value

    # and stays below the sum of the coefficient moduli
    assert more.value <= np.abs(form.coeffs).sum() * (1.0 + 1e-12)


def test_sup_norm_complex_deterministic():
    form = libbh.random_form(3, 3, ScalarField.Complex, seed=7)
    a = libbh.sup_norm_complex_lower(form, seed=3)
    b = libbh.sup_norm_complex_lower(form, seed=3)
    assert a.value == b.value
    for za, zb in zip(a.witness, b.witness):
        assert np.array_equal(za, zb)

    data = a.to_dict()
    assert data["is_exact"] is False
    assert len(data["witness_re"]) == 3
    assert len(data["witness_im"]) == 3


def test_sup_norm_complex_errors():
    form = libbh.littlewood_form(ScalarField.Complex)
    with pytest.raises(libbh.DomainError):
        libbh.sup_norm_complex_lower(form, restarts=0)
    with pytest.raises(libbh.DomainError):
        libbh.sup_norm_complex_lower(form, iters=0)
    with pytest.raises(libbh.DomainError):
        libbh.sup_norm_complex_lower(form, seed=-1)
