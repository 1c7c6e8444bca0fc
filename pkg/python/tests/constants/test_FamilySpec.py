import math

import pytest

import libbh
from libbh import Family, FamilySpec, KhinchineMode, ScalarField


def test_FamilySpec_from_str():
    spec = FamilySpec.from_str("recursive-real")
    assert spec.family is Family.RecursiveReal
    assert spec.mode is KhinchineMode.GammaFormula
    assert spec.is_recursive
    assert spec.label == "recursive-real/gamma"

    spec = FamilySpec.from_str("recursive-complex/haagerup")
    assert spec.family is Family.RecursiveComplex
    assert spec.mode is KhinchineMode.HaagerupPiecewise

    assert FamilySpec.from_str("recursive-real", "haagerup") == FamilySpec(
        Family.RecursiveReal, KhinchineMode.HaagerupPiecewise
    )

    with pytest.raises(libbh.ParsingError):
        FamilySpec.from_str("not-a-family")
    with pytest.raises(libbh.ParsingError):
        FamilySpec.from_str("recursive-real/not-a-mode")


def test_FamilySpec_closed_form_mode():
    # the mode of a closed-form family is normalized
    a = FamilySpec(Family.Queffelec, KhinchineMode.HaagerupPiecewise)
    b = FamilySpec(Family.Queffelec)
    assert a == b
    assert hash(a) == hash(b)
    assert a.label == "queffelec"
    assert not a.is_recursive


def test_FamilySpec_scalar_fields():
    both = {ScalarField.Real, ScalarField.Complex}
    assert FamilySpec(Family.Original).scalar_fields == both
    assert FamilySpec(Family.DavieKaijser).scalar_fields == both
    assert FamilySpec(Family.Queffelec).scalar_fields == {ScalarField.Complex}
    assert FamilySpec(Family.RecursiveReal).scalar_fields == {ScalarField.Real}
    assert FamilySpec(Family.RecursiveComplex).scalar_fields == {
        ScalarField.Complex
    }


def test_FamilySpec_to_dict():
    spec = FamilySpec.from_str("recursive-complex/haagerup")
    data = spec.to_dict()
    assert data == {"family": "recursive-complex", "mode": "haagerup"}
    assert FamilySpec.from_dict(data) == spec

    assert FamilySpec.from_dict({"family": "davie-kaijser"}) == FamilySpec(
        Family.DavieKaijser
    )
    with pytest.raises(libbh.ParsingError):
        FamilySpec.from_dict({"mode": "gamma"})


def test_LogValue():
    value = libbh.LogValue(log_value=math.log(2.0), m=4)
    assert math.isclose(value.value, 2.0, rel_tol=1e-14)
    assert math.isclose(value.log10, math.log10(2.0), rel_tol=1e-14)
    assert value.to_dict() == {"m": 4, "log_value": math.log(2.0), "value": value.value}

    huge = libbh.LogValue(log_value=1e6, m=10**6)
    assert huge.value == math.inf
    assert math.isfinite(huge.log10)

    with pytest.raises(libbh.DomainError):
        libbh.LogValue(log_value=math.nan, m=2)
    with pytest.raises(libbh.DomainError):
        libbh.LogValue(log_value=1.0, m=0)
