import csv
import io
import itertools
import json
import math
import os
import os.path
import pathlib
import shutil
import sys

import numpy as np
import pytest

import libbh


def _win32_longpath(path):
    """
    Helper function to add the long path prefix for Windows, so that shutil.copytree
     won't fail while working with paths with 255+ chars.
    """
    if sys.platform == "win32":
        return "\\\\?\\" + os.path.normpath(path)
    else:
        return path


@pytest.fixture(scope="session")
def session_shared_datadir(tmpdir_factory):
    original_shared_path = pathlib.Path(os.path.realpath(__file__)).parent / "data"
    session_temp_path = tmpdir_factory.mktemp("session_data")
    shutil.copytree(
        _win32_longpath(original_shared_path),
        _win32_longpath(str(session_temp_path)),
        dirs_exist_ok=True,
    )
    return pathlib.Path(session_temp_path)


@pytest.fixture(scope="session")
def expected_values(session_shared_datadir):
    with open(session_shared_datadir / "expected_values.json", "r") as f:
        return json.load(f)


@pytest.fixture(
    params=[
        libbh.FamilySpec.from_str("recursive-real/gamma"),
        libbh.FamilySpec.from_str("recursive-complex/gamma"),
        libbh.FamilySpec.from_str("recursive-real/haagerup"),
        libbh.FamilySpec.from_str("recursive-complex/haagerup"),
    ],
    ids=lambda spec: spec.label,
)
def recursive_spec(request):
    return request.param


@pytest.fixture(
    params=[
        libbh.FamilySpec.from_str("recursive-real"),
        libbh.FamilySpec.from_str("recursive-complex"),
    ],
    ids=lambda spec: spec.label,
)
def recursive_gamma_spec(request):
    return request.param


@pytest.helpers.register
def assert_log_close(log_value: float, expected: float, rel_tol: float = 1e-12):
    """Check exp(log_value) against a value given on the linear scale"""
    assert math.isclose(math.exp(log_value), expected, rel_tol=rel_tol)


@pytest.helpers.register
def naive_log_constants(spec: libbh.FamilySpec, m_max: int) -> dict:
    """ln C_m for m = 2..m_max, by direct recursion with math.lgamma"""
    p0 = libbh.find_p0()

    def log_a(p):
        if spec.mode is libbh.KhinchineMode.HaagerupPiecewise and p <= p0:
            return (0.5 - 1.0 / p) * math.log(2.0)
        return 0.5 * math.log(2.0) + (
            math.lgamma(0.5 * (p + 1.0)) - 0.5 * math.log(math.pi)
        ) / p

    if spec.family is libbh.Family.RecursiveReal:
        log_c = {2: 0.5 * math.log(2.0), 3: 5.0 / 6.0 * math.log(2.0)}
    else:
        log_c = {
            m: (m - 1) * math.log(2.0 / math.sqrt(math.pi)) for m in range(2, 7)
        }
    for m in range(max(log_c) + 1, m_max + 1):
        if m % 2 == 0:
            log_c[m] = log_c[m // 2] - 0.5 * m * log_a(2.0 * m / (m + 2.0))
        else:
            n = (m - 1) // 2
            lower = log_c[n] - 0.5 * (m + 1) * log_a((2.0 * m - 2.0) / (m + 1.0))
            upper = log_c[n + 1] - 0.5 * (m - 1) * log_a((2.0 * m + 2.0) / (m + 3.0))
            log_c[m] = (m - 1) / (2.0 * m) * lower + (m + 1) / (2.0 * m) * upper
    return log_c


@pytest.helpers.register
def naive_bh_lhs(form: libbh.MultilinearForm) -> float:
    q = 2.0 * form.m / (form.m + 1.0)
    total = 0.0
    for c in form.coeffs.ravel().tolist():
        total += abs(c) ** q
    return total ** (1.0 / q)


@pytest.helpers.register
def naive_evaluate(form: libbh.MultilinearForm, z) -> complex:
    total = 0.0
    for index in itertools.product(range(form.N), repeat=form.m):
        term = form.coeffs[index]
        for k, i in enumerate(index):
            term = term * z[k][i]
        total += term
    return total


@pytest.helpers.register
def brute_force_sup_norm_real(form: libbh.MultilinearForm) -> float:
    """Maximum of |U| over all 2**(m*N) sign vertices, without symmetry cuts"""
    best = 0.0
    for signs in itertools.product([-1.0, 1.0], repeat=form.m * form.N):
        z = np.array(signs).reshape(form.m, form.N)
        best = max(best, abs(naive_evaluate(form, z)))
    return best


@pytest.helpers.register
def validate_records(text: str, output_format: str) -> list[dict]:
    """Parse CSV or JSON-lines output and check its structure"""
    if output_format == "csv":
        reader = csv.DictReader(io.StringIO(text))
        records = list(reader)
        assert reader.fieldnames is not None
        for record in records:
            assert set(record.keys()) == set(reader.fieldnames)
        return records
    elif output_format == "jsonl":
        records = [json.loads(line) for line in text.splitlines()]
        for record in records:
            assert record["schema_version"] == 1
            assert "command" in record
        return records
    raise ValueError(f"unknown format {output_format}")
