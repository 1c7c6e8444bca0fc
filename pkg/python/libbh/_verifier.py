"""Empirical checks of the Bohnenblust-Hille inequality on finite forms"""
import enum
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._ConstantTable import log_constant
from ._errors import DomainError, ResourceError, require_int
from ._FamilySpec import FamilySpec, ScalarField
from ._MultilinearForm import (
    MAX_ENTRIES,
    MultilinearForm,
    check_entry_budget,
    littlewood_form,
)
from .parsing import enum_from_str, to_dict

logger = logging.getLogger(__name__)

MAX_VERTEX_BITS = 24
"""int: Default budget for ``m * N`` in :func:`sup_norm_real`"""

INEQUALITY_TOL = 1e-9
"""float: Default relative tolerance of :func:`check_inequality`"""


class Distribution(enum.Enum):
    """Coefficient distribution of :func:`random_form`

    - ``SignUniform``: uniform on :math:`\\{-1, 1\\}`, or unit modulus with
      uniform phase for complex forms
    - ``Gaussian``: standard normal, with independent real and imaginary parts
      for complex forms
    """

    SignUniform = "sign"
    Gaussian = "gaussian"


class Verdict(enum.Enum):
    """Outcome of :func:`check_inequality`"""

    Pass = "pass"
    Fail = "fail"
    Inconclusive = "inconclusive"


def bh_lhs(form: MultilinearForm) -> float:
    """The mixed norm :math:`(\\sum |U(e_{i_1}, \\ldots, e_{i_m})|^{2m/(m+1)})
    ^{(m+1)/(2m)}`

    Entries are normalized by the largest modulus before the power is taken
    and summed with :func:`math.fsum`.
    """
    q = 2.0 * form.m / (form.m + 1.0)
    a = np.abs(form.coeffs).ravel()
    a_max = float(a.max())
    if a_max == 0.0:
        return 0.0
    return a_max * math.fsum((a / a_max) ** q) ** (1.0 / q)


@dataclass(frozen=True)
class SupNormEstimate:
    """The sup-norm of a form, or a lower bound on it, with a maximizing point"""

    value: float
    """float: :math:`|U(z_1, \\ldots, z_m)|` at :attr:`witness`"""

    witness: tuple
    """tuple[numpy.ndarray, ...]: The point :math:`(z_1, \\ldots, z_m)`"""

    is_exact: bool
    """bool: True if :attr:`value` is the sup-norm, False if a lower bound"""

    def to_dict(self):
        """Convert SupNormEstimate to a Python dict"""
        data = {"value": self.value, "is_exact": self.is_exact}
        if any(np.iscomplexobj(z) for z in self.witness):
            data["witness_re"] = [np.real(z).tolist() for z in self.witness]
            data["witness_im"] = [np.imag(z).tolist() for z in self.witness]
        else:
            data["witness"] = [np.asarray(z).tolist() for z in self.witness]
        return data


def _sign_vertices(N: int) -> np.ndarray:
    """All of :math:`\\{-1, 1\\}^N`, rows ordered with the first coordinate
    varying slowest and ``+1`` before ``-1``"""
    bits = (np.arange(2**N)[:, np.newaxis] >> np.arange(N)[::-1]) & 1
    return 1.0 - 2.0 * bits


def sup_norm_real(
    form: MultilinearForm, max_vertex_bits: int = MAX_VERTEX_BITS
) -> SupNormEstimate:
    """The exact sup-norm of a real form over :math:`[-1, 1]^N \\times \\cdots`

    A multilinear form is affine in each coordinate, so its maximum modulus on
    a product of cubes is attained at a vertex. The first ``m - 1`` slots are
    enumerated over sign vectors, with the first coordinate of the first slot
    fixed to ``+1`` (``U`` is odd in each slot); the last slot is maximized in
    closed form, :math:`\\max_{z_m} |\\sum_i w_i z_{m,i}| = \\|w\\|_1`.

    Parameters
    ----------
    form: MultilinearForm
        A form with ``scalar_field == ScalarField.Real``.
    max_vertex_bits: int = MAX_VERTEX_BITS
        Budget for ``m * N``.

    Returns
    -------
    estimate: SupNormEstimate
        The exact sup-norm and a maximizing vertex.

    Raises
    ------
    ResourceError
        If ``m * N > max_vertex_bits``.
    """
    if form.scalar_field is not ScalarField.Real:
        raise DomainError("Error in sup_norm_real: form must be real")
    m, N = form.m, form.N
    if m * N > max_vertex_bits:
        raise ResourceError(
            f"Error in sup_norm_real: m*N={m * N} exceeds the vertex budget "
            f"{max_vertex_bits}"
        )

    vertices = _sign_vertices(N)
    first = vertices[: 2 ** (N - 1)]

    # partial[p, ...]: coefficients contracted with the p-th choice of slots < k
    partial = np.tensordot(first, form.coeffs, axes=([1], [0]))
    for _ in range(1, m - 1):
        partial = np.tensordot(partial, vertices, axes=([1], [1]))
        partial = np.moveaxis(partial, -1, 1)
        partial = partial.reshape((-1,) + partial.shape[2:])

    values = np.abs(partial).sum(axis=1)
    best = int(np.argmax(values))

    choice = np.unravel_index(best, (len(first),) + (2**N,) * (m - 2))
    witness = [first[choice[0]]] + [vertices[c] for c in choice[1:]]
    witness.append(np.where(partial[best] < 0.0, -1.0, 1.0))
    return SupNormEstimate(
        value=float(values[best]), witness=tuple(witness), is_exact=True
    )


def _coordinate_ascent(form: MultilinearForm, z: list, iters: int):
    value = abs(form.evaluate(*z))
    for _ in range(iters):
        previous = value
        for k in range(form.m):
            w = form.partial(z, k)
            modulus = np.abs(w)
            nonzero = modulus > 0.0
            z[k] = np.where(nonzero, np.conj(w) / np.where(nonzero, modulus, 1.0), z[k])
            value = float(modulus.sum())
        if value <= previous * (1.0 + 1e-15):
            break
    return z


def sup_norm_complex_lower(
    form: MultilinearForm,
    restarts: int = 16,
    iters: int = 200,
    seed: int = 0,
    max_vertex_bits: int = MAX_VERTEX_BITS,
) -> SupNormEstimate:
    """A certified lower bound on the sup-norm over the polydisk

    Runs block coordinate ascent on the torus: given the other slots, the
    form is linear in :math:`z_k`, :math:`U = \\sum_i w_i z_{k,i}`, and
    :math:`z_{k,i} = \\bar{w}_i / |w_i|` maximizes it. The first start is the
    exact real maximizer if the coefficients are real and ``m * N`` is within
    `max_vertex_bits`, otherwise all ones; the other starts have random phases
    drawn from ``numpy.random.default_rng([seed, restart])``.

    Parameters
    ----------
    form: MultilinearForm
        The form. Real forms are treated as forms on :math:`\\mathbb{C}^N`.
    restarts: int = 16
        Number of starts, ``>= 1``.
    iters: int = 200
        Maximum number of sweeps over all slots per start.
    seed: int = 0
        Random seed, ``>= 0``.
    max_vertex_bits: int = MAX_VERTEX_BITS
        Vertex budget for the real warm start.

    Returns
    -------
    estimate: SupNormEstimate
        ``is_exact=False``; :attr:`SupNormEstimate.value` is
        :math:`|U(\\text{witness})|`, recomputed by one evaluation.
    """
    restarts = require_int(restarts, 1, "restarts", "sup_norm_complex_lower")
    iters = require_int(iters, 1, "iters", "sup_norm_complex_lower")
    seed = require_int(seed, 0, "seed", "sup_norm_complex_lower")
    m, N = form.m, form.N
    complex_form = MultilinearForm(
        form.coeffs, ScalarField.Complex, max_entries=form.coeffs.size
    )

    best_value, best_z = -1.0, None
    for restart in range(restarts):
        if restart == 0:
            if form.has_real_coefficients and m * N <= max_vertex_bits:
                real_form = MultilinearForm(
                    form.coeffs.real, ScalarField.Real, max_entries=form.coeffs.size
                )
                start = sup_norm_real(real_form, max_vertex_bits).witness
            else:
                start = [np.ones(N)] * m
            z = [np.asarray(zk, dtype=np.complex128) for zk in start]
        else:
            rng = np.random.default_rng([seed, restart])
            z = list(np.exp(2j * np.pi * rng.random((m, N))))
        z = _coordinate_ascent(complex_form, z, iters)
        value = abs(complex_form.evaluate(*z))
        if value > best_value:
            best_value, best_z = value, z

    logger.debug(
        "Complex sup-norm lower bound %.17g after %d starts", best_value, restarts
    )
    return SupNormEstimate(
        value=float(best_value), witness=tuple(best_z), is_exact=False
    )


@dataclass(frozen=True)
class InequalityReport:
    """Result of checking the Bohnenblust-Hille inequality on one form"""

    spec: FamilySpec
    """FamilySpec: The constant family providing the bound"""

    m: int
    """int: Degree of the form"""

    N: int
    """int: Dimension of the form"""

    scalar_field: ScalarField
    """ScalarField: Scalar field of the form"""

    lhs: float
    """float: :func:`bh_lhs` of the form"""

    sup_norm: float
    """float: The sup-norm, or a lower bound if not :attr:`sup_is_exact`"""

    sup_is_exact: bool
    """bool: True if :attr:`sup_norm` is exact"""

    ratio: float
    """float: ``lhs / sup_norm``; an upper estimate if not :attr:`sup_is_exact`"""

    bound: float
    """float: :math:`C_m` of :attr:`spec`"""

    verdict: Verdict
    """Verdict: ``Pass``, ``Fail`` (exact sup only), or ``Inconclusive``"""

    @property
    def passed(self) -> bool:
        """bool: True if the verdict is ``Pass``"""
        return self.verdict is Verdict.Pass

    def to_dict(self):
        """Convert InequalityReport to a Python dict"""
        data = {"family": self.spec.family.value}
        to_dict(self.spec.mode, data, "mode")
        data["m"] = self.m
        data["N"] = self.N
        to_dict(self.scalar_field, data, "field")
        data["lhs"] = self.lhs
        data["sup_norm"] = self.sup_norm
        data["sup_is_exact"] = self.sup_is_exact
        data["ratio"] = self.ratio
        data["bound"] = self.bound
        to_dict(self.verdict, data, "verdict")
        return data


def sup_norm(
    form: MultilinearForm,
    restarts: int = 16,
    iters: int = 200,
    seed: int = 0,
    max_vertex_bits: int = MAX_VERTEX_BITS,
) -> SupNormEstimate:
    """The sup-norm of `form` for its scalar field

    :func:`sup_norm_real` for real forms, :func:`sup_norm_complex_lower` with
    `restarts`, `iters` and `seed` for complex forms.
    """
    if form.scalar_field is ScalarField.Real:
        return sup_norm_real(form, max_vertex_bits)
    return sup_norm_complex_lower(form, restarts, iters, seed, max_vertex_bits)


def check_inequality(
    form: MultilinearForm,
    spec: FamilySpec,
    tol: float = INEQUALITY_TOL,
    restarts: int = 16,
    iters: int = 200,
    seed: int = 0,
    max_vertex_bits: int = MAX_VERTEX_BITS,
    sup: Optional[SupNormEstimate] = None,
) -> InequalityReport:
    """Check :math:`\\text{lhs}(U) \\leq C_m \\|U\\|` on one form

    Parameters
    ----------
    form: MultilinearForm
        The form.
    spec: FamilySpec
        The constant family; it must be valid for the form's scalar field
        (see :attr:`FamilySpec.scalar_fields`).
    tol: float = INEQUALITY_TOL
        Relative tolerance, the check is ``lhs <= C_m * sup * (1 + tol)``.
    restarts, iters, seed:
        Passed to :func:`sup_norm_complex_lower` for complex forms.
    max_vertex_bits: int = MAX_VERTEX_BITS
        Passed to :func:`sup_norm_real` for real forms.
    sup: Optional[SupNormEstimate] = None
        The sup-norm of `form` from an earlier call of :func:`sup_norm`, to
        check one form against several families. Computed if None.

    Returns
    -------
    report: InequalityReport
        With an exact real sup-norm the verdict is ``Pass`` or ``Fail``. With a
        complex lower bound the inequality is sufficient for ``Pass`` and
        otherwise the verdict is ``Inconclusive``, never ``Fail``.
    """
    spec = spec if isinstance(spec, FamilySpec) else FamilySpec.from_str(spec)
    if form.scalar_field not in spec.scalar_fields:
        raise DomainError(
            f"Error in check_inequality: {spec.label} is not a constant for "
            f"{form.scalar_field.value} forms"
        )
    if not tol > 0.0:
        raise DomainError(f"Error in check_inequality: tol={tol} must be positive")

    bound = log_constant(spec, form.m).value
    lhs = bh_lhs(form)
    if sup is None:
        sup = sup_norm(form, restarts, iters, seed, max_vertex_bits)
    elif sup.is_exact and form.scalar_field is not ScalarField.Real:
        raise DomainError(
            "Error in check_inequality: an exact sup-norm requires a real form"
        )

    if lhs == 0.0:
        ratio = 0.0
        verdict = Verdict.Pass
    else:
        ratio = lhs / sup.value if sup.value > 0.0 else math.inf
        if lhs <= bound * sup.value * (1.0 + tol):
            verdict = Verdict.Pass
        elif sup.is_exact:
            verdict = Verdict.Fail
            logger.warning(
                "%s: inequality fails, ratio %.17g > C_%d = %.17g",
                spec.label,
                ratio,
                form.m,
                bound,
            )
        else:
            verdict = Verdict.Inconclusive
            logger.info(
                "%s: inconclusive, estimated ratio %.17g > C_%d = %.17g",
                spec.label,
                ratio,
                form.m,
                bound,
            )

    return InequalityReport(
        spec=spec,
        m=form.m,
        N=form.N,
        scalar_field=form.scalar_field,
        lhs=lhs,
        sup_norm=sup.value,
        sup_is_exact=sup.is_exact,
        ratio=ratio,
        bound=bound,
        verdict=verdict,
    )


def random_form(
    m: int,
    N: int,
    scalar_field: ScalarField = ScalarField.Real,
    seed: int = 0,
    dist: Distribution = Distribution.SignUniform,
    index: int = 0,
    max_entries: int = MAX_ENTRIES,
) -> MultilinearForm:
    """A random form, reproducible from ``(seed, index)``

    The coefficients are drawn from ``numpy.random.default_rng([seed, index])``,
    so a sequence of forms can be generated in any order or in parallel.

    Parameters
    ----------
    m: int
        Degree, ``m >= 2``.
    N: int
        Dimension, ``N >= 1``.
    scalar_field: ScalarField = ScalarField.Real
        The scalar field.
    seed: int = 0
        Random seed, ``>= 0``.
    dist: Distribution = Distribution.SignUniform
        Coefficient distribution.
    index: int = 0
        Index of the form in a sequence, ``>= 0``.
    max_entries: int = MAX_ENTRIES
        Budget for ``N**m``.
    """
    m = require_int(m, 2, "m", "random_form")
    N = require_int(N, 1, "N", "random_form")
    seed = require_int(seed, 0, "seed", "random_form")
    index = require_int(index, 0, "index", "random_form")
    scalar_field = enum_from_str(ScalarField, scalar_field)
    dist = enum_from_str(Distribution, dist)
    check_entry_budget(m, N, max_entries)

    rng = np.random.default_rng([seed, index])
    shape = (N,) * m
    is_complex = scalar_field is ScalarField.Complex
    if dist is Distribution.SignUniform:
        if is_complex:
            coeffs = np.exp(2j * np.pi * rng.random(shape))
        else:
            coeffs = rng.choice(np.array([-1.0, 1.0]), size=shape)
    else:
        coeffs = rng.standard_normal(shape)
        if is_complex:
            coeffs = coeffs + 1j * rng.standard_normal(shape)
    return MultilinearForm(coeffs, scalar_field, max_entries)


@dataclass(frozen=True)
class LowerBoundResult:
    """Best ratio found by :func:`lower_bound_search`"""

    best_ratio: float
    """float: Largest ``bh_lhs / sup_norm`` found"""

    best_form: MultilinearForm
    """MultilinearForm: A form attaining :attr:`best_ratio`"""

    is_certified: bool
    """bool: True if sup-norms were exact, making :attr:`best_ratio` a lower
    bound of the optimal constant"""

    evaluations: int
    """int: Number of forms evaluated"""

    def to_dict(self):
        """Convert LowerBoundResult to a Python dict"""
        data = {
            "m": self.best_form.m,
            "N": self.best_form.N,
            "best_ratio": self.best_ratio,
            "is_certified": self.is_certified,
            "evaluations": self.evaluations,
        }
        to_dict(self.best_form.scalar_field, data, "field")
        to_dict(self.best_form, data, "best_form")
        return data


def lower_bound_search(
    m: int,
    N: int,
    scalar_field: ScalarField = ScalarField.Real,
    seed: int = 0,
    budget: int = 10**4,
    dist: Distribution = Distribution.SignUniform,
    restarts: int = 4,
    iters: int = 50,
    max_vertex_bits: int = MAX_VERTEX_BITS,
) -> LowerBoundResult:
    """Search for forms with a large ratio ``bh_lhs / sup_norm``

    Half of the `budget` samples random forms (form ``i`` from
    ``random_form(..., seed, index=i)``); the other half perturbs the best
    form so far with Gaussian noise and keeps improvements. For ``m == 2`` and
    ``N >= 2`` the Littlewood form is evaluated first.

    Parameters
    ----------
    m: int
        Degree, ``m >= 2``.
    N: int
        Dimension, ``N >= 1``.
    scalar_field: ScalarField = ScalarField.Real
        Real forms use exact sup-norms and require ``m * N <= max_vertex_bits``.
        Complex forms use sup-norm lower bounds, so their ratios are only
        estimates.
    seed: int = 0
        Random seed, ``>= 0``.
    budget: int = 10**4
        Number of forms to evaluate, ``>= 1``.
    dist: Distribution = Distribution.SignUniform
        Distribution of the random forms.
    restarts, iters:
        Passed to :func:`sup_norm_complex_lower`.
    max_vertex_bits: int = MAX_VERTEX_BITS
        Budget for ``m * N`` of exact real sup-norms.

    Returns
    -------
    result: LowerBoundResult
        The best ratio and form.
    """
    m = require_int(m, 2, "m", "lower_bound_search")
    N = require_int(N, 1, "N", "lower_bound_search")
    budget = require_int(budget, 1, "budget", "lower_bound_search")
    seed = require_int(seed, 0, "seed", "lower_bound_search")
    scalar_field = enum_from_str(ScalarField, scalar_field)
    is_real = scalar_field is ScalarField.Real
    if is_real and m * N > max_vertex_bits:
        raise ResourceError(
            f"Error in lower_bound_search: m*N={m * N} exceeds the vertex budget "
            f"{max_vertex_bits}"
        )

    def _ratio(form: MultilinearForm) -> float:
        lhs = bh_lhs(form)
        if lhs == 0.0:
            return 0.0
        if is_real:
            sup = sup_norm_real(form, max_vertex_bits)
        else:
            sup = sup_norm_complex_lower(form, restarts, iters, seed, max_vertex_bits)
        return lhs / sup.value

    best_form, best_ratio, evaluations = None, -1.0, 0
    candidates = []
    if m == 2 and N >= 2:
        candidates.append(littlewood_form(scalar_field, N))

    n_random = (max(budget - len(candidates), 0) + 1) // 2
    for i in range(n_random):
        candidates.append(random_form(m, N, scalar_field, seed, dist, index=i))

    for form in candidates[:budget]:
        ratio = _ratio(form)
        evaluations += 1
        if ratio > best_ratio:
            best_form, best_ratio = form, ratio

    rng = np.random.default_rng([seed, budget])
    shape = (N,) * m
    while evaluations < budget:
        noise = rng.standard_normal(shape)
        if not is_real:
            noise = noise + 1j * rng.standard_normal(shape)
        scale = 0.25 * float(np.abs(best_form.coeffs).max() or 1.0)
        form = MultilinearForm(best_form.coeffs + scale * noise, scalar_field)
        ratio = _ratio(form)
        evaluations += 1
        if ratio > best_ratio:
            best_form, best_ratio = form, ratio

    logger.info(
        "Lower bound search m=%d N=%d %s: best ratio %.17g after %d forms",
        m,
        N,
        scalar_field.value,
        best_ratio,
        evaluations,
    )
    return LowerBoundResult(
        best_ratio=best_ratio,
        best_form=best_form,
        is_certified=is_real,
        evaluations=evaluations,
    )
