import logging
import math
from typing import Optional

import numpy as np

from ._asymptotics import (
    LimitKind,
    ReductionResult,
    ScanResult,
    check_contraction,
    check_square_root_reduction,
    claim_residual_maxima,
    envelope,
    limit_target,
)
from ._ConstantTable import NON_DECREASING_TOL, get_constant_table
from ._errors import DomainError, HypothesisError, InternalError, require_int
from ._FamilySpec import FamilySpec
from .parsing import to_dict

logger = logging.getLogger(__name__)

CONJECTURED_RATE = 2.0**0.125
"""float: The previously conjectured asymptotic ratio :math:`2^{1/8}`"""

MIN_REPORT_N_MAX = 2**10
"""int: Smallest accepted ``n_max`` for :func:`convergence_report`"""


def _scan_summary(result) -> Optional[dict]:
    if result is None:
        return None
    return {"index": result.index, "succeeded": result.succeeded}


class ConvergenceReport:
    """Summary of the tail of :math:`D_n = C_{n+1}/C_n` for one constant family

    The tail is the last dyadic block ``n_max//2 <= n <= n_max``. Under the
    model :math:`\\ln D_n = c/n + o(1/n)`, :attr:`fitted_c` is the ordinary
    least-squares slope of :math:`\\ln D_n` against :math:`1/n` through the
    origin, :math:`\\sum (\\ln D_n)/n \\,/ \\sum 1/n^2` over the block. The
    model is a diagnostic; it is checked against :attr:`target_c`, the value it
    forces through :math:`\\prod_{j=n}^{2n-1} D_j = C_{2n}/C_n`.

    The report also carries the parameters ``K``, ``L``, ``C`` and ``s`` of
    the contraction, square-root reduction and envelope checks, and their
    results on ``(n_start, n_max]``.
    """

    def __init__(
        self,
        spec: FamilySpec,
        n_max: int,
        tail_sup: float,
        tail_argmax: int,
        fitted_c: float,
        claim_residuals: dict,
        K: float = 1.5,
        L: float = 1.5,
        C: float = 1.5,
        s: int = 6,
        contraction: Optional[ScanResult] = None,
        reduction: Optional[ReductionResult] = None,
        envelope_scan: Optional[ScanResult] = None,
    ):
        """
        .. rubric:: Constructor

        Parameters
        ----------
        spec: FamilySpec
            The constant family.
        n_max: int
            Last index of the tail block.
        tail_sup: float
            Maximum of :math:`D_n` over the tail block.
        tail_argmax: int
            The ``n`` where `tail_sup` is attained.
        fitted_c: float
            The fitted rate constant.
        claim_residuals: dict
            Maximum claim residuals, see :func:`~libbh.claim_residual_maxima`.
        K: float = 1.5
            Bound of the contraction check.
        L: float = 1.5
            Bound of the square-root reduction check.
        C: float = 1.5
            Upper bound of :math:`C_{2n}/C_n` used by the envelope check.
        s: int = 6
            Number of halvings of the envelope check.
        contraction: Optional[ScanResult] = None
            Result of :func:`~libbh.check_contraction`, None if its hypothesis
            failed.
        reduction: Optional[ReductionResult] = None
            Result of :func:`~libbh.check_square_root_reduction`, None if its
            hypothesis failed.
        envelope_scan: Optional[ScanResult] = None
            Result of :func:`~libbh.envelope`.
        """
        if not math.isfinite(fitted_c):
            raise InternalError(
                f"Error constructing ConvergenceReport: fitted_c={fitted_c}"
            )
        if tail_sup < 1.0 - NON_DECREASING_TOL:
            raise HypothesisError(
                f"Error constructing ConvergenceReport: {spec.label} has "
                f"D_n={tail_sup!r} < 1 throughout the tail",
                witness=tail_argmax,
                value=tail_sup,
            )

        self.spec = spec
        """FamilySpec: The constant family"""

        self.n_max = n_max
        """int: Last index of the tail block"""

        self.tail_sup = tail_sup
        """float: Maximum of :math:`D_n` over ``n_max//2 <= n <= n_max``"""

        self.tail_argmax = tail_argmax
        """int: The ``n`` where :attr:`tail_sup` is attained"""

        self.fitted_c = fitted_c
        """float: Fitted ``c`` in :math:`\\ln D_n \\approx c/n`"""

        self.target_c = math.log(limit_target(LimitKind.EvenRatio)) / math.log(2.0)
        """float: :math:`\\ln(e^{1-\\gamma/2}/\\sqrt{2}) / \\ln 2`"""

        self.claim_residuals = claim_residuals
        """dict[str, float]: Maximum claim residuals over
        ``n_max//4 <= n <= n_max//2``"""

        self.K = K
        """float: Bound of the contraction check"""

        self.L = L
        """float: Bound of the square-root reduction check"""

        self.C = C
        """float: Upper bound of :math:`C_{2n}/C_n` for the envelope check"""

        self.s = s
        """int: Number of halvings of the envelope check"""

        self.contraction = contraction
        """Optional[ScanResult]: Contraction of :math:`D_n < K`"""

        self.reduction = reduction
        """Optional[ReductionResult]: Reduction of :math:`D_n < L` below
        :math:`\\sqrt{L}`"""

        self.envelope_scan = envelope_scan
        """Optional[ScanResult]: Tail below :math:`C^{2^{-s}}`"""

    @property
    def beats_conjectured_rate(self) -> bool:
        """bool: True if :attr:`tail_sup` is below :math:`2^{1/8}`"""
        return self.tail_sup < CONJECTURED_RATE

    @property
    def relative_c_error(self) -> float:
        """float: :math:`|c_{fit} - c_{target}| / c_{target}`"""
        return abs(self.fitted_c - self.target_c) / self.target_c

    def to_dict(self):
        """Convert ConvergenceReport to a Python dict"""
        data = {"family": self.spec.family.value}
        to_dict(self.spec.mode, data, "mode")
        data["n_max"] = self.n_max
        data["tail_sup"] = self.tail_sup
        data["tail_argmax"] = self.tail_argmax
        data["fitted_c"] = self.fitted_c
        data["target_c"] = self.target_c
        data["beats_conjectured_rate"] = self.beats_conjectured_rate
        data["claim_residuals"] = dict(self.claim_residuals)
        data["claim_parameters"] = {"K": self.K, "L": self.L, "C": self.C, "s": self.s}
        for key, result in (
            ("contraction", self.contraction),
            ("reduction", self.reduction),
            ("envelope", self.envelope_scan),
        ):
            to_dict(_scan_summary(result), data, key, write_null=True)
        return data


def fit_rate_constant(n: np.ndarray, log_d: np.ndarray) -> float:
    """Least-squares ``c`` in :math:`\\ln D_n \\approx c/n`, without intercept"""
    x = 1.0 / np.asarray(n, dtype=float)
    (c,), *_ = np.linalg.lstsq(x[:, np.newaxis], np.asarray(log_d), rcond=None)
    return float(c)


def convergence_report(
    spec: FamilySpec,
    n_max: int,
    K: float = 1.5,
    L: float = 1.5,
    C: float = 1.5,
    s: int = 6,
    n_start: int = 100,
) -> ConvergenceReport:
    """Summarize the tail of the ratios :math:`D_n` up to `n_max`

    Parameters
    ----------
    spec: FamilySpec
        The constant family.
    n_max: int
        Last index of the tail block, ``n_max >= 2**10``.
    K: float = 1.5
        Bound of the contraction check, see :func:`~libbh.check_contraction`.
    L: float = 1.5
        Bound of the square-root reduction check, see
        :func:`~libbh.check_square_root_reduction`.
    C: float = 1.5
        Upper bound of :math:`C_{2n}/C_n` for :func:`~libbh.envelope`.
    s: int = 6
        Number of halvings for :func:`~libbh.envelope`.
    n_start: int = 100
        The checks scan ``n_start < n <= n_max``.

    Returns
    -------
    report: ConvergenceReport
        The tail report. If the hypothesis of the contraction or reduction
        check fails, a warning is logged and that result is None.
    """
    n_max = require_int(n_max, MIN_REPORT_N_MAX, "n_max", "convergence_report")
    n_start = require_int(n_start, 1, "n_start", "convergence_report")
    s = require_int(s, 0, "s", "convergence_report")
    if n_start >= n_max // 2:
        raise DomainError(
            f"Error in convergence_report: n_start={n_start} must be < n_max//2"
        )
    n_lo = n_max // 2
    log_d = get_constant_table(spec).log_ratios(n_lo, n_max)
    n = np.arange(n_lo, n_max + 1)

    contraction = reduction = None
    try:
        contraction = check_contraction(spec, K, n_start, n_max)
        reduction = check_square_root_reduction(spec, L, n_start, n_max)
    except HypothesisError as e:
        logger.warning("%s: %s", spec.label, e)

    i = int(np.argmax(log_d))
    report = ConvergenceReport(
        spec=spec,
        n_max=n_max,
        tail_sup=math.exp(float(log_d[i])),
        tail_argmax=int(n[i]),
        fitted_c=fit_rate_constant(n, log_d),
        claim_residuals=claim_residual_maxima(spec, max(n_max // 4, 3), n_lo),
        K=K,
        L=L,
        C=C,
        s=s,
        contraction=contraction,
        reduction=reduction,
        envelope_scan=envelope(spec, s, C, n_max, n_start),
    )
    logger.info(
        "%s: tail_sup=%.17g fitted_c=%.6g target_c=%.6g",
        spec.label,
        report.tail_sup,
        report.fitted_c,
        report.target_c,
    )
    return report
