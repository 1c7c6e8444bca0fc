"""Gamma-function limits and numerical checks of lim D_n = 1"""
import contextlib
import enum
import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import mpmath
import numpy as np

from ._ConstantTable import NON_DECREASING_TOL, get_constant_table
from ._errors import DomainError, HypothesisError, require_int
from ._FamilySpec import FamilySpec
from ._special_functions import Precision, euler_gamma, ln_gamma
from .parsing import to_dict

logger = logging.getLogger(__name__)

_LOG_NON_DECREASING = math.log1p(-NON_DECREASING_TOL)

STABLE_TAIL_FRACTION = 0.5
"""float: Default share of the scanned range the stable tail must exceed for a
scan to succeed"""


class LimitKind(enum.Enum):
    """The Gamma-function limits entering the asymptotics of the recursions

    - ``HalfShift``: :math:`(\\Gamma(1/2-x)/\\Gamma(1/2))^{1/x} \\to 4e^{\\gamma}`
      as :math:`x \\to 0^+`
    - ``ThreeHalfShift``: :math:`(\\Gamma(3/2-x)/\\Gamma(3/2))^{1/x} \\to
      4e^{\\gamma-2}`
    - ``SequencePower``: :math:`(\\Gamma((3m+2)/(2m+4))/\\Gamma(3/2))^m \\to
      16e^{2\\gamma-4}`
    - ``KhinchinePrefactor``: :math:`A_{2m/(m+2)}^{m/2} \\to
      \\sqrt{2}/e^{1-\\gamma/2}`
    - ``EvenRatio``: :math:`(A_{2m/(m+2)}^{m/2})^{-1} \\to
      e^{1-\\gamma/2}/\\sqrt{2} \\approx 1.4402`, the limit of
      :math:`C_{2n}/C_n`
    - ``OddRatio``: :math:`(A_{(2m-2)/(m+1)}^{(m+1)/2})^{-(m-1)/(2m)} \\to
      e^{1/2-\\gamma/4}/2^{1/4} \\approx 1.2001`
    """

    HalfShift = "half-shift"
    ThreeHalfShift = "three-half-shift"
    SequencePower = "sequence-power"
    KhinchinePrefactor = "khinchine-prefactor"
    EvenRatio = "even-ratio"
    OddRatio = "odd-ratio"


_EXPRESSIONS = {
    LimitKind.HalfShift: "4*exp(gamma)",
    LimitKind.ThreeHalfShift: "4*exp(gamma-2)",
    LimitKind.SequencePower: "16*exp(2*gamma-4)",
    LimitKind.KhinchinePrefactor: "sqrt(2)/exp(1-gamma/2)",
    LimitKind.EvenRatio: "exp(1-gamma/2)/sqrt(2)",
    LimitKind.OddRatio: "exp(1/2-gamma/4)/2^(1/4)",
}


class _Arithmetic:
    """Elementary functions in double precision or, if extended, with mpmath"""

    def __init__(self, precision: Optional[Precision]):
        self.precision = precision
        self.extended = precision is not None and precision.extended
        lib = mpmath if self.extended else math
        self.exp = lib.exp
        self.log = lib.log
        self.num = mpmath.mpf if self.extended else float

    def context(self):
        if self.extended:
            return mpmath.workdps(self.precision.dps)
        return contextlib.nullcontext()

    def ln_gamma(self, x):
        return ln_gamma(x, self.precision)

    def log_pi(self):
        return mpmath.log(mpmath.pi) if self.extended else math.log(math.pi)


def _log_limit_target(kind: LimitKind, ar: _Arithmetic):
    g = euler_gamma(ar.precision)
    log2 = ar.log(ar.num(2))
    if kind is LimitKind.HalfShift:
        return g + 2 * log2
    elif kind is LimitKind.ThreeHalfShift:
        return g - 2 + 2 * log2
    elif kind is LimitKind.SequencePower:
        return 2 * g - 4 + 4 * log2
    elif kind is LimitKind.KhinchinePrefactor:
        return log2 / 2 - (1 - g / 2)
    elif kind is LimitKind.EvenRatio:
        return 1 - g / 2 - log2 / 2
    elif kind is LimitKind.OddRatio:
        return (1 - g / 2 - log2 / 2) / 2
    raise DomainError(f"Error in limit_target: unknown kind {kind}")


def limit_target(
    kind: LimitKind, precision: Optional[Precision] = None
) -> Union[float, mpmath.mpf]:
    """Closed-form value of a Gamma-function limit

    Parameters
    ----------
    kind: LimitKind
        Which limit.
    precision: Optional[Precision] = None
        With ``precision.extended`` the value is an :class:`mpmath.mpf`.

    Returns
    -------
    value: Union[float, mpmath.mpf]
        The limit, built from :func:`~libbh.euler_gamma`.
    """
    ar = _Arithmetic(precision)
    with ar.context():
        return ar.exp(_log_limit_target(kind, ar))


@dataclass(frozen=True)
class LimitTarget:
    """A Gamma-function limit and its closed-form value"""

    kind: LimitKind
    """LimitKind: Which limit"""

    closed_form_value: float
    """float: The value of the limit"""

    @property
    def expression(self) -> str:
        """str: The closed form, in terms of the Euler-Mascheroni constant"""
        return _EXPRESSIONS[self.kind]

    @staticmethod
    def make(kind: LimitKind):
        return LimitTarget(kind=kind, closed_form_value=float(limit_target(kind)))

    def to_dict(self):
        """Convert LimitTarget to a Python dict"""
        data = {}
        to_dict(self.kind, data, "kind")
        data["expression"] = self.expression
        data["closed_form_value"] = self.closed_form_value
        return data


def limit_targets() -> list[LimitTarget]:
    """All limit targets, in :class:`LimitKind` order"""
    return [LimitTarget.make(kind) for kind in LimitKind]


def _require_shift(x, kind: LimitKind) -> float:
    try:
        x = float(x)
    except (TypeError, ValueError):
        raise DomainError(f"Error in gamma_limit_value: x={x} is not a number")
    if not (0.0 < x <= 0.4):
        raise DomainError(
            f"Error in gamma_limit_value: {kind.value} requires x in (0, 0.4], "
            f"got x={x}"
        )
    return x


def _log_a_p_power(ar: _Arithmetic, p, power):
    """ln(A_p^power) with A_p from the Gamma formula"""
    log_a = ar.log(ar.num(2)) / 2 + (ar.ln_gamma((p + 1) / 2) - ar.log_pi() / 2) / p
    return power * log_a


def _log_odd_ratio_factors(m: int, ar: _Arithmetic):
    mm = ar.num(m)
    first = _log_a_p_power(ar, (2 * mm - 2) / (mm + 1), (mm + 1) / 2)
    second = _log_a_p_power(ar, (2 * mm + 2) / (mm + 3), (mm - 1) / 2)
    return -first * (mm - 1) / (2 * mm), -second * (mm + 1) / (2 * mm)


def _log_gamma_limit_value(kind: LimitKind, param, ar: _Arithmetic):
    if kind in (LimitKind.HalfShift, LimitKind.ThreeHalfShift):
        x = ar.num(_require_shift(param, kind))
        a = ar.num(1) / 2 if kind is LimitKind.HalfShift else ar.num(3) / 2
        return (ar.ln_gamma(a - x) - ar.ln_gamma(a)) / x

    if kind is LimitKind.OddRatio:
        m = require_int(param, 4, "m", "gamma_limit_value")
        return _log_odd_ratio_factors(m, ar)[0]

    m = require_int(param, 2, "m", "gamma_limit_value")
    mm = ar.num(m)
    if kind is LimitKind.SequencePower:
        three_half = ar.num(3) / 2
        shifted = (3 * mm + 2) / (2 * mm + 4)
        return mm * (ar.ln_gamma(shifted) - ar.ln_gamma(three_half))
    elif kind in (LimitKind.KhinchinePrefactor, LimitKind.EvenRatio):
        value = _log_a_p_power(ar, 2 * mm / (mm + 2), mm / 2)
        return value if kind is LimitKind.KhinchinePrefactor else -value
    raise DomainError(f"Error in gamma_limit_value: unknown kind {kind}")


def gamma_limit_value(
    kind: LimitKind,
    param: Union[int, float],
    precision: Optional[Precision] = None,
) -> Union[float, mpmath.mpf]:
    """Evaluate the pre-limit expression of a Gamma-function limit

    Parameters
    ----------
    kind: LimitKind
        Which limit.
    param: Union[int, float]
        The shift ``x`` in ``(0, 0.4]`` for ``HalfShift`` and ``ThreeHalfShift``;
        otherwise the integer ``m``, with ``m >= 2`` (``m >= 4`` for
        ``OddRatio``, so that ``(2m-2)/(m+1) > 1``).
    precision: Optional[Precision] = None
        With ``precision.extended`` the expression is evaluated with mpmath.

    Returns
    -------
    value: Union[float, mpmath.mpf]
        The expression, computed from ``ln Gamma`` in log space. It tends to
        ``limit_target(kind)`` as ``x -> 0`` or ``m -> infinity``.
    """
    kind = LimitKind(kind)
    ar = _Arithmetic(precision)
    with ar.context():
        return ar.exp(_log_gamma_limit_value(kind, param, ar))


def odd_ratio_factors(
    m: int, precision: Optional[Precision] = None
) -> tuple[Union[float, mpmath.mpf], Union[float, mpmath.mpf]]:
    """Both factors of the odd-degree recursion step

    Returns :math:`(A_{(2m-2)/(m+1)}^{(m+1)/2})^{-(m-1)/(2m)}` and
    :math:`(A_{(2m+2)/(m+3)}^{(m-1)/2})^{-(m+1)/(2m)}`, for ``m >= 4``. Both
    tend to ``limit_target(LimitKind.OddRatio)``.
    """
    m = require_int(m, 4, "m", "odd_ratio_factors")
    ar = _Arithmetic(precision)
    with ar.context():
        first, second = _log_odd_ratio_factors(m, ar)
        return ar.exp(first), ar.exp(second)


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def even_ratio(spec: FamilySpec, n: int) -> float:
    """:math:`C_{2n}/C_n`, for ``n >= 2``

    Tends to ``limit_target(LimitKind.EvenRatio)`` for the recursive families.
    """
    n = require_int(n, 2, "n", "even_ratio")
    table = get_constant_table(spec)
    return _exp(table[2 * n] - table[n])


def odd_ratio(spec: FamilySpec, n: int) -> float:
    """:math:`C_{2n+1} / (C_n^{n/(2n+1)} C_{n+1}^{(n+1)/(2n+1)})`, for ``n >= 2``

    Tends to ``limit_target(LimitKind.EvenRatio)`` for the recursive families.
    """
    n = require_int(n, 2, "n", "odd_ratio")
    table = get_constant_table(spec)
    w = 2 * n + 1
    return _exp(table[w] - (n * table[n] + (n + 1) * table[n + 1]) / w)


def even_ratio_bound(spec: FamilySpec, n_end: int) -> tuple[float, int]:
    """The empirical bound C of :math:`C_{2n}/C_n` on ``2 <= n <= n_end``

    Also checks :math:`D_n \\leq C_{2n}/C_n` on the same range, which holds
    whenever the constants are non-decreasing.

    Returns
    -------
    (bound, witness): tuple[float, int]
        The maximum of :math:`C_{2n}/C_n` and the ``n`` where it is attained.
    """
    n_end = require_int(n_end, 2, "n_end", "even_ratio_bound")
    table = get_constant_table(spec)
    log_c = table.log_constants(2, 2 * n_end)
    n = np.arange(2, n_end + 1)
    log_even = log_c[2 * n - 2] - log_c[n - 2]
    log_d = table.log_ratios(2, n_end)

    bad = np.flatnonzero(log_d > log_even + NON_DECREASING_TOL)
    if len(bad):
        i = bad[0]
        raise HypothesisError(
            f"Error in even_ratio_bound: D_n > C_2n/C_n at n={n[i]}",
            witness=int(n[i]),
            value=_exp(float(log_d[i])),
        )
    i = int(np.argmax(log_even))
    return _exp(float(log_even[i])), int(n[i])


def _log_ratio_lookup(spec: FamilySpec, n_hi: int) -> np.ndarray:
    """Array ``ld`` with ``ld[n] = ln D_n`` for ``2 <= n <= n_hi``"""
    log_d = get_constant_table(spec).log_ratios(2, n_hi)
    return np.concatenate([[np.nan, np.nan], log_d])


def _claim1_residuals(ld: np.ndarray, n: np.ndarray):
    r_odd = np.abs(np.expm1(ld[2 * n - 1] - 0.5 * ld[n - 1]))
    r_even = np.abs(np.expm1(ld[2 * n] - 0.5 * ld[n]))
    return r_odd, r_even


def _ratio_identity_residuals(ld: np.ndarray, n: np.ndarray):
    r_even = np.abs(np.expm1(ld[2 * n - 1] - (n - 1) / (2 * n - 1) * ld[n - 1]))
    r_odd = np.abs(np.expm1(ld[2 * n] - (n + 1) / (2 * n + 1) * ld[n]))
    return r_even, r_odd


def check_claim1(spec: FamilySpec, n: int) -> tuple[float, float]:
    """Residuals of :math:`D_{2n-1} \\sim \\sqrt{D_{n-1}}` and
    :math:`D_{2n} \\sim \\sqrt{D_n}`

    Parameters
    ----------
    spec: FamilySpec
        The constant family.
    n: int
        Index, ``n >= 3``.

    Returns
    -------
    (r_odd, r_even): tuple[float, float]
        :math:`|D_{2n-1}/\\sqrt{D_{n-1}} - 1|` and
        :math:`|D_{2n}/\\sqrt{D_n} - 1|`. Both tend to 0 for the recursive
        families; for ``DavieKaijser`` both equal :math:`2^{1/4} - 1`.
    """
    n = require_int(n, 3, "n", "check_claim1")
    ld = _log_ratio_lookup(spec, 2 * n)
    r_odd, r_even = _claim1_residuals(ld, np.array([n]))
    return float(r_odd[0]), float(r_even[0])


def check_ratio_identities(spec: FamilySpec, n: int) -> tuple[float, float]:
    """Residuals of :math:`D_{2n-1} \\sim D_{n-1}^{(n-1)/(2n-1)}` and
    :math:`D_{2n} \\sim D_n^{(n+1)/(2n+1)}`

    Returns
    -------
    (r_even, r_odd): tuple[float, float]
        The residuals for :math:`C_{2n}/C_{2n-1}` and
        :math:`C_{2n+1}/C_{2n}`, for ``n >= 3``.
    """
    n = require_int(n, 3, "n", "check_ratio_identities")
    ld = _log_ratio_lookup(spec, 2 * n)
    r_even, r_odd = _ratio_identity_residuals(ld, np.array([n]))
    return float(r_even[0]), float(r_odd[0])


def claim_residual_maxima(spec: FamilySpec, n_lo: int, n_hi: int) -> dict:
    """Maximum claim and ratio-identity residuals over ``n_lo <= n <= n_hi``

    Also includes the maximum of :math:`|C_{2n}/C_n - L|`, where ``L`` is
    ``limit_target(LimitKind.EvenRatio)``.
    """
    n_lo = require_int(n_lo, 3, "n_lo", "claim_residual_maxima")
    n_hi = require_int(n_hi, n_lo, "n_hi", "claim_residual_maxima")
    ld = _log_ratio_lookup(spec, 2 * n_hi)
    n = np.arange(n_lo, n_hi + 1)
    claim1_odd, claim1_even = _claim1_residuals(ld, n)
    identity_even, identity_odd = _ratio_identity_residuals(ld, n)

    log_c = get_constant_table(spec).log_constants(2, 2 * n_hi)
    even = np.exp(log_c[2 * n - 2] - log_c[n - 2])
    return {
        "claim1_odd": float(claim1_odd.max()),
        "claim1_even": float(claim1_even.max()),
        "ratio_identity_even": float(identity_even.max()),
        "ratio_identity_odd": float(identity_odd.max()),
        "even_ratio": float(
            np.abs(even - limit_target(LimitKind.EvenRatio)).max()
        ),
    }


@dataclass(frozen=True)
class ScanResult:
    """Result of scanning a ratio tail against a threshold

    :attr:`index` is the least scanned ``n`` such that
    :math:`D_k <` :attr:`threshold` for every scanned ``k`` in
    ``(index, n_end]``. The scan succeeds if that tail is longer than
    :attr:`tail_fraction` of the scanned range ``n_end - n_start``.
    """

    spec: FamilySpec
    """FamilySpec: The constant family"""

    threshold: float
    """float: The threshold on :math:`D_n`"""

    n_start: int
    """int: Scanned indices are ``n_start < n <= n_end``"""

    n_end: int
    """int: Last scanned index"""

    index: int
    """int: Start of the stable tail (``m_1`` or ``n_0``)"""

    succeeded: bool
    """bool: True if a stable tail was found"""

    witness: Optional[int] = None
    """Optional[int]: The last scanned ``n`` with :math:`D_n \\geq` threshold"""

    witness_value: Optional[float] = None
    """Optional[float]: :math:`D_n` at :attr:`witness`"""

    tail_max: Optional[float] = None
    """Optional[float]: Maximum :math:`D_n` over ``(index, n_end]``"""

    tail_fraction: float = STABLE_TAIL_FRACTION
    """float: Share of the scanned range the stable tail must exceed"""

    def to_dict(self):
        """Convert ScanResult to a Python dict"""
        data = {"family": self.spec.label}
        for key in (
            "threshold",
            "n_start",
            "n_end",
            "index",
            "succeeded",
            "witness",
            "witness_value",
            "tail_max",
            "tail_fraction",
        ):
            to_dict(getattr(self, key), data, key, write_null=True)
        return data


def _check_scan_range(n_start, n_end, caller):
    n_start = require_int(n_start, 1, "n_start", caller)
    n_end = require_int(n_end, n_start + 1, "n_end", caller)
    return n_start, n_end


def _check_tail_fraction(tail_fraction, caller):
    if not 0.0 < tail_fraction < 1.0:
        raise DomainError(
            f"Error in {caller}: tail_fraction={tail_fraction} must lie in (0, 1)"
        )
    return float(tail_fraction)


def _scan_tail(
    spec: FamilySpec,
    threshold: float,
    n_start: int,
    n_end: int,
    tail_fraction: float = STABLE_TAIL_FRACTION,
) -> ScanResult:
    """Find the stable tail of :math:`D_n <` `threshold` on ``(n_start, n_end]``

    The scan succeeds if the tail ``(index, n_end]`` is longer than
    `tail_fraction` of ``n_end - n_start``.
    """
    first = max(n_start + 1, 2)
    log_d = get_constant_table(spec).log_ratios(first, n_end)
    above = np.flatnonzero(log_d >= math.log(threshold))

    witness = witness_value = None
    index = first - 1
    if len(above):
        i = int(above[-1])
        witness = first + i
        witness_value = math.exp(float(log_d[i]))
        index = witness

    tail = log_d[index - first + 1 :]
    tail_max = math.exp(float(tail.max())) if len(tail) else None
    succeeded = n_end - index > tail_fraction * (n_end - n_start)
    logger.debug(
        "%s: D_n < %.17g on (%d, %d], succeeded=%s",
        spec.label,
        threshold,
        index,
        n_end,
        succeeded,
    )
    return ScanResult(
        spec=spec,
        threshold=threshold,
        n_start=n_start,
        n_end=n_end,
        index=index,
        succeeded=succeeded,
        witness=witness,
        witness_value=witness_value,
        tail_max=tail_max,
        tail_fraction=tail_fraction,
    )


def check_contraction(
    spec: FamilySpec,
    K: float,
    n_start: int,
    n_end: int,
    tail_fraction: float = STABLE_TAIL_FRACTION,
) -> ScanResult:
    """Check that a bound :math:`D_n < K` contracts to :math:`D_n < K^{5/8}`

    Parameters
    ----------
    spec: FamilySpec
        The constant family.
    K: float
        The bound, ``K > 1``. The hypothesis :math:`1 \\leq D_n < K` is checked
        for every scanned ``n``.
    n_start: int
        Scan ``n_start < n <= n_end``.
    n_end: int
        Last scanned index.
    tail_fraction: float = STABLE_TAIL_FRACTION
        The contraction succeeds if the tail below :math:`K^{5/8}` is longer
        than this share of ``n_end - n_start``, ``0 < tail_fraction < 1``.

    Returns
    -------
    result: ScanResult
        :attr:`ScanResult.index` is the contracted index ``m_1``.

    Raises
    ------
    HypothesisError
        If :math:`D_n \\geq K` or :math:`D_n < 1 - 10^{-12}` for a scanned
        ``n``; the first such ``n`` is the witness.
    """
    if not K > 1.0:
        raise DomainError(f"Error in check_contraction: K={K} must be > 1")
    n_start, n_end = _check_scan_range(n_start, n_end, "check_contraction")
    tail_fraction = _check_tail_fraction(tail_fraction, "check_contraction")

    first = max(n_start + 1, 2)
    log_d = get_constant_table(spec).log_ratios(first, n_end)
    bad = np.flatnonzero((log_d >= math.log(K)) | (log_d < _LOG_NON_DECREASING))
    if len(bad):
        i = int(bad[0])
        value = math.exp(float(log_d[i]))
        raise HypothesisError(
            f"Error in check_contraction: hypothesis 1 <= D_n < {K} fails "
            f"at n={first + i} (D_n={value!r})",
            witness=first + i,
            value=value,
        )
    return _scan_tail(spec, K**0.625, n_start, n_end, tail_fraction)


@dataclass(frozen=True)
class ReductionResult:
    """Two chained contractions, reducing a bound ``L`` below :math:`\\sqrt{L}`"""

    first: ScanResult
    """ScanResult: Contraction from ``L`` to :math:`L^{5/8}`"""

    second: Optional[ScanResult]
    """Optional[ScanResult]: Contraction from :math:`L^{5/8}` to
    :math:`L^{25/64}`, or None if the first failed"""

    bound: float
    """float: :math:`\\sqrt{L}`"""

    @property
    def succeeded(self) -> bool:
        """bool: True if :math:`D_n < \\sqrt{L}` beyond :attr:`index`"""
        return (
            self.second is not None
            and self.second.succeeded
            and (self.second.tail_max is None or self.second.tail_max < self.bound)
        )

    @property
    def index(self) -> int:
        """int: ``m_2``, the start of the tail below :math:`\\sqrt{L}`"""
        return self.second.index if self.second is not None else self.first.index

    def to_dict(self):
        """Convert ReductionResult to a Python dict"""
        data = {}
        to_dict(self.first, data, "first")
        to_dict(self.second, data, "second", write_null=True)
        data["bound"] = self.bound
        data["index"] = self.index
        data["succeeded"] = self.succeeded
        return data


def check_square_root_reduction(
    spec: FamilySpec,
    L: float,
    n_start: int,
    n_end: int,
    tail_fraction: float = STABLE_TAIL_FRACTION,
) -> ReductionResult:
    """Apply :func:`check_contraction` twice, from ``L`` and then :math:`L^{5/8}`

    Since :math:`(5/8)^2 < 1/2`, success shows :math:`D_n < \\sqrt{L}` for all
    scanned ``n`` beyond the second index.

    `tail_fraction` is passed to both contractions.
    """
    if not L > 1.0:
        raise DomainError(f"Error in check_square_root_reduction: L={L} must be > 1")
    first = check_contraction(spec, L, n_start, n_end, tail_fraction)
    second = None
    if first.succeeded:
        second = check_contraction(spec, L**0.625, first.index, n_end, tail_fraction)
    return ReductionResult(first=first, second=second, bound=math.sqrt(L))


def envelope(
    spec: FamilySpec,
    s: int,
    C: float,
    n_end: int,
    n_start: int = 1,
    tail_fraction: float = STABLE_TAIL_FRACTION,
) -> ScanResult:
    """Find ``n_0`` with :math:`D_n < C^{2^{-s}}` for all scanned ``n > n_0``

    Parameters
    ----------
    spec: FamilySpec
        The constant family.
    s: int
        Number of halvings, ``s >= 0``.
    C: float
        An upper bound of :math:`C_{2n}/C_n`, ``C > 1``. If it is not above
        the scanned maximum (see :func:`even_ratio_bound`) a warning is logged.
    n_end: int
        Last scanned index.
    n_start: int = 1
        Scan ``n_start < n <= n_end``.
    tail_fraction: float = STABLE_TAIL_FRACTION
        Share of ``n_end - n_start`` the stable tail must exceed,
        ``0 < tail_fraction < 1``.

    Returns
    -------
    result: ScanResult
        :attr:`ScanResult.index` is ``n_0``. On failure the witness is the last
        scanned ``n`` above the threshold.
    """
    s = require_int(s, 0, "s", "envelope")
    if not C > 1.0:
        raise DomainError(f"Error in envelope: C={C} must be > 1")
    n_start, n_end = _check_scan_range(n_start, n_end, "envelope")
    tail_fraction = _check_tail_fraction(tail_fraction, "envelope")

    bound, witness = even_ratio_bound(spec, max(n_end // 2, 2))
    if bound >= C:
        logger.warning(
            "%s: C=%.17g does not bound C_2n/C_n (%.17g at n=%d)",
            spec.label,
            C,
            bound,
            witness,
        )
    return _scan_tail(spec, C ** (2.0**-s), n_start, n_end, tail_fraction)


def threshold_index(
    spec: FamilySpec,
    threshold: float,
    n_max: int,
    tail_fraction: float = STABLE_TAIL_FRACTION,
) -> ScanResult:
    """Find the least ``n_0`` with :math:`D_n <` `threshold` on ``(n_0, n_max]``

    See :class:`ScanResult` for `tail_fraction`.
    """
    if not threshold > 1.0:
        raise DomainError(
            f"Error in threshold_index: threshold={threshold} must be > 1"
        )
    n_max = require_int(n_max, 3, "n_max", "threshold_index")
    tail_fraction = _check_tail_fraction(tail_fraction, "threshold_index")
    return _scan_tail(spec, threshold, 1, n_max, tail_fraction)


def dyadic_block_sups(spec: FamilySpec, k_lo: int, k_hi: int) -> np.ndarray:
    """Maximum of :math:`D_n` over each block :math:`2^k \\leq n < 2^{k+1}`

    Returns an array of length ``k_hi - k_lo + 1``, for ``1 <= k_lo <= k_hi``.
    """
    k_lo = require_int(k_lo, 1, "k_lo", "dyadic_block_sups")
    k_hi = require_int(k_hi, k_lo, "k_hi", "dyadic_block_sups")
    log_d = get_constant_table(spec).log_ratios(2, 2 ** (k_hi + 1) - 1)
    sups = [log_d[2**k - 2 : 2 ** (k + 1) - 2].max() for k in range(k_lo, k_hi + 1)]
    return np.exp(np.array(sups))
