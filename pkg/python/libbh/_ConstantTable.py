"""Bohnenblust-Hille constants in log space"""
import logging
import math
import threading
from typing import Iterator

import numpy as np

from ._errors import DomainError, require_int
from ._FamilySpec import Family, FamilySpec, LogValue
from ._khinchine import log_a_p

logger = logging.getLogger(__name__)

_LOG_TWO = math.log(2.0)
_LOG_QUEFFELEC_RATIO = math.log(2.0) - 0.5 * math.log(math.pi)

NON_DECREASING_TOL = 1e-12
"""float: Ratios :math:`D_n < 1 - \\text{NON_DECREASING_TOL}` are reported as
violations of non-decreasing constants"""


def _closed_form_log_constants(family: Family, m: np.ndarray) -> np.ndarray:
    m = m.astype(float)
    if family is Family.Original:
        return (m + 1.0) / (2.0 * m) * np.log(m) + 0.5 * (m - 1.0) * _LOG_TWO
    elif family is Family.DavieKaijser:
        return 0.5 * (m - 1.0) * _LOG_TWO
    elif family is Family.Queffelec:
        return (m - 1.0) * _LOG_QUEFFELEC_RATIO
    raise DomainError(f"Error: {family} is not a closed-form family")


def _base_log_constants(family: Family) -> np.ndarray:
    """ln C_m for m = 0..(last base case), with m = 0, 1 undefined (nan)"""
    if family is Family.RecursiveReal:
        return np.array([np.nan, np.nan, 0.5 * _LOG_TWO, 5.0 / 6.0 * _LOG_TWO])
    elif family is Family.RecursiveComplex:
        m = np.arange(2, 7, dtype=float)
        return np.concatenate([[np.nan, np.nan], (m - 1.0) * _LOG_QUEFFELEC_RATIO])
    raise DomainError(f"Error: {family} is not a recursive family")


class ConstantTable:
    """Dense, memoized table of :math:`\\ln C_m` for one constant family

    The table grows on demand. Recursive families are extended in chunks
    ``[S, 2S - 1)``, where ``S`` is the current size, so every dependency of a
    new entry (``m/2`` for even ``m``, ``(m-1)/2`` and ``(m+1)/2`` for odd
    ``m``) is already in the table; each chunk is evaluated with vectorized
    Khinchine constants. Extension is serialized by a lock; reads of an
    already-built range need no locking.
    """

    def __init__(self, spec: FamilySpec):
        """
        .. rubric:: Constructor

        Parameters
        ----------
        spec: FamilySpec
            The constant family.
        """
        self.spec = spec
        """FamilySpec: The constant family"""

        self._lock = threading.Lock()
        if spec.is_recursive:
            self._log_c = _base_log_constants(spec.family)
        else:
            self._log_c = np.array([np.nan, np.nan])

    @property
    def m_max(self) -> int:
        """int: Largest degree currently in the table"""
        return len(self._log_c) - 1

    def ensure(self, m_max: int):
        """Extend the table so that it holds :math:`\\ln C_m` for ``m <= m_max``"""
        if m_max <= self.m_max:
            return
        with self._lock:
            if m_max <= self.m_max:
                return
            logger.info(
                "Building %s constant table from m=%d to m=%d",
                self.spec.label,
                self.m_max + 1,
                m_max,
            )
            if self.spec.is_recursive:
                log_c = self._log_c
                while len(log_c) <= m_max:
                    size = len(log_c)
                    stop = min(2 * size - 1, m_max + 1)
                    chunk = self._recursive_chunk(log_c, np.arange(size, stop))
                    log_c = np.concatenate([log_c, chunk])
            else:
                m = np.arange(len(self._log_c), m_max + 1)
                log_c = np.concatenate(
                    [self._log_c, _closed_form_log_constants(self.spec.family, m)]
                )
            self._log_c = log_c

    def _recursive_chunk(self, log_c: np.ndarray, m: np.ndarray) -> np.ndarray:
        mode = self.spec.mode
        out = np.empty(len(m))

        is_even = m % 2 == 0
        me = m[is_even]
        if len(me):
            half = me // 2
            mef = me.astype(float)
            out[is_even] = log_c[half] - 0.5 * mef * log_a_p(
                2.0 * mef / (mef + 2.0), mode
            )

        mo = m[~is_even]
        if len(mo):
            lo = (mo - 1) // 2
            mof = mo.astype(float)
            lower = log_c[lo] - 0.5 * (mof + 1.0) * log_a_p(
                (2.0 * mof - 2.0) / (mof + 1.0), mode
            )
            upper = log_c[lo + 1] - 0.5 * (mof - 1.0) * log_a_p(
                (2.0 * mof + 2.0) / (mof + 3.0), mode
            )
            w_lower = (mof - 1.0) / (2.0 * mof)
            w_upper = (mof + 1.0) / (2.0 * mof)
            out[~is_even] = w_lower * lower + w_upper * upper
        return out

    def log_constants(self, m_lo: int, m_hi: int) -> np.ndarray:
        """:math:`\\ln C_m` for ``m_lo <= m <= m_hi`` (a copy)"""
        if m_lo < 2:
            raise DomainError(
                f"Error in ConstantTable.log_constants: m_lo={m_lo} < 2"
            )
        self.ensure(m_hi)
        return self._log_c[m_lo : m_hi + 1].copy()

    def log_ratios(self, n_lo: int, n_hi: int) -> np.ndarray:
        """:math:`\\ln D_n = \\ln C_{n+1} - \\ln C_n` for ``n_lo <= n <= n_hi``"""
        if n_lo < 2:
            raise DomainError(
                f"Error in ConstantTable.log_ratios: n_lo={n_lo} < 2"
            )
        self.ensure(n_hi + 1)
        return np.diff(self._log_c[n_lo : n_hi + 2])

    def __getitem__(self, m: int) -> float:
        m = require_int(m, 2, "m", "ConstantTable")
        self.ensure(m)
        return float(self._log_c[m])


_tables = {}
_tables_lock = threading.Lock()


def get_constant_table(spec: FamilySpec) -> ConstantTable:
    """The process-wide :class:`ConstantTable` for `spec`"""
    table = _tables.get(spec)
    if table is None:
        with _tables_lock:
            table = _tables.setdefault(spec, ConstantTable(spec))
    return table


def log_constant(spec: FamilySpec, m: int) -> LogValue:
    """:math:`\\ln C_m` for the constant family `spec`

    Parameters
    ----------
    spec: FamilySpec
        The constant family.
    m: int
        The degree, ``m >= 2``.

    Returns
    -------
    value: LogValue
        :math:`\\ln C_m`. Recursive families are memoized, so a full table up
        to ``M`` costs ``O(M)`` evaluations.
    """
    m = require_int(m, 2, "m", "log_constant")
    return LogValue(log_value=get_constant_table(spec)[m], m=m)


def constant_table(spec: FamilySpec, m_max: int) -> list[LogValue]:
    """:math:`\\ln C_m` for ``m = 2..m_max``"""
    m_max = require_int(m_max, 2, "m_max", "constant_table")
    values = get_constant_table(spec).log_constants(2, m_max)
    return [LogValue(log_value=float(v), m=m) for m, v in enumerate(values, start=2)]


def ratio(spec: FamilySpec, n: int) -> float:
    """The consecutive ratio :math:`D_n = C_{n+1} / C_n`, ``n >= 2``"""
    n = require_int(n, 2, "n", "ratio")
    return math.exp(float(get_constant_table(spec).log_ratios(n, n)[0]))


class RatioSeries:
    """The ratios :math:`D_n` for ``n = 2..n_max-1``

    Iterating yields ``(n, D_n)`` pairs. Entries with
    :math:`D_n < 1 - 10^{-12}` would contradict non-decreasing constants; they
    are collected in :attr:`violations` rather than raised.
    """

    def __init__(self, spec: FamilySpec, n: np.ndarray, ratios: np.ndarray):
        self.spec = spec
        """FamilySpec: The constant family"""

        self.n = n
        """numpy.ndarray[int]: Indices n"""

        self.ratios = ratios
        """numpy.ndarray[float]: :math:`D_n`"""

        bad = np.flatnonzero(ratios < 1.0 - NON_DECREASING_TOL)
        self.violations = [(int(n[i]), float(ratios[i])) for i in bad]
        """list[tuple[int, float]]: ``(n, D_n)`` entries below 1"""

        if self.violations:
            logger.warning(
                "%s: %d ratios D_n < 1 (first at n=%d, D_n=%.17g)",
                spec.label,
                len(self.violations),
                *self.violations[0],
            )

    def __len__(self) -> int:
        return len(self.n)

    def __iter__(self) -> Iterator[tuple[int, float]]:
        for n, d in zip(self.n, self.ratios):
            yield int(n), float(d)

    def __getitem__(self, i: int) -> tuple[int, float]:
        return int(self.n[i]), float(self.ratios[i])


def ratio_series(spec: FamilySpec, n_max: int) -> RatioSeries:
    """The ratios :math:`D_n` for ``n = 2..n_max-1``, ``n_max >= 3``"""
    n_max = require_int(n_max, 3, "n_max", "ratio_series")
    log_d = get_constant_table(spec).log_ratios(2, n_max - 1)
    return RatioSeries(spec=spec, n=np.arange(2, n_max), ratios=np.exp(log_d))
