"""Khinchine constants A_p"""
import enum
import logging
import math
import threading
from typing import Union

import numpy as np

from ._errors import DomainError
from ._special_functions import find_p0, ln_gamma

logger = logging.getLogger(__name__)

_HALF_LOG_PI = 0.5 * math.log(math.pi)
_LOG_TWO = math.log(2.0)

_p0_lock = threading.Lock()
_p0_value = None


class KhinchineMode(enum.Enum):
    """Evaluation rule for the Khinchine constants :math:`A_p`

    - ``GammaFormula``: :math:`A_p = \\sqrt{2} (\\Gamma((p+1)/2)/\\sqrt{\\pi})^{1/p}`
      for every ``p`` in ``(1, 2]``.
    - ``HaagerupPiecewise``: :math:`A_p = 2^{1/2 - 1/p}` for ``p <= p0`` and the
      Gamma formula for ``p >= p0``.
    """

    GammaFormula = "gamma"
    HaagerupPiecewise = "haagerup"


def critical_exponent() -> float:
    """The critical exponent p0, resolved once per process

    Equal to ``find_p0(1e-12)``; safe to call from multiple threads.
    """
    global _p0_value
    if _p0_value is None:
        with _p0_lock:
            if _p0_value is None:
                _p0_value = find_p0(1e-12)
                logger.debug("Resolved p0=%.17g", _p0_value)
    return _p0_value


def _validate_p(p: np.ndarray, caller: str):
    if not np.all(np.isfinite(p)) or not np.all((p > 1.0) & (p <= 2.0)):
        raise DomainError(f"Error in {caller}: p must lie in (1, 2], got {p}")


def _log_gamma_formula(p: np.ndarray) -> np.ndarray:
    value = 0.5 * _LOG_TWO + (ln_gamma(0.5 * (p + 1.0)) - _HALF_LOG_PI) / p
    return np.where(p == 2.0, 0.0, value)


def log_a_p(
    p: Union[float, np.ndarray],
    mode: KhinchineMode = KhinchineMode.GammaFormula,
) -> Union[float, np.ndarray]:
    """Natural logarithm of the Khinchine constant :math:`A_p`

    Vectorized over `p`; see :func:`a_p`.
    """
    p_arr = np.asarray(p, dtype=float)
    _validate_p(p_arr, "log_a_p")

    value = _log_gamma_formula(p_arr)
    if mode is KhinchineMode.HaagerupPiecewise:
        p0 = critical_exponent()
        value = np.where(p_arr <= p0, (0.5 - 1.0 / p_arr) * _LOG_TWO, value)
    elif mode is not KhinchineMode.GammaFormula:
        raise DomainError(f"Error in log_a_p: unknown mode {mode}")

    if p_arr.ndim == 0:
        return float(value)
    return value


def a_p(
    p: Union[float, np.ndarray],
    mode: KhinchineMode = KhinchineMode.GammaFormula,
) -> Union[float, np.ndarray]:
    """The Khinchine constant :math:`A_p` for ``1 < p <= 2``

    Parameters
    ----------
    p: Union[float, numpy.ndarray]
        Exponent(s) in ``(1, 2]``.
    mode: KhinchineMode = KhinchineMode.GammaFormula
        Evaluation rule. Both rules give :math:`A_2 = 1` and agree for
        ``p >= p0``.

    Returns
    -------
    value: Union[float, numpy.ndarray]
        :math:`A_p`, in ``(0, 1]``.
    """
    value = np.exp(log_a_p(p, mode))
    if np.ndim(value) == 0:
        return float(value)
    return value
