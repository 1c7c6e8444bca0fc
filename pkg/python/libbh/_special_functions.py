"""ln Gamma, the Euler-Mascheroni constant, and the critical Khinchine exponent"""
import logging
import math
from typing import Optional, Union

import mpmath
import numpy as np
import scipy.optimize

from ._errors import DomainError, InternalError
from .parsing import boolean, integer, number, optional_from_dict, to_dict

logger = logging.getLogger(__name__)

EULER_GAMMA_DIGITS = "0.57721566490153286060651209008240243104215933593992"
"""str: The Euler-Mascheroni constant to 50 significant digits"""

_LANCZOS_G = 7.0
_LANCZOS_COEFFS = np.array(
    [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ]
)
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)

GAMMA_MIN_ARGUMENT = 1.4616321449683623
"""float: The positive argument at which Gamma attains its minimum on (0, inf)"""

DEFAULT_P0_BRACKET = (1.5, 1.9)
"""tuple[float, float]: Default bracket for :func:`find_p0`

The upper end stays below ``2 * GAMMA_MIN_ARGUMENT - 1``, where
``Gamma((p+1)/2)`` turns around; the bracket therefore excludes the second,
trivial solution ``p = 2`` of ``Gamma((p+1)/2) = sqrt(pi)/2``.
"""


class Precision:
    """Precision contract for numerical results

    The default (double precision) contract is the accuracy :func:`ln_gamma`
    guarantees on ``(0, 50]``. With ``extended=True``, special-function values
    are computed with mpmath at `dps` significant digits and returned as
    :class:`mpmath.mpf`.
    """

    def __init__(
        self,
        rel_tol: float = 1e-13,
        abs_tol: float = 1e-15,
        extended: bool = False,
        dps: int = 30,
    ):
        """
        .. rubric:: Constructor

        Parameters
        ----------
        rel_tol: float = 1e-13
            Relative error bound. Must be positive.
        abs_tol: float = 1e-15
            Absolute error bound. Must be positive.
        extended: bool = False
            If True, use extended precision arithmetic.
        dps: int = 30
            Significant decimal digits used in extended precision mode.
        """
        if not rel_tol > 0.0 or not abs_tol > 0.0:
            raise DomainError(
                "Error constructing Precision: rel_tol and abs_tol must be positive"
            )
        if dps < 15:
            raise DomainError(
                "Error constructing Precision: dps must be at least 15"
            )

        self.rel_tol = float(rel_tol)
        """float: Relative error bound"""

        self.abs_tol = float(abs_tol)
        """float: Absolute error bound"""

        self.extended = bool(extended)
        """bool: Use extended precision (mpmath) arithmetic"""

        self.dps = int(dps)
        """int: Significant decimal digits in extended precision mode"""

    def isclose(self, a: float, b: float) -> bool:
        """Compare two values against this precision contract"""
        return math.isclose(
            float(a), float(b), rel_tol=self.rel_tol, abs_tol=self.abs_tol
        )

    def to_dict(self):
        """Convert Precision to a Python dict"""
        data = {}
        to_dict(self.rel_tol, data, "rel_tol")
        to_dict(self.abs_tol, data, "abs_tol")
        to_dict(self.extended, data, "extended")
        to_dict(self.dps, data, "dps")
        return data

    @staticmethod
    def from_dict(data: dict):
        """Construct Precision from a Python dict"""
        return Precision(
            rel_tol=optional_from_dict(number, data, "rel_tol", default_value=1e-13),
            abs_tol=optional_from_dict(number, data, "abs_tol", default_value=1e-15),
            extended=optional_from_dict(boolean, data, "extended", default_value=False),
            dps=optional_from_dict(integer, data, "dps", default_value=30),
        )


DOUBLE_PRECISION = Precision()
"""Precision: The default double precision contract"""


def _lanczos_ln_gamma(x: np.ndarray) -> np.ndarray:
    # valid for x >= 0.5
    z = x - 1.0
    a = np.full_like(z, _LANCZOS_COEFFS[0])
    for k in range(1, len(_LANCZOS_COEFFS)):
        a = a + _LANCZOS_COEFFS[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_TWO_PI + (z + 0.5) * np.log(t) - t + np.log(a)


def ln_gamma(
    x: Union[float, np.ndarray],
    precision: Optional[Precision] = None,
) -> Union[float, np.ndarray, mpmath.mpf]:
    """Natural logarithm of the Gamma function for positive arguments

    Uses a Lanczos approximation (g=7, 9 terms) for ``x >= 1/2`` and the
    reflection formula ``Gamma(x) Gamma(1-x) = pi / sin(pi x)`` below. The
    relative error is below 1e-13 on ``(0, 50]``.

    Parameters
    ----------
    x: Union[float, numpy.ndarray]
        Positive, finite argument(s).
    precision: Optional[Precision] = None
        If ``precision.extended``, the value is computed with mpmath at
        ``precision.dps`` digits (scalar `x` only).

    Returns
    -------
    value: Union[float, numpy.ndarray, mpmath.mpf]
        ``ln Gamma(x)``, with the shape of `x`.
    """
    if precision is not None and precision.extended:
        if np.ndim(x) != 0:
            raise DomainError(
                "Error in ln_gamma: extended precision requires a scalar argument"
            )
        with mpmath.workdps(precision.dps):
            x_mp = mpmath.mpf(x)
            if not mpmath.isfinite(x_mp) or x_mp <= 0:
                raise DomainError(f"Error in ln_gamma: x={x} is not positive")
            return +mpmath.loggamma(x_mp)

    x_arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x_arr)) or not np.all(x_arr > 0.0):
        raise DomainError(
            f"Error in ln_gamma: argument must be positive and finite, got {x}"
        )

    flat = np.atleast_1d(x_arr)
    small = flat < 0.5
    value = np.empty_like(flat)
    value[~small] = _lanczos_ln_gamma(flat[~small])
    if np.any(small):
        xs = flat[small]
        value[small] = (
            math.log(math.pi)
            - np.log(np.sin(math.pi * xs))
            - _lanczos_ln_gamma(1.0 - xs)
        )
    if x_arr.ndim == 0:
        return float(value[0])
    return value.reshape(x_arr.shape)


def euler_gamma(precision: Optional[Precision] = None) -> Union[float, mpmath.mpf]:
    """The Euler-Mascheroni constant

    Returns the stored 50-digit literal :data:`EULER_GAMMA_DIGITS`, as a float
    (absolute error below 1e-16) or, with ``precision.extended``, as an
    :class:`mpmath.mpf` rounded to ``precision.dps`` digits.
    """
    if precision is not None and precision.extended:
        with mpmath.workdps(precision.dps):
            return +mpmath.mpf(EULER_GAMMA_DIGITS)
    return float(EULER_GAMMA_DIGITS)


def p0_residual(p: float) -> float:
    """The residual :math:`\\Gamma((p+1)/2) - \\sqrt{\\pi}/2` of the p0 equation"""
    return math.exp(ln_gamma(0.5 * (p + 1.0))) - 0.5 * math.sqrt(math.pi)


def find_p0(
    tol: float = 1e-12,
    bracket: tuple[float, float] = DEFAULT_P0_BRACKET,
    precision: Optional[Precision] = None,
) -> Union[float, mpmath.mpf]:
    """Find the critical Khinchine exponent p0

    p0 is the unique solution in ``(1, 2)`` of
    ``Gamma((p0 + 1)/2) = sqrt(pi)/2``, approximately 1.8474.

    Parameters
    ----------
    tol: float = 1e-12
        Requested bound on both the final bracket width and the residual
        ``|Gamma((p0+1)/2) - sqrt(pi)/2|``.
    bracket: tuple[float, float] = DEFAULT_P0_BRACKET
        Interval inside ``(1, 2)`` on which the residual changes sign.
    precision: Optional[Precision] = None
        If ``precision.extended``, refine the root with mpmath.

    Returns
    -------
    p0: Union[float, mpmath.mpf]
        The critical exponent.
    """
    if not tol > 0.0:
        raise DomainError(f"Error in find_p0: tol={tol} must be positive")
    a, b = float(bracket[0]), float(bracket[1])
    if not (1.0 < a < b < 2.0):
        raise DomainError(
            f"Error in find_p0: bracket {bracket} must satisfy 1 < a < b < 2"
        )
    fa, fb = p0_residual(a), p0_residual(b)
    if fa * fb > 0.0:
        raise InternalError(
            f"Error in find_p0: failed to bracket p0 on [{a}, {b}] "
            f"(residuals {fa}, {fb})"
        )

    p0, result = scipy.optimize.brentq(
        p0_residual, a, b, xtol=min(tol, 1e-13), maxiter=200, full_output=True
    )
    if not result.converged:
        raise InternalError(
            f"Error in find_p0: root search did not converge: {result}"
        )
    residual = abs(p0_residual(p0))
    if residual >= tol:
        raise InternalError(
            f"Error in find_p0: residual {residual} at p0={p0} exceeds tol={tol}"
        )
    logger.debug(
        "p0=%.17g residual=%.3g iterations=%d", p0, residual, result.iterations
    )

    if precision is not None and precision.extended:
        with mpmath.workdps(precision.dps):
            target = mpmath.sqrt(mpmath.pi) / 2
            return +mpmath.findroot(
                lambda p: mpmath.gamma((p + 1) / 2) - target,
                (mpmath.mpf(a), mpmath.mpf(b)),
                solver="illinois",
            )
    return p0
