import logging
import pathlib
from typing import Optional, Sequence, Union

import numpy as np

from ._errors import DomainError, ParsingError, ResourceError
from ._FamilySpec import ScalarField
from .parsing import (
    enum_from_str,
    required_array_from_dict,
    required_enum_from_dict,
    required_from_dict,
    to_dict,
)

logger = logging.getLogger(__name__)

MAX_ENTRIES = 10**6
"""int: Default budget for the number of coefficients of a form"""

FORM_LAYOUT = "row-major"
"""str: Entry order of the form text format, lexicographic on ``(i_1,...,i_m)``"""


def check_entry_budget(m: int, N: int, max_entries: int = MAX_ENTRIES):
    """Raise :class:`ResourceError` if ``N**m > max_entries``"""
    if N**m > max_entries:
        raise ResourceError(
            f"Error: a form with m={m}, N={N} has {N**m} coefficients, "
            f"exceeding the budget of {max_entries}"
        )


class MultilinearForm:
    """An m-linear form on :math:`\\mathbb{K}^N`, given by its coefficient tensor

    The entry ``coeffs[i_1, ..., i_m]`` is :math:`U(e_{i_1}, \\ldots, e_{i_m})`,
    so that

    .. math::

        U(z_1, \\ldots, z_m) = \\sum_{i_1,\\ldots,i_m}
            U(e_{i_1}, \\ldots, e_{i_m}) z_{1,i_1} \\cdots z_{m,i_m}.

    Forms are immutable.
    """

    def __init__(
        self,
        coeffs: np.ndarray,
        scalar_field: Optional[ScalarField] = None,
        max_entries: int = MAX_ENTRIES,
    ):
        """
        .. rubric:: Constructor

        Parameters
        ----------
        coeffs: array_like
            Coefficient tensor of shape ``(N,) * m``, with ``m >= 2``,
            ``N >= 1`` and finite entries.
        scalar_field: Optional[ScalarField] = None
            The scalar field. By default, ``Complex`` for complex-valued
            `coeffs` and ``Real`` otherwise. A ``Real`` form must have real
            coefficients.
        max_entries: int = MAX_ENTRIES
            Budget for ``N**m``.
        """
        coeffs = np.asarray(coeffs)
        if coeffs.ndim < 2:
            raise DomainError(
                f"Error constructing MultilinearForm: degree m={coeffs.ndim} < 2"
            )
        N = coeffs.shape[0]
        if N < 1 or any(n != N for n in coeffs.shape):
            raise DomainError(
                "Error constructing MultilinearForm: coefficient tensor must have "
                f"shape (N,)*m with N >= 1, got {coeffs.shape}"
            )
        check_entry_budget(coeffs.ndim, N, max_entries)

        if scalar_field is None:
            is_complex = np.iscomplexobj(coeffs)
            scalar_field = ScalarField.Complex if is_complex else ScalarField.Real
        scalar_field = enum_from_str(ScalarField, scalar_field)

        if scalar_field is ScalarField.Real:
            if np.iscomplexobj(coeffs):
                if np.any(coeffs.imag != 0):
                    raise DomainError(
                        "Error constructing MultilinearForm: a real form must "
                        "have real coefficients"
                    )
                coeffs = coeffs.real
            coeffs = np.array(coeffs, dtype=np.float64)
        else:
            coeffs = np.array(coeffs, dtype=np.complex128)

        if not np.all(np.isfinite(coeffs)):
            raise DomainError(
                "Error constructing MultilinearForm: coefficients must be finite"
            )
        coeffs.flags.writeable = False

        self._coeffs = coeffs
        self._scalar_field = scalar_field

    @property
    def coeffs(self) -> np.ndarray:
        """numpy.ndarray: The (read-only) coefficient tensor"""
        return self._coeffs

    @property
    def scalar_field(self) -> ScalarField:
        """ScalarField: The scalar field"""
        return self._scalar_field

    @property
    def m(self) -> int:
        """int: The degree, i.e. the number of argument slots"""
        return self._coeffs.ndim

    @property
    def N(self) -> int:
        """int: The dimension of each slot"""
        return self._coeffs.shape[0]

    @property
    def is_zero(self) -> bool:
        """bool: True if all coefficients vanish"""
        return not np.any(self._coeffs)

    @property
    def has_real_coefficients(self) -> bool:
        """bool: True if all coefficients are real"""
        return not np.iscomplexobj(self._coeffs) or not np.any(self._coeffs.imag)

    def _check_points(self, z: Sequence[np.ndarray]) -> list[np.ndarray]:
        if len(z) != self.m:
            raise DomainError(
                f"Error in MultilinearForm: expected {self.m} points, got {len(z)}"
            )
        points = [np.asarray(zk) for zk in z]
        for zk in points:
            if zk.shape != (self.N,):
                raise DomainError(
                    f"Error in MultilinearForm: points must have shape ({self.N},), "
                    f"got {zk.shape}"
                )
        return points

    def evaluate(self, *z: np.ndarray) -> Union[float, complex]:
        """Evaluate :math:`U(z_1, \\ldots, z_m)`

        Parameters
        ----------
        *z: numpy.ndarray
            One vector of length ``N`` per slot.

        Returns
        -------
        value: Union[float, complex]
            The value of the form.
        """
        points = self._check_points(z)
        value = self._coeffs
        for zk in points:
            value = np.tensordot(zk, value, axes=([0], [0]))
        return value.item()

    def partial(self, z: Sequence[np.ndarray], slot: int) -> np.ndarray:
        """Contract all slots except `slot`

        Returns ``w`` such that :math:`U(z_1, \\ldots, z_m) = \\sum_i w_i z_{slot,
        i}`; the entry ``z[slot]`` is ignored.
        """
        points = self._check_points(z)
        value = np.moveaxis(self._coeffs, slot, -1)
        for k, zk in enumerate(points):
            if k != slot:
                value = np.tensordot(zk, value, axes=([0], [0]))
        return value

    def scaled(self, t: float):
        """The form :math:`t U`"""
        return MultilinearForm(
            self._coeffs * t, self._scalar_field, max_entries=self._coeffs.size
        )

    def permuted(self, slot: int, perm: Sequence[int]):
        """The form with the basis of `slot` permuted, ``e_i -> e_{perm[i]}``"""
        perm = np.asarray(perm)
        if sorted(perm.tolist()) != list(range(self.N)):
            raise DomainError(
                f"Error in MultilinearForm.permuted: {perm} is not a permutation"
            )
        return MultilinearForm(
            np.take(self._coeffs, perm, axis=slot),
            self._scalar_field,
            max_entries=self._coeffs.size,
        )

    def __repr__(self):
        return (
            f"MultilinearForm(m={self.m}, N={self.N}, "
            f"scalar_field={self._scalar_field.value})"
        )

    def to_dict(self):
        """Convert MultilinearForm to a Python dict

        Complex coefficients are written as ``coeffs_re`` and ``coeffs_im``.
        """
        data = {"m": self.m, "N": self.N}
        to_dict(self._scalar_field, data, "scalar_field")
        if self._scalar_field is ScalarField.Complex:
            data["coeffs_re"] = self._coeffs.real.tolist()
            data["coeffs_im"] = self._coeffs.imag.tolist()
        else:
            data["coeffs"] = self._coeffs.tolist()
        return data

    @staticmethod
    def from_dict(data: dict, max_entries: int = MAX_ENTRIES):
        """Construct MultilinearForm from a Python dict"""
        scalar_field = required_enum_from_dict(ScalarField, data, "scalar_field")
        if scalar_field is ScalarField.Complex:
            coeffs = required_array_from_dict(
                data, "coeffs_re", dtype=float
            ) + 1j * required_array_from_dict(data, "coeffs_im", dtype=float)
        else:
            coeffs = required_array_from_dict(data, "coeffs", dtype=float)
        form = MultilinearForm(coeffs, scalar_field, max_entries=max_entries)
        for key, value in (("m", form.m), ("N", form.N)):
            if key in data and required_from_dict(int, data, key) != value:
                raise ParsingError(
                    f"Error parsing MultilinearForm: '{key}' does not match "
                    "the coefficient shape"
                )
        return form


def littlewood_form(
    scalar_field: ScalarField = ScalarField.Real, N: int = 2
) -> MultilinearForm:
    """The bilinear form :math:`z_{11} z_{21} + z_{11} z_{22} + z_{12} z_{21} -
    z_{12} z_{22}`

    The coefficients ``[[1, 1], [1, -1]]`` are embedded into the top-left block
    of an ``N x N`` tensor, ``N >= 2``.
    """
    if N < 2:
        raise DomainError(f"Error in littlewood_form: N={N} < 2")
    coeffs = np.zeros((N, N))
    coeffs[:2, :2] = [[1.0, 1.0], [1.0, -1.0]]
    return MultilinearForm(coeffs, scalar_field)


def _format_entry(value, scalar_field: ScalarField) -> str:
    if scalar_field is ScalarField.Complex:
        return f"{float(value.real)!r} {float(value.imag)!r}"
    return repr(float(value))


def write_form(form: MultilinearForm, path: Union[str, pathlib.Path]):
    """Write a form in the text tensor format

    The format is a header of ``key value`` lines (``m``, ``N``, ``field``,
    ``layout row-major``) followed by one entry per line in row-major order of
    ``(i_1, ..., i_m)``; complex entries are written as ``re im``. Lines
    starting with ``#`` are comments.
    """
    lines = [
        f"m {form.m}",
        f"N {form.N}",
        f"field {form.scalar_field.value}",
        f"layout {FORM_LAYOUT}",
    ]
    lines += [_format_entry(v, form.scalar_field) for v in form.coeffs.ravel()]
    pathlib.Path(path).write_text("\n".join(lines) + "\n")


def _parse_header(lines: list[str], path) -> dict:
    header = {}
    for key in ("m", "N", "field", "layout"):
        if not lines:
            raise ParsingError(f"Error reading form {path}: missing '{key}' line")
        words = lines.pop(0).split()
        if len(words) != 2 or words[0] != key:
            raise ParsingError(
                f"Error reading form {path}: expected '{key} <value>', "
                f"got '{' '.join(words)}'"
            )
        header[key] = words[1]
    if header["layout"] != FORM_LAYOUT:
        raise ParsingError(
            f"Error reading form {path}: unsupported layout '{header['layout']}'"
        )
    return header


def read_form(
    path: Union[str, pathlib.Path], max_entries: int = MAX_ENTRIES
) -> MultilinearForm:
    """Read a form written by :func:`write_form`"""
    path = pathlib.Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ParsingError(f"Error reading form {path}: {e}") from e
    lines = [
        line.strip()
        for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    header = _parse_header(lines, path)
    try:
        m = int(header["m"])
        N = int(header["N"])
        scalar_field = enum_from_str(ScalarField, header["field"])
    except ValueError as e:
        raise ParsingError(f"Error reading form {path}: {e}") from e
    if m < 2 or N < 1:
        raise ParsingError(f"Error reading form {path}: invalid m={m}, N={N}")
    check_entry_budget(m, N, max_entries)

    n_words = 2 if scalar_field is ScalarField.Complex else 1
    if len(lines) != N**m:
        raise ParsingError(
            f"Error reading form {path}: expected {N**m} entries, got {len(lines)}"
        )
    try:
        values = np.array([[float(w) for w in line.split()] for line in lines])
    except ValueError as e:
        raise ParsingError(f"Error reading form {path}: {e}") from e
    if values.shape != (N**m, n_words):
        raise ParsingError(
            f"Error reading form {path}: each entry must have {n_words} number(s)"
        )

    if scalar_field is ScalarField.Complex:
        coeffs = values[:, 0] + 1j * values[:, 1]
    else:
        coeffs = values[:, 0]
    logger.debug("Read %d-linear form on N=%d from %s", m, N, path)
    return MultilinearForm(coeffs.reshape((N,) * m), scalar_field, max_entries)
