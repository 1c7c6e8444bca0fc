import enum
import math
from dataclasses import dataclass
from typing import Optional

from ._errors import DomainError
from ._khinchine import KhinchineMode
from .parsing import (
    enum_from_str,
    optional_enum_from_dict,
    required_enum_from_dict,
    to_dict,
)


class Family(enum.Enum):
    """Bohnenblust-Hille constant families

    - ``Original``: :math:`m^{(m+1)/(2m)} 2^{(m-1)/2}`
    - ``DavieKaijser``: :math:`2^{(m-1)/2}`
    - ``Queffelec``: :math:`(2/\\sqrt{\\pi})^{m-1}`
    - ``RecursiveReal``: the recursion for real scalars, base cases
      :math:`C_2 = \\sqrt{2}`, :math:`C_3 = 2^{5/6}`
    - ``RecursiveComplex``: the recursion for complex scalars, base cases
      :math:`(2/\\sqrt{\\pi})^{m-1}` for ``m`` in 2..6
    """

    Original = "original"
    DavieKaijser = "davie-kaijser"
    Queffelec = "queffelec"
    RecursiveReal = "recursive-real"
    RecursiveComplex = "recursive-complex"


class ScalarField(enum.Enum):
    """The scalar field of a multilinear form"""

    Real = "real"
    Complex = "complex"


_VALID_FIELDS = {
    Family.Original: frozenset([ScalarField.Real, ScalarField.Complex]),
    Family.DavieKaijser: frozenset([ScalarField.Real, ScalarField.Complex]),
    Family.Queffelec: frozenset([ScalarField.Complex]),
    Family.RecursiveReal: frozenset([ScalarField.Real]),
    Family.RecursiveComplex: frozenset([ScalarField.Complex]),
}


@dataclass(frozen=True)
class FamilySpec:
    """Identifies a constant family and, for recursive families, the Khinchine mode

    The mode of a closed-form family is ignored and normalized to
    ``KhinchineMode.GammaFormula``, so that equal families compare (and hash)
    equal.
    """

    family: Family
    """Family: The constant family"""

    mode: KhinchineMode = KhinchineMode.GammaFormula
    """KhinchineMode: Evaluation rule for :math:`A_p` in the recursions"""

    def __post_init__(self):
        object.__setattr__(self, "family", enum_from_str(Family, self.family))
        object.__setattr__(self, "mode", enum_from_str(KhinchineMode, self.mode))
        if not self.is_recursive:
            object.__setattr__(self, "mode", KhinchineMode.GammaFormula)

    @property
    def is_recursive(self) -> bool:
        """True for the recursive real and complex families"""
        return self.family in (Family.RecursiveReal, Family.RecursiveComplex)

    @property
    def scalar_fields(self) -> frozenset:
        """frozenset[ScalarField]: Scalar fields this family is a valid constant for"""
        return _VALID_FIELDS[self.family]

    @property
    def label(self) -> str:
        """A short name, for example ``"recursive-real/gamma"`` or ``"queffelec"``"""
        if self.is_recursive:
            return f"{self.family.value}/{self.mode.value}"
        return self.family.value

    @staticmethod
    def from_str(family: str, mode: Optional[str] = None):
        """Construct from names, for example ``FamilySpec.from_str("recursive-real")``

        A label of the form ``"family/mode"`` is also accepted.
        """
        if mode is None and "/" in family:
            family, mode = family.split("/", 1)
        return FamilySpec(
            family=enum_from_str(Family, family),
            mode=enum_from_str(KhinchineMode, mode or KhinchineMode.GammaFormula),
        )

    def to_dict(self):
        """Convert FamilySpec to a Python dict"""
        data = {}
        to_dict(self.family, data, "family")
        to_dict(self.mode, data, "mode")
        return data

    @staticmethod
    def from_dict(data: dict):
        """Construct FamilySpec from a Python dict"""
        return FamilySpec(
            family=required_enum_from_dict(Family, data, "family"),
            mode=optional_enum_from_dict(
                KhinchineMode, data, "mode", default_value=KhinchineMode.GammaFormula
            ),
        )


@dataclass(frozen=True)
class LogValue:
    """A constant :math:`C_m` stored as its natural logarithm"""

    log_value: float
    """float: :math:`\\ln C_m`"""

    m: int
    """int: The degree"""

    def __post_init__(self):
        if not math.isfinite(self.log_value):
            raise DomainError(
                f"Error constructing LogValue: ln C_{self.m}={self.log_value} "
                "is not finite"
            )
        if self.m < 1:
            raise DomainError(f"Error constructing LogValue: m={self.m} < 1")

    @property
    def value(self) -> float:
        """float: :math:`C_m`, or ``inf`` if it overflows a double"""
        try:
            return math.exp(self.log_value)
        except OverflowError:
            return math.inf

    @property
    def log10(self) -> float:
        """float: :math:`\\log_{10} C_m`"""
        return self.log_value / math.log(10.0)

    def to_dict(self):
        """Convert LogValue to a Python dict"""
        return {"m": self.m, "log_value": self.log_value, "value": self.value}
