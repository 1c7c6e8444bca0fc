import enum
import os
import pathlib
from typing import Optional

from ._errors import DomainError, require_int
from ._FamilySpec import Family, FamilySpec, ScalarField
from ._khinchine import KhinchineMode
from ._verifier import Distribution
from .parsing import (
    boolean,
    enum_from_str,
    integer,
    number,
    optional_enum_from_dict,
    optional_from_dict,
    required_enum_from_dict,
    to_dict,
)

OUTPUT_DIR_ENV = "LIBBH_OUTPUT_DIR"
"""str: Environment variable naming the default output directory"""


class Command(enum.Enum):
    """Commands of the ``libbh`` command-line program"""

    Constants = "constants"
    Ratios = "ratios"
    Limits = "limits"
    Claims = "claims"
    Verify = "verify"
    P0 = "p0"
    Report = "report"


class OutputFormat(enum.Enum):
    """Output formats: machine-readable CSV and JSON lines, or a text table"""

    CSV = "csv"
    JSONLines = "jsonl"
    Table = "table"


_EXTENSIONS = {
    OutputFormat.CSV: "csv",
    OutputFormat.JSONLines: "jsonl",
    OutputFormat.Table: "txt",
}

_DEFAULT_FAMILIES = [Family.RecursiveReal, Family.RecursiveComplex]
_DEFAULT_MODES = [KhinchineMode.GammaFormula, KhinchineMode.HaagerupPiecewise]


def _enum_list(enum_type, values, default):
    if values is None:
        return list(default)
    if isinstance(values, (str, enum.Enum)):
        values = [values]
    items = []
    for value in values:
        if isinstance(value, str):
            parts = [x.strip() for x in value.split(",") if x.strip()]
        else:
            parts = [value]
        for part in parts:
            member = enum_from_str(enum_type, part)
            if member not in items:
                items.append(member)
    return items


class RunConfig:
    """Settings for one run of the ``libbh`` command-line program

    Every setting has a default, so ``RunConfig(command=Command.Constants)`` is
    a complete configuration. Integer and tolerance settings are validated on
    construction.
    """

    def __init__(
        self,
        command: Command,
        families: Optional[list] = None,
        modes: Optional[list] = None,
        m_max: int = 16,
        n_max: int = 2**10,
        seed: int = 0,
        p0_tol: float = 1e-12,
        claim_tol: float = 1e-3,
        inequality_tol: float = 1e-9,
        extended_precision: bool = False,
        K: float = 1.5,
        C: float = 1.5,
        s_max: int = 6,
        n_start: int = 100,
        n_end: int = 10**5,
        claim_n: int = 10**4,
        m: int = 2,
        N: int = 2,
        field: ScalarField = ScalarField.Real,
        trials: int = 200,
        dist: Distribution = Distribution.SignUniform,
        include_littlewood: bool = False,
        form_path: Optional[str] = None,
        search: bool = False,
        restarts: int = 16,
        iters: int = 200,
        budget: int = 10**4,
        output_format: OutputFormat = OutputFormat.CSV,
        output_path: Optional[str] = None,
    ):
        """
        .. rubric:: Constructor

        Parameters
        ----------
        command: Command
            The command to run.
        families: Optional[list[Family]] = None
            Constant families; default ``[recursive-real, recursive-complex]``.
            Names and comma-separated lists are accepted.
        modes: Optional[list[KhinchineMode]] = None
            Khinchine modes for the recursive families; default both, reported
            side by side.
        m_max: int = 16
            Largest degree for ``constants``.
        n_max: int = 2**10
            Ratios ``D_n`` for ``n < n_max`` for ``ratios``, and the tail end
            for ``report``.
        seed: int = 0
            Random seed for ``verify``.
        p0_tol: float = 1e-12
            Tolerance of the p0 root search.
        claim_tol: float = 1e-3
            Tolerance of the limit and claim residual checks.
        inequality_tol: float = 1e-9
            Relative tolerance of inequality checks.
        extended_precision: bool = False
            Use extended precision for ``limits`` and ``p0``.
        K: float = 1.5
            Bound of the contraction checks.
        C: float = 1.5
            Bound of :math:`C_{2n}/C_n` for the envelope checks.
        s_max: int = 6
            Envelope checks use ``s = 0..s_max``.
        n_start: int = 100
            Start of the contraction scan.
        n_end: int = 10**5
            End of the claim scans.
        claim_n: int = 10**4
            Index of the claim residual checks.
        m: int = 2
            Degree of the forms for ``verify``.
        N: int = 2
            Dimension of the forms for ``verify``.
        field: ScalarField = ScalarField.Real
            Scalar field of the forms for ``verify``.
        trials: int = 200
            Number of random forms for ``verify``.
        dist: Distribution = Distribution.SignUniform
            Distribution of the random forms.
        include_littlewood: bool = False
            Also check the Littlewood form.
        form_path: Optional[str] = None
            Also check the form in this file.
        search: bool = False
            Also run a lower bound search.
        restarts: int = 16
            Starts of the complex sup-norm search.
        iters: int = 200
            Sweeps per start of the complex sup-norm search.
        budget: int = 10**4
            Number of forms evaluated by the lower bound search.
        output_format: OutputFormat = OutputFormat.CSV
            Output format.
        output_path: Optional[str] = None
            Output file. If None, ``$LIBBH_OUTPUT_DIR/<command>.<ext>`` if that
            variable is set, else standard output.
        """
        self.command = enum_from_str(Command, command)
        self.families = _enum_list(Family, families, _DEFAULT_FAMILIES)
        self.modes = _enum_list(KhinchineMode, modes, _DEFAULT_MODES)
        self.m_max = m_max
        self.n_max = n_max
        self.seed = seed
        self.p0_tol = p0_tol
        self.claim_tol = claim_tol
        self.inequality_tol = inequality_tol
        self.extended_precision = extended_precision
        self.K = K
        self.C = C
        self.s_max = s_max
        self.n_start = n_start
        self.n_end = n_end
        self.claim_n = claim_n
        self.m = m
        self.N = N
        self.field = enum_from_str(ScalarField, field)
        self.trials = trials
        self.dist = enum_from_str(Distribution, dist)
        self.include_littlewood = include_littlewood
        self.form_path = form_path
        self.search = search
        self.restarts = restarts
        self.iters = iters
        self.budget = budget
        self.output_format = enum_from_str(OutputFormat, output_format)
        self.output_path = output_path
        self._validate()

    def _validate(self):
        if not self.families or not self.modes:
            raise DomainError("Error in RunConfig: no families or no modes selected")
        for name in ("extended_precision", "include_littlewood", "search"):
            try:
                setattr(self, name, boolean(getattr(self, name)))
            except TypeError as e:
                raise DomainError(f"Error in RunConfig: {name}: {e}") from e
        for name in ("p0_tol", "claim_tol", "inequality_tol", "K", "C"):
            try:
                setattr(self, name, number(getattr(self, name)))
            except TypeError as e:
                raise DomainError(f"Error in RunConfig: {name}: {e}") from e
        for name in ("p0_tol", "claim_tol", "inequality_tol"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"Error in RunConfig: {name} must be positive")
        for name in ("K", "C"):
            if not getattr(self, name) > 1.0:
                raise DomainError(f"Error in RunConfig: {name} must be > 1")
        minimums = {
            "m_max": 2,
            "n_max": 3,
            "seed": 0,
            "s_max": 0,
            "n_start": 1,
            "n_end": 2,
            "claim_n": 3,
            "m": 2,
            "N": 1,
            "trials": 0,
            "restarts": 1,
            "iters": 1,
            "budget": 1,
        }
        for name, minimum in minimums.items():
            setattr(
                self, name, require_int(getattr(self, name), minimum, name, "RunConfig")
            )
        if self.n_end <= self.n_start:
            raise DomainError("Error in RunConfig: n_end must be > n_start")

    def family_specs(self) -> list[FamilySpec]:
        """Every selected family, paired with every mode if it is recursive"""
        specs = []
        for family in self.families:
            for mode in self.modes:
                spec = FamilySpec(family=family, mode=mode)
                if spec not in specs:
                    specs.append(spec)
        return specs

    def resolve_output_path(self) -> Optional[pathlib.Path]:
        """The output file, or None for standard output"""
        if self.output_path is not None:
            return pathlib.Path(self.output_path)
        output_dir = os.environ.get(OUTPUT_DIR_ENV)
        if output_dir:
            ext = _EXTENSIONS[self.output_format]
            return pathlib.Path(output_dir) / f"{self.command.value}.{ext}"
        return None

    def to_dict(self):
        """Convert RunConfig to a Python dict"""
        data = {}
        to_dict(self.command, data, "command")
        data["families"] = [x.value for x in self.families]
        data["modes"] = [x.value for x in self.modes]
        for key in (
            "m_max",
            "n_max",
            "seed",
            "p0_tol",
            "claim_tol",
            "inequality_tol",
            "extended_precision",
            "K",
            "C",
            "s_max",
            "n_start",
            "n_end",
            "claim_n",
            "m",
            "N",
            "field",
            "trials",
            "dist",
            "include_littlewood",
            "form_path",
            "search",
            "restarts",
            "iters",
            "budget",
            "output_format",
            "output_path",
        ):
            to_dict(getattr(self, key), data, key)
        return data

    @staticmethod
    def from_dict(data: dict):
        """Construct RunConfig from a Python dict

        Missing settings take their defaults; see the constructor.
        """
        defaults = RunConfig(command=Command.Constants)
        kwargs = {}
        for key in (
            "m_max",
            "n_max",
            "seed",
            "s_max",
            "n_start",
            "n_end",
            "claim_n",
            "m",
            "N",
            "trials",
            "restarts",
            "iters",
            "budget",
        ):
            kwargs[key] = optional_from_dict(
                integer, data, key, default_value=getattr(defaults, key)
            )
        for key in ("p0_tol", "claim_tol", "inequality_tol", "K", "C"):
            kwargs[key] = optional_from_dict(
                number, data, key, default_value=getattr(defaults, key)
            )
        for key in ("extended_precision", "include_littlewood", "search"):
            kwargs[key] = optional_from_dict(
                boolean, data, key, default_value=getattr(defaults, key)
            )
        for key in ("form_path", "output_path"):
            kwargs[key] = optional_from_dict(str, data, key)
        return RunConfig(
            command=required_enum_from_dict(Command, data, "command"),
            families=data.get("families"),
            modes=data.get("modes"),
            field=optional_enum_from_dict(
                ScalarField, data, "field", default_value=ScalarField.Real
            ),
            dist=optional_enum_from_dict(
                Distribution, data, "dist", default_value=Distribution.SignUniform
            ),
            output_format=optional_enum_from_dict(
                OutputFormat, data, "output_format", default_value=OutputFormat.CSV
            ),
            **kwargs,
        )
