"""The ``libbh`` command-line program"""
import argparse
import json
import logging
import pathlib
import sys
from typing import Optional

import mpmath

from ._asymptotics import (
    LimitKind,
    check_claim1,
    check_contraction,
    check_ratio_identities,
    check_square_root_reduction,
    envelope,
    even_ratio,
    gamma_limit_value,
    limit_target,
    limit_targets,
)
from ._ConstantTable import constant_table, log_constant, ratio_series
from ._ConvergenceReport import convergence_report
from ._errors import (
    BHError,
    DomainError,
    HypothesisError,
    ParsingError,
    ResourceError,
)
from ._FamilySpec import Family, FamilySpec, ScalarField
from ._khinchine import KhinchineMode
from ._MultilinearForm import littlewood_form, read_form
from ._output import format_records
from ._RunConfig import Command, OutputFormat, RunConfig
from ._special_functions import Precision, euler_gamma, find_p0, p0_residual
from ._verifier import (
    Distribution,
    Verdict,
    bh_lhs,
    check_inequality,
    lower_bound_search,
    random_form,
    sup_norm,
)

logger = logging.getLogger(__name__)

EXIT_SUCCESS = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

_SHIFT_PARAM = 1e-4
_DEGREE_PARAM = 10**5


def _precision(config: RunConfig) -> Optional[Precision]:
    return Precision(extended=True) if config.extended_precision else None


def _number(value, precision: Optional[Precision]):
    if isinstance(value, mpmath.mpf):
        return mpmath.nstr(value, precision.dps if precision else 17)
    return float(value)


def _spec_columns(spec: FamilySpec) -> dict:
    return {"family": spec.family.value, "mode": spec.mode.value}


def _run_constants(config: RunConfig):
    records = []
    for spec in config.family_specs():
        for value in constant_table(spec, config.m_max):
            records.append(
                {
                    **_spec_columns(spec),
                    "m": value.m,
                    "value": value.value,
                    "log_value": value.log_value,
                }
            )
    return records, True


def _run_ratios(config: RunConfig):
    records, passed = [], True
    for spec in config.family_specs():
        series = ratio_series(spec, config.n_max)
        passed = passed and not series.violations
        for n, d in series:
            records.append({**_spec_columns(spec), "n": n, "ratio": d})
    return records, passed


def _run_limits(config: RunConfig):
    precision = _precision(config)
    records, passed = [], True
    for target in limit_targets():
        kind = target.kind
        if kind in (LimitKind.HalfShift, LimitKind.ThreeHalfShift):
            param = _SHIFT_PARAM
        elif kind is LimitKind.OddRatio:
            param = _DEGREE_PARAM + 1
        else:
            param = _DEGREE_PARAM
        closed_form = limit_target(kind, precision)
        value = gamma_limit_value(kind, param, precision)
        error = abs(float(value) / float(closed_form) - 1.0)
        ok = error < config.claim_tol
        passed = passed and ok
        records.append(
            {
                "kind": kind.value,
                "expression": target.expression,
                "closed_form_value": _number(closed_form, precision),
                "param": param,
                "pre_limit_value": _number(value, precision),
                "relative_error": error,
                "passed": ok,
            }
        )
    return records, passed


def _run_p0(config: RunConfig):
    precision = _precision(config)
    p0 = find_p0(config.p0_tol, precision=precision)
    residual = abs(p0_residual(float(p0)))
    ok = residual < config.p0_tol
    record = {
        "p0": _number(p0, precision),
        "residual": residual,
        "tol": config.p0_tol,
        "euler_gamma": _number(euler_gamma(precision), precision),
        "passed": ok,
    }
    return [record], ok


def _claim_record(spec, check, value, limit, passed, **extra):
    record = {**_spec_columns(spec), "check": check, "value": value}
    record["limit"] = limit
    record["passed"] = passed
    record["index"] = extra.get("index")
    record["witness"] = extra.get("witness")
    return record


def _run_claims_for(config: RunConfig, spec: FamilySpec):
    records = []
    tol = config.claim_tol

    r_odd, r_even = check_claim1(spec, config.claim_n)
    r_id_even, r_id_odd = check_ratio_identities(spec, config.claim_n)
    for check, value in (
        ("claim1-odd", r_odd),
        ("claim1-even", r_even),
        ("ratio-identity-even", r_id_even),
        ("ratio-identity-odd", r_id_odd),
    ):
        records.append(_claim_record(spec, check, value, tol, value < tol))

    error = abs(even_ratio(spec, config.n_end) - limit_target(LimitKind.EvenRatio))
    records.append(_claim_record(spec, "even-ratio", error, tol, error < tol))

    try:
        result = check_contraction(spec, config.K, config.n_start, config.n_end)
        records.append(
            _claim_record(
                spec,
                "contraction",
                result.tail_max,
                result.threshold,
                result.succeeded,
                index=result.index,
                witness=result.witness,
            )
        )
        reduction = check_square_root_reduction(
            spec, config.K, config.n_start, config.n_end
        )
        tail = reduction.second.tail_max if reduction.second else None
        records.append(
            _claim_record(
                spec,
                "square-root-reduction",
                tail,
                reduction.bound,
                reduction.succeeded,
                index=reduction.index,
            )
        )
    except HypothesisError as e:
        logger.warning("%s: %s", spec.label, e)
        records.append(
            _claim_record(
                spec,
                "contraction",
                e.value,
                config.K,
                False,
                witness=e.witness,
            )
        )

    for s in range(config.s_max + 1):
        result = envelope(spec, s, config.C, config.n_end)
        records.append(
            _claim_record(
                spec,
                f"envelope-s{s}",
                result.tail_max,
                result.threshold,
                result.succeeded,
                index=result.index,
                witness=result.witness,
            )
        )
    return records


def _run_claims(config: RunConfig):
    records = []
    for spec in config.family_specs():
        records += _run_claims_for(config, spec)
    return records, all(r["passed"] for r in records)


def _verify_specs(config: RunConfig, field: ScalarField) -> list[list[FamilySpec]]:
    """Selected families valid for `field`, each as a list of specs by mode"""
    groups = []
    for family in config.families:
        specs = []
        for mode in config.modes:
            spec = FamilySpec(family=family, mode=mode)
            if field in spec.scalar_fields and spec not in specs:
                specs.append(spec)
        if specs:
            groups.append(specs)
        else:
            logger.info("Skipping %s: not a constant for %s forms", family, field)
    if not groups:
        raise DomainError(
            f"Error in verify: no selected family is valid for {field.value} forms"
        )
    return groups


def _verify_record(config, label, form, specs, sup) -> dict:
    record = {
        "form": label,
        "family": specs[0].family.value,
        "m": form.m,
        "N": form.N,
        "field": form.scalar_field.value,
    }
    for spec in specs:
        report = check_inequality(form, spec, tol=config.inequality_tol, sup=sup)
        record.update(
            {
                "lhs": report.lhs,
                "sup_norm": report.sup_norm,
                "sup_is_exact": report.sup_is_exact,
                "ratio": report.ratio,
            }
        )
        record[f"bound.{spec.mode.value}"] = report.bound
        record[f"verdict.{spec.mode.value}"] = report.verdict.value
    return record


def _search_record(config, specs) -> dict:
    result = lower_bound_search(
        config.m,
        config.N,
        config.field,
        seed=config.seed,
        budget=config.budget,
        dist=config.dist,
    )
    lhs = bh_lhs(result.best_form)
    record = {
        "form": "search",
        "family": specs[0].family.value,
        "m": config.m,
        "N": config.N,
        "field": config.field.value,
        "lhs": lhs,
        "sup_norm": lhs / result.best_ratio if result.best_ratio > 0 else 0.0,
        "sup_is_exact": result.is_certified,
        "ratio": result.best_ratio,
    }
    for spec in specs:
        bound = log_constant(spec, config.m).value
        if result.best_ratio <= bound * (1.0 + config.inequality_tol):
            verdict = Verdict.Pass
        elif result.is_certified:
            verdict = Verdict.Fail
        else:
            verdict = Verdict.Inconclusive
        record[f"bound.{spec.mode.value}"] = bound
        record[f"verdict.{spec.mode.value}"] = verdict.value
    return record


def _run_verify(config: RunConfig):
    forms = []
    if config.form_path is not None:
        forms.append((config.form_path, read_form(config.form_path)))
    if config.include_littlewood:
        forms.append(("littlewood", littlewood_form(config.field, max(config.N, 2))))
    for i in range(config.trials):
        form = random_form(
            config.m, config.N, config.field, config.seed, config.dist, index=i
        )
        forms.append((f"random-{i}", form))

    records = []
    for label, form in forms:
        groups = _verify_specs(config, form.scalar_field)
        sup = sup_norm(
            form, restarts=config.restarts, iters=config.iters, seed=config.seed
        )
        for specs in groups:
            records.append(_verify_record(config, label, form, specs, sup))
    if config.search:
        for specs in _verify_specs(config, config.field):
            records.append(_search_record(config, specs))

    passed = not any(
        value == Verdict.Fail.value
        for record in records
        for key, value in record.items()
        if key.startswith("verdict.")
    )
    return records, passed


def _run_report(config: RunConfig):
    records, passed = [], True
    for spec in config.family_specs():
        report = convergence_report(
            spec,
            config.n_max,
            K=config.K,
            L=config.K,
            C=config.C,
            s=config.s_max,
            n_start=config.n_start,
        )
        passed = passed and report.beats_conjectured_rate
        records.append(report.to_dict())
    return records, passed


_COMMANDS = {
    Command.Constants: _run_constants,
    Command.Ratios: _run_ratios,
    Command.Limits: _run_limits,
    Command.Claims: _run_claims,
    Command.Verify: _run_verify,
    Command.P0: _run_p0,
    Command.Report: _run_report,
}


def _write(config: RunConfig, text: str, stdout):
    path = config.resolve_output_path()
    if path is None:
        stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    logger.info("Wrote %s", path)


def run(config: RunConfig, stdout=None) -> int:
    """Run one command and write its records

    Parameters
    ----------
    config: RunConfig
        The run configuration.
    stdout: Optional[TextIO] = None
        Stream for output when no output file is configured; default
        ``sys.stdout``.

    Returns
    -------
    status: int
        0 on success, 1 if a check fails or a budget is exceeded, 2 on usage
        errors.
    """
    stdout = sys.stdout if stdout is None else stdout
    try:
        records, passed = _COMMANDS[config.command](config)
        text = format_records(
            records, config.output_format.value, config.command.value
        )
    except (ResourceError, HypothesisError) as e:
        logger.error("%s", e)
        return EXIT_FAILURE
    except (DomainError, ParsingError) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except BHError as e:
        logger.error("%s", e)
        return EXIT_FAILURE

    _write(config, text, stdout)
    if not passed:
        logger.warning("%s: one or more checks failed", config.command.value)
        return EXIT_FAILURE
    return EXIT_SUCCESS


def _add_common_arguments(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--family",
        dest="families",
        action="append",
        metavar="FAMILY",
        help=(
            "Constant family, may be repeated or comma-separated; one of "
            f"{', '.join(x.value for x in Family)} "
            "(default: recursive-real and recursive-complex)"
        ),
    )
    parser.add_argument(
        "--mode",
        dest="modes",
        action="append",
        metavar="MODE",
        help=(
            "Khinchine mode, may be repeated; one of "
            f"{', '.join(x.value for x in KhinchineMode)} (default: both)"
        ),
    )
    parser.add_argument(
        "--format",
        dest="output_format",
        choices=[x.value for x in OutputFormat],
        help="Output format (default: csv)",
    )
    parser.add_argument(
        "--output",
        "-o",
        dest="output_path",
        help="Output file (default: $LIBBH_OUTPUT_DIR/<command>.<ext> or stdout)",
    )
    parser.add_argument("--config", help="JSON file with RunConfig settings")
    parser.add_argument(
        "--verbose",
        "-v",
        action="count",
        help="Log progress to stderr, -vv for debug output",
    )


def make_parser() -> argparse.ArgumentParser:
    """The argument parser of the ``libbh`` program"""
    parser = argparse.ArgumentParser(
        prog="libbh",
        description=(
            "Bohnenblust-Hille constants: tables, Gamma-function limits, "
            "convergence checks and inequality verification."
        ),
        argument_default=argparse.SUPPRESS,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "constants",
        help="Table of C_m",
        argument_default=argparse.SUPPRESS,
    )
    _add_common_arguments(p)
    p.add_argument("--max", dest="m_max", type=int, help="Largest m (default: 16)")

    p = sub.add_parser(
        "ratios",
        help="Ratios D_n = C_(n+1)/C_n",
        argument_default=argparse.SUPPRESS,
    )
    _add_common_arguments(p)
    p.add_argument("--n-max", type=int, help="Report n < N_MAX (default: 1024)")

    p = sub.add_parser(
        "limits",
        help="Gamma-function limits and their pre-limit values",
        argument_default=argparse.SUPPRESS,
    )
    _add_common_arguments(p)
    p.add_argument("--claim-tol", type=float, help="Tolerance (default: 1e-3)")
    p.add_argument(
        "--extended", dest="extended_precision", action="store_true",
        help="Use extended precision",
    )

    p = sub.add_parser(
        "claims",
        help="Numerical checks of the steps of lim D_n = 1",
        argument_default=argparse.SUPPRESS,
    )
    _add_common_arguments(p)
    p.add_argument("--K", type=float, help="Contraction bound (default: 1.5)")
    p.add_argument("--C", type=float, help="Envelope bound (default: 1.5)")
    p.add_argument("--s-max", type=int, help="Envelope halvings (default: 6)")
    p.add_argument("--n-start", type=int, help="Scan start (default: 100)")
    p.add_argument("--n-end", type=int, help="Scan end (default: 100000)")
    p.add_argument("--claim-n", type=int, help="Residual index (default: 10000)")
    p.add_argument("--claim-tol", type=float, help="Tolerance (default: 1e-3)")

    p = sub.add_parser(
        "verify",
        help="Check the inequality on multilinear forms",
        argument_default=argparse.SUPPRESS,
    )
    _add_common_arguments(p)
    p.add_argument("--m", type=int, help="Degree (default: 2)")
    p.add_argument("--N", type=int, help="Dimension (default: 2)")
    p.add_argument(
        "--field", choices=[x.value for x in ScalarField], help="(default: real)"
    )
    p.add_argument("--trials", type=int, help="Random forms (default: 200)")
    p.add_argument(
        "--dist", choices=[x.value for x in Distribution], help="(default: sign)"
    )
    p.add_argument("--seed", type=int, help="Random seed (default: 0)")
    p.add_argument(
        "--include-littlewood", action="store_true", help="Check the Littlewood form"
    )
    p.add_argument("--form", dest="form_path", help="Check the form in this file")
    p.add_argument("--search", action="store_true", help="Run a lower bound search")
    p.add_argument("--budget", type=int, help="Search budget (default: 10000)")
    p.add_argument("--restarts", type=int, help="Complex sup starts (default: 16)")
    p.add_argument("--iters", type=int, help="Complex sup sweeps (default: 200)")
    p.add_argument(
        "--inequality-tol", type=float, help="Relative tolerance (default: 1e-9)"
    )

    p = sub.add_parser(
        "p0",
        help="The critical Khinchine exponent p0",
        argument_default=argparse.SUPPRESS,
    )
    _add_common_arguments(p)
    p.add_argument("--tol", dest="p0_tol", type=float, help="(default: 1e-12)")
    p.add_argument(
        "--extended", dest="extended_precision", action="store_true",
        help="Use extended precision",
    )

    p = sub.add_parser(
        "report",
        help="Convergence report of the ratio tail",
        argument_default=argparse.SUPPRESS,
    )
    _add_common_arguments(p)
    p.add_argument("--n-max", type=int, help="Tail end, >= 1024 (default: 1024)")
    p.add_argument("--K", type=float, help="Contraction bound (default: 1.5)")
    p.add_argument("--C", type=float, help="Envelope bound (default: 1.5)")
    p.add_argument("--s-max", type=int, help="Envelope halvings (default: 6)")
    p.add_argument("--n-start", type=int, help="Scan start (default: 100)")
    return parser


def _configure_logging(verbosity: int):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def make_config(args: argparse.Namespace) -> RunConfig:
    """Build a RunConfig from parsed arguments and an optional ``--config`` file

    Explicit arguments override values from the file.
    """
    options = vars(args).copy()
    options.pop("verbose", None)
    data = {}
    config_path = options.pop("config", None)
    if config_path is not None:
        try:
            data = json.loads(pathlib.Path(config_path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ParsingError(f"Error reading config {config_path}: {e}") from e
        if not isinstance(data, dict):
            raise ParsingError(f"Error reading config {config_path}: not an object")
    data.update(options)
    return RunConfig.from_dict(data)


def main(argv: Optional[list[str]] = None, stdout=None) -> int:
    """Entry point of the ``libbh`` program; returns the exit status"""
    args = make_parser().parse_args(argv)
    _configure_logging(getattr(args, "verbose", 0) or 0)
    try:
        config = make_config(args)
    except (DomainError, ParsingError) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    return run(config, stdout=stdout)


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    console_main()
