"""Command Line Interface.

One entry point with a subcommand per experiment. Every run resolves an
:class:`ExperimentConfig` from ``--config`` and flags, writes a JSON report
(and optionally a CSV table), and exits 0 when all checks pass, 1 when a
tolerance is breached and 2 when the inputs are invalid.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any

from gibbs_subshift.config import ExperimentConfig, settings
from gibbs_subshift.dlr import (
    InteractionSource,
    base_point_deviation,
    detailed_balance_deviation,
    dlr_kernel,
    exact_gibbs,
    glauber_chain,
    tower_deviation,
    verify_ball_sum,
    verify_conformal,
    verify_dlr_from_conformal,
)
from gibbs_subshift.energy import (
    WeightScheme,
    b_norm,
    check_same_cocycle,
    counterexample_interaction,
    full_dimensional_bound,
    is_full_dimensional,
    shell_norm,
    sv_norm,
    translate_weight,
    volume_norm,
)
from gibbs_subshift.errors import GibbsSubshiftError, UsageError
from gibbs_subshift.groups import (
    GroupSpec,
    ball,
    growth_table,
    shell_growth_constant,
)
from gibbs_subshift.io import (
    DescriptorParser,
    dump_kernel,
    dump_potential,
    load_interaction,
    load_json,
    load_potential,
    load_sft,
    load_source,
    load_weights,
    new_report,
    write_csv,
    write_json,
)
from gibbs_subshift.shifts import Semantics

if TYPE_CHECKING:
    from collections.abc import Callable

    from gibbs_subshift.dlr import CocycleSource
    from gibbs_subshift.groups import Element
    from gibbs_subshift.io import Report
    from gibbs_subshift.shifts import SFT, Pattern

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")
DETAILED_BALANCE_SITES = 12
NOT_APPLICABLE = "n/a"


@dataclass(frozen=True)
class WindowInputs:
    """Shift, source, window and boundary of a window experiment."""

    sft: SFT
    source: CocycleSource
    window: list[Element]
    boundary: Pattern
    semantics: Semantics

    @property
    def effective(self) -> str:
        """Semantics actually used, as reported."""
        return str(self.sft.effective_semantics(self.semantics))


def _scheme(text: str) -> WeightScheme:
    """Parse a scheme, reading ``explicit:<file>`` from disk."""
    if text.startswith("explicit:"):
        return load_weights(Path(text.removeprefix("explicit:")))
    return WeightScheme.parse(text)


def _tolerance(config: ExperimentConfig, default: float) -> float:
    return default if config.tolerance is None else config.tolerance


def _window_inputs(config: ExperimentConfig) -> WindowInputs:
    if config.sft is None or config.source is None or config.window is None:
        msg = "Window experiments need --sft, --source and --window"
        raise UsageError(msg)
    sft = load_sft(config.sft)
    source = load_source(config.source, sft)
    window = DescriptorParser.parse_window(sft.group, config.window)
    thickness = max(sft.range, source.reach) + 1
    text = config.boundary or f"const:{sft.alphabet.symbols[0]}"
    boundary = DescriptorParser.parse_boundary(sft, text, window, thickness)
    logger.debug(
        "Window of %d sites, boundary of %d sites", len(window), len(boundary)
    )
    return WindowInputs(
        sft, source, window, boundary, Semantics(config.semantics)
    )


def _exact_tolerance(config: ExperimentConfig, source: CocycleSource) -> float:
    """Enumeration tolerance, relaxed when a truncated tail participates."""
    truncated = (
        isinstance(source, InteractionSource)
        and source.interaction.tail is not None
    )
    default = settings.tolerance if truncated else settings.exact_tolerance
    return _tolerance(config, default)


def _growth(config: ExperimentConfig) -> Report:
    spec = GroupSpec.parse(config.group or "")
    table = growth_table(spec, config.kmax, config.offset, config.start)
    if config.csv is not None:
        write_csv(
            ("k", "ball_size", "shell_size", "ratio"),
            (
                (r.k, r.ball_size, r.shell_size, r.ratio)
                for r in table.rows
            ),
            config.csv,
        )
    report = new_report(config, NOT_APPLICABLE)
    report.results.update(
        {
            "group": table.group,
            "offset": table.offset,
            "start": table.start,
            "sup_ratio": table.sup_ratio,
            "nontrivial_sup_ratio": table.nontrivial_sup_ratio,
            "stabilized": table.stabilized,
            "rows": table.rows,
        }
    )
    if spec.is_lattice:
        report.results["shell_growth_constant"] = shell_growth_constant(
            spec, config.kmax - 1
        )
    return report


def _norms(config: ExperimentConfig) -> Report:
    if config.potential is None:
        msg = "norms needs --potential"
        raise UsageError(msg)
    potential = load_potential(config.potential)
    if (
        config.group is not None
        and GroupSpec.parse(config.group) != potential.group
    ):
        msg = (
            f"Potential lives on {potential.group.describe()}, "
            f"not {config.group}"
        )
        raise UsageError(msg)
    sft = load_sft(config.sft) if config.sft is not None else None
    semantics = Semantics(config.semantics)
    balls = ball(potential.group, 1)
    shell = shell_norm(potential, balls, config.kmax, sft, semantics)
    report = new_report(
        config, "exact" if shell.exact else "upper-bound", settings.tolerance
    )
    report.results.update(
        {
            "shell": shell,
            "volume": volume_norm(
                potential, balls, config.kmax, sft, semantics
            ),
            "diverges": shell.diverges,
        }
    )
    if potential.group.is_lattice:
        report.results["sv"] = sv_norm(
            potential, balls, config.kmax, sft, semantics
        )
    if config.csv is not None:
        write_csv(
            ("k", "variation", "shell_partial_sum"),
            (
                (k, v, s)
                for k, (v, s) in enumerate(
                    zip(shell.variations, shell.partial_sums, strict=False)
                )
            ),
            config.csv,
        )
    return report


def _convert(config: ExperimentConfig) -> Report:
    if config.interaction is None:
        msg = "convert needs --interaction"
        raise UsageError(msg)
    interaction = load_interaction(config.interaction)
    scheme = _scheme(config.scheme)
    sft = load_sft(config.sft) if config.sft is not None else None
    semantics = Semantics(config.semantics)
    potential = translate_weight(interaction, scheme)
    report = new_report(config, str(semantics), settings.tolerance)
    report.extra = dump_potential(potential)
    report.results.update(
        {"scheme": scheme.describe(), "b_norm": b_norm(interaction)}
    )
    if interaction.tail is not None:
        # The truncated image is too wide to enumerate
        report.results["full_dimensional"] = False
        return report
    balls = ball(interaction.group, potential.radius + 1)
    report.results["shell_norm"] = shell_norm(
        potential, balls, potential.radius, sft, semantics
    )
    check = is_full_dimensional(interaction, balls)
    report.results["full_dimensional"] = check.holds
    if check.holds:
        bound = full_dimensional_bound(interaction, scheme, sft, semantics)
        report.results["bound"] = {
            "shell_norm": bound.shell_norm,
            "constant": bound.constant,
            "b_norm": bound.b_norm,
            "bound": bound.bound,
            "margin": bound.margin,
        }
        report.check(
            "full-dimensional-bound",
            bound.shell_norm - bound.bound,
            _tolerance(config, settings.tolerance),
        )
    return report


def _kernel(config: ExperimentConfig) -> Report:
    inputs = _window_inputs(config)
    kernel = dlr_kernel(
        inputs.source, inputs.window, inputs.boundary, inputs.semantics
    )
    report = new_report(config, inputs.effective, settings.kernel_tolerance)
    report.results.update(
        {"source": inputs.source.kind, "kernel": dump_kernel(kernel)}
    )
    report.check(
        "base-point-independence",
        base_point_deviation(
            inputs.source, inputs.window, inputs.boundary, inputs.semantics
        ),
        _tolerance(config, settings.kernel_tolerance),
    )
    return report


def _interaction_of(inputs: WindowInputs) -> InteractionSource:
    if not isinstance(inputs.source, InteractionSource):
        msg = "This mode needs an interaction source"
        raise UsageError(msg)
    return inputs.source


def _verify(config: ExperimentConfig) -> Report:
    if config.mode == "same-cocycle":
        if config.sft is None or config.source is None:
            msg = "same-cocycle needs --sft and --source"
            raise UsageError(msg)
        sft = load_sft(config.sft)
        source = load_source(config.source, sft)
        if not isinstance(source, InteractionSource):
            msg = "same-cocycle needs an interaction source"
            raise UsageError(msg)
        result = check_same_cocycle(
            source.interaction,
            _scheme(config.scheme),
            _scheme(config.second_scheme),
            sft,
            config.trials,
            config.seed,
            semantics=Semantics(config.semantics),
        )
        tolerance = _tolerance(config, settings.tolerance)
        report = new_report(config, str(result.semantics), tolerance)
        report.results["same_cocycle"] = result
        report.check("same-cocycle", result.max_discrepancy, tolerance)
        return report
    inputs = _window_inputs(config)
    source = inputs.source
    tolerance = _exact_tolerance(config, source)
    report = new_report(config, inputs.effective, tolerance)
    if config.mode == "ball-sum":
        interaction = _interaction_of(inputs).interaction
        deviation = verify_ball_sum(
            interaction,
            _scheme(config.scheme),
            inputs.window,
            inputs.boundary,
            inputs.sft,
            semantics=inputs.semantics,
        )
        tolerance = _tolerance(config, settings.tolerance)
        report.results["ball_sum_deviation"] = deviation
        report.tolerance = tolerance
        report.check("ball-sum-form", deviation, tolerance)
        return report
    if config.mode == "base-point":
        deviation = base_point_deviation(
            source, inputs.window, inputs.boundary, inputs.semantics
        )
        tolerance = _tolerance(config, settings.kernel_tolerance)
        report.tolerance = tolerance
        report.check("base-point-independence", deviation, tolerance)
        return report
    gibbs = exact_gibbs(
        source, inputs.window, inputs.boundary, inputs.semantics
    )
    sub_window = (
        DescriptorParser.parse_window(inputs.sft.group, config.sub_window)
        if config.sub_window is not None
        else inputs.window
    )
    if config.mode == "conformal":
        result = verify_conformal(source, sub_window, gibbs)
        report.results["conformal"] = result
        report.results["derivative_positive"] = result.derivative_positive
        report.check("conformality", result.max_deviation, tolerance)
    elif config.mode == "dlr":
        check = verify_dlr_from_conformal(source, sub_window, gibbs)
        report.results["dlr"] = check
        report.check("dlr-conditionals", check.max_deviation, tolerance)
    else:
        deviation = tower_deviation(source, gibbs, sub_window)
        report.results["tower_deviation"] = deviation
        report.check("tower-consistency", deviation, tolerance)
    return report


def _sample(config: ExperimentConfig) -> Report:
    inputs = _window_inputs(config)
    source = inputs.source
    gibbs = exact_gibbs(
        source, inputs.window, inputs.boundary, inputs.semantics
    )
    run = glauber_chain(
        source,
        inputs.window,
        inputs.boundary,
        config.steps,
        config.seed,
        config.burn_in,
        inputs.semantics,
        reference=gibbs,
    )
    report = new_report(config, str(run.semantics), config.tolerance)
    report.results.update(
        {
            "steps": run.steps,
            "burn_in": run.burn_in,
            "seed": run.seed,
            "visited": len(run.empirical.counts),
            "total_variation": run.total_variation,
        }
    )
    if config.tolerance is not None and run.total_variation is not None:
        report.check(
            "glauber-total-variation", run.total_variation, config.tolerance
        )
    if len(gibbs.region) <= DETAILED_BALANCE_SITES:
        report.check(
            "detailed-balance",
            detailed_balance_deviation(source, gibbs),
            settings.exact_tolerance,
        )
    if config.csv is not None:
        total = max(run.empirical.total, 1)
        write_csv(
            ("configuration", "count", "frequency", "exact"),
            (
                (
                    DescriptorParser.format_key(
                        pattern[g] for g in gibbs.region
                    ),
                    run.empirical.counts.get(pattern, 0),
                    run.empirical.counts.get(pattern, 0) / total,
                    p,
                )
                for pattern, p in gibbs.items()
            ),
            config.csv,
        )
    return report


def _counterexample(config: ExperimentConfig) -> Report:
    example = counterexample_interaction(config.radius)
    report = new_report(config, "full-shift", settings.tolerance)
    tail = example.interaction.tail
    report.results.update(
        {
            "radius": example.radius,
            "profile": None if tail is None else tail.profile,
            "b_norm": example.b_norm,
            "norm": example.norm,
            "diverges": example.norm.diverges,
        }
    )
    if config.csv is not None:
        write_csv(
            ("k", "variation_bound", "shell_partial_sum"),
            (
                (k, v, s)
                for k, (v, s) in enumerate(
                    zip(
                        example.norm.variations,
                        example.norm.partial_sums,
                        strict=False,
                    )
                )
            ),
            config.csv,
        )
    return report


HANDLERS: dict[str, Callable[[ExperimentConfig], Report]] = {
    "growth": _growth,
    "norms": _norms,
    "convert": _convert,
    "kernel": _kernel,
    "verify": _verify,
    "sample": _sample,
    "counterexample": _counterexample,
}


def _emit_diagnostics(diagnostics: list[dict[str, Any]]) -> None:
    text = json.dumps({"diagnostics": diagnostics}, sort_keys=True)
    sys.stderr.write(text + "\n")


def run(config: ExperimentConfig) -> int:
    """Run one experiment and return the exit status.

    Args:
    ----
        config: The resolved configuration

    Returns:
    -------
        0 when every check passes, 1 on a tolerance breach and 2 when the
        configuration or the input files are invalid

    """
    diagnostics = config.validate()
    if diagnostics:
        _emit_diagnostics(diagnostics)
        return 2
    try:
        report = HANDLERS[config.command](config)
    except GibbsSubshiftError as e:
        logger.debug("Run failed: %s", e.message)
        _emit_diagnostics(e.diagnostics)
        return 2
    text = write_json(report.as_dict(), config.output)
    if config.output is None:
        sys.stdout.write(text)
    if not report.passed:
        sys.stderr.write(
            json.dumps({"failed": report.failures}, sort_keys=True) + "\n"
        )
        return 1
    return 0


def _add_window_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--sft", help="Shift of finite type (JSON)")
    parser.add_argument(
        "--source", help="Interaction or potential file (JSON)"
    )
    parser.add_argument("--window", help="Window, e.g. 0..5 or ball:2")
    parser.add_argument(
        "--boundary", help="Boundary, e.g. const:1 or '-1=1;6=-1'"
    )
    parser.add_argument(
        "--semantics",
        choices=ExperimentConfig.SEMANTICS,
        help="Admissibility semantics",
    )


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser.

    Options default to ``SUPPRESS`` or ``None`` so only flags given on the
    command line override values read from ``--config``.
    """
    common = argparse.ArgumentParser(
        add_help=False, argument_default=argparse.SUPPRESS
    )
    common.add_argument("--config", help="Experiment configuration (JSON)")
    common.add_argument("--output", help="Write the JSON report here")
    common.add_argument("--csv", help="Write the CSV table here")
    common.add_argument("--seed", type=int, help="Random seed")
    common.add_argument("--tolerance", type=float, help="Check tolerance")
    common.add_argument(
        "--log-level", choices=LOG_LEVELS, help="Logging level on stderr"
    )

    parser = argparse.ArgumentParser(
        prog="gibbs-subshift",
        description="Gibbs cocycles, potentials and DLR kernels on subshifts.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    growth = commands.add_parser(
        "growth", parents=[common], help="Ball and sphere growth table"
    )
    growth.add_argument("--group", help="Group, e.g. Z^2 or F2")
    growth.add_argument("--kmax", type=int, help="Largest radius")
    growth.add_argument("--offset", type=int, help="Shell offset n")
    growth.add_argument("--start", type=int, help="Smallest shell index")

    norms = commands.add_parser(
        "norms", parents=[common], help="Variation norms of a potential"
    )
    norms.add_argument("--potential", help="Potential file (JSON)")
    norms.add_argument("--group", help="Expected group of the potential")
    norms.add_argument("--kmax", type=int, help="Largest variation index")
    norms.add_argument("--sft", help="Shift of finite type (JSON)")
    norms.add_argument("--semantics", choices=ExperimentConfig.SEMANTICS)

    convert = commands.add_parser(
        "convert", parents=[common], help="Interaction to potential"
    )
    convert.add_argument("--interaction", help="Interaction file (JSON)")
    convert.add_argument(
        "--scheme", help="uniform, dictator[:rule] or explicit:<file>"
    )
    convert.add_argument("--sft", help="Shift of finite type (JSON)")
    convert.add_argument("--semantics", choices=ExperimentConfig.SEMANTICS)

    kernel = commands.add_parser(
        "kernel", parents=[common], help="DLR specification kernel"
    )
    _add_window_options(kernel)

    verify = commands.add_parser(
        "verify", parents=[common], help="Conformal and DLR checks"
    )
    _add_window_options(verify)
    verify.add_argument(
        "--mode", choices=ExperimentConfig.MODES, help="Check to run"
    )
    verify.add_argument("--sub-window", dest="sub_window", help="Subwindow")
    verify.add_argument("--scheme", help="Weighting scheme")
    verify.add_argument(
        "--second-scheme", dest="second_scheme", help="Second scheme"
    )
    verify.add_argument("--trials", type=int, help="Randomized pairs")

    sample = commands.add_parser(
        "sample", parents=[common], help="Glauber dynamics"
    )
    _add_window_options(sample)
    sample.add_argument("--steps", type=int, help="Recorded updates")
    sample.add_argument(
        "--burn-in", dest="burn_in", type=int, help="Discarded updates"
    )

    counterexample = commands.add_parser(
        "counterexample",
        parents=[common],
        help="Inverse-square pair interaction",
    )
    counterexample.add_argument(
        "--radius", "--R", dest="radius", type=int, help="Truncation radius"
    )
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    """Merge ``--config`` with the flags given on the command line."""
    values = {k: v for k, v in vars(args).items() if v is not None}
    values.pop("log_level", None)
    path = values.pop("config", None)
    data = load_json(path) if path is not None else {}
    data.update(values)
    return ExperimentConfig.from_mapping(data)


def main(argv: list[str] | None = None) -> int:
    """Entry point of the ``gibbs-subshift`` command."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(args, "log_level", "WARNING"),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = config_from_args(args)
    except GibbsSubshiftError as e:
        _emit_diagnostics(e.diagnostics)
        return 2
    return run(config)
