#!/usr/bin/env python3

import functools
import io
import logging
import sys
import typing

import click

from . import outage
from . import power
from . import report
from . import specfun
from .config import ExperimentConfig, SweepSpec
from .errors import AccuracyError, ConfigError, DomainError, OptimizationError
from .mcsim import SIM_MODES, SimConfig, simulate_outage
from .network import NetworkConfig


logger = logging.getLogger(__name__)

EXIT_CONFIG = 2
EXIT_ACCURACY = 3
EXIT_VALIDATION = 4

DEFAULT_TRIALS = 100_000

VERBOSITY = {0: logging.WARNING, 1: logging.INFO}


def exit_codes(func: typing.Callable) -> typing.Callable:
    "Turn engine exceptions into a diagnostic and the matching exit code."
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (ConfigError, DomainError) as e:
            click.echo(f'error: {e}', err=True)
            sys.exit(EXIT_CONFIG)
        except OptimizationError as e:
            click.echo(f'error: {e} (best split {e.best})', err=True)
            sys.exit(EXIT_ACCURACY)
        except AccuracyError as e:
            click.echo(f'error: {e}', err=True)
            sys.exit(EXIT_ACCURACY)
    return wrapper


def load_experiment(config: str) -> ExperimentConfig:
    return ExperimentConfig.from_file(config)


def sweep_of(experiment: ExperimentConfig) -> SweepSpec:
    if experiment.sweep is None:
        raise ConfigError('the experiment has no "sweep" section')
    return experiment.sweep


def emit_csv(
    out: str,
    columns: typing.Sequence[str],
    rows: typing.Sequence[typing.Sequence[report.Cell]]
) -> None:
    if out == "-":
        buffer = io.StringIO()
        report.write_csv(buffer, columns, rows)
        click.echo(buffer.getvalue(), nl=False)
    else:
        report.write_csv_file(out, columns, rows)


def emit_plot_script(
    plot_script: typing.Optional[str],
    out: str,
    columns: typing.Sequence[str]
) -> None:
    if not plot_script:
        return
    if out == "-":
        raise click.UsageError("--plot-script needs --out to name a CSV file")
    report.write_plot_script(plot_script, out, columns)


def optimal_split_outage(cfg: NetworkConfig, mode: str) -> float:
    "Outage with the literal-objective optimal split at this power."
    consts = power.k_constants(cfg.perfect_csi_static(), "literal")
    split = power.optimize_power(consts)
    return outage.per_block_outage(cfg.with_split(split), mode)  # type: ignore


config_option = click.option(
    "--config", "-c",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="Path to the JSON experiment document."
)
out_option = click.option(
    "--out", "-o",
    type=click.Path(writable=True, dir_okay=False, allow_dash=True),
    default="-",
    help="Where to write the CSV. Shows on console when \"-\" is passed "
         "here. Default is \"-\"."
)
plot_script_option = click.option(
    "--plot-script",
    type=click.Path(writable=True, dir_okay=False),
    help="Also write a matplotlib script plotting the CSV."
)
workers_option = click.option(
    "--workers",
    type=click.IntRange(min=1),
    help="Number of worker processes. Defaults to the sim section or 1."
)


@click.group()
@click.option(
    "--verbose", "-v",
    count=True,
    help="Log progress; repeat for debug output."
)
def cli(verbose: int = 0):
    """
    Outage probability of selective decode-and-forward relay networks over
    time-selective fading: closed forms, Monte Carlo validation and power
    allocation.
    """
    logging.basicConfig(
        level=VERBOSITY.get(verbose, logging.DEBUG),
        format="%(levelname)s %(name)s: %(message)s"
    )


@cli.command()
@config_option
@out_option
@plot_script_option
@workers_option
@click.option(
    "--asymptotic-mode",
    type=click.Choice(list(outage.ASYMPTOTIC_MODES)),
    default="leading-term",
    help="Expression behind the op_asymptotic column. Default is "
         "leading-term."
)
@click.option(
    "--optimal",
    is_flag=True,
    help="Add an op_optimal_split column using the optimal power split of "
         "each point (two relays only)."
)
@exit_codes
def analytic(
    config: str,
    out: str = "-",
    plot_script: typing.Optional[str] = None,
    workers: typing.Optional[int] = None,
    asymptotic_mode: str = "leading-term",
    optimal: bool = False
):
    """
    Sweep the closed-form outage probability over the configured SNR grid.

    op_asymptotic stays blank unless the network has two relays, perfect
    CSI, static nodes and a positive power fraction on every node.
    """
    experiment = load_experiment(config)
    sweep = sweep_of(experiment)
    cfg = experiment.network
    points = sweep.points()
    if workers is None:
        workers = experiment.sim.workers if experiment.sim else 1

    total = outage.outage_curve(cfg, points, "total-probability", workers=workers)
    literal = outage.outage_curve(cfg, points, "paper-literal", workers=workers)
    has_asymptotic = (
        cfg.relays == 2 and cfg.is_perfect_static
        and all(beta > 0 for beta in cfg.power_split.fractions)
    )
    columns = report.ANALYTIC_COLUMNS + ((report.OPTIMAL_COLUMN,) if optimal else ())

    rows = []
    for snr_db, op_total, op_literal in zip(points, total, literal):
        point_cfg = cfg.with_snr_db(snr_db)
        asymptotic = None
        if has_asymptotic:
            asymptotic = outage.asymptotic_outage(point_cfg, asymptotic_mode)  # type: ignore
        row: typing.List[report.Cell] = [snr_db, op_total, op_literal, asymptotic]
        if optimal:
            row.append(optimal_split_outage(point_cfg, "total-probability"))
        rows.append(row)
    emit_csv(out, columns, rows)
    emit_plot_script(plot_script, out, columns[1:])


@cli.command()
@config_option
@out_option
@plot_script_option
@workers_option
@click.option(
    "--trials",
    type=click.IntRange(min=1),
    help="Simulated blocks per SNR point. Overrides the sim section."
)
@click.option(
    "--seed",
    type=click.IntRange(min=0, max=(1 << 64) - 1),
    help="Seed of the Monte Carlo streams. Overrides the sim section."
)
@click.option(
    "--mode",
    type=click.Choice(list(outage.OUTAGE_MODES)),
    default="total-probability",
    help="Closed form compared against the simulation. Default is "
         "total-probability."
)
@click.option(
    "--sim-mode",
    type=click.Choice(list(SIM_MODES)),
    help="Monte Carlo mode. Overrides the sim section."
)
@exit_codes
def validate(
    config: str,
    out: str = "-",
    plot_script: typing.Optional[str] = None,
    workers: typing.Optional[int] = None,
    trials: typing.Optional[int] = None,
    seed: typing.Optional[int] = None,
    mode: str = "total-probability",
    sim_mode: typing.Optional[str] = None
):
    """
    Compare the closed form with Monte Carlo at every SNR point.

    \b
    A point fails when |z| > 3 and at least 100 outage events are expected.
    Exits with 4 when any point fails.
    """
    experiment = load_experiment(config)
    sweep = sweep_of(experiment)
    base = experiment.sim or SimConfig(DEFAULT_TRIALS)
    sim = SimConfig(
        trials=trials if trials is not None else base.trials,
        seed=seed if seed is not None else base.seed,
        mode=sim_mode or base.mode,  # type: ignore
        workers=workers if workers is not None else base.workers
    )
    cfg = experiment.network

    records = []
    for snr_db in sweep.points():
        point_cfg = cfg.with_snr_db(snr_db)
        records.append(report.ValidationRecord(
            snr_db,
            outage.per_block_outage(point_cfg, mode),  # type: ignore
            simulate_outage(point_cfg, sim)
        ))
    emit_csv(out, report.VALIDATE_COLUMNS, [r.row() for r in records])
    emit_plot_script(plot_script, out, ("op_analytic", "op_mc"))

    failed = [r for r in records if r.status == "fail"]
    for record in failed:
        click.echo(
            f'FAIL snr_db={record.snr_db!r}: analytic {record.op_analytic!r}, '
            f'simulated {record.estimate.p_hat!r} +/- {record.estimate.stderr!r} '
            f'(z={record.z_score:.2f})',
            err=True
        )
    if failed:
        sys.exit(EXIT_VALIDATION)


@cli.command()
@config_option
@click.option(
    "--out", "-o",
    type=click.Path(writable=True, dir_okay=False),
    help="Also write one CSV row per objective variant."
)
@click.option(
    "--resolution",
    type=click.IntRange(min=3),
    default=200,
    help="Divisions per axis of the lattice the solver starts from and is "
         "checked against. Default is 200."
)
@exit_codes
def optimize(
    config: str,
    out: typing.Optional[str] = None,
    resolution: int = 200
):
    """
    Optimal source/relay power split of a two-relay network.

    CSI errors and mobility in the document are replaced by perfect CSI and
    static nodes before the constants are computed.
    """
    experiment = load_experiment(config)
    cfg = experiment.network.perfect_csi_static()
    rows = []
    for variant in power.VARIANTS:
        consts = power.k_constants(cfg, variant)  # type: ignore
        split = power.optimize_power(consts, grid_resolution=resolution)
        _, grid_value = power.grid_minimum(consts, resolution)
        value = power.objective(split, consts)
        beta0, beta1, beta2 = split.fractions
        print(f'{"Variant":>16}: {variant}')
        print(f'{"beta0":>16}: {beta0!r}')
        print(f'{"beta1":>16}: {beta1!r}')
        print(f'{"beta2":>16}: {beta2!r}')
        print(f'{"Objective":>16}: {value!r}')
        print(f'{"Grid objective":>16}: {grid_value!r}')
        rows.append((variant, beta0, beta1, beta2, value, grid_value))
    if out:
        report.write_csv_file(out, report.OPTIMIZE_COLUMNS, rows)


@cli.command("print-config")
@config_option
@exit_codes
def print_config(config: str):
    """
    Print the validated experiment with every link correlation resolved.
    """
    click.echo(load_experiment(config).to_json(), nl=False)


SPECFUN = {
    "j0": (1, specfun.bessel_j0),
    "lngamma": (1, specfun.ln_gamma),
    "p": (2, specfun.lower_incomplete_gamma_regularized),
    "q": (2, specfun.upper_incomplete_gamma_regularized),
    "1f1": (3, specfun.kummer_1f1),
}


@cli.command(
    "specfun-eval",
    context_settings={"ignore_unknown_options": True}
)
@click.argument(
    "function",
    type=click.Choice(list(SPECFUN))
)
@click.argument(
    "args",
    type=float,
    nargs=-1
)
@exit_codes
def specfun_eval(function: str, args: typing.Tuple[float, ...]):
    """
    Evaluate one special function.

    \b
    j0 X         Bessel J0(X)
    lngamma X    log Gamma(X)
    p S X        regularized lower incomplete gamma P(S, X)
    q S X        regularized upper incomplete gamma Q(S, X)
    1f1 A B Z    Kummer's 1F1(A; B; Z)
    """
    arity, func = SPECFUN[function]
    if len(args) != arity:
        raise click.UsageError(f'{function} takes {arity} argument(s), got {len(args)}')
    click.echo(repr(func(*args)))


def main():
    cli()


if __name__ == "__main__":
    cli()
