"""CLI interface for RoleModel."""

import json
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Dict, List, Optional

import click
from pydantic import ValidationError
from rich.console import Console

# Try to load .env file if available
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass

from . import __version__
from .counterfact import misclassification_curve, run_cascade
from .embed import ase, select_dim_auc
from .errors import ConfigError, RoleModelError
from .mecov import delta_rdpg, delta_sbm
from .models import EstimateConfig, EstimateReport, InterventionConfig, RunConfig
from .netgen import read_graph
from .output import (
    CSVOutput,
    JSONOutput,
    TerminalOutput,
    write_auc_curve,
    write_embedding,
    write_error,
    write_manifest,
    write_misclassification,
    write_node_covariances,
    write_rows,
    write_timing,
    write_trace,
)
from .peerlm import predict
from .pipeline import UnitAnalysis
from .simlab import run_study, study_config
from .tcdata import generate_unit, read_events, read_residents, unit_summary, write_events, write_exposures, write_residents

console = Console()

MULTIPLE_OPTIONS = {"cutoff_percentile", "sweep"}


def load_config_file(ctx: click.Context, param: click.Parameter, value: Optional[str]):
    """Read ``key=value`` lines into the command's default map.

    Keys are spelled like the flags (dashes or underscores). Explicit flags
    override file values.
    """
    if value is None:
        return value
    path = Path(value)
    if not path.is_file():
        raise click.BadParameter(f"config file {path} not found", ctx=ctx, param=param)

    known = {p.name for p in ctx.command.params}
    defaults: Dict[str, object] = {}
    for number, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise click.BadParameter(f"{path}:{number}: expected key=value", ctx=ctx, param=param)
        key, raw = (part.strip() for part in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in known or key == "config":
            raise click.BadParameter(f"{path}:{number}: unknown option '{key}'", ctx=ctx, param=param)
        if key in MULTIPLE_OPTIONS:
            defaults[key] = [part.strip() for part in raw.split(",") if part.strip()]
        else:
            defaults[key] = raw
    ctx.default_map = {**(ctx.default_map or {}), **defaults}
    return value


def config_option(command):
    return click.option(
        "--config", "config_file",
        type=click.Path(dir_okay=False),
        callback=load_config_file,
        is_eager=True,
        expose_value=False,
        help="File of key=value lines mirroring the flags",
    )(command)


def common_options(command):
    """Seed, output directory and verbosity flags shared by every subcommand."""
    options = [
        click.option("--seed", type=int, default=0, envvar="ROLEMODEL_SEED", show_default=True,
                     help="Master seed; all randomness derives from it"),
        click.option("--out", "out", type=click.Path(file_okay=False), default="results",
                     show_default=True, help="Output directory"),
        click.option("--quiet", "-q", is_flag=True, help="Suppress progress and tables"),
        click.option("--verbose", "-v", is_flag=True, help="Print tracebacks and step timings"),
    ]
    for option in reversed(options):
        command = option(command)
    return config_option(command)


def estimation_options(command):
    """Flags of the TC estimation pipeline."""
    options = [
        click.option("--residents", type=click.Path(dir_okay=False), required=True,
                     help="Residents CSV"),
        click.option("--events", type=click.Path(dir_okay=False), required=True,
                     help="Events CSV (affirmations or corrections)"),
        click.option("--kind", type=click.Choice(["affirmations", "corrections"]),
                     default="affirmations", show_default=True, help="Event type"),
        click.option("--d", "d", type=int, help="Embedding dimension"),
        click.option("--select-d", is_flag=True, help="Choose d by held-out link-prediction AUC"),
        click.option("--d-max", type=int, default=20, show_default=True,
                     help="Largest candidate dimension for --select-d"),
        click.option("--k-clusters", type=int, help="Clusters for the sbm covariance estimator"),
        click.option("--cov", "covariance", type=click.Choice(["rdpg", "sbm"]), default="rdpg",
                     show_default=True, help="Node covariance estimator"),
        click.option("--definition", type=click.Choice(["def1", "def2"]), default="def1",
                     show_default=True, help="Role-model definition"),
        click.option("--adjacency", type=click.Choice(["sum", "received"]), default="sum",
                     show_default=True, help="Edge direction handling"),
        click.option("--binarize", is_flag=True, help="Also fit on the binarized network"),
        click.option("--race-interactions", is_flag=True, help="Also fit race-stratified exposures"),
        click.option("--logistic", is_flag=True, help="Also fit the logistic AME variant"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


@contextmanager
def command_errors(out: Optional[str], verbose: bool):
    """Map library errors to a JSON message on stderr, error.json and an exit code."""
    try:
        yield
    except RoleModelError as e:
        _fail(e, out, verbose)
    except ValidationError as e:
        details = e.errors()[0]
        field = ".".join(str(part) for part in details.get("loc", ()))
        _fail(ConfigError(f"{field}: {details['msg']}" if field else details["msg"]), out, verbose)


def _fail(error: RoleModelError, out: Optional[str], verbose: bool) -> None:
    click.echo(json.dumps(error.to_dict(), sort_keys=True), err=True)
    if out is not None:
        try:
            write_error(out, error)
        except OSError:
            pass
    if verbose:
        console.print_exception()
    sys.exit(error.exit_code)


def _finish(out: str, run: RunConfig, outputs: List[str], timings: Dict[str, float], quiet: bool) -> None:
    write_manifest(out, run, outputs)
    write_timing(out, timings)
    if not quiet:
        console.print(f"[green]Results written to {out}[/green]")


def _estimate_config(options: Dict) -> EstimateConfig:
    return EstimateConfig(
        d=options["d"],
        select_d=options["select_d"],
        d_max=options["d_max"],
        covariance=options["covariance"],
        k_clusters=options["k_clusters"],
        definition=options["definition"],
        binarize=options["binarize"],
        race_interactions=options["race_interactions"],
        logistic=options["logistic"],
        adjacency=options["adjacency"],
        seed=options["seed"],
    )


def _run_config(subcommand: str, inputs: Dict[str, str], options: Dict) -> RunConfig:
    remaining = {
        key: list(value) if isinstance(value, tuple) else value
        for key, value in sorted(options.items())
        if key not in ("seed", "out", "quiet", "verbose", "workers") and key not in inputs
    }
    return RunConfig(subcommand=subcommand, inputs=inputs, output_dir=options["out"],
                     seed=options["seed"], options=remaining)


def _analyse(options: Dict):
    """Read a unit and run the estimation pipeline."""
    panel = read_residents(options["residents"])
    log = read_events(options["events"], panel, kind=options["kind"])
    analysis = UnitAnalysis(panel, log, _estimate_config(options), verbose=options["verbose"])
    if options["quiet"]:
        reports, main = analysis.run()
    else:
        with console.status(f"Estimating on {panel.n} residents..."):
            reports, main = analysis.run()
    return analysis, reports, main


@click.group()
@click.version_option(version=__version__, prog_name="rolemodel")
def cli():
    """RoleModel - Peer influence estimation under latent homophily."""
    pass


@cli.command()
@click.option("--study", type=click.Choice(["A", "B", "C", "D"]), required=True,
              help="Simulation study")
@click.option("--reps", type=int, help="Replicates per sweep value")
@click.option("--sweep", multiple=True, type=float,
              help="Sweep value (repeat for several; defaults to the study's grid)")
@click.option("--n", "n", type=int, help="Node count when n is not swept")
@click.option("--density", type=float, help="Density when density is not swept")
@click.option("--cov", "covariance", type=click.Choice(["rdpg", "sbm"]),
              help="Node covariance estimator")
@click.option("--k-clusters", type=int, help="Clusters for the sbm covariance estimator")
@click.option("--oracle", is_flag=True, help="Also fit the regression on the true positions")
@click.option("--workers", type=int, default=1, envvar="ROLEMODEL_WORKERS", show_default=True,
              help="Worker processes for replicates")
@common_options
def simulate(**options):
    """Run a Monte Carlo study and write its bias table."""
    out, verbose = options["out"], options["verbose"]
    start = time.perf_counter()
    with command_errors(out, verbose):
        cfg = study_config(
            options["study"],
            reps=options["reps"],
            sweep=list(options["sweep"]) or None,
            n=options["n"],
            density=options["density"],
            covariance=options["covariance"],
            k_clusters=options["k_clusters"],
            include_oracle=options["oracle"] or None,
            workers=options["workers"],
            seed=options["seed"],
        )
        if not options["quiet"]:
            console.print(f"[bold blue]RoleModel v{__version__}[/bold blue]")
            console.print(f"Study {cfg.study}: {len(cfg.sweep)} sweep values x {cfg.reps} replicates")
        table = run_study(cfg, show_progress=not options["quiet"])

        CSVOutput(Path(out) / "bias_table.csv").write([table])
        JSONOutput(Path(out) / "bias_table.json").write([table])
        if not options["quiet"]:
            TerminalOutput().write([table])
        _finish(out, _run_config("simulate", {}, options), ["bias_table.csv", "bias_table.json"],
                {"simulate": time.perf_counter() - start}, options["quiet"])


@cli.command()
@click.argument("graph", type=click.Path(dir_okay=False))
@click.option("--d", "d", type=int, help="Embedding dimension")
@click.option("--select-d", is_flag=True, help="Choose d by held-out link-prediction AUC")
@click.option("--d-max", type=int, default=20, show_default=True, help="Largest candidate dimension")
@click.option("--folds", type=int, default=5, show_default=True, help="Cross-validation folds")
@click.option("--cov", "covariance", type=click.Choice(["rdpg", "sbm"]),
              help="Also write node covariances from this estimator")
@click.option("--k-clusters", type=int, help="Clusters for the sbm covariance estimator")
@common_options
def embed(graph: str, **options):
    """Embed a graph CSV (edge list or dense matrix)."""
    out, verbose = options["out"], options["verbose"]
    start = time.perf_counter()
    with command_errors(out, verbose):
        network = read_graph(graph)
        outputs = ["embedding.csv"]
        d = options["d"]
        if d is None and options["select_d"]:
            candidates = list(range(1, min(options["d_max"], network.n - 1) + 1))
            curve = select_dim_auc(network, candidates, folds=options["folds"], seed=options["seed"])
            write_auc_curve(curve, Path(out) / "auc.csv")
            outputs.append("auc.csv")
            d = curve.chosen_d
            if not options["quiet"]:
                console.print(f"Selected d = {d} (AUC {curve.auc[curve.dims.index(d)]:.4f})")
        embedding = ase(network, d or 2)
        write_embedding(embedding, Path(out) / "embedding.csv")

        if options["covariance"] == "sbm":
            if options["k_clusters"] is None:
                raise ConfigError("--cov sbm needs --k-clusters")
            covariances = delta_sbm(embedding, options["k_clusters"], seed=options["seed"])
        elif options["covariance"] == "rdpg":
            covariances = delta_rdpg(embedding)
        else:
            covariances = None
        if covariances is not None:
            write_node_covariances(covariances, Path(out) / "node_covariances.csv")
            outputs.append("node_covariances.csv")

        _finish(out, _run_config("embed", {"graph": graph}, options), outputs,
                {"embed": time.perf_counter() - start}, options["quiet"])


@cli.command()
@estimation_options
@common_options
def estimate(**options):
    """Estimate role-model effects on a TC unit."""
    out, verbose = options["out"], options["verbose"]
    start = time.perf_counter()
    with command_errors(out, verbose):
        analysis, reports, main = _analyse(options)

        CSVOutput(Path(out) / "estimates.csv").write(reports)
        JSONOutput(Path(out) / "estimates.json").write(reports)
        write_exposures(main.exposures, Path(out) / "exposures.csv")
        outputs = ["estimates.csv", "estimates.json", "exposures.csv"]
        if analysis.auc_curve is not None:
            write_auc_curve(analysis.auc_curve, Path(out) / "auc.csv")
            outputs.append("auc.csv")
        if not options["quiet"]:
            TerminalOutput().write(reports)

        timings = dict(analysis.timings)
        timings["total"] = time.perf_counter() - start
        inputs = {"residents": options["residents"], "events": options["events"]}
        _finish(out, _run_config("estimate", inputs, options), outputs, timings, options["quiet"])


@cli.command()
@estimation_options
@click.option("--method", type=click.Choice(["bias-corrected", "homophily-ols", "ols", "logistic-ame"]),
              default="bias-corrected", show_default=True, help="Model driving the propensities")
@click.option("--targeting", type=click.Choice(["true-failures", "lsi-percentile"]),
              default="true-failures", show_default=True, help="Who receives a buddy")
@click.option("--cutoff-percentile", multiple=True, type=float,
              help="LSI percentile cutoff (repeat for several runs; implies lsi-percentile targeting)")
@click.option("--buddy-weight", type=float, help="Affirmation weight added by the buddy (default: unit median)")
@click.option("--threshold-grid", type=float, default=0.001, show_default=True,
              help="Threshold search resolution")
@common_options
def counterfactual(**options):
    """Simulate the buddy intervention and its cascade."""
    out, verbose = options["out"], options["verbose"]
    start = time.perf_counter()
    with command_errors(out, verbose):
        if options["method"] == "logistic-ame":
            options["logistic"] = True
        analysis, reports, main = _analyse(options)
        model = _model(reports, options["method"])
        uhat = None if options["method"] == "ols" else main.embedding.uhat

        cutoffs = list(options["cutoff_percentile"])
        if cutoffs:
            configs = [
                InterventionConfig(targeting="lsi-percentile", lsi_percentile=cutoff,
                                   buddy_weight=options["buddy_weight"],
                                   threshold_grid=options["threshold_grid"], seed=options["seed"])
                for cutoff in cutoffs
            ]
        else:
            configs = [InterventionConfig(targeting=options["targeting"],
                                          buddy_weight=options["buddy_weight"],
                                          threshold_grid=options["threshold_grid"],
                                          seed=options["seed"])]

        cascades = [
            run_cascade(analysis.panel, main.graph, model, cfg, uhat=uhat, omega=main.omega,
                        definition=options["definition"])
            for cfg in configs
        ]

        CSVOutput(Path(out) / "cascade_summary.csv").write(cascades)
        JSONOutput(Path(out) / "cascades.json").write(cascades)
        outputs = ["cascade_summary.csv", "cascades.json", "misclassification.csv"]
        for number, report in enumerate(cascades, start=1):
            write_trace(report, Path(out) / f"trace_{number}.csv")
            outputs.append(f"trace_{number}.csv")

        design = main.design if uhat is not None else main.design.with_latent(None)
        grid, errors = misclassification_curve(
            predict(model, design), analysis.panel.graduated[main.rows], options["threshold_grid"]
        )
        write_misclassification(grid, errors, Path(out) / "misclassification.csv")
        if not options["quiet"]:
            TerminalOutput().write(cascades)

        timings = dict(analysis.timings)
        timings["total"] = time.perf_counter() - start
        inputs = {"residents": options["residents"], "events": options["events"]}
        _finish(out, _run_config("counterfactual", inputs, options), outputs, timings, options["quiet"])


def _model(reports: List[EstimateReport], method: str) -> EstimateReport:
    """Main-specification report driving the propensities."""
    specification = "logistic" if method == "logistic-ame" else "main"
    return next(r for r in reports if r.method == method and r.specification == specification)


@cli.command("gen-synthetic")
@click.option("--n", "n", type=int, default=400, show_default=True, help="Number of residents")
@click.option("--rho", type=float, default=0.5, show_default=True, help="Planted role-model effect")
@click.option("--events-per-resident", type=float, default=22.0, show_default=True,
              help="Expected affirmations per resident")
@common_options
def gen_synthetic(**options):
    """Write residents.csv and events.csv of a synthetic TC unit."""
    out, verbose = options["out"], options["verbose"]
    start = time.perf_counter()
    with command_errors(out, verbose):
        unit = generate_unit(n=options["n"], rho=options["rho"], seed=options["seed"],
                             events_per_resident=options["events_per_resident"])
        write_residents(unit.panel, Path(out) / "residents.csv")
        write_events(unit.log, Path(out) / "events.csv")
        summary = unit_summary(unit)
        write_rows(Path(out) / "summary.csv", ["quantity", "value"],
                   [[key, value] for key, value in sorted(summary.items())])
        if not options["quiet"]:
            for key, value in sorted(summary.items()):
                console.print(f"  {key}: {value:.4g}")
        _finish(out, _run_config("gen-synthetic", {}, options),
                ["residents.csv", "events.csv", "summary.csv"],
                {"gen-synthetic": time.perf_counter() - start}, options["quiet"])


if __name__ == "__main__":
    cli()
