"""Monte Carlo study runner."""

from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Tuple

import numpy as np
from rich.console import Console
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn

from ..embed import ase
from ..errors import NumericalError, ReplicateFailureError
from ..mecov import assemble_omega, delta_rdpg, delta_sbm
from ..models import BiasRow, BiasTable, StudyConfig
from ..netgen import build_factors, gen_rdpg
from ..peerlm import fit_bias_corrected, fit_ols, simulation_design
from ..utils import derive_seed
from .panel import simulate_panel
from .studies import get_study

console = Console()

MAX_ATTEMPTS = 10
METHODS = ["no-latent", "uncorrected-Û", "bias-corrected"]


def study_methods(cfg: StudyConfig) -> List[str]:
    """Methods fitted in every replicate, in report order."""
    return METHODS + (["oracle"] if cfg.include_oracle else [])


def run_replicate(cfg: StudyConfig, sweep_value: float, seed: int) -> Dict[str, float]:
    """One replicate: graph, panel, embedding, covariances and every fit.

    Returns:
        rho-hat by method
    """
    study = get_study(cfg.study)
    factors = build_factors(study.latent_config(cfg, sweep_value, derive_seed(seed, 0)))
    graph = gen_rdpg(factors, seed=derive_seed(seed, 1))
    outcomes = simulate_panel(
        factors, graph, cfg, seed=derive_seed(seed, 2),
        beta_prev_multiplier=study.multiplier(cfg, sweep_value),
    )

    embedding = ase(graph, factors.d)
    if cfg.covariance == "sbm":
        covariances = delta_sbm(embedding, cfg.k_clusters, seed=derive_seed(seed, 3))
    else:
        covariances = delta_rdpg(embedding)

    design = simulation_design(outcomes.y2, outcomes.lagged_peer)
    with_uhat = design.with_latent(embedding.uhat)
    omega = assemble_omega(covariances, design.q)

    estimates = {
        "no-latent": fit_ols(design, outcomes.y3).rho,
        "uncorrected-Û": fit_ols(with_uhat, outcomes.y3).rho,
        "bias-corrected": fit_bias_corrected(with_uhat, outcomes.y3, omega).rho,
    }
    if cfg.include_oracle:
        estimates["oracle"] = fit_ols(design.with_latent(factors.values), outcomes.y3).rho
    return estimates


def _replicate_task(task: Tuple[StudyConfig, int, float, int]) -> Tuple[Dict[str, float], int]:
    """Run replicate ``rep`` of sweep point ``index``, resampling on numerical failure.

    Returns:
        (estimates, number of failed attempts)
    """
    cfg, index, sweep_value, rep = task
    last_error: Optional[NumericalError] = None
    for attempt in range(MAX_ATTEMPTS):
        try:
            return run_replicate(cfg, sweep_value, derive_seed(cfg.seed, index, rep, attempt)), attempt
        except NumericalError as e:
            last_error = e
    raise ReplicateFailureError(
        f"replicate {rep} at {sweep_value} failed {MAX_ATTEMPTS} times: {last_error}"
    )


def run_study(cfg: StudyConfig, show_progress: bool = True) -> BiasTable:
    """Run every replicate of a study and summarise the rho-hat bias per method.

    Replicate ``rep`` of sweep point ``index`` draws from
    derive_seed(seed, index, rep, attempt); a failed attempt is resampled with
    the next attempt index. Results are reduced in replicate order, so the
    table does not depend on ``cfg.workers``.

    Args:
        cfg: Study configuration
        show_progress: Show a rich progress bar

    Returns:
        BiasTable with one row per (sweep value, method)

    Raises:
        ReplicateFailureError: If resamples exceed ``cfg.max_resample_rate``
    """
    tasks = [
        (cfg, index, float(value), rep)
        for index, value in enumerate(cfg.sweep)
        for rep in range(cfg.reps)
    ]

    results: List[Tuple[Dict[str, float], int]] = []
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TextColumn("[progress.percentage]{task.percentage:>3.0f}%"),
        console=console,
        disable=not show_progress,
    ) as progress:
        bar = progress.add_task(
            f"Study {cfg.study}: {len(tasks)} replicates", total=len(tasks)
        )
        if cfg.workers > 1:
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                for result in pool.map(_replicate_task, tasks, chunksize=max(1, cfg.reps // 4)):
                    results.append(result)
                    progress.update(bar, advance=1)
        else:
            for task in tasks:
                results.append(_replicate_task(task))
                progress.update(bar, advance=1)

    resampled = sum(failures for _, failures in results)
    if resampled > cfg.max_resample_rate * len(tasks):
        raise ReplicateFailureError(
            f"{resampled} of {len(tasks)} replicates had to be resampled "
            f"(limit {cfg.max_resample_rate:.0%})"
        )
    return summarize(cfg, [estimates for estimates, _ in results], resampled)


def summarize(cfg: StudyConfig, estimates: List[Dict[str, float]], resampled: int = 0) -> BiasTable:
    """Aggregate per-replicate estimates (sweep-major order) into a BiasTable."""
    rows = []
    for index, value in enumerate(cfg.sweep):
        block = estimates[index * cfg.reps:(index + 1) * cfg.reps]
        for method in study_methods(cfg):
            values = np.array([e[method] for e in block], dtype=float)
            mean = float(values.mean())
            mc_se = float(values.std(ddof=1) / np.sqrt(values.size)) if values.size > 1 else 0.0
            rows.append(BiasRow(
                sweep=float(value), method=method, mean_rho_hat=mean,
                bias=mean - cfg.rho, mc_se=mc_se, reps=values.size,
            ))
    return BiasTable(study=cfg.study, rho=cfg.rho, rows=rows, resampled=resampled)
