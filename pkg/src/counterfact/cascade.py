"""Buddy intervention and its two-step cascade.

Step 0 predicts graduation propensities and fixes the threshold. Step 1
gives every target a synthetic successful peer who already left, weighted
``buddy_weight``; targets pushed over the threshold count as treated and
graduate in the working outcomes. Step 2 recomputes everyone's exposure with
the working outcomes on the unchanged graph, refits the model and predicts
again against the same threshold.
"""

from typing import Optional

import numpy as np

from ..errors import ConfigError
from ..models import (
    CascadeReport,
    CascadeTrace,
    EstimateReport,
    ExposureVector,
    Graph,
    InterventionConfig,
    OmegaMatrix,
    ResidentPanel,
)
from ..peerlm import fit_bias_corrected, fit_logistic_ame, fit_ols, predict, tc_design
from ..tcdata import exposure, exposure_components, exposure_from_components
from .threshold import choose_threshold


def default_buddy_weight(graph: Graph) -> float:
    """Median positive edge weight of the unit (1 for an empty graph)."""
    weights = graph.positive_weights()
    return float(np.median(weights)) if weights.size else 1.0


def buddy_exposure(numerator: np.ndarray, denominator: np.ndarray, weight: float) -> np.ndarray:
    """(sum_j A_ij Y_j + w) / (sum_j A_ij + w); NaN when both sums are zero."""
    total = denominator + weight
    values = np.full(np.shape(total), np.nan)
    present = total > 0
    values[present] = (numerator[present] + weight) / total[present]
    return values


def apply_buddy(
    targets: np.ndarray,
    panel: ResidentPanel,
    graph: Graph,
    s_working: np.ndarray,
    cfg: InterventionConfig,
    definition: str = "def1",
) -> ExposureVector:
    """Exposure after assigning a buddy to each target; non-targets are unchanged.

    Args:
        targets: Boolean mask over the panel
        panel: Residents in matrix order
        graph: Unit graph
        s_working: Working graduation outcomes
        cfg: Intervention settings (``buddy_weight`` None means the unit median)
        definition: Exposure definition

    Returns:
        ExposureVector under the intervention
    """
    targets = np.asarray(targets, dtype=bool)
    if targets.shape != (panel.n,):
        raise ConfigError("targets must be a boolean mask over the panel")
    weight = cfg.buddy_weight if cfg.buddy_weight is not None else default_buddy_weight(graph)

    numerator, denominator = exposure_components(panel, graph, definition, s_working)
    base = exposure_from_components(panel, numerator, denominator, definition).as_array()
    boosted = buddy_exposure(numerator, denominator, weight)
    values = np.where(targets, boosted, base)
    return ExposureVector.from_array(panel.ids, values, f"{definition}-buddy")


def select_targets(panel: ResidentPanel, rows: np.ndarray, cfg: InterventionConfig) -> np.ndarray:
    """Boolean mask of at-risk residents among the estimation rows."""
    if cfg.targeting == "true-failures":
        return rows & (panel.graduated == 0)
    lsi = panel.column("lsi")
    cutoff = np.percentile(lsi[rows], cfg.lsi_percentile)
    return rows & (lsi > cutoff)


def run_cascade(
    panel: ResidentPanel,
    graph: Graph,
    model: EstimateReport,
    cfg: InterventionConfig,
    uhat: Optional[np.ndarray] = None,
    omega: Optional[OmegaMatrix] = None,
    definition: str = "def1",
    label: Optional[str] = None,
) -> CascadeReport:
    """Run the buddy intervention for one unit.

    Args:
        panel: Residents in matrix order
        graph: Unit graph used for exposures
        model: Report fitted on ``tc_design(panel, exposure, uhat)``
        cfg: Intervention settings
        uhat: Latent block used by the model (full unit)
        omega: Correction matrix, required when the model is bias-corrected
        definition: Exposure definition the model used
        label: Run label (defaults to the targeting rule)

    Returns:
        CascadeReport with counts and a per-resident trace
    """
    if model.method == "bias-corrected" and omega is None:
        raise ConfigError("re-estimating a bias-corrected model needs Omega")
    weight = cfg.buddy_weight if cfg.buddy_weight is not None else default_buddy_weight(graph)
    outcomes = panel.graduated

    baseline = exposure(panel, graph, definition)
    design, rows = tc_design(panel, baseline, uhat)
    pre = predict(model, design)
    threshold = choose_threshold(pre, outcomes[rows], cfg.threshold_grid)

    targets = select_targets(panel, rows, cfg)
    boosted = apply_buddy(
        targets, panel, graph, outcomes, cfg.model_copy(update={"buddy_weight": weight}), definition
    )
    step1 = predict(model, design.with_column("peer_grad", boosted.as_array()[rows]))
    treated_rows = targets[rows] & (pre < threshold) & (step1 >= threshold)

    working = outcomes.copy()
    working[np.flatnonzero(rows)[treated_rows]] = 1.0
    refit_exposure = exposure(panel, graph, definition, outcomes=working)
    refit_design, _ = tc_design(panel, refit_exposure, uhat)
    refit = _refit(model, refit_design, working[rows], omega)
    step2 = predict(refit, refit_design)

    ids = np.array(panel.ids)[rows]
    trace = [
        CascadeTrace(
            id=str(ids[k]), graduated=int(outcomes[rows][k]), pre=float(pre[k]),
            step1=float(step1[k]), step2=float(step2[k]), targeted=bool(targets[rows][k]),
            treated=bool(treated_rows[k]), working_outcome=int(working[rows][k]),
        )
        for k in range(ids.size)
    ]
    return CascadeReport(
        label=label or _default_label(cfg),
        targeting=cfg.targeting,
        lsi_percentile=cfg.lsi_percentile if cfg.targeting == "lsi-percentile" else None,
        buddy_weight=weight,
        threshold=threshold,
        targeted_count=int(targets.sum()),
        treated_count=int(treated_rows.sum()),
        failures_true=int(np.sum(outcomes[rows] == 0)),
        below_threshold_pre=int(np.sum(pre < threshold)),
        below_threshold_post=int(np.sum(step2 < threshold)),
        n=int(rows.sum()),
        seed=cfg.seed,
        trace=trace,
    )


def _refit(
    model: EstimateReport, design, y: np.ndarray, omega: Optional[OmegaMatrix]
) -> EstimateReport:
    if model.method == "bias-corrected":
        return fit_bias_corrected(design, y, omega, specification=model.specification)
    if model.method == "logistic-ame":
        return fit_logistic_ame(design, y, specification=model.specification)
    return fit_ols(design, y, specification=model.specification)


def _default_label(cfg: InterventionConfig) -> str:
    if cfg.targeting == "lsi-percentile":
        return f"lsi>{cfg.lsi_percentile:g}"
    return "true-failures"
