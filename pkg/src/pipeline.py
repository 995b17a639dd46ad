"""TC unit analysis orchestrator."""

import time
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from rich.console import Console

from .embed import ase, select_dim_auc
from .mecov import assemble_omega, delta_rdpg, delta_sbm
from .models import (
    AucCurve,
    Embedding,
    EstimateConfig,
    EstimateReport,
    EventLog,
    ExposureVector,
    Graph,
    NodeCovariances,
    OmegaMatrix,
    ResidentPanel,
)
from .peerlm import DesignMatrix, fit_bias_corrected, fit_logistic_ame, fit_ols, race_design, tc_design
from .tcdata import build_adjacency, exposure, exposure_by_race

console = Console()

DEFAULT_DIMENSION = 2


class FittedSpecification(BaseModel):
    """Everything produced while fitting one specification."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str = Field(..., description="Specification name")
    graph: Graph = Field(..., description="Network the exposures were built on")
    embedding: Embedding = Field(..., description="Full-unit embedding")
    covariances: NodeCovariances = Field(..., description="Node covariances of the embedding")
    exposures: List[ExposureVector] = Field(..., description="Exposures used by the design")
    design: DesignMatrix = Field(..., description="Design with the latent block")
    rows: np.ndarray = Field(..., description="Panel rows kept for estimation")
    omega: OmegaMatrix = Field(..., description="Correction matrix over the kept rows")
    reports: List[EstimateReport] = Field(..., description="Fitted models")

    def report(self, method: str) -> EstimateReport:
        return next(r for r in self.reports if r.method == method)


class UnitAnalysis:
    """Ingestion-to-estimates pipeline for one TC unit."""

    def __init__(self, panel: ResidentPanel, log: EventLog, config: EstimateConfig,
                 verbose: bool = False):
        """Initialize the analysis.

        Args:
            panel: Residents of the unit
            log: Affirmation or correction events
            config: Estimation options
            verbose: Print per-step timings
        """
        self.panel = panel
        self.log = log
        self.config = config
        self.verbose = verbose
        self.auc_curve: Optional[AucCurve] = None
        self.timings: Dict[str, float] = {}
        self._dimension: Optional[int] = None

    def graph(self, binarize: bool = False) -> Graph:
        """Unit network under the configured direction handling."""
        return self._timed("adjacency", build_adjacency,
                           self.log, self.panel, binarize=binarize, mode=self.config.adjacency)

    def dimension(self, graph: Graph) -> int:
        """Embedding dimension: explicit, AUC-selected on the weighted graph, or 2."""
        if self._dimension is not None:
            return self._dimension
        if self.config.d is not None:
            self._dimension = self.config.d
        elif self.config.select_d:
            candidates = range(1, min(self.config.d_max, graph.n - 1) + 1)
            self.auc_curve = self._timed(
                "select_d", select_dim_auc, graph, list(candidates),
                holdout_frac=self.config.holdout_frac, folds=self.config.auc_folds,
                seed=self.config.seed,
            )
            self._dimension = self.auc_curve.chosen_d
        else:
            self._dimension = DEFAULT_DIMENSION
        return self._dimension

    def fit(self, name: str, graph: Graph, race: bool = False) -> FittedSpecification:
        """Fit no-latent OLS, homophily OLS and the bias-corrected model.

        Args:
            name: Specification name recorded in the reports
            graph: Network for exposures and the embedding
            race: Use race-stratified exposures with interactions

        Returns:
            FittedSpecification
        """
        cfg = self.config
        embedding = self._timed("embed", ase, graph, self.dimension(graph))
        if cfg.covariance == "sbm":
            covariances = self._timed("covariance", delta_sbm, embedding, cfg.k_clusters, seed=cfg.seed)
        else:
            covariances = self._timed("covariance", delta_rdpg, embedding)

        binarized = name == "binarized"
        if race:
            exposures = list(exposure_by_race(self.panel, graph, cfg.definition, binarized=binarized))
            design, rows = race_design(self.panel, exposures[0], exposures[1], embedding.uhat)
        else:
            exposures = [exposure(self.panel, graph, cfg.definition, binarized=binarized)]
            design, rows = tc_design(self.panel, exposures[0], embedding.uhat)

        y = self.panel.graduated[rows]
        omega = kept_omega(covariances, rows, design.q)
        reports = [
            fit_ols(design.with_latent(None), y, specification=name),
            fit_ols(design, y, specification=name),
            self._timed("bias_correction", fit_bias_corrected, design, y, omega, specification=name),
        ]
        return FittedSpecification(
            name=name, graph=graph, embedding=embedding, covariances=covariances,
            exposures=exposures, design=design, rows=rows, omega=omega, reports=reports,
        )

    def run(self) -> Tuple[List[EstimateReport], FittedSpecification]:
        """Fit every requested specification.

        Returns:
            (all reports in specification order, the main specification)
        """
        cfg = self.config
        graph = self.graph()
        main = self.fit("main", graph)
        reports = list(main.reports)

        if cfg.logistic:
            reports.append(self._timed(
                "logistic", fit_logistic_ame, main.design, self.panel.graduated[main.rows]
            ))
        if cfg.race_interactions:
            reports.extend(self.fit("race", graph, race=True).reports)
        if cfg.binarize:
            reports.extend(self.fit("binarized", self.graph(binarize=True)).reports)

        if self.verbose:
            for step, seconds in self.timings.items():
                console.print(f"  [dim]{step}: {seconds:.3f}s[/dim]")
        return reports, main

    def _timed(self, step: str, function, *args, **kwargs):
        start = time.perf_counter()
        result = function(*args, **kwargs)
        self.timings[step] = self.timings.get(step, 0.0) + time.perf_counter() - start
        return result


def kept_omega(covariances: NodeCovariances, rows: np.ndarray, q_nonlatent: int) -> OmegaMatrix:
    """Omega summing the node covariances of the estimation rows only."""
    kept = NodeCovariances(
        per_node=covariances.per_node[rows],
        variant=covariances.variant,
        cluster_assignments=None if covariances.cluster_assignments is None
        else covariances.cluster_assignments[rows],
    )
    return assemble_omega(kept, q_nonlatent)
