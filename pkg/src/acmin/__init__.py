"""Attributed graph clustering by minimizing average attributed multi-hop conductance."""

from .core import AcminParams, ClusterReport, Nci, acmin, approx_aamc, gen_nci, has_converged, init_nci, ortho_step
from .graph import AttributedGraph, WalkOperator, apply_walk, build_pv, build_rhat, load_graph
from .metrics import MetricsReport, clustering_accuracy, modularity, nmi

__all__ = [
    "AcminParams",
    "AttributedGraph",
    "ClusterReport",
    "MetricsReport",
    "Nci",
    "WalkOperator",
    "acmin",
    "apply_walk",
    "approx_aamc",
    "build_pv",
    "build_rhat",
    "clustering_accuracy",
    "gen_nci",
    "has_converged",
    "init_nci",
    "load_graph",
    "modularity",
    "nmi",
    "ortho_step",
]
