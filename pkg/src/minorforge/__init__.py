"""
minorforge - complete minors in random cubic graphs.

Samplers for random regular graphs and H(n)+G(n,1), a staged builder of
complete-minor certificates, an independent verifier with exact and
heuristic contraction-clique search, and the critical-window kernel
pipeline for G(n,p) and G(n,m).
"""

from .builder import BuilderParams, BuildResult, build_minor
from .certificate import MinorCertificate
from .factory import create_manager
from .graph import MultiGraph, VertexPath
from .kernel import PhaseParams, PhaseReport, extract_kernel, phase_pipeline
from .manager import ExperimentManager
from .models import Mode
from .oracle import exact_ccl, greedy_minor, verify
from .samplers import RandomSource, sample_hamilton_plus_matching

__all__ = [
    "BuilderParams",
    "BuildResult",
    "build_minor",
    "MinorCertificate",
    "create_manager",
    "MultiGraph",
    "VertexPath",
    "PhaseParams",
    "PhaseReport",
    "extract_kernel",
    "phase_pipeline",
    "ExperimentManager",
    "Mode",
    "exact_ccl",
    "greedy_minor",
    "verify",
    "RandomSource",
    "sample_hamilton_plus_matching",
]
