"""Random stabilizer tensor networks over GF(p): exact tableau simulation,
entanglement and GHZ content, the Sigma_3(p) spin model, and moment checks."""
from .entropy import GhzAccountingError, ghz_content, fourpartite_report, pt_moment3
from .network import NetworkGraph, build_network, build_random_network, load_graph
from .tableau import StabilizerTableau, sample_uniform
from .weyl import WeylOperator

__version__ = "0.1.0"

__all__ = [
    "GhzAccountingError",
    "NetworkGraph",
    "StabilizerTableau",
    "WeylOperator",
    "build_network",
    "build_random_network",
    "fourpartite_report",
    "ghz_content",
    "load_graph",
    "pt_moment3",
    "sample_uniform",
]
