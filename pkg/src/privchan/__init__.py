"""Single-qubit private quantum channels: synthesis, key-entropy bounds and security frontiers."""

from .qmath import BlochVector, DensityOperator, QubitUnitary
from .channels import PauliDiagonal, RandomUnitaryChannel, UnitalChannel
from .pqc import PlaintextSet, classify, optimal_pqc, verify_pqc
from .apqc import analytic_frontier, brute_force_frontier, envelope_frontier

__all__ = [
    "BlochVector",
    "DensityOperator",
    "QubitUnitary",
    "PauliDiagonal",
    "RandomUnitaryChannel",
    "UnitalChannel",
    "PlaintextSet",
    "classify",
    "optimal_pqc",
    "verify_pqc",
    "analytic_frontier",
    "brute_force_frontier",
    "envelope_frontier",
]
