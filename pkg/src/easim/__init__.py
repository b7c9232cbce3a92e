"""Entanglement-aware tensor-network simulation of quantum circuits.

Bond dimensions are chosen per truncation from a fidelity budget instead of a
fixed cap, and the product of truncation fidelities estimates the fidelity of
the final state.
"""

from .budget import FidelityLedger, certify, make_ledger
from .circuit import Circuit, GateOp, adjoint, gen_cheng_random, gen_haar_layers, gen_mirror
from .mpo import MpoState, NoiseModel, fidelity_wang, init_density_product, truncation_rank_mixed
from .mps import MpsState, fidelity_pure, init_product_state, truncation_rank_pure
from .runner import RunConfig, RunReport, compare, run, run_fixed_chi

__all__ = [
    "Circuit",
    "FidelityLedger",
    "GateOp",
    "MpoState",
    "MpsState",
    "NoiseModel",
    "RunConfig",
    "RunReport",
    "adjoint",
    "certify",
    "compare",
    "fidelity_pure",
    "fidelity_wang",
    "gen_cheng_random",
    "gen_haar_layers",
    "gen_mirror",
    "init_density_product",
    "init_product_state",
    "make_ledger",
    "run",
    "run_fixed_chi",
    "truncation_rank_mixed",
    "truncation_rank_pure",
]
