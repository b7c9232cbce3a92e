"""Run configurations, the simulation loop, and JSON run reports."""

from __future__ import annotations

import dataclasses
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .budget import FidelityLedger, certify, make_ledger
from .circuit import GENERATORS, Circuit, CircuitError, GateOp, parse_circuit, validate_lnn
from .mpo import MpoState, NoiseModel, init_density_product
from .mps import MpsState, init_product_state
from .oracle import (
    MIXED_CAP,
    PURE_CAP,
    OracleCapError,
    dense_fidelity_pure,
    dense_fidelity_wang,
    dense_run,
    dense_run_noisy,
)

SWAP = np.eye(4)[[0, 2, 1, 3]]


@dataclass(frozen=True)
class RunConfig:
    mode: str = "mps"
    circuit: str = "haar"
    n_qubits: int = 8
    depth: int = 4
    seed: int = 0
    circuit_file: str | None = None
    f_min: float = 0.99
    strategy: str = "global"
    chi_cap: int | None = None
    eps1: float = 0.0
    eps2: float = 0.0
    oracle_check: bool = False
    out: str | None = None

    def __post_init__(self):
        if self.mode not in ("mps", "mpo"):
            raise ValueError(f"mode must be 'mps' or 'mpo', got {self.mode!r}")
        if self.circuit not in (*GENERATORS, "file"):
            raise ValueError(f"unknown circuit source {self.circuit!r}")
        if self.circuit == "file" and not self.circuit_file:
            raise ValueError("circuit 'file' needs circuit_file")
        if self.chi_cap is not None and self.chi_cap < 1:
            raise ValueError(f"chi_cap must be positive, got {self.chi_cap}")
        if self.mode == "mps" and self.noise.is_noisy:
            raise ValueError("noise requires mode 'mpo'")

    @property
    def noise(self) -> NoiseModel:
        return NoiseModel(self.eps1, self.eps2)

    def build_circuit(self) -> Circuit:
        if self.circuit == "file":
            return parse_circuit(Path(self.circuit_file).read_text())
        return GENERATORS[self.circuit](self.n_qubits, self.depth, self.seed)


@dataclass
class RunReport:
    config: dict
    ledger: list[dict]
    bond_profiles: list[list[int]]
    estimate: float
    is_lower_bound: bool
    guarantee_held: bool
    peak_chi: int
    wall_ms: float
    oracle_fidelity: float | None = None
    purity: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        if not self.purity:
            d.pop("purity")
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    def write(self, path):
        Path(path).write_text(self.to_json())


def oriented(op: GateOp) -> tuple[int, np.ndarray]:
    """Left site and matrix for a two-qubit gate, reordered if given right-to-left."""
    i, j = op.sites
    if i < j:
        return i, op.matrix
    return j, SWAP @ op.matrix @ SWAP


def planned_truncations(circuit: Circuit, mode: str, noise: NoiseModel) -> int:
    n = circuit.two_qubit_count
    if mode == "mpo" and noise.eps2 > 0:
        n *= 2  # the two-qubit channel splits the bond a second time
    return n


def simulate(circuit: Circuit, mode: str, ledger: FidelityLedger, chi_cap=None, noise=None):
    """Run ``circuit`` and return ``(state, records, bond_profiles, purities, wall_ms)``.

    Bond profiles are taken before the first layer and after every layer.
    """
    noise = noise or NoiseModel()
    bad = validate_lnn(circuit)
    if bad:
        raise CircuitError(f"non-adjacent two-qubit gates at op indices {[i for i, _ in bad]}")
    n = circuit.n_qubits
    records = []
    t0 = time.perf_counter()
    if mode == "mps":
        state = init_product_state(n)
    else:
        state = init_density_product(n)
    profiles = [state.bond_dims()]
    purities = [state.purity()] if mode == "mpo" else []
    for layer in circuit.layers():
        for g in layer:
            op = circuit.ops[g]
            if op.kind == "1q":
                site = op.sites[0]
                if mode == "mps":
                    state.apply_1q(op.matrix, site)
                else:
                    state.apply_unitary_mpo(op.matrix, (site,))
                    if noise.eps1:
                        state.apply_depolarizing((site,), noise.eps1)
                continue
            left, u = oriented(op)
            if mode == "mps":
                records.append(state.apply_2q(u, left, ledger, chi_cap, gate_index=g))
            else:
                records.append(state.apply_unitary_mpo(u, (left, left + 1), ledger, chi_cap, gate_index=g))
                if noise.eps2:
                    records.append(state.apply_depolarizing((left, left + 1), noise.eps2, ledger, chi_cap, g))
        profiles.append(state.bond_dims())
        if mode == "mpo":
            purities.append(state.purity())
    wall_ms = (time.perf_counter() - t0) * 1e3
    return state, records, profiles, purities, wall_ms


def oracle_fidelity(circuit: Circuit, state, mode: str, noise: NoiseModel, max_qubits: int | None = None) -> float:
    if mode == "mps":
        exact = dense_run(circuit, max_qubits or PURE_CAP)
        return dense_fidelity_pure(exact, state.to_dense())
    exact = dense_run_noisy(circuit, noise, max_qubits or MIXED_CAP)
    return dense_fidelity_wang(exact, state.to_dense())


def _report(config: RunConfig, circuit: Circuit, ledger, records, profiles, purities, wall_ms, fid, extra=None):
    cert = certify(ledger)
    cfg = dataclasses.asdict(config)
    cfg["n_qubits"] = circuit.n_qubits
    cfg["circuit_metadata"] = circuit.metadata
    if extra:
        cfg.update(extra)
    return RunReport(
        config=cfg,
        ledger=[r.as_row() for r in records],
        bond_profiles=profiles,
        estimate=cert.estimate,
        is_lower_bound=cert.is_lower_bound,
        guarantee_held=cert.guarantee_held,
        peak_chi=max(max(p, default=1) for p in profiles),
        wall_ms=wall_ms,
        oracle_fidelity=fid,
        purity=purities,
    )


def _execute(config: RunConfig, f_min: float, strategy: str, chi_cap, extra=None, circuit=None):
    circuit = circuit or config.build_circuit()
    if config.oracle_check:
        cap = PURE_CAP if config.mode == "mps" else MIXED_CAP
        if circuit.n_qubits > cap:
            raise OracleCapError(f"oracle check requested for {circuit.n_qubits} qubits; cap is {cap}")
    noise = config.noise
    n_trunc = planned_truncations(circuit, config.mode, noise)
    ledger = make_ledger(f_min, n_trunc, strategy, noisy=noise.is_noisy)
    state, records, profiles, purities, wall_ms = simulate(circuit, config.mode, ledger, chi_cap, noise)
    fid = oracle_fidelity(circuit, state, config.mode, noise) if config.oracle_check else None
    report = _report(config, circuit, ledger, records, profiles, purities, wall_ms, fid, extra)
    if config.out:
        report.write(config.out)
    return report


def run(config: RunConfig) -> RunReport:
    """Entanglement-aware run: bonds follow the fidelity targets of the ledger."""
    return _execute(config, config.f_min, config.strategy, config.chi_cap)


def run_fixed_chi(config: RunConfig, chi_max: int) -> RunReport:
    """Standard truncation: every bond cut to ``chi_max``, fidelities only recorded."""
    if chi_max < 1:
        raise ValueError(f"chi_max must be >= 1, got {chi_max}")
    return _execute(config, 1.0, "naive", chi_max, extra={"fixed_chi": chi_max})


def compare(config: RunConfig) -> dict:
    """EA run, then a fixed-bond run capped at the EA peak bond dimension."""
    circuit = config.build_circuit()
    ea_cfg = dataclasses.replace(config, out=None)
    ea = _execute(ea_cfg, config.f_min, config.strategy, config.chi_cap, circuit=circuit)
    fixed = _execute(ea_cfg, 1.0, "naive", ea.peak_chi, extra={"fixed_chi": ea.peak_chi}, circuit=circuit)
    result = {
        "ea": ea.to_dict(),
        "fixed": fixed.to_dict(),
        "chi_max": ea.peak_chi,
        "wall_ratio": ea.wall_ms / fixed.wall_ms if fixed.wall_ms > 0 else 1.0,
        "fidelity_delta": fixed.estimate - ea.estimate,
    }
    if config.out:
        Path(config.out).write_text(json.dumps(result, indent=1))
    return result
