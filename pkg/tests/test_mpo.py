import numpy as np
import pytest

from easim.budget import make_ledger
from easim.circuit import CNOT, H, X, Z, gen_cheng_random, gen_haar_layers, haar_unitary
from easim.mpo import (
    MpoState,
    NoiseModel,
    depolarizing_superop,
    fidelity_wang,
    init_density_product,
    truncation_rank_mixed,
)
from easim.oracle import dense_fidelity_wang, dense_run_noisy
from easim.runner import run, RunConfig

from conftest import exact_mps


def run_mpo(circuit, noise=NoiseModel(), ledger=None):
    rho = init_density_product(circuit.n_qubits)
    for op in circuit.ops:
        rho.apply_unitary_mpo(op.matrix, op.sites, ledger)
        eps = noise.eps1 if op.kind == "1q" else noise.eps2
        if eps:
            rho.apply_depolarizing(op.sites, eps, ledger)
    return rho


def single_qubit_state(m):
    return MpoState([np.asarray(m, dtype=complex).reshape(1, 2, 2, 1)])


def test_init_density_product():
    np.testing.assert_array_equal(init_density_product(1).to_dense(), [[1, 0], [0, 0]])
    assert init_density_product(2).purity() == pytest.approx(1.0)
    rho = init_density_product(5)
    assert all(rho.expectation_mpo(Z, (k,)) == pytest.approx(1.0) for k in range(5))
    with pytest.raises(ValueError):
        init_density_product(0)


def test_unitary_examples():
    rho = init_density_product(1)
    rho.apply_unitary_mpo(X, (0,))
    np.testing.assert_allclose(rho.to_dense(), [[0, 0], [0, 1]], atol=1e-15)
    rho = init_density_product(2)
    rho.apply_unitary_mpo(H, (0,))
    rec = rho.apply_unitary_mpo(CNOT, (0, 1))
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    np.testing.assert_allclose(rho.to_dense(), np.outer(bell, bell), atol=1e-14)
    assert rho.purity() == pytest.approx(1.0) and rec.achieved_f == 1.0


def test_noiseless_random_circuit_matches_dense():
    c = gen_haar_layers(6, 5, 2)
    rho = run_mpo(c, ledger=make_ledger(1.0, c.two_qubit_count))
    ref = dense_run_noisy(c, NoiseModel())
    assert np.max(np.abs(rho.to_dense() - ref)) <= 1e-9
    assert abs(rho.trace() - 1) <= 1e-9


def test_depolarizing_examples():
    c = gen_cheng_random(3, 3, 0)
    rho = run_mpo(c)
    before = rho.to_dense()
    rho.apply_depolarizing((1,), 0.0)
    rho.apply_depolarizing((1, 2), 0.0)
    assert np.max(np.abs(rho.to_dense() - before)) <= 1e-14
    one = init_density_product(1)
    one.apply_depolarizing((0,), 0.75)
    np.testing.assert_allclose(one.to_dense(), np.eye(2) / 2, atol=1e-15)
    two = init_density_product(2)
    two.apply_depolarizing((0, 1), 15 / 16)
    np.testing.assert_allclose(two.to_dense(), np.eye(4) / 4, atol=1e-14)
    with pytest.raises(ValueError):
        depolarizing_superop(1, 1.5)


def test_depolarizing_matches_dense_and_lowers_purity():
    noise = NoiseModel(0.05, 0.05)
    c = gen_cheng_random(4, 6, 3)
    rho = run_mpo(c)
    p0 = rho.purity()
    rho.apply_depolarizing((1, 2), 0.05)
    assert rho.purity() < p0
    full = run_mpo(c, noise)
    assert np.max(np.abs(full.to_dense() - dense_run_noisy(c, noise))) <= 1e-9


@pytest.mark.parametrize(
    "lam, target, expected_k, expected_f",
    [
        ([3.0, 1.0, 0.5], 1.0, 3, 1.0),
        (np.sqrt([0.8, 0.2]), 0.92, 2, 1.0),
        (np.sqrt([0.8, 0.2]), 0.89, 1, np.sqrt(0.8)),
    ],
)
def test_truncation_rank_mixed_examples(lam, target, expected_k, expected_f):
    k, f = truncation_rank_mixed(lam, target)
    assert k == expected_k and f == pytest.approx(expected_f, abs=1e-14)


def test_truncation_rank_mixed_errors():
    with pytest.raises(ValueError):
        truncation_rank_mixed([], 0.9)
    with pytest.raises(ValueError):
        truncation_rank_mixed([1.0, -0.1], 0.9)


def test_truncation_rank_mixed_matches_literal_wang_formula():
    rng = np.random.default_rng(2)
    lam = np.sort(rng.random(6))[::-1]
    for k in range(1, 7):
        kept = np.where(np.arange(6) < k, lam, 0.0)
        literal = np.sum(lam * kept) / np.sqrt(np.sum(lam**2) * np.sum(kept**2))
        _, f = truncation_rank_mixed(lam, literal * (1 - 1e-12))
        assert f == pytest.approx(literal, abs=1e-12)


def test_single_truncation_matches_dense_wang():
    noise = NoiseModel(0.05, 0.05)
    c = gen_haar_layers(4, 4, 1)
    rho = run_mpo(c, noise)
    u = haar_unitary(4, np.random.default_rng(3))
    exact = rho.copy()
    exact.apply_unitary_mpo(u, (1, 2))
    rec = rho.apply_unitary_mpo(u, (1, 2), make_ledger(0.97, 1))
    assert rec.chi_after < rec.chi_before
    dense = dense_fidelity_wang(exact.to_dense(), rho.to_dense())
    assert abs(dense - rec.achieved_f) <= 1e-8
    assert abs(rho.trace() - 1) <= 1e-9


def test_trace_purity_expectation_match_dense():
    one = single_qubit_state(np.eye(2) / 2)
    assert one.purity() == pytest.approx(0.5)
    rho0 = init_density_product(3)
    assert rho0.trace() == pytest.approx(1.0) and rho0.purity() == pytest.approx(1.0)
    noise = NoiseModel(0.05, 0.05)
    c = gen_cheng_random(5, 6, 4)
    rho = run_mpo(c, noise, make_ledger(1.0, 2 * c.two_qubit_count))
    ref = dense_run_noisy(c, noise)
    assert abs(rho.trace() - 1) <= 1e-8
    assert abs(rho.purity() - np.trace(ref @ ref).real) <= 1e-8
    for k in range(5):
        zk = np.kron(np.kron(np.eye(2**k), Z), np.eye(2 ** (4 - k)))
        assert abs(rho.expectation_mpo(Z, (k,)) - np.trace(ref @ zk).real) <= 1e-8
    zz = np.kron(np.kron(np.eye(2), np.kron(Z, Z)), np.eye(4))
    assert abs(rho.expectation_mpo(np.kron(Z, Z), (1, 2)) - np.trace(ref @ zz).real) <= 1e-8
    with pytest.raises(ValueError):
        rho.expectation_mpo(np.array([[0, 1], [0, 0]]), (0,))


def test_fidelity_wang_examples():
    c = gen_haar_layers(3, 3, 0)
    rho = run_mpo(c, NoiseModel(0.05, 0.05))
    assert fidelity_wang(rho, rho) == pytest.approx(1.0, abs=1e-10)
    double = rho.copy()
    double.sites[0] = 2 * double.sites[0]
    assert fidelity_wang(rho, double) == pytest.approx(1.0, abs=1e-10)
    mixed = run_mpo(gen_haar_layers(3, 2, 5), NoiseModel(0.1, 0.1))
    assert abs(fidelity_wang(rho, mixed) - fidelity_wang(mixed, rho)) <= 1e-12
    assert fidelity_wang(rho, mixed) == pytest.approx(dense_fidelity_wang(rho.to_dense(), mixed.to_dense()))
    zero = init_density_product(1)
    assert fidelity_wang(zero, single_qubit_state(np.eye(2) / 2)) == pytest.approx(2**-0.5)


def test_hermiticity_and_purity_bounds():
    noise = NoiseModel(0.05, 0.05)
    c = gen_haar_layers(6, 8, 7)
    rho = init_density_product(6)
    # much lower f_min cuts populations hard enough to push Tr(rho^2) above 1
    ledger = make_ledger(0.99, 2 * c.two_qubit_count, "global")
    for op in c.ops:
        rho.apply_unitary_mpo(op.matrix, op.sites, ledger)
        rho.apply_depolarizing(op.sites, noise.eps2, ledger)
        p = rho.purity()
        assert 2.0**-6 <= p <= 1 + 1e-9
        assert abs(rho.trace() - 1) <= 1e-9
        d = rho.to_dense()
        assert np.max(np.abs(d - d.conj().T)) <= 1e-10
        assert max(rho.canonical_errors()) <= 1e-10


def test_pure_state_consistency_with_mps():
    c = gen_cheng_random(6, 6, 1)
    psi = exact_mps(c)
    rho = run_mpo(c, ledger=make_ledger(1.0, c.two_qubit_count))
    for k in range(6):
        psi.canonicalize(k)
        assert abs(psi.expectation_local(Z, k) - rho.expectation_mpo(Z, (k,))) <= 1e-9
    obs = np.kron(X, Z)
    for k in range(5):
        psi.canonicalize(k)
        assert abs(psi.expectation_local(obs, k) - rho.expectation_mpo(obs, (k, k + 1))) <= 1e-9


@pytest.mark.parametrize("f_min", [0.9, 0.99])
def test_noise_driven_bond_collapse(f_min):
    cfg = RunConfig(mode="mpo", circuit="haar", n_qubits=8, depth=40, seed=0, f_min=f_min, eps1=0.05, eps2=0.05)
    peaks = [max(p) for p in run(cfg).bond_profiles]
    assert peaks[-1] < max(peaks)
    assert 0 < int(np.argmax(peaks)) < len(peaks) - 1
