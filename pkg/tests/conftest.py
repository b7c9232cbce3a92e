import numpy as np
import pytest

from easim.circuit import CNOT, H, gen_haar_layers
from easim.mps import init_product_state


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def exact_mps(circuit):
    """MPS of a circuit simulated without truncation."""
    state = init_product_state(circuit.n_qubits)
    for op in circuit.ops:
        if op.kind == "1q":
            state.apply_1q(op.matrix, op.sites[0])
        else:
            state.apply_2q(op.matrix, op.sites[0])
    return state


def random_mps(n, depth, seed):
    return exact_mps(gen_haar_layers(n, depth, seed))


def bell_mps():
    s = init_product_state(2)
    s.apply_1q(H, 0)
    s.apply_2q(CNOT, 0)
    return s


def ghz_mps(n):
    s = init_product_state(n)
    s.apply_1q(H, 0)
    for i in range(n - 1):
        s.apply_2q(CNOT, i)
    return s


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE: dict[int, str] = {}


def criterion(num: int, name: str, ok: bool, detail: str):
    status = "PASS" if ok else "FAIL"
    line = f"[{status}] criterion {num:>2} {name}: {detail}"
    ACCEPTANCE[num] = line
    print(line)
    assert ok, line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for num in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[num])
