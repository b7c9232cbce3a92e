"""Linear-nearest-neighbour circuits, random circuit generators and JSON I/O."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

UNITARY_TOL = 1e-10


class CircuitError(ValueError):
    """Invalid circuit arguments or structure."""


class CircuitParseError(CircuitError):
    """Circuit JSON does not follow the schema; ``path`` locates the problem."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class NonUnitaryError(CircuitError):
    """Gate matrix fails the unitarity check."""


def unitarity_error(m: np.ndarray) -> float:
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


@dataclass(frozen=True, eq=False)
class GateOp:
    """A one- or two-qubit gate.

    Two-qubit ``sites`` are ordered: ``matrix`` acts on ``sites[0] ⊗ sites[1]``
    with ``sites[0]`` as the most significant qubit.
    """

    kind: str
    sites: tuple[int, ...]
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("1q", "2q"):
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        sites = tuple(int(s) for s in self.sites)
        if len(sites) != (1 if self.kind == "1q" else 2):
            raise CircuitError(f"{self.kind} gate needs {1 if self.kind == '1q' else 2} sites, got {sites}")
        if self.kind == "2q" and sites[0] == sites[1]:
            raise CircuitError(f"two-qubit gate on a repeated site {sites}")
        dim = 2 ** len(sites)
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (dim, dim):
            raise CircuitError(f"{self.kind} gate needs a {dim}x{dim} matrix, got {m.shape}")
        err = unitarity_error(m)
        if not err <= UNITARY_TOL:
            raise NonUnitaryError(f"gate {self.label!r} on {sites}: |U^dag U - I|_max = {err:.3g}")
        m.setflags(write=False)
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "matrix", m)

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    def dagger(self) -> GateOp:
        return GateOp(self.kind, self.sites, self.matrix.conj().T, self.label)


@dataclass(frozen=True, eq=False)
class Circuit:
    n_qubits: int
    ops: tuple[GateOp, ...] = ()
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if int(self.n_qubits) < 1:
            raise CircuitError(f"n_qubits must be positive, got {self.n_qubits}")
        object.__setattr__(self, "ops", tuple(self.ops))
        for i, op in enumerate(self.ops):
            for s in op.sites:
                if not 0 <= s < self.n_qubits:
                    raise CircuitError(f"op {i} acts on site {s} outside [0, {self.n_qubits})")

    def __len__(self):
        return len(self.ops)

    @property
    def two_qubit_count(self) -> int:
        return sum(op.kind == "2q" for op in self.ops)

    def layers(self) -> list[list[int]]:
        """Group consecutive ops into layers of gates on disjoint qubits."""
        out: list[list[int]] = []
        busy: set[int] = set()
        for i, op in enumerate(self.ops):
            if not out or busy.intersection(op.sites):
                out.append([])
                busy = set()
            out[-1].append(i)
            busy.update(op.sites)
        return out

    def __add__(self, other: Circuit) -> Circuit:
        if other.n_qubits != self.n_qubits:
            raise CircuitError("cannot concatenate circuits of different widths")
        return Circuit(self.n_qubits, self.ops + other.ops, dict(self.metadata))


def circuits_close(a: Circuit, b: Circuit, atol: float = 1e-14) -> bool:
    if a.n_qubits != b.n_qubits or len(a.ops) != len(b.ops):
        return False
    for x, y in zip(a.ops, b.ops):
        if x.kind != y.kind or x.sites != y.sites or x.label != y.label:
            return False
        if not np.allclose(x.matrix, y.matrix, rtol=0, atol=atol):
            return False
    return True


def validate_lnn(c: Circuit) -> list[tuple[int, GateOp]]:
    """Return the ``(index, op)`` pairs whose two sites are not neighbours."""
    return [(i, op) for i, op in enumerate(c.ops) if op.kind == "2q" and abs(op.sites[0] - op.sites[1]) != 1]


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def _brick_pairs(n_qubits: int, offset: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(offset, n_qubits - 1, 2)]


def _check_sizes(n_qubits: int, depth: int, min_qubits: int):
    if n_qubits < min_qubits:
        raise CircuitError(f"n_qubits must be >= {min_qubits}, got {n_qubits}")
    if depth < 1:
        raise CircuitError(f"depth must be >= 1, got {depth}")


def gen_haar_layers(n_qubits: int, depth: int, seed: int) -> Circuit:
    """Brickwork of Haar-random two-qubit gates; even layers start on pair (0, 1)."""
    _check_sizes(n_qubits, depth, 2)
    rng = np.random.default_rng(seed)
    ops = []
    for layer in range(depth):
        for pair in _brick_pairs(n_qubits, layer % 2):
            ops.append(GateOp("2q", pair, haar_unitary(4, rng), f"haar4_L{layer}"))
    meta = {"generator": "haar", "seed": seed, "depth": depth}
    return Circuit(n_qubits, tuple(ops), meta)


def gen_cheng_random(n_qubits: int, depth: int, seed: int) -> Circuit:
    """Alternate layers of one-qubit and two-qubit Haar-random gates.

    Layers are counted from 1: odd layers put a 2x2 unitary on every qubit,
    even layers put 4x4 unitaries on a brickwork whose offset alternates
    between successive two-qubit layers.
    """
    _check_sizes(n_qubits, depth, 1)
    rng = np.random.default_rng(seed)
    ops = []
    n_brick = 0
    for layer in range(1, depth + 1):
        if layer % 2 == 1:
            for q in range(n_qubits):
                ops.append(GateOp("1q", (q,), haar_unitary(2, rng), f"haar2_L{layer}"))
        else:
            for pair in _brick_pairs(n_qubits, n_brick % 2):
                ops.append(GateOp("2q", pair, haar_unitary(4, rng), f"haar4_L{layer}"))
            n_brick += 1
    meta = {"generator": "cheng", "seed": seed, "depth": depth}
    return Circuit(n_qubits, tuple(ops), meta)


def adjoint(c: Circuit) -> Circuit:
    return Circuit(c.n_qubits, tuple(op.dagger() for op in reversed(c.ops)), dict(c.metadata))


def gen_mirror(n_qubits: int, depth: int, seed: int) -> Circuit:
    """A Haar brickwork followed by its adjoint; the exact output is |0...0>."""
    fwd = gen_haar_layers(n_qubits, depth, seed)
    meta = {"generator": "mirror", "seed": seed, "depth": 2 * depth}
    return Circuit(n_qubits, fwd.ops + adjoint(fwd).ops, meta)


GENERATORS = {"haar": gen_haar_layers, "cheng": gen_cheng_random, "mirror": gen_mirror}


# -- JSON ---------------------------------------------------------------------


def _encode_matrix(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def serialize_circuit(c: Circuit) -> str:
    doc = {
        "n_qubits": c.n_qubits,
        "metadata": c.metadata,
        "ops": [
            {"kind": op.kind, "sites": list(op.sites), "matrix": _encode_matrix(op.matrix), "label": op.label}
            for op in c.ops
        ],
    }
    return json.dumps(doc)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _is_num(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _decode_matrix(raw, path: str) -> np.ndarray:
    if not isinstance(raw, list) or not raw:
        raise CircuitParseError(path, "matrix must be a nonempty list of rows")
    rows = []
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != len(raw):
            raise CircuitParseError(f"{path}[{i}]", f"row must be a list of {len(raw)} entries")
        vals = []
        for j, z in enumerate(row):
            if not (isinstance(z, list) and len(z) == 2 and all(_is_num(v) for v in z)):
                raise CircuitParseError(f"{path}[{i}][{j}]", "entry must be a [re, im] pair of numbers")
            vals.append(complex(z[0], z[1]))
        rows.append(vals)
    return np.array(rows, dtype=np.complex128)


def parse_circuit(text: str) -> Circuit:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitParseError("$", f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise CircuitParseError("$", "top level must be an object")
    n = doc.get("n_qubits")
    if not _is_int(n) or n < 1:
        raise CircuitParseError("$.n_qubits", "must be a positive integer")
    meta = doc.get("metadata", {})
    if not isinstance(meta, dict):
        raise CircuitParseError("$.metadata", "must be an object")
    raw_ops = doc.get("ops")
    if not isinstance(raw_ops, list):
        raise CircuitParseError("$.ops", "must be a list")
    ops = []
    for k, raw in enumerate(raw_ops):
        path = f"$.ops[{k}]"
        if not isinstance(raw, dict):
            raise CircuitParseError(path, "op must be an object")
        kind = raw.get("kind")
        if kind not in ("1q", "2q"):
            raise CircuitParseError(f"{path}.kind", "must be '1q' or '2q'")
        sites = raw.get("sites")
        want = 1 if kind == "1q" else 2
        if not (isinstance(sites, list) and len(sites) == want and all(_is_int(s) for s in sites)):
            raise CircuitParseError(f"{path}.sites", f"must be a list of {want} integers")
        if any(not 0 <= s < n for s in sites):
            raise CircuitParseError(f"{path}.sites", f"site out of range [0, {n})")
        matrix = _decode_matrix(raw.get("matrix"), f"{path}.matrix")
        label = raw.get("label", "")
        if not isinstance(label, str):
            raise CircuitParseError(f"{path}.label", "must be a string")
        try:
            ops.append(GateOp(kind, tuple(sites), matrix, label))
        except NonUnitaryError:
            raise
        except CircuitError as exc:
            raise CircuitParseError(path, str(exc)) from exc
    return Circuit(n, tuple(ops), meta)


# -- common fixed gates -------------------------------------------------------

H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
I2 = np.eye(2, dtype=np.complex128)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128)
PAULIS = (I2, X, Y, Z)
