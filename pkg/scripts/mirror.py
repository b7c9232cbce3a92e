"""Bond profiles of a Haar brickwork followed by its adjoint.

Bonds grow with the forward half and shrink back to 1 during the adjoint.

    python scripts/mirror.py --qubits 20 --depth 10 --out mirror.json
"""

import argparse

from easim.runner import RunConfig, run

p = argparse.ArgumentParser()
p.add_argument("--qubits", type=int, default=20)
p.add_argument("--depth", type=int, default=10, help="layers in the forward half")
p.add_argument("--fidelity-min", type=float, default=0.99)
p.add_argument("--seed", type=int, default=0)
p.add_argument("--out", default="mirror.json")
args = p.parse_args()

r = run(RunConfig(mode="mps", circuit="mirror", n_qubits=args.qubits, depth=args.depth, seed=args.seed,
                  f_min=args.fidelity_min, out=args.out))
for layer, prof in enumerate(r.bond_profiles):
    print(f"{layer:3d} " + " ".join(f"{b:4d}" for b in prof))
print(f"estimate {r.estimate:.5f}  peak chi {r.peak_chi}  {r.wall_ms / 1e3:.1f}s")
