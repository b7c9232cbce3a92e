"""Peak MPO bond dimension per layer of a noisy Haar brickwork, for several F_min.

    python scripts/noise_collapse.py --qubits 8 --depth 40 --eps 0.05
"""

import argparse

from easim.runner import RunConfig, run

p = argparse.ArgumentParser()
p.add_argument("--qubits", type=int, default=8)
p.add_argument("--depth", type=int, default=40)
p.add_argument("--eps", type=float, default=0.05)
p.add_argument("--fidelity-min", type=float, nargs="+", default=[0.9, 0.99, 0.999])
p.add_argument("--seed", type=int, default=0)
args = p.parse_args()

for f_min in args.fidelity_min:
    cfg = RunConfig(mode="mpo", circuit="haar", n_qubits=args.qubits, depth=args.depth, seed=args.seed,
                    f_min=f_min, eps1=args.eps, eps2=args.eps)
    r = run(cfg)
    peaks = [max(prof, default=1) for prof in r.bond_profiles]
    print(f"f_min={f_min}: estimate {r.estimate:.4f}, wall {r.wall_ms / 1e3:.1f}s")
    print("  peak bond per layer:", peaks)
    print("  purity per layer:", [round(x, 4) for x in r.purity])
