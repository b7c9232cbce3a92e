"""Wall-clock of EA runs against fixed-bond runs capped at the EA peak, vs qubit count.

    python scripts/ea_vs_fixed.py --qubits 8 12 16 20 --depth 20
    python scripts/ea_vs_fixed.py --mode mpo --qubits 4 6 8 --depth 10 --eps 0.01
"""

import argparse
import json

from easim.runner import RunConfig, compare

p = argparse.ArgumentParser()
p.add_argument("--mode", choices=("mps", "mpo"), default="mps")
p.add_argument("--qubits", type=int, nargs="+", default=[8, 12, 16, 20])
p.add_argument("--depth", type=int, default=20)
p.add_argument("--fidelity-min", type=float, default=0.999)
p.add_argument("--eps", type=float, default=0.0)
p.add_argument("--seed", type=int, default=0)
args = p.parse_args()

for n in args.qubits:
    cfg = RunConfig(mode=args.mode, circuit="cheng", n_qubits=n, depth=args.depth, seed=args.seed,
                    f_min=args.fidelity_min, eps1=args.eps, eps2=args.eps)
    res = compare(cfg)
    print(json.dumps({
        "qubits": n,
        "chi_max": res["chi_max"],
        "ea_s": res["ea"]["wall_ms"] / 1e3,
        "fixed_s": res["fixed"]["wall_ms"] / 1e3,
        "ea_estimate": res["ea"]["estimate"],
        "fixed_estimate": res["fixed"]["estimate"],
        "ea_final_bonds": res["ea"]["bond_profiles"][-1],
    }))
