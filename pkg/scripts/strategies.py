"""Final fidelity estimate per target strategy on noiseless Haar brickworks.

    python scripts/strategies.py --qubits 16 --depth 20 --seeds 5
"""

import argparse
import json

from easim.runner import RunConfig, run

p = argparse.ArgumentParser()
p.add_argument("--qubits", type=int, default=16)
p.add_argument("--depth", type=int, default=20)
p.add_argument("--seeds", type=int, default=5)
p.add_argument("--fidelity-min", type=float, nargs="+", default=[0.5, 0.7, 0.9, 0.99])
p.add_argument("--oracle-check", action="store_true")
args = p.parse_args()

rows = []
for f_min in args.fidelity_min:
    for seed in range(args.seeds):
        for strategy in ("naive", "nearest", "global"):
            cfg = RunConfig(mode="mps", circuit="haar", n_qubits=args.qubits, depth=args.depth, seed=seed,
                            f_min=f_min, strategy=strategy, oracle_check=args.oracle_check)
            r = run(cfg)
            rows.append({"f_min": f_min, "seed": seed, "strategy": strategy, "estimate": r.estimate,
                         "oracle_fidelity": r.oracle_fidelity, "peak_chi": r.peak_chi})
            print(json.dumps(rows[-1]))
