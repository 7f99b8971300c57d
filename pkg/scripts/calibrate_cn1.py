"""Sweep the spike-count penalty constant c_n1.

For each candidate value, reports how often the spike-count criterion
recovers the planted number of spikes on

* a 3-spike model (loadings 50, 40, 30, unit noise, n=400, p=600),
* the spiked designs of scenarios 1.1, 1.5, 2.1 and 2.5 (81 / 51 spikes).

Only the singular values are needed, so each replicate costs one SVD.

    python scripts/calibrate_cn1.py --replicates 50
"""

import argparse

import numpy as np

from wlscreen.simgen import generate, get_scenario, make_spiked_design, replicate_rng
from wlscreen.spectrum import bic_spike_count, center_columns, numerical_rank, theta_sequence

CANDIDATES = [1e-5, 1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.5, 1.0, 2.0]


def spectra_planted(reps, seed):
    out = []
    for r in range(reps):
        X = make_spiked_design(400, 600, [50, 40, 30], "identity", replicate_rng(seed, r))
        s = np.linalg.svd(center_columns(X).values, compute_uv=False)
        out.append((400, s[: numerical_rank(s)]))
    return out


def spectra_scenario(sid, reps):
    cfg = get_scenario(sid)
    out = []
    for r in range(reps):
        X, _ = generate(cfg, r)
        s = np.linalg.svd(center_columns(X).values, compute_uv=False)
        out.append((cfg.n, s[: numerical_rank(s)]))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--replicates", type=int, default=50)
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()

    cases = {"planted-3": (3, spectra_planted(args.replicates, args.seed))}
    for sid, d in [("1.1", 81), ("1.5", 81), ("2.1", 51), ("2.5", 51)]:
        cases[sid] = (d, spectra_scenario(sid, args.replicates))

    print("c_n1      " + "  ".join(f"{k:>10}" for k in cases))
    for c in CANDIDATES:
        cells = []
        for d, spectra in cases.values():
            hats = [bic_spike_count(theta_sequence(s), n, c).d_hat for n, s in spectra]
            cells.append(f"{np.mean(np.array(hats) == d):5.2f}/{np.median(hats):4.0f}")
        print(f"{c:<8g}  " + "  ".join(f"{x:>10}" for x in cells))
    print("cells: fraction of replicates with d_hat == planted d / median d_hat")


if __name__ == "__main__":
    main()
