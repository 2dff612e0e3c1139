"""Scaling sweep over ER (mean degree 3) and RGG (mean degree 8) networks, T = 3.

    python3 scripts/run_scaling_sweep.py [--config scripts/scaling_sweep.json] [--out results/scaling_sweep.csv]

Writes the per-instance CSV and prints one line per (model, N) with feasibility,
mean Pareto-set size and mean runtime, then the Spearman correlation of mean
runtime against N for each model.
"""

import argparse
import os
from pathlib import Path

from scipy.stats import spearmanr

from entroute.sweep import load_sweep_config, run_sweep, summarize, write_sweep

HERE = Path(__file__).resolve().parent


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=HERE / "scaling_sweep.json")
    ap.add_argument("--out", default=HERE.parent / "results" / "scaling_sweep.csv")
    ap.add_argument("--jobs", type=int, default=int(os.environ.get("ENTROUTE_JOBS", "1")))
    args = ap.parse_args()

    cfg = load_sweep_config(args.config)
    rows = run_sweep(cfg, jobs=args.jobs, progress=True)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        write_sweep(rows, fh)

    summary = summarize(rows)
    print(f"{'model':<18}{'N':>5}{'feasible':>10}{'stars':>8}{'runtime_ms':>12}")
    for s in summary:
        stars = s["mean_num_pareto_stars"]
        print(f"{s['model']:<18}{s['N']:>5}{s['feasible_fraction']:>10.2f}"
              f"{stars if stars is None else round(stars, 2):>8}{s['mean_runtime_ms']:>12.1f}")
    for model in dict.fromkeys(s["model"] for s in summary):
        pts = [(s["N"], s["mean_runtime_ms"]) for s in summary if s["model"] == model]
        rho = spearmanr(*zip(*pts)).statistic
        print(f"spearman(runtime, N) {model}: {rho:.3f}")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
