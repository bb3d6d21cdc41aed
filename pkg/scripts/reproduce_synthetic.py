#!/usr/bin/env python3
"""Desk-scale reproduction: synthetic ontology -> embedding -> ROC/AUROC.

Generates a seeded forest-like ontology with injected loops, repairs it,
embeds at the requested dimension, evaluates the pair protocol and sweeps
the dimension, leaving all artifacts in the output directory.
"""

import argparse
import sys
from pathlib import Path

from ordersketch.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nodes", type=int, default=5000)
    ap.add_argument("--multi-lemma", type=int, default=1000)
    ap.add_argument("--cycles", type=int, default=10)
    ap.add_argument("--dim", type=int, default=100)
    ap.add_argument("--negatives-k", type=int, default=20)
    ap.add_argument("--seed", type=int, default=20260810)
    ap.add_argument("--sweep-dims", default="10,25,50,100,200,500")
    ap.add_argument("--out-dir", default="results/synthetic")
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    raw = out / "raw"
    fixed = out / "fixed"

    steps = [
        ["gen", "--nodes", str(args.nodes), "--multi-lemma", str(args.multi_lemma),
         "--cycles", str(args.cycles), "--seed", str(args.seed), "--out-prefix", str(raw)],
        ["fix-loops", "--nodes", f"{raw}.nodes.tsv", "--edges", f"{raw}.edges.tsv",
         "--out-prefix", str(fixed)],
        ["embed", "--nodes", f"{fixed}.nodes.tsv", "--edges", f"{fixed}.edges.tsv",
         "--dim", str(args.dim), "--seed", str(args.seed), "--out", str(out / "embedding.tsv")],
        ["eval", "--nodes", f"{fixed}.nodes.tsv", "--edges", f"{fixed}.edges.tsv",
         "--dim", str(args.dim), "--negatives-k", str(args.negatives_k), "--seed", str(args.seed),
         "--out-scores", str(out / "scores.csv"), "--out-roc", str(out / "roc.csv"),
         "--out-summary", str(out / "summary.tsv")],
        ["sweep", "--nodes", f"{fixed}.nodes.tsv", "--edges", f"{fixed}.edges.tsv",
         "--dims", args.sweep_dims, "--negatives-k", str(args.negatives_k),
         "--seed", str(args.seed), "--out", str(out / "auroc_by_dim.csv")],
    ]
    for step in steps:
        rc = cli_main(step)
        if rc != 0:
            return rc
    print(f"artifacts in {out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
