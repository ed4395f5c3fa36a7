#!/usr/bin/env python3
"""Generate a synthetic propagation dataset in the Twitter15/16 file layout.

Writes tree/ (one file per source tweet), label.txt, and harmful.txt under
the output directory, plus a ready-to-run pipeline config. Sized so the full
CLI walkthrough in the README finishes in seconds.
"""
from __future__ import annotations

import argparse
import json
from pathlib import Path

import numpy as np

CLASS_NAMES = ["true", "false", "unverified", "non-rumor"]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="demo_data", help="output directory")
    parser.add_argument("--tweets", type=int, default=60)
    parser.add_argument("--users", type=int, default=400)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.Generator(np.random.PCG64(args.seed))
    out = Path(args.out)
    tree_dir = out / "tree"
    tree_dir.mkdir(parents=True, exist_ok=True)

    labels = []
    spreaders: set[str] = set()
    for t in range(args.tweets):
        tweet_id = f"60{t:05d}"
        cls = CLASS_NAMES[int(rng.integers(0, 4))]
        labels.append(f"{cls}:{tweet_id}")
        src_user = f"u{rng.integers(0, args.users)}"
        lines = [f"['ROOT', 'ROOT', '0.0']->['{src_user}', '{tweet_id}', '0.0']"]
        frontier = [(src_user, tweet_id, 0.0)]
        for _ in range(int(rng.integers(8, 40))):
            pu, pt, ptime = frontier[int(rng.integers(0, len(frontier)))]
            # preferential growth keeps a few hub users like real cascades
            if rng.random() < 0.3 and len(frontier) > 3:
                pu, pt, ptime = frontier[0]
            cu = f"u{rng.integers(0, args.users)}"
            ct = f"{tweet_id}{rng.integers(0, 10**6):06d}"
            ctime = ptime + float(rng.random() * 60)
            lines.append(f"['{pu}', '{pt}', '{ptime:.2f}']->['{cu}', '{ct}', '{ctime:.2f}']")
            frontier.append((cu, ct, ctime))
            if cls == "false":
                spreaders.add(pu)
        (tree_dir / f"{tweet_id}.txt").write_text("\n".join(lines) + "\n")

    (out / "label.txt").write_text("\n".join(labels) + "\n")
    (out / "harmful.txt").write_text("".join(f"{u}\n" for u in sorted(spreaders)))
    config = {
        "trees": "tree",
        "harmful": "harmful.txt",
        "fraction": 0.5,
        "algorithm": "sparseshield",
        "k": 20,
        "p": 0.1,
        "trials": 200,
        "master_seed": 7,
        "output_dir": "out",
    }
    (out / "config.json").write_text(json.dumps(config, indent=2) + "\n")
    print(f"wrote {args.tweets} trees, {len(spreaders)} harmful users -> {out}/")


if __name__ == "__main__":
    main()
