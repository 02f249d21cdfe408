#!/usr/bin/env python3
"""End-to-end demo: build a synthetic corpus, run the TF-IDF pipeline with and
without rewarding, and sweep (k1, k2).

    python scripts/run_benchmark.py out/bench [--step 0.05]
"""

import argparse
import time
from pathlib import Path

from tracerank.cli import main as cli
from tracerank.synthetic import make_corpus_tree


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", help="working directory")
    parser.add_argument("--sources", type=int, default=30)
    parser.add_argument("--targets", type=int, default=63)
    parser.add_argument("--links", type=int, default=251)
    parser.add_argument("--step", type=float, default=0.05)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    out = Path(args.out)
    s, t, a = make_corpus_tree(out / "data", args.sources, args.targets, args.links, args.seed)
    base = ["--sources", str(s), "--targets", str(t), "--answers", str(a)]

    start = time.time()
    cli(["trace", *base, "--k1", "0.03", "--k2", "0.08", "--top-k", "6",
         "--out", str(out / "trace")])
    cli(["ablate", *base, "--k1", "0.03", "--k2", "0.08", "--out", str(out / "ablate")])
    cli(["grid", *base, "--step", str(args.step), "--out", str(out / "grid")])
    print(f"done in {time.time() - start:.1f}s -> {out}")


if __name__ == "__main__":
    main()
