#!/usr/bin/env python3
"""Generate a deterministic synthetic corpus tree for experiments.

Example (EasyClinic-shaped):
    python scripts/make_dataset.py out/easyclinic-shape --sources 30 --targets 63 --links 251
"""

import argparse

from tracerank.synthetic import make_corpus_tree


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("root", help="output directory")
    parser.add_argument("--sources", type=int, default=30)
    parser.add_argument("--targets", type=int, default=63)
    parser.add_argument("--links", type=int, default=251)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()
    s, t, a = make_corpus_tree(args.root, args.sources, args.targets, args.links, args.seed)
    print(f"sources: {s}\ntargets: {t}\nanswers: {a}")


if __name__ == "__main__":
    main()
