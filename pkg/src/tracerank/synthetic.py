"""Deterministic synthetic corpora for experiments and acceptance runs.

Each gold-linked source/target pair shares topic words, so embedding
similarity carries real signal; everything is driven by a seeded RNG.
"""

from __future__ import annotations

import random
from pathlib import Path

_WORDS = [
    "system", "module", "sensor", "record", "patient", "account", "session",
    "telemetry", "payload", "schedule", "orbit", "thermal", "signal", "buffer",
    "command", "uplink", "archive", "report", "display", "network", "protocol",
    "encrypt", "validate", "monitor", "configure", "calibrate", "transmit",
    "storage", "backup", "interface", "operator", "alarm", "threshold",
    "diagnostic", "firmware", "packet", "queue", "latency", "bandwidth",
    "register", "clinic", "doctor", "visit", "prescription", "billing",
]


def make_corpus_tree(
    root,
    n_sources: int,
    n_targets: int,
    n_links: int,
    seed: int = 0,
) -> tuple[Path, Path, Path]:
    """Write a synthetic corpus under root; returns (sources, targets, answers)."""
    rng = random.Random(seed)
    root = Path(root)
    src_dir = root / "sources"
    tgt_dir = root / "targets"
    src_dir.mkdir(parents=True, exist_ok=True)
    tgt_dir.mkdir(parents=True, exist_ok=True)

    source_ids = [f"SA{i:03d}" for i in range(1, n_sources + 1)]
    target_ids = [f"TA{i:03d}" for i in range(1, n_targets + 1)]

    # one small topic vocabulary per source; linked targets borrow from it
    topics = {
        sid: rng.sample(_WORDS, 6) for sid in source_ids
    }
    all_pairs = [(s, t) for s in source_ids for t in target_ids]
    rng.shuffle(all_pairs)
    links = sorted(all_pairs[:n_links])

    linked_topics: dict[str, list[str]] = {tid: [] for tid in target_ids}
    for s, t in links:
        linked_topics[t].extend(topics[s])

    for sid in source_ids:
        words = topics[sid] * 3 + rng.sample(_WORDS, 8)
        rng.shuffle(words)
        (src_dir / f"{sid}.txt").write_text(
            f"The {sid} requirement: " + " ".join(words) + ".\n", encoding="utf-8"
        )
    for tid in target_ids:
        words = list(linked_topics[tid]) + rng.sample(_WORDS, 10)
        rng.shuffle(words)
        (tgt_dir / f"{tid}.txt").write_text(
            f"Target {tid} procedure: " + " ".join(words) + ".\n", encoding="utf-8"
        )

    answers = root / "answers.tsv"
    with open(answers, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# synthetic gold links\n")
        for s, t in links:
            fh.write(f"{s}\t{t}\n")
    return src_dir, tgt_dir, answers
