import math
import random

import numpy as np
import pytest

from tracerank.corpus import Artifact, Role
from tracerank.embedding import EmbeddingMatrix
from tracerank.rerank import RewardConfig
from tracerank.similarity import RankedList


def src(art_id, text):
    return Artifact(id=art_id, role=Role.SOURCE, text=text)


def tgt(art_id, text):
    return Artifact(id=art_id, role=Role.TARGET, text=text)


def ranked(owner, pairs):
    return RankedList(owner_id=owner, entries=tuple((i, float(s)) for i, s in pairs))


@pytest.fixture
def reward_example():
    """Hand-built worked example: 8 targets, two HPTAs, a shared
    high-neighbour target with count 3 and two with count 1."""
    sa_list = ranked("SA1", [
        ("TA1", 0.9), ("TA2", 0.85), ("TA3", 0.8), ("TA4", 0.75),
        ("TA5", 0.5), ("TA6", 0.45), ("TA7", 0.4), ("TA8", 0.35),
    ])
    ta_lists = {
        "TA1": ranked("TA1", [("TA7", .95), ("TA8", .9), ("TA2", .3), ("TA3", .29),
                              ("TA4", .28), ("TA5", .27), ("TA6", .26)]),
        "TA2": ranked("TA2", [("TA7", .93), ("TA5", .88), ("TA1", .3), ("TA3", .29),
                              ("TA4", .28), ("TA6", .27), ("TA8", .26)]),
        "TA3": ranked("TA3", [("TA7", .9), ("TA6", .85), ("TA1", .3), ("TA2", .29),
                              ("TA4", .28), ("TA5", .27), ("TA8", .26)]),
        "TA4": ranked("TA4", [("TA2", .8), ("TA3", .7), ("TA1", .3), ("TA5", .2),
                              ("TA6", .19), ("TA7", .18), ("TA8", .17)]),
        "TA5": ranked("TA5", [("TA1", .8), ("TA2", .7), ("TA3", .3), ("TA4", .29),
                              ("TA6", .28), ("TA7", .27), ("TA8", .26)]),
        "TA6": ranked("TA6", [("TA1", .8), ("TA3", .7), ("TA2", .3), ("TA4", .29),
                              ("TA5", .28), ("TA7", .27), ("TA8", .26)]),
        "TA7": ranked("TA7", [("TA1", .8), ("TA2", .7), ("TA3", .3), ("TA4", .29),
                              ("TA5", .28), ("TA6", .27), ("TA8", .26)]),
        "TA8": ranked("TA8", [("TA1", .8), ("TA4", .7), ("TA2", .3), ("TA3", .29),
                              ("TA5", .28), ("TA6", .27), ("TA7", .26)]),
    }
    # cutoffs: k1 -> top 2 of 8, k2 -> top 2 of 7
    cfg = RewardConfig(k1=0.25, k2=0.29, rewarding_enabled=True)
    return sa_list, ta_lists, cfg


def random_reward_case(rng: random.Random):
    """Random small corpus expressed directly as embedding matrices."""
    n = rng.randint(1, 5)
    m = rng.randint(2, 12)
    dim = rng.randint(2, 8)
    npr = np.random.default_rng(rng.getrandbits(32))
    sa = EmbeddingMatrix(
        ids=tuple(f"S{i:02d}" for i in range(n)), rows=npr.normal(size=(n, dim))
    )
    ta = EmbeddingMatrix(
        ids=tuple(f"T{i:02d}" for i in range(m)), rows=npr.normal(size=(m, dim))
    )
    cfg = RewardConfig(k1=rng.uniform(0.01, 1.0), k2=rng.uniform(0.01, 1.0))
    return sa, ta, cfg


def brute_force_ap(flags, n_gold):
    """Independent AP oracle: precision at every prefix, from scratch."""
    total = 0.0
    for r in range(1, len(flags) + 1):
        if flags[r - 1]:
            prefix = flags[:r]
            total += sum(1 for f in prefix if f) / r
    return total / n_gold


def enumerate_wilcoxon_p(x, y):
    """Exact two-sided Wilcoxon p by enumerating all 2^n sign patterns."""
    from itertools import product

    from scipy.stats import rankdata

    diffs = [a - b for a, b in zip(x, y) if a != b]
    n = len(diffs)
    ranks = rankdata([abs(d) for d in diffs])
    w_obs = sum(r for r, d in zip(ranks, diffs) if d > 0)
    le = ge = 0
    for signs in product((0, 1), repeat=n):
        w = sum(r for r, s in zip(ranks, signs) if s)
        if w <= w_obs + 1e-12:
            le += 1
        if w >= w_obs - 1e-12:
            ge += 1
    return min(1.0, 2.0 * min(le, ge) / 2**n)


def brute_force_cliffs(x, y):
    gt = sum(1 for a in x for b in y if a > b)
    lt = sum(1 for a in x for b in y if a < b)
    return (gt - lt) / (len(x) * len(y))


def hand_specificity(count, m):
    return math.log((m - 1) / count)
