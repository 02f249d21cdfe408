"""IR metrics (precision/recall, AP, MAP, F-beta, interpolated P-R curve) and
the two significance statistics used for comparisons: the Wilcoxon signed-rank
test and Cliff's delta effect size."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .corpus import AnswerSet
from .errors import EmptyGoldSet, NoEvaluableSources, TooFewPairs
from .similarity import RankedList

RECALL_LEVELS = tuple((i + 1) / 10 for i in range(10))


@dataclass
class EvalReport:
    dataset: str
    backend: str
    k1: float
    k2: float
    rewarding: bool
    map: float
    precision: float
    recall: float
    f1: float
    f2: float
    pr_curve: list[float]
    per_sa: dict[str, dict[str, float]] = field(default_factory=dict)

    def to_json(self) -> str:
        obj = {
            "dataset": self.dataset,
            "backend": self.backend,
            "k1": self.k1,
            "k2": self.k2,
            "rewarding": self.rewarding,
            "map": self.map,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "f2": self.f2,
            "pr_curve": self.pr_curve,
            "per_sa": self.per_sa,
        }
        return dumps_17g(obj)


@dataclass(frozen=True)
class StatResult:
    p_value: float | None
    cliffs_delta: float
    magnitude: str
    n: int
    degenerate: bool = False


def dumps_17g(obj, indent: int = 0) -> str:
    """JSON with floats at 17 significant digits and insertion key order."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f'{pad}  "{k}": {dumps_17g(v, indent + 1)}' for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[" + ", ".join(dumps_17g(v, indent) for v in obj) + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, float):
        return format(obj, ".17g")
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    raise TypeError(f"cannot serialize {type(obj)!r}")


def precision_recall(
    retrieved: set[tuple[str, str]], gold: AnswerSet
) -> tuple[float, float]:
    """Set precision/recall over links; precision is 0 for empty retrieval."""
    if not gold.links:
        raise EmptyGoldSet("recall undefined: gold set has zero links")
    correct = len(retrieved & gold.links)
    precision = correct / len(retrieved) if retrieved else 0.0
    recall = correct / len(gold.links)
    return precision, recall


def average_precision(ranked: RankedList, gold: set[str]) -> float:
    """Mean of precision-at-rank over relevant ranks, divided by |gold|."""
    if not gold:
        raise EmptyGoldSet(f"no gold targets for {ranked.owner_id}")
    hits = 0
    total = 0.0
    for r, (tid, _) in enumerate(ranked.entries, 1):
        if tid in gold:
            hits += 1
            total += hits / r
    return total / len(gold)


def mean_average_precision(
    lists: dict[str, RankedList], answers: AnswerSet
) -> float:
    """Mean AP over sources that have at least one gold link, in id order."""
    gold_by_source: dict[str, set[str]] = {}
    for s, t in answers.links:
        gold_by_source.setdefault(s, set()).add(t)
    aps = [
        average_precision(lists[sid], gold_by_source[sid])
        for sid in sorted(lists)
        if sid in gold_by_source
    ]
    if not aps:
        raise NoEvaluableSources("no source has a gold link")
    return sum(aps) / len(aps)


def f_beta(p: float, r: float, beta: float) -> float:
    denom = beta * beta * p + r
    if denom == 0.0:
        return 0.0
    return (1 + beta * beta) * p * r / denom


def _interpolated_levels(relevant_flags: list[bool], n_gold: int) -> list[float]:
    # precision/recall at every cutoff, then max precision with recall >= L
    hits = 0
    points = []  # (recall, precision) per cutoff
    for k, rel in enumerate(relevant_flags, 1):
        if rel:
            hits += 1
        points.append((hits / n_gold, hits / k))
    out = []
    for level in RECALL_LEVELS:
        best = 0.0
        for rec, prec in points:
            if rec >= level - 1e-12 and prec > best:
                best = prec
        out.append(best)
    return out


def precision_at_recall_levels(ranked: RankedList, gold: set[str]) -> list[float]:
    """Interpolated precision at recall 0.1..1.0 for one ranked list."""
    if not gold:
        raise EmptyGoldSet(f"no gold targets for {ranked.owner_id}")
    flags = [tid in gold for tid, _ in ranked.entries]
    return _interpolated_levels(flags, len(gold))


def pooled_precision_at_recall_levels(
    lists: dict[str, RankedList], answers: AnswerSet
) -> list[float]:
    """Corpus-level curve: all (SA, TA) pairs pooled into one global ranking
    by score (ties by sa_id then ta_id), scored against the full answer set."""
    if not answers.links:
        raise EmptyGoldSet("answer set has zero links")
    pooled = []
    for sid in sorted(lists):
        for tid, score in lists[sid].entries:
            pooled.append((-score, sid, tid))
    pooled.sort()
    flags = [(sid, tid) in answers.links for _, sid, tid in pooled]
    return _interpolated_levels(flags, len(answers.links))


def _signed_ranks(x: list[float], y: list[float]) -> tuple[list[float], list[int]]:
    if len(x) != len(y):
        raise ValueError("samples must have equal length")
    diffs = [a - b for a, b in zip(x, y) if a != b]
    if len(diffs) < 5:
        raise TooFewPairs(f"only {len(diffs)} nonzero differences (need >= 5)")
    order = sorted(range(len(diffs)), key=lambda i: abs(diffs[i]))
    ranks = [0.0] * len(diffs)
    i = 0
    while i < len(order):
        j = i
        while j < len(order) and abs(diffs[order[j]]) == abs(diffs[order[i]]):
            j += 1
        avg = (i + 1 + j) / 2  # average of ranks i+1 .. j
        for k in range(i, j):
            ranks[order[k]] = avg
        i = j
    signs = [1 if d > 0 else -1 for d in diffs]
    return ranks, signs


def wilcoxon_signed_rank(x: list[float], y: list[float]) -> float:
    """Two-sided p-value; exact null distribution for n <= 25 (dynamic
    programming over doubled ranks), normal approximation with continuity
    correction above. Zero differences dropped, ties get average ranks."""
    ranks, signs = _signed_ranks(x, y)
    n = len(ranks)
    w_plus = sum(r for r, s in zip(ranks, signs) if s > 0)
    if n <= 25:
        doubled = [round(2 * r) for r in ranks]
        total = sum(doubled)
        dist = [0] * (total + 1)
        dist[0] = 1
        for d in doubled:
            for s in range(total, d - 1, -1):
                dist[s] += dist[s - d]
        w2 = round(2 * w_plus)
        count_le = sum(dist[: w2 + 1])
        count_ge = sum(dist[w2:])
        tail = min(count_le, count_ge) / (2**n)
        return min(1.0, 2.0 * tail)
    mean = n * (n + 1) / 4
    var = n * (n + 1) * (2 * n + 1) / 24
    # tie correction on the rank multiset
    seen: dict[float, int] = {}
    for r in ranks:
        seen[r] = seen.get(r, 0) + 1
    var -= sum((t**3 - t) / 48 for t in seen.values() if t > 1)
    d = w_plus - mean
    z = (abs(d) - 0.5) / math.sqrt(var)
    return math.erfc(z / math.sqrt(2))


_DELTA_THRESHOLDS = ((0.147, "negligible"), (0.33, "small"), (0.474, "medium"))


def delta_magnitude(delta: float) -> str:
    for threshold, label in _DELTA_THRESHOLDS:
        if abs(delta) < threshold:
            return label
    return "large"


def cliffs_delta(x: list[float], y: list[float]) -> tuple[float, str]:
    """(#{x_i > y_j} - #{x_i < y_j}) / (|x||y|), with the standard magnitude label."""
    if not x or not y:
        raise ValueError("both samples must be non-empty")
    xa = np.asarray(x, dtype=np.float64)[:, None]
    ya = np.asarray(y, dtype=np.float64)[None, :]
    gt = int(np.sum(xa > ya))
    lt = int(np.sum(xa < ya))
    delta = (gt - lt) / (len(x) * len(y))
    return delta, delta_magnitude(delta)


def compare_precision_curves(with_curve: list[float], without_curve: list[float]) -> StatResult:
    """Wilcoxon + Cliff's delta on the two 10-point precision vectors."""
    delta, magnitude = cliffs_delta(with_curve, without_curve)
    try:
        p = wilcoxon_signed_rank(with_curve, without_curve)
    except TooFewPairs:
        return StatResult(
            p_value=None,
            cliffs_delta=delta,
            magnitude=magnitude,
            n=len(with_curve),
            degenerate=True,
        )
    return StatResult(p_value=p, cliffs_delta=delta, magnitude=magnitude, n=len(with_curve))
