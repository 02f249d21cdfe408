"""Specificity-based rewarding: promote targets that are near-neighbours of a
source's best-ranked targets, weighting each reward by how selective that
neighbourhood relationship is.

Pipeline per source: the top-k1 cut of its target ranking gives the high
probability targets (HPTAs); the top-k2 cut of each HPTA's target-target
ranking gives the reward candidates (TRTAs); each TRTA's reward moves its
score toward the list's original top score, weighted by normalized
specificity ln((m-1)/count).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError
from .similarity import RankedList, rank_entries


@dataclass(frozen=True)
class RewardConfig:
    k1: float = 0.03
    k2: float = 0.08
    rewarding_enabled: bool = True
    top_k_links: int | str = "all"  # positive int or "all"

    def __post_init__(self):
        if not (0.0 < self.k1 <= 1.0) or not (0.0 < self.k2 <= 1.0):
            raise ValueError("k1 and k2 must lie in (0, 1]")
        if self.top_k_links != "all" and (
            not isinstance(self.top_k_links, int) or self.top_k_links < 1
        ):
            raise ValueError("top_k_links must be a positive integer or 'all'")


@dataclass(frozen=True)
class CountTable:
    count: dict[str, int]
    m: int  # total number of targets


@dataclass(frozen=True)
class TraceRow:
    sa_id: str
    hpta_id: str
    trta_id: str
    count: int
    spec: float
    sim_origin: float
    reward: float
    sim_new: float


@dataclass
class RewardTrace:
    rows: list[TraceRow] = field(default_factory=list)


def cutoff(k: float, list_len: int) -> int:
    """Convert a fractional threshold to a list prefix length (always >= 1)."""
    if not (0.0 < k <= 1.0):
        raise ValueError("k must lie in (0, 1]")
    if list_len < 1:
        raise ValueError("list_len must be positive")
    return min(list_len, max(1, math.floor(k * list_len + 1e-9)))


def select_hptas(sa_list: RankedList, cfg: RewardConfig) -> list[str]:
    """The top-k1 cut of the source's target ranking, in rank order."""
    n = cutoff(cfg.k1, len(sa_list.entries))
    return [tid for tid, _ in sa_list.entries[:n]]


def build_count_table(ta_lists: dict[str, RankedList], cfg: RewardConfig) -> CountTable:
    """count[t] = number of target-target lists (over all m) whose top-k2 cut
    contains t."""
    m = len(ta_lists)
    if m < 2:
        raise ValueError("need at least two targets")
    top_n = cutoff(cfg.k2, m - 1)
    count = {tid: 0 for tid in ta_lists}
    for ranked in ta_lists.values():
        for tid, _ in ranked.entries[:top_n]:
            count[tid] += 1
    return CountTable(count=count, m=m)


def specificity(count: int, m: int, base: float = math.e) -> float:
    """ln((m-1)/count); high when a target is close to few other targets.

    count = 0 or count > m-1 signals a pipeline bug: any reward candidate sits
    in its own HPTA's top-k2 list, so its count is at least 1.
    """
    if m < 2:
        raise DomainError(f"m must be >= 2, got {m}")
    if count < 1 or count > m - 1:
        raise DomainError(f"count {count} outside [1, {m - 1}]")
    return math.log((m - 1) / count, base)


def apply_rewards(
    sa_list: RankedList,
    ta_lists: dict[str, RankedList],
    counts: CountTable,
    cfg: RewardConfig,
    log_base: float = math.e,
) -> tuple[RankedList, RewardTrace]:
    """Reward TRTAs and re-sort the source's target ranking.

    Rewards are computed from the ORIGINAL list's top score and original
    per-target scores (no cascading). A target rewarded via several HPTAs
    keeps the maximum candidate score. The log base cancels in the
    normalized specificity weights; it is exposed only for verification.
    """
    trace = RewardTrace()
    if not cfg.rewarding_enabled:
        return sa_list, trace

    m = counts.m
    sim_first = sa_list.entries[0][1]
    origin = {tid: score for tid, score in sa_list.entries}
    best_new: dict[str, float] = {}

    top_n = cutoff(cfg.k2, m - 1)
    for hpta in select_hptas(sa_list, cfg):
        trtas = [tid for tid, _ in ta_lists[hpta].entries[:top_n]]
        specs = {t: specificity(counts.count[t], m, base=log_base) for t in trtas}
        total = sum(specs[t] for t in trtas)
        for t in trtas:
            weight = specs[t] / total if total > 0.0 else 0.0
            reward = (sim_first - origin[t]) * weight
            sim_new = origin[t] + reward
            trace.rows.append(
                TraceRow(
                    sa_id=sa_list.owner_id,
                    hpta_id=hpta,
                    trta_id=t,
                    count=counts.count[t],
                    spec=specs[t],
                    sim_origin=origin[t],
                    reward=reward,
                    sim_new=sim_new,
                )
            )
            if t not in best_new or sim_new > best_new[t]:
                best_new[t] = sim_new

    final_scores = [(tid, best_new.get(tid, score)) for tid, score in sa_list.entries]
    return rank_entries(sa_list.owner_id, final_scores), trace


def final_links(reordered: RankedList, cfg: RewardConfig) -> list[tuple[str, float]]:
    """Emit the trace links: the top-K cut of the reordered list (or all)."""
    if cfg.top_k_links == "all":
        return list(reordered.entries)
    return list(reordered.entries[: cfg.top_k_links])


def write_trace_csv(file, traces: list[RewardTrace]) -> None:
    with open(file, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("sa_id,hpta_id,trta_id,count,spec,sim_origin,reward,sim_new\n")
        for trace in traces:
            for r in trace.rows:
                fh.write(
                    f"{r.sa_id},{r.hpta_id},{r.trta_id},{r.count},"
                    f"{r.spec:.17g},{r.sim_origin:.17g},{r.reward:.17g},{r.sim_new:.17g}\n"
                )
