"""End-to-end orchestration: single runs, (k1, k2) grid search, and the
rewarding-vs-none ablation. Embeddings are computed once per experiment and
shared across cells."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from . import corpus as corpus_mod
from . import embedding as emb
from . import evaluation as ev
from . import rerank
from . import similarity as sim
from .errors import PipelineError
from .rerank import RewardConfig


@dataclass(frozen=True)
class RunSpec:
    sources: str
    targets: str
    answers: str
    backend: str  # tfidf | lsi | wordvec | vectors
    reward: RewardConfig = field(default_factory=RewardConfig)
    dataset_name: str = ""
    lsi_rank: int | None = None
    wordvec_file: str | None = None
    vectors_sa: str | None = None
    vectors_ta: str | None = None
    out_dir: str | None = None

    def __post_init__(self):
        if self.backend not in ("tfidf", "lsi", "wordvec", "vectors"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.backend == "wordvec" and not self.wordvec_file:
            raise ValueError("backend 'wordvec' requires wordvec_file")
        if self.backend == "vectors" and not (self.vectors_sa and self.vectors_ta):
            raise ValueError("backend 'vectors' requires vectors_sa and vectors_ta")


@dataclass(frozen=True)
class GridResult:
    cells: dict[tuple[float, float], float]
    best: tuple[float, float, float]  # (k1, k2, map)


@dataclass
class PipelineRun:
    """Everything a single run produces; run_pipeline returns just .report."""

    report: ev.EvalReport
    links: dict[str, list[tuple[str, float]]]  # per-SA final links (top-K cut)
    reordered: dict[str, sim.RankedList]  # full reordered lists
    traces: list[rerank.RewardTrace]


def _stage(name: str):
    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and not isinstance(exc, PipelineError):
                raise PipelineError(name, exc) from exc
            return False

    return _Ctx()


@dataclass
class PreparedCorpus:
    """Corpus + embeddings + similarity structures, computed once."""

    corpus: corpus_mod.Corpus
    sa_lists: dict[str, sim.RankedList]
    ta_lists: dict[str, sim.RankedList]


def prepare(spec: RunSpec) -> PreparedCorpus:
    with _stage("load_corpus"):
        corpus = corpus_mod.load_corpus(spec.sources, spec.targets, spec.answers)
    with _stage("embed"):
        sa_mat, ta_mat = _embed(spec, corpus)
    with _stage("similarity"):
        matrix = sim.sa_ta_matrix(sa_mat, ta_mat)
        sa_lists = sim.sa_ta_lists(matrix)
        ta_lists = sim.ta_ta_lists(ta_mat)
    return PreparedCorpus(corpus=corpus, sa_lists=sa_lists, ta_lists=ta_lists)


def _embed(spec: RunSpec, corpus: corpus_mod.Corpus):
    n = len(corpus.sources)
    if spec.backend == "tfidf":
        # one vocabulary over both sides so SA and TA share a space
        combined, _ = emb.embed_tfidf(list(corpus.sources) + list(corpus.targets))
        return _split(combined, n)
    if spec.backend == "lsi":
        docs = list(corpus.sources) + list(corpus.targets)
        rank = spec.lsi_rank or emb.default_lsi_rank(len(docs))
        return _split(emb.embed_lsi(docs, rank), n)
    if spec.backend == "wordvec":
        table = emb.load_wordvec_table(spec.wordvec_file)
        return (
            emb.embed_wordvec(corpus.sources, table),
            emb.embed_wordvec(corpus.targets, table),
        )
    sa = emb.load_vectors(spec.vectors_sa, corpus.source_ids)
    ta = emb.load_vectors(spec.vectors_ta, corpus.target_ids)
    return sa, ta


def _split(matrix: emb.EmbeddingMatrix, n: int):
    return (
        emb.EmbeddingMatrix(ids=matrix.ids[:n], rows=matrix.rows[:n]),
        emb.EmbeddingMatrix(ids=matrix.ids[n:], rows=matrix.rows[n:]),
    )


def rerank_all(
    prep: PreparedCorpus, cfg: RewardConfig
) -> tuple[dict[str, sim.RankedList], list[rerank.RewardTrace]]:
    counts = rerank.build_count_table(prep.ta_lists, cfg)
    reordered = {}
    traces = []
    for sid in sorted(prep.sa_lists):
        new_list, trace = rerank.apply_rewards(prep.sa_lists[sid], prep.ta_lists, counts, cfg)
        reordered[sid] = new_list
        traces.append(trace)
    return reordered, traces


def evaluate(
    prep: PreparedCorpus,
    reordered: dict[str, sim.RankedList],
    spec: RunSpec,
) -> tuple[ev.EvalReport, dict[str, list[tuple[str, float]]]]:
    corpus = prep.corpus
    cfg = spec.reward
    links = {sid: rerank.final_links(reordered[sid], cfg) for sid in sorted(reordered)}
    retrieved = {(sid, tid) for sid, lst in links.items() for tid, _ in lst}
    precision, recall = ev.precision_recall(retrieved, corpus.answers)
    map_value = ev.mean_average_precision(reordered, corpus.answers)
    curve = ev.pooled_precision_at_recall_levels(reordered, corpus.answers)
    per_sa = {}
    for sid in sorted(reordered):
        gold = corpus_mod.gold_targets(corpus, sid)
        if not gold:
            continue
        sa_links = links[sid]
        hits = sum(1 for tid, _ in sa_links if tid in gold)
        per_sa[sid] = {
            "ap": ev.average_precision(reordered[sid], set(gold)),
            "precision_at_k": hits / len(sa_links) if sa_links else 0.0,
            "recall_at_k": hits / len(gold),
        }
    report = ev.EvalReport(
        dataset=spec.dataset_name or Path(spec.sources).parent.name,
        backend=spec.backend,
        k1=cfg.k1,
        k2=cfg.k2,
        rewarding=cfg.rewarding_enabled,
        map=map_value,
        precision=precision,
        recall=recall,
        f1=ev.f_beta(precision, recall, 1.0),
        f2=ev.f_beta(precision, recall, 2.0),
        pr_curve=curve,
        per_sa=per_sa,
    )
    return report, links


def run(spec: RunSpec) -> PipelineRun:
    prep = prepare(spec)
    with _stage("rerank"):
        reordered, traces = rerank_all(prep, spec.reward)
    with _stage("evaluate"):
        report, links = evaluate(prep, reordered, spec)
    return PipelineRun(report=report, links=links, reordered=reordered, traces=traces)


def run_pipeline(spec: RunSpec) -> ev.EvalReport:
    return run(spec).report


def grid_values(step: float) -> list[float]:
    steps = round(1.0 / step)
    if abs(steps * step - 1.0) > 1e-9:
        raise ValueError(f"step {step} does not divide 1 evenly")
    return [i / steps for i in range(1, steps + 1)]


def grid_search(spec: RunSpec, step: float = 0.01) -> GridResult:
    """Exhaustive MAP over (k1, k2) in {step, 2*step, ..., 1}^2.

    MAP uses full ranked lists regardless of spec.reward.top_k_links; ties for
    the best cell go to the smallest k1, then the smallest k2.
    """
    values = grid_values(step)
    prep = prepare(spec)
    answers = prep.corpus.answers
    cells: dict[tuple[float, float], float] = {}
    base_cfg = replace(spec.reward, top_k_links="all")
    for k2 in values:
        counts = rerank.build_count_table(prep.ta_lists, replace(base_cfg, k2=k2))
        for k1 in values:
            cfg = replace(base_cfg, k1=k1, k2=k2)
            reordered = {
                sid: rerank.apply_rewards(prep.sa_lists[sid], prep.ta_lists, counts, cfg)[0]
                for sid in sorted(prep.sa_lists)
            }
            cells[(k1, k2)] = ev.mean_average_precision(reordered, answers)
    best_k1, best_k2 = min(cells, key=lambda kk: (-cells[kk], kk[0], kk[1]))
    return GridResult(cells=cells, best=(best_k1, best_k2, cells[(best_k1, best_k2)]))


def ablation(spec: RunSpec) -> tuple[ev.EvalReport, ev.EvalReport, ev.StatResult]:
    """Rewarding-on vs rewarding-off on identical embeddings, plus stats on
    the two pooled precision-at-recall curves."""
    prep = prepare(spec)
    with_spec = replace(spec, reward=replace(spec.reward, rewarding_enabled=True))
    without_spec = replace(spec, reward=replace(spec.reward, rewarding_enabled=False))
    reordered_on, _ = rerank_all(prep, with_spec.reward)
    reordered_off, _ = rerank_all(prep, without_spec.reward)
    report_on, _ = evaluate(prep, reordered_on, with_spec)
    report_off, _ = evaluate(prep, reordered_off, without_spec)
    stats = ev.compare_precision_curves(report_on.pr_curve, report_off.pr_curve)
    return report_on, report_off, stats


def write_grid_csv(file, result: GridResult) -> None:
    with open(file, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("k1,k2,map\n")
        for (k1, k2), m in sorted(result.cells.items()):
            fh.write(f"{k1:.17g},{k2:.17g},{m:.17g}\n")
