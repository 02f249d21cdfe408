"""Command-line surface: `trace` (single run), `grid` (threshold sweep),
`ablate` (rewarding vs none). stdout carries a one-line summary; all data
goes to files. Exit codes: 0 ok, 1 runtime failure, 2 usage error."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .corpus import load_manifest
from .errors import PipelineError, TraceRankError
from .evaluation import dumps_17g
from .experiment import (
    RunSpec,
    ablation,
    grid_search,
    grid_values,
    run,
    write_grid_csv,
)
from .rerank import RewardConfig, write_trace_csv


def _add_dataset_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--manifest", help="key=value file providing sources/targets/answers")
    p.add_argument("--sources", help="directory of source artifact .txt files")
    p.add_argument("--targets", help="directory of target artifact .txt files")
    p.add_argument("--answers", help="TSV gold answer file")
    p.add_argument(
        "--backend", choices=["tfidf", "lsi", "wordvec", "vectors"], default="tfidf"
    )
    p.add_argument("--vectors-sa", help="precomputed SA vector file (backend=vectors)")
    p.add_argument("--vectors-ta", help="precomputed TA vector file (backend=vectors)")
    p.add_argument("--wordvec", help="word-vector table file (backend=wordvec)")
    p.add_argument("--rank", type=int, help="LSI rank (backend=lsi)")
    p.add_argument("--dataset-name", default="", help="label echoed into reports")
    p.add_argument("--out", required=True, help="output directory")


def _add_reward_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k1", type=float, default=0.03)
    p.add_argument("--k2", type=float, default=0.08)
    p.add_argument("--no-reward", action="store_true", help="disable the rewarding step")
    p.add_argument("--top-k", default="all", help="links emitted per source: N or 'all'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tracerank", description="Traceability-link recovery engine"
    )
    parser.add_argument("--version", action="version", version=f"tracerank {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_trace = sub.add_parser("trace", help="run the pipeline and emit link lists")
    _add_dataset_flags(p_trace)
    _add_reward_flags(p_trace)

    p_grid = sub.add_parser("grid", help="exhaustive (k1, k2) MAP sweep")
    _add_dataset_flags(p_grid)
    p_grid.add_argument("--step", type=float, default=0.01)
    p_grid.add_argument("--top-k", default="all", help=argparse.SUPPRESS)

    p_abl = sub.add_parser("ablate", help="compare rewarding on vs off")
    _add_dataset_flags(p_abl)
    _add_reward_flags(p_abl)
    return parser


def _build_spec(args, parser: argparse.ArgumentParser) -> RunSpec:
    paths = {"sources": args.sources, "targets": args.targets, "answers": args.answers}
    if args.manifest:
        manifest = load_manifest(args.manifest)
        base = Path(args.manifest).parent
        for key in paths:
            if paths[key] is None and key in manifest:
                paths[key] = str(base / manifest[key])
    for key, value in paths.items():
        if value is None:
            parser.error(f"--{key} is required (flag or manifest)")
    if args.backend == "vectors":
        if not args.vectors_sa:
            parser.error("--backend vectors requires --vectors-sa")
        if not args.vectors_ta:
            parser.error("--backend vectors requires --vectors-ta")
    if args.backend == "wordvec" and not args.wordvec:
        parser.error("--backend wordvec requires --wordvec")

    top_k = getattr(args, "top_k", "all")
    if top_k != "all":
        try:
            top_k = int(top_k)
        except ValueError:
            parser.error("--top-k must be a positive integer or 'all'")
        if top_k < 1:
            parser.error("--top-k must be a positive integer or 'all'")
    try:
        cfg = RewardConfig(
            k1=getattr(args, "k1", 0.03),
            k2=getattr(args, "k2", 0.08),
            rewarding_enabled=not getattr(args, "no_reward", False),
            top_k_links=top_k,
        )
    except ValueError as exc:
        parser.error(str(exc))
    return RunSpec(
        sources=paths["sources"],
        targets=paths["targets"],
        answers=paths["answers"],
        backend=args.backend,
        reward=cfg,
        dataset_name=args.dataset_name,
        lsi_rank=args.rank,
        wordvec_file=args.wordvec,
        vectors_sa=args.vectors_sa,
        vectors_ta=args.vectors_ta,
        out_dir=args.out,
    )


def _write_manifest(out: Path, spec: RunSpec, extra: dict | None = None) -> None:
    obj = {
        "engine": f"tracerank {__version__}",
        "sources": spec.sources,
        "targets": spec.targets,
        "answers": spec.answers,
        "backend": spec.backend,
        "k1": spec.reward.k1,
        "k2": spec.reward.k2,
        "rewarding": spec.reward.rewarding_enabled,
        "top_k_links": spec.reward.top_k_links,
        "lsi_rank": spec.lsi_rank,
        "wordvec_file": spec.wordvec_file,
        "vectors_sa": spec.vectors_sa,
        "vectors_ta": spec.vectors_ta,
    }
    if extra:
        obj.update(extra)
    (out / "manifest.json").write_text(dumps_17g(obj) + "\n", encoding="utf-8")


def cmd_trace(args, parser) -> int:
    spec = _build_spec(args, parser)
    out = Path(spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = run(spec)
    with open(out / "links.tsv", "w", encoding="utf-8", newline="\n") as fh:
        for sid in sorted(result.links):
            for rank_pos, (tid, score) in enumerate(result.links[sid], 1):
                fh.write(f"{sid}\t{tid}\t{score:.17g}\t{rank_pos}\n")
    (out / "report.json").write_text(result.report.to_json() + "\n", encoding="utf-8")
    write_trace_csv(out / "rewards.csv", result.traces)
    _write_manifest(out, spec)
    print(
        f"trace: map={result.report.map:.4f} precision={result.report.precision:.4f} "
        f"recall={result.report.recall:.4f} -> {out}"
    )
    return 0


def cmd_grid(args, parser) -> int:
    try:
        grid_values(args.step)
    except ValueError as exc:
        parser.error(str(exc))
    spec = _build_spec(args, parser)
    out = Path(spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = grid_search(spec, step=args.step)
    write_grid_csv(out / "grid.csv", result)
    k1, k2, best_map = result.best
    (out / "best.json").write_text(
        dumps_17g({"k1": k1, "k2": k2, "map": best_map}) + "\n", encoding="utf-8"
    )
    _write_manifest(out, spec, {"step": args.step})
    print(f"grid: best k1={k1:g} k2={k2:g} map={best_map:.4f} -> {out}")
    return 0


def cmd_ablate(args, parser) -> int:
    spec = _build_spec(args, parser)
    out = Path(spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report_on, report_off, stats = ablation(spec)
    (out / "with.json").write_text(report_on.to_json() + "\n", encoding="utf-8")
    (out / "without.json").write_text(report_off.to_json() + "\n", encoding="utf-8")
    stats_obj = {
        "p_value": stats.p_value,
        "cliffs_delta": stats.cliffs_delta,
        "magnitude": stats.magnitude,
        "n": stats.n,
        "degenerate": stats.degenerate,
    }
    (out / "stats.json").write_text(dumps_17g(stats_obj) + "\n", encoding="utf-8")
    _write_manifest(out, spec)
    p_str = "degenerate" if stats.degenerate else f"{stats.p_value:.4f}"
    print(
        f"ablate: map_with={report_on.map:.4f} map_without={report_off.map:.4f} "
        f"p={p_str} delta={stats.cliffs_delta:.3f} -> {out}"
    )
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"trace": cmd_trace, "grid": cmd_grid, "ablate": cmd_ablate}[args.command]
    try:
        return handler(args, parser)
    except PipelineError as exc:
        print(f"error in {exc.stage}: {exc.cause}", file=sys.stderr)
        return 1
    except TraceRankError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
