"""CLI: `export` encodes a corpus pair to vector files; `verify` validates a
vector file against a corpus directory."""

from __future__ import annotations

import argparse
import logging
import sys

from .core import ExportJob, ExporterError, export_vectors, verify_vectors


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="embed-exporter")
    sub = parser.add_subparsers(dest="command", required=True)

    p_export = sub.add_parser("export", help="encode artifacts and write VEC files")
    p_export.add_argument("--model", required=True, help="pretrained model identifier")
    p_export.add_argument("--sources", required=True)
    p_export.add_argument("--targets", required=True)
    p_export.add_argument("--out-sa", required=True)
    p_export.add_argument("--out-ta", required=True)
    p_export.add_argument("--batch", type=int, default=32)
    p_export.add_argument("--max-tokens", type=int, default=512)

    p_verify = sub.add_parser("verify", help="validate a VEC file against a corpus dir")
    p_verify.add_argument("file")
    p_verify.add_argument("corpus_dir")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "export":
            job = ExportJob(
                model_id=args.model,
                sources_dir=args.sources,
                targets_dir=args.targets,
                out_sa=args.out_sa,
                out_ta=args.out_ta,
                batch_size=args.batch,
                max_tokens=args.max_tokens,
            )
            export_vectors(job)
            return 0
        report = verify_vectors(args.file, args.corpus_dir)
        if report.ok:
            print(f"ok: {report.n_vectors} vectors, dim {report.dim}")
            return 0
        for v in report.violations:
            print(f"violation: {v}", file=sys.stderr)
        return 1
    except ExporterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
