"""Encode artifact directories with a sentence-embedding model and write the
engine's vector-file format (`VEC 1 <count> <dim>` header, one tab-separated
row per artifact id, rows in lexicographic id order)."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Protocol

import numpy as np

log = logging.getLogger("embed_exporter")


class ExporterError(Exception):
    pass


class ModelLoadError(ExporterError):
    pass


class WriteError(ExporterError):
    pass


class Encoder(Protocol):
    def encode(self, texts: list[str]) -> np.ndarray: ...


@dataclass(frozen=True)
class ExportJob:
    model_id: str
    sources_dir: str
    targets_dir: str
    out_sa: str
    out_ta: str
    batch_size: int = 32
    max_tokens: int = 512

    def __post_init__(self):
        if self.batch_size < 1 or self.max_tokens < 1:
            raise ValueError("batch_size and max_tokens must be positive")


def load_model(model_id: str) -> Encoder:
    """Load a pretrained sentence-embedding model by identifier."""
    try:
        from sentence_transformers import SentenceTransformer
    except ImportError as exc:
        raise ModelLoadError(f"sentence-transformers not installed: {exc}") from exc
    try:
        model = SentenceTransformer(model_id)
    except Exception as exc:
        raise ModelLoadError(f"cannot load model {model_id!r}: {exc}") from exc

    class _Wrapped:
        def encode(self, texts: list[str]) -> np.ndarray:
            return np.asarray(
                model.encode(texts, convert_to_numpy=True, show_progress_bar=False),
                dtype=np.float64,
            )

    return _Wrapped()


def read_corpus_dir(directory) -> tuple[list[str], list[str]]:
    """(ids, texts) for all *.txt artifacts, in lexicographic id order."""
    directory = Path(directory)
    if not directory.is_dir():
        raise ExporterError(f"corpus directory not found: {directory}")
    paths = sorted(directory.glob("*.txt"))
    if not paths:
        raise ExporterError(f"no .txt artifacts in {directory}")
    ids = [p.stem for p in paths]
    texts = [p.read_text(encoding="utf-8") for p in paths]
    return ids, texts


def truncate(text: str, max_tokens: int, art_id: str = "") -> str:
    """Keep the leading max_tokens whitespace tokens; log when anything is cut."""
    tokens = text.split()
    if len(tokens) <= max_tokens:
        return text
    log.warning(
        "truncating %s: %d tokens -> %d", art_id or "artifact", len(tokens), max_tokens
    )
    return " ".join(tokens[:max_tokens])


def encode_corpus(
    encoder: Encoder, ids: list[str], texts: list[str], batch_size: int, max_tokens: int
) -> np.ndarray:
    texts = [truncate(t, max_tokens, i) for i, t in zip(ids, texts)]
    chunks = []
    for start in range(0, len(texts), batch_size):
        chunks.append(np.asarray(encoder.encode(texts[start : start + batch_size])))
    rows = np.vstack(chunks).astype(np.float64)
    if rows.shape[0] != len(ids):
        raise ExporterError(f"encoder returned {rows.shape[0]} rows for {len(ids)} texts")
    return rows


def write_vec_file(file, ids: list[str], rows: np.ndarray) -> None:
    try:
        with open(file, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"VEC 1 {len(ids)} {rows.shape[1]}\n")
            for art_id, row in zip(ids, rows):
                fh.write(art_id + "\t" + " ".join(repr(float(v)) for v in row) + "\n")
    except OSError as exc:
        raise WriteError(f"cannot write {file}: {exc}") from exc


def export_vectors(job: ExportJob, encoder: Encoder | None = None) -> None:
    """Encode both artifact sets and write the two vector files."""
    if encoder is None:
        encoder = load_model(job.model_id)
    for directory, out in ((job.sources_dir, job.out_sa), (job.targets_dir, job.out_ta)):
        ids, texts = read_corpus_dir(directory)
        rows = encode_corpus(encoder, ids, texts, job.batch_size, job.max_tokens)
        write_vec_file(out, ids, rows)
        log.info("wrote %s: %d vectors, dim %d", out, len(ids), rows.shape[1])


@dataclass
class VerifyReport:
    n_vectors: int
    dim: int
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_vectors(file, corpus_dir) -> VerifyReport:
    """Check id coverage against a corpus dir, dim consistency, finite values."""
    violations: list[str] = []
    path = Path(file)
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split() if lines else []
    if len(header) != 4 or header[:2] != ["VEC", "1"]:
        return VerifyReport(0, 0, [f"{path}:1: bad header"])
    count, dim = int(header[2]), int(header[3])
    seen = {}
    for lineno, line in enumerate(lines[1:], 2):
        if not line:
            continue
        art_id, _, rest = line.partition("\t")
        values = rest.split()
        if len(values) != dim:
            violations.append(f"row {lineno}: expected {dim} values, got {len(values)}")
            continue
        try:
            vec = np.array([float(v) for v in values])
        except ValueError:
            violations.append(f"row {lineno}: unparseable value")
            continue
        if not np.all(np.isfinite(vec)):
            violations.append(f"row {lineno}: non-finite value")
        if art_id in seen:
            violations.append(f"row {lineno}: duplicate id {art_id}")
        seen[art_id] = True
    if len(seen) != count:
        violations.append(f"header count {count} != {len(seen)} rows")
    expected_ids, _ = read_corpus_dir(corpus_dir)
    for art_id in expected_ids:
        if art_id not in seen:
            violations.append(f"missing vector for id {art_id}")
    return VerifyReport(n_vectors=len(seen), dim=dim, violations=violations)
