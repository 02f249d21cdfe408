"""Embedding backends: TF-IDF, LSI, mean-pooled word vectors, precomputed vectors.

All backends produce an :class:`EmbeddingMatrix` whose rows follow the corpus
canonical order and are pure functions of their inputs.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import Artifact
from .errors import DimensionMismatch, FormatError, MissingFile, MissingVectorForId

# Fixed English stopword list; changing it changes every score downstream.
STOPWORDS = frozenset("""
a about above after again against all am an and any are aren as at be because
been before being below between both but by can cannot could couldn did didn
do does doesn doing don down during each few for from further had hadn has
hasn have haven having he her here hers herself him himself his how i if in
into is isn it its itself just me more most mustn my myself no nor not now of
off on once only or other our ours ourselves out over own same she should
shouldn so some such than that the their theirs them themselves then there
these they this those through to too under until up very was wasn we were
weren what when where which while who whom why will with won would wouldn you
your yours yourself yourselves
""".split())

_TOKEN_RE = re.compile(r"[a-z0-9]+")


@dataclass(frozen=True)
class EmbeddingMatrix:
    ids: tuple[str, ...]
    rows: np.ndarray  # shape (len(ids), dim), float64

    def __post_init__(self):
        if self.rows.shape[0] != len(self.ids):
            raise DimensionMismatch("row count does not match id count")
        if not np.all(np.isfinite(self.rows)):
            raise FormatError("embedding matrix contains non-finite values")

    @property
    def dim(self) -> int:
        return self.rows.shape[1]

    def row(self, art_id: str) -> np.ndarray:
        return self.rows[self.ids.index(art_id)]


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]  # sorted lexicographically
    df: tuple[int, ...]
    n_docs: int


@dataclass(frozen=True)
class WordVectorTable:
    entries: dict[str, np.ndarray]
    dim: int


def tokenize(text: str) -> list[str]:
    """Lowercase, split on non-alphanumerics, drop stopwords and 1-char tokens."""
    out = []
    for tok in _TOKEN_RE.findall(text.lower()):
        if len(tok) < 2 or tok in STOPWORDS:
            continue
        out.append(tok)
    return out


def _token_lists(artifacts: Sequence[Artifact]) -> list[list[str]]:
    return [tokenize(a.text) for a in artifacts]


def embed_tfidf(artifacts: Sequence[Artifact]) -> tuple[EmbeddingMatrix, Vocabulary]:
    """Raw tf times ln(N/df); no smoothing, no normalization."""
    docs = _token_lists(artifacts)
    n = len(docs)
    df: dict[str, int] = {}
    for toks in docs:
        for term in set(toks):
            df[term] = df.get(term, 0) + 1
    terms = tuple(sorted(df))
    index = {t: i for i, t in enumerate(terms)}
    idf = np.array([math.log(n / df[t]) for t in terms], dtype=np.float64)
    rows = np.zeros((n, len(terms)), dtype=np.float64)
    for d, toks in enumerate(docs):
        for tok in toks:
            rows[d, index[tok]] += 1.0
    rows *= idf
    vocab = Vocabulary(terms=terms, df=tuple(df[t] for t in terms), n_docs=n)
    ids = tuple(a.id for a in artifacts)
    return EmbeddingMatrix(ids=ids, rows=rows), vocab


def embed_lsi(artifacts: Sequence[Artifact], rank: int) -> EmbeddingMatrix:
    """Project TF-IDF documents into a truncated-SVD latent space.

    The requested rank is clamped to the numerical rank of the document-term
    matrix (never fatal). Rows are U_r * sigma_r per document.
    """
    if rank < 1:
        raise ValueError("rank must be >= 1")
    tfidf, _ = embed_tfidf(artifacts)
    mat = tfidf.rows
    if mat.shape[1] == 0:
        return EmbeddingMatrix(ids=tfidf.ids, rows=np.zeros((mat.shape[0], 1)))
    u, s, _vt = np.linalg.svd(mat, full_matrices=False)
    tol = max(mat.shape) * np.finfo(np.float64).eps * (s[0] if s.size else 0.0)
    numerical_rank = int(np.sum(s > tol))
    r = max(1, min(rank, numerical_rank))
    rows = u[:, :r] * s[:r]
    return EmbeddingMatrix(ids=tfidf.ids, rows=rows)


def default_lsi_rank(n_docs: int) -> int:
    return max(1, min(100, n_docs - 1))


def embed_wordvec(artifacts: Sequence[Artifact], table: WordVectorTable) -> EmbeddingMatrix:
    """Mean-pool table vectors over tokens; out-of-table tokens are skipped."""
    if not table.entries:
        raise FormatError("word-vector table is empty")
    rows = np.zeros((len(artifacts), table.dim), dtype=np.float64)
    for i, art in enumerate(artifacts):
        matched = [table.entries[t] for t in tokenize(art.text) if t in table.entries]
        if matched:
            rows[i] = np.mean(matched, axis=0)
    return EmbeddingMatrix(ids=tuple(a.id for a in artifacts), rows=rows)


def load_wordvec_table(file) -> WordVectorTable:
    """Parse a text word-vector file: optional '<count> <dim>' header, then
    'word v1 ... vdim' per line."""
    path = Path(file)
    if not path.is_file():
        raise MissingFile(f"word-vector file not found: {path}")
    lines = path.read_text(encoding="utf-8").splitlines()
    entries: dict[str, np.ndarray] = {}
    dim = None
    start = 0
    if lines:
        head = lines[0].split()
        if len(head) == 2 and all(p.isdigit() for p in head):
            dim = int(head[1])
            start = 1
    for lineno in range(start, len(lines)):
        line = lines[lineno].strip()
        if not line:
            continue
        parts = line.split()
        word, values = parts[0], parts[1:]
        if not values:
            raise FormatError(f"{path}:{lineno + 1}: no vector values")
        if dim is None:
            dim = len(values)
        elif len(values) != dim:
            raise DimensionMismatch(
                f"{path}:{lineno + 1}: expected {dim} values, got {len(values)}"
            )
        if word in entries:
            raise FormatError(f"{path}:{lineno + 1}: duplicate word {word!r}")
        try:
            entries[word] = np.array([float(v) for v in values], dtype=np.float64)
        except ValueError as exc:
            raise FormatError(f"{path}:{lineno + 1}: {exc}") from exc
    if not entries or dim is None:
        raise FormatError(f"{path}: no word vectors found")
    return WordVectorTable(entries=entries, dim=dim)


def load_vectors(file, expected_ids: Sequence[str]) -> EmbeddingMatrix:
    """Read a 'VEC 1' vector file and reorder rows to expected_ids.

    The file may contain extra ids (ignored); a missing expected id is fatal.
    """
    path = Path(file)
    if not path.is_file():
        raise MissingFile(f"vector file not found: {path}")
    lines = path.read_text(encoding="utf-8").split("\n")
    header = lines[0].split() if lines else []
    if len(header) != 4 or header[0] != "VEC" or header[1] != "1":
        raise FormatError(f"{path}:1: expected header 'VEC 1 <count> <dim>'")
    try:
        count, dim = int(header[2]), int(header[3])
    except ValueError:
        raise FormatError(f"{path}:1: count and dim must be integers") from None
    by_id: dict[str, np.ndarray] = {}
    for lineno in range(1, len(lines)):
        line = lines[lineno]
        if not line:
            continue
        if "\t" not in line:
            raise FormatError(f"{path}:{lineno + 1}: expected '<id><TAB>values'")
        art_id, _, rest = line.partition("\t")
        values = rest.split()
        if len(values) != dim:
            raise DimensionMismatch(
                f"{path}:{lineno + 1}: expected {dim} values, got {len(values)}"
            )
        try:
            by_id[art_id] = np.array([float(v) for v in values], dtype=np.float64)
        except ValueError as exc:
            raise FormatError(f"{path}:{lineno + 1}: {exc}") from exc
    if len(by_id) != count:
        raise FormatError(f"{path}: header count {count} != {len(by_id)} data rows")
    rows = np.empty((len(expected_ids), dim), dtype=np.float64)
    for i, art_id in enumerate(expected_ids):
        if art_id not in by_id:
            raise MissingVectorForId(art_id)
        rows[i] = by_id[art_id]
    return EmbeddingMatrix(ids=tuple(expected_ids), rows=rows)


def write_vectors(file, matrix: EmbeddingMatrix) -> None:
    """Write the 'VEC 1' format; values use shortest 64-bit round-trip repr."""
    with open(file, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"VEC 1 {len(matrix.ids)} {matrix.dim}\n")
        for art_id, row in zip(matrix.ids, matrix.rows):
            fh.write(art_id + "\t" + " ".join(repr(float(v)) for v in row) + "\n")
