"""Cosine similarity structures: SA-TA matrix, per-SA and per-TA ranked lists.

Rankings are descending by score with ties broken by ascending id, so every
list is reproducible across runs and platforms. Zero vectors get similarity 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embedding import EmbeddingMatrix
from .errors import DimensionMismatch


@dataclass(frozen=True)
class SimilarityMatrix:
    row_ids: tuple[str, ...]
    col_ids: tuple[str, ...]
    values: np.ndarray


@dataclass(frozen=True)
class RankedList:
    owner_id: str
    entries: tuple[tuple[str, float], ...]  # (id, score), score non-increasing

    def score_of(self, candidate_id: str) -> float:
        for cid, score in self.entries:
            if cid == candidate_id:
                return score
        raise KeyError(candidate_id)

    def top(self, k: int) -> tuple[tuple[str, float], ...]:
        return self.entries[:k]


def rank_entries(owner_id: str, pairs) -> RankedList:
    """Sort (id, score) pairs descending by score, ascending id on ties."""
    ordered = sorted(pairs, key=lambda p: (-p[1], p[0]))
    return RankedList(owner_id=owner_id, entries=tuple((i, float(s)) for i, s in ordered))


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity; 0 when either vector is all-zero."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DimensionMismatch(f"vector dims differ: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def _normalized(rows: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(rows, axis=1, keepdims=True)
    safe = np.where(norms == 0.0, 1.0, norms)
    return rows / safe


def sa_ta_matrix(sa: EmbeddingMatrix, ta: EmbeddingMatrix) -> SimilarityMatrix:
    if sa.dim != ta.dim:
        raise DimensionMismatch(f"SA dim {sa.dim} != TA dim {ta.dim}")
    values = _normalized(sa.rows) @ _normalized(ta.rows).T
    return SimilarityMatrix(row_ids=sa.ids, col_ids=ta.ids, values=values)


def sa_ta_lists(matrix: SimilarityMatrix) -> dict[str, RankedList]:
    """One descending RankedList over all TAs per SA."""
    return {
        sid: rank_entries(sid, zip(matrix.col_ids, matrix.values[i]))
        for i, sid in enumerate(matrix.row_ids)
    }


def ta_ta_lists(ta: EmbeddingMatrix) -> dict[str, RankedList]:
    """Per-TA ranking of the other m-1 TAs (self excluded)."""
    if len(ta.ids) < 2:
        raise DimensionMismatch("TA-TA lists need at least two targets")
    values = _normalized(ta.rows) @ _normalized(ta.rows).T
    out = {}
    for i, tid in enumerate(ta.ids):
        pairs = [(other, values[i, j]) for j, other in enumerate(ta.ids) if j != i]
        out[tid] = rank_entries(tid, pairs)
    return out


def dump_matrix_csv(file, matrix: SimilarityMatrix) -> None:
    """Optional CSV dump: header of col ids, leading row-id column, 17 sig digits."""
    with open(file, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("," + ",".join(matrix.col_ids) + "\n")
        for rid, row in zip(matrix.row_ids, matrix.values):
            fh.write(rid + "," + ",".join(format(v, ".17g") for v in row) + "\n")
