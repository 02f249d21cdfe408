"""Corpus loading: source/target artifact sets plus the gold answer set.

Artifacts live one per file (``<id>.txt``, UTF-8) inside a directory; the
answer set is a headerless TSV of ``source_id<TAB>target_id`` lines with
``#`` comments. Everything is held in canonical (lexicographic-by-id) order
so downstream indices and tie-breaks are reproducible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import (
    DanglingAnswerId,
    DuplicateId,
    EmptyArtifact,
    FormatError,
    MissingFile,
    UnknownSourceId,
)

_ID_RE = re.compile(r"^[A-Za-z0-9_.-]+$")


class Role(Enum):
    SOURCE = "source"
    TARGET = "target"


@dataclass(frozen=True)
class Artifact:
    id: str
    role: Role
    text: str

    def __post_init__(self):
        if not _ID_RE.match(self.id):
            raise FormatError(f"artifact id {self.id!r} contains unsafe characters")
        if not self.text.strip():
            raise EmptyArtifact(f"artifact {self.id!r} has empty text")


@dataclass(frozen=True)
class AnswerSet:
    links: frozenset[tuple[str, str]]

    def __len__(self) -> int:
        return len(self.links)


@dataclass(frozen=True)
class Corpus:
    sources: tuple[Artifact, ...]
    targets: tuple[Artifact, ...]
    answers: AnswerSet
    _gold: dict[str, frozenset[str]] = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        if len(self.sources) < 1:
            raise FormatError("corpus needs at least one source artifact")
        if len(self.targets) < 2:
            raise FormatError("corpus needs at least two target artifacts")
        by_source: dict[str, set[str]] = {a.id: set() for a in self.sources}
        target_ids = {a.id for a in self.targets}
        for s, t in self.answers.links:
            if s not in by_source:
                raise DanglingAnswerId(s)
            if t not in target_ids:
                raise DanglingAnswerId(t)
            by_source[s].add(t)
        object.__setattr__(
            self, "_gold", {s: frozenset(ts) for s, ts in by_source.items()}
        )

    @property
    def source_ids(self) -> list[str]:
        return [a.id for a in self.sources]

    @property
    def target_ids(self) -> list[str]:
        return [a.id for a in self.targets]


def _read_artifact_dir(directory: Path, role: Role) -> tuple[Artifact, ...]:
    if not directory.is_dir():
        raise MissingFile(f"artifact directory not found: {directory}")
    artifacts = {}
    for path in sorted(directory.glob("*.txt")):
        art_id = path.stem
        if art_id in artifacts:
            raise DuplicateId(art_id)
        try:
            text = path.read_text(encoding="utf-8", errors="strict")
        except UnicodeDecodeError as exc:
            raise FormatError(f"{path}: invalid UTF-8: {exc}") from exc
        artifacts[art_id] = Artifact(id=art_id, role=role, text=text)
    if not artifacts:
        raise MissingFile(f"no .txt artifacts in {directory}")
    return tuple(artifacts[k] for k in sorted(artifacts))


def _read_answers(path: Path) -> AnswerSet:
    if not path.is_file():
        raise MissingFile(f"answer file not found: {path}")
    links: set[tuple[str, str]] = set()
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise FormatError(f"{path}:{lineno}: expected 'source<TAB>target', got {raw!r}")
        links.add((parts[0], parts[1]))
    return AnswerSet(links=frozenset(links))


def load_corpus(source_dir, target_dir, answers_file) -> Corpus:
    """Load and validate a corpus; artifact order is lexicographic by id."""
    sources = _read_artifact_dir(Path(source_dir), Role.SOURCE)
    targets = _read_artifact_dir(Path(target_dir), Role.TARGET)
    answers = _read_answers(Path(answers_file))
    return Corpus(sources=sources, targets=targets, answers=answers)


def load_manifest(path) -> dict[str, str]:
    """Read a plain key=value dataset manifest (keys: sources, targets, answers)."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"manifest not found: {path}")
    values: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise FormatError(f"{path}:{lineno}: expected key=value")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def gold_targets(corpus: Corpus, source_id: str) -> frozenset[str]:
    """Gold-linked target ids for one source (empty set when it has none)."""
    try:
        return corpus._gold[source_id]
    except KeyError:
        raise UnknownSourceId(source_id) from None
