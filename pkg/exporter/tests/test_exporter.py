import hashlib
import logging

import numpy as np
import pytest

from embed_exporter.cli import main
from embed_exporter.core import (
    ExportJob,
    export_vectors,
    read_corpus_dir,
    truncate,
    verify_vectors,
    write_vec_file,
)


class StubEncoder:
    """Deterministic stand-in for a pretrained model: each text maps to a
    fixed pseudo-random vector derived from its content hash."""

    def __init__(self, dim=16):
        self.dim = dim

    def encode(self, texts):
        rows = []
        for text in texts:
            seed = int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")
            rows.append(np.random.default_rng(seed).normal(size=self.dim))
        return np.array(rows)


@pytest.fixture
def corpus(tmp_path):
    sdir = tmp_path / "sources"
    tdir = tmp_path / "targets"
    sdir.mkdir()
    tdir.mkdir()
    (sdir / "UC1.txt").write_text("login use case")
    (sdir / "UC2.txt").write_text("logout use case")
    for i in range(3):
        (tdir / f"TC{i + 1}.txt").write_text(f"test case {i + 1} body text")
    return sdir, tdir


def make_job(corpus, tmp_path, **kwargs):
    sdir, tdir = corpus
    return ExportJob(
        model_id="stub",
        sources_dir=str(sdir),
        targets_dir=str(tdir),
        out_sa=str(tmp_path / "sa.vec"),
        out_ta=str(tmp_path / "ta.vec"),
        **kwargs,
    )


def test_export_shape_and_order(corpus, tmp_path):
    job = make_job(corpus, tmp_path)
    export_vectors(job, encoder=StubEncoder(dim=8))
    lines = (tmp_path / "ta.vec").read_text().splitlines()
    assert lines[0] == "VEC 1 3 8"
    assert [ln.split("\t")[0] for ln in lines[1:]] == ["TC1", "TC2", "TC3"]


def test_reexport_byte_identical(corpus, tmp_path):
    job = make_job(corpus, tmp_path)
    export_vectors(job, encoder=StubEncoder())
    first = (tmp_path / "sa.vec").read_bytes(), (tmp_path / "ta.vec").read_bytes()
    export_vectors(job, encoder=StubEncoder())
    second = (tmp_path / "sa.vec").read_bytes(), (tmp_path / "ta.vec").read_bytes()
    assert first == second


def test_verify_accepts_complete_export(corpus, tmp_path):
    sdir, tdir = corpus
    export_vectors(make_job(corpus, tmp_path), encoder=StubEncoder())
    report = verify_vectors(tmp_path / "ta.vec", tdir)
    assert report.ok
    assert report.n_vectors == 3


def test_verify_flags_missing_id(corpus, tmp_path):
    sdir, tdir = corpus
    ids, _ = read_corpus_dir(tdir)
    rows = np.ones((2, 4))
    write_vec_file(tmp_path / "partial.vec", ids[:2], rows)
    report = verify_vectors(tmp_path / "partial.vec", tdir)
    assert any("TC3" in v for v in report.violations)


def test_verify_flags_nan(corpus, tmp_path):
    sdir, tdir = corpus
    ids, _ = read_corpus_dir(tdir)
    rows = np.ones((3, 4))
    rows[1, 2] = float("nan")
    write_vec_file(tmp_path / "nan.vec", ids, rows)
    report = verify_vectors(tmp_path / "nan.vec", tdir)
    assert any("row 3" in v and "non-finite" in v for v in report.violations)


def test_truncation_logged(caplog):
    with caplog.at_level(logging.WARNING, logger="embed_exporter"):
        out = truncate("a b c d e", 3, "X1")
    assert out == "a b c"
    assert any("X1" in r.message for r in caplog.records)


def test_cli_verify_exit_codes(corpus, tmp_path, capsys):
    sdir, tdir = corpus
    export_vectors(make_job(corpus, tmp_path), encoder=StubEncoder())
    assert main(["verify", str(tmp_path / "ta.vec"), str(tdir)]) == 0
    assert "ok: 3 vectors" in capsys.readouterr().out
    ids, _ = read_corpus_dir(tdir)
    write_vec_file(tmp_path / "partial.vec", ids[:1], np.ones((1, 4)))
    assert main(["verify", str(tmp_path / "partial.vec"), str(tdir)]) == 1


def test_engine_contract_roundtrip(corpus, tmp_path):
    """The primary engine loads exporter output with zero warnings and
    reproduces the exported rows bit-exactly."""
    engine = pytest.importorskip("tracerank.embedding")
    sdir, tdir = corpus
    encoder = StubEncoder(dim=12)
    export_vectors(make_job(corpus, tmp_path), encoder=encoder)
    ids, texts = read_corpus_dir(tdir)
    expected = encoder.encode(texts)
    mat = engine.load_vectors(tmp_path / "ta.vec", ids)
    assert mat.ids == tuple(ids)
    assert np.array_equal(mat.rows, expected)
    # engine rewrite of the loaded matrix matches the exporter's bytes
    engine.write_vectors(tmp_path / "ta2.vec", mat)
    assert (tmp_path / "ta.vec").read_bytes() == (tmp_path / "ta2.vec").read_bytes()
