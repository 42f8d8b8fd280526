"""Shared fixtures: bundled corpora and their fused views.

Everything here is deterministic. The bundled files are regenerated by
tools/generate_sample_corpus.py; tests read the committed copies so a
corrupted regeneration cannot silently change expectations.
"""

from __future__ import annotations

import pathlib

import pytest

from headspan.fuse import fuse
from headspan.treebank import pair_treebanks, read_bracketed, read_conll

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def load_pairs(stem: str):
    consts = read_bracketed((DATA / f"{stem}.brackets").read_text("utf-8"))
    deps = read_conll((DATA / f"{stem}.conll").read_text("utf-8"))
    return pair_treebanks(consts, deps)


@pytest.fixture(scope="session")
def data_dir() -> pathlib.Path:
    return DATA


@pytest.fixture(scope="session")
def sample_pairs():
    return load_pairs("sample")


@pytest.fixture(scope="session")
def multihead_pairs():
    return load_pairs("multihead")


@pytest.fixture(scope="session")
def sample_fused(sample_pairs):
    out = []
    for k, (c, d) in enumerate(sample_pairs):
        tree, report = fuse(c, d, ordinal=k)
        assert report.clean, report.summary()
        out.append(tree)
    return out
