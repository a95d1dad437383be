"""Shared fixtures: toy indices and a small end-to-end workspace."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from spankey import dense


def unit(values) -> np.ndarray:
    vec = np.asarray(values, dtype=np.float64)
    return (vec / np.linalg.norm(vec)).astype(np.float32)


@pytest.fixture
def toy_index() -> dense.MultiKeyIndex:
    """Three passages, dim 2: p1 {[1,0]}, p2 {[0,1],[0.6,0.8]}, p3 {[-1,0]}."""
    keys = [
        ("p1#0", "p1", np.array([1.0, 0.0], dtype=np.float32)),
        ("p2#0", "p2", np.array([0.0, 1.0], dtype=np.float32)),
        ("p2#1", "p2", np.array([0.6, 0.8], dtype=np.float32)),
        ("p3#0", "p3", np.array([-1.0, 0.0], dtype=np.float32)),
    ]
    return dense.build_index(keys, 2)


def random_multikey_corpus(rng: np.random.Generator, n_passages: int, dim: int,
                           max_keys: int = 12):
    """(key_id, passage_id, unit vector) triples, 1..max_keys keys per passage."""
    triples = []
    for p in range(n_passages):
        pid = f"p{p:05d}"
        for ordinal in range(int(rng.integers(1, max_keys + 1))):
            vec = rng.standard_normal(dim)
            triples.append((f"{pid}#{ordinal}", pid, unit(vec)))
    return triples


# --- end-to-end workspace ----------------------------------------------------------

CORPUS = [
    {"id": "p1", "title": "Ted Howard",
     "text": "Ted Howard was born in Leeds and wrote many books."},
    {"id": "p2", "title": "Inside Job",
     "text": "Inside Job is a book by Charles Ferguson."},
    {"id": "p3", "title": "",
     "text": "Nothing notable here."},
    {"id": "p4", "title": "Leeds",
     "text": "Leeds is a city in West Yorkshire, England."},
]

ANNOTATIONS = [
    {"pid": "p1", "start": 0, "end": 10, "type": "PER"},   # Ted Howard
    {"pid": "p1", "start": 23, "end": 28, "type": "LOC"},  # Leeds
    {"pid": "p2", "start": 0, "end": 10, "type": "MISC"},  # Inside Job
    {"pid": "p2", "start": 24, "end": 40, "type": "PER"},  # Charles Ferguson
    {"pid": "p4", "start": 0, "end": 5, "type": "LOC"},    # Leeds
    {"pid": "p4", "start": 19, "end": 33, "type": "LOC"},  # West Yorkshire
    {"pid": "p4", "start": 35, "end": 42, "type": "LOC"},  # England
]

TEMPLATES = [
    {"relation": "P19", "pattern": "Where was [E] born?"},
    {"relation": "P50", "pattern": "Who is the author of [E]?"},
]

QUESTIONS = [
    {"qid": "q1", "relation": "P19", "question": "Where was Ted Howard born?",
     "answers": ["Leeds"]},
    {"qid": "q2", "relation": "P50", "question": "Who is the author of Inside Job?",
     "answers": ["Charles Ferguson"]},
    {"qid": "q3", "relation": "P19", "question": "In what place did Ada work?",
     "answers": ["nowhere"]},
]


def write_jsonl(path: Path, rows) -> Path:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    return path


def make_workspace(root: Path, *, dim: int = 16, seed: int = 0, workers: int = 1,
                   k_values=(2, 4), corpus=None, annotations=None,
                   templates=None, questions=None, extra: str = "") -> Path:
    """Write corpus/annotation/template/question files plus a run config;
    returns the config path."""
    root.mkdir(parents=True, exist_ok=True)
    write_jsonl(root / "corpus.jsonl", corpus if corpus is not None else CORPUS)
    write_jsonl(root / "annotations.jsonl",
                annotations if annotations is not None else ANNOTATIONS)
    write_jsonl(root / "templates.jsonl",
                templates if templates is not None else TEMPLATES)
    write_jsonl(root / "questions.jsonl",
                questions if questions is not None else QUESTIONS)
    config = root / "run.toml"
    config.write_text(
        f"dim = {dim}\n"
        f"seed = {seed}\n"
        f"workers = {workers}\n"
        f"k_values = {list(k_values)}\n"
        "bucket_count = 2\n"
        f"{extra}\n"
        "[paths]\n"
        'corpus = "corpus.jsonl"\n'
        'annotations = "annotations.jsonl"\n'
        'templates = "templates.jsonl"\n'
        'questions = "questions.jsonl"\n'
        'output_dir = "out"\n',
        encoding="utf-8")
    return config


@pytest.fixture
def workspace(tmp_path) -> Path:
    return make_workspace(tmp_path)
