"""Recall@k evaluation, macro/micro averaging, IDF buckets, ablation grids.

A question counts as a hit at k iff any of its top-k passages contains one
of its gold answers as a normalized substring of the passage body
(lowercase, whitespace runs collapsed). That containment convention is the
common one for open-domain QA retrieval; it affects absolute numbers and is
therefore stated here rather than buried in code.

Reports are emitted as CSV plus an aligned plain-text table, both
deterministic: identical inputs produce byte-identical output.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .core import ConditioningMode, EvalRecord, Passage
from .dense import (
    FullSet,
    KeySampler,
    MaxIdfSingle,
    MultiKeyIndex,
    RandomSingle,
    apply_sampler,
    search_topk,
)
from .errors import BucketCountError, MissingEntityError

PERCENT = 100.0


def normalize_answer_text(text: str) -> str:
    """Lowercase, collapse whitespace runs to single spaces, strip ends."""
    return " ".join(text.lower().split())


def is_positive(passage: Passage, gold_answers: Sequence[str]) -> bool:
    """True iff any normalized answer occurs inside the normalized body."""
    body = normalize_answer_text(passage.body)
    return any(normalize_answer_text(answer) in body for answer in gold_answers)


@dataclass
class RecallReport:
    """Per-relation recall@k (percent) with macro and micro averages."""

    k_values: list[int]
    per_relation: dict[str, dict[int, float]]
    question_counts: dict[str, int]
    macro: dict[int, float]
    micro: dict[int, float]
    total_questions: int
    missing_run_qids: list[str] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        header = ["relation", "questions"] + [f"recall@{k}" for k in self.k_values]
        buf.write(",".join(header) + "\n")
        for relation in sorted(self.per_relation):
            row = [relation, str(self.question_counts[relation])]
            row += [f"{self.per_relation[relation][k]:.4f}" for k in self.k_values]
            buf.write(",".join(row) + "\n")
        buf.write(",".join(["macro", str(self.total_questions)]
                           + [f"{self.macro[k]:.4f}" for k in self.k_values]) + "\n")
        buf.write(",".join(["micro", str(self.total_questions)]
                           + [f"{self.micro[k]:.4f}" for k in self.k_values]) + "\n")
        return buf.getvalue()

    def format_table(self) -> str:
        rows = [["relation", "questions"] + [f"recall@{k}" for k in self.k_values]]
        for relation in sorted(self.per_relation):
            rows.append([relation, str(self.question_counts[relation])]
                        + [f"{self.per_relation[relation][k]:.2f}" for k in self.k_values])
        rows.append(["macro", str(self.total_questions)]
                    + [f"{self.macro[k]:.2f}" for k in self.k_values])
        rows.append(["micro", str(self.total_questions)]
                    + [f"{self.micro[k]:.2f}" for k in self.k_values])
        return format_aligned(rows)


def format_aligned(rows: Sequence[Sequence[str]]) -> str:
    """Left-align the first column, right-align the rest, pad to widths."""
    if not rows:
        return ""
    widths = [max(len(row[col]) for row in rows) for col in range(len(rows[0]))]
    lines = []
    for row in rows:
        cells = [row[0].ljust(widths[0])]
        cells += [cell.rjust(widths[col]) for col, cell in enumerate(row) if col > 0]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def recall_at_k(runs: Mapping[str, Sequence[str]],
                records: Sequence[EvalRecord],
                corpus: Mapping[str, Passage],
                k_values: Sequence[int]) -> RecallReport:
    """Evaluate ranked passage lists against gold answers.

    Records without a run are counted as misses and listed in the report.
    Ranked ids absent from the corpus are treated as non-positive.
    """
    k_values = sorted(set(int(k) for k in k_values))
    if any(k < 1 for k in k_values):
        raise ValueError(f"k values must be >= 1, got {k_values}")
    hits: dict[str, dict[int, int]] = {}
    counts: dict[str, int] = {}
    missing: list[str] = []
    for record in records:
        counts[record.relation_id] = counts.get(record.relation_id, 0) + 1
        relation_hits = hits.setdefault(record.relation_id, {k: 0 for k in k_values})
        ranked = runs.get(record.query_id)
        if ranked is None:
            missing.append(record.query_id)
            continue
        max_k = k_values[-1]
        positive_ranks = [rank for rank, pid in enumerate(ranked[:max_k], start=1)
                          if pid in corpus and is_positive(corpus[pid], record.gold_answers)]
        first_hit = positive_ranks[0] if positive_ranks else None
        for k in k_values:
            if first_hit is not None and first_hit <= k:
                relation_hits[k] += 1

    per_relation = {
        relation: {k: PERCENT * relation_hits[k] / counts[relation] for k in k_values}
        for relation, relation_hits in hits.items()
    }
    total = sum(counts.values())
    macro = {k: (sum(per_relation[rel][k] for rel in per_relation) / len(per_relation)
                 if per_relation else 0.0)
             for k in k_values}
    micro = {k: (PERCENT * sum(hits[rel][k] for rel in hits) / total if total else 0.0)
             for k in k_values}
    return RecallReport(
        k_values=list(k_values),
        per_relation=per_relation,
        question_counts=counts,
        macro=macro,
        micro=micro,
        total_questions=total,
        missing_run_qids=missing,
    )


# --- IDF bucket analysis ---------------------------------------------------------

@dataclass(frozen=True)
class Bucket:
    """A contiguous group of questions ordered by entity-IDF value."""

    index: int
    query_ids: tuple[str, ...]
    idf_min: float
    idf_max: float

    @property
    def size(self) -> int:
        return len(self.query_ids)


def bucketize_by_idf_ent(records: Sequence[EvalRecord],
                         idf_ent_by_qid: Mapping[str, float],
                         bucket_count: int) -> list[Bucket]:
    """Split records into `bucket_count` contiguous equal-size groups.

    Records sort ascending by entity IDF (ties broken by query id); when the
    count is not divisible, the earliest buckets take the remainder, so
    sizes differ by at most one. Every record must have an extracted entity
    and a finite IDF value.
    """
    if bucket_count < 1:
        raise BucketCountError(f"bucket count must be >= 1, got {bucket_count}")
    if bucket_count > len(records):
        raise BucketCountError(
            f"bucket count {bucket_count} exceeds record count {len(records)}")
    for record in records:
        if record.extracted_entity is None:
            raise MissingEntityError(f"record {record.query_id!r} has no extracted entity")
        value = idf_ent_by_qid.get(record.query_id)
        if value is None or not math.isfinite(value):
            raise MissingEntityError(
                f"record {record.query_id!r} has no finite IDF value")

    ordered = sorted(records, key=lambda r: (idf_ent_by_qid[r.query_id], r.query_id))
    base, remainder = divmod(len(ordered), bucket_count)
    buckets: list[Bucket] = []
    position = 0
    for i in range(bucket_count):
        size = base + (1 if i < remainder else 0)
        chunk = ordered[position:position + size]
        position += size
        values = [idf_ent_by_qid[r.query_id] for r in chunk]
        buckets.append(Bucket(
            index=i,
            query_ids=tuple(r.query_id for r in chunk),
            idf_min=min(values),
            idf_max=max(values),
        ))
    return buckets


@dataclass
class BucketReport:
    """Per-bucket recall@k for one or more retriever runs."""

    k: int
    buckets: list[Bucket]
    recall_by_run: dict[str, list[float]]

    def to_csv(self) -> str:
        buf = io.StringIO()
        run_names = sorted(self.recall_by_run)
        buf.write(",".join(["bucket", "questions", "idf_min", "idf_max"]
                           + [f"{name}:recall@{self.k}" for name in run_names]) + "\n")
        for bucket in self.buckets:
            row = [str(bucket.index), str(bucket.size),
                   f"{bucket.idf_min:.4f}", f"{bucket.idf_max:.4f}"]
            row += [f"{self.recall_by_run[name][bucket.index]:.4f}" for name in run_names]
            buf.write(",".join(row) + "\n")
        return buf.getvalue()

    def format_table(self) -> str:
        run_names = sorted(self.recall_by_run)
        rows = [["bucket", "questions", "idf_min", "idf_max"]
                + [f"{name}@{self.k}" for name in run_names]]
        for bucket in self.buckets:
            rows.append([str(bucket.index), str(bucket.size),
                         f"{bucket.idf_min:.3f}", f"{bucket.idf_max:.3f}"]
                        + [f"{self.recall_by_run[name][bucket.index]:.2f}"
                           for name in run_names])
        return format_aligned(rows)


def bucket_recall(buckets: Sequence[Bucket],
                  runs_by_name: Mapping[str, Mapping[str, Sequence[str]]],
                  records: Sequence[EvalRecord],
                  corpus: Mapping[str, Passage],
                  k: int) -> BucketReport:
    """Fill a bucket skeleton with per-bucket recall@k for each named run."""
    records_by_qid = {r.query_id: r for r in records}
    recall_by_run: dict[str, list[float]] = {}
    for name, runs in runs_by_name.items():
        values = []
        for bucket in buckets:
            bucket_records = [records_by_qid[qid] for qid in bucket.query_ids]
            report = recall_at_k(runs, bucket_records, corpus, [k])
            values.append(report.micro[k])
        recall_by_run[name] = values
    return BucketReport(k=k, buckets=list(buckets), recall_by_run=recall_by_run)


# --- ablation grid ----------------------------------------------------------------

def sampler_name(sampler: KeySampler) -> str:
    if isinstance(sampler, FullSet):
        return "full_set"
    if isinstance(sampler, RandomSingle):
        return f"random_single(seed={sampler.seed})"
    if isinstance(sampler, MaxIdfSingle):
        return "max_idf_single"
    raise TypeError(f"unknown sampler {sampler!r}")


@dataclass
class AblationRow:
    sampler: str
    mode: str
    macro_recall: dict[int, float]
    micro_recall: dict[int, float]


@dataclass
class AblationReport:
    k_values: list[int]
    rows: list[AblationRow]

    def to_csv(self) -> str:
        buf = io.StringIO()
        header = ["sampler", "mode"]
        header += [f"macro_recall@{k}" for k in self.k_values]
        header += [f"micro_recall@{k}" for k in self.k_values]
        buf.write(",".join(header) + "\n")
        for row in self.rows:
            cells = [row.sampler, row.mode]
            cells += [f"{row.macro_recall[k]:.4f}" for k in self.k_values]
            cells += [f"{row.micro_recall[k]:.4f}" for k in self.k_values]
            buf.write(",".join(cells) + "\n")
        return buf.getvalue()

    def format_table(self) -> str:
        rows = [["sampler", "mode"] + [f"macro@{k}" for k in self.k_values]]
        for row in self.rows:
            rows.append([row.sampler, row.mode]
                        + [f"{row.macro_recall[k]:.2f}" for k in self.k_values])
        return format_aligned(rows)


def run_dense_queries(index: MultiKeyIndex,
                      query_vectors: Mapping[str, np.ndarray],
                      k: int, *, workers: int = 1) -> dict[str, list[str]]:
    """Search every query against the index; returns qid -> ranked passage ids."""
    runs: dict[str, list[str]] = {}
    for qid in query_vectors:
        hits = search_topk(query_vectors[qid], index, k, workers=workers)
        runs[qid] = [hit.passage_id for hit in hits]
    return runs


def run_ablation_suite(index: MultiKeyIndex,
                       query_vectors_by_mode: Mapping[ConditioningMode, Mapping[str, np.ndarray]],
                       records: Sequence[EvalRecord],
                       corpus: Mapping[str, Passage],
                       samplers: Sequence[KeySampler],
                       modes: Sequence[ConditioningMode],
                       k_values: Sequence[int],
                       idf_of_key: Optional[Mapping[str, float]] = None,
                       *, workers: int = 1) -> AblationReport:
    """One recall row per (sampler x mode) cell.

    FullSet x ENTITY_IN_FULL_CONTEXT is the headline configuration; the
    other cells quantify what single-key sampling and weaker conditioning
    give up. Each sampler prunes the index once, shared across modes.
    """
    k_values = sorted(set(int(k) for k in k_values))
    rows: list[AblationRow] = []
    for sampler in samplers:
        pruned = apply_sampler(index, sampler, idf_of_key)
        for mode in modes:
            vectors = query_vectors_by_mode.get(mode)
            if vectors is None:
                raise KeyError(f"no query vectors for mode {mode.value}")
            runs = run_dense_queries(pruned, vectors, max(k_values), workers=workers)
            report = recall_at_k(runs, records, corpus, k_values)
            rows.append(AblationRow(
                sampler=sampler_name(sampler),
                mode=mode.value,
                macro_recall=report.macro,
                micro_recall=report.micro,
            ))
    return AblationReport(k_values=list(k_values), rows=rows)


def merge_recall_reports(named: Mapping[str, RecallReport]) -> tuple[str, str]:
    """Merge reports from several retrievers into one (csv, table) pair.

    All reports must share k_values; rows are relations (sorted), columns are
    run x k recall cells, with macro/micro footer rows.
    """
    names = sorted(named)
    if not names:
        return "", ""
    k_values = named[names[0]].k_values
    for name in names:
        if named[name].k_values != k_values:
            raise ValueError("reports disagree on k values")
    relations = sorted({rel for name in names for rel in named[name].per_relation})

    header = ["relation"] + [f"{name}:recall@{k}" for name in names for k in k_values]
    csv_rows = [header]
    for relation in relations:
        row = [relation]
        for name in names:
            per = named[name].per_relation.get(relation)
            row += [f"{per[k]:.4f}" if per else "" for k in k_values]
        csv_rows.append(row)
    for label in ("macro", "micro"):
        row = [label]
        for name in names:
            values = getattr(named[name], label)
            row += [f"{values[k]:.4f}" for k in k_values]
        csv_rows.append(row)
    csv_text = "\n".join(",".join(row) for row in csv_rows) + "\n"
    table_text = format_aligned(csv_rows)
    return csv_text, table_text


# --- TREC run files -----------------------------------------------------------------

def write_trec_run(fh, runs: Mapping[str, Sequence[tuple[str, float]]], run_tag: str) -> int:
    """Write "qid Q0 passage_id rank score run_tag" lines; returns line count."""
    count = 0
    for qid in runs:
        for rank, (passage_id, score) in enumerate(runs[qid], start=1):
            fh.write(f"{qid} Q0 {passage_id} {rank} {score:.6f} {run_tag}\n")
            count += 1
    return count


def write_trec_run_file(path, runs: Mapping[str, Sequence[tuple[str, float]]],
                        run_tag: str) -> int:
    with open(path, "w", encoding="utf-8") as fh:
        return write_trec_run(fh, runs, run_tag)


def read_trec_run(path) -> dict[str, list[str]]:
    """Parse a TREC run file into qid -> passage ids ordered by rank."""
    rows: dict[str, list[tuple[int, str]]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 6:
                raise ValueError(f"{path}:{line_no}: expected 6 fields, got {len(parts)}")
            qid, _, passage_id, rank = parts[0], parts[1], parts[2], int(parts[3])
            rows.setdefault(qid, []).append((rank, passage_id))
    return {qid: [pid for _, pid in sorted(pairs)] for qid, pairs in rows.items()}
