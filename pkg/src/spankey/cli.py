"""Operator surface: subcommands over a single TOML config with flag overrides.

    spankey ingest     --config run.toml      validate inputs, write manifests
    spankey embed-mock --config run.toml      write key/query embedding files
    spankey index      --config run.toml      build + validate the dense index
    spankey search     --config run.toml ...  rank passages for one question
    spankey eval       --config run.toml      recall tables (dense, optional BM25)
    spankey ablate     --config run.toml      sampler x conditioning-mode grid
    spankey buckets    --config run.toml      entity-IDF bucket analysis

Exit codes: 0 success, 2 config/validation error, 3 runtime data error.
All randomness flows from the single config seed, so identical config plus
seed reproduces every output byte-for-byte. ZNER_LOG sets the log level.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import bm25, dense, evaluation
from .core import ConditioningMode, EvalRecord, Passage, validate_corpus
from .embed_io import MockEmbedder, read_embeddings_file, write_embeddings_file
from .errors import (
    ConfigError,
    CorpusFormatError,
    EmptyInputError,
    InvalidKError,
    SpankeyError,
)
from .ingest import (
    KeyManifestEntry,
    QueryPrecursor,
    build_query_record,
    enumerate_keys,
    load_corpus,
    load_ner_annotations,
    load_questions,
    load_templates,
    read_key_manifest,
    write_key_manifest,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3

_SAMPLER_NAMES = ("full", "random", "max_idf")
_MODE_NAMES = tuple(m.value for m in ConditioningMode)


@dataclass
class RunConfig:
    corpus: Path
    annotations: Path
    templates: Path
    questions: Path
    output_dir: Path
    dim: int = 64
    k_values: list[int] = field(default_factory=lambda: [20, 100])
    bucket_count: int = 5
    sampler: str = "full"
    mode: str = ConditioningMode.ENTITY_IN_FULL_CONTEXT.value
    modes: list[str] = field(default_factory=lambda: list(_MODE_NAMES))
    seed: int = 0
    workers: int = 1
    compare_bm25: bool = True

    # Derived artifact locations (all under output_dir).
    @property
    def key_manifest_path(self) -> Path:
        return self.output_dir / "keys.jsonl"

    @property
    def corpus_manifest_path(self) -> Path:
        return self.output_dir / "corpus.manifest.jsonl"

    @property
    def key_embeddings_path(self) -> Path:
        return self.output_dir / "keys.znrk"

    def query_embeddings_path(self, mode: str) -> Path:
        return self.output_dir / f"queries.{mode}.znrk"

    def conditioning_mode(self) -> ConditioningMode:
        return ConditioningMode(self.mode)

    def key_sampler(self) -> dense.KeySampler:
        if self.sampler == "full":
            return dense.FullSet()
        if self.sampler == "random":
            return dense.RandomSingle(seed=self.seed)
        if self.sampler == "max_idf":
            return dense.MaxIdfSingle()
        raise ConfigError(f"unknown sampler {self.sampler!r} (expected one of {_SAMPLER_NAMES})")


def load_config(path: Path, overrides: Mapping[str, object]) -> RunConfig:
    """Parse the TOML config, apply flag overrides, normalize and validate."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"bad TOML in {path}: {exc}")

    paths = raw.get("paths", {})
    base = path.parent

    def resolve(name: str) -> Path:
        value = paths.get(name)
        if value is None:
            raise ConfigError(f"config {path}: missing paths.{name}")
        p = Path(value)
        return p if p.is_absolute() else base / p

    config = RunConfig(
        corpus=resolve("corpus"),
        annotations=resolve("annotations"),
        templates=resolve("templates"),
        questions=resolve("questions"),
        output_dir=resolve("output_dir"),
        dim=int(raw.get("dim", 64)),
        k_values=[int(k) for k in raw.get("k_values", [20, 100])],
        bucket_count=int(raw.get("bucket_count", 5)),
        sampler=str(raw.get("sampler", "full")),
        mode=str(raw.get("mode", ConditioningMode.ENTITY_IN_FULL_CONTEXT.value)),
        modes=[str(m) for m in raw.get("modes", list(_MODE_NAMES))],
        seed=int(raw.get("seed", 0)),
        workers=int(raw.get("workers", 1)),
        compare_bm25=bool(raw.get("compare_bm25", True)),
    )
    cleaned = {k: v for k, v in overrides.items() if v is not None}
    if cleaned:
        config = replace(config, **cleaned)

    if any(k < 1 for k in config.k_values):
        raise ConfigError(f"k_values must all be >= 1, got {config.k_values}")
    config.k_values = sorted(set(config.k_values))
    if config.dim < 1:
        raise ConfigError(f"dim must be >= 1, got {config.dim}")
    if config.workers < 1:
        raise ConfigError(f"workers must be >= 1, got {config.workers}")
    if config.bucket_count < 1:
        raise ConfigError(f"bucket_count must be >= 1, got {config.bucket_count}")
    if config.sampler not in _SAMPLER_NAMES:
        raise ConfigError(f"unknown sampler {config.sampler!r} (expected one of {_SAMPLER_NAMES})")
    if config.mode not in _MODE_NAMES:
        raise ConfigError(f"unknown mode {config.mode!r} (expected one of {_MODE_NAMES})")
    for mode in config.modes:
        if mode not in _MODE_NAMES:
            raise ConfigError(f"unknown mode {mode!r} in modes (expected one of {_MODE_NAMES})")
    return config


def _require_files(*pairs: tuple[str, Path]) -> None:
    for label, p in pairs:
        if not p.exists():
            raise ConfigError(f"{label} path does not exist: {p}")


# --- shared pipeline pieces ------------------------------------------------------

def _load_validated_corpus(config: RunConfig) -> dict[str, Passage]:
    passages = load_corpus(config.corpus)
    report = validate_corpus(passages)
    if not report.ok:
        lines = [f"corpus validation failed ({report.issue_count} issues):"]
        lines += [f"  duplicate id: {pid}" for pid in report.duplicate_ids]
        lines += [f"  empty body: {pid}" for pid in report.empty_body_ids]
        raise ConfigError("\n".join(lines))
    if report.empty_title_count:
        logger.warning("%d passages have empty titles", report.empty_title_count)
    return {p.passage_id: p for p in passages}


def _key_vector(embedder: MockEmbedder, entry: KeyManifestEntry, passage: Passage) -> np.ndarray:
    if entry.kind == "title":
        # A title key embeds the entire title span; the title itself is the
        # conditioning sequence.
        return embedder.embed(entry.surface, passage.title, ConditioningMode.ENTITY_IN_FULL_CONTEXT)
    return embedder.embed(entry.surface, passage.body, ConditioningMode.ENTITY_IN_FULL_CONTEXT)


def _query_vector(embedder: MockEmbedder, precursor: QueryPrecursor,
                  mode: ConditioningMode) -> np.ndarray:
    if precursor.entity_span is None:
        # Fallback questions embed the full question under every mode.
        return embedder.embed("", precursor.question_text, ConditioningMode.FULL_SPAN)
    if mode is ConditioningMode.ENTITY_IN_FULL_CONTEXT:
        return embedder.embed(precursor.entity_span.surface, precursor.question_text, mode)
    if mode is ConditioningMode.ENTITY_ALONE:
        return embedder.embed(precursor.entity_span.surface, "", mode)
    return embedder.embed("", precursor.question_text, ConditioningMode.FULL_SPAN)


def _build_precursors(config: RunConfig) -> tuple[dict[str, QueryPrecursor], list[EvalRecord]]:
    templates = load_templates(config.templates)
    questions = load_questions(config.questions)
    precursors: dict[str, QueryPrecursor] = {}
    records: list[EvalRecord] = []
    fallback_count = 0
    for q in questions:
        precursor = build_query_record(q.question, q.relation_id, templates)
        if precursor.fallback:
            fallback_count += 1
        precursors[q.query_id] = precursor
        records.append(EvalRecord(
            query_id=q.query_id,
            relation_id=q.relation_id,
            question_text=q.question,
            template_id=q.relation_id,
            gold_answers=q.answers,
            extracted_entity=precursor.entity_span,
        ))
    if fallback_count:
        logger.warning("%d/%d questions fell back to full-span embedding",
                       fallback_count, len(questions))
    return precursors, records


def _load_dense_index(config: RunConfig) -> tuple[dense.MultiKeyIndex, list[KeyManifestEntry]]:
    _require_files(("key manifest", config.key_manifest_path),
                   ("key embeddings", config.key_embeddings_path))
    manifest = read_key_manifest(config.key_manifest_path)
    vectors = read_embeddings_file(config.key_embeddings_path)
    missing = [e.key_id for e in manifest if e.key_id not in vectors]
    if missing:
        raise SpankeyError(
            f"{len(missing)} manifest keys have no embedding (first: {missing[0]!r})")
    index = dense.build_index(
        ((e.key_id, e.passage_id, vectors[e.key_id]) for e in manifest), config.dim)
    return index, manifest


def _load_query_vectors(config: RunConfig, mode: str) -> dict[str, np.ndarray]:
    path = config.query_embeddings_path(mode)
    _require_files((f"query embeddings ({mode})", path))
    return read_embeddings_file(path)


def _key_idf_map(manifest: Sequence[KeyManifestEntry],
                 index: bm25.InvertedIndex) -> dict[str, float]:
    """Entity-IDF per key; token-free surfaces get -inf so they never win."""
    out: dict[str, float] = {}
    for entry in manifest:
        try:
            out[entry.key_id] = bm25.idf_ent(index, entry.surface)
        except SpankeyError:
            out[entry.key_id] = float("-inf")
    return out


def _bm25_index(corpus: Mapping[str, Passage]) -> bm25.InvertedIndex:
    # Title tokens participate in lexical matching alongside the body.
    return bm25.build_inverted_index(
        (pid, f"{p.title} {p.body}" if p.title else p.body)
        for pid, p in corpus.items())


# --- subcommands -------------------------------------------------------------------

def cmd_ingest(config: RunConfig) -> int:
    _require_files(("corpus", config.corpus), ("annotations", config.annotations),
                   ("templates", config.templates))
    corpus = _load_validated_corpus(config)
    result = load_ner_annotations(config.annotations, corpus)
    if result.errors:
        print(f"annotation validation failed ({len(result.errors)} lines):", file=sys.stderr)
        for err in result.errors:
            print(f"  line {err.line_no}: {err.reason}: {err.detail}", file=sys.stderr)
        return EXIT_CONFIG
    load_templates(config.templates)

    config.output_dir.mkdir(parents=True, exist_ok=True)
    entries: list[KeyManifestEntry] = []
    zero_key_passages = 0
    with open(config.corpus_manifest_path, "w", encoding="utf-8") as fh:
        for pid in corpus:
            passage = corpus[pid]
            spans = result.spans_by_passage.get(pid, [])
            passage_entries = enumerate_keys(passage, spans)
            entries.extend(passage_entries)
            if not passage_entries:
                zero_key_passages += 1
            fh.write(f'{{"pid":{_json_str(pid)},"spans":{len(spans)},'
                     f'"keys":{len(passage_entries)}}}\n')
    write_key_manifest(config.key_manifest_path, entries)

    mean_keys = len(entries) / len(corpus) if corpus else 0.0
    print(f"passages: {len(corpus)}")
    print(f"keys: {len(entries)} ({mean_keys:.2f} per passage)")
    if zero_key_passages:
        print(f"warning: {zero_key_passages} passages have zero keys "
              "(no entities, empty title) and are unreachable by dense search")
    return EXIT_OK


def _json_str(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def cmd_embed_mock(config: RunConfig) -> int:
    _require_files(("corpus", config.corpus),
                   ("key manifest", config.key_manifest_path),
                   ("templates", config.templates),
                   ("questions", config.questions))
    corpus = _load_validated_corpus(config)
    manifest = read_key_manifest(config.key_manifest_path)
    embedder = MockEmbedder(dim=config.dim, seed=config.seed)

    key_entries = []
    for entry in manifest:
        passage = corpus.get(entry.passage_id)
        if passage is None:
            raise SpankeyError(f"manifest references unknown passage {entry.passage_id!r}")
        key_entries.append((entry.key_id, _key_vector(embedder, entry, passage)))
    config.output_dir.mkdir(parents=True, exist_ok=True)
    write_embeddings_file(config.key_embeddings_path, key_entries, config.dim)
    print(f"wrote {len(key_entries)} key vectors -> {config.key_embeddings_path}")

    precursors, _ = _build_precursors(config)
    for mode_name in config.modes:
        mode = ConditioningMode(mode_name)
        query_entries = [(qid, _query_vector(embedder, precursors[qid], mode))
                         for qid in precursors]
        path = config.query_embeddings_path(mode_name)
        write_embeddings_file(path, query_entries, config.dim)
        print(f"wrote {len(query_entries)} query vectors ({mode_name}) -> {path}")
    return EXIT_OK


def cmd_index(config: RunConfig) -> int:
    index, manifest = _load_dense_index(config)
    mean_keys = index.key_count / index.passage_count if index.passage_count else 0.0
    print(f"dim: {index.dim}")
    print(f"passages: {index.passage_count}")
    print(f"keys: {index.key_count} ({mean_keys:.2f} per passage)")
    title_keys = sum(1 for e in manifest if e.kind == "title")
    print(f"title keys: {title_keys}, entity keys: {len(manifest) - title_keys}")
    return EXIT_OK


def cmd_search(config: RunConfig, question: Optional[str], qid: Optional[str], k: int) -> int:
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    index, manifest = _load_dense_index(config)
    surface_by_kid = {e.key_id: e.surface for e in manifest}
    mode = config.conditioning_mode()
    embedder = MockEmbedder(dim=config.dim, seed=config.seed)

    if qid is not None:
        precursors, _ = _build_precursors(config)
        if qid not in precursors:
            print(f"error: unknown qid {qid!r}", file=sys.stderr)
            return EXIT_DATA
        precursor = precursors[qid]
        label = qid
    else:
        assert question is not None
        templates = load_templates(config.templates)
        precursor = _match_any_template(question, templates)
        label = "q0"

    try:
        vector = _query_vector(embedder, precursor, mode)
    except EmptyInputError as exc:
        print(f"error: query embedding failed: {exc}", file=sys.stderr)
        return EXIT_DATA

    sampler = config.key_sampler()
    idf_of_key = None
    if isinstance(sampler, dense.MaxIdfSingle):
        corpus = _load_validated_corpus(config)
        idf_of_key = _key_idf_map(manifest, _bm25_index(corpus))
    hits = dense.search_topk(vector, index, k, sampler,
                             idf_of_key=idf_of_key, workers=config.workers)

    config.output_dir.mkdir(parents=True, exist_ok=True)
    run_path = config.output_dir / "search.trec"
    with open(run_path, "a", encoding="utf-8") as fh:
        for rank, hit in enumerate(hits, start=1):
            surface = surface_by_kid.get(hit.best_key_id, "")
            print(f"{rank:3d}  {hit.passage_id}  {hit.score:.6f}  {surface}")
            fh.write(f"{label} Q0 {hit.passage_id} {rank} {hit.score:.6f} dense\n")
    return EXIT_OK


def _match_any_template(question: str, templates) -> QueryPrecursor:
    """Free-text search has no relation id; first matching template wins
    (relations tried in sorted order), else full-span fallback."""
    for relation_id in sorted(templates):
        precursor = build_query_record(question, relation_id, templates)
        if not precursor.fallback:
            return precursor
    return QueryPrecursor(question, None, ConditioningMode.FULL_SPAN, fallback=True)


def _dense_runs(config: RunConfig, index: dense.MultiKeyIndex,
                manifest: Sequence[KeyManifestEntry],
                corpus: Mapping[str, Passage], k: int) -> dict[str, list[tuple[str, float]]]:
    vectors = _load_query_vectors(config, config.mode)
    sampler = config.key_sampler()
    if not isinstance(sampler, dense.FullSet):
        idf_of_key = None
        if isinstance(sampler, dense.MaxIdfSingle):
            idf_of_key = _key_idf_map(manifest, _bm25_index(corpus))
        index = dense.apply_sampler(index, sampler, idf_of_key)
    runs: dict[str, list[tuple[str, float]]] = {}
    for query_id in vectors:
        hits = dense.search_topk(vectors[query_id], index, k, workers=config.workers)
        runs[query_id] = [(h.passage_id, h.score) for h in hits]
    return runs


def cmd_eval(config: RunConfig, run_files: Sequence[tuple[str, Path]]) -> int:
    _require_files(("corpus", config.corpus), ("questions", config.questions),
                   ("templates", config.templates))
    corpus = _load_validated_corpus(config)
    _, records = _build_precursors(config)
    if not records:
        raise ConfigError(f"no questions found in {config.questions}")

    named_runs: dict[str, Mapping[str, Sequence[str]]] = {}
    if run_files:
        for name, path in run_files:
            _require_files((f"run file {name}", path))
            named_runs[name] = evaluation.read_trec_run(path)
    else:
        index, manifest = _load_dense_index(config)
        max_k = max(config.k_values)
        dense_runs = _dense_runs(config, index, manifest, corpus, max_k)
        named_runs["dense"] = {qid: [pid for pid, _ in hits]
                               for qid, hits in dense_runs.items()}
        config.output_dir.mkdir(parents=True, exist_ok=True)
        evaluation.write_trec_run_file(config.output_dir / "dense.trec", dense_runs, "dense")
        if config.compare_bm25:
            sparse_index = _bm25_index(corpus)
            params = bm25.Bm25Params()
            bm25_runs = {r.query_id: bm25.bm25_topk(sparse_index, params,
                                                    r.question_text, max_k)
                         for r in records}
            named_runs["bm25"] = {qid: [pid for pid, _ in hits]
                                  for qid, hits in bm25_runs.items()}
            evaluation.write_trec_run_file(config.output_dir / "bm25.trec", bm25_runs, "bm25")

    reports = {name: evaluation.recall_at_k(runs, records, corpus, config.k_values)
               for name, runs in named_runs.items()}
    csv_text, table_text = evaluation.merge_recall_reports(reports)
    config.output_dir.mkdir(parents=True, exist_ok=True)
    out_csv = config.output_dir / "eval.csv"
    out_csv.write_text(csv_text, encoding="utf-8")
    sys.stdout.write(table_text)
    for name in sorted(reports):
        if reports[name].missing_run_qids:
            logger.warning("run %s is missing %d queries",
                           name, len(reports[name].missing_run_qids))
    print(f"wrote {out_csv}")
    return EXIT_OK


def cmd_ablate(config: RunConfig) -> int:
    _require_files(("corpus", config.corpus), ("questions", config.questions),
                   ("templates", config.templates))
    corpus = _load_validated_corpus(config)
    _, records = _build_precursors(config)
    if not records:
        raise ConfigError(f"no questions found in {config.questions}")
    index, manifest = _load_dense_index(config)

    query_vectors_by_mode = {
        ConditioningMode(mode): _load_query_vectors(config, mode)
        for mode in config.modes
    }
    samplers: list[dense.KeySampler] = [
        dense.FullSet(), dense.RandomSingle(seed=config.seed), dense.MaxIdfSingle()]
    idf_of_key = _key_idf_map(manifest, _bm25_index(corpus))
    report = evaluation.run_ablation_suite(
        index, query_vectors_by_mode, records, corpus,
        samplers, list(query_vectors_by_mode), config.k_values,
        idf_of_key, workers=config.workers)

    config.output_dir.mkdir(parents=True, exist_ok=True)
    out_csv = config.output_dir / "ablation.csv"
    out_csv.write_text(report.to_csv(), encoding="utf-8")
    sys.stdout.write(report.format_table())
    print(f"wrote {out_csv}")
    return EXIT_OK


def cmd_buckets(config: RunConfig) -> int:
    _require_files(("corpus", config.corpus), ("questions", config.questions),
                   ("templates", config.templates))
    corpus = _load_validated_corpus(config)
    _, records = _build_precursors(config)
    if not records:
        raise ConfigError(f"no questions found in {config.questions}")
    index, manifest = _load_dense_index(config)
    sparse_index = _bm25_index(corpus)

    with_entity = [r for r in records if r.extracted_entity is not None]
    excluded = len(records) - len(with_entity)
    if excluded:
        print(f"note: {excluded} fallback questions excluded from bucket analysis")
    idf_by_qid = {r.query_id: bm25.idf_ent(sparse_index, r.extracted_entity.surface)
                  for r in with_entity}
    buckets = evaluation.bucketize_by_idf_ent(with_entity, idf_by_qid, config.bucket_count)

    k = config.k_values[0]
    dense_runs = _dense_runs(config, index, manifest, corpus, k)
    runs_by_name: dict[str, Mapping[str, Sequence[str]]] = {
        "dense": {qid: [pid for pid, _ in hits] for qid, hits in dense_runs.items()}}
    if config.compare_bm25:
        params = bm25.Bm25Params()
        runs_by_name["bm25"] = {
            r.query_id: [pid for pid, _ in bm25.bm25_topk(sparse_index, params,
                                                          r.question_text, k)]
            for r in with_entity}

    report = evaluation.bucket_recall(buckets, runs_by_name, with_entity, corpus, k)
    config.output_dir.mkdir(parents=True, exist_ok=True)
    out_csv = config.output_dir / "buckets.csv"
    out_csv.write_text(report.to_csv(), encoding="utf-8")
    sys.stdout.write(report.format_table())
    print(f"wrote {out_csv}")
    return EXIT_OK


# --- argument parsing ---------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spankey",
        description="Entity-keyed multi-vector passage retrieval toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", type=Path, required=True, help="TOML run config")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--dim", type=int, default=None)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--sampler", choices=_SAMPLER_NAMES, default=None)
        p.add_argument("--mode", choices=_MODE_NAMES, default=None)
        p.add_argument("--output-dir", dest="output_dir", type=Path, default=None)

    for name in ("ingest", "embed-mock", "index", "ablate", "buckets"):
        add_common(sub.add_parser(name))

    search = sub.add_parser("search")
    add_common(search)
    group = search.add_mutually_exclusive_group(required=True)
    group.add_argument("--question", help="free-text question")
    group.add_argument("--qid", help="question id from the questions file")
    search.add_argument("-k", type=int, default=20)

    evalp = sub.add_parser("eval")
    add_common(evalp)
    evalp.add_argument("--run", action="append", default=[], metavar="NAME=PATH",
                       help="evaluate an external TREC run instead of live search")
    return parser


def _overrides(args: argparse.Namespace) -> dict[str, object]:
    return {name: getattr(args, name) for name in
            ("seed", "dim", "workers", "sampler", "mode", "output_dir")
            if getattr(args, name, None) is not None}


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=os.environ.get("ZNER_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config, _overrides(args))
        if args.command == "ingest":
            return cmd_ingest(config)
        if args.command == "embed-mock":
            return cmd_embed_mock(config)
        if args.command == "index":
            return cmd_index(config)
        if args.command == "search":
            return cmd_search(config, args.question, args.qid, args.k)
        if args.command == "eval":
            run_files = []
            for spec_arg in args.run:
                name, sep, path = spec_arg.partition("=")
                if not sep or not name or not path:
                    raise ConfigError(f"--run expects NAME=PATH, got {spec_arg!r}")
                run_files.append((name, Path(path)))
            return cmd_eval(config, run_files)
        if args.command == "ablate":
            return cmd_ablate(config)
        if args.command == "buckets":
            return cmd_buckets(config)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, CorpusFormatError, InvalidKError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SpankeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
