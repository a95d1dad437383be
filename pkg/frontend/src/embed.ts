/**
 * Span embedding: one vector per key-manifest entry, plus per-mode query
 * vectors when a question file is configured.
 *
 * Conditioning rules:
 *   entity keys            span within the full passage body
 *   title keys             the entire title as its own sequence
 *   entity_in_full_context query span within the full question
 *   entity_alone           query span as its own sequence
 *   full_span              the whole question as one span
 *
 * Every manifest entry must produce exactly one vector; a gap is a hard
 * failure, never a silent skip.
 */

import { writeFileSync } from 'node:fs';
import { join } from 'node:path';

import { BridgeConfig, Mode } from './config.js';
import { makeEncoder, SpanEncoder } from './encoder.js';
import {
  ManifestEntry,
  Passage,
  readCorpus,
  readManifest,
  readQuestions,
  readTemplates,
  Template,
} from './jsonl.js';
import { writeEmbeddings } from './znrk.js';

async function encodeKey(encoder: SpanEncoder, entry: ManifestEntry,
                         passage: Passage): Promise<Float32Array> {
  if (entry.kind === 'title') {
    return encoder.embedSpan(passage.title, 0, passage.title.length);
  }
  if (entry.start == null || entry.end == null) {
    throw new Error(`manifest entry ${entry.kid}: entity key without offsets`);
  }
  const surface = passage.text.slice(entry.start, entry.end);
  if (surface !== entry.surface) {
    throw new Error(
      `manifest entry ${entry.kid}: surface mismatch `
      + `(${JSON.stringify(surface)} != ${JSON.stringify(entry.surface)})`);
  }
  return encoder.embedSpan(passage.text, entry.start, entry.end);
}

export async function embedKeys(config: BridgeConfig, encoder: SpanEncoder): Promise<number> {
  const passages = new Map(readCorpus(config.paths.corpus).map((p) => [p.id, p]));
  const manifest = readManifest(config.paths.manifest);

  const entries: Array<[string, Float32Array]> = [];
  for (const entry of manifest) {
    const passage = passages.get(entry.pid);
    if (!passage) {
      throw new Error(`manifest entry ${entry.kid}: unknown passage ${entry.pid}`);
    }
    entries.push([entry.kid, await encodeKey(encoder, entry, passage)]);
  }
  if (entries.length !== manifest.length) {
    throw new Error(`coverage gap: ${manifest.length} manifest entries, `
      + `${entries.length} vectors`);
  }
  writeFileSync(config.paths.keysOut, writeEmbeddings(entries, encoder.dim));
  console.log(`wrote ${entries.length} key vectors (dim ${encoder.dim}) -> ${config.paths.keysOut}`);
  return entries.length;
}

/** Prefix/suffix-anchored template extraction (the engine's query rule). */
export function extractEntity(question: string, template: Template):
    { start: number; end: number } | null {
  const at = template.pattern.indexOf('[E]');
  const prefix = template.pattern.slice(0, at);
  const suffix = template.pattern.slice(at + 3);
  if (question.length <= prefix.length + suffix.length
      || !question.startsWith(prefix) || !question.endsWith(suffix)) {
    return null;
  }
  return { start: prefix.length, end: question.length - suffix.length };
}

async function encodeQuery(encoder: SpanEncoder, question: string,
                           span: { start: number; end: number } | null,
                           mode: Mode): Promise<Float32Array> {
  if (span === null) {
    // Fallback questions embed the full question under every mode.
    return encoder.embedSpan(question, 0, question.length);
  }
  if (mode === 'entity_in_full_context') {
    return encoder.embedSpan(question, span.start, span.end);
  }
  if (mode === 'entity_alone') {
    const surface = question.slice(span.start, span.end);
    return encoder.embedSpan(surface, 0, surface.length);
  }
  return encoder.embedSpan(question, 0, question.length);
}

export async function embedQueries(config: BridgeConfig, encoder: SpanEncoder): Promise<number> {
  if (!config.paths.questions || !config.paths.templates || !config.paths.queriesOutDir) {
    return 0;
  }
  const questions = readQuestions(config.paths.questions);
  const templates = readTemplates(config.paths.templates);

  let files = 0;
  for (const mode of config.modes) {
    const entries: Array<[string, Float32Array]> = [];
    for (const q of questions) {
      const template = templates.get(q.relation);
      const span = template ? extractEntity(q.question, template) : null;
      entries.push([q.qid, await encodeQuery(encoder, q.question, span, mode)]);
    }
    const out = join(config.paths.queriesOutDir, `queries.${mode}.znrk`);
    writeFileSync(out, writeEmbeddings(entries, encoder.dim));
    console.log(`wrote ${entries.length} query vectors (${mode}) -> ${out}`);
    files += 1;
  }
  return files;
}

export async function embedAll(config: BridgeConfig): Promise<void> {
  const encoder = await makeEncoder(config.backend, {
    model: config.encoderModel,
    dim: config.dim,
    seed: config.seed,
    device: config.device,
  });
  await embedKeys(config, encoder);
  await embedQueries(config, encoder);
}
