/**
 * JSONL exchange formats shared with the retrieval engine:
 *
 *   corpus:      {"id": str, "title": str, "text": str}
 *   annotations: {"pid": str, "start": int, "end": int, "type": "LOC"|"ORG"|"PER"|"MISC"}
 *   manifest:    {"kid": str, "pid": str, "start": int|null, "end": int|null,
 *                 "kind": "entity"|"title", "surface": str}
 *   questions:   {"qid": str, "relation": str, "question": str, "answers": [str, ...]}
 *   templates:   {"relation": str, "pattern": str}  (one [E] placeholder)
 */

import { readFileSync, writeFileSync } from 'node:fs';

export interface Passage {
  id: string;
  title: string;
  text: string;
}

export interface SpanAnnotation {
  pid: string;
  start: number;
  end: number;
  type: 'LOC' | 'ORG' | 'PER' | 'MISC';
}

export interface ManifestEntry {
  kid: string;
  pid: string;
  start: number | null;
  end: number | null;
  kind: 'entity' | 'title';
  surface: string;
}

export interface QuestionRecord {
  qid: string;
  relation: string;
  question: string;
  answers: string[];
}

export interface Template {
  relation: string;
  pattern: string;
}

export class FormatError extends Error {}

/** Decode strictly as UTF-8; malformed bytes raise with the line number. */
function decodeLines(path: string): string[] {
  const raw = readFileSync(path);
  const decoder = new TextDecoder('utf-8', { fatal: true });
  const lines: string[] = [];
  let lineStart = 0;
  let lineNo = 1;
  for (let i = 0; i <= raw.length; i++) {
    if (i === raw.length || raw[i] === 0x0a) {
      try {
        lines.push(decoder.decode(raw.subarray(lineStart, i)));
      } catch {
        throw new FormatError(`${path}:${lineNo}: not valid UTF-8`);
      }
      lineStart = i + 1;
      lineNo += 1;
    }
  }
  return lines;
}

function parseJsonl<T>(path: string, check: (obj: unknown, where: string) => T): T[] {
  const out: T[] = [];
  decodeLines(path).forEach((line, index) => {
    const trimmed = line.trim();
    if (!trimmed) {
      return;
    }
    const where = `${path}:${index + 1}`;
    let obj: unknown;
    try {
      obj = JSON.parse(trimmed);
    } catch (err) {
      throw new FormatError(`${where}: bad JSON: ${(err as Error).message}`);
    }
    out.push(check(obj, where));
  });
  return out;
}

function field(obj: Record<string, unknown>, name: string, where: string): unknown {
  if (!(name in obj)) {
    throw new FormatError(`${where}: missing field ${JSON.stringify(name)}`);
  }
  return obj[name];
}

export function readCorpus(path: string): Passage[] {
  return parseJsonl(path, (obj, where) => {
    const rec = obj as Record<string, unknown>;
    return {
      id: String(field(rec, 'id', where)),
      title: String(rec.title ?? ''),
      text: String(field(rec, 'text', where)),
    };
  });
}

export function readManifest(path: string): ManifestEntry[] {
  return parseJsonl(path, (obj, where) => {
    const rec = obj as Record<string, unknown>;
    const kind = field(rec, 'kind', where);
    if (kind !== 'entity' && kind !== 'title') {
      throw new FormatError(`${where}: bad kind ${JSON.stringify(kind)}`);
    }
    return {
      kid: String(field(rec, 'kid', where)),
      pid: String(field(rec, 'pid', where)),
      start: rec.start == null ? null : Number(rec.start),
      end: rec.end == null ? null : Number(rec.end),
      kind,
      surface: String(field(rec, 'surface', where)),
    };
  });
}

export function readQuestions(path: string): QuestionRecord[] {
  return parseJsonl(path, (obj, where) => {
    const rec = obj as Record<string, unknown>;
    const answers = field(rec, 'answers', where);
    if (!Array.isArray(answers) || answers.length === 0) {
      throw new FormatError(`${where}: answers must be a non-empty array`);
    }
    return {
      qid: String(field(rec, 'qid', where)),
      relation: String(field(rec, 'relation', where)),
      question: String(field(rec, 'question', where)),
      answers: answers.map(String),
    };
  });
}

export function readTemplates(path: string): Map<string, Template> {
  const out = new Map<string, Template>();
  for (const template of parseJsonl(path, (obj, where) => {
    const rec = obj as Record<string, unknown>;
    const pattern = String(field(rec, 'pattern', where));
    if (pattern.split('[E]').length !== 2) {
      throw new FormatError(`${where}: pattern must contain exactly one [E]`);
    }
    return { relation: String(field(rec, 'relation', where)), pattern };
  })) {
    out.set(template.relation, template);
  }
  return out;
}

export function writeAnnotations(path: string, annotations: SpanAnnotation[]): void {
  const lines = annotations.map((a) =>
    JSON.stringify({ pid: a.pid, start: a.start, end: a.end, type: a.type }));
  writeFileSync(path, lines.join('\n') + (lines.length ? '\n' : ''));
}
