/** Bridge run configuration (TOML). */

import { readFileSync } from 'node:fs';
import { dirname, isAbsolute, resolve } from 'node:path';
import { parse as parseToml } from 'smol-toml';

export const MODES = ['entity_in_full_context', 'entity_alone', 'full_span'] as const;
export type Mode = (typeof MODES)[number];

export interface BridgeConfig {
  backend: 'transformers' | 'hashed';
  encoderModel: string;
  nerModel: string;
  dim: number;        // hashed backend only; transformers infers width
  seed: number;       // hashed backend only
  batchSize: number;
  device?: string;
  modes: Mode[];
  paths: {
    corpus: string;
    annotationsOut: string;
    manifest: string;
    keysOut: string;
    questions?: string;
    templates?: string;
    queriesOutDir?: string;
  };
}

export class ConfigError extends Error {}

export function loadConfig(path: string): BridgeConfig {
  let raw: Record<string, unknown>;
  try {
    raw = parseToml(readFileSync(path, 'utf-8')) as Record<string, unknown>;
  } catch (err) {
    throw new ConfigError(`cannot read config ${path}: ${(err as Error).message}`);
  }
  const base = dirname(path);
  const paths = (raw.paths ?? {}) as Record<string, unknown>;

  const resolvePath = (name: string, required: boolean): string | undefined => {
    const value = paths[name];
    if (value == null) {
      if (required) {
        throw new ConfigError(`config ${path}: missing paths.${name}`);
      }
      return undefined;
    }
    const p = String(value);
    return isAbsolute(p) ? p : resolve(base, p);
  };

  const backend = String(raw.backend ?? 'transformers');
  if (backend !== 'transformers' && backend !== 'hashed') {
    throw new ConfigError(`unknown backend ${JSON.stringify(backend)}`);
  }
  const modes = ((raw.modes as string[] | undefined) ?? [...MODES]).map((m) => {
    if (!MODES.includes(m as Mode)) {
      throw new ConfigError(`unknown mode ${JSON.stringify(m)}`);
    }
    return m as Mode;
  });

  return {
    backend,
    encoderModel: String(raw.encoder_model ?? 'Xenova/all-MiniLM-L6-v2'),
    nerModel: String(raw.ner_model ?? 'Xenova/bert-base-NER'),
    dim: Number(raw.dim ?? 64),
    seed: Number(raw.seed ?? 0),
    batchSize: Number(raw.batch_size ?? 16),
    device: raw.device == null ? undefined : String(raw.device),
    modes,
    paths: {
      corpus: resolvePath('corpus', true)!,
      annotationsOut: resolvePath('annotations_out', true)!,
      manifest: resolvePath('manifest', true)!,
      keysOut: resolvePath('keys_out', true)!,
      questions: resolvePath('questions', false),
      templates: resolvePath('templates', false),
      queriesOutDir: resolvePath('queries_out_dir', false),
    },
  };
}
