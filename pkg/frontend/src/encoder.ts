/**
 * Span encoders: turn (context text, character span) into one unit vector.
 *
 * The transformers backend mean-pools the token vectors overlapping the
 * span from a feature-extraction model, conditioning the span on its full
 * surrounding text. The hashed backend is a deterministic offline stand-in
 * (no model download) so the bridge and its consumers can be exercised in
 * environments without model access; it is NOT a semantic encoder.
 */

export interface SpanEncoder {
  /** Embedding width; recorded in the output file header. */
  readonly dim: number;
  readonly name: string;
  /** Embed the span context[start, end) conditioned on the whole context. */
  embedSpan(context: string, start: number, end: number): Promise<Float32Array>;
}

export interface EncoderOptions {
  model?: string;
  dim?: number;
  seed?: number;
  device?: string;
  maxTokens?: number;
}

// --- deterministic hashed backend -------------------------------------------

const MASK64 = (1n << 64n) - 1n;
const CONTEXT_MIX_WEIGHT = 0.25;

function hash64(text: string, seed: bigint): bigint {
  let h = (0xcbf29ce484222325n ^ ((seed * 0x9e3779b97f4a7c15n) & MASK64)) & MASK64;
  const bytes = Buffer.from(text, 'utf-8');
  for (const b of bytes) {
    h ^= BigInt(b);
    h = (h * 0x100000001b3n) & MASK64;
  }
  h = ((h ^ (h >> 30n)) * 0xbf58476d1ce4e5b9n) & MASK64;
  h = ((h ^ (h >> 27n)) * 0x94d049bb133111ebn) & MASK64;
  return h ^ (h >> 31n);
}

function featureHash(text: string, dim: number, seed: bigint): Float64Array {
  const vec = new Float64Array(dim);
  const padded = `${text}`;
  for (let i = 0; i + 3 <= padded.length; i++) {
    const h = hash64(padded.slice(i, i + 3), seed);
    const sign = (h & 1n) === 1n ? 1 : -1;
    vec[Number((h >> 1n) % BigInt(dim))] += sign;
  }
  return vec;
}

export class HashedEncoder implements SpanEncoder {
  readonly dim: number;
  readonly name = 'hashed';
  private readonly seed: bigint;

  constructor(options: EncoderOptions = {}) {
    this.dim = options.dim ?? 64;
    this.seed = BigInt(options.seed ?? 0);
  }

  async embedSpan(context: string, start: number, end: number): Promise<Float32Array> {
    const span = context.slice(start, end);
    if (!span) {
      throw new Error('cannot embed an empty span');
    }
    const vec = featureHash(span, this.dim, this.seed);
    if (span !== context) {
      const ctx = featureHash(context, this.dim, this.seed);
      for (let i = 0; i < this.dim; i++) {
        vec[i] += CONTEXT_MIX_WEIGHT * ctx[i];
      }
    }
    let norm = 0;
    for (let i = 0; i < this.dim; i++) {
      norm += vec[i] * vec[i];
    }
    norm = Math.sqrt(norm);
    const out = new Float32Array(this.dim);
    if (norm === 0) {
      out[Number(hash64(span, this.seed) % BigInt(this.dim))] = 1;
      return out;
    }
    for (let i = 0; i < this.dim; i++) {
      out[i] = Math.fround(vec[i] / norm);
    }
    return out;
  }
}

// --- transformers.js backend --------------------------------------------------

interface TokenizerLike {
  (text: string, options?: Record<string, unknown>): Promise<unknown> | unknown;
  encode(text: string, options?: Record<string, unknown>): number[];
  model_max_length?: number;
}

export class TransformersEncoder implements SpanEncoder {
  readonly name: string;
  dim = 0;
  private extractor: ((texts: string, opts?: Record<string, unknown>) => Promise<{
    dims: number[]; data: Float32Array;
  }>) | null = null;
  private tokenizer: TokenizerLike | null = null;
  private leadingSpecials = 0;
  private maxTokens: number;
  private readonly device?: string;

  constructor(options: EncoderOptions = {}) {
    this.name = options.model ?? 'Xenova/all-MiniLM-L6-v2';
    this.maxTokens = options.maxTokens ?? 0;
    this.device = options.device;
  }

  async init(): Promise<void> {
    const { pipeline, AutoTokenizer } = await import('@huggingface/transformers');
    try {
      this.extractor = (await pipeline('feature-extraction', this.name, {
        dtype: 'fp32',
        ...(this.device ? { device: this.device as never } : {}),
      })) as unknown as TransformersEncoder['extractor'];
      this.tokenizer = (await AutoTokenizer.from_pretrained(this.name)) as unknown as TokenizerLike;
    } catch (err) {
      throw new Error(`failed to load encoder model ${this.name}: ${(err as Error).message}`);
    }
    const withSpecials = this.tokenizer.encode('x');
    const bare = this.tokenizer.encode('x', { add_special_tokens: false });
    this.leadingSpecials = withSpecials.length > bare.length ? 1 : 0;
    if (!this.maxTokens) {
      const declared = this.tokenizer.model_max_length ?? 512;
      this.maxTokens = Math.min(declared, 512);
    }
    const probe = await this.extractor!('x');
    this.dim = probe.dims[probe.dims.length - 1];
  }

  /** Symmetric character window around the span so the sequence fits. */
  private fitContext(context: string, start: number, end: number):
      { context: string; start: number; end: number } {
    const tok = this.tokenizer!;
    let lo = 0;
    let hi = context.length;
    let window = context.length;
    while (tok.encode(context.slice(lo, hi)).length > this.maxTokens && window > end - start) {
      window = Math.max(end - start, Math.floor(window / 2));
      lo = Math.max(0, start - Math.floor((window - (end - start)) / 2));
      hi = Math.min(context.length, end + Math.ceil((window - (end - start)) / 2));
    }
    if (lo > 0 || hi < context.length) {
      console.warn(`bridge: context truncated to [${lo}, ${hi}) around span [${start}, ${end})`);
    }
    return { context: context.slice(lo, hi), start: start - lo, end: end - lo };
  }

  async embedSpan(context: string, start: number, end: number): Promise<Float32Array> {
    if (!this.extractor || !this.tokenizer) {
      await this.init();
    }
    const fitted = this.fitContext(context, start, end);
    const tok = this.tokenizer!;
    // Character-to-token alignment by tokenizing the prefix and the span;
    // BPE boundary drift of one token is tolerable for pooled spans.
    const before = tok.encode(fitted.context.slice(0, fitted.start),
                              { add_special_tokens: false }).length;
    const inside = Math.max(
      1, tok.encode(fitted.context.slice(fitted.start, fitted.end),
                    { add_special_tokens: false }).length);
    const output = await this.extractor!(fitted.context);
    const [, tokens, dim] = output.dims.length === 3
      ? output.dims
      : [1, output.dims[0], output.dims[1]];
    const firstRow = Math.min(this.leadingSpecials + before, tokens - 1);
    const lastRow = Math.min(firstRow + inside, tokens);
    const pooled = new Float64Array(dim);
    for (let row = firstRow; row < lastRow; row++) {
      for (let d = 0; d < dim; d++) {
        pooled[d] += output.data[row * dim + d];
      }
    }
    let norm = 0;
    for (let d = 0; d < dim; d++) {
      norm += pooled[d] * pooled[d];
    }
    norm = Math.sqrt(norm);
    if (norm === 0) {
      throw new Error(`encoder produced a zero vector for span [${start}, ${end})`);
    }
    const out = new Float32Array(dim);
    for (let d = 0; d < dim; d++) {
      out[d] = Math.fround(pooled[d] / norm);
    }
    return out;
  }
}

export async function makeEncoder(backend: string, options: EncoderOptions): Promise<SpanEncoder> {
  if (backend === 'hashed') {
    return new HashedEncoder(options);
  }
  if (backend === 'transformers') {
    const encoder = new TransformersEncoder(options);
    await encoder.init();
    return encoder;
  }
  throw new Error(`unknown encoder backend ${JSON.stringify(backend)}`);
}
