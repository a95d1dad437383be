/**
 * Named-entity backends producing character spans over passage bodies.
 *
 * The transformers backend runs a token-classification model and aggregates
 * B-/I- tagged pieces into spans with character offsets. The heuristic
 * backend is a deterministic offline stand-in (capitalized-run matching);
 * it exists so the annotation pipeline is exercisable without model
 * downloads and is not a substitute for a trained model.
 */

export type EntityLabel = 'LOC' | 'ORG' | 'PER' | 'MISC';

export interface NerSpan {
  start: number;
  end: number;
  type: EntityLabel;
}

export interface NerBackend {
  readonly name: string;
  annotate(text: string): Promise<NerSpan[]>;
}

export interface NerOptions {
  model?: string;
  device?: string;
}

const LABELS: EntityLabel[] = ['LOC', 'ORG', 'PER', 'MISC'];

function toLabel(raw: string): EntityLabel | null {
  const upper = raw.toUpperCase();
  for (const label of LABELS) {
    if (upper.endsWith(label)) {
      return label;
    }
  }
  return null;
}

// --- heuristic offline backend -------------------------------------------------

const CAP_RUN = /\b[A-Z][\p{L}\p{N}]*(?:[ '-][A-Z][\p{L}\p{N}]*)*/gu;

export class HeuristicNer implements NerBackend {
  readonly name = 'heuristic';

  async annotate(text: string): Promise<NerSpan[]> {
    const spans: NerSpan[] = [];
    for (const match of text.matchAll(CAP_RUN)) {
      const start = match.index ?? 0;
      const surface = match[0];
      const sentenceInitial = start === 0 || /[.!?]\s+$/.test(text.slice(0, start));
      const words = surface.split(/[ '-]/).length;
      // A lone capitalized word at sentence start is usually just casing.
      if (words === 1 && sentenceInitial) {
        continue;
      }
      spans.push({
        start,
        end: start + surface.length,
        type: words >= 2 ? 'PER' : 'MISC',
      });
    }
    return spans;
  }
}

// --- transformers.js backend -----------------------------------------------------

interface RawEntity {
  entity: string;
  word: string;
  start?: number | null;
  end?: number | null;
}

export class TransformersNer implements NerBackend {
  readonly name: string;
  private classifier: ((text: string) => Promise<RawEntity[]>) | null = null;
  private readonly device?: string;

  constructor(options: NerOptions = {}) {
    this.name = options.model ?? 'Xenova/bert-base-NER';
    this.device = options.device;
  }

  async init(): Promise<void> {
    const { pipeline } = await import('@huggingface/transformers');
    try {
      this.classifier = (await pipeline('token-classification', this.name, {
        dtype: 'fp32',
        ...(this.device ? { device: this.device as never } : {}),
      })) as unknown as TransformersNer['classifier'];
    } catch (err) {
      throw new Error(`failed to load NER model ${this.name}: ${(err as Error).message}`);
    }
  }

  async annotate(text: string): Promise<NerSpan[]> {
    if (!this.classifier) {
      await this.init();
    }
    const raw = await this.classifier!(text);
    const pieces = this.withOffsets(raw, text);
    const spans: NerSpan[] = [];
    for (const piece of pieces) {
      const label = toLabel(piece.entity);
      if (!label || piece.start == null || piece.end == null) {
        continue;
      }
      const isContinuation = piece.entity.toUpperCase().startsWith('I-')
        && spans.length > 0
        && spans[spans.length - 1].type === label
        && piece.start - spans[spans.length - 1].end <= 1;
      if (isContinuation) {
        spans[spans.length - 1].end = piece.end;
      } else {
        spans.push({ start: piece.start, end: piece.end, type: label });
      }
    }
    return spans;
  }

  /** Fill in char offsets for models/pipelines that do not emit them. */
  private withOffsets(pieces: RawEntity[], text: string): RawEntity[] {
    let cursor = 0;
    return pieces.map((piece) => {
      if (piece.start != null && piece.end != null) {
        cursor = piece.end;
        return piece;
      }
      const word = piece.word.replace(/^##/, '').replace(/^Ġ/, '');
      const at = text.indexOf(word, cursor);
      if (at < 0) {
        return { ...piece, start: null, end: null };
      }
      cursor = at + word.length;
      return { ...piece, start: at, end: cursor };
    });
  }
}

export async function makeNer(backend: string, options: NerOptions): Promise<NerBackend> {
  if (backend === 'heuristic') {
    return new HeuristicNer();
  }
  if (backend === 'transformers') {
    const ner = new TransformersNer(options);
    await ner.init();
    return ner;
  }
  throw new Error(`unknown NER backend ${JSON.stringify(backend)}`);
}
