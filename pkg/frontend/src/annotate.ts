/**
 * Corpus annotation: run the NER backend over every passage body and write
 * span annotations in the engine's JSONL format. Offsets are character
 * offsets into the body; every span is bounds-checked before writing.
 */

import { BridgeConfig } from './config.js';
import { readCorpus, SpanAnnotation, writeAnnotations } from './jsonl.js';
import { makeNer } from './ner.js';

export async function annotateCorpus(config: BridgeConfig): Promise<SpanAnnotation[]> {
  const passages = readCorpus(config.paths.corpus);
  const backend = config.backend === 'hashed' ? 'heuristic' : 'transformers';
  const ner = await makeNer(backend, { model: config.nerModel, device: config.device });

  const annotations: SpanAnnotation[] = [];
  for (const passage of passages) {
    const spans = await ner.annotate(passage.text);
    for (const span of spans) {
      if (!(span.start >= 0 && span.start < span.end && span.end <= passage.text.length)) {
        throw new Error(
          `NER produced out-of-bounds span [${span.start}, ${span.end}) `
          + `for passage ${passage.id} (length ${passage.text.length})`);
      }
      annotations.push({ pid: passage.id, start: span.start, end: span.end, type: span.type });
    }
  }
  writeAnnotations(config.paths.annotationsOut, annotations);
  console.log(`annotated ${passages.length} passages with ${annotations.length} spans`
    + ` (${ner.name}) -> ${config.paths.annotationsOut}`);
  return annotations;
}
