/**
 * Binary embedding file format (shared with the retrieval engine).
 *
 * Layout, all integers little-endian:
 *   header:  4 bytes "ZNRK" | u32 version = 1 | u32 dim | u64 count
 *   record:  u16 id_len | id UTF-8 bytes | dim x f32 vector
 *
 * Vectors are L2-normalized before writing (f64 arithmetic, f32 storage);
 * vectors already unit-norm within 1e-5 are stored byte-for-byte as given.
 */

export const MAGIC = Buffer.from('ZNRK', 'ascii');
export const VERSION = 1;
const HEADER_SIZE = 20;
const WRITE_NORM_ATOL = 1e-5;

export class ZnrkError extends Error {}

function norm64(vec: Float32Array): number {
  let sum = 0;
  for (let i = 0; i < vec.length; i++) {
    sum += vec[i] * vec[i];
  }
  return Math.sqrt(sum);
}

/** Normalize into f32 storage; throws on zero vectors. */
export function normalized(vec: Float32Array): Float32Array {
  const n = norm64(vec);
  if (n === 0) {
    throw new ZnrkError('cannot normalize a zero vector');
  }
  if (Math.abs(n - 1) <= WRITE_NORM_ATOL) {
    return vec;
  }
  const out = new Float32Array(vec.length);
  for (let i = 0; i < vec.length; i++) {
    out[i] = Math.fround(vec[i] / n);
  }
  return out;
}

export function writeEmbeddings(entries: Iterable<[string, Float32Array]>, dim: number): Buffer {
  if (dim < 1) {
    throw new ZnrkError(`dim must be >= 1, got ${dim}`);
  }
  const chunks: Buffer[] = [];
  const seen = new Set<string>();
  let count = 0;
  for (const [id, vec] of entries) {
    if (seen.has(id)) {
      throw new ZnrkError(`duplicate embedding id ${JSON.stringify(id)}`);
    }
    seen.add(id);
    if (vec.length !== dim) {
      throw new ZnrkError(`entry ${JSON.stringify(id)}: expected dim ${dim}, got ${vec.length}`);
    }
    const idBytes = Buffer.from(id, 'utf-8');
    if (idBytes.length > 0xffff) {
      throw new ZnrkError(`id too long for u16 length prefix: ${id.slice(0, 32)}...`);
    }
    const unit = normalized(vec);
    const record = Buffer.alloc(2 + idBytes.length + dim * 4);
    record.writeUInt16LE(idBytes.length, 0);
    idBytes.copy(record, 2);
    for (let i = 0; i < dim; i++) {
      record.writeFloatLE(unit[i], 2 + idBytes.length + i * 4);
    }
    chunks.push(record);
    count += 1;
  }
  const header = Buffer.alloc(HEADER_SIZE);
  MAGIC.copy(header, 0);
  header.writeUInt32LE(VERSION, 4);
  header.writeUInt32LE(dim, 8);
  header.writeBigUInt64LE(BigInt(count), 12);
  return Buffer.concat([header, ...chunks]);
}

export function readEmbeddings(data: Buffer): Map<string, Float32Array> {
  if (data.length < HEADER_SIZE) {
    throw new ZnrkError(`file too short for header: ${data.length} < ${HEADER_SIZE} bytes`);
  }
  if (!data.subarray(0, 4).equals(MAGIC)) {
    throw new ZnrkError(`bad magic ${JSON.stringify(data.subarray(0, 4).toString('latin1'))}`);
  }
  const version = data.readUInt32LE(4);
  if (version !== VERSION) {
    throw new ZnrkError(`unsupported version ${version}`);
  }
  const dim = data.readUInt32LE(8);
  const count = Number(data.readBigUInt64LE(12));
  const out = new Map<string, Float32Array>();
  let offset = HEADER_SIZE;
  for (let r = 0; r < count; r++) {
    if (offset + 2 > data.length) {
      throw new ZnrkError(`file cut mid-record at byte ${offset}`);
    }
    const idLen = data.readUInt16LE(offset);
    offset += 2;
    if (offset + idLen + dim * 4 > data.length) {
      throw new ZnrkError(`file cut mid-record at byte ${offset}`);
    }
    const id = data.subarray(offset, offset + idLen).toString('utf-8');
    offset += idLen;
    const vec = new Float32Array(dim);
    for (let i = 0; i < dim; i++) {
      vec[i] = data.readFloatLE(offset + i * 4);
    }
    offset += dim * 4;
    if (out.has(id)) {
      throw new ZnrkError(`duplicate embedding id ${JSON.stringify(id)}`);
    }
    out.set(id, vec);
  }
  if (offset !== data.length) {
    throw new ZnrkError(`${data.length - offset} trailing bytes after ${count} records`);
  }
  return out;
}
