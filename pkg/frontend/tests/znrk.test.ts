import assert from 'node:assert/strict';
import { test } from 'node:test';

import { normalized, readEmbeddings, writeEmbeddings, ZnrkError } from '../src/znrk.js';

test('empty file is the 20-byte header', () => {
  const data = writeEmbeddings([], 4);
  assert.equal(data.length, 20);
  assert.equal(data.subarray(0, 4).toString('ascii'), 'ZNRK');
  assert.equal(data.readUInt32LE(4), 1);   // version
  assert.equal(data.readUInt32LE(8), 4);   // dim
  assert.equal(data.readBigUInt64LE(12), 0n);
});

test('3-4-5 vector is stored normalized', () => {
  const data = writeEmbeddings([['a', Float32Array.from([3, 4])]], 2);
  const out = readEmbeddings(data);
  const vec = out.get('a')!;
  assert.equal(vec[0], Math.fround(0.6));
  assert.equal(vec[1], Math.fround(0.8));
});

test('round trip preserves ids, order, and payload bits', () => {
  const entries: Array<[string, Float32Array]> = [];
  for (let i = 0; i < 10; i++) {
    const vec = Float32Array.from({ length: 8 }, (_, d) => Math.sin(i * 8 + d));
    entries.push([`id${i}`, normalized(vec)]);
  }
  const out = readEmbeddings(writeEmbeddings(entries, 8));
  assert.deepEqual([...out.keys()], entries.map(([id]) => id));
  for (const [id, vec] of entries) {
    assert.deepEqual([...out.get(id)!], [...vec]);
  }
});

test('unit vectors are stored byte-for-byte (write is a fixed point)', () => {
  const unit = normalized(Float32Array.from([1, 2, 3, 4]));
  const once = writeEmbeddings([['v', unit]], 4);
  const twice = writeEmbeddings([['v', readEmbeddings(once).get('v')!]], 4);
  assert.deepEqual(once, twice);
});

test('zero vectors are rejected', () => {
  assert.throws(() => writeEmbeddings([['z', new Float32Array(3)]], 3), ZnrkError);
});

test('duplicate ids are rejected', () => {
  const vec = Float32Array.from([1, 0]);
  assert.throws(
    () => writeEmbeddings([['a', vec], ['a', vec]], 2),
    /duplicate/);
});

test('dimension mismatches are rejected', () => {
  assert.throws(
    () => writeEmbeddings([['a', Float32Array.from([1, 0, 0])]], 2),
    /dim/);
});

test('bad magic and truncation are detected', () => {
  const good = writeEmbeddings([['a', Float32Array.from([1, 0])]], 2);
  const bad = Buffer.from(good);
  bad.write('XXXX', 0, 'ascii');
  assert.throws(() => readEmbeddings(bad), /magic/);
  assert.throws(() => readEmbeddings(good.subarray(0, good.length - 3)), /cut|trailing/);
});

test('unicode ids survive the id length prefix', () => {
  const data = writeEmbeddings([['clé-β', Float32Array.from([0, 1])]], 2);
  assert.ok(readEmbeddings(data).has('clé-β'));
});
