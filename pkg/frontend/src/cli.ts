#!/usr/bin/env node
/**
 * spankey-bridge: produce NER annotations and span embeddings for the
 * retrieval engine, in its exact file formats.
 *
 *   spankey-bridge annotate --config bridge.toml
 *   spankey-bridge embed    --config bridge.toml
 *
 * Exit codes: 0 success, 1 model/data failure, 2 bad usage or config.
 */

import { annotateCorpus } from './annotate.js';
import { ConfigError, loadConfig } from './config.js';
import { embedAll } from './embed.js';
import { FormatError } from './jsonl.js';

function usage(): void {
  console.error('usage: spankey-bridge <annotate|embed> --config <bridge.toml>');
}

export async function main(argv: string[]): Promise<number> {
  const [command, ...rest] = argv;
  if (!command || !['annotate', 'embed'].includes(command)) {
    usage();
    return 2;
  }
  const at = rest.indexOf('--config');
  if (at < 0 || at + 1 >= rest.length) {
    usage();
    return 2;
  }
  try {
    const config = loadConfig(rest[at + 1]);
    if (command === 'annotate') {
      await annotateCorpus(config);
    } else {
      await embedAll(config);
    }
    return 0;
  } catch (err) {
    if (err instanceof ConfigError) {
      console.error(`config error: ${(err as Error).message}`);
      return 2;
    }
    if (err instanceof FormatError) {
      console.error(`input error: ${(err as Error).message}`);
      return 1;
    }
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

const entry = process.argv[1] ?? '';
if (entry.endsWith('cli.js') || entry.endsWith('spankey-bridge')) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
