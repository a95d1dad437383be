"""The whole pipeline through the command-line surface, end to end.

Writes a small corpus + annotations + templates + questions into a scratch
directory, then drives: ingest -> embed-mock -> index -> search -> eval ->
ablate -> buckets. Every artifact lands under <scratch>/out.
"""

import json
import sys
import tempfile
from pathlib import Path

from spankey import cli

root = Path(tempfile.mkdtemp(prefix="spankey-demo-"))
print(f"scratch directory: {root}\n")

corpus = [
    {"id": "p1", "title": "Ted Howard", "text": "Ted Howard was born in Leeds and wrote many books."},
    {"id": "p2", "title": "Inside Job", "text": "Inside Job is a book by Charles Ferguson."},
    {"id": "p3", "title": "Leeds", "text": "Leeds is a city in West Yorkshire, England."},
]
annotations = [
    {"pid": "p1", "start": 0, "end": 10, "type": "PER"},
    {"pid": "p1", "start": 23, "end": 28, "type": "LOC"},
    {"pid": "p2", "start": 0, "end": 10, "type": "MISC"},
    {"pid": "p2", "start": 24, "end": 40, "type": "PER"},
    {"pid": "p3", "start": 0, "end": 5, "type": "LOC"},
]
templates = [
    {"relation": "P19", "pattern": "Where was [E] born?"},
    {"relation": "P50", "pattern": "Who is the author of [E]?"},
]
questions = [
    {"qid": "q1", "relation": "P19", "question": "Where was Ted Howard born?", "answers": ["Leeds"]},
    {"qid": "q2", "relation": "P50", "question": "Who is the author of Inside Job?", "answers": ["Charles Ferguson"]},
]

for name, rows in [("corpus.jsonl", corpus), ("annotations.jsonl", annotations),
                   ("templates.jsonl", templates), ("questions.jsonl", questions)]:
    with open(root / name, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")

config = root / "run.toml"
config.write_text(
    "dim = 32\nseed = 0\nk_values = [1, 2]\nbucket_count = 2\n"
    "[paths]\n"
    'corpus = "corpus.jsonl"\nannotations = "annotations.jsonl"\n'
    'templates = "templates.jsonl"\nquestions = "questions.jsonl"\n'
    'output_dir = "out"\n')

steps = [
    ["ingest", "--config", str(config)],
    ["embed-mock", "--config", str(config)],
    ["index", "--config", str(config)],
    ["search", "--config", str(config), "--qid", "q2", "-k", "2"],
    ["eval", "--config", str(config)],
    ["ablate", "--config", str(config)],
    ["buckets", "--config", str(config)],
]
for argv in steps:
    print(f"$ spankey {' '.join(argv)}")
    code = cli.main(argv)
    print()
    if code != 0:
        sys.exit(code)

print("artifacts:")
for path in sorted((root / "out").iterdir()):
    print(f"  {path.relative_to(root)}  ({path.stat().st_size} bytes)")
