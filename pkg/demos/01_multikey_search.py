"""Build a multi-key index from scratch and watch maxpool scoring at work.

Each passage gets one key per entity mention plus one for its title; a query
scores a passage by the best of its keys. The point of this demo: a passage
about two different people is reachable through either of them, which a
single-vector-per-passage retriever cannot do.
"""

import numpy as np

from spankey import ConditioningMode, MockEmbedder, build_index, search_topk

PASSAGES = {
    "bio1": ("Max Bernhauer", "Max Bernhauer studied beetles in Vienna. "
             "Marie Rutkoski studied literature at Harvard."),
    "bio2": ("Ada Lovelace", "Ada Lovelace worked on the analytical engine."),
    "bio3": ("Alan Turing", "Alan Turing worked at Bletchley Park."),
}

# Entity surfaces per passage, as an external annotator would produce them.
MENTIONS = {
    "bio1": ["Max Bernhauer", "Vienna", "Marie Rutkoski", "Harvard"],
    "bio2": ["Ada Lovelace"],
    "bio3": ["Alan Turing", "Bletchley Park"],
}

embedder = MockEmbedder(dim=64, seed=0)
mode = ConditioningMode.ENTITY_IN_FULL_CONTEXT

triples = []
for pid, (title, body) in PASSAGES.items():
    for i, surface in enumerate(MENTIONS[pid]):
        triples.append((f"{pid}#{i}", pid, embedder.embed(surface, body, mode)))
    triples.append((f"{pid}#t", pid, embedder.embed(title, title, mode)))

index = build_index(triples, dim=64)
print(f"index: {index.passage_count} passages, {index.key_count} keys\n")

for question, entity in [
    ("Where did Max Bernhauer study?", "Max Bernhauer"),
    ("Where did Marie Rutkoski study?", "Marie Rutkoski"),
]:
    query = embedder.embed(entity, question, mode)
    print(question)
    for rank, hit in enumerate(search_topk(query, index, k=3), start=1):
        print(f"  {rank}. {hit.passage_id:6s} score={hit.score:+.4f} via {hit.best_key_id}")
    print()

print("Both questions reach bio1: the shared passage carries a key for each")
print("person, and maxpool lets whichever key matches carry the score.")
