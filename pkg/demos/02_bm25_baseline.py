"""The lexical side: tokenizer, IDF behavior, and BM25 ranking.

Shows the one detail that regularly surprises people: under the
ln((N - n + 0.5) / (n + 0.5)) formula, a term appearing in more than half
the corpus gets a *negative* IDF, and a higher term frequency then lowers
the score. We keep negative IDF values on purpose (no flooring), because
the entity-IDF analysis depends on the raw scale.
"""

import math

from spankey.bm25 import Bm25Params, bm25_topk, build_inverted_index, idf, idf_ent, tokenize

print("tokenize('Ted-Howard's 2nd book!') ->", tokenize("Ted-Howard's 2nd book!"))
print()

docs = [
    ("d1", "the inside of the engine"),
    ("d2", "inside job is a documentary film"),
    ("d3", "the job market tightened"),
    ("d4", "a film about the markets"),
    ("d5", "engines and turbines"),
]
index = build_inverted_index(docs)
params = Bm25Params()  # k1 = 0.9, b = 0.4

print(f"N = {index.doc_count}, avgdl = {index.avgdl:.2f}")
for term in ("inside", "job", "the", "unseen"):
    n_t = len(index.postings.get(term, ()))
    print(f"  idf({term!r:9}) = {idf(index, term):+.4f}   (appears in {n_t} docs)")
print()
print("'the' appears in 3 of 5 docs -> negative IDF, matching it *hurts*.")
print()

for query in ("inside job", "the the the"):
    print(f"query: {query!r}")
    for pid, score in bm25_topk(index, params, query, k=3):
        print(f"  {pid}  {score:+.4f}")
    print()

surface = "Inside Job"
tokens = tokenize(surface)
values = {t: idf(index, t) for t in tokens}
print(f"entity IDF of {surface!r}: max over {values} = {idf_ent(index, surface):.4f}")
print()
print("sanity: ln(2.5/1.5) =", round(math.log(2.5 / 1.5), 5),
      "is the IDF of a term in 1 of 3 passages")
