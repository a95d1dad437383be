"""Recall@k evaluation: answer containment, macro vs micro, TREC run files.

A question is a hit at k when any of its top-k passages contains a gold
answer as a normalized substring of the body. Macro averages treat every
relation equally; micro weights by question count — the demo makes the two
disagree on purpose.
"""

import io

from spankey.core import EvalRecord, Passage
from spankey.evaluation import is_positive, recall_at_k, write_trec_run

CORPUS = {
    "good": Passage("good", "Leeds", "Ted Howard was born in  Leeds , England."),
    "noise": Passage("noise", "", "Entirely unrelated content."),
}

print("containment is case- and whitespace-insensitive:")
print("  answers ['leeds'] in body with doubled spaces ->",
      is_positive(CORPUS["good"], ["leeds"]))
print()

# Relation R1: 2 questions, both answered at rank 1.
# Relation R2: 6 questions, none answered.
records = [EvalRecord(f"r1-{i}", "R1", "q", "R1", ("Leeds",)) for i in range(2)]
records += [EvalRecord(f"r2-{i}", "R2", "q", "R2", ("Mars",)) for i in range(6)]
runs = {r.query_id: ["good", "noise"] for r in records}

report = recall_at_k(runs, records, CORPUS, k_values=[1, 2])
print(report.format_table())
print("macro@1 averages 100 and 0 evenly; micro@1 weights R2's 6 questions:")
print(f"  macro@1 = {report.macro[1]:.1f}, micro@1 = {report.micro[1]:.1f}")
print()

buf = io.StringIO()
write_trec_run(buf, {"r1-0": [("good", 0.93), ("noise", 0.11)]}, run_tag="demo")
print("TREC run lines for external evaluation tools:")
print(buf.getvalue())
