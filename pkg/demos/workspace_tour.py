"""
Driving the deciders from a workspace file
==========================================

The bundled corpus is a JSON workspace. Each entry can carry expected verdicts;
``qwb validate`` and ``qwb analyze`` compare against them.
"""

from qwb import cli
from qwb.corpus import corpus_path, load_corpus

ws = load_corpus()
print(len(ws.subjects()), "subjects in", corpus_path().name)

for subject, suite in [("M3_over_2", "pg"), ("F_e_over_L3", "lpg"), ("f_L3_to_L2", "slh")]:
    print(cli.emit_report(cli.run_analysis(ws, subject, suite), "human"))
    print()

# the same through the command line entry point
cli.main(["analyze", str(corpus_path()), "--subject", "cat_rel2_rows_doubled", "--suite", "theorems"])
