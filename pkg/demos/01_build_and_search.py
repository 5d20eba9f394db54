"""
Building an index and running query-likelihood retrieval
========================================================

"""

# A corpus is just documents with ids; the analyzer lowercases, drops
# stopwords, and applies Porter stemming before anything is counted.
from twqp import AnalyzerConfig, Document, Query, analyze, build_index

docs = [
    Document("d1", "The smoothing of language models for retrieval"),
    Document("d2", "Language models estimate term probabilities"),
    Document("d3", "Relevance feedback expands the query with new terms"),
    Document("d4", "Smoothing interpolates document and collection statistics"),
]

config = AnalyzerConfig()
index = build_index(docs, config)

print("documents:", index.doc_count)
print("vocabulary:", index.vocabulary)

# The analyzer is part of the index, so queries go through the same steps.
tokens = analyze("smoothing language models", config)
print("analyzed query:", tokens)
q = Query("q1", tuple(tokens))

# Scores are log probabilities under Dirichlet smoothing: each document's
# term distribution is pulled toward the collection distribution by mu.
from twqp import retrieve_topk, score_ql

for mu in (10.0, 1000.0):
    ranked = retrieve_topk(q, 10, mu, index)
    print(f"\nmu={mu:g}")
    for rank, (doc_id, score) in enumerate(ranked.entries, start=1):
        print(f"  {rank}. {doc_id}  {score:.4f}")

# score_ql reproduces any single entry directly.
print("\nd1 at mu=1000:", score_ql(q, "d1", 1000.0, index))

# Run files use the usual six-column TREC layout.
from twqp.retrieval import format_run

print("\nrun file:")
print(format_run([retrieve_topk(q, 10, 1000.0, index)], "demo"), end="")
