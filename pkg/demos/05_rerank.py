"""
Re-ranking the head of the initial list
=======================================

"""

from twqp import (
    AnalyzerConfig,
    Document,
    PredictorKind,
    PredictorSpec,
    Query,
    build_index,
    build_rm3,
    rerank_rm3,
    rerank_twqp,
    restrict_top_n,
    retrieve_topk,
    top_n_terms,
    weigh_terms,
)
from twqp.rerank import RerankConfig
from twqp.weighting import WeightingMethod, WeightingParams, query_indicator_table

docs = [
    Document("d1", "training neural networks with gradient descent"),
    Document("d2", "gradient descent converges on convex losses"),
    Document("d3", "neural networks learn feature representations"),
    Document("d4", "deep networks need many training examples"),
    Document("d5", "convex optimization and line search"),
    Document("d6", "training data quality matters"),
]
index = build_index(docs, AnalyzerConfig())
q = Query("q1", ("train", "network"))
mu, k = 300.0, 6

initial = retrieve_topk(q, k, mu, index)
print("initial:  ", initial.doc_ids)

# Sanity anchor: re-scoring with the query's own term counts reproduces the
# initial ranking exactly, because the weighted sum collapses to plain QL.
cfg = RerankConfig(mu=mu, rerank_depth=4, k=k)
identity = rerank_twqp(initial, query_indicator_table(q), cfg, index)
print("indicator:", identity.doc_ids, "(identical)" if identity.entries == initial.entries else "(DIFFERENT)")

# A learned weight table moves documents that match the weighted terms up.
params = WeightingParams(mu=mu, k=k, predictor_m=3)
spec = PredictorSpec(PredictorKind.NQC, m=3)
rm = build_rm3(q, initial, m=3, mu=mu, lam=0.5, index=index)
candidates = top_n_terms(rm, 5)
table = weigh_terms(q, candidates, WeightingMethod.TWQP_NQC, params, index)
reranked = rerank_twqp(initial, table, cfg, index)
print("weighted: ", reranked.doc_ids)

# RM3 re-ranking scores against the feedback distribution instead.
by_rm3 = rerank_rm3(initial, restrict_top_n(rm, 5), cfg, index)
print("rm3:      ", by_rm3.doc_ids)

# Only the head is re-scored; positions past rerank_depth keep their
# original documents and scores.
print("\ntail preserved:", reranked.entries[4:] == initial.entries[4:])
