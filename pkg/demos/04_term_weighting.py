"""
Weighting expansion candidates by predicted quality
===================================================

"""

import math

from twqp import (
    AnalyzerConfig,
    Document,
    PredictorKind,
    PredictorSpec,
    Query,
    build_index,
    build_rm3,
    delta_p,
    predict_quality,
    retrieve_topk,
    top_n_terms,
    twqp_weight,
    weigh_terms,
)
from twqp.weighting import WeightingMethod, WeightingParams

docs = [
    Document("d1", "solar panels convert sunlight into electricity"),
    Document("d2", "solar energy and wind energy power the grid"),
    Document("d3", "panels on the roof feed electricity to the grid"),
    Document("d4", "coal plants also generate electricity"),
    Document("d5", "sunlight is free energy"),
    Document("d6", "the grid stores energy from panels"),
]
index = build_index(docs, AnalyzerConfig())
q = Query("q1", ("solar", "electr"))
mu, k = 500.0, 6

# Candidates come from the feedback model: high-probability terms.
initial = retrieve_topk(q, k, mu, index)
rm = build_rm3(q, initial, m=3, mu=mu, lam=0.5, index=index)
candidates = top_n_terms(rm, 6)
print("candidates:", candidates)

# Each candidate is scored by how much it moves a quality predictor when
# added to the query. The base quality is computed once and reused.
spec = PredictorSpec(PredictorKind.NQC, m=3)
base_quality = predict_quality(spec, initial, q, mu, index)
print(f"\nbase NQC = {base_quality:.4f}")
for w in candidates:
    d = delta_p(w, q, initial, spec, k, mu, index, base_quality=base_quality)
    print(f"  {w:10s} delta={d:+.4f}  weight={twqp_weight(d):.4f}")

# The logistic squashes any delta into (0, 1) and is 0.5 at zero.
print("\nlogistic checkpoints:")
for x in (-5.0, -1.0, 0.0, math.log(3.0), 5.0):
    print(f"  twqp_weight({x:+.4f}) = {twqp_weight(x):.4f}")

# weigh_terms builds the whole table in one call; baseline weighters share
# the same interface.
params = WeightingParams(mu=mu, k=k, predictor_m=3)
for method in (WeightingMethod.TWQP_NQC, WeightingMethod.NWIG, WeightingMethod.SROR):
    table = weigh_terms(q, candidates, method, params, index)
    pairs = ", ".join(f"{w}={x:.3f}" for w, x in sorted(table.weights.items()))
    print(f"\n{table.method_label}: {pairs}")
