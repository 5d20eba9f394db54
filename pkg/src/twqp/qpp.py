"""Post-retrieval quality predictors and per-term predictor-style signals.

The list-level predictors (WIG, NQC, ScoreRatio) estimate how good a ranked
list is without relevance judgments; they are the P(.) plugged into the
delta-based term weighting.  The per-term signals (nWIG, SROR) are baseline
weighters read off a single retrieval.

Conventions: retrieval scores are log likelihoods, so ScoreRatio is the
likelihood ratio exp(first - last) and NQC normalizes by the absolute
log-space collection likelihood of the query.  NQC uses the population
standard deviation.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .index import Index, collection_prob
from .retrieval import Query, RankedList, retrieve_topk, smoothed_prob

WIG_DEFAULT_M = 5
NQC_DEFAULT_M = 150
NWIG_DEFAULT_M = 50


class PredictorKind(enum.Enum):
    WIG = "WIG"
    NQC = "NQC"
    SCORE_RATIO = "ScoreRatio"

    @classmethod
    def from_string(cls, name: str) -> "PredictorKind":
        for kind in cls:
            if kind.value.lower() == name.strip().lower():
                return kind
        raise ValueError(f"unknown predictor kind {name!r}")


_DEFAULT_M = {
    PredictorKind.WIG: WIG_DEFAULT_M,
    PredictorKind.NQC: NQC_DEFAULT_M,
    PredictorKind.SCORE_RATIO: None,
}


@dataclass(frozen=True)
class PredictorSpec:
    """Predictor choice plus its cutoff depth; m=None means the default."""

    kind: PredictorKind
    m: int | None = None

    def __post_init__(self) -> None:
        if self.m is not None and self.m < 1:
            raise ValueError(f"cutoff m must be >= 1, got {self.m}")

    @property
    def effective_m(self) -> int | None:
        return self.m if self.m is not None else _DEFAULT_M[self.kind]


def predict_wig(lst: RankedList, q: Query, m: int, mu: float, index: Index) -> float:
    """Mean log-ratio of document to collection term likelihood over top-m docs.

        (1 / (m * sqrt(|q|))) * sum_{d in top-m} sum_{q_i} log(p_d(q_i) / p_D(q_i))

    |q| is the bag size of the query actually scored (expanded queries use
    their own size).  Out-of-vocabulary terms are skipped with a warning;
    they still count toward |q|.
    """
    if not lst.entries:
        raise ValueError("WIG is undefined on an empty ranked list")
    m = min(m, len(lst.entries))
    log_pd_collection: dict[str, float] = {}
    for w in set(q.terms):
        p = collection_prob(w, index)
        if p == 0.0:
            warnings.warn(f"WIG: query term {w!r} out of vocabulary; skipped", stacklevel=2)
        else:
            log_pd_collection[w] = math.log(p)
    total = 0.0
    for doc_id, _ in lst.entries[:m]:
        for w in q.terms:
            if w not in log_pd_collection:
                continue
            total += math.log(smoothed_prob(w, doc_id, mu, index)) - log_pd_collection[w]
    return total / (m * math.sqrt(len(q.terms)))


def predict_nqc(lst: RankedList, q: Query, m: int, index: Index) -> float:
    """Spread of the top-m scores over the collection likelihood of the query.

        sigma(top-m log scores) / |sum_i log p_D(q_i)|

    sigma is the population standard deviation.  Any out-of-vocabulary query
    term leaves the collection likelihood undefined and is an error.
    """
    if not lst.entries:
        raise ValueError("NQC is undefined on an empty ranked list")
    m = min(m, len(lst.entries))
    denom = 0.0
    for w, count in sorted(q.term_counts().items()):
        p = collection_prob(w, index)
        if p == 0.0:
            raise ValueError(f"NQC: query term {w!r} out of vocabulary")
        denom += count * math.log(p)
    if denom == 0.0:
        raise ValueError("NQC: degenerate collection likelihood (log = 0)")
    sigma = float(np.std(np.array(lst.scores[:m], dtype=float)))
    return sigma / abs(denom)


def predict_score_ratio(lst: RankedList) -> float:
    """First-to-last likelihood ratio, exp(score_1 - score_last); always >= 1."""
    if not lst.entries:
        raise ValueError("ScoreRatio is undefined on an empty ranked list")
    gap = lst.entries[0][1] - lst.entries[-1][1]
    if gap > 700.0:
        return math.inf
    return math.exp(gap)


def predict_quality(
    spec: PredictorSpec, lst: RankedList, q: Query, mu: float, index: Index
) -> float:
    """Dispatch on predictor kind; the list must be non-empty."""
    if spec.kind is PredictorKind.WIG:
        return predict_wig(lst, q, spec.effective_m, mu, index)
    if spec.kind is PredictorKind.NQC:
        return predict_nqc(lst, q, spec.effective_m, index)
    return predict_score_ratio(lst)


def predictor_minimum(kind: PredictorKind) -> float:
    """The smallest value a predictor can report; used when an expanded
    retrieval comes back empty (such a term cannot be beneficial)."""
    return 1.0 if kind is PredictorKind.SCORE_RATIO else 0.0


def nwig_term(w: str, lst: RankedList, m: int, mu: float, index: Index) -> float:
    """Per-term information-gain weight over the top-m docs of a list.

        [ (1/m) sum_{d in top-m} log p_d(w)  -  log p_D(w) ] / ( -log p_D(w) )

    Out-of-vocabulary terms (and the degenerate p_D(w) = 1) get weight 0
    with a warning, since the denominator is undefined.
    """
    if not lst.entries:
        raise ValueError("nWIG is undefined on an empty ranked list")
    m = min(m, len(lst.entries))
    p_collection = collection_prob(w, index)
    if p_collection == 0.0:
        warnings.warn(f"nWIG: term {w!r} out of vocabulary; weight 0", stacklevel=2)
        return 0.0
    log_pd = math.log(p_collection)
    if log_pd == 0.0:
        warnings.warn(f"nWIG: term {w!r} has collection probability 1; weight 0", stacklevel=2)
        return 0.0
    mean_log = (
        sum(math.log(smoothed_prob(w, doc_id, mu, index)) for doc_id, _ in lst.entries[:m]) / m
    )
    return (mean_log - log_pd) / (-log_pd)


def sror_term(
    w: str,
    q: Query,
    k: int,
    mu: float,
    index: Index,
    base_list: RankedList | None = None,
) -> float:
    """Result-list drift when one occurrence of w is dropped from the query.

        1 - |D_q ∩ D_{q-w}| / |D_q|

    Only terms of q itself are valid.  A single-term query gets weight 1
    (removing the only term destroys the query).  base_list, when given,
    must be the depth-k retrieval for q at the same mu.
    """
    if w not in q.terms:
        raise ValueError(f"SROR: term {w!r} is not a query term")
    if len(q.terms) == 1:
        return 1.0
    if base_list is None:
        base_list = retrieve_topk(q, k, mu, index)
    if not base_list.entries:
        warnings.warn("SROR: empty base retrieval; weight 0", stacklevel=2)
        return 0.0
    remaining = list(q.terms)
    remaining.remove(w)
    reduced = retrieve_topk(Query(q.query_id, tuple(remaining)), k, mu, index)
    base_docs = set(base_list.doc_ids)
    overlap = len(base_docs & set(reduced.doc_ids))
    return 1.0 - overlap / len(base_docs)
