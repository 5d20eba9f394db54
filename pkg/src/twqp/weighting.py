"""Term weighting: quality-delta sigmoid weights and the baseline weighters.

The central quantity is delta_p(w; q): retrieve once for the query, once for
the query expanded with w, run the same quality predictor on both lists, and
take the difference.  The sigmoid of that delta is the term's weight, so
terms predicted to help get weight > 0.5 and terms predicted to hurt get
weight < 0.5.

For a candidate vocabulary V this costs exactly 1 + |V| retrievals per query:
the base quality is computed once and reused for every w.  All retrievals go
through this module's ``retrieve_topk`` name so the count can be instrumented.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from .index import Index
from .qpp import (
    NWIG_DEFAULT_M,
    PredictorKind,
    PredictorSpec,
    nwig_term,
    predict_quality,
    predict_score_ratio,
    predictor_minimum,
    sror_term,
)
from .retrieval import Query, RankedList, expand_query, retrieve_topk


class WeightingMethod(enum.Enum):
    TWQP_WIG = "TWQP(WIG)"
    TWQP_NQC = "TWQP(NQC)"
    TWQP_SCORE_RATIO = "TWQP(ScoreRatio)"
    NWIG = "nWIG"
    SCORE_RATIO_NORM = "ScoreRatio"
    SROR = "SROR"

    @classmethod
    def from_string(cls, name: str) -> "WeightingMethod":
        for method in cls:
            if method.value.lower() == name.strip().lower():
                return method
        raise ValueError(f"unknown weighting method {name!r}")


_TWQP_PREDICTOR = {
    WeightingMethod.TWQP_WIG: PredictorKind.WIG,
    WeightingMethod.TWQP_NQC: PredictorKind.NQC,
    WeightingMethod.TWQP_SCORE_RATIO: PredictorKind.SCORE_RATIO,
}


@dataclass(frozen=True)
class WeightingParams:
    """Retrieval depth and smoothing shared by all weighters.

    predictor_m overrides the predictor's default cutoff for TWQP methods;
    nwig_m is the nWIG cutoff.
    """

    mu: float
    k: int = 1000
    predictor_m: int | None = None
    nwig_m: int = NWIG_DEFAULT_M


@dataclass(frozen=True)
class TermWeightTable:
    """term -> weight for one query under one method.

    method is None for diagnostic tables (e.g. the query-indicator table).
    """

    query_id: str
    method: WeightingMethod | None
    weights: dict[str, float]

    @property
    def method_label(self) -> str:
        return self.method.value if self.method is not None else "indicator"


def delta_p(
    w: str,
    q: Query,
    base_list: RankedList,
    predictor: PredictorSpec,
    k: int,
    mu: float,
    index: Index,
    base_quality: float | None = None,
) -> float:
    """Predicted-quality change from expanding q with w.

    base_list must be the depth-k retrieval for q at the same mu.  Passing
    base_quality skips re-predicting the base list (callers weighting many
    terms compute it once).  An empty expanded retrieval is scored at the
    predictor's minimum: a term that empties the result list cannot help.
    """
    if base_quality is None:
        base_quality = predict_quality(predictor, base_list, q, mu, index)
    expanded = expand_query(q, w)
    expanded_list = retrieve_topk(expanded, k, mu, index)
    if expanded_list.entries:
        expanded_quality = predict_quality(predictor, expanded_list, expanded, mu, index)
    else:
        expanded_quality = predictor_minimum(predictor.kind)
    return expanded_quality - base_quality


def twqp_weight(delta: float) -> float:
    """Logistic weight 1 / (1 + exp(-delta)); in (0,1) for finite delta."""
    if math.isnan(delta):
        raise ValueError("delta is NaN")
    if delta >= 0:
        return 1.0 / (1.0 + math.exp(-delta))
    e = math.exp(delta)
    return e / (1.0 + e)


def weigh_terms(
    q: Query,
    vocabulary: Sequence[str],
    method: WeightingMethod,
    params: WeightingParams,
    index: Index,
) -> TermWeightTable:
    """Weight table over the candidate vocabulary under the chosen method.

    SROR ignores the vocabulary and weighs the query's own distinct terms.
    ScoreRatio weights come from one single-term retrieval per candidate,
    sum-normalized; an empty single-term retrieval contributes 0.
    """
    if method is WeightingMethod.SROR:
        base = retrieve_topk(q, params.k, params.mu, index)
        weights = {
            t: sror_term(t, q, params.k, params.mu, index, base_list=base)
            for t in sorted(set(q.terms))
        }
        return TermWeightTable(q.query_id, method, weights)

    if not vocabulary:
        raise ValueError("candidate vocabulary is empty")

    if method is WeightingMethod.SCORE_RATIO_NORM:
        raw: dict[str, float] = {}
        for w in vocabulary:
            single = retrieve_topk(Query(q.query_id, (w,)), params.k, params.mu, index)
            raw[w] = predict_score_ratio(single) if single.entries else 0.0
        total = sum(raw.values())
        if total == 0.0:
            warnings.warn("ScoreRatio: all candidate retrievals empty; zero table", stacklevel=2)
            return TermWeightTable(q.query_id, method, raw)
        return TermWeightTable(q.query_id, method, {w: v / total for w, v in raw.items()})

    if method is WeightingMethod.NWIG:
        base = retrieve_topk(q, params.k, params.mu, index)
        if not base.entries:
            raise ValueError(f"query {q.query_id!r} retrieved nothing; nWIG undefined")
        weights = {w: nwig_term(w, base, params.nwig_m, params.mu, index) for w in vocabulary}
        return TermWeightTable(q.query_id, method, weights)

    predictor = PredictorSpec(_TWQP_PREDICTOR[method], params.predictor_m)
    base = retrieve_topk(q, params.k, params.mu, index)
    if not base.entries:
        raise ValueError(f"query {q.query_id!r} retrieved nothing; {method.value} undefined")
    base_quality = predict_quality(predictor, base, q, params.mu, index)
    weights = {}
    for w in vocabulary:
        delta = delta_p(w, q, base, predictor, params.k, params.mu, index, base_quality)
        weights[w] = twqp_weight(delta)
    return TermWeightTable(q.query_id, method, weights)


def query_indicator_table(q: Query) -> TermWeightTable:
    """Each query term weighted by its occurrence count, everything else 0.

    Feeding this table to the weighted re-scorer reproduces plain query
    likelihood, which is the sanity anchor for the re-ranking math.
    """
    weights = {w: float(c) for w, c in sorted(q.term_counts().items())}
    return TermWeightTable(q.query_id, None, weights)


def dump_weight_tables(
    tables: Iterable[TermWeightTable], out: TextIO | str | Path
) -> None:
    """Lines of `query_id method term weight`, 8 decimal places, terms sorted."""
    lines = []
    for table in tables:
        for term in sorted(table.weights):
            lines.append(
                f"{table.query_id} {table.method_label} {term} {table.weights[term]:.8f}"
            )
    text = "\n".join(lines) + ("\n" if lines else "")
    if isinstance(out, (str, Path)):
        Path(out).write_text(text, encoding="utf-8")
    else:
        out.write(text)
