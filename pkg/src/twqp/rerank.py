"""Re-score and re-order the head of an initial ranked list.

Both re-rankers score a document as a weighted sum of log smoothed term
probabilities; they differ only in where the weights come from (a term
weight table vs. a relevance model).  Only the top rerank_depth documents
are re-scored; the rest keep their original relative order beneath the
re-ranked block, so the emitted ranking stays well-defined to full depth.
Scores in the tail keep the initial retrieval's scale: rank, not score, is
the authoritative output of a re-ranked list.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

from .index import Index
from .relevance import RelevanceModel
from .retrieval import RankedList, smoothed_prob
from .weighting import TermWeightTable


@dataclass(frozen=True)
class RerankConfig:
    """Depths and smoothing for re-ranking; mu must be positive so every
    in-vocabulary term has a finite log probability."""

    mu: float
    rerank_depth: int = 100
    k: int = 1000

    def __post_init__(self) -> None:
        if not 1 <= self.rerank_depth <= self.k:
            raise ValueError(
                f"need 1 <= rerank_depth <= k, got rerank_depth={self.rerank_depth}, k={self.k}"
            )
        if self.mu <= 0:
            raise ValueError(f"rerank requires mu > 0, got {self.mu}")


def _rescore(
    doc_id: str, weights: dict[str, float], mu: float, index: Index
) -> float:
    # Same summation order as query-likelihood scoring (sorted terms), so a
    # table of term counts reproduces the QL score bit-for-bit.
    score = 0.0
    for w in sorted(weights):
        weight = weights[w]
        if weight == 0.0:
            continue
        p = smoothed_prob(w, doc_id, mu, index)
        if p == 0.0:
            raise ValueError(f"term {w!r} has zero smoothed probability; is it indexed?")
        score += weight * math.log(p)
    return score


def _rerank(
    initial: RankedList, weights: dict[str, float], cfg: RerankConfig, index: Index
) -> RankedList:
    head = initial.entries[: cfg.rerank_depth]
    tail = initial.entries[cfg.rerank_depth :]
    rescored = [(doc_id, _rescore(doc_id, weights, cfg.mu, index)) for doc_id, _ in head]
    rescored.sort(key=lambda e: (-e[1], e[0]))
    return RankedList(initial.query_id, tuple(rescored) + tail, initial.k)


def rerank_twqp(
    initial: RankedList, table: TermWeightTable, cfg: RerankConfig, index: Index
) -> RankedList:
    """Score(d) = sum_w weight(w) * log p_d(w) over the table's terms."""
    return _rerank(initial, table.weights, cfg, index)


def rerank_rm3(
    initial: RankedList, rm: RelevanceModel, cfg: RerankConfig, index: Index
) -> RankedList:
    """Cross-entropy scoring against the relevance model's term distribution.

    The model is used as passed; clip it to its top-n support first when the
    candidate-vocabulary protocol calls for that.
    """
    return _rerank(initial, rm.term_probs, cfg, index)
