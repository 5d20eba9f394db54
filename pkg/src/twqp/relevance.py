"""RM3 pseudo-relevance feedback and candidate-vocabulary extraction.

The relevance model interpolates the query's unsmoothed term distribution
with a feedback distribution read off the top-m retrieved documents, each
document weighted by its renormalized query likelihood:

    p(w) = lambda * p_q(w) + (1 - lambda) * sum_d weight(d) * p_d(w)

p_q and p_d are maximum-likelihood estimates (no smoothing).  Document
weights are computed in probability space from log scores, subtracting the
max log score before exponentiating.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

from .index import Index
from .retrieval import Query, RankedList, score_ql


@dataclass(frozen=True)
class RelevanceModel:
    """Term distribution over the vocabulary seen in query + feedback docs."""

    query_id: str
    term_probs: dict[str, float]
    m: int
    mu: float
    lam: float


def build_rm3(
    q: Query,
    initial: RankedList,
    m: int,
    mu: float,
    lam: float,
    index: Index,
) -> RelevanceModel:
    """Estimate the RM3 distribution from the top-m docs of the initial list.

    m larger than the list is clamped with a warning; lambda outside [0,1]
    is an error.  Document weights are query likelihoods at this mu, which
    need not be the mu the initial list was retrieved with.
    """
    if not initial.entries:
        raise ValueError("cannot build a relevance model from an empty ranked list")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must be in [0,1], got {lam}")
    if m < 1:
        raise ValueError(f"feedback depth m must be >= 1, got {m}")
    if m > len(initial.entries):
        warnings.warn(
            f"feedback depth {m} exceeds list length {len(initial.entries)}; clamping",
            stacklevel=2,
        )
        m = len(initial.entries)

    feedback_docs = [doc_id for doc_id, _ in initial.entries[:m]]
    log_scores = [score_ql(q, d, mu, index) for d in feedback_docs]
    top = max(log_scores)
    raw = [math.exp(s - top) for s in log_scores]
    z = sum(raw)
    doc_weights = [r / z for r in raw]

    feedback: dict[str, float] = {}
    for d, wd in zip(feedback_docs, doc_weights):
        length = index.doc_length(d)
        if length == 0:
            continue
        for w, tf in index.doc_vector(d).items():
            feedback[w] = feedback.get(w, 0.0) + wd * (tf / length)

    counts = q.term_counts()
    qlen = len(q.terms)
    term_probs: dict[str, float] = {}
    for w in sorted(set(feedback) | set(counts)):
        term_probs[w] = lam * (counts.get(w, 0) / qlen) + (1.0 - lam) * feedback.get(w, 0.0)
    return RelevanceModel(q.query_id, term_probs, m, mu, lam)


def top_n_terms(rm: RelevanceModel, n: int) -> list[str]:
    """The n highest-probability terms; ties broken lexicographically."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    ranked = sorted(rm.term_probs.items(), key=lambda e: (-e[1], e[0]))
    return [w for w, _ in ranked[:n]]


def restrict_top_n(rm: RelevanceModel, n: int) -> RelevanceModel:
    """Clip the model to its top-n support without renormalizing."""
    keep = top_n_terms(rm, n)
    return RelevanceModel(
        rm.query_id, {w: rm.term_probs[w] for w in sorted(keep)}, rm.m, rm.mu, rm.lam
    )


def dump_relevance_model(rm: RelevanceModel, out: TextIO | str | Path) -> None:
    """One `term probability` line per term, sorted, 10 decimal places."""
    lines = [f"{w} {rm.term_probs[w]:.10f}" for w in sorted(rm.term_probs)]
    text = "\n".join(lines) + ("\n" if lines else "")
    if isinstance(out, (str, Path)):
        Path(out).write_text(text, encoding="utf-8")
    else:
        out.write(text)
