"""Seeded synthetic collections with planted topical structure.

Each query corresponds to one planted topic.  A topic owns five dedicated
terms: one title term (the query text) present in every relevant document
and lightly sprinkled into some background documents, and four expansion
terms concentrated in a "core" half of the relevant documents.  The rest of
every document is background noise drawn from a Zipf-like distribution over
a shared vocabulary.

The planted split gives every query a known set of on-topic expansion
candidates and, via the other topics' title terms, a matched set of
off-topic terms for directional checks: expanding a query with an on-topic
term spreads the scores of its own result list (core documents surge),
while an off-topic title pulls in a second, near-symmetric cluster with
little extra spread.  Topic terms carry digits (e.g. "t03c"), which the
analyzer passes through unchanged; the generator verifies that.

All randomness flows from one seed, so identical parameters reproduce the
collection byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analysis import AnalyzerConfig, analyze
from .evaluation import Qrels
from .index import Document

TITLE_TERMS_PER_TOPIC = 1
EXPANSION_TERMS_PER_TOPIC = 4
OFF_TOPIC_TERMS_PER_QUERY = 4
DOC_LENGTH = 80
TITLE_TF_RANGE = (1, 4)
CORE_TF_RANGE = (10, 14)
FRINGE_TF_RANGE = (1, 2)
SPRINKLE_TF_RANGE = (1, 2)
SPRINKLE_FRACTION = 0.03
ZIPF_EXPONENT = 1.1


@dataclass(frozen=True)
class TopicPlant:
    """What the generator planted for one query."""

    on_topic: tuple[str, ...]
    off_topic: tuple[str, ...]
    relevant_docs: tuple[str, ...]


@dataclass(frozen=True)
class SyntheticCollection:
    documents: list[Document]
    topics: list[tuple[str, str]]
    qrels: Qrels
    plants: dict[str, TopicPlant]


def _topic_terms(topic: int) -> tuple[list[str], list[str]]:
    suffixes = "abcdefghijklmnopqrstuvwxyz"
    count = TITLE_TERMS_PER_TOPIC + EXPANSION_TERMS_PER_TOPIC
    terms = [f"t{topic:02d}{suffixes[j]}" for j in range(count)]
    return terms[:TITLE_TERMS_PER_TOPIC], terms[TITLE_TERMS_PER_TOPIC:]


def make_synthetic(
    seed: int,
    n_docs: int = 200,
    vocab_size: int = 800,
    n_queries: int = 20,
) -> SyntheticCollection:
    """Build a deterministic collection; every query has >= 2 relevant docs."""
    if n_docs < 1 or vocab_size < 1 or n_queries < 1:
        raise ValueError("n_docs, vocab_size and n_queries must all be >= 1")
    per_topic = max(2, int(0.55 * n_docs / n_queries))
    if per_topic * n_queries > n_docs:
        raise ValueError(
            f"{n_docs} documents cannot host {n_queries} topics "
            f"({per_topic} relevant docs each); add documents or drop queries"
        )
    rng = np.random.default_rng(seed)
    background = [f"w{j:04d}" for j in range(vocab_size)]
    zipf = 1.0 / np.arange(1, vocab_size + 1) ** ZIPF_EXPONENT
    zipf /= zipf.sum()

    def background_draw(count: int) -> list[str]:
        picks = rng.choice(vocab_size, size=count, p=zipf)
        return [background[j] for j in picks]

    # Title terms leak into a few background documents so initial lists mix
    # relevant and non-relevant material (otherwise every measure saturates).
    n_topical = per_topic * n_queries
    sprinkle: dict[int, list[str]] = {}
    n_background = n_docs - n_topical
    per_title = min(n_background, max(3, int(SPRINKLE_FRACTION * n_docs)))
    for t in range(n_queries):
        title = _topic_terms(t)[0][0]
        if per_title == 0:
            break
        picked = rng.choice(n_background, size=per_title, replace=False)
        for offset in picked:
            tf = int(rng.integers(SPRINKLE_TF_RANGE[0], SPRINKLE_TF_RANGE[1] + 1))
            sprinkle.setdefault(n_topical + int(offset), []).extend([title] * tf)

    documents: list[Document] = []
    relevant: dict[int, list[str]] = {t: [] for t in range(n_queries)}
    core_cutoff = max(1, per_topic // 2)
    for j in range(n_docs):
        doc_id = f"d{j:05d}"
        if j < n_topical:
            topic = j % n_queries
            slot = j // n_queries
            titles, expansions = _topic_terms(topic)
            tokens: list[str] = []
            for term in titles:
                tokens += [term] * int(rng.integers(TITLE_TF_RANGE[0], TITLE_TF_RANGE[1] + 1))
            tf_range = CORE_TF_RANGE if slot < core_cutoff else FRINGE_TF_RANGE
            for term in expansions:
                tokens += [term] * int(rng.integers(tf_range[0], tf_range[1] + 1))
            filler = max(DOC_LENGTH - len(tokens), 10)
            tokens += background_draw(filler)
            relevant[topic].append(doc_id)
        else:
            planted = sprinkle.get(j, [])
            tokens = planted + background_draw(max(DOC_LENGTH - len(planted), 10))
        order = rng.permutation(len(tokens))
        documents.append(Document(doc_id, " ".join(tokens[i] for i in order)))

    topics: list[tuple[str, str]] = []
    judgments: dict[str, dict[str, int]] = {}
    plants: dict[str, TopicPlant] = {}
    for t in range(n_queries):
        qid = f"q{t:03d}"
        titles, expansions = _topic_terms(t)
        topics.append((qid, " ".join(titles)))
        judgments[qid] = {d: 1 for d in relevant[t]}
        off_topic = tuple(
            _topic_terms((t + 1 + j) % n_queries)[0][0]
            for j in range(min(OFF_TOPIC_TERMS_PER_QUERY, n_queries - 1))
        )
        plants[qid] = TopicPlant(tuple(expansions), off_topic, tuple(relevant[t]))

    _verify_plants(plants, topics)
    return SyntheticCollection(documents, topics, Qrels(judgments), plants)


def _verify_plants(plants: dict[str, TopicPlant], topics: list[tuple[str, str]]) -> None:
    # Planted terms must survive analysis unchanged and stay distinct,
    # otherwise qrels and plant metadata would drift from the index.
    config = AnalyzerConfig()
    seen: set[str] = set()
    planted: list[str] = []
    for _, title in topics:
        planted += title.split()
    for plant in plants.values():
        planted += list(plant.on_topic)
    for term in planted:
        analyzed = analyze(term, config)
        if analyzed != [term]:
            raise AssertionError(f"planted term {term!r} not analyzer-stable: {analyzed}")
        if term in seen:
            raise AssertionError(f"planted term {term!r} not unique")
        seen.add(term)


def write_collection(collection: SyntheticCollection, out_dir: str | Path) -> dict[str, Path]:
    """Write corpus.jsonl, topics.tsv and qrels.txt; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    corpus_path = out / "corpus.jsonl"
    with open(corpus_path, "w", encoding="utf-8") as fh:
        for doc in collection.documents:
            fh.write(json.dumps({"doc_id": doc.doc_id, "text": doc.text}) + "\n")
    topics_path = out / "topics.tsv"
    with open(topics_path, "w", encoding="utf-8") as fh:
        for qid, title in collection.topics:
            fh.write(f"{qid}\t{title}\n")
    qrels_path = out / "qrels.txt"
    with open(qrels_path, "w", encoding="utf-8") as fh:
        for qid in sorted(collection.qrels.judgments):
            for doc_id in sorted(collection.qrels.judgments[qid]):
                fh.write(f"{qid} 0 {doc_id} {collection.qrels.judgments[qid][doc_id]}\n")
    return {"corpus": corpus_path, "topics": topics_path, "qrels": qrels_path}
