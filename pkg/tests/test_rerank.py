"""Weighted re-scoring of ranked-list heads and tail preservation."""

import math

import numpy as np
import pytest

from twqp.index import Document, build_index
from twqp.relevance import RelevanceModel
from twqp.rerank import RerankConfig, rerank_rm3, rerank_twqp
from twqp.retrieval import Query, retrieve_topk, smoothed_prob
from twqp.weighting import TermWeightTable, query_indicator_table

from conftest import PLAIN, make_random_corpus, random_query


def _table(query_id, weights):
    return TermWeightTable(query_id=query_id, method=None, weights=weights)


class TestRerankConfig:
    def test_depth_below_one_rejected(self):
        with pytest.raises(ValueError, match="rerank_depth"):
            RerankConfig(mu=1000.0, rerank_depth=0)

    def test_depth_above_k_rejected(self):
        with pytest.raises(ValueError, match="rerank_depth"):
            RerankConfig(mu=1000.0, rerank_depth=50, k=10)

    def test_nonpositive_mu_rejected(self):
        with pytest.raises(ValueError, match="mu"):
            RerankConfig(mu=0.0)
        with pytest.raises(ValueError, match="mu"):
            RerankConfig(mu=-5.0)

    def test_defaults(self):
        cfg = RerankConfig(mu=1000.0)
        assert cfg.rerank_depth == 100
        assert cfg.k == 1000


class TestIndicatorReduction:
    """A table of query term counts must reproduce query likelihood exactly."""

    def test_counts_table_matches_initial_retrieval_bitwise(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            index = build_index(make_random_corpus(rng, n_docs=40), PLAIN)
            q = random_query(rng, index, max_terms=4, allow_duplicates=True)
            mu = float(rng.integers(50, 3000))
            base = retrieve_topk(q, 1000, mu, index)
            if not base.entries:
                continue
            cfg = RerankConfig(mu=mu, rerank_depth=1000, k=1000)
            rr = rerank_twqp(base, query_indicator_table(q), cfg, index)
            # ids, order, and scores all identical: same sorted-term summation
            assert rr.entries == base.entries
            assert rr.query_id == base.query_id
            assert rr.k == base.k


class TestRescoring:
    def _random_setup(self, rng, n_docs=30):
        index = build_index(make_random_corpus(rng, n_docs=n_docs), PLAIN)
        q = random_query(rng, index, max_terms=3)
        base = retrieve_topk(q, 1000, 1000.0, index)
        return index, q, base

    def test_weighted_sum_oracle(self):
        rng = np.random.default_rng(23)
        checked = 0
        for _ in range(10):
            index, q, base = self._random_setup(rng)
            if len(base.entries) < 2:
                continue
            vocab = index.vocabulary
            terms = rng.choice(len(vocab), size=min(5, len(vocab)), replace=False)
            weights = {vocab[i]: float(rng.uniform(0.05, 1.0)) for i in terms}
            cfg = RerankConfig(mu=800.0, rerank_depth=1000, k=1000)
            rr = rerank_twqp(base, _table(q.query_id, weights), cfg, index)
            expected = {}
            for doc_id, _ in base.entries:
                expected[doc_id] = math.fsum(
                    weights[w] * math.log(smoothed_prob(w, doc_id, 800.0, index))
                    for w in weights
                )
            for doc_id, score in rr.entries:
                assert score == pytest.approx(expected[doc_id], abs=1e-12)
            order = sorted(expected, key=lambda d: (-expected[d], d))
            assert [doc_id for doc_id, _ in rr.entries] == order
            checked += 1
        assert checked >= 5

    def test_zero_weight_equals_absent_term(self):
        docs = [
            Document("d1", "apple banana apple"),
            Document("d2", "banana cherry"),
            Document("d3", "apple cherry cherry"),
        ]
        index = build_index(docs, PLAIN)
        base = retrieve_topk(Query("q1", ("apple", "cherry")), 10, 100.0, index)
        cfg = RerankConfig(mu=100.0, rerank_depth=10, k=10)
        with_zero = rerank_twqp(
            base, _table("q1", {"apple": 0.7, "cherry": 0.0}), cfg, index
        )
        without = rerank_twqp(base, _table("q1", {"apple": 0.7}), cfg, index)
        assert with_zero.entries == without.entries

    def test_zero_weight_unindexed_term_skipped(self):
        docs = [Document("d1", "apple banana"), Document("d2", "banana")]
        index = build_index(docs, PLAIN)
        base = retrieve_topk(Query("q1", ("banana",)), 10, 50.0, index)
        cfg = RerankConfig(mu=50.0, rerank_depth=10, k=10)
        rr = rerank_twqp(base, _table("q1", {"banana": 1.0, "zzz": 0.0}), cfg, index)
        assert [doc_id for doc_id, _ in rr.entries] == ["d2", "d1"]

    def test_unindexed_term_with_weight_rejected(self):
        docs = [Document("d1", "apple banana")]
        index = build_index(docs, PLAIN)
        base = retrieve_topk(Query("q1", ("apple",)), 10, 50.0, index)
        cfg = RerankConfig(mu=50.0, rerank_depth=10, k=10)
        with pytest.raises(ValueError, match="zero smoothed probability"):
            rerank_twqp(base, _table("q1", {"zzz": 0.5}), cfg, index)

    def test_scaled_weights_preserve_order(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            index, q, base = self._random_setup(rng)
            if len(base.entries) < 3:
                continue
            vocab = index.vocabulary
            weights = {
                vocab[i]: float(rng.uniform(0.1, 0.9))
                for i in rng.choice(len(vocab), size=4, replace=False)
            }
            scaled = {w: 3.7 * v for w, v in weights.items()}
            cfg = RerankConfig(mu=600.0, rerank_depth=1000, k=1000)
            a = rerank_twqp(base, _table(q.query_id, weights), cfg, index)
            b = rerank_twqp(base, _table(q.query_id, scaled), cfg, index)
            assert [d for d, _ in a.entries] == [d for d, _ in b.entries]

    def test_rerank_is_deterministic(self):
        rng = np.random.default_rng(37)
        index, q, base = self._random_setup(rng)
        weights = {w: 0.5 for w in q.terms}
        cfg = RerankConfig(mu=1000.0, rerank_depth=1000, k=1000)
        a = rerank_twqp(base, _table(q.query_id, weights), cfg, index)
        b = rerank_twqp(base, _table(q.query_id, weights), cfg, index)
        assert a == b


class TestHeadTail:
    def _six_doc_index(self):
        docs = [
            Document("d1", "apple apple apple banana"),
            Document("d2", "apple apple banana banana"),
            Document("d3", "apple banana banana banana"),
            Document("d4", "apple cherry"),
            Document("d5", "banana cherry"),
            Document("d6", "apple banana cherry date"),
        ]
        return build_index(docs, PLAIN)

    def test_tail_keeps_original_entries(self):
        index = self._six_doc_index()
        base = retrieve_topk(Query("q1", ("apple", "banana")), 10, 200.0, index)
        assert len(base.entries) == 6
        cfg = RerankConfig(mu=200.0, rerank_depth=3, k=10)
        # weight only banana so the head order flips
        rr = rerank_twqp(base, _table("q1", {"banana": 1.0}), cfg, index)
        assert rr.entries[3:] == base.entries[3:]
        assert {d for d, _ in rr.entries[:3]} == {d for d, _ in base.entries[:3]}

    def test_head_reordered_by_new_scores(self):
        index = self._six_doc_index()
        base = retrieve_topk(Query("q1", ("apple", "banana")), 10, 200.0, index)
        cfg = RerankConfig(mu=200.0, rerank_depth=3, k=10)
        rr = rerank_twqp(base, _table("q1", {"banana": 1.0}), cfg, index)
        head_ids = [d for d, _ in rr.entries[:3]]
        # among the original top 3, d3 has the most banana mass
        assert head_ids[0] == "d3"
        scores = [s for _, s in rr.entries[:3]]
        assert scores == sorted(scores, reverse=True)

    def test_depth_beyond_list_length_rescans_everything(self):
        index = self._six_doc_index()
        base = retrieve_topk(Query("q1", ("cherry",)), 10, 200.0, index)
        cfg = RerankConfig(mu=200.0, rerank_depth=100, k=1000)
        rr = rerank_twqp(base, _table("q1", {"cherry": 1.0}), cfg, index)
        assert len(rr.entries) == len(base.entries)
        assert {d for d, _ in rr.entries} == {d for d, _ in base.entries}

    def test_output_is_permutation_with_same_metadata(self):
        rng = np.random.default_rng(41)
        for _ in range(10):
            index = build_index(make_random_corpus(rng, n_docs=35), PLAIN)
            q = random_query(rng, index, max_terms=3)
            base = retrieve_topk(q, 1000, 900.0, index)
            if not base.entries:
                continue
            depth = int(rng.integers(1, len(base.entries) + 1))
            cfg = RerankConfig(mu=900.0, rerank_depth=depth, k=1000)
            weights = {w: float(rng.uniform(0.1, 1.0)) for w in set(q.terms)}
            rr = rerank_twqp(base, _table(q.query_id, weights), cfg, index)
            assert sorted(d for d, _ in rr.entries) == sorted(d for d, _ in base.entries)
            assert rr.query_id == base.query_id and rr.k == base.k


class TestRerankRM3:
    def _index(self):
        docs = [
            Document("d1", "apple apple apple banana"),
            Document("d2", "apple banana banana banana"),
            Document("d3", "apple banana cherry cherry"),
        ]
        return build_index(docs, PLAIN)

    def _model(self, probs):
        return RelevanceModel(
            query_id="q1", term_probs=probs, m=2, mu=1000.0, lam=0.5
        )

    def test_point_mass_scores_by_single_term(self):
        index = self._index()
        base = retrieve_topk(Query("q1", ("apple",)), 10, 300.0, index)
        cfg = RerankConfig(mu=300.0, rerank_depth=10, k=10)
        rr = rerank_rm3(base, self._model({"banana": 1.0}), cfg, index)
        for doc_id, score in rr.entries:
            assert score == 1.0 * math.log(smoothed_prob("banana", doc_id, 300.0, index))
        assert [d for d, _ in rr.entries][0] == "d2"

    def test_uniform_two_term_model(self):
        index = self._index()
        base = retrieve_topk(Query("q1", ("apple",)), 10, 300.0, index)
        cfg = RerankConfig(mu=300.0, rerank_depth=10, k=10)
        rr = rerank_rm3(base, self._model({"apple": 0.5, "cherry": 0.5}), cfg, index)
        for doc_id, score in rr.entries:
            expected = 0.5 * math.log(
                smoothed_prob("apple", doc_id, 300.0, index)
            ) + 0.5 * math.log(smoothed_prob("cherry", doc_id, 300.0, index))
            assert score == pytest.approx(expected, abs=1e-12)

    def test_model_probabilities_used_as_passed(self):
        # doubling the distribution doubles every score: no renormalization
        index = self._index()
        base = retrieve_topk(Query("q1", ("apple",)), 10, 300.0, index)
        cfg = RerankConfig(mu=300.0, rerank_depth=10, k=10)
        probs = {"apple": 0.3, "banana": 0.2}
        one = rerank_rm3(base, self._model(probs), cfg, index)
        two = rerank_rm3(
            base, self._model({w: 2.0 * p for w, p in probs.items()}), cfg, index
        )
        doubled = {d: s for d, s in two.entries}
        for doc_id, score in one.entries:
            assert doubled[doc_id] == 2.0 * score
