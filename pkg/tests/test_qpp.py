"""Quality predictors: analytic zeros, hand values, invariances."""

import math

import numpy as np
import pytest

from twqp.index import Document, build_index, collection_prob
from twqp.qpp import (
    NQC_DEFAULT_M,
    NWIG_DEFAULT_M,
    WIG_DEFAULT_M,
    PredictorKind,
    PredictorSpec,
    nwig_term,
    predict_nqc,
    predict_quality,
    predict_score_ratio,
    predict_wig,
    predictor_minimum,
    sror_term,
)
from twqp.retrieval import Query, RankedList, retrieve_topk, smoothed_prob

from conftest import PLAIN, make_random_corpus, random_query


def _list(scores, query_id="q1", k=1000):
    return RankedList(query_id, tuple((f"d{i}", s) for i, s in enumerate(scores)), k)


class TestPredictorSpec:
    def test_kind_parsing(self):
        assert PredictorKind.from_string("nqc") is PredictorKind.NQC
        assert PredictorKind.from_string("WIG") is PredictorKind.WIG
        assert PredictorKind.from_string("ScoreRatio") is PredictorKind.SCORE_RATIO

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            PredictorKind.from_string("clarity")

    def test_default_cutoffs(self):
        assert PredictorSpec(PredictorKind.WIG).effective_m == WIG_DEFAULT_M == 5
        assert PredictorSpec(PredictorKind.NQC).effective_m == NQC_DEFAULT_M == 150
        assert PredictorSpec(PredictorKind.WIG, m=20).effective_m == 20
        assert NWIG_DEFAULT_M == 50

    def test_minimums(self):
        assert predictor_minimum(PredictorKind.WIG) == 0.0
        assert predictor_minimum(PredictorKind.NQC) == 0.0
        assert predictor_minimum(PredictorKind.SCORE_RATIO) == 1.0


class TestWIG:
    def test_zero_when_document_equals_collection(self):
        # a single-document collection IS its own collection model; with
        # p_D = 1/2 every smoothing step is exact in binary
        index = build_index([Document("d1", "apple banana")], PLAIN)
        q = Query("q1", ("apple", "banana"))
        lst = retrieve_topk(q, 10, 100.0, index)
        assert predict_wig(lst, q, 5, 100.0, index) == 0.0

    def test_zero_on_identical_copies(self):
        docs = [Document(f"d{i}", "apple banana") for i in range(4)]
        index = build_index(docs, PLAIN)
        q = Query("q1", ("apple",))
        lst = retrieve_topk(q, 10, 50.0, index)
        assert predict_wig(lst, q, 4, 50.0, index) == 0.0

    def test_direct_double_sum_oracle(self):
        rng = np.random.default_rng(61)
        for _ in range(10):
            index = build_index(make_random_corpus(rng, 20), PLAIN)
            q = random_query(rng, index)
            mu = float(rng.uniform(10, 2000))
            lst = retrieve_topk(q, 1000, mu, index)
            if not lst.entries:
                continue
            m = min(int(rng.integers(1, 8)), len(lst.entries))
            total = 0.0
            for doc_id, _ in lst.entries[:m]:
                for w in q.terms:
                    total += math.log(
                        smoothed_prob(w, doc_id, mu, index) / collection_prob(w, index)
                    )
            expected = total / (m * math.sqrt(len(q.terms)))
            assert abs(predict_wig(lst, q, m, mu, index) - expected) < 1e-9

    def test_oov_terms_skipped_but_counted_in_size(self, fruit_index):
        q = Query("q1", ("apple", "zzz"))
        lst = retrieve_topk(q, 10, 10.0, fruit_index)
        with pytest.warns(UserWarning, match="out of vocabulary"):
            got = predict_wig(lst, q, 5, 10.0, fruit_index)
        contrib = math.log(
            smoothed_prob("apple", "d1", 10.0, fruit_index)
            / collection_prob("apple", fruit_index)
        )
        assert abs(got - contrib / (1 * math.sqrt(2))) < 1e-12

    def test_m_clamped_to_list_length(self, fruit_index):
        q = Query("q1", ("banana",))
        lst = retrieve_topk(q, 10, 10.0, fruit_index)
        assert predict_wig(lst, q, 500, 10.0, fruit_index) == predict_wig(
            lst, q, len(lst.entries), 10.0, fruit_index
        )

    def test_empty_list_rejected(self, fruit_index):
        with pytest.raises(ValueError, match="empty"):
            predict_wig(_list([]), Query("q1", ("apple",)), 5, 10.0, fruit_index)

    def test_shift_of_all_tfs_changes_value(self, fruit_index):
        # sanity: WIG is not constant across queries
        qa = Query("q1", ("apple",))
        qb = Query("q1", ("cherry",))
        la = retrieve_topk(qa, 10, 10.0, fruit_index)
        lb = retrieve_topk(qb, 10, 10.0, fruit_index)
        assert predict_wig(la, qa, 5, 10.0, fruit_index) != predict_wig(
            lb, qb, 5, 10.0, fruit_index
        )


class TestNQC:
    def test_zero_on_constant_scores(self, fruit_index):
        lst = _list([-2.0, -2.0, -2.0, -2.0])
        assert predict_nqc(lst, Query("q1", ("apple",)), 4, fruit_index) == 0.0

    def test_zero_on_single_entry(self, fruit_index):
        lst = _list([-3.5])
        assert predict_nqc(lst, Query("q1", ("apple",)), 5, fruit_index) == 0.0

    def test_hand_value(self, fruit_index):
        # population sigma of {-1,-2,-3} is sqrt(2/3); the denominator is
        # |log p_D(cherry)| = |log(1/5)|
        lst = _list([-1.0, -2.0, -3.0])
        q = Query("q1", ("cherry",))
        expected = math.sqrt(2.0 / 3.0) / abs(math.log(1 / 5))
        assert abs(predict_nqc(lst, q, 3, fruit_index) - expected) < 1e-12

    def test_duplicate_terms_scale_denominator(self, fruit_index):
        lst = _list([-1.0, -2.0, -3.0])
        single = predict_nqc(lst, Query("q1", ("cherry",)), 3, fruit_index)
        double = predict_nqc(lst, Query("q1", ("cherry", "cherry")), 3, fruit_index)
        assert abs(double - single / 2) < 1e-12

    def test_shift_invariance(self, fruit_index):
        rng = np.random.default_rng(67)
        q = Query("q1", ("banana",))
        for _ in range(10):
            scores = sorted(rng.uniform(-20, -1, size=6), reverse=True)
            shifted = [s + 3.25 for s in scores]
            a = predict_nqc(_list(scores), q, 6, fruit_index)
            b = predict_nqc(_list(shifted), q, 6, fruit_index)
            assert abs(a - b) < 1e-9

    def test_oov_term_rejected(self, fruit_index):
        with pytest.raises(ValueError, match="out of vocabulary"):
            predict_nqc(_list([-1.0, -2.0]), Query("q1", ("zzz",)), 2, fruit_index)

    def test_empty_list_rejected(self, fruit_index):
        with pytest.raises(ValueError, match="empty"):
            predict_nqc(_list([]), Query("q1", ("apple",)), 5, fruit_index)


class TestScoreRatio:
    def test_exp_of_gap(self):
        # scores -1 and -4: ratio e^3
        assert abs(predict_score_ratio(_list([-1.0, -2.0, -4.0])) - 20.085536923187668) < 1e-9

    def test_single_entry_is_one(self):
        assert predict_score_ratio(_list([-7.0])) == 1.0

    def test_equal_scores_give_one(self):
        assert predict_score_ratio(_list([-2.0, -2.0, -2.0])) == 1.0

    def test_huge_gap_is_inf(self):
        assert predict_score_ratio(_list([0.0, -800.0])) == math.inf

    def test_at_least_one_on_sorted_lists(self):
        rng = np.random.default_rng(71)
        for _ in range(50):
            scores = sorted(rng.uniform(-50, 0, size=5), reverse=True)
            assert predict_score_ratio(_list(scores)) >= 1.0

    def test_empty_list_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            predict_score_ratio(_list([]))


class TestPredictQuality:
    def test_dispatch_matches_direct_calls(self, fruit_index):
        q = Query("q1", ("banana",))
        lst = retrieve_topk(q, 10, 10.0, fruit_index)
        assert predict_quality(
            PredictorSpec(PredictorKind.WIG), lst, q, 10.0, fruit_index
        ) == predict_wig(lst, q, WIG_DEFAULT_M, 10.0, fruit_index)
        assert predict_quality(
            PredictorSpec(PredictorKind.NQC), lst, q, 10.0, fruit_index
        ) == predict_nqc(lst, q, NQC_DEFAULT_M, fruit_index)
        assert predict_quality(
            PredictorSpec(PredictorKind.SCORE_RATIO), lst, q, 10.0, fruit_index
        ) == predict_score_ratio(lst)


class TestNWIG:
    def test_direct_evaluation_oracle(self):
        rng = np.random.default_rng(73)
        for _ in range(10):
            index = build_index(make_random_corpus(rng, 25), PLAIN)
            q = random_query(rng, index)
            mu = float(rng.uniform(10, 2000))
            lst = retrieve_topk(q, 1000, mu, index)
            if not lst.entries:
                continue
            w = index.vocabulary[int(rng.integers(0, len(index.vocabulary)))]
            m = min(int(rng.integers(1, 10)), len(lst.entries))
            log_pd = math.log(collection_prob(w, index))
            mean_log = sum(
                math.log(smoothed_prob(w, d, mu, index)) for d, _ in lst.entries[:m]
            ) / m
            expected = (mean_log - log_pd) / (-log_pd)
            assert abs(nwig_term(w, lst, m, mu, index) - expected) < 1e-9

    def test_oov_term_gets_zero_with_warning(self, fruit_index):
        lst = retrieve_topk(Query("q1", ("apple",)), 10, 10.0, fruit_index)
        with pytest.warns(UserWarning, match="out of vocabulary"):
            assert nwig_term("zzz", lst, 5, 10.0, fruit_index) == 0.0

    def test_certain_term_gets_zero_with_warning(self):
        index = build_index([Document("d1", "apple apple")], PLAIN)
        lst = retrieve_topk(Query("q1", ("apple",)), 10, 10.0, index)
        with pytest.warns(UserWarning, match="probability 1"):
            assert nwig_term("apple", lst, 5, 10.0, index) == 0.0

    def test_bounded_above_by_one(self):
        rng = np.random.default_rng(79)
        for _ in range(20):
            index = build_index(make_random_corpus(rng, 15), PLAIN)
            q = random_query(rng, index)
            lst = retrieve_topk(q, 1000, 500.0, index)
            if not lst.entries:
                continue
            w = index.vocabulary[int(rng.integers(0, len(index.vocabulary)))]
            assert nwig_term(w, lst, 5, 500.0, index) <= 1.0 + 1e-12

    def test_empty_list_rejected(self, fruit_index):
        with pytest.raises(ValueError, match="empty"):
            nwig_term("apple", _list([]), 5, 10.0, fruit_index)


class TestSROR:
    def _ab_index(self):
        docs = [
            Document("a1", "alpha alpha alpha alpha alpha"),
            Document("a2", "alpha alpha alpha alpha alpha"),
            Document("b1", "beta beta beta beta beta"),
            Document("b2", "beta beta beta beta beta"),
        ]
        return build_index(docs, PLAIN)

    def test_non_query_term_rejected(self, fruit_index):
        with pytest.raises(ValueError, match="not a query term"):
            sror_term("cherry", Query("q1", ("apple",)), 10, 10.0, fruit_index)

    def test_single_term_query_gets_one(self, fruit_index):
        assert sror_term("apple", Query("q1", ("apple",)), 10, 10.0, fruit_index) == 1.0

    def test_duplicate_removal_keeps_list_identical(self, fruit_index):
        # dropping one of two occurrences leaves the same match set, and at
        # this depth the same documents, so the overlap is total
        q = Query("q1", ("banana", "banana"))
        assert sror_term("banana", q, 10, 10.0, fruit_index) == 0.0

    def test_disjoint_lists_give_one(self):
        index = self._ab_index()
        q = Query("q1", ("alpha", "beta"))
        # k=2 keeps only the alpha docs for q (tie on score, id order), and
        # only the beta docs once alpha is removed
        assert sror_term("alpha", q, 2, 100.0, index) == 1.0

    def test_half_overlap(self):
        index = self._ab_index()
        q = Query("q1", ("alpha", "beta"))
        # depth 4: base holds all four docs, the reduced query only matches
        # the two beta docs -> overlap 2 of 4
        assert sror_term("alpha", q, 4, 100.0, index) == 0.5

    def test_empty_base_list_warns_zero(self, fruit_index):
        q = Query("q1", ("apple", "banana"))
        empty = RankedList("q1", (), 10)
        with pytest.warns(UserWarning, match="empty base"):
            assert sror_term("apple", q, 10, 10.0, fruit_index, base_list=empty) == 0.0
