import random
from collections import Counter
from functools import lru_cache

import pytest

from prscrub.rouge import (
    EmptyCorpus,
    RougeScore,
    lcs_length,
    ngram_counts,
    rouge_l,
    rouge_n,
    score_corpus,
)

REF = ["fix", "the", "shape", "of", "prelu", "weight"]
GEN = ["fix", "prelu", "shape"]


# --- independent oracles ---------------------------------------------------

def clipped_overlap_oracle(gen, ref, n):
    """Match each generated n-gram occurrence against a pool of reference
    occurrences, consuming one per match."""
    pool = [tuple(ref[i : i + n]) for i in range(len(ref) - n + 1)]
    matched = 0
    for i in range(len(gen) - n + 1):
        gram = tuple(gen[i : i + n])
        if gram in pool:
            pool.remove(gram)
            matched += 1
    return matched


def rouge_n_oracle(gen, ref, n):
    overlap = clipped_overlap_oracle(gen, ref, n)
    gen_total = max(0, len(gen) - n + 1)
    ref_total = max(0, len(ref) - n + 1)
    p = overlap / gen_total if gen_total else 0.0
    r = overlap / ref_total if ref_total else 0.0
    f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return p, r, f1


def lcs_oracle(a, b):
    a, b = tuple(a), tuple(b)

    @lru_cache(maxsize=None)
    def rec(i, j):
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + rec(i + 1, j + 1)
        return max(rec(i + 1, j), rec(i, j + 1))

    return rec(0, 0)


def random_tokens(rng, max_len=12, alphabet=6):
    return [chr(ord("a") + rng.randrange(alphabet)) for _ in range(rng.randint(0, max_len))]


# --- ngram_counts ----------------------------------------------------------

def test_ngram_counts_unigrams_with_multiplicity():
    assert ngram_counts(["a", "b", "a"], 1) == Counter({("a",): 2, ("b",): 1})


def test_ngram_counts_bigrams_of_reference():
    counts = ngram_counts(REF, 2)
    assert len(counts) == 5
    assert all(v == 1 for v in counts.values())


def test_ngram_counts_n_longer_than_text():
    assert ngram_counts(["a", "b"], 3) == Counter()
    assert ngram_counts([], 1) == Counter()


# --- rouge_n ---------------------------------------------------------------

def test_rouge_n_identity():
    score = rouge_n(REF, REF, 1)
    assert (score.precision, score.recall, score.f1) == (1.0, 1.0, 1.0)


def test_rouge_1_golden_pair():
    score = rouge_n(GEN, REF, 1)
    assert score.recall == 0.5
    assert score.precision == 1.0
    assert score.f1 == pytest.approx(2 / 3, abs=1e-12)


def test_rouge_2_golden_pair_no_shared_bigrams():
    score = rouge_n(GEN, REF, 2)
    assert (score.precision, score.recall, score.f1) == (0.0, 0.0, 0.0)


def test_rouge_n_clipping_repeated_grams():
    # gen has "a" three times, ref twice: clipped overlap is 2.
    score = rouge_n(["a", "a", "a"], ["a", "b", "a"], 1)
    assert score.precision == pytest.approx(2 / 3)
    assert score.recall == pytest.approx(2 / 3)


def test_rouge_n_empty_sides():
    assert rouge_n([], REF, 1) == RougeScore(0.0, 0.0, 0.0)
    assert rouge_n(GEN, [], 1).recall == 0.0
    assert rouge_n([], [], 2) == RougeScore(0.0, 0.0, 0.0)


def test_rouge_n_matches_oracle_on_random_pairs():
    rng = random.Random(555)
    for _ in range(2000):
        gen, ref = random_tokens(rng), random_tokens(rng)
        for n in (1, 2):
            got = rouge_n(gen, ref, n)
            p, r, f1 = rouge_n_oracle(gen, ref, n)
            assert abs(got.precision - p) <= 1e-12
            assert abs(got.recall - r) <= 1e-12
            assert abs(got.f1 - f1) <= 1e-12


# --- lcs / rouge_l ---------------------------------------------------------

def test_lcs_identity_and_disjoint():
    assert lcs_length(["x"] * 4, ["x"] * 4) == 4
    assert lcs_length(["a", "b"], ["c", "d"]) == 0
    assert lcs_length([], ["a"]) == 0


def test_lcs_golden_pair():
    assert lcs_length(GEN, REF) == 2


def test_lcs_symmetric_and_bounded():
    rng = random.Random(777)
    for _ in range(500):
        a, b = random_tokens(rng), random_tokens(rng)
        length = lcs_length(a, b)
        assert length == lcs_length(b, a)
        assert length <= min(len(a), len(b))
        assert length == lcs_oracle(a, b)


def test_rouge_l_golden_pair():
    score = rouge_l(GEN, REF)
    assert score.recall == pytest.approx(2 / 6, abs=1e-12)
    assert score.precision == pytest.approx(2 / 3, abs=1e-12)
    assert score.f1 == pytest.approx(4 / 9, abs=1e-12)


def test_rouge_l_identity_and_empty():
    assert rouge_l(REF, REF) == RougeScore(1.0, 1.0, 1.0)
    assert rouge_l([], REF) == RougeScore(0.0, 0.0, 0.0)


def test_rouge_l_precision_recall_swap():
    rng = random.Random(888)
    for _ in range(300):
        a, b = random_tokens(rng), random_tokens(rng)
        ab, ba = rouge_l(a, b), rouge_l(b, a)
        assert ab.precision == ba.recall
        assert ab.recall == ba.precision
        assert ab.f1 == pytest.approx(ba.f1, abs=1e-15)


def test_component_bounds_and_f1_between_p_and_r():
    rng = random.Random(999)
    for _ in range(500):
        gen, ref = random_tokens(rng), random_tokens(rng)
        for score in (rouge_n(gen, ref, 1), rouge_n(gen, ref, 2), rouge_l(gen, ref)):
            for v in (score.precision, score.recall, score.f1):
                assert 0.0 <= v <= 1.0
            if score.precision > 0 and score.recall > 0:
                assert min(score.precision, score.recall) <= score.f1 + 1e-15
                assert score.f1 <= max(score.precision, score.recall) + 1e-15


def test_rouge_n_self_f1_is_one_when_long_enough():
    rng = random.Random(321)
    for _ in range(100):
        x = random_tokens(rng)
        for n in (1, 2):
            if len(x) >= n:
                assert rouge_n(x, x, n).f1 == 1.0


# --- score_corpus ----------------------------------------------------------

def test_single_pair_modes_agree():
    pairs = [("fix prelu shape", "fix the shape of prelu weight")]
    mean_report = score_corpus(pairs, "example_mean")
    sum_report = score_corpus(pairs, "corpus_sum")
    for attr in ("rouge1", "rouge2", "rougeL"):
        a, b = getattr(mean_report, attr), getattr(sum_report, attr)
        assert a.precision == pytest.approx(b.precision, abs=1e-15)
        assert a.recall == pytest.approx(b.recall, abs=1e-15)
        assert a.f1 == pytest.approx(b.f1, abs=1e-15)


def test_example_mean_averages_f1():
    pairs = [("a b", "a b"), ("q", "z")]  # per-pair F1: 1.0 and 0.0
    report = score_corpus(pairs, "example_mean")
    assert report.rouge1.f1 == 0.5
    assert report.pair_count == 2


def test_corpus_sum_matches_pooled_oracle():
    rng = random.Random(31337)
    for _ in range(50):
        pairs = []
        token_pairs = []
        for _ in range(rng.randint(1, 8)):
            gen, ref = random_tokens(rng), random_tokens(rng)
            pairs.append((" ".join(gen), " ".join(ref)))
            token_pairs.append((gen, ref))
        report = score_corpus(pairs, "corpus_sum")
        for name, n in (("rouge1", 1), ("rouge2", 2)):
            overlap = sum(clipped_overlap_oracle(g, r, n) for g, r in token_pairs)
            gen_total = sum(max(0, len(g) - n + 1) for g, r in token_pairs)
            ref_total = sum(max(0, len(r) - n + 1) for g, r in token_pairs)
            p = overlap / gen_total if gen_total else 0.0
            r_ = overlap / ref_total if ref_total else 0.0
            f1 = 2 * p * r_ / (p + r_) if p + r_ > 0 else 0.0
            got = getattr(report, name)
            assert abs(got.precision - p) <= 1e-12
            assert abs(got.recall - r_) <= 1e-12
            assert abs(got.f1 - f1) <= 1e-12
        lcs_total = sum(lcs_oracle(g, r) for g, r in token_pairs)
        gl = sum(len(g) for g, _ in token_pairs)
        rl = sum(len(r) for _, r in token_pairs)
        p = lcs_total / gl if gl else 0.0
        r_ = lcs_total / rl if rl else 0.0
        assert abs(report.rougeL.precision - p) <= 1e-12
        assert abs(report.rougeL.recall - r_) <= 1e-12


def test_empty_corpus_rejected():
    with pytest.raises(EmptyCorpus):
        score_corpus([], "example_mean")
    with pytest.raises(ValueError):
        score_corpus([("a", "a")], "median")


def test_report_dict_uses_percent_scale_two_decimals():
    report = score_corpus([("fix prelu shape", "fix the shape of prelu weight")])
    obj = report.to_dict()
    assert set(obj["metrics"].keys()) == {"rouge1", "rouge2", "rougeL"}
    r1 = obj["metrics"]["rouge1"]
    assert r1["precision"] == 100.0
    assert r1["recall"] == 50.0
    assert r1["f1"] == 66.67
    assert obj["metrics"]["rougeL"]["f1"] == 44.44
    assert obj["aggregation_mode"] == "example_mean"
