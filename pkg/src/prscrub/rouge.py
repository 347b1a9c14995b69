"""ROUGE-1/2/L precision, recall, and F1 for generated-vs-reference text.

N-gram overlap uses clipped counts (per distinct n-gram, the smaller of
the two multiplicities), which is what the standard implementations
compute and keeps recall bounded by 1.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .model import TokenList, tokenize

AGGREGATION_MODES = ("example_mean", "corpus_sum")


class EmptyCorpus(ValueError):
    pass


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_pr(cls, precision: float, recall: float) -> "RougeScore":
        denom = precision + recall
        f1 = 2 * precision * recall / denom if denom > 0 else 0.0
        return cls(precision=precision, recall=recall, f1=f1)

    @classmethod
    def from_counts(cls, overlap: int, gen_total: int, ref_total: int) -> "RougeScore":
        precision = overlap / gen_total if gen_total else 0.0
        recall = overlap / ref_total if ref_total else 0.0
        return cls.from_pr(precision, recall)


def ngram_counts(tokens: TokenList, n: int) -> Counter:
    """Contiguous n-grams with multiplicity; empty when the text is shorter
    than n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(gen: TokenList, ref: TokenList, n: int) -> RougeScore:
    gen_counts = ngram_counts(gen, n)
    ref_counts = ngram_counts(ref, n)
    overlap = sum(min(c, ref_counts[g]) for g, c in gen_counts.items())
    return RougeScore.from_counts(overlap, sum(gen_counts.values()), sum(ref_counts.values()))


def lcs_length(a: TokenList, b: TokenList) -> int:
    """Longest common subsequence length, iterative DP over two rows."""
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l(gen: TokenList, ref: TokenList) -> RougeScore:
    length = lcs_length(gen, ref)
    precision = length / len(gen) if gen else 0.0
    recall = length / len(ref) if ref else 0.0
    return RougeScore.from_pr(precision, recall)


@dataclass(frozen=True)
class RougeReport:
    rouge1: RougeScore
    rouge2: RougeScore
    rougeL: RougeScore
    aggregation_mode: str
    pair_count: int

    def to_dict(self) -> dict:
        """Table-style layout: three metrics by P/R/F1, percent scale,
        two decimals."""
        def fmt(score: RougeScore) -> dict:
            return {
                "precision": round(100 * score.precision, 2),
                "recall": round(100 * score.recall, 2),
                "f1": round(100 * score.f1, 2),
            }

        return {
            "aggregation_mode": self.aggregation_mode,
            "pair_count": self.pair_count,
            "metrics": {
                "rouge1": fmt(self.rouge1),
                "rouge2": fmt(self.rouge2),
                "rougeL": fmt(self.rougeL),
            },
        }


def _mean_scores(scores: list[RougeScore]) -> RougeScore:
    k = len(scores)
    return RougeScore(
        precision=sum(s.precision for s in scores) / k,
        recall=sum(s.recall for s in scores) / k,
        f1=sum(s.f1 for s in scores) / k,
    )


def score_corpus(pairs: Sequence[tuple[str, str]], mode: str = "example_mean") -> RougeReport:
    """Aggregate ROUGE over (generated, reference) text pairs.

    example_mean averages per-pair components; corpus_sum pools overlap
    and denominator counts across all pairs before dividing.
    """
    if not pairs:
        raise EmptyCorpus("no pairs to score")
    if mode not in AGGREGATION_MODES:
        raise ValueError(f"mode must be one of {AGGREGATION_MODES}")

    token_pairs = [(tokenize(gen), tokenize(ref)) for gen, ref in pairs]

    if mode == "example_mean":
        per_metric = {
            "rouge1": [rouge_n(g, r, 1) for g, r in token_pairs],
            "rouge2": [rouge_n(g, r, 2) for g, r in token_pairs],
            "rougeL": [rouge_l(g, r) for g, r in token_pairs],
        }
        return RougeReport(
            rouge1=_mean_scores(per_metric["rouge1"]),
            rouge2=_mean_scores(per_metric["rouge2"]),
            rougeL=_mean_scores(per_metric["rougeL"]),
            aggregation_mode=mode,
            pair_count=len(pairs),
        )

    pooled = {}
    for name, n in (("rouge1", 1), ("rouge2", 2)):
        overlap = gen_total = ref_total = 0
        for g, r in token_pairs:
            gen_counts = ngram_counts(g, n)
            ref_counts = ngram_counts(r, n)
            overlap += sum(min(c, ref_counts[gram]) for gram, c in gen_counts.items())
            gen_total += sum(gen_counts.values())
            ref_total += sum(ref_counts.values())
        pooled[name] = RougeScore.from_counts(overlap, gen_total, ref_total)

    lcs_total = sum(lcs_length(g, r) for g, r in token_pairs)
    gen_len = sum(len(g) for g, _ in token_pairs)
    ref_len = sum(len(r) for _, r in token_pairs)
    pooled["rougeL"] = RougeScore.from_counts(lcs_total, gen_len, ref_len)

    return RougeReport(
        rouge1=pooled["rouge1"],
        rouge2=pooled["rouge2"],
        rougeL=pooled["rougeL"],
        aggregation_mode=mode,
        pair_count=len(pairs),
    )
