"""Statistics for the manual-evaluation protocol: Cochran sample sizing,
Cohen's kappa, heuristic TP/FP audits, and rating-score distributions."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from statistics import NormalDist
from typing import Iterable, Mapping, Sequence

CRITERIA = ("relevance", "descriptiveness", "clarity")
SCORE_SCALE = (1, 2, 3, 4)
SCORE_LABELS = {1: "very poor", 2: "poor", 3: "good", 4: "very good"}


class InvalidParams(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


class EmptyInput(ValueError):
    pass


class UnknownCriterion(ValueError):
    pass


def normal_quantile(p: float) -> float:
    """Inverse standard-normal CDF (rational approximation, error well
    under 1e-8)."""
    if not 0 < p < 1:
        raise InvalidParams("quantile argument must be in (0, 1)")
    return NormalDist().inv_cdf(p)


@dataclass(frozen=True)
class CochranParams:
    confidence: float
    margin: float
    proportion: float = 0.5

    def __post_init__(self):
        if not 0 < self.confidence < 1:
            raise InvalidParams("confidence must be in (0, 1)")
        if not 0 < self.margin < 1:
            raise InvalidParams("margin must be in (0, 1)")
        if not 0 <= self.proportion <= 1:
            raise InvalidParams("proportion must be in [0, 1]")


def cochran_sample_size(params: CochranParams) -> int:
    """n0 = z^2 p (1-p) / e^2 rounded up, two-sided z."""
    z = normal_quantile(1 - (1 - params.confidence) / 2)
    p = params.proportion
    n0 = z * z * p * (1 - p) / (params.margin**2)
    return math.ceil(n0)


@dataclass(frozen=True)
class KappaResult:
    observed_agreement: float
    expected_agreement: float
    kappa: float
    n_items: int

    def to_dict(self) -> dict:
        return {
            "observed_agreement": self.observed_agreement,
            "expected_agreement": self.expected_agreement,
            "kappa": self.kappa,
            "n_items": self.n_items,
        }


def cohen_kappa(labels_a: Sequence, labels_b: Sequence) -> KappaResult:
    """Chance-corrected agreement between two raters over nominal labels."""
    if len(labels_a) != len(labels_b):
        raise LengthMismatch(f"{len(labels_a)} vs {len(labels_b)} labels")
    n = len(labels_a)
    if n == 0:
        raise EmptyInput("no labels")

    agreements = sum(1 for a, b in zip(labels_a, labels_b) if a == b)
    p_o = agreements / n

    counts_a = Counter(labels_a)
    counts_b = Counter(labels_b)
    p_e = sum(counts_a[c] * counts_b[c] for c in counts_a) / (n * n)

    if p_e == 1.0:
        kappa = 1.0  # both raters constant on the same label
    else:
        kappa = (p_o - p_e) / (1 - p_e)
    return KappaResult(observed_agreement=p_o, expected_agreement=p_e, kappa=kappa, n_items=n)


@dataclass(frozen=True)
class HeuristicAudit:
    heuristic: str
    tp: int
    fp: int

    @property
    def accuracy(self) -> float:
        return self.tp / (self.tp + self.fp)

    def to_dict(self) -> dict:
        return {
            "heuristic": self.heuristic,
            "tp": self.tp,
            "fp": self.fp,
            "accuracy_percent": round(100 * self.accuracy, 2),
        }


def audit_heuristic(labels: Iterable[tuple[str, str]], heuristic: str = "") -> HeuristicAudit:
    """Count TP/FP verdicts for one heuristic's flagged samples."""
    tp = fp = 0
    for _, verdict in labels:
        if verdict == "TP":
            tp += 1
        elif verdict == "FP":
            fp += 1
        else:
            raise ValueError(f"verdict must be TP or FP, got {verdict!r}")
    if tp + fp == 0:
        raise EmptyInput("no labels")
    return HeuristicAudit(heuristic=heuristic, tp=tp, fp=fp)


def score_distribution(
    ratings: Iterable[Mapping], criteria: Sequence[str] = CRITERIA
) -> dict:
    """Histogram of 1-4 scores per criterion and per arm.

    ``ratings`` are mappings with an "arm" key plus one integer score per
    criterion; arms are whatever labels the records carry (A/B while
    blinded, model names after unblinding).
    """
    for criterion in criteria:
        if criterion not in CRITERIA:
            raise UnknownCriterion(criterion)

    dist: dict = {criterion: {} for criterion in criteria}
    for record in ratings:
        arm = record["arm"]
        for criterion in criteria:
            score = int(record[criterion])
            if score not in SCORE_SCALE:
                raise ValueError(f"score out of range: {score}")
            bins = dist[criterion].setdefault(arm, {s: 0 for s in SCORE_SCALE})
            bins[score] += 1

    out: dict = {}
    for criterion in criteria:
        out[criterion] = {}
        for arm, bins in sorted(dist[criterion].items()):
            total = sum(bins.values())
            out[criterion][arm] = {
                "counts": {str(s): bins[s] for s in SCORE_SCALE},
                "percent": {
                    str(s): (100 * bins[s] / total if total else 0.0) for s in SCORE_SCALE
                },
                "total": total,
            }
    return out
