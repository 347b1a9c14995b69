"""Unblind stored judgments and shape them for analysis.

Stage 1 joins ratings with the sealed arm key to yield per-model score
tables. Stage 2 turns TP/FP labels into per-heuristic audits over the
verdicts the raters agree on; disagreements go to a reconciliation
worksheet for a third-rater session instead of being auto-resolved.
"""

from __future__ import annotations

from collections import defaultdict

from ..evalstats import CRITERIA, audit_heuristic, cohen_kappa, score_distribution
from .store import STAGE1_KIND, STAGE2_KIND, JudgmentStore


class MissingKey(ValueError):
    pass


def _stage1_export(session: dict, store: JudgmentStore) -> dict:
    sealed_key = session.get("sealed_key")
    if not sealed_key:
        raise MissingKey("session has no sealed arm key; cannot unblind")

    ratings = []
    for record in sorted(
        store.by_kind(STAGE1_KIND),
        key=lambda r: (r["sample_id"], r["rater_id"], r["arm"]),
    ):
        model = sealed_key[record["sample_id"]][record["arm"]]
        ratings.append(
            {
                "sample_id": record["sample_id"],
                "rater_id": record["rater_id"],
                "model": model,
                **{c: record[c] for c in CRITERIA},
            }
        )

    dist = score_distribution([{**r, "arm": r["model"]} for r in ratings])

    means: dict = {}
    totals: dict = defaultdict(lambda: defaultdict(list))
    for r in ratings:
        for c in CRITERIA:
            totals[r["model"]][c].append(r[c])
    for model, per_criterion in sorted(totals.items()):
        means[model] = {
            c: sum(scores) / len(scores) for c, scores in per_criterion.items()
        }

    return {
        "stage": 1,
        "ratings": ratings,
        "score_distribution": dist,
        "per_model_means": means,
    }


def _stage2_export(session: dict, store: JudgmentStore) -> dict:
    item_info = {
        (item["sample_id"], item["heuristic"]): item for item in session["items"]
    }
    # verdicts[(sample, heuristic)][rater] = TP|FP
    verdicts: dict = defaultdict(dict)
    for record in store.by_kind(STAGE2_KIND):
        verdicts[(record["sample_id"], record["heuristic"])][record["rater_id"]] = record[
            "verdict"
        ]

    final_labels: dict[str, list] = defaultdict(list)
    reconciliation = []
    for item in session["items"]:
        key = (item["sample_id"], item["heuristic"])
        by_rater = verdicts.get(key)
        if not by_rater:
            continue
        distinct = set(by_rater.values())
        if len(distinct) == 1:
            final_labels[item["heuristic"]].append((item["sample_id"], distinct.pop()))
        else:
            reconciliation.append(
                {
                    "sample_id": item["sample_id"],
                    "heuristic": item["heuristic"],
                    "verdicts": dict(sorted(by_rater.items())),
                    "input_sequence": item["input_sequence"],
                    "ground_truth": item["ground_truth"],
                }
            )

    audits = {}
    for heuristic in session["heuristics"]:
        labels = final_labels.get(heuristic)
        if labels:
            audits[heuristic] = audit_heuristic(labels, heuristic).to_dict()

    # Kappa per heuristic when exactly two raters labeled a shared set.
    kappas = {}
    label_files = {}
    for heuristic in session["heuristics"]:
        keys = [k for k in verdicts if k[1] == heuristic]
        raters = sorted({r for k in keys for r in verdicts[k]})
        if len(raters) != 2:
            continue
        a_name, b_name = raters
        shared = [
            k
            for k in sorted(keys)
            if a_name in verdicts[k] and b_name in verdicts[k]
        ]
        if not shared:
            continue
        a_labels = [verdicts[k][a_name] for k in shared]
        b_labels = [verdicts[k][b_name] for k in shared]
        kappas[heuristic] = {
            "rater_a": a_name,
            "rater_b": b_name,
            **cohen_kappa(a_labels, b_labels).to_dict(),
        }
        label_files[heuristic] = {
            a_name: [{"id": k[0], "label": verdicts[k][a_name]} for k in shared],
            b_name: [{"id": k[0], "label": verdicts[k][b_name]} for k in shared],
        }

    return {
        "stage": 2,
        "labels": {
            h: [{"sample_id": s, "verdict": v} for s, v in rows]
            for h, rows in sorted(final_labels.items())
        },
        "audits": audits,
        "kappa": kappas,
        "kappa_labels": label_files,
        "reconciliation": reconciliation,
    }


def unblind_and_export(session: dict, store: JudgmentStore) -> dict:
    if session["stage"] == 1:
        return _stage1_export(session, store)
    return _stage2_export(session, store)
