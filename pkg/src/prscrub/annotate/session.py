"""Build blinded rating sessions.

Stage 1 pairs each sampled PR with two generated descriptions under
anonymous arm labels A/B; the model behind each arm is decided by a
seeded coin flip and stored only in the session's sealed key. Stage 2
stratifies heuristic-flagged PRs for TP/FP auditing.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from ..evalstats import CRITERIA, SCORE_LABELS
from ..heuristics import RULE_TEXT, HeuristicFlags
from ..pipeline import HEURISTIC_NAMES, sample_n

# Canonical names for the two training regimes under comparison. They
# appear in pair files and in the sealed key, never in anything served
# to raters.
MODEL_ARMS = ("cleaned_model", "uncleaned_model")


class MissingArm(ValueError):
    pass


class InsufficientFlagged(ValueError):
    def __init__(self, heuristic: str, have: int, need: int):
        self.heuristic = heuristic
        super().__init__(f"{heuristic}: only {have} flagged samples, need {need}")


def build_stage1_session(pairs: list[dict], n: int, seed: int) -> dict:
    """Sample ``n`` scored pairs and assign blinded arms.

    Each pair must carry ``generated`` texts for both models. The result
    is fully determined by the input order and the seed.
    """
    for pair in pairs:
        missing = [m for m in MODEL_ARMS if m not in pair.get("generated", {})]
        if missing:
            raise MissingArm(f"pair {pair.get('id')!r} lacks output for {missing}")

    ids = [pair["id"] for pair in pairs]
    by_id = {pair["id"]: pair for pair in pairs}
    selected = sample_n(ids, n, seed)

    flip = random.Random(seed)
    items = []
    sealed_key = {}
    for sample_id in selected:
        pair = by_id[sample_id]
        first_is_cleaned = flip.random() < 0.5
        arm_to_model = {
            "A": MODEL_ARMS[0] if first_is_cleaned else MODEL_ARMS[1],
            "B": MODEL_ARMS[1] if first_is_cleaned else MODEL_ARMS[0],
        }
        items.append(
            {
                "sample_id": sample_id,
                "input_sequence": list(pair["input_sequence"]),
                "ground_truth": pair["reference"],
                "arm_a": pair["generated"][arm_to_model["A"]],
                "arm_b": pair["generated"][arm_to_model["B"]],
            }
        )
        sealed_key[sample_id] = arm_to_model

    return {
        "stage": 1,
        "seed": seed,
        "criteria": list(CRITERIA),
        "scale": {str(s): label for s, label in SCORE_LABELS.items()},
        "items": items,
        "sealed_key": sealed_key,
    }


def build_stage2_session(
    flags_rows: list[dict],
    samples_by_id: dict[str, dict],
    per_heuristic_n: int,
    seed: int,
) -> dict:
    """Stratified sample of flagged PRs, ``per_heuristic_n`` for each
    heuristic, with the original input sequence and ground truth attached."""
    flagged: dict[str, list[str]] = {name: [] for name in HEURISTIC_NAMES}
    for row in flags_rows:
        fired = HeuristicFlags.from_dict(row).fired()
        for name in fired:
            flagged[name].append(row["id"])

    items = []
    for name in HEURISTIC_NAMES:
        ids = flagged[name]
        if len(ids) < per_heuristic_n:
            raise InsufficientFlagged(name, len(ids), per_heuristic_n)
        for sample_id in sample_n(ids, per_heuristic_n, seed):
            try:
                sample = samples_by_id[sample_id]
            except KeyError:
                raise ValueError(f"flags reference unknown sample {sample_id!r}") from None
            items.append(
                {
                    "sample_id": sample_id,
                    "heuristic": name,
                    "input_sequence": list(sample["input_sequence"]),
                    "ground_truth": sample["reference_description"],
                    "rule_text": RULE_TEXT[name],
                }
            )

    return {
        "stage": 2,
        "seed": seed,
        "per_heuristic_n": per_heuristic_n,
        "heuristics": list(HEURISTIC_NAMES),
        "verdicts": ["TP", "FP"],
        "items": items,
    }


def dump_session(session: dict, path: str | Path) -> None:
    """Canonical session serialization; identical sessions are
    byte-identical files."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(session, fh, ensure_ascii=False, sort_keys=True, indent=2)
        fh.write("\n")


def load_session(path: str | Path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
