"""The four noise-cleaning heuristics.

H1 deletes trivial commit messages from the input sequence, H2 removes
samples with trivial descriptions, H3 removes samples whose description
vocabulary is mostly absent from the input, and H4 removes samples whose
input is at most half as long as the description. H2, H3, and H4 are
always evaluated and recorded independently so that overlap statistics
stay well defined when several heuristics fire on one sample.
"""

from __future__ import annotations

import re
import sys
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .model import DropReason, PrSample, TokenList

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class EmptyReference(ValueError):
    pass


@dataclass(frozen=True)
class Thresholds:
    missing_fraction_cutoff: float = 0.80
    length_ratio_cutoff: float = 0.5
    # "missing words" can be counted over unique tokens or occurrences;
    # unique-token coverage is the default reading.
    missing_token_mode: str = "set"

    def __post_init__(self):
        if not 0 < self.missing_fraction_cutoff <= 1:
            raise ValueError("missing_fraction_cutoff must be in (0, 1]")
        if not 0 < self.length_ratio_cutoff <= 1:
            raise ValueError("length_ratio_cutoff must be in (0, 1]")
        if self.missing_token_mode not in ("set", "multiset"):
            raise ValueError("missing_token_mode must be 'set' or 'multiset'")


class PatternSet:
    """Anchored trivial-text patterns.

    Each entry is (starts_with, continuation-regex). A message matches an
    entry when its trimmed form starts with the literal word followed by
    the continuation. With ``match_whole`` the entry must consume the whole
    text, so bare-word entries like ("update", "changelog") hit exactly
    the boilerplate message and nothing longer; entries that should allow
    trailing text carry an explicit wildcard in their continuation.
    """

    def __init__(self, name: str, entries: Sequence[tuple[str, str | None]], match_whole: bool):
        self.name = name
        self.entries = [(s, c) for s, c in entries]
        self.match_whole = match_whole
        flags = re.IGNORECASE | re.DOTALL
        self._compiled = []
        for starts_with, continuation in self.entries:
            pattern = re.escape(starts_with) + r"\b"
            if continuation:
                pattern += r"\s*(?:" + continuation + r")"
            if match_whole:
                pattern += r"\Z"
            self._compiled.append(re.compile(pattern, flags))

    def matches(self, text: str) -> bool:
        trimmed = text.strip()
        return any(rx.match(trimmed) for rx in self._compiled)


# Trivial commit messages. Bare-word rows are whole-message matches; the
# merge rows describe variable text and wildcard their tails explicitly.
DEFAULT_COMMIT_PATTERNS = PatternSet(
    "trivial_commit",
    [
        ("merge", r".*?branch\b.*?\binto\b.*"),
        ("merge", r"branch\s+'.*"),
        ("merge", r"pull\s+request\s+#\d+.*"),
        ("update", r"changelog|gitignore|readme"),
        ("modify", r"makefile"),
        ("add", r"gitignore"),
        ("closes", r"#\d+"),
    ],
    match_whole=True,
)

# Trivial descriptions match by prefix: a description opening with one of
# these is boilerplate even when more text follows.
DEFAULT_DESCRIPTION_PATTERNS = PatternSet(
    "trivial_description",
    [
        ("rolling", r"(?:up|down)\b.*"),
        ("roll", r"(?:engine|plugins)\b.*"),
        ("merge", r"to\b.*"),
        ("revert", r".*"),
        ("update", r"changelog|gitignore|readme|current\s+master"),
        ("fix", r"issue\s+#\d+"),
    ],
    match_whole=False,
)

# Shown to raters when auditing flagged samples.
RULE_TEXT = {
    "H1": "One or more commit messages matched a trivial-message pattern "
          "(merge commits, changelog/readme bumps, bare issue closers) and "
          "were removed from the input sequence.",
    "H2": "The description starts with a trivial-description pattern "
          "(revert/roll/merge-to boilerplate or a bare issue reference).",
    "H3": "More than 80% of the description's distinct words never appear "
          "in the commit messages, so the description looks out of context.",
    "H4": "The commit messages contain half or fewer words than the "
          "description, too little material to summarize from.",
}


def load_patterns(path: str | Path) -> tuple[PatternSet, PatternSet]:
    """Read commit and description pattern tables from a TOML file."""
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    sets = {}
    for key in ("trivial_commit", "trivial_description"):
        if key not in data:
            raise ValueError(f"patterns file is missing [{key}]")
        section = data[key]
        entries = [(p[0], p[1] if len(p) > 1 and p[1] else None) for p in section["patterns"]]
        sets[key] = PatternSet(key, entries, match_whole=bool(section["match_whole"]))
    return sets["trivial_commit"], sets["trivial_description"]


@dataclass(frozen=True)
class HeuristicFlags:
    h1_removed: int = 0
    h1_emptied: bool = False
    h2: bool = False
    h3: bool = False
    h4: bool = False

    @property
    def h1(self) -> bool:
        return self.h1_removed > 0 or self.h1_emptied

    @property
    def removed(self) -> bool:
        return self.h1_emptied or self.h2 or self.h3 or self.h4

    def drop_reason(self) -> DropReason | None:
        """Single removal attribution, first firing rule wins; None if kept."""
        if self.h1_emptied:
            return DropReason.EMPTY_INPUT_AFTER_H1
        if self.h2:
            return DropReason.TRIVIAL_DESCRIPTION
        if self.h3:
            return DropReason.IRRELEVANT
        if self.h4:
            return DropReason.INADEQUATE
        return None

    def fired(self) -> set[str]:
        """Names of the heuristics that affected this sample."""
        hits = set()
        if self.h1:
            hits.add("H1")
        if self.h2:
            hits.add("H2")
        if self.h3:
            hits.add("H3")
        if self.h4:
            hits.add("H4")
        return hits

    def to_dict(self) -> dict:
        return {
            "h1_removed": self.h1_removed,
            "h1_emptied": self.h1_emptied,
            "h2": self.h2,
            "h3": self.h3,
            "h4": self.h4,
            "removed": self.removed,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "HeuristicFlags":
        return cls(
            h1_removed=int(obj["h1_removed"]),
            h1_emptied=bool(obj["h1_emptied"]),
            h2=bool(obj["h2"]),
            h3=bool(obj["h3"]),
            h4=bool(obj["h4"]),
        )


def is_trivial_commit(message: str, patterns: PatternSet = DEFAULT_COMMIT_PATTERNS) -> bool:
    return patterns.matches(message)


def is_trivial_description(
    description: str, patterns: PatternSet = DEFAULT_DESCRIPTION_PATTERNS
) -> bool:
    return patterns.matches(description)


def missing_fraction(reference: TokenList, input: TokenList, mode: str = "set") -> float:
    """Fraction of reference words absent from the input sequence."""
    if not reference:
        raise EmptyReference("reference has no tokens")
    if mode == "set":
        ref_vocab = set(reference)
        missing = ref_vocab - set(input)
        return len(missing) / len(ref_vocab)
    if mode == "multiset":
        ref_counts = Counter(reference)
        in_counts = Counter(input)
        missing = sum(max(0, c - in_counts[t]) for t, c in ref_counts.items())
        return missing / len(reference)
    raise ValueError(f"unknown mode {mode!r}")


def is_inadequate(input: TokenList, reference: TokenList, cutoff: float = 0.5) -> bool:
    """True when the input is at most ``cutoff`` times the reference length."""
    return len(input) <= cutoff * len(reference)


def apply_heuristics(
    sample: PrSample,
    thresholds: Thresholds = Thresholds(),
    commit_patterns: PatternSet = DEFAULT_COMMIT_PATTERNS,
    description_patterns: PatternSet = DEFAULT_DESCRIPTION_PATTERNS,
) -> tuple[PrSample | None, HeuristicFlags]:
    """Run H1 then evaluate H2/H3/H4 on the post-H1 sample.

    Returns the cleaned sample (input tokens recomputed after H1) when no
    heuristic removes it, else None, always together with the flags.
    """
    surviving = [m for m in sample.input_sequence if not is_trivial_commit(m, commit_patterns)]
    h1_removed = len(sample.input_sequence) - len(surviving)
    h1_emptied = not surviving
    post = sample.with_input_sequence(surviving) if h1_removed else sample

    h2 = is_trivial_description(post.reference_description, description_patterns)
    if post.reference_tokens:
        h3 = (
            missing_fraction(
                list(post.reference_tokens),
                list(post.input_tokens),
                thresholds.missing_token_mode,
            )
            > thresholds.missing_fraction_cutoff
        )
        h4 = is_inadequate(
            list(post.input_tokens), list(post.reference_tokens), thresholds.length_ratio_cutoff
        )
    else:
        # A description that tokenizes to nothing cannot be scored for
        # coverage or length; only H1/H2 can still fire.
        h3 = False
        h4 = False

    flags = HeuristicFlags(
        h1_removed=h1_removed, h1_emptied=h1_emptied, h2=h2, h3=h3, h4=h4
    )
    return (None if flags.removed else post), flags
