"""Core data types and the shared tokenizer.

Every word-based threshold and every ROUGE score in this package uses the
same tokenizer, so the notion of "word" stays commensurable across stages.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

TokenList = list[str]

# A '#' only survives when it opens an issue reference like "#577".
_HASH_NOT_ISSUE = re.compile(r"#(?!\d)")
_TOKEN = re.compile(r"(?:[^\W_]|#)+")


def tokenize(text: str) -> TokenList:
    """Lowercase and split into tokens.

    Any maximal run of characters that are neither alphanumeric nor '#'
    separates tokens. A '#' is kept only when immediately followed by a
    digit (issue refs such as "#577" stay one token); otherwise it acts
    as a separator. Underscores are not alphanumeric and therefore split.
    """
    lowered = text.lower()
    cleaned = _HASH_NOT_ISSUE.sub(" ", lowered)
    return _TOKEN.findall(cleaned)


def word_count(text: str) -> int:
    return len(tokenize(text))


def join_commits(commits: list[str]) -> str:
    """Flatten an input sequence to one text, newline between messages."""
    return "\n".join(commits)


class DropReason(str, Enum):
    """Why a PR left the dataset; the first failing check wins."""

    TOO_FEW_COMMITS = "too_few_commits"
    TOO_MANY_COMMITS = "too_many_commits"
    NON_ASCII = "non_ascii"
    BOT_AUTHOR = "bot_author"
    EMPTY_DESCRIPTION = "empty_description"
    TRIVIAL_DESCRIPTION = "trivial_description"
    IRRELEVANT = "irrelevant"
    INADEQUATE = "inadequate"
    EMPTY_INPUT_AFTER_H1 = "empty_input_after_h1"


@dataclass(frozen=True)
class RawPullRequest:
    """One crawled PR, as it comes off the wire or out of a JSONL corpus."""

    repo: str
    number: int
    title: str
    body: str
    commits: tuple[str, ...]
    author_is_bot: bool
    url: str
    commits_truncated: bool = False

    def __post_init__(self):
        if not self.repo:
            raise ValueError("repo must be nonempty")
        if self.number < 1:
            raise ValueError("number must be >= 1")
        object.__setattr__(self, "commits", tuple(self.commits))

    @property
    def id(self) -> str:
        return f"{self.repo}#{self.number}"


@dataclass(frozen=True)
class PrSample:
    """A training sample: commit messages in, reference description out.

    Token lists are always derived from the texts via :func:`tokenize`;
    use :meth:`build` instead of the raw constructor.
    """

    id: str
    input_sequence: tuple[str, ...]
    reference_description: str
    input_tokens: tuple[str, ...] = field(repr=False)
    reference_tokens: tuple[str, ...] = field(repr=False)

    @classmethod
    def build(cls, id: str, input_sequence: list[str], reference_description: str) -> "PrSample":
        return cls(
            id=id,
            input_sequence=tuple(input_sequence),
            reference_description=reference_description,
            input_tokens=tuple(tokenize(join_commits(list(input_sequence)))),
            reference_tokens=tuple(tokenize(reference_description)),
        )

    def with_input_sequence(self, input_sequence: list[str]) -> "PrSample":
        """Same sample with a new input sequence; tokens recomputed."""
        return PrSample.build(self.id, input_sequence, self.reference_description)

    def to_dict(self) -> dict:
        # Token lists are derivable, so the wire form carries texts only.
        return {
            "id": self.id,
            "input_sequence": list(self.input_sequence),
            "reference_description": self.reference_description,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "PrSample":
        return cls.build(obj["id"], list(obj["input_sequence"]), obj["reference_description"])
