"""Sequential preprocessing filters producing training samples plus an
accounting record whose drop counters always sum back to the input size."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .model import DropReason, PrSample, RawPullRequest

CHECKLIST_PREFIXES = ("- [ ]", "- [x]", "- [X]", "* [ ]", "* [x]", "* [X]")

MIN_COMMITS = 2
MAX_COMMITS = 20


@dataclass
class PreprocessStats:
    initial: int = 0
    too_few_commits: int = 0
    too_many_commits: int = 0
    non_ascii: int = 0
    bot_written: int = 0
    empty_description: int = 0
    left: int = 0

    @property
    def identity_holds(self) -> bool:
        dropped = (
            self.too_few_commits
            + self.too_many_commits
            + self.non_ascii
            + self.bot_written
            + self.empty_description
        )
        return self.initial - dropped == self.left

    def to_dict(self) -> dict:
        return {
            "initial": self.initial,
            "too_few_commits": self.too_few_commits,
            "too_many_commits": self.too_many_commits,
            "non_ascii": self.non_ascii,
            "bot_written": self.bot_written,
            "empty_description": self.empty_description,
            "left": self.left,
        }


def strip_checklists(body: str) -> str:
    """Drop checklist lines ("- [ ] ...", "* [x] ...") and keep the rest."""
    kept = [
        line
        for line in body.split("\n")
        if not line.strip().startswith(CHECKLIST_PREFIXES)
    ]
    return "\n".join(kept)


def drop_reason(pr: RawPullRequest) -> DropReason | None:
    """First failing filter, in fixed order, or None for a survivor."""
    if len(pr.commits) < MIN_COMMITS:
        return DropReason.TOO_FEW_COMMITS
    if len(pr.commits) > MAX_COMMITS or pr.commits_truncated:
        return DropReason.TOO_MANY_COMMITS
    if not pr.body.isascii() or not all(m.isascii() for m in pr.commits):
        return DropReason.NON_ASCII
    if pr.author_is_bot:
        return DropReason.BOT_AUTHOR
    if not strip_checklists(pr.body).strip():
        return DropReason.EMPTY_DESCRIPTION
    return None


def to_sample(pr: RawPullRequest) -> PrSample:
    return PrSample.build(pr.id, list(pr.commits), strip_checklists(pr.body))


_REASON_FIELD = {
    DropReason.TOO_FEW_COMMITS: "too_few_commits",
    DropReason.TOO_MANY_COMMITS: "too_many_commits",
    DropReason.NON_ASCII: "non_ascii",
    DropReason.BOT_AUTHOR: "bot_written",
    DropReason.EMPTY_DESCRIPTION: "empty_description",
}


def iter_preprocess(
    prs: Iterable[RawPullRequest], stats: PreprocessStats
) -> Iterator[PrSample]:
    """Streaming core of :func:`preprocess`; ``stats`` fills as the
    iterator is consumed."""
    for pr in prs:
        stats.initial += 1
        reason = drop_reason(pr)
        if reason is None:
            stats.left += 1
            yield to_sample(pr)
        else:
            field = _REASON_FIELD[reason]
            setattr(stats, field, getattr(stats, field) + 1)


def preprocess(prs: Iterable[RawPullRequest]) -> tuple[list[PrSample], PreprocessStats]:
    stats = PreprocessStats()
    samples = list(iter_preprocess(prs, stats))
    return samples, stats
