import random

from prscrub.model import DropReason, RawPullRequest
from prscrub.preprocess import PreprocessStats, drop_reason, preprocess, strip_checklists


def pr(**kw):
    defaults = dict(
        repo="o/r", number=1, title="t", body="a real description",
        commits=("first change", "second change"), author_is_bot=False, url="u",
    )
    defaults.update(kw)
    return RawPullRequest(**defaults)


def test_strip_checklists_removes_checklist_lines():
    assert strip_checklists("fix bug\n- [x] tests pass\n- [ ] docs") == "fix bug"


def test_strip_checklists_identity_without_checklists():
    body = "fix bug\n\nsome detail - [x] inline does not count"
    assert strip_checklists(body) == body


def test_strip_checklists_all_lines_checklists():
    assert strip_checklists("- [x] a\n- [ ] b") == ""
    assert strip_checklists("* [X] a\n  * [ ] b") == ""


def test_order_too_few_commits_wins_over_non_ascii():
    # 1 commit and non-ASCII body: the first check in the sequence decides.
    assert drop_reason(pr(commits=("only",), body="héllo")) == DropReason.TOO_FEW_COMMITS


def test_checklist_only_body_is_empty_description():
    assert drop_reason(pr(body="- [x] done")) == DropReason.EMPTY_DESCRIPTION


def test_drop_reasons_each_filter():
    assert drop_reason(pr(commits=())) == DropReason.TOO_FEW_COMMITS
    assert drop_reason(pr(commits=tuple(f"c{i}" for i in range(21)))) == DropReason.TOO_MANY_COMMITS
    assert drop_reason(pr(commits_truncated=True)) == DropReason.TOO_MANY_COMMITS
    assert drop_reason(pr(body="café")) == DropReason.NON_ASCII
    assert drop_reason(pr(commits=("ok", "✓ done"))) == DropReason.NON_ASCII
    assert drop_reason(pr(author_is_bot=True)) == DropReason.BOT_AUTHOR
    assert drop_reason(pr(body="   \n\t")) == DropReason.EMPTY_DESCRIPTION
    assert drop_reason(pr()) is None


def test_non_ascii_title_does_not_drop():
    assert drop_reason(pr(title="über fix")) is None


def test_survivor_sample_fields():
    record = pr(body="- [x] checked\nReal text here")
    samples, stats = preprocess([record])
    [sample] = samples
    assert sample.id == "o/r#1"
    assert sample.reference_description == "Real text here"
    assert list(sample.input_sequence) == ["first change", "second change"]
    assert stats.left == 1 and stats.initial == 1


def random_pr(rng: random.Random, number: int) -> RawPullRequest:
    n_commits = rng.choice([0, 1, 2, 3, 10, 21, 25])
    body = rng.choice(["fine description", "héllo", "", "- [x] only checklist", "ok"])
    commits = tuple(
        rng.choice(["plain message", "non-ascii ☃"]) for _ in range(n_commits)
    )
    return RawPullRequest(
        repo="o/r", number=number, title="t", body=body, commits=commits,
        author_is_bot=rng.random() < 0.3, url="u",
        commits_truncated=rng.random() < 0.05,
    )


def test_stats_identity_and_survivor_invariants_on_random_corpora():
    rng = random.Random(1234)
    prs = [random_pr(rng, i + 1) for i in range(600)]
    samples, stats = preprocess(prs)
    assert stats.identity_holds
    assert stats.initial == 600
    assert stats.left == len(samples)
    for sample in samples:
        assert 2 <= len(sample.input_sequence) <= 20
        assert sample.reference_description.strip()
        assert sample.reference_description.isascii()
        assert all(m.isascii() for m in sample.input_sequence)


def test_preprocess_is_order_preserving_and_deterministic():
    rng = random.Random(9)
    prs = [random_pr(rng, i + 1) for i in range(200)]
    first, _ = preprocess(prs)
    second, _ = preprocess(prs)
    assert [s.id for s in first] == [s.id for s in second]
    kept_numbers = [int(s.id.split("#")[1]) for s in first]
    assert kept_numbers == sorted(kept_numbers)


def test_paper_scale_identity_arithmetic():
    # Published accounting: drops partition the gap between initial and left.
    stats = PreprocessStats(
        initial=2_185_382,
        too_few_commits=1_319_061,
        too_many_commits=62_983,
        non_ascii=76_931,
        bot_written=5_329,
        empty_description=95_260,
        left=625_818,
    )
    assert stats.identity_holds


def test_stats_dict_keys():
    _, stats = preprocess([])
    assert list(stats.to_dict().keys()) == [
        "initial", "too_few_commits", "too_many_commits",
        "non_ascii", "bot_written", "empty_description", "left",
    ]
