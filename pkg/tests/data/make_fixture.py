"""Regenerate the bundled 200-PR fixture corpus.

Every record is constructed to hit exactly one preprocessing filter (or
survive), and each survivor belongs to a named cleaning group, so the
expected counters in fixture_expected.json are ground truth by
construction rather than being copied from pipeline output.

Run from the repository root:  python3 tests/data/make_fixture.py
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[2] / "src"))

from prscrub.ingest import write_jsonl
from prscrub.model import RawPullRequest

HERE = Path(__file__).resolve().parent

records = []
counter = 0


def add(commits, body, bot=False, truncated=False, title="fixture PR"):
    global counter
    counter += 1
    records.append(
        RawPullRequest(
            repo=f"fixture/repo{counter % 7}",
            number=counter,
            title=title,
            body=body,
            commits=tuple(commits),
            author_is_bot=bot,
            url=f"https://example.test/pr/{counter}",
            commits_truncated=truncated,
        )
    )
    return records[-1].id


GOOD_BODY = "Improve parser error messages and add regression tests"
GOOD_COMMITS = ["Improve parser error messages", "Add parser regression tests"]

# --- dropped at preprocessing (first failing filter attributes the drop) ---

for i in range(30):  # too few commits; overlaps with later filters on purpose
    commits = [] if i % 2 == 0 else ["single commit"]
    body = "café notes" if i % 5 == 0 else GOOD_BODY
    add(commits, body, bot=(i % 7 == 0))

for i in range(24):  # too many commits
    if i % 3 == 2:
        add([f"c{k}" for k in range(25)], GOOD_BODY, truncated=True)
    else:
        add([f"c{k}" for k in range(21 + i % 5)], GOOD_BODY)

for i in range(20):  # non-ASCII content in body or a commit message
    if i % 2 == 0:
        add(GOOD_COMMITS, "fixes the café rendering bug")
    else:
        add(["Improve parser", "✓ add tests"], GOOD_BODY, bot=(i % 9 == 0))

for i in range(15):  # bot-authored
    add(GOOD_COMMITS, GOOD_BODY, bot=True)

for i in range(26):  # empty description after checklist stripping
    body = ["", "   \n\t ", "- [x] done\n- [ ] docs", "* [X] shipped\n   \n"][i % 4]
    add(GOOD_COMMITS, body)

# --- survivors, by cleaning group ----------------------------------------

groups = {"kept_clean": [], "kept_h1_partial": [], "h1_emptied": [], "h2": [], "h3": [], "h4": []}

for i in range(20):  # nothing fires
    title = "über fix" if i == 0 else "fixture PR"  # non-ASCII titles survive
    body = GOOD_BODY if i % 3 else GOOD_BODY + "\n- [x] tests added"
    groups["kept_clean"].append(add(GOOD_COMMITS, body, title=title))

for i in range(10):  # one merge commit deleted, sample kept
    groups["kept_h1_partial"].append(
        add(
            [
                "Merge branch 'main' into feature",
                "Improve cache eviction policy",
                "Add cache eviction tests",
            ],
            "Improve cache eviction policy with tests",
        )
    )

for i in range(10):  # every commit trivial: input empties, sample removed
    groups["h1_emptied"].append(
        add(["update changelog", f"closes #{100 + i}"], "Regular maintenance release notes")
    )

for i in range(15):  # trivial description
    groups["h2"].append(
        add(
            ["Fix the login handler", "Add issue regression test"],
            f"fix issue #{843 + i}",
        )
    )

for i in range(15):  # description vocabulary absent from the input
    groups["h3"].append(
        add(
            ["Refactor parser internals", "Speed up tokenizer cache"],
            "Cherry picked from the quarterly roadmap planning document yesterday",
        )
    )

for i in range(15):  # input half or fewer words than the description
    desc_words = ["works", "fine", "still", "render", "cache"] * 6  # 30 tokens, vocab covered
    groups["h4"].append(
        add(["works fine still", "render cache quickly"], " ".join(desc_words))
    )

expected = {
    "preprocess": {
        "initial": 200,
        "too_few_commits": 30,
        "too_many_commits": 24,
        "non_ascii": 20,
        "bot_written": 15,
        "empty_description": 26,
        "left": 85,
    },
    # H1-emptied samples also score H3/H4 against their now-empty input.
    "clean": {
        "kept": 30,
        "removed": 55,
        "per_heuristic": {"H1": 20, "H2": 15, "H3": 25, "H4": 25},
        "regions": {"H1": 10, "H2": 15, "H3": 15, "H4": 15, "H1+H3+H4": 10},
        "total_affected": 65,
    },
    "groups": groups,
}

count = write_jsonl(records, HERE / "fixture_corpus_200.jsonl")
(HERE / "fixture_expected.json").write_text(
    json.dumps(expected, indent=2, sort_keys=True) + "\n", encoding="utf-8"
)
print(f"wrote {count} fixture records")
