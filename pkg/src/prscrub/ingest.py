"""Corpus acquisition: a GraphQL crawler for desk-scale collection and a
bit-exact JSONL reader/writer for offline corpora."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator

import httpx

from .model import RawPullRequest

GITHUB_GRAPHQL_URL = "https://api.github.com/graphql"

# Wire schema, fixed key order. commits_truncated is optional and defaults
# to false, so the writer only emits it when set.
JSONL_KEYS = ("repo", "number", "title", "body", "commits", "author_is_bot", "url")

_PR_QUERY = """
query($owner: String!, $name: String!, $pageSize: Int!, $commitCap: Int!, $cursor: String) {
  repository(owner: $owner, name: $name) {
    pullRequests(first: $pageSize, after: $cursor, orderBy: {field: CREATED_AT, direction: ASC}) {
      pageInfo { hasNextPage endCursor }
      nodes {
        number
        title
        body
        url
        author { __typename }
        commits(first: $commitCap) {
          totalCount
          nodes { commit { message } }
        }
      }
    }
  }
}
"""


class IngestError(Exception):
    pass


class AuthError(IngestError):
    pass


class NotFound(IngestError):
    pass


class RateLimited(IngestError):
    pass


class CrawlError(IngestError):
    """Transient failures that survived every retry."""


class ParseError(IngestError):
    def __init__(self, path, line_no: int, reason: str):
        self.path = str(path)
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"{path}:{line_no}: {reason}")


@dataclass
class CrawlConfig:
    repos: list[str]
    auth_token: str
    page_size: int = 50
    max_prs_per_repo: int | None = None
    # Must stay above 20 so the ">20 commits" preprocessing cut is decidable.
    commit_fetch_cap: int = 25
    api_url: str = GITHUB_GRAPHQL_URL
    max_retries: int = 4

    def __post_init__(self):
        if not 1 <= self.page_size <= 100:
            raise ValueError("page_size must be in [1, 100]")
        if self.commit_fetch_cap < 21:
            raise ValueError("commit_fetch_cap must be >= 21")


def _pr_from_node(repo: str, node: dict) -> RawPullRequest:
    commits_conn = node.get("commits") or {}
    messages = [
        c["commit"]["message"]
        for c in commits_conn.get("nodes") or []
        if c and c.get("commit")
    ]
    total = commits_conn.get("totalCount", len(messages))
    author = node.get("author") or {}
    return RawPullRequest(
        repo=repo,
        number=node["number"],
        title=node.get("title") or "",
        body=node.get("body") or "",
        commits=tuple(messages),
        author_is_bot=author.get("__typename") == "Bot",
        url=node.get("url") or "",
        commits_truncated=total > len(messages),
    )


def _post_with_retries(
    client: httpx.Client,
    config: CrawlConfig,
    payload: dict,
    sleep: Callable[[float], None],
    now: Callable[[], float],
) -> dict:
    last_error: Exception | None = None
    for attempt in range(config.max_retries + 1):
        try:
            resp = client.post(
                config.api_url,
                json=payload,
                headers={"Authorization": f"Bearer {config.auth_token}"},
            )
        except httpx.TransportError as exc:
            last_error = exc
            sleep(0.5 * 2**attempt)
            continue

        if resp.status_code == 401:
            raise AuthError("GitHub rejected the token")
        if resp.status_code in (403, 429) and resp.headers.get("x-ratelimit-remaining") == "0":
            reset = float(resp.headers.get("x-ratelimit-reset", "0"))
            last_error = RateLimited(f"rate limited until {reset}")
            sleep(max(0.0, reset - now()) + 1.0)
            continue
        if resp.status_code >= 500:
            last_error = CrawlError(f"server error {resp.status_code}")
            sleep(0.5 * 2**attempt)
            continue
        resp.raise_for_status()
        return resp.json()

    if isinstance(last_error, RateLimited):
        raise last_error
    raise CrawlError(f"giving up after {config.max_retries + 1} attempts: {last_error}")


def crawl_repo(
    config: CrawlConfig,
    repo: str,
    client: httpx.Client | None = None,
    sleep: Callable[[float], None] = time.sleep,
    now: Callable[[], float] = time.time,
) -> Iterator[RawPullRequest]:
    """Yield every PR of ``repo`` with title, body, and up to
    ``commit_fetch_cap`` commit messages, paging through cursors.

    One request is in flight at a time; rate-limit responses sleep until
    the advertised reset and transient failures back off exponentially.
    """
    owner, _, name = repo.partition("/")
    if not owner or not name:
        raise ValueError(f"repo must be owner/name, got {repo!r}")

    own_client = client is None
    client = client or httpx.Client(timeout=30.0)
    cursor = None
    yielded = 0
    try:
        while True:
            data = _post_with_retries(
                client,
                config,
                {
                    "query": _PR_QUERY,
                    "variables": {
                        "owner": owner,
                        "name": name,
                        "pageSize": config.page_size,
                        "commitCap": config.commit_fetch_cap,
                        "cursor": cursor,
                    },
                },
                sleep,
                now,
            )
            repository = (data.get("data") or {}).get("repository")
            if repository is None:
                raise NotFound(f"repository {repo} not found")
            prs = repository["pullRequests"]
            for node in prs["nodes"]:
                yield _pr_from_node(repo, node)
                yielded += 1
                if config.max_prs_per_repo is not None and yielded >= config.max_prs_per_repo:
                    return
            if not prs["pageInfo"]["hasNextPage"]:
                return
            cursor = prs["pageInfo"]["endCursor"]
    finally:
        if own_client:
            client.close()


def record_to_line(pr: RawPullRequest) -> str:
    """Canonical single-line JSON for one record, keys in schema order."""
    obj = {
        "repo": pr.repo,
        "number": pr.number,
        "title": pr.title,
        "body": pr.body,
        "commits": list(pr.commits),
        "author_is_bot": pr.author_is_bot,
        "url": pr.url,
    }
    if pr.commits_truncated:
        obj["commits_truncated"] = True
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def write_jsonl(records: Iterable[RawPullRequest], path: str | Path) -> int:
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for pr in records:
            fh.write(record_to_line(pr))
            fh.write("\n")
            count += 1
    return count


def _parse_record(obj: dict, path, line_no: int) -> RawPullRequest:
    try:
        commits = obj["commits"]
        if not isinstance(commits, list) or not all(isinstance(c, str) for c in commits):
            raise ParseError(path, line_no, "commits must be a list of strings")
        return RawPullRequest(
            repo=obj["repo"],
            number=obj["number"],
            title=obj["title"],
            body=obj["body"],
            commits=tuple(commits),
            author_is_bot=obj["author_is_bot"],
            url=obj["url"],
            commits_truncated=bool(obj.get("commits_truncated", False)),
        )
    except KeyError as exc:
        raise ParseError(path, line_no, f"missing key {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise ParseError(path, line_no, str(exc)) from None


def read_jsonl(path: str | Path) -> Iterator[RawPullRequest]:
    """Stream records from a JSONL corpus, failing fast on a bad line."""
    for line_no, obj in read_object_lines(path):
        yield _parse_record(obj, path, line_no)


def read_object_lines(path: str | Path) -> Iterator[tuple[int, dict]]:
    """Generic JSONL reader: yields (line_no, object), fail-fast."""
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                raise ParseError(path, line_no, "blank line")
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, line_no, f"invalid JSON: {exc.msg}") from None
            if not isinstance(obj, dict):
                raise ParseError(path, line_no, "line is not a JSON object")
            yield line_no, obj


def write_object_lines(path: str | Path, objects: Iterable[dict]) -> int:
    """Generic JSONL writer: compact, UTF-8, LF, insertion key order."""
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for obj in objects:
            fh.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")))
            fh.write("\n")
            count += 1
    return count
