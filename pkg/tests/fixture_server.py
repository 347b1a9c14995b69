"""A tiny fake of the GitHub GraphQL endpoint for crawler tests.

Serves deterministic PR pages either through an httpx.MockTransport (unit
tests) or a real threaded HTTP server (CLI end-to-end tests).
"""

from __future__ import annotations

import json
import threading
from contextlib import contextmanager
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import httpx


def make_pr_node(number, title="t", body="b", commits=("c1", "c2"), bot=False, url=None):
    return {
        "number": number,
        "title": title,
        "body": body,
        "url": url or f"https://example.test/pr/{number}",
        "author": {"__typename": "Bot" if bot else "User"},
        "_commits": list(commits),
    }


class FakeGitHub:
    def __init__(self, repos=None, token="good-token"):
        self.repos = repos or {}
        self.token = token
        self.requests_seen = 0
        self.rate_limit_first = 0  # serve this many 403s before succeeding
        self.fail_first = 0  # serve this many 500s before succeeding

    def handle(self, headers: dict, payload: dict):
        """Return (status, headers, body_dict) for one GraphQL POST."""
        self.requests_seen += 1
        auth = headers.get("authorization", "")
        if auth != f"Bearer {self.token}":
            return 401, {}, {"message": "Bad credentials"}
        if self.rate_limit_first > 0:
            self.rate_limit_first -= 1
            return 403, {"X-RateLimit-Remaining": "0", "X-RateLimit-Reset": "100"}, {
                "message": "API rate limit exceeded"
            }
        if self.fail_first > 0:
            self.fail_first -= 1
            return 500, {}, {"message": "boom"}

        variables = payload["variables"]
        repo_key = f"{variables['owner']}/{variables['name']}"
        if repo_key not in self.repos:
            return 200, {}, {
                "data": {"repository": None},
                "errors": [{"type": "NOT_FOUND", "message": f"Could not resolve {repo_key}"}],
            }

        nodes = self.repos[repo_key]
        start = int(variables["cursor"]) if variables.get("cursor") else 0
        page = nodes[start : start + variables["pageSize"]]
        cap = variables["commitCap"]
        out_nodes = []
        for node in page:
            commits = node["_commits"]
            out_nodes.append(
                {
                    **{k: v for k, v in node.items() if k != "_commits"},
                    "commits": {
                        "totalCount": len(commits),
                        "nodes": [{"commit": {"message": m}} for m in commits[:cap]],
                    },
                }
            )
        end = start + len(page)
        return 200, {}, {
            "data": {
                "repository": {
                    "pullRequests": {
                        "pageInfo": {"hasNextPage": end < len(nodes), "endCursor": str(end)},
                        "nodes": out_nodes,
                    }
                }
            }
        }

    def transport(self) -> httpx.MockTransport:
        def handler(request: httpx.Request) -> httpx.Response:
            status, headers, body = self.handle(
                {k.lower(): v for k, v in request.headers.items()},
                json.loads(request.content),
            )
            return httpx.Response(status, headers=headers, json=body)

        return httpx.MockTransport(handler)

    @contextmanager
    def serve_http(self):
        """Run a real HTTP server on a free localhost port; yields its URL."""
        fake = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                payload = json.loads(self.rfile.read(length))
                status, headers, body = fake.handle(
                    {k.lower(): v for k, v in self.headers.items()}, payload
                )
                data = json.dumps(body).encode()
                self.send_response(status)
                for k, v in headers.items():
                    self.send_header(k, v)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def log_message(self, *args):
                pass

        server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        try:
            yield f"http://127.0.0.1:{server.server_address[1]}/graphql"
        finally:
            server.shutdown()
            thread.join(timeout=5)
