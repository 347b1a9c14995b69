"""The prscrub command line: fetch, preprocess, split, clean, stats,
rouge, cochran, kappa, audit, and the annotate workflow."""

from __future__ import annotations

import functools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import chain
from pathlib import Path

import click

from . import __version__
from .annotate import (
    JudgmentStore,
    build_stage1_session,
    build_stage2_session,
    unblind_and_export,
)
from .annotate import server as annotate_server
from .annotate.session import dump_session, load_session
from .evalstats import CochranParams, audit_heuristic, cochran_sample_size, cohen_kappa
from .heuristics import HeuristicFlags, Thresholds, apply_heuristics, load_patterns
from .ingest import (
    CrawlConfig,
    GITHUB_GRAPHQL_URL,
    IngestError,
    crawl_repo,
    read_jsonl,
    read_object_lines,
    write_jsonl,
    write_object_lines,
)
from .manifest import file_sha256, write_manifests
from .model import PrSample
from .pipeline import overlap_stats, split
from .preprocess import PreprocessStats, iter_preprocess


def _fail(code: str, detail: str):
    click.echo(json.dumps({"error": code, "detail": detail}), err=True)
    sys.exit(1)


def data_errors(fn):
    """Data problems exit 1 with a machine-readable error; usage problems
    stay with click's exit 2."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except click.ClickException:
            raise
        except (IngestError, OSError, ValueError, KeyError) as exc:
            _fail(type(exc).__name__, str(exc))

    return wrapper


def _echo(ctx, message):
    if not ctx.obj.get("quiet"):
        click.echo(message)


def _seed(ctx, seed):
    if seed is not None:
        return seed
    if ctx.obj.get("seed") is not None:
        return ctx.obj["seed"]
    return 0


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")


def _read_samples(path) -> list[PrSample]:
    return [PrSample.from_dict(obj) for _, obj in read_object_lines(path)]


@click.group()
@click.version_option(version=__version__, prog_name="prscrub")
@click.option("--quiet", is_flag=True, help="suppress progress output")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True,
              help="max worker processes for parallel stages")
@click.option("--seed", type=int, default=None, help="default seed for seeded subcommands")
@click.pass_context
def main(ctx, quiet, jobs, seed):
    ctx.ensure_object(dict)
    ctx.obj["quiet"] = quiet
    ctx.obj["jobs"] = jobs
    ctx.obj["seed"] = seed


@main.command()
@click.option("--repos", "repos_file", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="file with one owner/name per line")
@click.option("--token-env", required=True,
              help="environment variable holding the API token")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--max-prs", type=int, default=None, help="cap PRs per repository")
@click.option("--page-size", type=click.IntRange(1, 100), default=50, show_default=True)
@click.option("--api-url", default=GITHUB_GRAPHQL_URL, show_default=True)
@click.pass_context
@data_errors
def fetch(ctx, repos_file, token_env, out_path, max_prs, page_size, api_url):
    """Crawl pull requests into a JSONL corpus."""
    token = os.environ.get(token_env, "")
    if not token:
        raise ValueError(f"environment variable {token_env!r} is not set")
    repos = [
        line.strip()
        for line in Path(repos_file).read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    config = CrawlConfig(
        repos=repos,
        auth_token=token,
        page_size=page_size,
        max_prs_per_repo=max_prs,
        api_url=api_url,
    )
    streams = (crawl_repo(config, repo) for repo in repos)
    count = write_jsonl(chain.from_iterable(streams), out_path)
    write_manifests(
        "prscrub fetch",
        {"repos": repos, "page_size": page_size, "max_prs": max_prs, "api_url": api_url},
        [repos_file],
        [out_path],
    )
    _echo(ctx, f"fetched {count} PRs from {len(repos)} repos into {out_path}")


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--stats", "stats_path", required=True, type=click.Path(dir_okay=False))
@click.pass_context
@data_errors
def preprocess(ctx, in_path, out_path, stats_path):
    """Apply the sequential filters and emit samples plus accounting."""
    stats = PreprocessStats()
    count = write_object_lines(
        out_path,
        (sample.to_dict() for sample in iter_preprocess(read_jsonl(in_path), stats)),
    )
    _write_json(stats_path, stats.to_dict())
    write_manifests("prscrub preprocess", {}, [in_path], [out_path, stats_path])
    _echo(ctx, f"kept {count} of {stats.initial} PRs; stats in {stats_path}")


@main.command("split")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=None, help="shuffle seed")
@click.option("--out-dir", "out_dir", required=True, type=click.Path(file_okay=False))
@click.pass_context
@data_errors
def split_cmd(ctx, in_path, seed, out_dir):
    """Deterministic 8:1:1 train/val/test split."""
    seed = _seed(ctx, seed)
    samples = _read_samples(in_path)
    by_id = {s.id: s for s in samples}
    assignment = split([s.id for s in samples], seed)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []
    for name, ids in (
        ("train", assignment.train_ids),
        ("val", assignment.val_ids),
        ("test", assignment.test_ids),
    ):
        path = out_dir / f"{name}.jsonl"
        write_object_lines(path, (by_id[i].to_dict() for i in ids))
        outputs.append(path)
    meta_path = out_dir / "split.json"
    meta = assignment.to_dict()
    for key in ("train_ids", "val_ids", "test_ids"):
        meta.pop(key)  # memberships live in the jsonl files
    _write_json(meta_path, meta)
    outputs.append(meta_path)

    write_manifests("prscrub split", {"seed": seed, "prng": assignment.prng}, [in_path], outputs)
    sizes = meta["sizes"]
    _echo(ctx, f"split {len(samples)} samples into {sizes['train']}/{sizes['val']}/{sizes['test']}")


def _clean_one(args):
    sample_obj, thresholds_tuple, patterns_path = args
    sample = PrSample.from_dict(sample_obj)
    thresholds = Thresholds(*thresholds_tuple)
    commit_patterns, description_patterns = _patterns_cached(patterns_path)
    kept, flags = apply_heuristics(sample, thresholds, commit_patterns, description_patterns)
    return (kept.to_dict() if kept else None), flags.to_dict()


@functools.lru_cache(maxsize=None)
def _patterns_cached(path):
    from .heuristics import DEFAULT_COMMIT_PATTERNS, DEFAULT_DESCRIPTION_PATTERNS

    if path is None:
        return DEFAULT_COMMIT_PATTERNS, DEFAULT_DESCRIPTION_PATTERNS
    return load_patterns(path)


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--flags", "flags_path", required=True, type=click.Path(dir_okay=False))
@click.option("--missing-cutoff", type=float, default=0.8, show_default=True,
              help="H3 fires above this missing-word fraction")
@click.option("--length-cutoff", type=float, default=0.5, show_default=True,
              help="H4 fires at or below this input/reference length ratio")
@click.option("--missing-mode", type=click.Choice(["set", "multiset"]), default="set",
              show_default=True, help="H3 word counting")
@click.option("--patterns", "patterns_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="TOML file overriding the trivial-text patterns")
@click.pass_context
@data_errors
def clean(ctx, in_path, out_path, flags_path, missing_cutoff, length_cutoff,
          missing_mode, patterns_path):
    """Apply the four heuristics; write kept samples and per-sample flags."""
    thresholds = Thresholds(missing_cutoff, length_cutoff, missing_mode)
    thresholds_tuple = (missing_cutoff, length_cutoff, missing_mode)
    rows = [obj for _, obj in read_object_lines(in_path)]
    jobs = ctx.obj.get("jobs", 1)

    work = [(row, thresholds_tuple, patterns_path) for row in rows]
    if jobs > 1 and len(rows) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_clean_one, work, chunksize=64))
    else:
        results = [_clean_one(item) for item in work]

    write_object_lines(out_path, (kept for kept, _ in results if kept is not None))
    write_object_lines(
        flags_path,
        ({"id": row["id"], **flags} for row, (_, flags) in zip(rows, results)),
    )
    config = {
        "missing_cutoff": missing_cutoff,
        "length_cutoff": length_cutoff,
        "missing_mode": missing_mode,
        "patterns_sha256": file_sha256(patterns_path) if patterns_path else None,
    }
    inputs = [in_path] + ([patterns_path] if patterns_path else [])
    write_manifests("prscrub clean", config, inputs, [out_path, flags_path])
    kept_n = sum(1 for kept, _ in results if kept is not None)
    _echo(ctx, f"kept {kept_n} of {len(rows)} samples; flags in {flags_path}")


@main.command()
@click.option("--flags", "flags_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.pass_context
@data_errors
def stats(ctx, flags_path, out_path):
    """Heuristic overlap report from a flags file."""
    flags = [HeuristicFlags.from_dict(obj) for _, obj in read_object_lines(flags_path)]
    report = overlap_stats(flags)
    _write_json(out_path, report.to_dict())
    write_manifests("prscrub stats", {}, [flags_path], [out_path])
    _echo(ctx, f"{report.total_affected} of {report.total_samples} samples affected "
               f"({report.affected_fraction:.1%})")


@main.command()
@click.option("--pairs", "pairs_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", type=click.Choice(["example_mean", "corpus_sum"]),
              default="example_mean", show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.pass_context
@data_errors
def rouge(ctx, pairs_path, mode, out_path):
    """Score generated-vs-reference description pairs."""
    from .rouge import score_corpus

    pairs = [(obj["generated"], obj["reference"]) for _, obj in read_object_lines(pairs_path)]
    report = score_corpus(pairs, mode)
    _write_json(out_path, report.to_dict())
    write_manifests("prscrub rouge", {"mode": mode}, [pairs_path], [out_path])
    _echo(ctx, f"scored {report.pair_count} pairs ({mode}) into {out_path}")


@main.command()
@click.option("--confidence", type=float, required=True)
@click.option("--margin", type=float, required=True)
@click.option("--proportion", type=float, default=0.5, show_default=True)
@data_errors
def cochran(confidence, margin, proportion):
    """Print the Cochran sample size for the given parameters."""
    click.echo(cochran_sample_size(CochranParams(confidence, margin, proportion)))


@main.command()
@click.option("--a", "a_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--b", "b_path", required=True, type=click.Path(exists=True, dir_okay=False))
@data_errors
def kappa(a_path, b_path):
    """Cohen's kappa between two label files ({"id", "label"} lines)."""
    a_rows = [obj for _, obj in read_object_lines(a_path)]
    b_rows = [obj for _, obj in read_object_lines(b_path)]
    if [r.get("id") for r in a_rows] != [r.get("id") for r in b_rows]:
        raise ValueError("label files disagree on item ids or order")
    result = cohen_kappa([r["label"] for r in a_rows], [r["label"] for r in b_rows])
    click.echo(json.dumps(result.to_dict(), indent=2, sort_keys=True))


@main.command()
@click.option("--labels", "labels_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.pass_context
@data_errors
def audit(ctx, labels_path, out_path):
    """Per-heuristic TP/FP accuracy from verdict labels."""
    grouped: dict[str, list] = {}
    for _, obj in read_object_lines(labels_path):
        grouped.setdefault(obj["heuristic"], []).append(
            (obj.get("sample_id", obj.get("id", "")), obj["verdict"])
        )
    audits = [
        audit_heuristic(rows, heuristic).to_dict()
        for heuristic, rows in sorted(grouped.items())
    ]
    _write_json(out_path, {"audits": audits})
    write_manifests("prscrub audit", {}, [labels_path], [out_path])
    _echo(ctx, f"audited {len(audits)} heuristics into {out_path}")


@main.group()
def annotate():
    """Blinded manual-evaluation sessions."""


@annotate.command("build-stage1")
@click.option("--pairs", "pairs_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--n", type=int, required=True, help="number of PRs to sample")
@click.option("--seed", type=int, default=None)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.pass_context
@data_errors
def build_stage1(ctx, pairs_path, n, seed, out_path):
    """Blinded A/B description-scoring session from a scored-pairs file."""
    seed = _seed(ctx, seed)
    pairs = [obj for _, obj in read_object_lines(pairs_path)]
    session = build_stage1_session(pairs, n, seed)
    dump_session(session, out_path)
    write_manifests("prscrub annotate build-stage1", {"n": n, "seed": seed},
                    [pairs_path], [out_path])
    _echo(ctx, f"stage-1 session with {len(session['items'])} items in {out_path}")


@annotate.command("build-stage2")
@click.option("--flags", "flags_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--samples", "samples_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--per-heuristic", "per_heuristic_n", type=int, default=30, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.pass_context
@data_errors
def build_stage2(ctx, flags_path, samples_path, per_heuristic_n, seed, out_path):
    """Stratified TP/FP auditing session over heuristic-flagged samples."""
    seed = _seed(ctx, seed)
    flags_rows = [obj for _, obj in read_object_lines(flags_path)]
    samples_by_id = {obj["id"]: obj for _, obj in read_object_lines(samples_path)}
    session = build_stage2_session(flags_rows, samples_by_id, per_heuristic_n, seed)
    dump_session(session, out_path)
    write_manifests(
        "prscrub annotate build-stage2",
        {"per_heuristic": per_heuristic_n, "seed": seed},
        [flags_path, samples_path],
        [out_path],
    )
    _echo(ctx, f"stage-2 session with {len(session['items'])} items in {out_path}")


@annotate.command("serve")
@click.option("--session", "session_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--store", "store_path", required=True, type=click.Path(dir_okay=False))
@click.option("--port", type=int, default=8099, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ui-dir", type=click.Path(exists=True, file_okay=False), default=None,
              help="static UI bundle to serve at /")
@data_errors
def annotate_serve(session_path, store_path, port, host, ui_dir):
    """Serve a rating session over HTTP until interrupted."""
    session = load_session(session_path)
    annotate_server.serve(session, port, store_path, host=host, ui_dir=ui_dir)


@annotate.command("export")
@click.option("--session", "session_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--store", "store_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out-dir", "out_dir", required=True, type=click.Path(file_okay=False))
@click.pass_context
@data_errors
def annotate_export(ctx, session_path, store_path, out_dir):
    """Unblind stored judgments into analysis-ready files."""
    session = load_session(session_path)
    with JudgmentStore(store_path) as store:
        export = unblind_and_export(session, store)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = [out_dir / "export.json"]
    _write_json(outputs[0], export)

    if export["stage"] == 1:
        ratings_path = out_dir / "ratings.jsonl"
        write_object_lines(ratings_path, export["ratings"])
        outputs.append(ratings_path)
    else:
        audit_path = out_dir / "audit.json"
        _write_json(audit_path, {"audits": [export["audits"][h] for h in sorted(export["audits"])]})
        outputs.append(audit_path)
        reconciliation_path = out_dir / "reconciliation.jsonl"
        write_object_lines(reconciliation_path, export["reconciliation"])
        outputs.append(reconciliation_path)
        for heuristic, by_rater in sorted(export["kappa_labels"].items()):
            for rater, rows in sorted(by_rater.items()):
                path = out_dir / f"labels_{heuristic}_{rater}.jsonl"
                write_object_lines(path, rows)
                outputs.append(path)

    write_manifests("prscrub annotate export", {}, [session_path, store_path], outputs)
    _echo(ctx, f"export written to {out_dir}")


if __name__ == "__main__":
    main()
