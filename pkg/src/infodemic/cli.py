"""Command line tools for the vaccine-conversation monitoring pipeline."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from datetime import date
from pathlib import Path

from . import fixtures
from .core import (
    CollectionWindow,
    CredibilityClass,
    DataError,
    Platform,
    SourceList,
    load_gazetteer_entries,
    load_source_lists,
    load_vaccine_records,
    read_posts,
    write_posts,
)
from .credibility import SourceClassifier, load_redirect_map
from .geolocate import build_gazetteer
from .ingest import ParseStats, StreamCounter, default_keywords, filter_stream, load_keywords, parse_feed
from .pipeline import (
    Inputs,
    aggregate,
    csv_bytes,
    infer_window,
    publish_report,
    report_time,
    run_pipeline,
    write_report,
)
from .service import SnapshotError, serve
from .youtube import FixtureMetadataClient, MetadataFetchError, enrich_videos

logger = logging.getLogger("infodemic")


def _window(args) -> CollectionWindow | None:
    if args.date_from is None and args.date_to is None:
        return None
    if args.date_from is None or args.date_to is None:
        raise SystemExit("--from and --to go together")
    return CollectionWindow(date.fromisoformat(args.date_from), date.fromisoformat(args.date_to))


def _add_window(p):
    p.add_argument("--from", dest="date_from", help="first day of the collection window (YYYY-MM-DD)")
    p.add_argument("--to", dest="date_to", help="last day of the collection window (YYYY-MM-DD)")


def cmd_ingest(args) -> int:
    platform = Platform(args.platform)
    keywords = load_keywords(args.keywords) if args.keywords else default_keywords()
    stats = ParseStats()
    posts = parse_feed(args.input, platform, stats, _window(args))
    counter = StreamCounter()
    n = write_posts(filter_stream(posts, keywords, counter), args.out)
    summary = {
        "platform": platform.value,
        "parsed": stats.parsed,
        "rejected": stats.rejected,
        "rejected_reasons": dict(sorted(stats.reasons.items())),
        "passed": counter.passed,
        "dropped": counter.dropped,
        "written": n,
    }
    print(json.dumps(summary, sort_keys=True))
    return 0


def _read_all(paths):
    posts = []
    for p in paths:
        posts.extend(read_posts(p))
    return posts


def cmd_enrich_videos(args) -> int:
    empty_low = SourceList(CredibilityClass.LOW, frozenset())
    empty_high = SourceList(CredibilityClass.HIGH, frozenset())
    redirects = load_redirect_map(args.redirects) if args.redirects else {}
    classified = SourceClassifier(empty_low, empty_high, redirects).classify_posts(_read_all(args.posts))
    records = enrich_videos(classified, FixtureMetadataClient(args.metadata))
    data = csv_bytes(
        ["video_id", "status", "title", "channel_id", "view_count", "tweet_shares", "facebook_shares"],
        ((v.video_id, v.status, v.title, v.channel_id, v.view_count, v.tweet_shares, v.facebook_shares) for v in records),
    )
    Path(args.out).write_bytes(data)
    removed = sum(1 for v in records if v.status.value == "removed")
    print(json.dumps({"videos": len(records), "removed": removed}))
    return 0


def cmd_aggregate(args) -> int:
    posts = _read_all(args.posts)
    low, high = load_source_lists(args.low, args.high)
    redirects = load_redirect_map(args.redirects) if args.redirects else {}
    classified = SourceClassifier(low, high, redirects).classify_posts(posts)
    gazetteer = build_gazetteer(load_gazetteer_entries(args.gazetteer))
    doses = load_vaccine_records(args.doses)
    window = _window(args) or infer_window(posts)
    if window is None:
        raise DataError("no posts to aggregate and no --from/--to window")
    videos = []
    if args.metadata:
        videos = enrich_videos(classified, FixtureMetadataClient(args.metadata), fetched_at=report_time(window))
    version = load_keywords(args.keywords).version_label if args.keywords else "initial"
    report = aggregate(classified, low, high, gazetteer, doses, window=window, videos=videos, keyword_version=version)
    out = publish_report(report, args.out) if args.publish else write_report(report, args.out)
    print(out)
    return 0


def cmd_run(args) -> int:
    inputs = Inputs.from_fixture_dir(args.fixture, _window(args))
    started = time.perf_counter()
    report = run_pipeline(inputs)
    out = publish_report(report, args.out) if args.publish else write_report(report, args.out)
    logger.info("pipeline finished in %.2fs", time.perf_counter() - started)
    print(out)
    return 0


def cmd_serve(args) -> int:
    try:
        service = serve(args.snapshot, args.bind, poll_interval=args.poll)
    except (SnapshotError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"serving {service.store.current.snapshot_id} on {service.url}", flush=True)
    try:
        while True:
            time.sleep(3600)
    except KeyboardInterrupt:
        service.stop()
    return 0


def cmd_make_fixture(args) -> int:
    print(fixtures.generate(args.out, seed=args.seed))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="infodemic", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse a feed and keep keyword matches")
    p.add_argument("--platform", choices=[x.value for x in Platform], required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--keywords")
    p.add_argument("--out", required=True)
    _add_window(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("enrich-videos", help="tally shared videos and look up their metadata")
    p.add_argument("--posts", nargs="+", required=True)
    p.add_argument("--metadata", required=True)
    p.add_argument("--redirects")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_enrich_videos)

    p = sub.add_parser("aggregate", help="compute report files from ingested posts")
    p.add_argument("--posts", nargs="+", required=True)
    p.add_argument("--low", required=True)
    p.add_argument("--high", required=True)
    p.add_argument("--gazetteer", required=True)
    p.add_argument("--doses", required=True)
    p.add_argument("--metadata")
    p.add_argument("--redirects")
    p.add_argument("--keywords")
    p.add_argument("--out", required=True)
    p.add_argument("--publish", action="store_true", help="treat --out as a root and add a new snapshot under it")
    _add_window(p)
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("run", help="full pipeline over a directory of raw inputs")
    p.add_argument("--fixture", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--publish", action="store_true")
    _add_window(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("serve", help="serve a snapshot over HTTP")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--bind", default="127.0.0.1:8000")
    p.add_argument("--poll", type=float, default=2.0, help="seconds between reload checks (0 disables)")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("make-fixture", help="write the synthetic corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=fixtures.SEED)
    p.set_defaults(func=cmd_make_fixture)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (DataError, OSError, MetadataFetchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
