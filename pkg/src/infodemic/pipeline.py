"""End-to-end run: feeds -> filtered posts -> classified -> located -> report files.

A report directory ("snapshot") holds one CSV per aggregate, a
``correlations.json`` and a ``manifest.json`` written last that lists every
file with its SHA-256. The snapshot id is derived from the file contents, so
identical inputs give identical ids and bytes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import re
import shutil
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, time, timezone
from pathlib import Path
from typing import Iterable, Optional, Sequence

from . import analytics
from .analytics import LeaderboardEntry, RegionStat
from .core import (
    CollectionWindow,
    CredibilityClass,
    DailyStat,
    Platform,
    Post,
    SourceList,
    VaccineRecord,
    format_timestamp,
    load_gazetteer_entries,
    load_source_lists,
    load_vaccine_records,
)
from .credibility import ClassifiedPost, SourceClassifier, load_redirect_map
from .geolocate import Gazetteer, GeoResolution, build_gazetteer, geolocate_users
from .ingest import (
    KeywordTimeline,
    ParseStats,
    StreamCounter,
    default_keywords,
    filter_stream,
    load_keywords,
    parse_feed,
)
from .youtube import FixtureMetadataClient, VideoRecord, enrich_videos

logger = logging.getLogger(__name__)

MANIFEST = "manifest.json"
REPORT_FILES = (
    "volume.csv",
    "fractions.csv",
    "sources.csv",
    "leaderboard_twitter.csv",
    "leaderboard_facebook.csv",
    "regions.csv",
    "geolocation.csv",
    "videos.csv",
    "correlations.json",
)
LEADERBOARD_K = 20
_PUBLISHED = re.compile(r"^\d{6}-[0-9a-f]{16}$")


@dataclass
class Report:
    window: CollectionWindow
    generated_at: datetime
    keyword_version: str
    volume: dict[Platform, list[DailyStat]]
    fractions: dict[Platform, analytics.FractionSeries]
    sources: list[LeaderboardEntry]
    regions: list[RegionStat]
    resolutions: dict[str, GeoResolution]
    videos: list[VideoRecord]
    correlations: dict
    counts: dict = field(default_factory=dict)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, datetime):
        return format_timestamp(value)
    if hasattr(value, "value"):
        return value.value
    return str(value)


def csv_bytes(header: Sequence[str], rows: Iterable[Sequence]) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue().encode("utf-8")


def _correlation(fn, *args) -> dict:
    try:
        c = fn(*args)
    except ValueError as exc:
        return {"coefficient": None, "p_value": None, "error": str(exc)}
    return {"coefficient": c.coefficient, "p_value": c.p_value, "error": None}


def infer_window(posts: Iterable) -> Optional[CollectionWindow]:
    days = sorted({(p.post if isinstance(p, ClassifiedPost) else p).day for p in posts})
    return CollectionWindow(days[0], days[-1]) if days else None


def report_time(window: CollectionWindow) -> datetime:
    """Reports are stamped with the end of their window, not the wall clock."""
    return datetime.combine(window.end, time(23, 59, 59), tzinfo=timezone.utc)


def aggregate(
    posts: Sequence[ClassifiedPost],
    low: SourceList,
    high: SourceList,
    gazetteer: Gazetteer,
    vaccine_records: Sequence[VaccineRecord],
    window: Optional[CollectionWindow] = None,
    videos: Sequence[VideoRecord] = (),
    keyword_version: str = "initial",
    generated_at: Optional[datetime] = None,
    counts: Optional[dict] = None,
) -> Report:
    if window is None:
        window = infer_window(posts)
        if window is None:
            raise ValueError("no posts and no window: nothing to aggregate")
    if generated_at is None:
        generated_at = report_time(window)

    volume = analytics.daily_volume(posts, window)
    fractions = {p: analytics.credibility_fractions(s) for p, s in volume.items()}
    for p, s in fractions.items():
        if not s.points:
            fractions[p] = analytics.FractionSeries(p, ())
    tweets = [cp.post for cp in posts if cp.platform is Platform.TWITTER]
    resolutions = geolocate_users(tweets, gazetteer)
    regions = analytics.region_stats(resolutions, posts, vaccine_records, gazetteer, window)

    means = {}
    for p, s in fractions.items():
        if s.points:
            means[p.value] = {
                "low": analytics.mean_daily_fraction(s, CredibilityClass.LOW),
                "high": analytics.mean_daily_fraction(s, CredibilityClass.HIGH),
            }
    correlations = {
        "cross_platform_low": _correlation(analytics.cross_platform_source_correlation, posts, low),
        "cross_platform_high": _correlation(analytics.cross_platform_source_correlation, posts, high),
        "users_vs_population": _correlation(analytics.users_vs_population_correlation, resolutions, gazetteer),
        "mean_daily_fraction": means,
        "geolocation": {
            "attempted": len(resolutions),
            "resolved": sum(1 for r in resolutions.values() if r.resolved),
        },
    }
    return Report(
        window=window,
        generated_at=generated_at,
        keyword_version=keyword_version,
        volume=volume,
        fractions=fractions,
        sources=analytics.source_entries(posts, low, high),
        regions=regions,
        resolutions=resolutions,
        videos=list(videos),
        correlations=correlations,
        counts=dict(counts or {}),
    )


def render_report(report: Report) -> dict[str, bytes]:
    """Serialize a report into file name -> bytes, manifest included."""
    files: dict[str, bytes] = {}
    files["volume.csv"] = csv_bytes(
        ["date", "platform", "volume", "low_count", "high_count"],
        (
            (s.date.isoformat(), s.platform, s.volume, s.low_count, s.high_count)
            for p in Platform
            for s in report.volume.get(p, [])
        ),
    )
    files["fractions.csv"] = csv_bytes(
        ["date", "platform", "low_fraction", "high_fraction"],
        (
            (pt.date.isoformat(), p, pt.low_fraction, pt.high_fraction)
            for p in Platform
            for pt in report.fractions[p].points
        ),
    )
    entry_header = ["rank", "name", "class", "twitter_shares", "facebook_shares"]
    files["sources.csv"] = csv_bytes(
        entry_header[1:], ((e.name, e.cls, e.twitter_shares, e.facebook_shares) for e in report.sources)
    )
    for p in Platform:
        ranked = analytics.rank_leaderboard(report.sources, p, LEADERBOARD_K)
        files[f"leaderboard_{p.value}.csv"] = csv_bytes(
            entry_header,
            ((i, e.name, e.cls, e.twitter_shares, e.facebook_shares) for i, e in enumerate(ranked, 1)),
        )
    files["regions.csv"] = csv_bytes(
        ["region_code", "users_located", "mean_user_low_fraction", "total_doses", "population", "doses_per_million"],
        (
            (r.region_code, r.users_located, r.mean_user_low_fraction, r.total_doses, r.population, r.doses_per_million)
            for r in report.regions
        ),
    )
    files["geolocation.csv"] = csv_bytes(
        ["user_id", "matched_name", "matched_kind", "region_code"],
        (
            (r.user_id, r.matched_name, r.matched_kind, r.region_code)
            for _, r in sorted(report.resolutions.items())
        ),
    )
    files["videos.csv"] = csv_bytes(
        ["video_id", "status", "title", "channel_id", "view_count", "tweet_shares", "facebook_shares", "fetched_at"],
        (
            (v.video_id, v.status, v.title, v.channel_id, v.view_count, v.tweet_shares, v.facebook_shares, v.fetched_at)
            for v in sorted(report.videos, key=lambda v: v.video_id)
        ),
    )
    files["correlations.json"] = (json.dumps(report.correlations, indent=2, sort_keys=True) + "\n").encode("utf-8")

    digest = hashlib.sha256()
    for name in REPORT_FILES:
        digest.update(name.encode())
        digest.update(b"\0")
        digest.update(files[name])
    manifest = {
        "snapshot_id": digest.hexdigest()[:16],
        "generated_at": format_timestamp(report.generated_at),
        "window": {"from": report.window.start.isoformat(), "to": report.window.end.isoformat()},
        "keyword_set_version": report.keyword_version,
        "counts": report.counts,
        "files": {name: hashlib.sha256(files[name]).hexdigest() for name in REPORT_FILES},
    }
    files[MANIFEST] = (json.dumps(manifest, indent=2, sort_keys=True) + "\n").encode("utf-8")
    return files


def write_report(report: Report, out_dir) -> Path:
    """Write the snapshot to ``out_dir`` atomically (staged, then renamed into place)."""
    out = Path(out_dir)
    out.parent.mkdir(parents=True, exist_ok=True)
    files = render_report(report)
    stage = Path(tempfile.mkdtemp(prefix=f".{out.name}.", dir=out.parent))
    for name in REPORT_FILES:
        (stage / name).write_bytes(files[name])
    (stage / MANIFEST).write_bytes(files[MANIFEST])
    if out.exists():
        old = Path(tempfile.mkdtemp(prefix=f".{out.name}.old.", dir=out.parent))
        os.replace(out, old / "snapshot")
        os.replace(stage, out)
        shutil.rmtree(old)
    else:
        os.replace(stage, out)
    return out


def publish_report(report: Report, root) -> Path:
    """Write the snapshot as a new subdirectory of ``root``.

    Subdirectories are named ``<sequence>-<snapshot id>`` with a zero-padded
    publish counter, so the greatest name is always the latest publish.
    Publishing the snapshot that is already newest is a no-op.
    """
    root = Path(root)
    files = render_report(report)
    snapshot_id = json.loads(files[MANIFEST])["snapshot_id"]
    published = sorted(p.name for p in root.iterdir() if _PUBLISHED.match(p.name)) if root.is_dir() else []
    if published and published[-1].endswith(f"-{snapshot_id}"):
        return root / published[-1]
    seq = int(published[-1].split("-", 1)[0]) + 1 if published else 1
    return write_report(report, root / f"{seq:06d}-{snapshot_id}")


@dataclass
class Inputs:
    low: Path
    high: Path
    gazetteer: Path
    doses: Path
    keywords: Optional[Path] = None
    twitter: Optional[Path] = None
    facebook: Optional[Path] = None
    metadata: Optional[Path] = None
    redirects: Optional[Path] = None
    window: Optional[CollectionWindow] = None

    @classmethod
    def from_fixture_dir(cls, d, window: Optional[CollectionWindow] = None) -> "Inputs":
        d = Path(d)

        def opt(name):
            return d / name if (d / name).exists() else None

        return cls(
            low=d / "low.txt",
            high=d / "high.txt",
            gazetteer=d / "gazetteer.csv",
            doses=d / "doses.csv",
            keywords=opt("keywords.txt"),
            twitter=opt("twitter.jsonl"),
            facebook=opt("facebook.csv"),
            metadata=opt("video_metadata.csv"),
            redirects=opt("redirects.csv"),
            window=window,
        )


def ingest_posts(inputs: Inputs, keywords: KeywordTimeline) -> tuple[list[Post], dict]:
    """Parse both feeds concurrently and keep keyword matches."""
    feeds = [(p, path) for p, path in ((Platform.TWITTER, inputs.twitter), (Platform.FACEBOOK, inputs.facebook)) if path]
    stats = {p: ParseStats() for p, _ in feeds}
    with ThreadPoolExecutor(max_workers=max(1, len(feeds))) as pool:
        parsed = list(pool.map(lambda f: parse_feed(f[1], f[0], stats[f[0]], inputs.window), feeds))
    posts: list[Post] = []
    counts = {}
    for (platform, _), items in zip(feeds, parsed):
        counter = StreamCounter()
        posts.extend(filter_stream(items, keywords, counter))
        counts[platform.value] = {
            "parsed": stats[platform].parsed,
            "rejected": stats[platform].rejected,
            "passed": counter.passed,
            "dropped": counter.dropped,
        }
    return posts, counts


def run_pipeline(inputs: Inputs, generated_at: Optional[datetime] = None) -> Report:
    keywords = load_keywords(inputs.keywords) if inputs.keywords else None
    if keywords is None:
        keywords = default_keywords()
    posts, counts = ingest_posts(inputs, keywords)

    low, high = load_source_lists(inputs.low, inputs.high)
    redirects = load_redirect_map(inputs.redirects) if inputs.redirects else {}
    classifier = SourceClassifier(low, high, redirects)
    classified = classifier.classify_posts(posts)

    gazetteer = build_gazetteer(load_gazetteer_entries(inputs.gazetteer))
    doses = load_vaccine_records(inputs.doses)

    window = inputs.window or infer_window(posts)
    if generated_at is None and window is not None:
        generated_at = report_time(window)

    videos: list[VideoRecord] = []
    if inputs.metadata:
        videos = enrich_videos(classified, FixtureMetadataClient(inputs.metadata), fetched_at=generated_at)

    logger.info("aggregating %d posts (%s)", len(classified), counts)
    return aggregate(
        classified,
        low,
        high,
        gazetteer,
        doses,
        window=window,
        videos=videos,
        keyword_version=keywords.version_label,
        generated_at=generated_at,
        counts=counts,
    )
