"""Video link enrichment: share tallies, metadata lookup, removed-video detection."""

from __future__ import annotations

import csv
import enum
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from datetime import datetime
from typing import Iterable, Mapping, Optional, Protocol, Sequence

from .core import Platform
from .credibility import ClassifiedPost

logger = logging.getLogger(__name__)


class VideoStatus(str, enum.Enum):
    AVAILABLE = "available"
    REMOVED = "removed"


@dataclass(frozen=True)
class VideoRecord:
    video_id: str
    status: VideoStatus
    title: Optional[str] = None
    channel_id: Optional[str] = None
    view_count: Optional[int] = None
    tweet_shares: int = 0
    facebook_shares: int = 0
    fetched_at: Optional[datetime] = None

    def __post_init__(self):
        if self.status is VideoStatus.REMOVED and (
            self.title is not None or self.channel_id is not None or self.view_count is not None
        ):
            raise ValueError("removed videos carry no metadata")
        if self.tweet_shares < 0 or self.facebook_shares < 0:
            raise ValueError("share counts must be non-negative")
        if self.view_count is not None and self.view_count < 0:
            raise ValueError("view_count must be non-negative")

    def shares(self, platform: Platform) -> int:
        return self.tweet_shares if platform is Platform.TWITTER else self.facebook_shares


def collect_video_shares(posts: Iterable[ClassifiedPost]) -> dict[str, tuple[int, int]]:
    """Map video id to (tweets containing it, summed Facebook share weight)."""
    tallies: dict[str, list[int]] = {}
    for cp in posts:
        for vid in cp.youtube_ids:
            slot = tallies.setdefault(vid, [0, 0])
            if cp.platform is Platform.TWITTER:
                slot[0] += 1
            else:
                slot[1] += cp.weight
    return {vid: (t, f) for vid, (t, f) in tallies.items()}


class ProviderError(Exception):
    """Transient failure talking to the metadata provider; safe to retry."""


class MetadataFetchError(Exception):
    def __init__(self, failed_ids):
        self.failed_ids = sorted(failed_ids)
        super().__init__(f"metadata lookup failed for {len(self.failed_ids)} ids after retries")


class MetadataProvider(Protocol):
    def lookup(self, ids: Sequence[str]) -> Mapping[str, dict]:
        """Return metadata for the ids the provider knows; omitted ids do not exist.

        Raise ProviderError on transport failure.
        """


class FixtureMetadataClient:
    """Provider backed by a CSV file with video_id, title, channel_id, view_count."""

    def __init__(self, path):
        self.rows: dict[str, dict] = {}
        with open(path, encoding="utf-8", newline="") as fh:
            for row in csv.DictReader(fh):
                vid = (row.get("video_id") or "").strip()
                if not vid:
                    continue
                views = (row.get("view_count") or "").strip()
                self.rows[vid] = {
                    "title": row.get("title") or None,
                    "channel_id": row.get("channel_id") or None,
                    "view_count": int(views) if views else None,
                }

    def lookup(self, ids: Sequence[str]) -> dict[str, dict]:
        return {vid: self.rows[vid] for vid in ids if vid in self.rows}


def _lookup_with_retry(client, batch, retries, backoff):
    for attempt in range(retries + 1):
        try:
            return dict(client.lookup(batch))
        except ProviderError as exc:
            if attempt == retries:
                logger.warning("batch of %d ids failed: %s", len(batch), exc)
                return None
            time.sleep(backoff * (2**attempt))
    return None


def fetch_metadata(
    ids: Iterable[str],
    client: MetadataProvider,
    *,
    batch_size: int = 50,
    max_workers: int = 4,
    retries: int = 2,
    backoff: float = 0.05,
    fetched_at: Optional[datetime] = None,
) -> dict[str, VideoRecord]:
    """Look up every id; ids missing from a successful response are Removed.

    Batches that still fail after ``retries`` raise MetadataFetchError naming
    the ids, rather than being reported as removed.
    """
    wanted = sorted(set(ids))
    batches = [wanted[i : i + batch_size] for i in range(0, len(wanted), batch_size)]
    if not batches:
        return {}
    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as pool:
        responses = list(pool.map(lambda b: _lookup_with_retry(client, b, retries, backoff), batches))

    failed = [vid for batch, resp in zip(batches, responses) if resp is None for vid in batch]
    if failed:
        raise MetadataFetchError(failed)

    records = {}
    for batch, resp in zip(batches, responses):
        for vid in batch:
            meta = resp.get(vid)
            if meta is None:
                records[vid] = VideoRecord(vid, VideoStatus.REMOVED, fetched_at=fetched_at)
            else:
                records[vid] = VideoRecord(
                    vid,
                    VideoStatus.AVAILABLE,
                    title=meta.get("title"),
                    channel_id=meta.get("channel_id"),
                    view_count=meta.get("view_count"),
                    fetched_at=fetched_at,
                )
    return records


def enrich_videos(posts, client, fetched_at=None, **kwargs) -> list[VideoRecord]:
    shares = collect_video_shares(posts)
    meta = fetch_metadata(shares, client, fetched_at=fetched_at, **kwargs)
    return [
        replace(meta[vid], tweet_shares=shares[vid][0], facebook_shares=shares[vid][1])
        for vid in sorted(shares)
    ]


def top_videos(records: Iterable[VideoRecord], k: int, platform: Platform) -> list[VideoRecord]:
    if k < 1:
        raise ValueError("k must be at least 1")
    ranked = sorted(records, key=lambda r: (-r.shares(platform), r.video_id))
    return ranked[:k]
