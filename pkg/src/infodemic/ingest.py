"""Replayable platform feeds and keyword filtering.

Twitter feeds are newline-delimited JSON, one status per line, shaped like the
v1.1 filter stream (``id``, ``created_at``, ``text``, ``user.id``,
``user.location``, ``entities.urls``). Facebook feeds are CSV exports with a
header row carrying ``date``, ``message``, ``link``, ``share_count`` and
``account_id`` (``post_id`` optional).
"""

from __future__ import annotations

import csv
import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from typing import Iterable, Iterator, Optional, Union

from .core import CollectionWindow, DataError, Platform, Post, normalize_text, parse_timestamp
from .credibility import extract_urls

logger = logging.getLogger(__name__)

# Keywords used to select vaccine conversations, normalized (accents stripped).
DEFAULT_KEYWORDS = (
    "vaccini",
    "vaccino",
    "vaccinazioni",
    "iononmivaccino",
    "vaccinazione",
    "vaccinocovid",
    "vaccinarsi",
    "vaccinare",
    "vacciniamoci",
    "vaccinareh24",
    "vaccinero",
    "vaccinoanticovid",
    "vaccinerai",
    "vaccineremo",
    "vaccinerete",
    "iononmivaccinero",
    "novaccinoainovax",
    "iononsonounacavia",
)

_TOKEN = re.compile(r"[^\W_]+")
_TWITTER_DATE = "%a %b %d %H:%M:%S %z %Y"


class IngestError(OSError):
    """A feed could not be read at all."""


def tokenize(text: str) -> list[str]:
    """Split normalized text on non-alphanumeric boundaries ('#' included)."""
    return _TOKEN.findall(normalize_text(text))


@dataclass(frozen=True)
class KeywordSet:
    keywords: frozenset[str]
    version_date: date = date.min

    def __post_init__(self):
        if not self.keywords:
            raise ValueError("keyword set is empty")
        for kw in self.keywords:
            if normalize_text(kw) != kw or not tokenize(kw):
                raise ValueError(f"keyword not normalized: {kw!r}")
        index: dict[str, list[tuple[str, tuple[str, ...]]]] = {}
        for kw in sorted(self.keywords):
            toks = tuple(tokenize(kw))
            index.setdefault(toks[0], []).append((kw, toks))
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_words(cls, words: Iterable[str], version_date: date = date.min) -> "KeywordSet":
        return cls(frozenset(normalize_text(w).lstrip("#") for w in words if w.strip()), version_date)

    def __len__(self) -> int:
        return len(self.keywords)


@dataclass(frozen=True)
class KeywordTimeline:
    """Keyword sets over time; the latest version not after a post's day applies."""

    versions: tuple[KeywordSet, ...]

    def __post_init__(self):
        if not self.versions:
            raise ValueError("timeline has no versions")
        dates = [v.version_date for v in self.versions]
        if any(a >= b for a, b in zip(dates, dates[1:])):
            raise ValueError("keyword versions must have strictly increasing dates")

    def active_at(self, ts: datetime) -> Optional[KeywordSet]:
        day = ts.astimezone(timezone.utc).date()
        active = None
        for version in self.versions:
            if version.version_date <= day:
                active = version
            else:
                break
        return active

    @property
    def latest(self) -> KeywordSet:
        return self.versions[-1]

    @property
    def version_label(self) -> str:
        d = self.latest.version_date
        return "initial" if d == date.min else d.isoformat()


def load_keywords(path) -> KeywordTimeline:
    """Load a keyword file.

    One keyword per line, ``#`` starts a comment only when followed by a space
    or at line start before a space (so ``#novaccinoainovax`` is a keyword).
    A ``[YYYY-MM-DD]`` header starts a new version that adds to the previous one.
    """
    versions: list[KeywordSet] = []
    current_date = date.min
    words: set[str] = set()
    pending: set[str] = set()

    def close():
        if pending or not versions:
            words.update(pending)
            if words:
                versions.append(KeywordSet(frozenset(words), current_date))
        pending.clear()

    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("# ") or line == "#":
                continue
            if line.startswith("[") and line.endswith("]"):
                close()
                try:
                    current_date = date.fromisoformat(line[1:-1].strip())
                except ValueError:
                    raise DataError(f"{path}:{lineno}: bad version header {line!r}") from None
                continue
            kw = normalize_text(line).lstrip("#")
            if not tokenize(kw):
                raise DataError(f"{path}:{lineno}: empty keyword")
            pending.add(kw)
    close()
    if not versions:
        raise DataError(f"{path}: no keywords")
    return KeywordTimeline(tuple(versions))


def default_keywords() -> KeywordTimeline:
    return KeywordTimeline((KeywordSet(frozenset(DEFAULT_KEYWORDS)),))


def match_keywords(text: str, ks: KeywordSet) -> list[str]:
    """Keywords occurring as whole tokens (or contiguous token runs) in ``text``.

    Returned in order of first occurrence, without duplicates.
    """
    tokens = tokenize(text)
    index = ks._index  # type: ignore[attr-defined]
    found: list[str] = []
    seen = set()
    for i, tok in enumerate(tokens):
        for kw, kw_tokens in index.get(tok, ()):
            if kw in seen:
                continue
            if tuple(tokens[i : i + len(kw_tokens)]) == kw_tokens:
                seen.add(kw)
                found.append(kw)
    return found


@dataclass
class StreamCounter:
    passed: int = 0
    dropped: int = 0


def filter_stream(
    posts: Iterable[Post],
    keywords: Union[KeywordSet, KeywordTimeline],
    counter: Optional[StreamCounter] = None,
) -> Iterator[Post]:
    """Yield the posts whose text matches the keyword set active at their timestamp."""
    if counter is None:
        counter = StreamCounter()
    for post in posts:
        if isinstance(keywords, KeywordTimeline):
            ks = keywords.active_at(post.timestamp)
        else:
            ks = keywords
        if ks is not None and match_keywords(post.text, ks):
            counter.passed += 1
            yield post
        else:
            counter.dropped += 1


@dataclass
class ParseStats:
    parsed: int = 0
    rejected: int = 0
    reasons: Counter = field(default_factory=Counter)

    def reject(self, reason: str) -> None:
        self.rejected += 1
        self.reasons[reason] += 1


def open_feed(path):
    try:
        return open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise IngestError(f"cannot read feed {path}: {exc}") from exc


def _twitter_time(value) -> datetime:
    if not isinstance(value, str):
        raise ValueError("created_at missing")
    try:
        return parse_timestamp(value)
    except ValueError:
        return datetime.strptime(value, _TWITTER_DATE).astimezone(timezone.utc)


def _entity_urls(record: dict) -> Optional[list[str]]:
    if "entities" in record:
        items = (record.get("entities") or {}).get("urls")
    else:
        items = record.get("urls")
    if items is None:
        return None
    urls = []
    for item in items:
        if isinstance(item, str):
            urls.append(item)
        elif isinstance(item, dict):
            u = item.get("expanded_url") or item.get("url")
            if u:
                urls.append(u)
    return urls


def _twitter_post(record: dict) -> Post:
    post_id = record.get("id_str") or record.get("id")
    if post_id is None or post_id == "":
        raise ValueError("id missing")
    user = record.get("user")
    if not isinstance(user, dict) or user.get("id") in (None, ""):
        raise ValueError("user.id missing")
    text = record.get("full_text", record.get("text"))
    if not isinstance(text, str):
        raise ValueError("text missing")
    urls = _entity_urls(record)
    if urls is None:
        urls = extract_urls(text)
    location = user.get("location")
    return Post(
        platform=Platform.TWITTER,
        post_id=str(post_id),
        timestamp=_twitter_time(record.get("created_at")),
        text=text,
        author_id=str(user["id"]),
        author_location=location if isinstance(location, str) and location.strip() else None,
        share_weight=1,
        urls=tuple(urls),
    )


def parse_twitter_feed(
    lines: Iterable[str],
    stats: Optional[ParseStats] = None,
    window: Optional[CollectionWindow] = None,
) -> Iterator[Post]:
    """Parse newline-delimited JSON statuses into posts.

    Malformed records are skipped and tallied in ``stats``.
    """
    if stats is None:
        stats = ParseStats()
    seen: set[str] = set()
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            if not isinstance(record, dict):
                raise ValueError("record is not an object")
            post = _twitter_post(record)
        except (ValueError, TypeError, KeyError) as exc:
            logger.debug("twitter line %d rejected: %s", lineno, exc)
            stats.reject(type(exc).__name__ if not str(exc) else str(exc))
            continue
        if window is not None and post.timestamp not in window:
            stats.reject("outside collection window")
            continue
        if post.post_id in seen:
            stats.reject("duplicate id")
            continue
        seen.add(post.post_id)
        stats.parsed += 1
        yield post


def _share_count(raw) -> int:
    if raw is None or str(raw).strip() == "":
        return 0
    value = int(float(str(raw).replace(",", "")))
    if value < 0:
        raise ValueError("negative share_count")
    return value


def _facebook_post(row: dict, lineno: int) -> Post:
    account = (row.get("account_id") or "").strip()
    if not account:
        raise ValueError("account_id missing")
    raw_date = (row.get("date") or "").strip()
    if not raw_date:
        raise ValueError("date missing")
    message = row.get("message") or ""
    link = (row.get("link") or "").strip()
    urls: list[str] = []
    if link:
        urls.append(link)
    for u in extract_urls(message):
        if u not in urls:
            urls.append(u)
    post_id = (row.get("post_id") or "").strip() or f"{account}:{lineno}"
    return Post(
        platform=Platform.FACEBOOK,
        post_id=post_id,
        timestamp=parse_timestamp(raw_date),
        text=message,
        author_id=account,
        author_location=None,
        share_weight=_share_count(row.get("share_count")),
        urls=tuple(urls),
    )


def parse_facebook_feed(
    lines: Iterable[str],
    stats: Optional[ParseStats] = None,
    window: Optional[CollectionWindow] = None,
) -> Iterator[Post]:
    """Parse a CSV export of page/group posts; ``share_count`` becomes the weight."""
    if stats is None:
        stats = ParseStats()
    reader = csv.DictReader(lines)
    seen: set[str] = set()
    for row in reader:
        lineno = reader.line_num
        try:
            if None in row:
                raise ValueError("too many columns")
            post = _facebook_post(row, lineno)
        except (ValueError, TypeError) as exc:
            logger.debug("facebook line %d rejected: %s", lineno, exc)
            stats.reject(str(exc) or type(exc).__name__)
            continue
        if window is not None and post.timestamp not in window:
            stats.reject("outside collection window")
            continue
        if post.post_id in seen:
            stats.reject("duplicate id")
            continue
        seen.add(post.post_id)
        stats.parsed += 1
        yield post


def parse_feed(path, platform: Platform, stats=None, window=None) -> list[Post]:
    """Read a whole feed file; raises IngestError if the file cannot be opened."""
    parser = parse_twitter_feed if platform is Platform.TWITTER else parse_facebook_feed
    with open_feed(path) as fh:
        try:
            return list(parser(fh, stats, window))
        except UnicodeDecodeError as exc:
            raise IngestError(f"cannot decode feed {path}: {exc}") from exc
