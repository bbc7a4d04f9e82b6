"""Shared domain types, loaders and text normalization."""

from __future__ import annotations

import csv
import enum
import json
import re
import unicodedata
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from pathlib import Path
from typing import Iterable, Iterator, Optional


class Platform(str, enum.Enum):
    TWITTER = "twitter"
    FACEBOOK = "facebook"


class CredibilityClass(str, enum.Enum):
    LOW = "low"
    HIGH = "high"
    UNKNOWN = "unknown"


class PlaceKind(str, enum.Enum):
    MUNICIPALITY = "municipality"
    PROVINCE = "province"
    REGION = "region"


# Trentino-Alto Adige is one region; the open-data feed splits it into the two
# autonomous provinces (PAB, PAT), which load as aliases of TAA.
REGION_CODES = {
    "ABR": "Abruzzo",
    "BAS": "Basilicata",
    "CAL": "Calabria",
    "CAM": "Campania",
    "EMR": "Emilia-Romagna",
    "FVG": "Friuli-Venezia Giulia",
    "LAZ": "Lazio",
    "LIG": "Liguria",
    "LOM": "Lombardia",
    "MAR": "Marche",
    "MOL": "Molise",
    "PIE": "Piemonte",
    "PUG": "Puglia",
    "SAR": "Sardegna",
    "SIC": "Sicilia",
    "TAA": "Trentino-Alto Adige",
    "TOS": "Toscana",
    "UMB": "Umbria",
    "VDA": "Valle d'Aosta",
    "VEN": "Veneto",
}
REGION_ALIASES = {"PAB": "TAA", "PAT": "TAA"}


class DataError(ValueError):
    """Raised when an input file violates its schema or invariants."""


_WS = re.compile(r"\s+")


def normalize_text(s: str) -> str:
    """NFKD-decompose, drop combining marks, lowercase and collapse whitespace.

    >>> normalize_text("  FORLÌ  ")
    'forli'
    """
    decomposed = unicodedata.normalize("NFKD", s)
    stripped = "".join(c for c in decomposed if not unicodedata.combining(c))
    return _WS.sub(" ", stripped.lower()).strip()


def parse_timestamp(value: str) -> datetime:
    """Parse an ISO 8601 instant into an aware UTC datetime.

    Naive values are taken to be UTC already.
    """
    if not isinstance(value, str) or not value:
        raise ValueError(f"invalid timestamp: {value!r}")
    text = value.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        return ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class Post:
    platform: Platform
    post_id: str
    timestamp: datetime
    text: str
    author_id: str
    author_location: Optional[str] = None
    share_weight: int = 1
    urls: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.post_id:
            raise ValueError("post_id must be non-empty")
        if self.timestamp.tzinfo is None:
            raise ValueError("timestamp must be timezone-aware")
        minimum = 1 if self.platform is Platform.TWITTER else 0
        if self.share_weight < minimum:
            raise ValueError(
                f"share_weight {self.share_weight} below {minimum} for {self.platform.value}"
            )
        if not isinstance(self.urls, tuple):
            object.__setattr__(self, "urls", tuple(self.urls))

    @property
    def key(self) -> tuple[Platform, str]:
        return (self.platform, self.post_id)

    @property
    def day(self) -> date:
        return self.timestamp.astimezone(timezone.utc).date()

    def to_dict(self) -> dict:
        return {
            "platform": self.platform.value,
            "post_id": self.post_id,
            "timestamp": self.timestamp.astimezone(timezone.utc).isoformat(),
            "text": self.text,
            "author_id": self.author_id,
            "author_location": self.author_location,
            "share_weight": self.share_weight,
            "urls": list(self.urls),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Post":
        return cls(
            platform=Platform(d["platform"]),
            post_id=d["post_id"],
            timestamp=parse_timestamp(d["timestamp"]),
            text=d["text"],
            author_id=d["author_id"],
            author_location=d.get("author_location"),
            share_weight=int(d["share_weight"]),
            urls=tuple(d.get("urls", ())),
        )


def write_posts(posts: Iterable[Post], path) -> int:
    """Write posts as JSON lines; returns the number written."""
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for post in posts:
            fh.write(json.dumps(post.to_dict(), ensure_ascii=False, sort_keys=True))
            fh.write("\n")
            n += 1
    return n


def read_posts(path) -> Iterator[Post]:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                yield Post.from_dict(json.loads(line))


@dataclass(frozen=True)
class SourceList:
    label: CredibilityClass
    domains: frozenset[str]

    def __post_init__(self):
        if self.label is CredibilityClass.UNKNOWN:
            raise ValueError("a source list is labeled low or high")
        for d in self.domains:
            _check_bare_domain(d)

    def __contains__(self, domain: str) -> bool:
        return domain in self.domains

    def __len__(self) -> int:
        return len(self.domains)


def _check_bare_domain(d: str) -> None:
    if (
        not d
        or d != d.lower()
        or "/" in d
        or ":" in d
        or d.startswith("www.")
        or any(c.isspace() for c in d)
    ):
        raise DataError(f"not a bare registrable domain: {d!r}")


def read_domain_file(path, label: CredibilityClass) -> SourceList:
    domains = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                _check_bare_domain(line)
            except DataError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
            domains.add(line)
    return SourceList(label, frozenset(domains))


def check_disjoint(low: SourceList, high: SourceList) -> None:
    overlap = sorted(low.domains & high.domains)
    if overlap:
        raise DataError(
            f"domain {overlap[0]!r} is on both the low- and high-credibility lists"
            + (f" (and {len(overlap) - 1} more)" if len(overlap) > 1 else "")
        )


def load_source_lists(low_path, high_path) -> tuple[SourceList, SourceList]:
    low = read_domain_file(low_path, CredibilityClass.LOW)
    high = read_domain_file(high_path, CredibilityClass.HIGH)
    check_disjoint(low, high)
    return low, high


@dataclass(frozen=True)
class GazetteerEntry:
    name_normalized: str
    kind: PlaceKind
    region_code: str
    population: Optional[int] = None

    def __post_init__(self):
        if not self.name_normalized:
            raise ValueError("empty place name")
        if normalize_text(self.name_normalized) != self.name_normalized:
            raise ValueError(f"place name not normalized: {self.name_normalized!r}")
        if self.region_code not in REGION_CODES:
            raise ValueError(f"unknown region code {self.region_code!r}")
        if self.population is not None:
            if self.population < 0:
                raise ValueError("population must be non-negative")
            if self.kind is not PlaceKind.REGION:
                raise ValueError("population is carried by regions only")


def _region_code(raw: str) -> str:
    code = raw.strip().upper()
    return REGION_ALIASES.get(code, code)


def load_gazetteer_entries(path) -> list[GazetteerEntry]:
    """Read a gazetteer CSV (name, kind, region_code[, population])."""
    entries = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.DictReader(fh), 2):
            try:
                pop = (row.get("population") or "").strip()
                entries.append(
                    GazetteerEntry(
                        name_normalized=normalize_text(row["name"]),
                        kind=PlaceKind(row["kind"].strip().lower()),
                        region_code=_region_code(row["region_code"]),
                        population=int(pop) if pop else None,
                    )
                )
            except (KeyError, ValueError, AttributeError) as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
    return entries


@dataclass(frozen=True)
class DailyStat:
    date: date
    platform: Platform
    volume: int = 0
    low_count: int = 0
    high_count: int = 0

    def __post_init__(self):
        if self.volume < 0 or self.low_count > self.volume or self.high_count > self.volume:
            raise ValueError(f"inconsistent daily counts: {self}")


@dataclass(frozen=True)
class VaccineRecord:
    date: date
    region_code: str
    doses_administered: int

    def __post_init__(self):
        if self.doses_administered < 0:
            raise ValueError("doses must be non-negative")


def load_vaccine_records(path) -> list[VaccineRecord]:
    """Read dose records; provincial TAA rows are summed into the region."""
    seen: set[tuple[date, str]] = set()
    totals: dict[tuple[date, str], int] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.DictReader(fh), 2):
            try:
                day = date.fromisoformat(row["date"].strip()[:10])
                raw_code = row["region_code"].strip().upper()
                doses = int(row["doses_administered"])
            except (KeyError, ValueError, AttributeError) as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
            if (day, raw_code) in seen:
                raise DataError(f"{path}:{lineno}: duplicate record for {raw_code} on {day}")
            seen.add((day, raw_code))
            code = REGION_ALIASES.get(raw_code, raw_code)
            if code not in REGION_CODES:
                raise DataError(f"{path}:{lineno}: unknown region code {raw_code!r}")
            if doses < 0:
                raise DataError(f"{path}:{lineno}: negative doses")
            totals[(day, code)] = totals.get((day, code), 0) + doses
    return [VaccineRecord(d, c, n) for (d, c), n in sorted(totals.items())]


@dataclass(frozen=True)
class CollectionWindow:
    """Inclusive UTC day range posts must fall in."""

    start: date
    end: date

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError("window start after end")

    def __contains__(self, ts: datetime) -> bool:
        return self.start <= ts.astimezone(timezone.utc).date() <= self.end

    def days(self) -> list[date]:
        n = (self.end - self.start).days + 1
        return [self.start + timedelta(days=i) for i in range(n)]


def data_path(name: str) -> Path:
    return Path(__file__).with_name("data") / name
