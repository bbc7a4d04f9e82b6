"""Aggregates over classified posts: volumes, credibility fractions, sources, regions.

Weighting follows one rule throughout: a tweet counts 1, a Facebook post counts
its share count.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from datetime import date
from typing import Iterable, Mapping, Optional, Sequence

from .core import CollectionWindow, CredibilityClass, DailyStat, Platform, SourceList, VaccineRecord
from .credibility import ClassifiedPost
from .geolocate import Gazetteer, GeoResolution
from .stats import Correlation, pearson, spearman

logger = logging.getLogger(__name__)

ALL_LOW = "ALL_LOW_CREDIBILITY"


class EmptySeriesError(ValueError):
    pass


def _day_range(days: Iterable[date]) -> list[date]:
    days = sorted(set(days))
    if not days:
        return []
    return CollectionWindow(days[0], days[-1]).days()


def daily_volume(
    posts: Iterable[ClassifiedPost], window: Optional[CollectionWindow] = None
) -> dict[Platform, list[DailyStat]]:
    """Per-platform daily volume and low/high counts.

    Every day of ``window`` (or of the span covered by the posts) appears in
    both series, with zeros where nothing was posted.
    """
    acc: dict[tuple[Platform, date], list[int]] = defaultdict(lambda: [0, 0, 0])
    seen_days = []
    for cp in posts:
        day = cp.post.day
        if window is not None and not (window.start <= day <= window.end):
            continue
        seen_days.append(day)
        w = cp.weight
        slot = acc[(cp.platform, day)]
        slot[0] += w
        if cp.has_low:
            slot[1] += w
        if cp.has_high:
            slot[2] += w
    days = window.days() if window is not None else _day_range(seen_days)
    out = {}
    for platform in Platform:
        series = []
        for day in days:
            v, lo, hi = acc.get((platform, day), (0, 0, 0))
            series.append(DailyStat(day, platform, v, lo, hi))
        out[platform] = series
    return out


@dataclass(frozen=True)
class FractionPoint:
    date: date
    low_fraction: float
    high_fraction: float


@dataclass(frozen=True)
class FractionSeries:
    platform: Platform
    points: tuple[FractionPoint, ...]

    def __post_init__(self):
        for a, b in zip(self.points, self.points[1:]):
            if a.date >= b.date:
                raise ValueError("fraction series dates must be strictly increasing")


def credibility_fractions(stats: Sequence[DailyStat]) -> FractionSeries:
    """Daily low/high share of volume; a day with no volume is (0, 0)."""
    if not stats:
        return FractionSeries(Platform.TWITTER, ())
    platform = stats[0].platform
    points = []
    for s in stats:
        if s.platform is not platform:
            raise ValueError("mixed platforms in one series")
        if s.volume == 0:
            points.append(FractionPoint(s.date, 0.0, 0.0))
        else:
            points.append(FractionPoint(s.date, s.low_count / s.volume, s.high_count / s.volume))
    return FractionSeries(platform, tuple(points))


def mean_daily_fraction(series: FractionSeries, cls: CredibilityClass) -> float:
    """Unweighted mean over days."""
    if not series.points:
        raise EmptySeriesError("mean of an empty fraction series")
    if cls is CredibilityClass.LOW:
        values = [p.low_fraction for p in series.points]
    elif cls is CredibilityClass.HIGH:
        values = [p.high_fraction for p in series.points]
    else:
        raise ValueError("fractions exist for low and high only")
    return sum(values) / len(values)


@dataclass(frozen=True)
class LeaderboardEntry:
    name: str
    cls: CredibilityClass
    twitter_shares: int
    facebook_shares: int

    @property
    def is_pseudo(self) -> bool:
        return self.name == ALL_LOW

    def shares(self, platform: Platform) -> int:
        return self.twitter_shares if platform is Platform.TWITTER else self.facebook_shares


def domain_tallies(posts: Iterable[ClassifiedPost], sources: SourceList) -> dict[str, list[int]]:
    """domain -> [tweets linking it, Facebook shares of posts linking it].

    A post linking the same domain twice counts once for it.
    """
    tallies: dict[str, list[int]] = {}
    for cp in posts:
        domains = {u.canonical_domain for u in cp.urls if u.canonical_domain in sources}
        for d in domains:
            slot = tallies.setdefault(d, [0, 0])
            if cp.platform is Platform.TWITTER:
                slot[0] += 1
            else:
                slot[1] += cp.weight
    return tallies


def source_entries(posts: Iterable[ClassifiedPost], low: SourceList, high: SourceList) -> list[LeaderboardEntry]:
    """Tallies for every linked Low and High domain plus the all-low pseudo-entry."""
    posts = list(posts)
    entries = []
    low_tw = low_fb = 0
    for d, (tw, fb) in sorted(domain_tallies(posts, low).items()):
        entries.append(LeaderboardEntry(d, CredibilityClass.LOW, tw, fb))
        low_tw += tw
        low_fb += fb
    for d, (tw, fb) in sorted(domain_tallies(posts, high).items()):
        entries.append(LeaderboardEntry(d, CredibilityClass.HIGH, tw, fb))
    entries.append(LeaderboardEntry(ALL_LOW, CredibilityClass.LOW, low_tw, low_fb))
    return entries


def rank_leaderboard(entries: Iterable[LeaderboardEntry], platform: Platform, k: int) -> list[LeaderboardEntry]:
    """Top ``k`` domains by the platform's shares, with the pseudo-entry ranked among them."""
    if k < 1:
        raise ValueError("k must be at least 1")
    entries = list(entries)
    key = lambda e: (-e.shares(platform), e.name)  # noqa: E731
    domains = sorted((e for e in entries if not e.is_pseudo), key=key)[:k]
    pseudo = [e for e in entries if e.is_pseudo]
    return sorted(domains + pseudo, key=key)


def build_leaderboard(
    posts: Iterable[ClassifiedPost], low: SourceList, high: SourceList, k: int, platform: Platform
) -> list[LeaderboardEntry]:
    return rank_leaderboard(source_entries(posts, low, high), platform, k)


def cross_platform_source_correlation(posts: Iterable[ClassifiedPost], sources: SourceList) -> Correlation:
    """Spearman correlation of per-domain Twitter and Facebook volumes.

    Domains linked on only one platform enter with 0 on the other.
    """
    tallies = domain_tallies(posts, sources)
    domains = sorted(d for d, (tw, fb) in tallies.items() if tw or fb)
    if len(domains) < 3:
        raise ValueError(f"need at least 3 linked domains, got {len(domains)}")
    return spearman([tallies[d][0] for d in domains], [tallies[d][1] for d in domains])


@dataclass(frozen=True)
class RegionStat:
    region_code: str
    users_located: int
    mean_user_low_fraction: Optional[float]
    total_doses: int
    population: int
    doses_per_million: float


def region_stats(
    resolutions: Mapping[str, GeoResolution],
    posts: Iterable[ClassifiedPost],
    vaccine_records: Iterable[VaccineRecord],
    gazetteer: Gazetteer,
    window: Optional[CollectionWindow] = None,
    pooled: bool = False,
) -> list[RegionStat]:
    """Join located users, their low-credibility tweeting and doses per region.

    By default each located user's fraction of low-credibility tweets is
    averaged (users without tweets are skipped); ``pooled`` instead divides
    the region's low tweets by all its tweets.
    """
    per_user: dict[str, list[int]] = defaultdict(lambda: [0, 0])
    for cp in posts:
        if cp.platform is not Platform.TWITTER:
            continue
        slot = per_user[cp.post.author_id]
        slot[0] += 1
        if cp.has_low:
            slot[1] += 1

    doses: dict[str, int] = defaultdict(int)
    for rec in vaccine_records:
        if window is not None and not (window.start <= rec.date <= window.end):
            continue
        doses[rec.region_code] += rec.doses_administered

    users_by_region: dict[str, list[str]] = defaultdict(list)
    for user_id, res in resolutions.items():
        if res.region_code is not None:
            users_by_region[res.region_code].append(user_id)

    out = []
    for region in sorted(gazetteer.regions(), key=lambda e: e.region_code):
        code = region.region_code
        if region.population is None or region.population == 0:
            logger.warning("region %s has no population; excluded from region stats", code)
            continue
        users = users_by_region.get(code, [])
        active = [per_user[u] for u in users if per_user.get(u, (0, 0))[0] > 0]
        if not active:
            mean = None
        elif pooled:
            mean = sum(lo for _, lo in active) / sum(n for n, _ in active)
        else:
            mean = sum(lo / n for n, lo in active) / len(active)
        total = doses.get(code, 0)
        out.append(
            RegionStat(
                region_code=code,
                users_located=len(users),
                mean_user_low_fraction=mean,
                total_doses=total,
                population=region.population,
                doses_per_million=total * 1e6 / region.population,
            )
        )
    return out


def users_vs_population_correlation(
    resolutions: Mapping[str, GeoResolution], gazetteer: Gazetteer
) -> Correlation:
    counts: dict[str, int] = defaultdict(int)
    for res in resolutions.values():
        if res.region_code is not None:
            counts[res.region_code] += 1
    pairs = [
        (counts[r.region_code], r.population)
        for r in sorted(gazetteer.regions(), key=lambda e: e.region_code)
        if r.population and counts.get(r.region_code)
    ]
    if len(pairs) < 3:
        raise ValueError(f"need at least 3 regions with located users, got {len(pairs)}")
    return pearson([u for u, _ in pairs], [p for _, p in pairs])
