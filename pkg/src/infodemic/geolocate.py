"""Naive gazetteer geolocation of free-text profile locations.

A location string is normalized and tokenized; every gazetteer name that occurs
as a contiguous run of tokens is a candidate, and the longest candidate (in
characters) wins. Equal lengths fall back to Region > Province > Municipality,
then to alphabetical order, so the result does not depend on load order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .core import DataError, GazetteerEntry, PlaceKind, Post
from .ingest import tokenize

_KIND_RANK = {PlaceKind.REGION: 0, PlaceKind.PROVINCE: 1, PlaceKind.MUNICIPALITY: 2}


@dataclass(frozen=True)
class GeoResolution:
    user_id: str
    matched_name: Optional[str] = None
    matched_kind: Optional[PlaceKind] = None
    region_code: Optional[str] = None

    @property
    def resolved(self) -> bool:
        return self.region_code is not None


def selection_key(entry: GazetteerEntry):
    """Sort key under which the first candidate is the one to keep."""
    return (-len(entry.name_normalized), _KIND_RANK[entry.kind], entry.name_normalized)


class Gazetteer:
    def __init__(self, entries: Sequence[GazetteerEntry] = ()):
        self._by_tokens: dict[tuple[str, ...], list[GazetteerEntry]] = {}
        self._first: dict[str, set[int]] = {}
        seen: set[tuple[str, PlaceKind]] = set()
        self.entries: list[GazetteerEntry] = []
        for entry in entries:
            key = (entry.name_normalized, entry.kind)
            if key in seen:
                raise DataError(f"duplicate gazetteer entry {entry.name_normalized!r} ({entry.kind.value})")
            seen.add(key)
            toks = tuple(tokenize(entry.name_normalized))
            if not toks:
                raise DataError(f"gazetteer name has no tokens: {entry.name_normalized!r}")
            self._by_tokens.setdefault(toks, []).append(entry)
            self._first.setdefault(toks[0], set()).add(len(toks))
            self.entries.append(entry)

    def __len__(self) -> int:
        return len(self.entries)

    def regions(self) -> list[GazetteerEntry]:
        return [e for e in self.entries if e.kind is PlaceKind.REGION]

    def candidates(self, location: str) -> list[GazetteerEntry]:
        """Every entry whose name occurs as a contiguous token run in ``location``."""
        tokens = tokenize(location)
        found = []
        for i, tok in enumerate(tokens):
            for n in sorted(self._first.get(tok, ())):
                hits = self._by_tokens.get(tuple(tokens[i : i + n]))
                if hits:
                    found.extend(hits)
        return found


def build_gazetteer(entries: Iterable[GazetteerEntry]) -> Gazetteer:
    return Gazetteer(list(entries))


def resolve_location(location: Optional[str], g: Gazetteer, user_id: str = "") -> GeoResolution:
    if not location:
        return GeoResolution(user_id)
    candidates = g.candidates(location)
    if not candidates:
        return GeoResolution(user_id)
    best = min(candidates, key=selection_key)
    return GeoResolution(user_id, best.name_normalized, best.kind, best.region_code)


def geolocate_users(posts: Iterable[Post], g: Gazetteer) -> dict[str, GeoResolution]:
    """Resolve each author once, from the location on their most recent post.

    Authors whose latest location is empty are left out.
    """
    latest: dict[str, Post] = {}
    for post in posts:
        prev = latest.get(post.author_id)
        if prev is None or (post.timestamp, post.post_id) > (prev.timestamp, prev.post_id):
            latest[post.author_id] = post
    out = {}
    for user_id in sorted(latest):
        loc = latest[user_id].author_location
        if loc and loc.strip():
            out[user_id] = resolve_location(loc, g, user_id)
    return out
