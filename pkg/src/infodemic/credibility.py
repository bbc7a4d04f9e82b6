"""URL extraction, registrable-domain reduction and source credibility labels."""

from __future__ import annotations

import csv
import ipaddress
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Optional
from urllib.parse import parse_qs, urlsplit

from .core import CredibilityClass, Platform, Post, SourceList, check_disjoint, data_path

_URL = re.compile(r"https?://[^\s<>\"'`…]+", re.IGNORECASE)
_TRAILING = ".,;:!?*"
_BRACKETS = {")": "(", "]": "[", "}": "{"}
_VIDEO_ID = re.compile(r"^[A-Za-z0-9_-]{11}$")
YOUTUBE_DOMAINS = frozenset({"youtube.com", "youtu.be", "youtube-nocookie.com"})


class UrlParseError(ValueError):
    pass


def _trim(candidate: str) -> str:
    while candidate:
        last = candidate[-1]
        if last in _TRAILING:
            candidate = candidate[:-1]
        elif last in _BRACKETS and candidate.count(last) > candidate.count(_BRACKETS[last]):
            candidate = candidate[:-1]
        else:
            break
    return candidate


def extract_urls(text: str) -> list[str]:
    """Return http(s) URLs found in ``text``, in order, duplicates kept.

    Trailing sentence punctuation and unbalanced closing brackets are not part
    of the URL.
    """
    urls = []
    for m in _URL.finditer(text):
        candidate = _trim(m.group(0))
        try:
            if urlsplit(candidate).hostname:
                urls.append(candidate)
        except ValueError:
            continue
    return urls


class PublicSuffixList:
    """Matcher for the public suffix list rule format (normal, ``*.`` and ``!``)."""

    def __init__(self, rules: Iterable[str]):
        self.exact: set[str] = set()
        self.wildcard: set[str] = set()
        self.exception: set[str] = set()
        for raw in rules:
            line = raw.strip()
            if not line or line.startswith("//"):
                continue
            rule = line.split()[0].lower()
            for form in _rule_forms(rule):
                if form.startswith("!"):
                    self.exception.add(form[1:])
                elif form.startswith("*."):
                    self.wildcard.add(form[2:])
                else:
                    self.exact.add(form)

    @classmethod
    def bundled(cls) -> "PublicSuffixList":
        return _bundled_psl()

    def public_suffix(self, host: str) -> str:
        labels = host.split(".")
        n = len(labels)
        for i in range(n):
            if ".".join(labels[i:]) in self.exception:
                return ".".join(labels[i + 1 :])
        for i in range(n):
            if ".".join(labels[i:]) in self.exact:
                return ".".join(labels[i:])
            if i + 1 < n and ".".join(labels[i + 1 :]) in self.wildcard:
                return ".".join(labels[i:])
        return labels[-1]

    def registrable_domain(self, host: str) -> str:
        """Public suffix plus one label; a host that is itself a suffix is returned as is."""
        suffix = self.public_suffix(host)
        if host == suffix:
            return host
        head = host[: -len(suffix) - 1]
        return head.rsplit(".", 1)[-1] + "." + suffix


def _rule_forms(rule: str) -> list[str]:
    forms = [rule]
    try:
        prefix = rule[0] if rule[0] == "!" else ""
        body = rule[len(prefix) :]
        ascii_form = prefix + ".".join(
            lbl if lbl == "*" else lbl.encode("idna").decode("ascii") for lbl in body.split(".")
        )
        if ascii_form != rule:
            forms.append(ascii_form)
    except UnicodeError:
        pass
    return forms


@lru_cache(maxsize=1)
def _bundled_psl() -> PublicSuffixList:
    with open(data_path("public_suffix_list.dat"), encoding="utf-8") as fh:
        return PublicSuffixList(fh)


def url_host(url: str) -> str:
    try:
        parts = urlsplit(url.strip())
        host = parts.hostname
    except ValueError as exc:
        raise UrlParseError(f"unparseable URL {url!r}: {exc}") from None
    if parts.scheme.lower() not in ("http", "https") or not host:
        raise UrlParseError(f"not an http(s) URL: {url!r}")
    host = host.rstrip(".")
    if not host or ".." in host:
        raise UrlParseError(f"bad host in {url!r}")
    return host


def canonical_domain(url: str, psl: Optional[PublicSuffixList] = None) -> str:
    """Lowercase registrable domain of ``url``.

    >>> canonical_domain("https://www.imolaoggi.it/2021/01/x")
    'imolaoggi.it'
    """
    host = url_host(url)
    try:
        ipaddress.ip_address(host)
        return host
    except ValueError:
        pass
    if host.startswith("www."):
        host = host[4:]
    return (psl or _bundled_psl()).registrable_domain(host)


def extract_youtube_id(url: str) -> Optional[str]:
    try:
        parts = urlsplit(url.strip())
        host = (parts.hostname or "").rstrip(".")
    except ValueError:
        return None
    for prefix in ("www.", "m.", "music."):
        if host.startswith(prefix):
            host = host[len(prefix) :]
            break
    segments = [s for s in parts.path.split("/") if s]
    candidate = None
    if host == "youtu.be":
        candidate = segments[0] if segments else None
    elif host in ("youtube.com", "youtube-nocookie.com"):
        if segments[:1] == ["watch"]:
            values = parse_qs(parts.query).get("v")
            candidate = values[0] if values else None
        elif len(segments) >= 2 and segments[0] in ("embed", "shorts"):
            candidate = segments[1]
    if candidate and _VIDEO_ID.match(candidate):
        return candidate
    return None


@dataclass(frozen=True)
class ClassifiedUrl:
    raw_url: str
    canonical_domain: str
    cls: CredibilityClass
    is_youtube: bool = False
    youtube_id: Optional[str] = None
    parse_error: Optional[str] = None


def load_redirect_map(path) -> dict[str, str]:
    mapping = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.reader(fh):
            if len(row) < 2 or not row[0].strip():
                continue
            short, expanded = row[0].strip(), row[1].strip()
            if (short, expanded) == ("short_url", "expanded_url"):
                continue
            mapping[short] = expanded
    return mapping


def classify_url(
    url: str,
    low: SourceList,
    high: SourceList,
    redirects: Optional[Mapping[str, str]] = None,
    psl: Optional[PublicSuffixList] = None,
) -> ClassifiedUrl:
    target = url
    if redirects:
        target = redirects.get(url) or redirects.get(url.rstrip("/")) or url
    try:
        domain = canonical_domain(target, psl)
    except UrlParseError as exc:
        return ClassifiedUrl(url, "", CredibilityClass.UNKNOWN, parse_error=str(exc))
    if domain in low:
        cls = CredibilityClass.LOW
    elif domain in high:
        cls = CredibilityClass.HIGH
    else:
        cls = CredibilityClass.UNKNOWN
    is_youtube = domain in YOUTUBE_DOMAINS
    return ClassifiedUrl(
        raw_url=url,
        canonical_domain=domain,
        cls=cls,
        is_youtube=is_youtube,
        youtube_id=extract_youtube_id(target) if is_youtube else None,
    )


@dataclass(frozen=True)
class ClassifiedPost:
    post: Post
    urls: tuple[ClassifiedUrl, ...]

    @property
    def platform(self) -> Platform:
        return self.post.platform

    @property
    def weight(self) -> int:
        return self.post.share_weight

    def domains(self, cls: CredibilityClass) -> set[str]:
        return {u.canonical_domain for u in self.urls if u.cls is cls}

    @property
    def has_low(self) -> bool:
        return any(u.cls is CredibilityClass.LOW for u in self.urls)

    @property
    def has_high(self) -> bool:
        return any(u.cls is CredibilityClass.HIGH for u in self.urls)

    @property
    def youtube_ids(self) -> set[str]:
        return {u.youtube_id for u in self.urls if u.youtube_id}


class SourceClassifier:
    """Classifies URLs against a low/high list pair, memoizing per raw URL."""

    def __init__(self, low: SourceList, high: SourceList, redirects=None, psl=None):
        check_disjoint(low, high)
        self.low = low
        self.high = high
        self.redirects = dict(redirects or {})
        self.psl = psl or _bundled_psl()
        self._cache: dict[str, ClassifiedUrl] = {}
        self.parse_failures = 0

    def classify(self, url: str) -> ClassifiedUrl:
        hit = self._cache.get(url)
        if hit is None:
            hit = classify_url(url, self.low, self.high, self.redirects, self.psl)
            if hit.parse_error:
                self.parse_failures += 1
            self._cache[url] = hit
        return hit

    def classify_post(self, post: Post) -> ClassifiedPost:
        return ClassifiedPost(post, tuple(self.classify(u) for u in post.urls))

    def classify_posts(self, posts: Iterable[Post]) -> list[ClassifiedPost]:
        return [self.classify_post(p) for p in posts]
