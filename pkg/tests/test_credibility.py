import csv
import string

import pytest
from hypothesis import given
from hypothesis import strategies as st

from infodemic.core import CredibilityClass, DataError, Platform, Post, SourceList, data_path
from infodemic.credibility import (
    PublicSuffixList,
    SourceClassifier,
    canonical_domain,
    classify_url,
    extract_urls,
    extract_youtube_id,
    load_redirect_map,
)

LOW = SourceList(CredibilityClass.LOW, frozenset({"imolaoggi.it", "byoblu.it"}))
HIGH = SourceList(CredibilityClass.HIGH, frozenset({"ansa.it", "repubblica.it"}))


@pytest.mark.parametrize(
    "text,expected",
    [
        ("leggi https://www.byoblu.it/a?x=1 ora", ["https://www.byoblu.it/a?x=1"]),
        ("nessun link", []),
        ("a http://a.it http://a.it", ["http://a.it", "http://a.it"]),
        ("(vedi https://ansa.it/x).", ["https://ansa.it/x"]),
        ("https://it.wikipedia.org/wiki/Vaccino_(medicina), ok", ["https://it.wikipedia.org/wiki/Vaccino_(medicina)"]),
    ],
)
def test_extract_urls(text, expected):
    assert extract_urls(text) == expected


@pytest.mark.parametrize(
    "url,expected",
    [
        ("https://www.imolaoggi.it/2021/01/x", "imolaoggi.it"),
        ("HTTP://Example.COM:8080/p?q=1", "example.com"),
        ("https://news.blogspot.com/x", "news.blogspot.com"),
        ("https://edition.cnn.com/", "cnn.com"),
        ("https://www.comune.roma.it/", "comune.roma.it"),
        ("http://192.168.0.1/x", "192.168.0.1"),
    ],
)
def test_canonical_domain(url, expected):
    assert canonical_domain(url) == expected


def test_blogspot_rule_is_in_bundled_table():
    lines = {l.strip() for l in data_path("public_suffix_list.dat").read_text(encoding="utf-8").splitlines()}
    assert "blogspot.com" in lines


def test_psl_rule_kinds():
    psl = PublicSuffixList(["com", "*.kawasaki.jp", "!city.kawasaki.jp", "jp", "// comment"])
    assert psl.registrable_domain("a.b.example.com") == "example.com"
    assert psl.registrable_domain("x.foo.kawasaki.jp") == "x.foo.kawasaki.jp"
    assert psl.registrable_domain("www.city.kawasaki.jp") == "city.kawasaki.jp"
    assert psl.registrable_domain("com") == "com"
    assert psl.registrable_domain("example.unknowntld") == "example.unknowntld"


def test_classify_url_examples():
    assert classify_url("https://www.imolaoggi.it/x", LOW, HIGH).cls is CredibilityClass.LOW
    assert classify_url("https://www.ansa.it/x", LOW, HIGH).cls is CredibilityClass.HIGH
    assert classify_url("https://example.org/x", LOW, HIGH).cls is CredibilityClass.UNKNOWN
    yt = classify_url("https://www.youtube.com/watch?v=kHGtn_vnrJ8", LOW, HIGH)
    assert yt.is_youtube and yt.youtube_id == "kHGtn_vnrJ8" and yt.cls is CredibilityClass.UNKNOWN


def test_unparseable_url_is_unknown_and_counted():
    clf = SourceClassifier(LOW, HIGH)
    res = clf.classify("https://[::1/broken")
    assert res.cls is CredibilityClass.UNKNOWN
    assert res.parse_error
    assert clf.parse_failures == 1


def test_redirect_map(tmp_path):
    p = tmp_path / "r.csv"
    p.write_text("short_url,expanded_url\nhttps://t.co/abc,https://www.byoblu.it/v\n")
    redirects = load_redirect_map(p)
    assert classify_url("https://t.co/abc", LOW, HIGH, redirects).cls is CredibilityClass.LOW
    unmapped = classify_url("https://t.co/zzz", LOW, HIGH, redirects)
    assert (unmapped.canonical_domain, unmapped.cls) == ("t.co", CredibilityClass.UNKNOWN)


def test_classifier_rejects_overlap():
    with pytest.raises(DataError, match="byoblu.it"):
        SourceClassifier(LOW, SourceList(CredibilityClass.HIGH, frozenset({"byoblu.it"})))


@pytest.mark.parametrize(
    "url,expected",
    [
        ("https://www.youtube.com/watch?v=kHGtn_vnrJ8", "kHGtn_vnrJ8"),
        ("https://youtu.be/kHGtn_vnrJ8", "kHGtn_vnrJ8"),
        ("https://m.youtube.com/watch?feature=share&v=kHGtn_vnrJ8", "kHGtn_vnrJ8"),
        ("https://www.youtube.com/shorts/kHGtn_vnrJ8", "kHGtn_vnrJ8"),
        ("https://www.youtube.com/embed/kHGtn_vnrJ8?start=3", "kHGtn_vnrJ8"),
        ("https://www.youtube.com/channel/UCx", None),
        ("https://youtu.be/short", None),
        ("https://example.com/watch?v=kHGtn_vnrJ8", None),
    ],
)
def test_youtube_ids(url, expected):
    assert extract_youtube_id(url) == expected


ID_ALPHABET = string.ascii_letters + string.digits + "_-"


@given(st.text(max_size=30))
def test_youtube_id_shape(tail):
    for url in (f"https://youtu.be/{tail}", f"https://www.youtube.com/watch?v={tail}"):
        vid = extract_youtube_id(url)
        assert vid is None or (len(vid) == 11 and set(vid) <= set(ID_ALPHABET))


@given(
    st.lists(st.from_regex(r"[a-z0-9]([a-z0-9-]{0,8}[a-z0-9])?", fullmatch=True), min_size=1, max_size=4),
    st.sampled_from(["it", "com", "co.uk", "blogspot.com", "org"]),
)
def test_canonical_domain_idempotent(labels, suffix):
    url = "https://" + ".".join(labels) + "." + suffix + "/x"
    once = canonical_domain(url)
    assert canonical_domain("https://" + once) == once
    assert not once.startswith("www.") and "/" not in once and ":" not in once


def test_golden_file(fixture_dir):
    from infodemic.core import load_source_lists

    low, high = load_source_lists(fixture_dir / "low.txt", fixture_dir / "high.txt")
    redirects = load_redirect_map(fixture_dir / "redirects.csv")
    clf = SourceClassifier(low, high, redirects)
    with open(fixture_dir / "url_golden.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) > 1000
    mismatches = []
    for row in rows:
        got = clf.classify(row["url"])
        if (got.canonical_domain, got.cls.value) != (row["canonical_domain"], row["class"]):
            mismatches.append((row, got))
        # deterministic and never both classes
        assert classify_url(row["url"], low, high, redirects) == got
    assert mismatches == []


def test_classified_post_helpers():
    from datetime import datetime, timezone

    post = Post(
        Platform.FACEBOOK,
        "1",
        datetime(2021, 1, 1, tzinfo=timezone.utc),
        "x",
        "p",
        share_weight=7,
        urls=("https://byoblu.it/a", "https://youtu.be/kHGtn_vnrJ8", "https://ansa.it/b"),
    )
    cp = SourceClassifier(LOW, HIGH).classify_post(post)
    assert cp.has_low and cp.has_high
    assert cp.domains(CredibilityClass.LOW) == {"byoblu.it"}
    assert cp.youtube_ids == {"kHGtn_vnrJ8"}
    assert cp.weight == 7
