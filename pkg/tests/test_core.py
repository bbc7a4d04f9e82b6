from datetime import date, datetime, timezone

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from infodemic.core import (
    REGION_CODES,
    CollectionWindow,
    DailyStat,
    DataError,
    Platform,
    Post,
    load_gazetteer_entries,
    load_source_lists,
    load_vaccine_records,
    normalize_text,
    parse_timestamp,
    read_posts,
    write_posts,
)


@pytest.mark.parametrize(
    "raw,expected",
    [("Vaccinerò", "vaccinero"), ("", ""), ("  FORLÌ  ", "forli"), ("L'Aquila", "l'aquila")],
)
def test_normalize_examples(raw, expected):
    assert normalize_text(raw) == expected


@given(st.text())
def test_normalize_idempotent_and_matches_oracle(s):
    once = normalize_text(s)
    assert normalize_text(once) == once
    assert oracles.tokens(s) == oracles.tokens(once)


def test_parse_timestamp_forms():
    want = datetime(2020, 12, 27, 10, 0, tzinfo=timezone.utc)
    assert parse_timestamp("2020-12-27T10:00:00Z") == want
    assert parse_timestamp("2020-12-27 10:00:00") == want
    assert parse_timestamp("2020-12-27T11:00:00+01:00") == want


def test_twenty_regions():
    assert len(REGION_CODES) == 20
    assert REGION_CODES["TAA"].startswith("Trentino")


def test_post_validation():
    ts = datetime(2021, 1, 1, tzinfo=timezone.utc)
    with pytest.raises(ValueError):
        Post(Platform.TWITTER, "", ts, "x", "u")
    with pytest.raises(ValueError):
        Post(Platform.TWITTER, "1", ts.replace(tzinfo=None), "x", "u")
    with pytest.raises(ValueError):
        Post(Platform.TWITTER, "1", ts, "x", "u", share_weight=0)
    assert Post(Platform.FACEBOOK, "1", ts, "x", "p", share_weight=0).share_weight == 0


posts_strategy = st.builds(
    Post,
    platform=st.sampled_from(list(Platform)),
    post_id=st.text(min_size=1, max_size=12),
    timestamp=st.datetimes(
        min_value=datetime(2020, 1, 1), max_value=datetime(2022, 1, 1), timezones=st.just(timezone.utc)
    ).map(lambda d: d.replace(microsecond=0)),
    text=st.text(max_size=40),
    author_id=st.text(max_size=8),
    author_location=st.none() | st.text(max_size=20),
    share_weight=st.integers(1, 10_000),
    urls=st.lists(st.text(max_size=20), max_size=3).map(tuple),
)


@given(st.lists(posts_strategy, max_size=5))
def test_posts_round_trip(tmp_path_factory, posts):
    path = tmp_path_factory.mktemp("posts") / "p.jsonl"
    assert write_posts(posts, path) == len(posts)
    assert list(read_posts(path)) == posts


def test_source_lists_overlap_rejected(tmp_path):
    (tmp_path / "low.txt").write_text("# low\nbyoblu.it\nimolaoggi.it\n")
    (tmp_path / "high.txt").write_text("ansa.it\nbyoblu.it\n")
    with pytest.raises(DataError, match="byoblu.it"):
        load_source_lists(tmp_path / "low.txt", tmp_path / "high.txt")


def test_source_list_rejects_non_bare_domains(tmp_path):
    (tmp_path / "low.txt").write_text("https://byoblu.it/\n")
    (tmp_path / "high.txt").write_text("ansa.it\n")
    with pytest.raises(DataError):
        load_source_lists(tmp_path / "low.txt", tmp_path / "high.txt")


def test_gazetteer_loader(tmp_path):
    p = tmp_path / "g.csv"
    p.write_text("name,kind,region_code,population\nLazio,region,LAZ,5720536\nRoma,municipality,LAZ,\nBolzano,province,PAB,\n")
    entries = load_gazetteer_entries(p)
    assert [e.name_normalized for e in entries] == ["lazio", "roma", "bolzano"]
    assert entries[2].region_code == "TAA"
    assert entries[0].population == 5720536


def test_gazetteer_loader_bad_region(tmp_path):
    p = tmp_path / "g.csv"
    p.write_text("name,kind,region_code,population\nAtlantide,region,XXX,1\n")
    with pytest.raises(DataError):
        load_gazetteer_entries(p)


def test_vaccine_records_alias_and_duplicates(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("date,region_code,doses_administered\n2021-01-02,PAB,10\n2021-01-02,PAT,5\n2021-01-02,LAZ,7\n")
    recs = load_vaccine_records(p)
    assert {(r.region_code, r.doses_administered) for r in recs} == {("TAA", 15), ("LAZ", 7)}
    p.write_text("date,region_code,doses_administered\n2021-01-02,LAZ,1\n2021-01-02,LAZ,2\n")
    with pytest.raises(DataError, match="duplicate"):
        load_vaccine_records(p)


def test_daily_stat_invariants():
    with pytest.raises(ValueError):
        DailyStat(date(2021, 1, 1), Platform.TWITTER, volume=1, low_count=2)


def test_window():
    w = CollectionWindow(date(2021, 1, 1), date(2021, 1, 3))
    assert len(w.days()) == 3
    assert datetime(2021, 1, 3, 23, 59, tzinfo=timezone.utc) in w
    assert datetime(2021, 1, 4, tzinfo=timezone.utc) not in w
    with pytest.raises(ValueError):
        CollectionWindow(date(2021, 1, 3), date(2021, 1, 1))
