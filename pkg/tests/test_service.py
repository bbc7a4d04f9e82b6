import json
import time
import urllib.request
from datetime import date
from pathlib import Path

import jsonschema
import pytest

from helpers import get, hot_swap_check
from infodemic.core import CollectionWindow, data_path
from infodemic.pipeline import Inputs, publish_report, run_pipeline, write_report
from infodemic.service import (
    ApiService,
    SnapshotError,
    SnapshotStore,
    filter_range,
    load_snapshot,
    serve,
)

SCHEMA = json.loads(data_path("api_schema.json").read_text(encoding="utf-8"))

QUERIES = [
    "/api/meta",
    "/api/timeseries/volume",
    "/api/timeseries/volume?platform=twitter",
    "/api/timeseries/volume?platform=facebook&from=2021-01-01&to=2021-01-07",
    "/api/timeseries/credibility?platform=facebook",
    "/api/timeseries/credibility?from=2021-01-10",
    "/api/leaderboard",
    "/api/leaderboard?platform=facebook&k=20",
    "/api/leaderboard?k=5",
    "/api/regions",
    "/api/regions?region=lom",
    "/api/videos/top",
    "/api/videos/top?platform=facebook&k=50",
    "/api/correlations",
]


def validator(path):
    ref = SCHEMA["endpoints"][path]["$ref"]
    return jsonschema.Draft202012Validator({**SCHEMA, "$ref": ref})


def error_validator():
    return jsonschema.Draft202012Validator({**SCHEMA, "$ref": "#/$defs/error"})


@pytest.fixture(scope="module")
def snapshot_dir(tmp_path_factory, fixture_report):
    return write_report(fixture_report, tmp_path_factory.mktemp("snap") / "current")


@pytest.fixture(scope="module")
def service(snapshot_dir):
    svc = ApiService(SnapshotStore(snapshot_dir), port=0, poll_interval=None).start()
    yield svc
    svc.stop()


def test_schema_is_valid():
    jsonschema.Draft202012Validator.check_schema(SCHEMA)


@pytest.mark.parametrize("query", QUERIES)
def test_endpoint_schema(service, query):
    status, body = get(service.url + query)
    assert status == 200
    validator(query.split("?")[0]).validate(body)
    assert body["snapshot_id"] == service.store.current.snapshot_id


def test_volume_projection(service, fixture_report):
    from infodemic.core import Platform

    _, body = get(service.url + "/api/timeseries/volume?platform=twitter")
    want = [(s.date.isoformat(), s.volume, s.low_count, s.high_count) for s in fixture_report.volume[Platform.TWITTER]]
    assert [(r["date"], r["volume"], r["low_count"], r["high_count"]) for r in body["series"]] == want


def test_leaderboard_facebook_top20(service):
    _, body = get(service.url + "/api/leaderboard?platform=facebook&k=20")
    entries = body["entries"]
    assert len(entries) == 21
    assert sum(e["is_pseudo"] for e in entries) == 1
    assert [e["rank"] for e in entries] == list(range(1, 22))


def test_twitter_leaderboard_pseudo_first(service):
    _, body = get(service.url + "/api/leaderboard?platform=twitter")
    assert body["entries"][0]["name"] == "ALL_LOW_CREDIBILITY"


def test_regions_have_doses_per_million(service):
    _, body = get(service.url + "/api/regions")
    assert len(body["regions"]) == 20
    for r in body["regions"]:
        assert r["doses_per_million"] == pytest.approx(r["total_doses"] * 1e6 / r["population"])


def test_videos_show_removed(service):
    _, body = get(service.url + "/api/videos/top?k=1000")
    assert any(v["status"] == "removed" and v["title"] is None for v in body["videos"])


@pytest.mark.parametrize(
    "query,status,code",
    [
        ("/api/timeseries/volume?from=2021-01-10&to=2021-01-01", 400, "bad_range"),
        ("/api/timeseries/volume?from=yesterday", 400, "bad_parameter"),
        ("/api/leaderboard?k=0", 400, "bad_parameter"),
        ("/api/leaderboard?k=abc", 400, "bad_parameter"),
        ("/api/leaderboard?platform=myspace", 400, "bad_parameter"),
        ("/api/regions?region=XYZ", 400, "bad_parameter"),
        ("/api/regions?colour=red", 400, "unknown_parameter"),
        ("/api/nothing", 404, "not_found"),
    ],
)
def test_error_bodies(service, query, status, code):
    got_status, body = get(service.url + query)
    assert got_status == status
    assert body["error"]["code"] == code
    error_validator().validate(body)


def test_method_not_allowed(service):
    req = urllib.request.Request(service.url + "/api/meta", data=b"{}", method="POST")
    status, body = get(req)
    assert status == 405
    error_validator().validate(body)


def test_idempotent_reads(service):
    assert get(service.url + "/api/correlations") == get(service.url + "/api/correlations")


def test_filter_range_examples(snapshot_dir):
    snap = load_snapshot(snapshot_dir)
    rows = list(snap.volume)
    assert filter_range(rows, None, None) == rows
    assert filter_range(rows, date(2030, 1, 1), date(2030, 2, 1)) == []
    with pytest.raises(ValueError):
        filter_range(rows, date(2021, 1, 2), date(2021, 1, 1))
    lo, hi = date(2021, 1, 1), date(2021, 1, 7)
    oracle = [r for r in rows if lo.isoformat() <= r["date"] <= hi.isoformat()]
    assert filter_range(rows, lo, hi) == oracle
    assert len({r["date"] for r in oracle}) == 7


def test_refuses_missing_or_tampered_snapshot(tmp_path, snapshot_dir):
    with pytest.raises(SnapshotError):
        serve(tmp_path / "empty", "127.0.0.1:0")
    bad = tmp_path / "bad"
    bad.mkdir()
    for f in Path(snapshot_dir).iterdir():
        (bad / f.name).write_bytes(f.read_bytes())
    with open(bad / "regions.csv", "ab") as fh:
        fh.write(b"\n")
    with pytest.raises(SnapshotError, match="regions.csv"):
        load_snapshot(bad)
    with pytest.raises(SnapshotError):
        SnapshotStore(bad)


def _second_report(fixture_dir):
    window = CollectionWindow(date(2020, 12, 20), date(2021, 1, 10))
    return run_pipeline(Inputs.from_fixture_dir(fixture_dir, window))


def test_publish_and_poll_reload(tmp_path, fixture_report, fixture_dir):
    root = tmp_path / "root"
    first = publish_report(fixture_report, root)
    with ApiService(SnapshotStore(root), port=0, poll_interval=0.05) as svc:
        _, before = get(svc.url + "/api/meta")
        second = publish_report(_second_report(fixture_dir), root)
        assert second != first
        deadline = time.time() + 5
        while time.time() < deadline:
            _, after = get(svc.url + "/api/meta")
            if after["snapshot_id"] != before["snapshot_id"]:
                break
            time.sleep(0.05)
        assert after["snapshot_id"] == load_snapshot(second).snapshot_id
        assert after["window"]["to"] == "2021-01-10"


def test_hot_swap_never_mixes(snapshot_dir, fixture_dir, tmp_path):
    snap_a = load_snapshot(snapshot_dir)
    snap_b = load_snapshot(write_report(_second_report(fixture_dir), tmp_path / "b"))
    assert snap_a.snapshot_id != snap_b.snapshot_id
    problems, seen = hot_swap_check(SnapshotStore(snapshot_dir), [snap_a, snap_b])
    assert problems == []
    assert seen == {snap_a.snapshot_id, snap_b.snapshot_id}
