import json

from infodemic.cli import main
from infodemic.service import load_snapshot


def test_ingest_and_aggregate(tmp_path, fixture_dir, capsys):
    tw = tmp_path / "tw.jsonl"
    fb = tmp_path / "fb.jsonl"
    kw = str(fixture_dir / "keywords.txt")
    assert main(["ingest", "--platform", "twitter", "--input", str(fixture_dir / "twitter.jsonl"), "--keywords", kw, "--out", str(tw)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert (summary["parsed"], summary["passed"]) == (7000, 4340)
    assert main(["ingest", "--platform", "facebook", "--input", str(fixture_dir / "facebook.csv"), "--keywords", kw, "--out", str(fb)]) == 0
    assert json.loads(capsys.readouterr().out)["passed"] == 1860

    videos = tmp_path / "videos.csv"
    args = ["enrich-videos", "--posts", str(tw), str(fb), "--metadata", str(fixture_dir / "video_metadata.csv")]
    assert main(args + ["--redirects", str(fixture_dir / "redirects.csv"), "--out", str(videos)]) == 0
    assert json.loads(capsys.readouterr().out)["removed"] > 0

    out = tmp_path / "snap"
    args = [
        "aggregate", "--posts", str(tw), str(fb),
        "--low", str(fixture_dir / "low.txt"), "--high", str(fixture_dir / "high.txt"),
        "--gazetteer", str(fixture_dir / "gazetteer.csv"), "--doses", str(fixture_dir / "doses.csv"),
        "--metadata", str(fixture_dir / "video_metadata.csv"), "--redirects", str(fixture_dir / "redirects.csv"),
        "--keywords", kw, "--out", str(out),
    ]  # fmt: skip
    assert main(args) == 0
    assert load_snapshot(out).window == {"from": "2020-12-20", "to": "2021-01-18"}


def test_run_matches_between_invocations(tmp_path, fixture_dir, capsys):
    for name in ("a", "b"):
        assert main(["run", "--fixture", str(fixture_dir), "--out", str(tmp_path / name)]) == 0
    for f in (tmp_path / "a").iterdir():
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_bad_inputs_exit_2(tmp_path, fixture_dir, capsys):
    (tmp_path / "high.txt").write_text("imolaoggi.it\n")
    (tmp_path / "none.jsonl").write_text("")
    args = [
        "aggregate", "--posts", str(tmp_path / "none.jsonl"),
        "--low", str(fixture_dir / "low.txt"), "--high", str(tmp_path / "high.txt"),
        "--gazetteer", str(fixture_dir / "gazetteer.csv"), "--doses", str(fixture_dir / "doses.csv"),
        "--out", str(tmp_path / "o"),
    ]  # fmt: skip
    assert main(args) == 2
    assert "imolaoggi.it" in capsys.readouterr().err
    assert main(["ingest", "--platform", "twitter", "--input", str(tmp_path / "missing"), "--out", str(tmp_path / "x")]) == 2
    assert main(["enrich-videos", "--posts", str(tmp_path / "gone.jsonl"), "--metadata", "x", "--out", "y"]) == 2
    assert main(["serve", "--snapshot", str(tmp_path / "nothing"), "--bind", "127.0.0.1:0"]) == 2
