"""Read-only JSON API over report snapshots.

The store holds one immutable :class:`Snapshot` behind a single reference.
Request handlers read that reference once per request, so a reload that swaps
it in never produces a response mixing two snapshots. Every payload carries
the ``snapshot_id`` it was built from.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import threading
from dataclasses import dataclass
from datetime import date, datetime
from http import HTTPStatus
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional, Sequence
from urllib.parse import parse_qs, urlsplit

from .analytics import LeaderboardEntry, rank_leaderboard
from .core import REGION_CODES, CredibilityClass, Platform, parse_timestamp
from .pipeline import MANIFEST, REPORT_FILES
from .youtube import VideoRecord, VideoStatus, top_videos

logger = logging.getLogger(__name__)

DEFAULT_K = 20
MAX_K = 1000


class SnapshotError(Exception):
    pass


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, parameter: Optional[str] = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.parameter = parameter

    def body(self) -> dict:
        return {"error": {"code": self.code, "message": self.message, "parameter": self.parameter}}


def _num(text: str):
    if text == "":
        return None
    try:
        return int(text)
    except ValueError:
        return float(text)


def _read_csv(path: Path) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


@dataclass(frozen=True)
class Snapshot:
    snapshot_id: str
    generated_at: str
    window: dict
    keyword_set_version: str
    counts: dict
    volume: tuple
    fractions: tuple
    sources: tuple
    regions: tuple
    videos: tuple
    correlations: dict
    path: str


def load_snapshot(path) -> Snapshot:
    """Load and verify a report directory; any missing or altered file is an error."""
    path = Path(path)
    try:
        manifest = json.loads((path / MANIFEST).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise SnapshotError(f"{path}: no readable manifest ({exc})") from None
    files = manifest.get("files", {})
    for name in REPORT_FILES:
        if name not in files:
            raise SnapshotError(f"{path}: manifest does not list {name}")
        try:
            data = (path / name).read_bytes()
        except OSError as exc:
            raise SnapshotError(f"{path}: {exc}") from None
        if hashlib.sha256(data).hexdigest() != files[name]:
            raise SnapshotError(f"{path}: {name} does not match the manifest")

    volume = tuple(
        {
            "date": r["date"],
            "platform": r["platform"],
            "volume": int(r["volume"]),
            "low_count": int(r["low_count"]),
            "high_count": int(r["high_count"]),
        }
        for r in _read_csv(path / "volume.csv")
    )
    fractions = tuple(
        {
            "date": r["date"],
            "platform": r["platform"],
            "low_fraction": float(r["low_fraction"]),
            "high_fraction": float(r["high_fraction"]),
        }
        for r in _read_csv(path / "fractions.csv")
    )
    sources = tuple(
        LeaderboardEntry(r["name"], CredibilityClass(r["class"]), int(r["twitter_shares"]), int(r["facebook_shares"]))
        for r in _read_csv(path / "sources.csv")
    )
    regions = tuple(
        {
            "region_code": r["region_code"],
            "region_name": REGION_CODES.get(r["region_code"], r["region_code"]),
            "users_located": int(r["users_located"]),
            "mean_user_low_fraction": _num(r["mean_user_low_fraction"]),
            "total_doses": int(r["total_doses"]),
            "population": int(r["population"]),
            "doses_per_million": float(r["doses_per_million"]),
        }
        for r in _read_csv(path / "regions.csv")
    )
    videos = tuple(
        VideoRecord(
            video_id=r["video_id"],
            status=VideoStatus(r["status"]),
            title=r["title"] or None,
            channel_id=r["channel_id"] or None,
            view_count=_num(r["view_count"]),
            tweet_shares=int(r["tweet_shares"]),
            facebook_shares=int(r["facebook_shares"]),
            fetched_at=parse_timestamp(r["fetched_at"]) if r["fetched_at"] else None,
        )
        for r in _read_csv(path / "videos.csv")
    )
    correlations = json.loads((path / "correlations.json").read_text(encoding="utf-8"))
    return Snapshot(
        snapshot_id=manifest["snapshot_id"],
        generated_at=manifest["generated_at"],
        window=manifest["window"],
        keyword_set_version=manifest.get("keyword_set_version", "initial"),
        counts=manifest.get("counts", {}),
        volume=volume,
        fractions=fractions,
        sources=sources,
        regions=regions,
        videos=videos,
        correlations=correlations,
        path=str(path),
    )


def _latest_snapshot_dir(root: Path) -> Optional[Path]:
    if (root / MANIFEST).is_file():
        return root
    best = None
    for child in root.iterdir() if root.is_dir() else ():
        if child.name.startswith(".") or not (child / MANIFEST).is_file():
            continue
        if best is None or child.name > best.name:
            best = child
    return best


class SnapshotStore:
    """Tracks the newest complete snapshot under ``root``.

    ``root`` is either a snapshot directory itself or a directory of snapshot
    subdirectories (newest = greatest name, as written by ``publish_report``).
    """

    def __init__(self, root):
        self.root = Path(root)
        self._lock = threading.Lock()
        self._current: Optional[Snapshot] = None
        self._manifest_sig: Optional[tuple] = None
        if not self.refresh():
            raise SnapshotError(f"no complete snapshot under {self.root}")

    @property
    def current(self) -> Snapshot:
        return self._current  # type: ignore[return-value]

    def publish(self, snapshot: Snapshot) -> None:
        self._current = snapshot

    def refresh(self) -> bool:
        """Swap in a newer snapshot if one is on disk; returns True when one is loaded."""
        with self._lock:
            target = _latest_snapshot_dir(self.root)
            if target is None:
                return self._current is not None
            try:
                sig = (str(target), (target / MANIFEST).read_bytes())
            except OSError:
                return self._current is not None
            if sig == self._manifest_sig:
                return True
            try:
                snapshot = load_snapshot(target)
            except SnapshotError as exc:
                logger.warning("not loading snapshot: %s", exc)
                return self._current is not None
            self._manifest_sig = sig
            if self._current is None or snapshot.snapshot_id != self._current.snapshot_id:
                logger.info("serving snapshot %s from %s", snapshot.snapshot_id, target)
                self._current = snapshot
            return True


def filter_range(series: Sequence[dict], from_date: Optional[date], to_date: Optional[date]) -> list[dict]:
    """Rows whose ``date`` lies in the inclusive range; open ends allowed."""
    if from_date is not None and to_date is not None and from_date > to_date:
        raise ValueError(f"from {from_date} is after to {to_date}")
    out = []
    for row in series:
        d = row["date"] if isinstance(row["date"], date) else date.fromisoformat(row["date"])
        if (from_date is None or d >= from_date) and (to_date is None or d <= to_date):
            out.append(row)
    return out


# -- request handling ------------------------------------------------------

_PARAMS = {
    "/api/meta": set(),
    "/api/timeseries/volume": {"platform", "from", "to"},
    "/api/timeseries/credibility": {"platform", "from", "to"},
    "/api/leaderboard": {"platform", "k"},
    "/api/regions": {"region"},
    "/api/videos/top": {"platform", "k"},
    "/api/correlations": set(),
}


def _single(query: dict, name: str) -> Optional[str]:
    values = query.get(name)
    if not values:
        return None
    if len(values) > 1:
        raise ApiError(400, "bad_parameter", f"{name} given more than once", name)
    return values[0]


def _platform(query, default=None) -> Optional[Platform]:
    raw = _single(query, "platform")
    if raw is None:
        return default
    try:
        return Platform(raw.lower())
    except ValueError:
        raise ApiError(400, "bad_parameter", "platform must be twitter or facebook", "platform") from None


def _date(query, name) -> Optional[date]:
    raw = _single(query, name)
    if raw is None:
        return None
    try:
        return date.fromisoformat(raw)
    except ValueError:
        raise ApiError(400, "bad_parameter", f"{name} must be an ISO date (YYYY-MM-DD)", name) from None


def _k(query) -> int:
    raw = _single(query, "k")
    if raw is None:
        return DEFAULT_K
    try:
        k = int(raw)
    except ValueError:
        raise ApiError(400, "bad_parameter", "k must be an integer", "k") from None
    if not 1 <= k <= MAX_K:
        raise ApiError(400, "bad_parameter", f"k must be between 1 and {MAX_K}", "k")
    return k


def _series(snap: Snapshot, rows, query) -> dict:
    platform = _platform(query)
    lo, hi = _date(query, "from"), _date(query, "to")
    try:
        selected = filter_range(rows, lo, hi)
    except ValueError as exc:
        raise ApiError(400, "bad_range", str(exc), "from") from None
    if platform is not None:
        selected = [r for r in selected if r["platform"] == platform.value]
    return {
        "platform": platform.value if platform else None,
        "from": lo.isoformat() if lo else None,
        "to": hi.isoformat() if hi else None,
        "series": list(selected),
    }


def _entry(rank: int, e: LeaderboardEntry) -> dict:
    return {
        "rank": rank,
        "name": e.name,
        "class": e.cls.value,
        "twitter_shares": e.twitter_shares,
        "facebook_shares": e.facebook_shares,
        "is_pseudo": e.is_pseudo,
    }


def _video(rank: int, v: VideoRecord) -> dict:
    return {
        "rank": rank,
        "video_id": v.video_id,
        "status": v.status.value,
        "title": v.title,
        "channel_id": v.channel_id,
        "view_count": v.view_count,
        "tweet_shares": v.tweet_shares,
        "facebook_shares": v.facebook_shares,
        "fetched_at": v.fetched_at.strftime("%Y-%m-%dT%H:%M:%SZ") if isinstance(v.fetched_at, datetime) else None,
    }


def handle(snap: Snapshot, path: str, query: dict) -> dict:
    """Build the JSON body for one GET; raises ApiError for client errors."""
    if path not in _PARAMS:
        raise ApiError(404, "not_found", f"no endpoint {path}")
    unknown = sorted(set(query) - _PARAMS[path])
    if unknown:
        raise ApiError(400, "unknown_parameter", f"unsupported parameter {unknown[0]}", unknown[0])

    if path == "/api/meta":
        body = {
            "generated_at": snap.generated_at,
            "window": snap.window,
            "keyword_set_version": snap.keyword_set_version,
            "counts": snap.counts,
            "endpoints": sorted(_PARAMS),
        }
    elif path == "/api/timeseries/volume":
        body = _series(snap, snap.volume, query)
    elif path == "/api/timeseries/credibility":
        body = _series(snap, snap.fractions, query)
    elif path == "/api/leaderboard":
        platform = _platform(query, Platform.TWITTER)
        k = _k(query)
        ranked = rank_leaderboard(snap.sources, platform, k)
        body = {
            "platform": platform.value,
            "k": k,
            "entries": [_entry(i, e) for i, e in enumerate(ranked, 1)],
        }
    elif path == "/api/regions":
        region = _single(query, "region")
        rows = list(snap.regions)
        if region is not None:
            region = region.upper()
            if region not in REGION_CODES:
                raise ApiError(400, "bad_parameter", f"unknown region {region}", "region")
            rows = [r for r in rows if r["region_code"] == region]
        body = {"regions": rows}
    elif path == "/api/videos/top":
        platform = _platform(query, Platform.TWITTER)
        k = _k(query)
        body = {
            "platform": platform.value,
            "k": k,
            "videos": [_video(i, v) for i, v in enumerate(top_videos(snap.videos, k, platform), 1)],
        }
    else:
        body = {"correlations": snap.correlations}
    return {"snapshot_id": snap.snapshot_id, **body}


class _Handler(BaseHTTPRequestHandler):
    server: "ApiHTTPServer"
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):
        logger.debug("%s - %s", self.address_string(), fmt % args)

    def _send(self, status: int, body: dict) -> None:
        data = json.dumps(body, sort_keys=True, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Cache-Control", "no-cache")
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def do_GET(self):
        snap = self.server.store.current
        parts = urlsplit(self.path)
        try:
            query = parse_qs(parts.query, keep_blank_values=True)
            body = handle(snap, parts.path.rstrip("/") or "/", query)
        except ApiError as exc:
            self._send(exc.status, {"snapshot_id": snap.snapshot_id, **exc.body()})
            return
        except Exception:  # pragma: no cover - defensive
            logger.exception("error handling %s", self.path)
            self._send(500, {"snapshot_id": snap.snapshot_id, "error": {"code": "internal", "message": "internal error", "parameter": None}})
            return
        self._send(200, body)

    def _not_allowed(self):
        err = ApiError(HTTPStatus.METHOD_NOT_ALLOWED, "method_not_allowed", "the API is read-only")
        self._send(err.status, {"snapshot_id": self.server.store.current.snapshot_id, **err.body()})

    do_POST = do_PUT = do_DELETE = do_PATCH = _not_allowed


class ApiHTTPServer(ThreadingHTTPServer):
    daemon_threads = True
    request_queue_size = 128

    def __init__(self, address, store: SnapshotStore):
        super().__init__(address, _Handler)
        self.store = store


class ApiService:
    """A running server plus an optional reload watcher."""

    def __init__(self, store: SnapshotStore, host: str = "127.0.0.1", port: int = 0, poll_interval: Optional[float] = 2.0):
        self.store = store
        self.httpd = ApiHTTPServer((host, port), store)
        self._stop = threading.Event()
        self._threads = [threading.Thread(target=self.httpd.serve_forever, name="api-http", daemon=True)]
        if poll_interval:
            self._threads.append(
                threading.Thread(target=self._watch, args=(poll_interval,), name="api-reload", daemon=True)
            )

    @property
    def url(self) -> str:
        host, port = self.httpd.server_address[:2]
        return f"http://{host}:{port}"

    def _watch(self, interval: float) -> None:
        while not self._stop.wait(interval):
            try:
                self.store.refresh()
            except Exception:  # pragma: no cover - keep serving the old snapshot
                logger.exception("snapshot reload failed")

    def start(self) -> "ApiService":
        for t in self._threads:
            t.start()
        return self

    def stop(self) -> None:
        self._stop.set()
        self.httpd.shutdown()
        self.httpd.server_close()

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.stop()


def parse_bind(bind: str) -> tuple[str, int]:
    host, sep, port = bind.rpartition(":")
    if not sep or not port.isdigit():
        raise ValueError(f"bind address must be HOST:PORT, got {bind!r}")
    return host or "127.0.0.1", int(port)


def serve(snapshot_dir, bind: str = "127.0.0.1:8000", poll_interval: Optional[float] = 2.0) -> ApiService:
    """Start serving; raises SnapshotError if no complete snapshot is present."""
    host, port = parse_bind(bind)
    store = SnapshotStore(snapshot_dir)
    return ApiService(store, host, port, poll_interval).start()
