"""Shared HTTP helpers for the service and acceptance tests."""

from __future__ import annotations

import json
import threading
import time
import urllib.error
import urllib.request

from infodemic.service import ApiService, handle

SWAP_PATHS = ["/api/meta", "/api/timeseries/volume", "/api/leaderboard", "/api/regions", "/api/correlations"]


def get(url):
    try:
        with urllib.request.urlopen(url, timeout=10) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as exc:
        return exc.code, json.loads(exc.read())


def hot_swap_check(store, snapshots, readers: int = 100, requests_each: int = 6):
    """Flip ``store`` between ``snapshots`` while ``readers`` threads query the API.

    Returns (problems, snapshot ids seen). A problem is any response whose body
    differs from the body the named snapshot alone would produce.
    """
    expected = {
        (s.snapshot_id, p): json.loads(json.dumps(handle(s, p, {}), sort_keys=True))
        for s in snapshots
        for p in SWAP_PATHS
    }
    stop = threading.Event()
    problems: list[str] = []
    seen: set[str] = set()

    def swapper():
        i = 0
        while not stop.is_set():
            store.publish(snapshots[i % len(snapshots)])
            i += 1
            time.sleep(0.001)

    with ApiService(store, port=0, poll_interval=None) as svc:

        def reader(n):
            for j in range(requests_each):
                path = SWAP_PATHS[(n + j) % len(SWAP_PATHS)]
                try:
                    status, body = get(svc.url + path)
                except Exception as exc:  # noqa: BLE001
                    problems.append(repr(exc))
                    continue
                key = (body.get("snapshot_id"), path)
                seen.add(key[0])
                if status != 200 or expected.get(key) != body:
                    problems.append(f"mixed or wrong body for {key}")

        flipper = threading.Thread(target=swapper)
        flipper.start()
        threads = [threading.Thread(target=reader, args=(n,)) for n in range(readers)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        stop.set()
        flipper.join()
    return problems, seen
