#!/usr/bin/env python3
"""Self-contained demo: seeded labels, a polled label source, re-ranked search.

Creates a workspace, serves a small label source over loopback HTTP, points
the service at a mock upstream fixture, seeds user assertions and a policy
that disfavors hascookiebanner, and runs the service.  Open the printed URL
and search for "privacy" to watch the labeled result sit below an unlabeled
one with a lower upstream score; the sidebar and policy editor feed back
into rankings live.

Usage:
  python scripts/demo.py [--workspace DIR] [--listen HOST:PORT]
"""

from __future__ import annotations

import argparse
import json
import threading
from functools import partial
from http.server import SimpleHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import uvicorn

from puresearch.cli import parse_listen
from puresearch.service import ServiceConfig, ServiceRuntime, create_app

FIXTURE = {
    "privacy": [
        {
            "url": "https://news.example/privacy-banner-royale",
            "title": "Privacy, now with a consent wall",
            "snippet": "Accept our 341 partners to continue reading.",
            "score": 10.0,
        },
        {
            "url": "https://plain.example/privacy-explained",
            "title": "Privacy, explained plainly",
            "snippet": "No popups, no banners, just text.",
            "score": 6.0,
        },
        {
            "url": "https://wiki.example/wiki/Privacy",
            "title": "Privacy",
            "snippet": "Privacy is the ability of an individual or group…",
            "score": 5.5,
        },
    ],
    "cookie banners": [
        {
            "url": "https://news.example/privacy-banner-royale",
            "title": "Privacy, now with a consent wall",
            "snippet": "Accept our 341 partners to continue reading.",
            "score": 4.0,
        },
    ],
}

COOP_LABELS = """\
trusty\t1\thttps://plain.example/privacy-explained
trusty\t1\thttps://wiki.example/wiki/Privacy
hascookiebanner\t1\thttps://news.example/privacy-banner-royale
hascookiebanner\t-1\thttps://plain.example/privacy-explained
"""


def serve_labels(directory: Path) -> tuple[ThreadingHTTPServer, int]:
    handler = partial(SimpleHTTPRequestHandler, directory=str(directory))
    server = ThreadingHTTPServer(("127.0.0.1", 0), handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, server.server_address[1]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--workspace", default="demo-workspace")
    parser.add_argument("--listen", default="127.0.0.1:8765")
    args = parser.parse_args()
    host, port = parse_listen(args.listen)

    ws = Path(args.workspace)
    (ws / "coop-site").mkdir(parents=True, exist_ok=True)
    (ws / "coop-site" / "coop.labels").write_text(COOP_LABELS, encoding="utf-8")
    fixture_path = ws / "fixture.json"
    fixture_path.write_text(json.dumps(FIXTURE, indent=2), encoding="utf-8")

    label_server, label_port = serve_labels(ws / "coop-site")
    sources_conf = ws / "sources.conf"
    sources_conf.write_text(
        f"1\tdemo-coop\thttp://127.0.0.1:{label_port}/coop.labels\n", encoding="utf-8"
    )

    ui_dir = Path(__file__).resolve().parent.parent / "frontend" / "dist"
    config = ServiceConfig(
        data_dir=ws / "data",
        sources_config=sources_conf,
        upstream_url="http://127.0.0.1:1",  # replaced by the fixture transport
        listen_host=host,
        listen_port=port,
        refresh_interval=30.0,
        mock_upstream_fixture=fixture_path,
        static_dir=ui_dir if ui_dir.is_dir() else None,
    )
    runtime = ServiceRuntime(config)

    # seed: the user confirms two of the co-op's judgments (reputation 1)
    # and disfavors cookie banners
    runtime.refresh_sources()
    runtime.store.upsert_user_assertion("https://plain.example/privacy-explained", "trusty", 1)
    runtime.store.upsert_user_assertion("https://wiki.example/wiki/Privacy", "trusty", 1)
    runtime.replace_policy({"hascookiebanner": "disfavored"})

    app = create_app(runtime)
    print()
    print(f"demo label source : http://127.0.0.1:{label_port}/coop.labels")
    print(f"service           : http://{host}:{port}/")
    print(f"try               : http://{host}:{port}/api/search?q=privacy")
    if config.static_dir is None:
        print("web UI            : not built (cd frontend && npm install && npm run build)")
    print()
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    finally:
        label_server.shutdown()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
