"""Command-line entry point for the local service.

Every flag has a matching PURE_* environment variable; flags win.  The
service binds loopback unless --allow-remote explicitly acknowledges the
exposure of binding elsewhere.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import uvicorn

from .service import LOOPBACK_HOSTS, ServiceConfig, ServiceRuntime, create_app
from .sources import ConfigError

SOURCES_TEMPLATE = """\
# Label sources, one per line: tier<TAB>id<TAB>url
# Tier 0 is ground truth (the local user); use 1 and below for remote sources.
# Example:
# 1\tco-op\thttps://labels.example.org/co-op.labels
"""


def _env(name: str, default: str | None = None) -> str | None:
    return os.environ.get(f"PURE_{name}", default)


def parse_listen(value: str) -> tuple[str, int]:
    host, sep, port = value.rpartition(":")
    if not sep or not host or not port.isdigit():
        raise argparse.ArgumentTypeError(f"--listen expects host:port, got {value!r}")
    return host.strip("[]"), int(port)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="puresearch",
        description="Local search service that re-ranks upstream results by labeled preferences.",
    )
    parser.add_argument("--listen", default=_env("LISTEN", "127.0.0.1:8765"), help="host:port to bind (default 127.0.0.1:8765)")
    parser.add_argument("--data-dir", default=_env("DATA_DIR", "./pure-data"), help="directory for label and policy storage")
    parser.add_argument("--sources", default=_env("SOURCES"), help="sources config file (default <data-dir>/sources.conf)")
    parser.add_argument("--upstream", default=_env("UPSTREAM", "http://127.0.0.1:8080"), help="base URL of the upstream search engine")
    parser.add_argument("--refresh-interval", type=float, default=float(_env("REFRESH_INTERVAL", "900")), help="seconds between source polls; 0 disables polling")
    parser.add_argument("--mock-upstream", default=_env("MOCK_UPSTREAM"), metavar="FIXTURE", help="serve search results from a JSON fixture instead of a real upstream")
    parser.add_argument("--ui-dir", default=_env("UI_DIR"), help="directory of built web UI assets to serve at /")
    parser.add_argument("--allow-remote", action="store_true", help="permit binding to a non-loopback address")
    parser.add_argument("--init", action="store_true", help="create the data dir and a sources.conf template, then exit")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    host, port = parse_listen(args.listen)
    data_dir = Path(args.data_dir)
    sources = Path(args.sources) if args.sources else data_dir / "sources.conf"

    if args.init:
        data_dir.mkdir(parents=True, exist_ok=True)
        if sources.exists():
            print(f"{sources} already exists; leaving it untouched")
        else:
            sources.write_text(SOURCES_TEMPLATE, encoding="utf-8")
            print(f"wrote {sources}")
        return 0

    if host not in LOOPBACK_HOSTS and not args.allow_remote:
        print(
            f"refusing to bind non-loopback address {host} without --allow-remote "
            "(the service has no authentication)",
            file=sys.stderr,
        )
        return 2

    ui_dir = Path(args.ui_dir) if args.ui_dir else Path("frontend/dist")
    config = ServiceConfig(
        data_dir=data_dir,
        sources_config=sources,
        upstream_url=args.upstream,
        listen_host=host,
        listen_port=port,
        refresh_interval=args.refresh_interval,
        mock_upstream_fixture=Path(args.mock_upstream) if args.mock_upstream else None,
        static_dir=ui_dir if ui_dir.is_dir() else None,
        allow_non_loopback=args.allow_remote,
    )
    try:
        runtime = ServiceRuntime(config)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        print("hint: run with --init to create a sources.conf template", file=sys.stderr)
        return 1
    app = create_app(runtime)
    uvicorn.run(app, host=host, port=port, log_level="info")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
