"""Flag parsing, environment mirroring, and startup guards."""

from __future__ import annotations

import argparse

import pytest

from puresearch.cli import build_parser, main, parse_listen


def test_parse_listen():
    assert parse_listen("127.0.0.1:8765") == ("127.0.0.1", 8765)
    assert parse_listen("[::1]:9000") == ("::1", 9000)
    for bad in ("nohost", "host:", ":99", "host:abc"):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_listen(bad)


def test_defaults():
    args = build_parser().parse_args([])
    assert args.listen == "127.0.0.1:8765"
    assert args.upstream == "http://127.0.0.1:8080"
    assert args.refresh_interval == 900.0
    assert args.mock_upstream is None


def test_env_vars_mirror_flags(monkeypatch):
    monkeypatch.setenv("PURE_LISTEN", "127.0.0.1:9999")
    monkeypatch.setenv("PURE_UPSTREAM", "http://searx.local:8888")
    monkeypatch.setenv("PURE_REFRESH_INTERVAL", "60")
    args = build_parser().parse_args([])
    assert args.listen == "127.0.0.1:9999"
    assert args.upstream == "http://searx.local:8888"
    assert args.refresh_interval == 60.0
    # flags win over the environment
    args = build_parser().parse_args(["--listen", "127.0.0.1:7000"])
    assert args.listen == "127.0.0.1:7000"


def test_non_loopback_refused_without_flag(tmp_path, capsys):
    rc = main(["--listen", "0.0.0.0:8765", "--data-dir", str(tmp_path)])
    assert rc == 2
    assert "--allow-remote" in capsys.readouterr().err


def test_missing_sources_config_fails_with_hint(tmp_path, capsys):
    rc = main(["--data-dir", str(tmp_path)])
    assert rc == 1
    err = capsys.readouterr().err
    assert "sources" in err and "--init" in err


def test_init_writes_template(tmp_path, capsys):
    rc = main(["--init", "--data-dir", str(tmp_path)])
    assert rc == 0
    conf = tmp_path / "sources.conf"
    assert conf.exists()
    assert "tier" in conf.read_text()
    # second run leaves the existing file untouched
    conf.write_text("1\tcoop\thttps://coop.example/l\n", encoding="utf-8")
    assert main(["--init", "--data-dir", str(tmp_path)]) == 0
    assert conf.read_text().startswith("1\tcoop")
