"""Label records, URL canonicalization, and the TSV file format."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from puresearch.labels import (
    LabelError,
    LabelRecord,
    canonicalize_url,
    parse_label_file,
    record,
    serialize_label_file,
    validate_label_name,
)


# --- canonicalize_url ---


def test_lowercases_scheme_and_host_and_strips_fragment():
    assert canonicalize_url("HTTPS://Example.COM/A#frag") == "https://example.com/A"


def test_idempotent_on_canonical_input():
    assert canonicalize_url("https://example.com/A") == "https://example.com/A"


def test_rejects_schemeless_text():
    with pytest.raises(LabelError):
        canonicalize_url("not a url")


def test_rejects_empty_and_control_characters():
    for bad in ("", "https://x\ty", "https://x\ny"):
        with pytest.raises(LabelError):
            canonicalize_url(bad)


def test_default_port_removed_nondefault_kept():
    assert canonicalize_url("https://example.com:443/a") == "https://example.com/a"
    assert canonicalize_url("http://example.com:80/a") == "http://example.com/a"
    assert canonicalize_url("https://example.com:8443/a") == "https://example.com:8443/a"


def test_path_and_query_preserved_byte_for_byte():
    url = "https://example.com/A/b%2Fc?q=X&y=2"
    assert canonicalize_url(url) == url
    # no path normalization: distinct paths stay distinct
    assert canonicalize_url("https://example.com/a/../b") == "https://example.com/a/../b"


def test_case_and_fragment_variants_collapse():
    variants = [
        "https://example.com/Path",
        "HTTPS://example.com/Path",
        "https://EXAMPLE.com/Path#sec2",
    ]
    assert len({canonicalize_url(v) for v in variants}) == 1


def test_userinfo_and_ipv6_hosts_survive():
    assert canonicalize_url("https://Bob@Example.com/x") == "https://Bob@example.com/x"
    assert canonicalize_url("http://[::1]:8080/x") == "http://[::1]:8080/x"
    assert canonicalize_url("http://[::1]:80/x") == "http://[::1]/x"


_hosts = st.from_regex(r"[a-z0-9]([a-z0-9\-]{0,8}[a-z0-9])?(\.[a-z0-9]{1,6}){0,2}", fullmatch=True)
_paths = st.text(
    st.characters(blacklist_characters="\t\n\r#?", blacklist_categories=("Cs",)), max_size=20
)


@given(scheme=st.sampled_from(["http", "https"]), host=_hosts, path=_paths)
@settings(max_examples=200)
def test_canonicalize_idempotent(scheme, host, path):
    canon = canonicalize_url(f"{scheme}://{host}/{path}")
    assert canonicalize_url(canon) == canon


# --- record validation ---


def test_label_name_rules():
    assert validate_label_name("haspopup") == "haspopup"
    for bad in ("", "a\tb", "a\nb", "a\rb"):
        with pytest.raises(LabelError):
            validate_label_name(bad)


def test_record_rejects_bad_value():
    with pytest.raises(LabelError):
        LabelRecord("haspopup", 2, "https://example.com/a")
    with pytest.raises(LabelError):
        LabelRecord("haspopup", 0, "https://example.com/a")


def test_record_helper_canonicalizes():
    rec = record("haspopup", 1, "HTTPS://Example.COM/A#x")
    assert rec.url == "https://example.com/A"


# --- parse_label_file ---


def test_parse_single_wellformed_line():
    records, warnings = parse_label_file(b"haspopup\t1\thttps://example.com/a\n")
    assert records == [LabelRecord("haspopup", 1, "https://example.com/a")]
    assert warnings == []


def test_parse_empty_input():
    assert parse_label_file(b"") == ([], [])


def test_parse_bad_value_literal_warns():
    records, warnings = parse_label_file(b"hascookiebanner\t2\thttps://example.com/a\n")
    assert records == []
    assert len(warnings) == 1 and warnings[0].line == 1
    assert "value" in warnings[0].reason


def test_parse_rejects_plus_one_and_floats():
    for literal in ("+1", "1.0", "-1.0", " 1"):
        records, warnings = parse_label_file(f"k\t{literal}\thttps://example.com/\n".encode())
        assert records == [] and len(warnings) == 1


def test_parse_skips_malformed_lines_keeps_rest():
    text = (
        b"haspopup\t1\thttps://example.com/a\n"
        b"too\tfew\n"
        b"hasfixednavbar\t-1\thttps://example.com/b\n"
        b"k\t1\tnot a url\n"
        b"\n"
        b"hascookiebanner\t1\thttps://example.com/c\n"
    )
    records, warnings = parse_label_file(text)
    assert [r.label for r in records] == ["haspopup", "hasfixednavbar", "hascookiebanner"]
    assert [w.line for w in warnings] == [2, 4]


def test_parse_tolerates_crlf_never_emits_it():
    records, warnings = parse_label_file(b"haspopup\t1\thttps://example.com/a\r\n")
    assert warnings == []
    assert records == [LabelRecord("haspopup", 1, "https://example.com/a")]
    assert b"\r" not in serialize_label_file(records)


def test_parse_canonicalizes_urls():
    records, _ = parse_label_file(b"k\t1\tHTTPS://Example.COM/A#f\n")
    assert records[0].url == "https://example.com/A"


def test_parse_last_line_without_newline():
    records, warnings = parse_label_file(b"k\t1\thttps://example.com/a")
    assert len(records) == 1 and warnings == []


def test_parse_non_utf8_is_one_warning():
    records, warnings = parse_label_file(b"\xff\xfe\x00k")
    assert records == [] and len(warnings) == 1


@given(st.binary(max_size=400))
@settings(max_examples=200)
def test_parse_never_raises_and_values_are_signed_units(data):
    records, warnings = parse_label_file(data)
    assert all(r.value in (1, -1) for r in records)
    assert all(w.line >= 0 and w.reason for w in warnings)


# --- serialize_label_file and round trips ---


def test_serialize_format():
    rec = LabelRecord("haspopup", 1, "https://example.com/a")
    assert serialize_label_file([rec]) == b"haspopup\t1\thttps://example.com/a\n"
    assert serialize_label_file([]) == b""


_labels = st.text(
    st.characters(blacklist_characters="\t\n\r", blacklist_categories=("Cs",)),
    min_size=1,
    max_size=12,
)
_values = st.sampled_from([1, -1])


@st.composite
def label_records(draw):
    raw = f"{draw(st.sampled_from(['http', 'https']))}://{draw(_hosts)}/{draw(_paths)}"
    return LabelRecord(draw(_labels), draw(_values), canonicalize_url(raw))


@given(st.lists(label_records(), max_size=20))
@settings(max_examples=300)
def test_parse_serialize_roundtrip(records):
    parsed, warnings = parse_label_file(serialize_label_file(records))
    assert warnings == []
    assert parsed == records


@given(st.lists(label_records(), max_size=10))
@settings(max_examples=100)
def test_serialize_parse_identity_on_wellformed_files(records):
    data = serialize_label_file(records)
    parsed, warnings = parse_label_file(data)
    assert warnings == []
    assert serialize_label_file(parsed) == data
