"""Label records, URL canonicalization, and the tab-separated label file format.

A label record binds a label name to a URL with a value of +1 (the label
applies) or -1 (it does not).  Records travel and persist as UTF-8 text,
one record per line::

    <label> TAB <value> TAB <url> LF

with the value written as the literal string "1" or "-1".  Everything in
this module is a pure function over immutable values.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from urllib.parse import urlsplit, urlunsplit

VALID_VALUES = (1, -1)

# Characters that would corrupt the one-record-per-line TSV format.
_CONTROL_CHARS = ("\t", "\n", "\r")

_DEFAULT_PORTS = {"http": 80, "https": 443, "ws": 80, "wss": 443, "ftp": 21}

_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.-]*://|^[A-Za-z][A-Za-z0-9+.-]*:")


class LabelError(ValueError):
    """A label name, value, or URL violates the record format."""


def validate_label_name(name: str) -> str:
    """Check that ``name`` is a usable label name and return it.

    Label names are uninterpreted, but they must be non-empty and must not
    contain tab, LF, or CR, which delimit the record format.
    """
    if not name:
        raise LabelError("label name must be non-empty")
    if any(c in name for c in _CONTROL_CHARS):
        raise LabelError(f"label name contains tab/newline: {name!r}")
    return name


def canonicalize_url(raw: str) -> str:
    """Canonicalize ``raw`` into the string form used to key label records.

    Normalization is deliberately minimal: lowercase the scheme and host,
    strip the fragment, and drop an explicit default port.  Path and query
    are preserved byte-for-byte so that distinct resources are never merged.
    Idempotent: canonicalizing a canonical URL returns it unchanged.

    Raises LabelError for anything unusable as a key: empty input, embedded
    tab/newline (would corrupt the record format), a missing scheme, or an
    unparseable netloc.
    """
    if not raw:
        raise LabelError("empty URL")
    if any(c in raw for c in _CONTROL_CHARS):
        raise LabelError(f"URL contains tab/newline: {raw!r}")
    if not _SCHEME_RE.match(raw):
        raise LabelError(f"URL has no scheme: {raw!r}")
    try:
        parts = urlsplit(raw)
        host = parts.hostname  # lowercased by urlsplit
        port = parts.port  # raises ValueError on a non-numeric port
    except ValueError as e:
        raise LabelError(f"unparseable URL {raw!r}: {e}") from None

    scheme = parts.scheme.lower()
    netloc = parts.netloc
    if host is not None:
        userinfo, _, _ = netloc.rpartition("@")
        rebuilt = f"[{host}]" if ":" in host else host  # IPv6 literals keep brackets
        if port is not None and port != _DEFAULT_PORTS.get(scheme):
            rebuilt = f"{rebuilt}:{port}"
        netloc = f"{userinfo}@{rebuilt}" if userinfo else rebuilt
    return urlunsplit((scheme, netloc, parts.path, parts.query, ""))


@dataclass(frozen=True, slots=True)
class LabelRecord:
    """One assertion: label ``label`` applies (+1) or not (-1) to ``url``.

    ``url`` is expected to be canonical (see :func:`canonicalize_url`);
    the parser canonicalizes, and :func:`record` does it for callers
    constructing records from raw URLs.
    """

    label: str
    value: int
    url: str

    def __post_init__(self) -> None:
        validate_label_name(self.label)
        if self.value not in VALID_VALUES:
            raise LabelError(f"label value must be 1 or -1, got {self.value!r}")
        if not self.url or any(c in self.url for c in _CONTROL_CHARS):
            raise LabelError(f"bad record URL: {self.url!r}")

    def line(self) -> str:
        return f"{self.label}\t{self.value}\t{self.url}"


def record(label: str, value: int, raw_url: str) -> LabelRecord:
    """Build a LabelRecord, canonicalizing ``raw_url`` first."""
    return LabelRecord(label, value, canonicalize_url(raw_url))


@dataclass(frozen=True, slots=True)
class ParseWarning:
    """A skipped malformed line: 1-based line number plus reason."""

    line: int
    reason: str


def parse_label_file(data: bytes | str) -> tuple[list[LabelRecord], list[ParseWarning]]:
    """Parse a label file into records, skipping malformed lines with warnings.

    Lines are separated by LF; a trailing CR before the LF is tolerated and
    stripped.  Blank lines are skipped silently.  A malformed line (wrong
    field count, value literal other than "1"/"-1", bad label name, bad URL)
    is skipped and reported; one bad line never poisons the rest of the
    file.  Record order follows line order.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as e:
            return [], [ParseWarning(0, f"not valid UTF-8: {e}")]
    else:
        text = data

    records: list[LabelRecord] = []
    warnings: list[ParseWarning] = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        if line.endswith("\r"):
            line = line[:-1]
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            warnings.append(ParseWarning(lineno, f"expected 3 tab-separated fields, got {len(fields)}"))
            continue
        name, value_text, raw_url = fields
        if value_text == "1":
            value = 1
        elif value_text == "-1":
            value = -1
        else:
            warnings.append(ParseWarning(lineno, f"bad value literal {value_text!r} (must be 1 or -1)"))
            continue
        try:
            rec = LabelRecord(validate_label_name(name), value, canonicalize_url(raw_url))
        except LabelError as e:
            warnings.append(ParseWarning(lineno, str(e)))
            continue
        records.append(rec)
    return records, warnings


def serialize_label_file(records: list[LabelRecord]) -> bytes:
    """Serialize records to the wire/storage format.

    One line per record in input order, LF-terminated, never CRLF.
    ``parse_label_file(serialize_label_file(rs))`` returns exactly ``rs``
    with no warnings.
    """
    return "".join(r.line() + "\n" for r in records).encode("utf-8")
