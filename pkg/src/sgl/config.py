"""Flat ``key = value`` config files for the command-line front end.

One assignment per line, ``#`` starts a comment, values are typed by the
subcommand's schema: ints, floats, booleans, inclusive integer ranges
``lo..hi``, comma lists of floats, and spectrum literals
``[lo,hi; lo,hi]``.  Every parse failure carries the offending line
number so the CLI can point at it.
"""

import hashlib

from .errors import ConfigError, SglError
from .spectra import parse_spectrum_literal

REQUIRED = object()


def parse_config(text):
    """-> list of (key, raw_value, line); duplicates are an error."""
    entries = []
    seen = {}
    for ln, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"expected 'key = value', got {body!r}", line=ln)
        key, raw = (part.strip() for part in body.split("=", 1))
        if not key:
            raise ConfigError("missing key before '='", line=ln)
        if key in seen:
            raise ConfigError(
                f"duplicate key {key!r} (first set at line {seen[key]})",
                line=ln,
            )
        if not raw:
            raise ConfigError(f"missing value for {key!r}", line=ln)
        seen[key] = ln
        entries.append((key, raw, ln))
    return entries


def _as_bool(raw):
    low = raw.lower()
    if low not in ("true", "false"):
        raise ValueError(f"expected true/false, got {raw!r}")
    return low == "true"


def _as_intrange(raw):
    # inclusive `lo..hi`, negatives allowed
    lo, sep, hi = raw.partition("..")
    if not sep:
        raise ValueError(f"expected 'lo..hi', got {raw!r}")
    lo, hi = int(lo), int(hi)
    if hi < lo:
        raise ValueError(f"empty range {raw!r}")
    return lo, hi


def _as_floats(raw):
    parts = [p.strip() for p in raw.split(",")]
    if not all(parts):
        raise ValueError(f"malformed float list {raw!r}")
    return tuple(float(p) for p in parts)


_COERCE = {
    "int": int,
    "float": float,
    "str": str,
    "bool": _as_bool,
    "intrange": _as_intrange,
    "floats": _as_floats,
    "spectrum": parse_spectrum_literal,
}


def apply_schema(entries, schema):
    """Coerce ``entries`` per ``schema``: key -> (kind, default).

    Unknown keys and coercion failures raise ConfigError with the line
    number; ``REQUIRED`` defaults must be present.
    """
    out = {}
    for key, raw, ln in entries:
        if key not in schema:
            raise ConfigError(f"unknown key {key!r}", line=ln)
        kind = schema[key][0]
        try:
            out[key] = _COERCE[kind](raw)
        except (ValueError, SglError) as exc:
            raise ConfigError(
                f"bad value for {key!r} (expected {kind}): {exc}", line=ln
            ) from None
    missing = []
    for key, (kind, default) in schema.items():
        if key in out:
            continue
        if default is REQUIRED:
            missing.append(key)
        else:
            out[key] = default
    if missing:
        raise ConfigError(
            "missing required key(s) " + ", ".join(repr(k) for k in missing)
        )
    return out


def with_overrides(entries, overrides):
    """Replace or append raw values (CLI flags beat the file)."""
    live = {k: raw for k, raw in overrides.items() if raw is not None}
    out = []
    for key, raw, ln in entries:
        if key in live:
            raw = live.pop(key)
        out.append((key, raw, ln))
    out.extend((key, raw, 0) for key, raw in sorted(live.items()))
    return out


def config_hash(subcommand, entries):
    """12-hex digest of the effective config; names the CSV artifact."""
    canon = [str(subcommand)]
    canon.extend(f"{k} = {raw}" for k, raw, _ in sorted(entries))
    digest = hashlib.sha256("\n".join(canon).encode()).hexdigest()
    return digest[:12]
