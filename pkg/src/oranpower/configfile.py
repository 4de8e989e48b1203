"""Flat ``section.key = value`` config parsing shared by the catalog and the CLI."""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Callable


class ConfigError(ValueError):
    """Malformed config text, unknown key, or non-numeric value."""


@dataclass(frozen=True)
class ConfigEntry:
    value: str
    lineno: int


def parse_config_text(text: str, warn: Callable[[str], None] | None = None) -> dict[str, ConfigEntry]:
    """Parse UTF-8 key-value config text into ``{key: ConfigEntry}``.

    One ``section.key = value`` per line; ``#`` starts a comment; blank
    lines are skipped; whitespace around ``=`` is ignored. A duplicate key
    wins over earlier occurrences and emits a warning on the diagnostic
    stream (stderr unless ``warn`` is supplied).
    """
    if warn is None:
        warn = lambda msg: print(msg, file=sys.stderr)
    entries: dict[str, ConfigEntry] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'section.key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key or "." not in key:
            raise ConfigError(f"line {lineno}: key must look like 'section.key', got {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for key {key!r}")
        if key in entries:
            warn(f"config warning: duplicate key {key!r} on line {lineno}, last value wins")
        entries[key] = ConfigEntry(value=value, lineno=lineno)
    return entries


def float_value(key: str, entry: ConfigEntry) -> float:
    try:
        return float(entry.value)
    except ValueError:
        raise ConfigError(
            f"line {entry.lineno}: non-numeric value {entry.value!r} for key {key!r}"
        ) from None


def int_value(key: str, entry: ConfigEntry) -> int:
    number = float_value(key, entry)
    if not number.is_integer():
        raise ConfigError(f"line {entry.lineno}: key {key!r} requires an integer, got {entry.value!r}")
    return int(number)
