"""Calendar month keys of the form ``YYYY-MM``."""

from __future__ import annotations

import re

_MONTH_RE = re.compile(r"^(\d{4})-(\d{2})$")


def parse_month(text: str) -> tuple[int, int]:
    """Parse a ``YYYY-MM`` string into ``(year, month)``."""
    m = _MONTH_RE.match(text)
    if not m:
        raise ValueError(f"invalid month {text!r}, expected YYYY-MM")
    year, month = int(m.group(1)), int(m.group(2))
    if not 1 <= month <= 12:
        raise ValueError(f"invalid month {text!r}, month must be 01..12")
    return year, month


def month_index(text: str) -> int:
    """Months since year 0, so consecutive calendar months differ by 1."""
    year, month = parse_month(text)
    return year * 12 + (month - 1)


def format_month(year: int, month: int) -> str:
    return f"{year:04d}-{month:02d}"


def next_month(text: str) -> str:
    """The following calendar month; December rolls into January."""
    year, month = parse_month(text)
    if month == 12:
        return format_month(year + 1, 1)
    return format_month(year, month + 1)
