"""Calendar-month arithmetic for ``YYYY-MM`` tagged data.

Months are handled as integer indices (year*12 + month-1) so window and
range logic is plain integer arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import DataError

_MONTH_RE = re.compile(r"^(\d{4})-(\d{2})$")


def month_index(label: str) -> int:
    """Convert a ``YYYY-MM`` label to an absolute month index."""
    m = _MONTH_RE.match(label.strip())
    if not m:
        raise DataError(f"invalid month label {label!r}, expected YYYY-MM")
    year, month = int(m.group(1)), int(m.group(2))
    if not 1 <= month <= 12:
        raise DataError(f"invalid month label {label!r}, month out of 1..12")
    return year * 12 + (month - 1)


def month_label(index: int) -> str:
    """Convert an absolute month index back to ``YYYY-MM``."""
    year, month = divmod(index, 12)
    return f"{year:04d}-{month + 1:02d}"


@dataclass(frozen=True, order=True)
class MonthRange:
    """Inclusive span of calendar months, stored as absolute indices."""

    start: int
    end: int

    def __post_init__(self):
        if self.end < self.start:
            raise DataError(
                f"month range ends ({month_label(self.end)}) before it "
                f"starts ({month_label(self.start)})"
            )

    @classmethod
    def from_labels(cls, start: str, end: str) -> "MonthRange":
        return cls(month_index(start), month_index(end))

    def __contains__(self, index: int) -> bool:
        return self.start <= index <= self.end

    def __len__(self) -> int:
        return self.end - self.start + 1

    def months(self) -> range:
        return range(self.start, self.end + 1)

    def label(self) -> str:
        return f"{month_label(self.start)}..{month_label(self.end)}"
