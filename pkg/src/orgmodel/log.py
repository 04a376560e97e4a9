"""Event logs: the core data model plus CSV ingestion and validation.

An event log is a set of uniquely identified events. Every event carries a
case id, an activity label and a timestamp; a resource is optional, and any
further columns travel along as extra attributes.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from datetime import datetime
from typing import IO, Iterable, Mapping

from .errors import LogSchemaError, RowParseError

#: Attribute names every event log must provide.
MANDATORY_ATTRS = ("case", "activity", "timestamp")

# Tokens accepted in human-readable timestamp patterns. Lowercase mm is the
# month, uppercase MM the minute. Patterns containing '%' are passed to
# strptime unchanged.
_FORMAT_TOKENS = (
    ("yyyy", "%Y"),
    ("dd", "%d"),
    ("mm", "%m"),
    ("HH", "%H"),
    ("MM", "%M"),
    ("SS", "%S"),
)


def to_strptime(pattern: str) -> str:
    """Translate a ``dd-mm-yyyy HH:MM`` style pattern into strptime codes."""
    if "%" in pattern:
        return pattern
    out = pattern
    for token, code in _FORMAT_TOKENS:
        out = out.replace(token, code)
    return out


@dataclass(frozen=True)
class ColumnMapping:
    """Names the CSV columns holding each event attribute.

    ``timestamp_format`` is either a strptime pattern or a readable one
    built from the tokens dd, mm, yyyy, HH, MM, SS.
    """

    case: str
    activity: str
    timestamp: str
    timestamp_format: str = "dd-mm-yyyy HH:MM"
    resource: str | None = None

    def mapped_columns(self) -> list[str]:
        cols = [self.case, self.activity, self.timestamp]
        if self.resource is not None:
            cols.append(self.resource)
        return cols


@dataclass(frozen=True)
class Event:
    """One recorded execution of an activity.

    ``resource`` is None for events nobody is recorded as having executed.
    ``extra_attrs`` holds the non-mandatory attributes by name.
    """

    id: int | str
    case_id: str
    activity: str
    timestamp: datetime
    resource: str | None = None
    extra_attrs: Mapping[str, str] = field(default_factory=dict)

    def __hash__(self):
        # extra_attrs stays out of the hash; equal events still hash equal.
        return hash((self.id, self.case_id, self.activity, self.timestamp, self.resource))


@dataclass(frozen=True)
class EventLog:
    """Immutable collection of events plus the attribute names present."""

    events: tuple[Event, ...]
    attr_names: frozenset[str]

    @classmethod
    def from_events(cls, events: Iterable[Event]) -> "EventLog":
        events = tuple(events)
        names = set(MANDATORY_ATTRS)
        for e in events:
            if e.resource is not None:
                names.add("resource")
            names.update(e.extra_attrs)
        return cls(events=events, attr_names=frozenset(names))

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def activities(self) -> frozenset[str]:
        return frozenset(e.activity for e in self.events)

    def resources(self) -> frozenset[str]:
        return frozenset(e.resource for e in self.events if e.resource is not None)


def resource_events(log: EventLog) -> set[Event]:
    """Events executed by a resource."""
    return {e for e in log.events if e.resource is not None}


def resourceless_events(log: EventLog) -> set[Event]:
    """Events with no recorded resource; complements resource_events."""
    return {e for e in log.events if e.resource is None}


@dataclass(frozen=True)
class ValidationReport:
    """Findings produced by validate(); the log is accepted when no
    mandatory field is missing."""

    duplicate_ids: tuple[int | str, ...]
    mandatory_violations: tuple[tuple[int | str, str], ...]
    n_resourceless: int

    @property
    def accepted(self) -> bool:
        return not self.mandatory_violations


def validate(log: EventLog) -> ValidationReport:
    """Check log-level invariants and report findings without raising."""
    seen: set[int | str] = set()
    duplicates: list[int | str] = []
    violations: list[tuple[int | str, str]] = []
    n_resourceless = 0
    for e in log.events:
        if e.id in seen:
            duplicates.append(e.id)
        seen.add(e.id)
        if not e.case_id:
            violations.append((e.id, "case"))
        if not e.activity:
            violations.append((e.id, "activity"))
        if e.timestamp is None:
            violations.append((e.id, "timestamp"))
        if e.resource is None:
            n_resourceless += 1
    return ValidationReport(
        duplicate_ids=tuple(duplicates),
        mandatory_violations=tuple(violations),
        n_resourceless=n_resourceless,
    )


def _reader(source: str | bytes | IO) -> IO[str]:
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8"))
    if isinstance(source, str):
        return io.StringIO(source)
    if isinstance(source, io.RawIOBase) or isinstance(source, io.BufferedIOBase):
        return io.TextIOWrapper(source, encoding="utf-8")
    return source


def parse_csv(source: str | bytes | IO, mapping: ColumnMapping) -> EventLog:
    """Parse a header-bearing CSV (RFC 4180) into an EventLog.

    Event ids are 0-based data-row indices. Unmapped columns become extra
    attributes; empty or whitespace-only resource cells mean "no resource".
    """
    rows = csv.reader(_reader(source))
    try:
        header = next(rows)
    except StopIteration:
        raise LogSchemaError("CSV is empty, header row required") from None
    dupes = {c for c in header if header.count(c) > 1}
    if dupes:
        raise LogSchemaError(f"duplicate header column(s): {sorted(dupes)}")
    for col in mapping.mapped_columns():
        if col not in header:
            raise LogSchemaError(f"mapped column {col!r} not found in header {header}")
    index = {c: i for i, c in enumerate(header)}
    extra_cols = [c for c in header if c not in mapping.mapped_columns()]
    fmt = to_strptime(mapping.timestamp_format)

    events: list[Event] = []
    for rownum, row in enumerate(rows):
        if len(row) > len(header):
            raise RowParseError(rownum, f"{len(row)} cells, header has {len(header)}")
        if len(row) < len(header):
            row = row + [""] * (len(header) - len(row))
        raw_ts = row[index[mapping.timestamp]]
        try:
            ts = datetime.strptime(raw_ts, fmt)
        except ValueError:
            raise RowParseError(
                rownum, f"timestamp {raw_ts!r} does not match format {mapping.timestamp_format!r}"
            ) from None
        resource: str | None = None
        if mapping.resource is not None:
            cell = row[index[mapping.resource]].strip()
            resource = cell or None
        events.append(
            Event(
                id=rownum,
                case_id=row[index[mapping.case]],
                activity=row[index[mapping.activity]],
                timestamp=ts,
                resource=resource,
                extra_attrs={c: row[index[c]] for c in extra_cols},
            )
        )
    attr_names = set(MANDATORY_ATTRS) | set(extra_cols)
    if mapping.resource is not None:
        attr_names.add("resource")
    return EventLog(events=tuple(events), attr_names=frozenset(attr_names))


def write_csv(log: EventLog, mapping: ColumnMapping, sink: IO[str] | None = None) -> str:
    """Serialize back to CSV with the given mapping; inverse of parse_csv."""
    out = sink or io.StringIO()
    extra_cols = sorted(log.attr_names - set(MANDATORY_ATTRS) - {"resource"})
    header = [mapping.case, mapping.activity, mapping.timestamp]
    if mapping.resource is not None:
        header.append(mapping.resource)
    header += extra_cols
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    fmt = to_strptime(mapping.timestamp_format)
    for e in log.events:
        row = [e.case_id, e.activity, e.timestamp.strftime(fmt)]
        if mapping.resource is not None:
            row.append(e.resource or "")
        row += [e.extra_attrs.get(c, "") for c in extra_cols]
        writer.writerow(row)
    return out.getvalue() if sink is None else ""
