"""Execution modes: typed views of the case, activity and time dimensions.

A mode map bundles three classifiers, one per dimension. Each classifier
realizes a partition: every case id, activity label and timestamp falls in
exactly one type. Classifying the resource-bearing events of a log under a
mode map yields a resource log, the multiset of (resource, mode) pairs that
all downstream mining and conformance checking works from.
"""

from __future__ import annotations

from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime
from typing import Iterable, Mapping, Sequence, Union

from .errors import ClassificationError, DataError, ParameterError
from .log import Event, EventLog

#: Reserved name of the single all-covering type on a dimension.
ANY = "⊥"

WEEKDAY_NAMES = ("Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday")
#: Positional aliases accepted wherever a weekday type name is expected.
WEEKDAY_ALIASES = {f"TT.{i + 1}": name for i, name in enumerate(WEEKDAY_NAMES)}


@dataclass(frozen=True, order=True)
class ExecutionMode:
    """A (case type, activity type, time type) triple."""

    ct: str
    at: str
    tt: str

    def __post_init__(self):
        if not (self.ct and self.at and self.tt):
            raise ValueError(f"execution mode components must be non-empty: {self!r}")

    @property
    def triple(self) -> tuple[str, str, str]:
        return (self.ct, self.at, self.tt)

    def __str__(self) -> str:
        return f"({self.ct}, {self.at}, {self.tt})"


# ---------------------------------------------------------------------------
# case dimension


@dataclass(frozen=True)
class SingleCaseType:
    """Every case has the same type."""

    def classify(self, event: Event) -> str:
        return ANY

    def type_names(self) -> frozenset[str]:
        return frozenset({ANY})


@dataclass(frozen=True)
class CaseAttributeTypes:
    """One case type per distinct value of a case-level attribute.

    ``case_types`` records the case ids seen per type at learning time and
    doubles as an extensional fallback for events that do not carry the
    attribute themselves.
    """

    attribute: str
    case_types: Mapping[str, frozenset[str]]
    _case_to_type: Mapping[str, str] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        reverse: dict[str, str] = {}
        for name, cases in self.case_types.items():
            for c in cases:
                if reverse.get(c, name) != name:
                    raise ParameterError(f"case {c!r} assigned to two case types")
                reverse[c] = name
        object.__setattr__(self, "_case_to_type", reverse)

    def classify(self, event: Event) -> str:
        value = event.extra_attrs.get(self.attribute, "")
        if value:
            return value
        known = self._case_to_type.get(event.case_id)
        if known is not None:
            return known
        raise ClassificationError(
            f"event {event.id!r} lacks case attribute {self.attribute!r} "
            f"and case {event.case_id!r} was not seen at learning time"
        )

    def type_names(self) -> frozenset[str]:
        return frozenset(self.case_types)


# ---------------------------------------------------------------------------
# activity dimension


@dataclass(frozen=True)
class LabelActivityTypes:
    """Each known activity label is its own type, named by the label."""

    labels: frozenset[str]

    def classify_label(self, label: str) -> str:
        if label not in self.labels:
            raise ClassificationError(f"unknown activity label {label!r}")
        return label

    def type_names(self) -> frozenset[str]:
        return self.labels

    def known_labels(self) -> frozenset[str]:
        return self.labels


@dataclass(frozen=True)
class GroupedActivityTypes:
    """User-defined grouping of activity labels into named types."""

    groups: Mapping[str, frozenset[str]]
    _label_to_type: Mapping[str, str] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        reverse: dict[str, str] = {}
        for name, labels in self.groups.items():
            if not labels:
                raise ParameterError(f"activity type {name!r} has no labels")
            for label in labels:
                if reverse.get(label, name) != name:
                    raise ParameterError(f"activity label {label!r} assigned to two types")
                reverse[label] = name
        object.__setattr__(self, "_label_to_type", reverse)

    def classify_label(self, label: str) -> str:
        try:
            return self._label_to_type[label]
        except KeyError:
            raise ClassificationError(f"unknown activity label {label!r}") from None

    def type_names(self) -> frozenset[str]:
        return frozenset(self.groups)

    def known_labels(self) -> frozenset[str]:
        return frozenset(self._label_to_type)


# ---------------------------------------------------------------------------
# time dimension


@dataclass(frozen=True)
class SingleTimeType:
    """Every timestamp has the same type."""

    def classify(self, ts: datetime) -> str:
        return ANY

    def type_names(self) -> frozenset[str]:
        return frozenset({ANY})

    def normalize(self, name: str) -> str:
        return name


@dataclass(frozen=True)
class WeekdayTimeTypes:
    """Seven types, one per weekday; TT.1 .. TT.7 are accepted aliases."""

    def classify(self, ts: datetime) -> str:
        return WEEKDAY_NAMES[ts.weekday()]

    def type_names(self) -> frozenset[str]:
        return frozenset(WEEKDAY_NAMES)

    def normalize(self, name: str) -> str:
        return WEEKDAY_ALIASES.get(name, name)


@dataclass(frozen=True)
class ClockIntervalTimeTypes:
    """Partition of the day into half-open [start, next start) intervals.

    ``boundaries`` holds (start minute-of-day, type name) pairs; the first
    interval must start at 00:00 so the whole day is covered, and the last
    one runs to midnight.
    """

    boundaries: tuple[tuple[int, str], ...]

    def __post_init__(self):
        if not self.boundaries:
            raise ParameterError("at least one clock interval is required")
        starts = [s for s, _ in self.boundaries]
        names = [n for _, n in self.boundaries]
        if starts[0] != 0:
            raise ParameterError("first clock interval must start at 00:00")
        if any(b <= a for a, b in zip(starts, starts[1:])) or starts[-1] >= 24 * 60:
            raise ParameterError("clock interval starts must be strictly increasing and below 24:00")
        if len(set(names)) != len(names):
            raise ParameterError("clock interval type names must be unique")

    @classmethod
    def from_spec(cls, spec: Iterable[tuple[str, str]]) -> "ClockIntervalTimeTypes":
        """Build from ("HH:MM", name) pairs."""
        boundaries = []
        for start, name in spec:
            hh, _, mm = start.partition(":")
            try:
                minute = int(hh) * 60 + int(mm)
            except ValueError:
                raise ParameterError(f"bad clock boundary {start!r}, expected HH:MM") from None
            boundaries.append((minute, name))
        return cls(boundaries=tuple(sorted(boundaries)))

    def classify(self, ts: datetime) -> str:
        minute = ts.hour * 60 + ts.minute
        i = bisect_right([s for s, _ in self.boundaries], minute) - 1
        return self.boundaries[i][1]

    def type_names(self) -> frozenset[str]:
        return frozenset(n for _, n in self.boundaries)

    def normalize(self, name: str) -> str:
        return name


CaseClassifier = Union[SingleCaseType, CaseAttributeTypes]
ActClassifier = Union[LabelActivityTypes, GroupedActivityTypes]
TimeClassifier = Union[SingleTimeType, WeekdayTimeTypes, ClockIntervalTimeTypes]


# ---------------------------------------------------------------------------
# the mode map


@dataclass(frozen=True)
class ExecutionModeMap:
    """Total, single-valued classifiers for all three dimensions."""

    case_classifier: CaseClassifier
    act_classifier: ActClassifier
    time_classifier: TimeClassifier

    def classify(self, event: Event) -> ExecutionMode:
        """Map an event onto the unique execution mode accepting it."""
        return ExecutionMode(
            ct=self.case_classifier.classify(event),
            at=self.act_classifier.classify_label(event.activity),
            tt=self.time_classifier.classify(event.timestamp),
        )

    def known_activities(self) -> frozenset[str]:
        return self.act_classifier.type_names() if isinstance(
            self.act_classifier, LabelActivityTypes
        ) else frozenset(self.act_classifier._label_to_type)

    def normalize_mode(self, ct: str, at: str, tt: str) -> ExecutionMode:
        """Build a mode, resolving time-type aliases to canonical names."""
        return ExecutionMode(ct=ct, at=at, tt=self.time_classifier.normalize(tt))

    def check_mode(self, mode: ExecutionMode) -> None:
        """Raise ValueError if any component is not a known type name."""
        for value, names, dim in (
            (mode.ct, self.case_classifier.type_names(), "case"),
            (mode.at, self.act_classifier.type_names(), "activity"),
            (mode.tt, self.time_classifier.type_names(), "time"),
        ):
            if value not in names:
                raise ValueError(f"unknown {dim} type {value!r}")


def classify_event(mode_map: ExecutionModeMap, event: Event) -> ExecutionMode:
    """Free-function form of ExecutionModeMap.classify."""
    return mode_map.classify(event)


# ---------------------------------------------------------------------------
# learning mode maps from a log


def learn_atonly(log: EventLog) -> ExecutionModeMap:
    """One activity type per distinct label; case and time collapse to one type."""
    if not log.events:
        raise DataError("cannot learn execution modes from an empty log")
    return ExecutionModeMap(
        case_classifier=SingleCaseType(),
        act_classifier=LabelActivityTypes(labels=log.activities()),
        time_classifier=SingleTimeType(),
    )


TimeRule = Union[str, Sequence[tuple[str, str]], TimeClassifier]


def _make_time_classifier(rule: TimeRule) -> TimeClassifier:
    if isinstance(rule, (SingleTimeType, WeekdayTimeTypes, ClockIntervalTimeTypes)):
        return rule
    if rule == "weekday":
        return WeekdayTimeTypes()
    if rule == "single":
        return SingleTimeType()
    if isinstance(rule, str):
        raise ParameterError(f"unknown time rule {rule!r}")
    return ClockIntervalTimeTypes.from_spec(rule)


def learn_cat_case_attr(
    log: EventLog,
    case_attr: str,
    time_rule: TimeRule = "weekday",
    act_groups: Mapping[str, Iterable[str]] | None = None,
) -> ExecutionModeMap:
    """Case types from a case-level attribute, with configurable time types.

    Every case must carry one consistent value of ``case_attr`` across its
    events. Activity types default to one per label; ``act_groups`` replaces
    that with a named grouping, which must cover every label in the log.
    """
    if not log.events:
        raise DataError("cannot learn execution modes from an empty log")
    value_by_case: dict[str, str] = {}
    for e in log.events:
        value = e.extra_attrs.get(case_attr, "")
        if not value:
            raise ClassificationError(f"event {e.id!r} is missing case attribute {case_attr!r}")
        seen = value_by_case.setdefault(e.case_id, value)
        if seen != value:
            raise DataError(
                f"case {e.case_id!r} has conflicting values for {case_attr!r}: "
                f"{seen!r} vs {value!r}"
            )
    cases_by_type: dict[str, set[str]] = {}
    for case_id, value in value_by_case.items():
        cases_by_type.setdefault(value, set()).add(case_id)
    case_classifier = CaseAttributeTypes(
        attribute=case_attr,
        case_types={name: frozenset(cases) for name, cases in cases_by_type.items()},
    )

    if act_groups is None:
        act_classifier: ActClassifier = LabelActivityTypes(labels=log.activities())
    else:
        act_classifier = GroupedActivityTypes(
            groups={name: frozenset(labels) for name, labels in act_groups.items()}
        )
        uncovered = sorted(log.activities() - set(act_classifier._label_to_type))
        if uncovered:
            raise DataError(f"activity grouping does not cover label(s): {uncovered}")

    return ExecutionModeMap(
        case_classifier=case_classifier,
        act_classifier=act_classifier,
        time_classifier=_make_time_classifier(time_rule),
    )


# ---------------------------------------------------------------------------
# resource logs


@dataclass(frozen=True)
class ResourceLog:
    """Multiset of (resource, execution mode) pairs with multiplicities."""

    counts: Mapping[tuple[str, ExecutionMode], int]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, ExecutionMode]]) -> "ResourceLog":
        return cls(counts=dict(Counter(pairs)))

    def __len__(self) -> int:
        return sum(self.counts.values())

    def count(self, resource: str, mode: ExecutionMode) -> int:
        return self.counts.get((resource, mode), 0)

    def resources(self) -> frozenset[str]:
        return frozenset(r for r, _ in self.counts)

    def modes(self) -> frozenset[ExecutionMode]:
        return frozenset(m for _, m in self.counts)

    def items(self) -> Iterable[tuple[tuple[str, ExecutionMode], int]]:
        return self.counts.items()


def derive_resource_log(log: EventLog, mode_map: ExecutionModeMap) -> ResourceLog:
    """Classify every resource-bearing event; multiplicity counts repeats."""
    pairs = [
        (e.resource, mode_map.classify(e)) for e in log.events if e.resource is not None
    ]
    return ResourceLog.from_pairs(pairs)
