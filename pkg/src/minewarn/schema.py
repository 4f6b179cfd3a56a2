"""Safety-indicator catalogue and the five-level warning scale."""

from __future__ import annotations

import enum
from collections.abc import Collection
from dataclasses import dataclass

_ORIENTATIONS = ("benefit", "cost")


class WarningLevel(enum.IntEnum):
    """Warning severity; larger values mean more danger."""

    LOW = 0
    LOWER = 1
    MEDIUM = 2
    HIGHER = 3
    HIGH = 4

    @property
    def label(self) -> str:
        """Human-readable name, e.g. ``"Higher"``."""
        return self.name.capitalize()


def classify_warning(score: float) -> WarningLevel:
    """Map a network score to a warning level.

    The score is clamped to [0, 1] and cut into five equal-width bins. Higher
    scores mean a safer state, so severity falls as the score rises: scores
    below 0.2 classify as High, scores of 0.8 and above as Low.
    """
    s = min(max(float(score), 0.0), 1.0)
    if s < 0.2:
        return WarningLevel.HIGH
    if s < 0.4:
        return WarningLevel.HIGHER
    if s < 0.6:
        return WarningLevel.MEDIUM
    if s < 0.8:
        return WarningLevel.LOWER
    return WarningLevel.LOW


@dataclass(frozen=True)
class Indicator:
    """One second-level safety indicator.

    ``orientation`` states how the raw value relates to safety: "benefit"
    means larger is safer, "cost" means larger is more dangerous.
    """

    code: str
    name: str
    group: str
    orientation: str = "benefit"

    def __post_init__(self) -> None:
        if self.orientation not in _ORIENTATIONS:
            raise ValueError(
                f"orientation must be one of {_ORIENTATIONS}, got {self.orientation!r}"
            )


@dataclass(frozen=True)
class IndicatorSchema:
    """Ordered collection of indicators; the order fixes the feature layout."""

    indicators: tuple[Indicator, ...]

    def __post_init__(self) -> None:
        if not self.indicators:
            raise ValueError("schema needs at least one indicator")
        codes = [ind.code for ind in self.indicators]
        if len(set(codes)) != len(codes):
            raise ValueError("indicator codes must be unique")

    def __len__(self) -> int:
        return len(self.indicators)

    @property
    def codes(self) -> tuple[str, ...]:
        return tuple(ind.code for ind in self.indicators)

    @property
    def orientations(self) -> tuple[str, ...]:
        return tuple(ind.orientation for ind in self.indicators)


_GROUP_PERSONNEL = "Unsafe Behavior of Personnel"
_GROUP_EQUIPMENT = "Unsafe State of Objects"
_GROUP_ENVIRONMENT = "Unsafe Factors in the Working Environment"
_GROUP_MANAGEMENT = "Unsafe Organization and Management"

_DEFAULT_INDICATORS = (
    ("X11", "Security Inspections", _GROUP_PERSONNEL),
    ("X12", "Training Status", _GROUP_PERSONNEL),
    ("X13", "Technical Staff Capacity", _GROUP_PERSONNEL),
    ("X14", "Years of Experience", _GROUP_PERSONNEL),
    ("X15", "Educational Attainment", _GROUP_PERSONNEL),
    ("X21", "Equipment Mechanization Level", _GROUP_EQUIPMENT),
    ("X22", "Equipment in Good Condition", _GROUP_EQUIPMENT),
    ("X23", "Firefighting Equipment Integrity Rate", _GROUP_EQUIPMENT),
    ("X24", "Automation of Safety Monitoring Equipment", _GROUP_EQUIPMENT),
    ("X31", "Coal Dust Prevention and Control", _GROUP_ENVIRONMENT),
    ("X32", "Roof Prevention and Control", _GROUP_ENVIRONMENT),
    ("X33", "Gas Prevention and Control", _GROUP_ENVIRONMENT),
    ("X34", "Fire Prevention and Control", _GROUP_ENVIRONMENT),
    ("X35", "Flood Prevention and Control", _GROUP_ENVIRONMENT),
    ("X41", "Hidden Danger Inspection Pass Rate", _GROUP_MANAGEMENT),
    ("X42", "Implementation of Security Management", _GROUP_MANAGEMENT),
    ("X43", "Security Inspections", _GROUP_MANAGEMENT),
    ("X44", "Degree of Commitment to Security", _GROUP_MANAGEMENT),
    ("X45", "Monthly Safety Training", _GROUP_MANAGEMENT),
)


def default_schema(cost_codes: Collection[str] = ()) -> IndicatorSchema:
    """The standard 19-indicator schema.

    Every indicator defaults to benefit orientation (a larger raw value means
    a safer state). Pass codes in ``cost_codes`` to flip individual indicators
    to cost orientation before normalization.
    """
    known = {code for code, _, _ in _DEFAULT_INDICATORS}
    unknown = set(cost_codes) - known
    if unknown:
        raise ValueError(f"unknown indicator codes: {sorted(unknown)}")
    indicators = tuple(
        Indicator(code, name, group, "cost" if code in cost_codes else "benefit")
        for code, name, group in _DEFAULT_INDICATORS
    )
    return IndicatorSchema(indicators)
