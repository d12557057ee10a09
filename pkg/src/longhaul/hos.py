"""EU hours-of-service budgets: continuous, daily and weekly driving limits."""
from __future__ import annotations

import enum
from dataclasses import dataclass

EPS = 1e-9


class StopType(str, enum.Enum):
    F = "F"
    B = "B"
    D = "D"
    W = "W"


REST_TIERS = (StopType.B, StopType.D, StopType.W)


@dataclass(frozen=True)
class HosRules:
    cont_max: float = 4.5
    break_h: float = 0.75
    daily_max: float = 9.0
    daily_rest_h: float = 11.0
    weekly_max: float = 56.0
    weekly_rest_h: float = 45.0
    fuel_stop_h: float = 0.25

    def __post_init__(self):
        for name, value in vars(self).items():
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value}")

    def rest_duration(self, tier: StopType) -> float:
        return {
            StopType.B: self.break_h,
            StopType.D: self.daily_rest_h,
            StopType.W: self.weekly_rest_h,
        }[tier]


EU_RULES = HosRules()


class HosViolation(ValueError):
    """Driving past a budget; ``rule`` names the binding limit."""

    def __init__(self, rule: str, requested: float, available: float):
        super().__init__(f"{rule} driving limit: requested {requested:.6f} h, {available:.6f} h left")
        self.rule = rule
        self.requested = requested
        self.available = available


@dataclass(frozen=True)
class DriverState:
    """Hours of driving left before a break, a daily rest and a weekly rest."""

    cont_h: float
    daily_h: float
    weekly_h: float

    def __post_init__(self):
        self.validate(EU_RULES)

    def validate(self, rules: HosRules) -> None:
        for name, value, cap in (
            ("continuous", self.cont_h, rules.cont_max),
            ("daily", self.daily_h, rules.daily_max),
            ("weekly", self.weekly_h, rules.weekly_max),
        ):
            if not (-EPS <= value <= cap + EPS):
                raise ValueError(f"{name} budget {value} outside [0, {cap}]")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.cont_h, self.daily_h, self.weekly_h)


def fresh_driver(rules: HosRules = EU_RULES) -> DriverState:
    return DriverState(rules.cont_max, rules.daily_max, rules.weekly_max)


def remaining_drive(s: DriverState) -> float:
    return min(s.cont_h, s.daily_h, s.weekly_h)


def binding_rule(s: DriverState) -> str:
    """Name of the budget that runs out first (the longer rest wins a tie)."""
    m = remaining_drive(s)
    if s.weekly_h <= m + EPS:
        return "weekly"
    if s.daily_h <= m + EPS:
        return "daily"
    return "continuous"


def required_tier(s: DriverState) -> StopType:
    return {"weekly": StopType.W, "daily": StopType.D, "continuous": StopType.B}[binding_rule(s)]


def _clip(x: float) -> float:
    return 0.0 if x < 0 else x


def drive(s: DriverState, h: float) -> DriverState:
    if h < 0:
        raise ValueError(f"negative driving time {h}")
    avail = remaining_drive(s)
    if h > avail + EPS:
        raise HosViolation(binding_rule(s), h, avail)
    return DriverState(_clip(s.cont_h - h), _clip(s.daily_h - h), _clip(s.weekly_h - h))


def apply_rest(s: DriverState, t: StopType, rules: HosRules = EU_RULES) -> tuple[DriverState, float]:
    """Reset budgets per the rest tier; a daily rest is also a break and a
    weekly rest is also a daily rest."""
    if t == StopType.B:
        return DriverState(rules.cont_max, s.daily_h, s.weekly_h), rules.break_h
    if t == StopType.D:
        return DriverState(rules.cont_max, rules.daily_max, s.weekly_h), rules.daily_rest_h
    if t == StopType.W:
        return DriverState(rules.cont_max, rules.daily_max, rules.weekly_max), rules.weekly_rest_h
    raise ValueError(f"{t!r} is not a rest type")


def tier_rank(t: StopType) -> int:
    return REST_TIERS.index(t)
