"""Fuel consumption, tank accounting and the refueling-cost objective."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class FuelModel:
    km_per_liter: float = 3.5

    def __post_init__(self):
        if not self.km_per_liter > 0:
            raise ValueError("km_per_liter must be positive")

    @property
    def liters_per_km(self) -> float:
        return 1.0 / self.km_per_liter


@dataclass(frozen=True)
class VehicleState:
    fuel_l: float
    tank_l: float

    def __post_init__(self):
        if not self.tank_l > 0:
            raise ValueError("tank capacity must be positive")
        if not (-1e-9 <= self.fuel_l <= self.tank_l + 1e-9):
            raise ValueError(f"fuel {self.fuel_l} l outside [0, {self.tank_l}]")

    def range_km(self, m: FuelModel) -> float:
        return self.fuel_l * m.km_per_liter

    def burn(self, m: FuelModel, d: float) -> "VehicleState":
        left = self.fuel_l - liters_for(m, d)
        if left < -1e-9:
            raise ValueError(f"ran dry: {d} km needs {liters_for(m, d)} l, have {self.fuel_l} l")
        return VehicleState(max(left, 0.0), self.tank_l)

    def filled(self) -> "VehicleState":
        return VehicleState(self.tank_l, self.tank_l)


def liters_for(m: FuelModel, d: float) -> float:
    if d < 0:
        raise ValueError("negative distance")
    return d / m.km_per_liter


def distance_to_level(m: FuelModel, v: VehicleState, target_l: float) -> float:
    """Kilometres until the tank drains from its current level to ``target_l``."""
    if target_l < 0 or target_l > v.fuel_l + 1e-12:
        raise ValueError(f"target {target_l} l not in [0, {v.fuel_l}]")
    return (v.fuel_l - target_l) * m.km_per_liter


def leg_cost(m: FuelModel, d: float, price: float) -> float:
    if d < 0:
        raise ValueError("negative distance")
    if not price > 0:
        raise ValueError("price must be positive")
    return d / m.km_per_liter * price


@dataclass(frozen=True)
class FuelLeg:
    """Distance driven between two refuel points, charged at the first one's price."""

    distance: float
    price: float


def path_fuel_cost(m: FuelModel, legs: Iterable[FuelLeg | Sequence[float]]) -> float:
    total = 0.0
    for leg in legs:
        if isinstance(leg, FuelLeg):
            d, p = leg.distance, leg.price
        else:
            d, p = leg
        total += leg_cost(m, d, p)
    return total
