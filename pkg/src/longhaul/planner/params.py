from __future__ import annotations

from dataclasses import asdict, dataclass, field

from ..fuel import FuelModel
from ..hos import EU_RULES, HosRules


@dataclass(frozen=True)
class PlannerParams:
    k: int = 3
    sigma: float = 1.1
    beta: float = 0.10
    gamma: float = 0.05
    delta: float = 0.05
    radius_km: float = 5.0
    interval_km: float = 5.0
    min_rest_window_h: float = 1.0 / 6.0
    max_tree_nodes: int = 200_000
    max_depth: int = 12
    threads: int = 1
    fuel_model: FuelModel = field(default_factory=FuelModel)
    rules: HosRules = EU_RULES
    # current-practice baseline
    cp_upper: float = 0.02
    cp_lower: float = 0.01
    cp_combine_h: float = 0.5

    def __post_init__(self):
        if not (0 < self.gamma < self.beta < 1):
            raise ValueError("need 0 < gamma < beta < 1")
        if self.sigma < 1:
            raise ValueError("sigma must be >= 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not (self.radius_km > 0 and self.interval_km > 0):
            raise ValueError("radius and interval must be positive")
        if not (0 <= self.delta < 1):
            raise ValueError("delta must lie in [0, 1)")
        if self.min_rest_window_h < 0:
            raise ValueError("min_rest_window_h must be >= 0")
        if self.max_tree_nodes < 1 or self.max_depth < 1:
            raise ValueError("safety caps must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if not (0 < self.cp_lower < self.cp_upper < 1):
            raise ValueError("need 0 < cp_lower < cp_upper < 1")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["fuel_model"] = {"km_per_liter": self.fuel_model.km_per_liter}
        d.pop("threads")  # not part of the result's identity
        return d
