"""Common result container returned by every scheme."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .model import PowerProfile, Scenario
from .tariff import CostBreakdown, EnergyLedger


@dataclass(frozen=True, eq=False)
class SchemeResult:
    scheme: str
    profile: PowerProfile
    ledger: EnergyLedger
    cost: CostBreakdown
    allocation: Any
    supply: tuple[float, ...]
    notes: tuple[str, ...] = ()

    @property
    def total(self) -> float:
        return self.cost.total

    def rates(self, s: Scenario) -> np.ndarray:
        """Rate each terminal actually gets under this allocation."""
        return np.asarray(self.allocation.rates(s), dtype=float)

    def to_record(self) -> dict:
        led = self.ledger
        rec = {
            "scheme": self.scheme,
            "supply": list(self.supply),
            "consumption": list(self.profile.per_bs_power),
            "total": self.total,
            "cost": self.cost.as_dict(),
            "ledger": {
                "grid_buy": list(led.grid_buy),
                "agg_buy": list(led.agg_buy),
                "agg_sell": list(led.agg_sell),
                "transfers": [{"from": t.source, "to": t.target, "amount": t.amount,
                               "delivered": t.delivered} for t in led.transfers],
                "contract_fee_paid": led.contract_fee_paid,
            },
        }
        alloc = self.allocation
        if hasattr(alloc, "shared_amount"):
            rec["shared_amount"] = alloc.shared_amount
        if hasattr(alloc, "serving_bs"):
            rec["serving_bs"] = list(alloc.serving_bs)
        if hasattr(alloc, "prices") and alloc.prices:
            rec["comp_prices"] = list(alloc.prices)
        if self.notes:
            rec["notes"] = list(self.notes)
        return rec


def make_result(scheme: str, s: Scenario, profile: PowerProfile, ledger: EnergyLedger,
                cost: CostBreakdown, allocation, notes=()) -> SchemeResult:
    supply = tuple(float(x) for x in ledger.supply(s.harvest))
    return SchemeResult(scheme, profile, ledger, cost, allocation, supply, tuple(notes))
