"""Energy cost models and the settlement that realizes them.

Three supply-side regimes are covered:

* baseline: each deficit BS buys its shortfall from the grid, surplus is wasted;
* aggregator trading: surplus is sold at the sell price, deficits buy at the
  aggregator buy price up to an aggregate quota equal to the sold surplus,
  and the remainder comes from the grid;
* aggregator sharing: surplus is moved to deficit BSs through pairwise
  transfers for a flat contract fee.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, TariffError
from .model import PowerProfile, Scenario, Tariff


@dataclass(frozen=True)
class Transfer:
    source: int
    target: int
    amount: float       # injected by ``source``
    delivered: float    # drawn by ``target`` after transfer loss


@dataclass(frozen=True)
class EnergyLedger:
    grid_buy: tuple[float, ...]
    agg_buy: tuple[float, ...]
    agg_sell: tuple[float, ...]
    transfers: tuple[Transfer, ...] = ()
    contract_fee_paid: float = 0.0

    @classmethod
    def grid_only(cls, power, harvest) -> "EnergyLedger":
        power, harvest = np.asarray(power, float), np.asarray(harvest, float)
        zero = (0.0,) * power.size
        return cls(_tup(np.maximum(power - harvest, 0.0)), zero, zero)

    def injected(self) -> np.ndarray:
        out = np.zeros(len(self.grid_buy))
        for t in self.transfers:
            out[t.source] += t.amount
        return out

    def received(self) -> np.ndarray:
        out = np.zeros(len(self.grid_buy))
        for t in self.transfers:
            out[t.target] += t.delivered
        return out

    def supply(self, harvest) -> np.ndarray:
        """Renewable energy available to each BS after cooperation.

        Harvest minus what was sold or injected, plus what was bought from the
        aggregator or received through sharing.  Grid purchases are excluded.
        """
        return (np.asarray(harvest, float) - np.asarray(self.agg_sell) - self.injected()
                + np.asarray(self.agg_buy) + self.received())


@dataclass(frozen=True)
class CostBreakdown:
    grid_cost: float = 0.0
    agg_buy_cost: float = 0.0
    agg_sell_revenue: float = 0.0
    contract_fee: float = 0.0

    @property
    def total(self) -> float:
        return self.grid_cost + self.agg_buy_cost - self.agg_sell_revenue + self.contract_fee

    def as_dict(self) -> dict:
        return {"grid_cost": self.grid_cost, "agg_buy_cost": self.agg_buy_cost,
                "agg_sell_revenue": self.agg_sell_revenue,
                "contract_fee": self.contract_fee, "total": self.total}


def _tup(a) -> tuple[float, ...]:
    return tuple(float(x) for x in a)


def _delta(q, s: Scenario) -> np.ndarray:
    power = q.array if isinstance(q, PowerProfile) else np.asarray(q, dtype=float)
    harvest = s.harvest
    if power.shape != harvest.shape:
        raise DimensionError(f"power profile has {power.size} entries, scenario has {harvest.size} BSs")
    return power - harvest


def check_tariff(t: Tariff) -> None:
    if not t.ordering_ok():
        raise TariffError(f"need 0 < sell ({t.agg_sell_price}) < buy ({t.agg_buy_price}) "
                          f"< grid ({t.grid_price})")


def cost_baseline(q: PowerProfile | Sequence[float], s: Scenario) -> CostBreakdown:
    delta = _delta(q, s)
    return CostBreakdown(grid_cost=s.tariff.grid_price * float(np.maximum(delta, 0.0).sum()))


def settle_baseline(q: PowerProfile | Sequence[float], s: Scenario) -> tuple[EnergyLedger, CostBreakdown]:
    delta = _delta(q, s)
    ledger = EnergyLedger.grid_only(delta, np.zeros_like(delta))
    return ledger, cost_baseline(q, s)


def settle_trading(q: PowerProfile | Sequence[float], s: Scenario) -> tuple[EnergyLedger, CostBreakdown]:
    """Two-way trading with the aggregator.

    When the deficit exceeds the quota, each deficit BS gets a share of the
    quota proportional to its own deficit.
    """
    t = s.tariff
    check_tariff(t)
    delta = _delta(q, s)
    deficit = np.maximum(delta, 0.0)
    surplus = np.maximum(-delta, 0.0)
    d_plus, d_minus = float(deficit.sum()), float(surplus.sum())
    if d_plus <= d_minus:
        agg_buy = deficit
    else:
        agg_buy = deficit * (d_minus / d_plus)
    grid_buy = deficit - agg_buy
    ledger = EnergyLedger(_tup(grid_buy), _tup(agg_buy), _tup(surplus))
    bought = min(d_plus, d_minus)
    cost = CostBreakdown(grid_cost=t.grid_price * (d_plus - bought),
                         agg_buy_cost=t.agg_buy_price * bought,
                         agg_sell_revenue=t.agg_sell_price * d_minus)
    return ledger, cost


def trading_cost(d_plus: float, d_minus: float, t: Tariff) -> float:
    """Two-branch form of the trading cost in terms of the aggregates."""
    if d_plus <= d_minus:
        return t.agg_buy_price * d_plus - t.agg_sell_price * d_minus
    return (t.agg_buy_price * d_minus + t.grid_price * (d_plus - d_minus)
            - t.agg_sell_price * d_minus)


def trading_cost_convex(q, harvest, t: Tariff) -> float:
    """Same cost written as a convex function of the per-BS consumption."""
    delta = np.asarray(q, float) - np.asarray(harvest, float)
    net = float(delta.sum())
    return ((t.agg_buy_price - t.agg_sell_price) * float(np.maximum(delta, 0.0).sum())
            + t.agg_sell_price * net
            + (t.grid_price - t.agg_buy_price) * max(net, 0.0))


def match_transfers(delta, loss: float = 0.0) -> tuple[Transfer, ...]:
    """Greedy pairing of the largest remaining surplus with the largest deficit.

    ``amount`` is what the source injects; the target draws
    ``amount * (1 - loss)``.  Ties go to the lower BS id.
    """
    delta = np.asarray(delta, dtype=float)
    surplus = np.maximum(-delta, 0.0)
    need = np.maximum(delta, 0.0)
    keep = 1.0 - loss
    out = []
    while True:
        i = int(np.argmax(surplus))
        j = int(np.argmax(need))
        if surplus[i] <= 0.0 or need[j] <= 0.0:
            break
        delivered = min(need[j], surplus[i] * keep)
        amount = delivered / keep
        if delivered >= need[j]:
            need[j] = 0.0
            surplus[i] = max(surplus[i] - amount, 0.0)
        else:
            need[j] -= delivered
            surplus[i] = 0.0
        out.append(Transfer(i, j, float(amount), float(delivered)))
    return tuple(out)


def settle_sharing(q: PowerProfile | Sequence[float], s: Scenario) -> tuple[EnergyLedger, CostBreakdown]:
    t = s.tariff
    delta = _delta(q, s)
    transfers = match_transfers(delta, t.transfer_loss)
    received = np.zeros_like(delta)
    for tr in transfers:
        received[tr.target] += tr.delivered
    grid_buy = np.maximum(np.maximum(delta, 0.0) - received, 0.0)
    zero = (0.0,) * delta.size
    ledger = EnergyLedger(_tup(grid_buy), zero, zero, transfers, t.contract_fee)
    d_plus = float(np.maximum(delta, 0.0).sum())
    d_minus = float(np.maximum(-delta, 0.0).sum())
    shortfall = max(d_plus - d_minus * (1.0 - t.transfer_loss), 0.0)
    cost = CostBreakdown(grid_cost=t.grid_price * shortfall, contract_fee=t.contract_fee)
    return ledger, cost


def sharing_cost(d_plus: float, d_minus: float, t: Tariff) -> float:
    return t.grid_price * max(d_plus - d_minus * (1.0 - t.transfer_loss), 0.0) + t.contract_fee
