"""Joint energy and communication cooperation.

* energy sharing + spectrum sharing (two BSs, one shared-amount variable);
* aggregator trading + CoMP;
* aggregator sharing + CoMP.
"""

from __future__ import annotations

import numpy as np

from .comm.comp import (AggregateTerm, CompAllocation, PiecewiseLinearCost, allocation_from,
                        comp_plan, solve_comp)
from .comm.spectrum import (SpectrumPartition, shared_bounds, harvest_kinks, demand_curve,
                            minimize_shared, partition, spectrum_plan)
from .kernels import split_powers
from .link import conventional_demand
from .model import PowerProfile, Scenario
from .results import SchemeResult, make_result
from .tariff import check_tariff, settle_sharing, settle_trading, sharing_cost


def joint_energy_spectrum(s: Scenario) -> SchemeResult:
    """Spectrum sharing followed by aggregator energy sharing, optimized jointly."""
    curve = demand_curve(s)
    e = s.harvest
    t = s.tariff

    def cost(x):
        q = curve(x)
        if not np.all(np.isfinite(q)):
            return np.inf
        d = q - e
        return sharing_cost(float(np.maximum(d, 0).sum()), float(np.maximum(-d, 0).sum()), t)

    lo, hi = shared_bounds(s)
    x = minimize_shared(cost, lo, hi, harvest_kinks(curve, s, lo, hi), floor=t.contract_fee)
    part = partition(s, x)
    plan = spectrum_plan(s, part)
    part = SpectrumPartition(part.shared_amount, part.effective_bandwidths, plan)
    q = PowerProfile(plan.per_bs(2))
    ledger, breakdown = settle_sharing(q, s)
    return make_result("joint-energy-spectrum", s, q, ledger, breakdown, part)


def trading_price_model(s: Scenario) -> tuple[list[PiecewiseLinearCost], AggregateTerm]:
    """Trading cost split into per-BS pieces plus the quota term.

    Each BS pays the sell price (as lost revenue) below its harvest and the
    aggregator buy price above it; the grid premium ``pi - pi_buy`` applies to
    the network-wide net deficit.
    """
    t = s.tariff
    costs = [PiecewiseLinearCost((t.agg_sell_price, t.agg_buy_price), (e,),
                                 offset=-t.agg_sell_price * e) for e in s.harvest]
    return costs, AggregateTerm(t.grid_price - t.agg_buy_price, float(s.harvest.sum()))


def joint_trading_comp(s: Scenario) -> SchemeResult:
    """CoMP powers that minimize the aggregator-trading bill exactly."""
    check_tariff(s.tariff)
    w, targets, g = comp_plan(s)
    costs, agg = trading_price_model(s)
    sol = solve_comp(g, targets, costs, agg)
    q = PowerProfile(sol.powers.sum(axis=1))
    ledger, breakdown = settle_trading(q, s)
    return make_result("joint-trading-comp", s, q, ledger, breakdown,
                       allocation_from(s, sol, w, targets))


def fixed_trading_prices(s: Scenario) -> np.ndarray:
    """Sell price at BSs in surplus under conventional demand, buy price elsewhere."""
    t = s.tariff
    delta = conventional_demand(s).array - s.harvest
    return np.where(delta < 0, t.agg_sell_price, t.agg_buy_price)


def joint_trading_comp_fixed_price(s: Scenario) -> SchemeResult:
    """Single closed-form split at fixed per-BS marginal prices, then settled.

    This is the operating point the reference cost table reports; the exact
    optimizer (:func:`joint_trading_comp`) can only do as well or better.
    """
    check_tariff(s.tariff)
    w, targets, g = comp_plan(s)
    prices = fixed_trading_prices(s)
    p = split_powers(g, targets, prices)
    q = PowerProfile(p.sum(axis=1))
    ledger, breakdown = settle_trading(q, s)
    powers = np.array(p)
    powers.setflags(write=False)
    alloc = CompAllocation(powers, w, tuple(range(s.n_mt)), tuple(prices.tolist()), 0.0,
                           np.asarray(targets))
    return make_result("joint-trading-comp", s, q, ledger, breakdown, alloc,
                       notes=("fixed-price operating point (sell price at surplus BSs, "
                              "buy price at deficit BSs)",))


def joint_sharing_comp(s: Scenario) -> SchemeResult:
    """CoMP powers minimizing the sharing bill.

    With lossless sharing only total power matters, so every sub-band uses
    the minimum-total-power split.  With loss, each BS's deficit costs full
    price and its surplus is worth ``1 - loss``.
    """
    t = s.tariff
    w, targets, g = comp_plan(s)
    pi, loss = t.grid_price, t.transfer_loss
    if loss > 0:
        costs = [PiecewiseLinearCost((pi * (1 - loss), pi), (e,)) for e in s.harvest]
    else:
        costs = [PiecewiseLinearCost.linear(pi) for _ in s.base_stations]
    sol = solve_comp(g, targets, costs)
    q = PowerProfile(sol.powers.sum(axis=1))
    ledger, breakdown = settle_sharing(q, s)
    return make_result("joint-sharing-comp", s, q, ledger, breakdown,
                       allocation_from(s, sol, w, targets))
