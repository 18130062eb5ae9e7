import dataclasses

import numpy as np
import pytest

from greencell.comm import optimize_comp, optimize_spectrum_sharing
from greencell.comm.comp import PiecewiseLinearCost, comp_plan
from greencell.joint import (joint_energy_spectrum, joint_sharing_comp, joint_trading_comp,
                             joint_trading_comp_fixed_price)
from greencell.model import make_scenario
from greencell.oracles import comp_oracle
from greencell.tariff import settle_sharing, trading_cost, trading_cost_convex

from conftest import random_small_scenario


def with_tariff(s, **kw):
    return dataclasses.replace(s, tariff=dataclasses.replace(s.tariff, **kw))


def test_joint_energy_spectrum_case_study(cs):
    r = joint_energy_spectrum(cs)
    assert r.allocation.shared_amount == pytest.approx(5.0, abs=1e-6)
    assert r.profile.array == pytest.approx([5.0, 15.0], abs=1e-6)
    assert r.supply == pytest.approx([5.0, 7.5], abs=1e-6)
    assert r.total == pytest.approx(7.60, abs=1e-6)
    assert np.all(r.rates(cs) >= cs.min_rates - 1e-6)


def test_joint_energy_spectrum_free_energy_costs_fee(cs):
    s = dataclasses.replace(cs, base_stations=tuple(dataclasses.replace(b, harvest_rate=100.0)
                                                    for b in cs.base_stations))
    r = joint_energy_spectrum(s)
    assert r.total == pytest.approx(s.tariff.contract_fee)


def test_joint_energy_spectrum_with_large_fee(cs):
    s = with_tariff(cs, contract_fee=10.0)
    r = joint_energy_spectrum(s)
    # still reported; here the fee outweighs the benefit over spectrum sharing alone
    assert r.total == pytest.approx(17.5, abs=1e-6)
    assert r.total > optimize_spectrum_sharing(s)[2].total


def test_fixed_price_point_case_study(cs):
    r = joint_trading_comp_fixed_price(cs)
    assert r.profile.array == pytest.approx([6.87, 5.77], abs=0.01)
    assert r.supply == pytest.approx([6.87, 5.62], abs=0.01)
    assert round(r.total, 2) == 0.46
    assert r.notes
    assert r.allocation.prices == (0.4, 0.5)


def test_trading_optimizer_case_study(cs):
    exact = joint_trading_comp(cs)
    assert exact.total <= joint_trading_comp_fixed_price(cs).total + 1e-12
    assert exact.total <= 0.46 + 1e-3
    q = exact.profile.array
    assert trading_cost_convex(q, cs.harvest, cs.tariff) == pytest.approx(exact.total, abs=1e-12)
    assert np.all(exact.rates(cs) >= cs.min_rates - 1e-6)


def test_trading_optimizer_matches_grid_oracle_on_case_study(cs):
    w, targets, g = comp_plan(cs)
    groups = [cs.terminals_of(0), cs.terminals_of(1)]

    def cost(loads):
        return np.array([trading_cost_convex(q, cs.harvest, cs.tariff) for q in loads])
    _, val = comp_oracle(g, targets, cost, groups, resolution=101, refine=10)
    assert joint_trading_comp(cs).total == pytest.approx(val, abs=1e-4)


def test_trading_single_bs_sells_surplus():
    s = make_scenario(harvest=[5.0], bandwidth=[2.0], homes=[0, 0])
    r = joint_trading_comp(s)
    assert r.profile.array == pytest.approx([2.0])
    t = s.tariff
    assert r.total == pytest.approx(-t.agg_sell_price * 3.0)
    assert r.ledger.agg_sell == pytest.approx((3.0,))
    assert r.total == pytest.approx(trading_cost(0.0, 3.0, t))


def test_trading_continuity_to_uniform_price(cs):
    eps = 1e-6
    s = dataclasses.replace(cs, base_stations=tuple(dataclasses.replace(b, harvest_rate=0.0)
                                                    for b in cs.base_stations))
    s = with_tariff(s, agg_sell_price=0.5 - eps, agg_buy_price=0.5)
    r = joint_trading_comp(s)
    _, q, cost = optimize_comp(s, [PiecewiseLinearCost.linear(0.5)] * 2)
    assert r.profile.array == pytest.approx(q.array, abs=1e-4)
    # with no harvest every unit is bought at the grid price
    assert r.total == pytest.approx(s.tariff.grid_price * q.array.sum(), rel=1e-6)


def test_sharing_comp_case_study(cs):
    r = joint_sharing_comp(cs)
    assert r.profile.array == pytest.approx([5.47, 7.03], abs=0.01)
    assert r.supply == pytest.approx([5.47, 7.03], abs=0.01)
    assert r.total == pytest.approx(0.10, abs=1e-9)
    assert len(r.ledger.transfers) == 1


def test_sharing_comp_single_terminal_split():
    s = make_scenario(harvest=[0.0, 0.0], bandwidth=[0.5, 0.5], homes=[0], gains=[[1.0], [0.6]])
    r = joint_sharing_comp(s)
    assert r.allocation.powers[:, 0] == pytest.approx([0.390625, 0.234375], abs=1e-9)
    assert r.profile.array.sum() == pytest.approx(1 / 1.6)
    s = make_scenario(harvest=[0.0, 0.0], bandwidth=[0.5, 0.5], homes=[0], gains=[[1.0], [0.0]])
    assert joint_sharing_comp(s).allocation.powers[:, 0] == pytest.approx([1.0, 0.0])


def test_sharing_comp_with_loss_matches_oracle(rng):
    for _ in range(10):
        s = random_small_scenario(rng)
        s = with_tariff(s, transfer_loss=float(rng.uniform(0.05, 0.5)))
        w, targets, g = comp_plan(s)

        t = s.tariff

        def cost(loads):
            d = loads - s.harvest[None, :]
            dp, dm = np.maximum(d, 0).sum(axis=1), np.maximum(-d, 0).sum(axis=1)
            return t.grid_price * np.maximum(dp - (1 - t.transfer_loss) * dm, 0) + t.contract_fee
        _, val = comp_oracle(g, targets, cost, resolution=31, refine=10)
        r = joint_sharing_comp(s)
        assert r.total == pytest.approx(val, rel=1e-3, abs=1e-3)
        assert r.total == pytest.approx(settle_sharing(r.profile, s)[1].total)


def test_dominance_case_study(cs):
    from greencell.schemes import run_scheme
    tot = {k: run_scheme(cs, k).total for k in
           ("trading", "sharing", "spectrum", "comp", "joint-energy-spectrum",
            "joint-trading-comp", "joint-sharing-comp")}
    assert tot["joint-energy-spectrum"] <= min(tot["sharing"], tot["spectrum"])
    assert tot["joint-trading-comp"] <= min(tot["trading"], tot["comp"])
    assert tot["joint-sharing-comp"] <= min(tot["sharing"], tot["comp"])
