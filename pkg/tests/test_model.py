import dataclasses

import numpy as np
import pytest
from hypothesis import given, strategies as st

from greencell.errors import DimensionError
from greencell.model import (SEEDED_RANDOM, ChannelMatrix, MobileTerminal, PowerProfile, Tariff,
                             make_scenario, net_load, validate_scenario)


def test_case_study_validates(cs):
    report = validate_scenario(cs)
    assert report.ok, report.problems
    assert (cs.n_bs, cs.n_mt) == (2, 20)
    assert cs.gains[0, 0] == 1.0 and cs.gains[1, 0] == 0.6
    assert cs.gains[0, 19] == 0.6 and cs.gains[1, 19] == 1.0


def test_sell_equal_buy_fails_price_ordering(cs):
    s = dataclasses.replace(cs, tariff=Tariff(1.0, 0.5, 0.5, 0.1))
    report = validate_scenario(s)
    assert not report.ok
    assert any("price ordering" in p for p in report.problems)


def test_dangling_association(cs):
    mts = list(cs.terminals)
    mts[3] = MobileTerminal(3, 7, 1.0)
    report = validate_scenario(dataclasses.replace(cs, terminals=tuple(mts)))
    assert any("dangling" in p and "7" in p for p in report.problems)


def test_report_collects_every_problem(cs):
    s = dataclasses.replace(cs, noise_density=0.0, tariff=Tariff(1.0, 0.5, 0.6, -1.0, 1.5))
    problems = validate_scenario(s).problems
    assert len(problems) == 4
    assert any("noise_density" in p for p in problems)
    assert any("contract_fee" in p for p in problems)
    assert any("transfer_loss" in p for p in problems)


def test_dimension_mismatch_reported(cs):
    s = dataclasses.replace(cs, channel=ChannelMatrix(np.ones((2, 3))))
    assert any("gain matrix" in p for p in validate_scenario(s).problems)


def test_negative_values_reported():
    s = make_scenario(harvest=[-1.0], bandwidth=[0.0], homes=[0], min_rates=0.0)
    problems = validate_scenario(s).problems
    assert any("harvest_rate" in p for p in problems)
    assert any("bandwidth" in p for p in problems)
    assert any("min_rate" in p for p in problems)


def test_net_load_table_values(cs):
    nl = net_load(PowerProfile((4.14, 18.28)), cs)
    assert nl.per_bs_delta == pytest.approx((-5.86, 15.78), abs=1e-12)
    assert nl.total_deficit == pytest.approx(15.78, abs=1e-12)
    assert nl.total_surplus == pytest.approx(5.86, abs=1e-12)


def test_net_load_balanced_and_pure_surplus():
    s = make_scenario(harvest=[1.0, 2.0], bandwidth=[1.0, 1.0], homes=[])
    nl = net_load([1.0, 2.0], s)
    assert nl.per_bs_delta == (0.0, 0.0)
    assert nl.total_deficit == nl.total_surplus == 0.0
    nl = net_load([0.0, 0.0], s)
    assert nl.total_deficit == 0.0 and nl.total_surplus == 3.0


def test_net_load_dimension_error(cs):
    with pytest.raises(DimensionError):
        net_load([1.0, 2.0, 3.0], cs)


vec = st.lists(st.floats(0, 100, allow_nan=False), min_size=1, max_size=8)


@given(st.data())
def test_signed_sum_identity(data):
    q = data.draw(vec)
    e = data.draw(st.lists(st.floats(0, 100), min_size=len(q), max_size=len(q)))
    s = make_scenario(harvest=e, bandwidth=[1.0] * len(e), homes=[])
    nl = net_load(q, s)
    assert nl.total_deficit >= 0 and nl.total_surplus >= 0
    assert nl.total_deficit - nl.total_surplus == pytest.approx(sum(q) - sum(e), abs=1e-9)


@given(st.data())
def test_net_load_permutation_equivariant(data):
    q = data.draw(vec)
    e = data.draw(st.lists(st.floats(0, 100), min_size=len(q), max_size=len(q)))
    perm = data.draw(st.permutations(range(len(q))))
    a = net_load(q, make_scenario(harvest=e, bandwidth=[1.0] * len(e), homes=[]))
    b = net_load([q[i] for i in perm],
                 make_scenario(harvest=[e[i] for i in perm], bandwidth=[1.0] * len(e), homes=[]))
    assert b.per_bs_delta == tuple(a.per_bs_delta[i] for i in perm)


def test_seeded_channel_reproducible():
    avg = np.full((3, 7), 0.6)
    a = ChannelMatrix(avg, SEEDED_RANDOM, seed=2**64 - 1)
    b = ChannelMatrix(avg, SEEDED_RANDOM, seed=2**64 - 1)
    c = ChannelMatrix(avg, SEEDED_RANDOM, seed=3)
    assert a.gains.tobytes() == b.gains.tobytes()
    assert not np.array_equal(a.gains, c.gains)
    assert np.all(a.gains >= 0)


def test_types_are_immutable(cs):
    with pytest.raises(dataclasses.FrozenInstanceError):
        cs.noise_density = 2.0
    with pytest.raises(ValueError):
        cs.channel.gains[0, 0] = 5.0
