"""Domain types and net-load bookkeeping.

Everything here is a single-slot, unit-length model, so energy and power are
used interchangeably.  All quantities are normalized and dimensionless.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError

DETERMINISTIC = "deterministic"
SEEDED_RANDOM = "seeded-random"
CHANNEL_MODES = (DETERMINISTIC, SEEDED_RANDOM)


@dataclass(frozen=True)
class BaseStation:
    id: int
    harvest_rate: float
    bandwidth: float


@dataclass(frozen=True)
class MobileTerminal:
    id: int
    home_bs: int
    min_rate: float


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ChannelMatrix:
    """BS-by-MT power gains.

    ``average_gains`` is what the scenario file records.  In deterministic
    mode the gains are the averages; in seeded-random mode each gain is the
    average times an independent unit-mean exponential draw (Rayleigh
    fading power), generated from ``seed``.
    """

    average_gains: np.ndarray
    mode: str = DETERMINISTIC
    seed: int | None = None
    gains: np.ndarray = field(init=False)

    def __post_init__(self):
        avg = _frozen(self.average_gains)
        object.__setattr__(self, "average_gains", avg)
        if self.mode == SEEDED_RANDOM and self.seed is not None:
            rng = np.random.default_rng(int(self.seed) & 0xFFFFFFFFFFFFFFFF)
            gains = avg * rng.exponential(1.0, size=avg.shape)
        else:
            gains = avg
        object.__setattr__(self, "gains", _frozen(gains))

    @classmethod
    def own_cross(cls, homes: Sequence[int], n_bs: int, own: float = 1.0,
                  cross: float = 0.6, mode: str = DETERMINISTIC,
                  seed: int | None = None) -> "ChannelMatrix":
        avg = np.full((n_bs, len(homes)), float(cross))
        for k, h in enumerate(homes):
            if 0 <= h < n_bs:
                avg[h, k] = own
        return cls(avg, mode=mode, seed=seed)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.gains.shape

    def __eq__(self, other):
        if not isinstance(other, ChannelMatrix):
            return NotImplemented
        return (self.mode == other.mode and self.seed == other.seed
                and self.average_gains.shape == other.average_gains.shape
                and bool(np.array_equal(self.average_gains, other.average_gains)))

    __hash__ = None


@dataclass(frozen=True)
class Tariff:
    grid_price: float
    agg_buy_price: float
    agg_sell_price: float
    contract_fee: float = 0.0
    transfer_loss: float = 0.0

    def ordering_ok(self) -> bool:
        return 0.0 < self.agg_sell_price < self.agg_buy_price < self.grid_price


@dataclass(frozen=True)
class Scenario:
    base_stations: tuple[BaseStation, ...]
    terminals: tuple[MobileTerminal, ...]
    channel: ChannelMatrix
    noise_density: float
    tariff: Tariff

    def __post_init__(self):
        object.__setattr__(self, "base_stations", tuple(self.base_stations))
        object.__setattr__(self, "terminals", tuple(self.terminals))

    @property
    def n_bs(self) -> int:
        return len(self.base_stations)

    @property
    def n_mt(self) -> int:
        return len(self.terminals)

    @property
    def harvest(self) -> np.ndarray:
        return np.array([b.harvest_rate for b in self.base_stations], dtype=float)

    @property
    def bandwidth(self) -> np.ndarray:
        return np.array([b.bandwidth for b in self.base_stations], dtype=float)

    @property
    def min_rates(self) -> np.ndarray:
        return np.array([t.min_rate for t in self.terminals], dtype=float)

    @property
    def homes(self) -> np.ndarray:
        return np.array([t.home_bs for t in self.terminals], dtype=np.int64)

    @property
    def gains(self) -> np.ndarray:
        return self.channel.gains

    def terminals_of(self, bs: int) -> list[int]:
        return [t.id for t in self.terminals if t.home_bs == bs]


@dataclass(frozen=True)
class PowerProfile:
    """Per-BS power consumption ``Q``."""

    per_bs_power: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "per_bs_power",
                           tuple(float(x) for x in self.per_bs_power))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.per_bs_power, dtype=float)

    def __len__(self):
        return len(self.per_bs_power)


@dataclass(frozen=True)
class NetLoad:
    per_bs_delta: tuple[float, ...]
    total_deficit: float
    total_surplus: float


@dataclass(frozen=True)
class ValidationReport:
    problems: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self):
        return self.ok


def make_scenario(harvest: Sequence[float], bandwidth: Sequence[float],
                  homes: Sequence[int], min_rates: float | Sequence[float] = 1.0,
                  *, gains=None, own: float = 1.0, cross: float = 0.6,
                  mode: str = DETERMINISTIC, seed: int | None = None,
                  noise_density: float = 1.0, tariff: Tariff | None = None) -> Scenario:
    """Convenience constructor used by tests and the generator.

    ``gains`` is an explicit BS-by-MT average-gain matrix; when omitted an
    own/cross matrix is built from ``homes``.
    """
    n_bs = len(harvest)
    bss = tuple(BaseStation(i, float(e), float(w))
                for i, (e, w) in enumerate(zip(harvest, bandwidth)))
    rates = np.broadcast_to(np.asarray(min_rates, dtype=float), (len(homes),))
    mts = tuple(MobileTerminal(k, int(h), float(r))
                for k, (h, r) in enumerate(zip(homes, rates)))
    if gains is None:
        channel = ChannelMatrix.own_cross(list(homes), n_bs, own, cross, mode, seed)
    else:
        channel = ChannelMatrix(np.asarray(gains, dtype=float).reshape(n_bs, len(homes)),
                                mode=mode, seed=seed)
    if tariff is None:
        tariff = Tariff(1.0, 0.5, 0.4, 0.1, 0.0)
    return Scenario(bss, mts, channel, float(noise_density), tariff)


def case_study() -> Scenario:
    """Two BSs, 5 + 15 terminals: the two-cell example behind the comparison table."""
    return make_scenario(harvest=(10.0, 2.5), bandwidth=(10.0, 10.0),
                         homes=[0] * 5 + [1] * 15, min_rates=1.0,
                         own=1.0, cross=0.6, noise_density=1.0,
                         tariff=Tariff(1.0, 0.5, 0.4, 0.1, 0.0))


def validate_scenario(s: Scenario) -> ValidationReport:
    """Collect every violated invariant instead of stopping at the first."""
    problems: list[str] = []
    if s.n_bs < 1:
        problems.append("scenario needs at least one base station")
    for i, b in enumerate(s.base_stations):
        if b.id != i:
            problems.append(f"base station ids must be contiguous from 0 (position {i} has id {b.id})")
        if not np.isfinite(b.harvest_rate) or b.harvest_rate < 0:
            problems.append(f"base station {b.id}: harvest_rate must be >= 0 (got {b.harvest_rate})")
        if not np.isfinite(b.bandwidth) or b.bandwidth <= 0:
            problems.append(f"base station {b.id}: bandwidth must be > 0 (got {b.bandwidth})")
    for k, t in enumerate(s.terminals):
        if t.id != k:
            problems.append(f"terminal ids must be contiguous from 0 (position {k} has id {t.id})")
        if not np.isfinite(t.min_rate) or t.min_rate <= 0:
            problems.append(f"terminal {t.id}: min_rate must be > 0 (got {t.min_rate})")
        if not 0 <= t.home_bs < s.n_bs:
            problems.append(f"terminal {t.id}: dangling association to base station {t.home_bs}")
    if s.channel.mode not in CHANNEL_MODES:
        problems.append(f"channel: unknown mode {s.channel.mode!r}")
    if s.channel.mode == SEEDED_RANDOM and s.channel.seed is None:
        problems.append("channel: seeded-random mode requires a seed")
    if s.channel.shape != (s.n_bs, s.n_mt):
        got = "x".join(str(d) for d in s.channel.shape)
        problems.append(f"channel: gain matrix is {got}, expected {s.n_bs}x{s.n_mt}")
    elif s.n_mt and (not np.all(np.isfinite(s.gains)) or np.any(s.gains < 0)):
        problems.append("channel: gains must be finite and >= 0")
    if not np.isfinite(s.noise_density) or s.noise_density <= 0:
        problems.append(f"noise_density must be > 0 (got {s.noise_density})")
    t = s.tariff
    if not t.ordering_ok():
        problems.append(f"tariff: price ordering requires 0 < agg_sell ({t.agg_sell_price}) "
                        f"< agg_buy ({t.agg_buy_price}) < grid ({t.grid_price})")
    if t.contract_fee < 0:
        problems.append(f"tariff: contract_fee must be >= 0 (got {t.contract_fee})")
    if not 0 <= t.transfer_loss < 1:
        problems.append(f"tariff: transfer_loss must lie in [0, 1) (got {t.transfer_loss})")
    return ValidationReport(tuple(problems))


def net_load(q: PowerProfile | Sequence[float], s: Scenario) -> NetLoad:
    power = q.array if isinstance(q, PowerProfile) else np.asarray(q, dtype=float)
    harvest = s.harvest
    if power.shape != harvest.shape:
        raise DimensionError(f"power profile has {power.size} entries, scenario has {harvest.size} BSs")
    delta = power - harvest
    return NetLoad(tuple(float(d) for d in delta),
                   float(np.maximum(delta, 0.0).sum()),
                   float(np.maximum(-delta, 0.0).sum()))
