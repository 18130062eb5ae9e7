"""Cost-aware CoMP: all terminals served coherently by every BS in the cluster.

The union band is split equally over all terminals, one terminal per
sub-band.  On sub-band ``k`` the received power is
``(sum_i sqrt(g[i, k] * p[i, k]))**2`` and must reach the target ``S_k``.

The energy cost is ``sum_i f_i(Q_i)`` with each ``f_i`` convex,
piecewise-linear and nondecreasing, optionally plus ``c * [sum_i Q_i - T]+``.
We solve the dual: for per-BS marginal prices ``lam`` the cheapest powers
come from the closed-form weighted split on every sub-band, and each
``lam_i`` is moved by bisection until BS ``i``'s load sits in the
subdifferential of ``f_i`` (coordinate ascent).  The aggregate term is
handled by an outer bisection on its multiplier ``theta`` in ``[0, 1]``.

A zero-slope first segment (free renewable energy) is given the slope
``FREE_SLOPE * slopes[1]``.  Otherwise, whenever every load fits inside
its free allowance, all prices collapse toward zero and the split, which
depends only on price ratios, is left undetermined.  The perturbation moves
the cost by at most ``FREE_SLOPE * slopes[1] * breakpoint`` per BS and
prefers the lowest-power allocation among the free ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .. import kernels
from ..errors import ConvergenceError, InfeasibleError
from ..link import awgn_rate, comp_target
from ..model import PowerProfile, Scenario
from ..solvers import SolverConfig, bisect
from ..tariff import CostBreakdown

PRICE_TOL = 1e-12      # on log prices, i.e. relative
SWEEP_TOL = 1e-11      # largest relative price move in a converged sweep
FREE_SLOPE = 1e-9
MAX_SWEEPS = 5000
_PRICE_CFG = SolverConfig(abs_tol=PRICE_TOL, max_iters=400)


@dataclass(frozen=True)
class PiecewiseLinearCost:
    """Convex nondecreasing piecewise-linear cost of a BS's consumption.

    ``slopes[j]`` applies between ``breakpoints[j-1]`` and ``breakpoints[j]``
    (with 0 and +inf at the ends); ``offset`` is the value at zero.
    """

    slopes: tuple[float, ...]
    breakpoints: tuple[float, ...] = ()
    offset: float = 0.0

    def __post_init__(self):
        sl = tuple(float(x) for x in self.slopes)
        bp = tuple(float(x) for x in self.breakpoints)
        if len(sl) != len(bp) + 1:
            raise ValueError("need exactly one more slope than breakpoints")
        if sl[0] < 0 or any(b <= a for a, b in zip(sl, sl[1:])):
            raise ValueError("slopes must be >= 0 and strictly increasing")
        if any(b < 0 for b in bp) or any(b <= a for a, b in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be >= 0 and strictly increasing")
        object.__setattr__(self, "slopes", sl)
        object.__setattr__(self, "breakpoints", bp)

    @classmethod
    def free_then(cls, allowance: float, price: float) -> "PiecewiseLinearCost":
        """Free up to ``allowance``, then ``price`` per unit."""
        return cls((0.0, price), (allowance,))

    @classmethod
    def linear(cls, price: float, offset: float = 0.0) -> "PiecewiseLinearCost":
        return cls((price,), (), offset)

    def __call__(self, q: float) -> float:
        v = self.offset + self.slopes[0] * q
        for j, b in enumerate(self.breakpoints):
            v += (self.slopes[j + 1] - self.slopes[j]) * max(q - b, 0.0)
        return v

    def shifted(self, c: float) -> "PiecewiseLinearCost":
        return PiecewiseLinearCost(tuple(s + c for s in self.slopes), self.breakpoints, self.offset)

    def conjugate_range(self, lam: float) -> tuple[float, float]:
        """Loads that minimize ``f(Q) - lam * Q`` over ``Q >= 0``."""
        sl, bp = self.slopes, self.breakpoints
        if lam < sl[0]:
            return 0.0, 0.0
        if lam > sl[-1]:
            return np.inf, np.inf
        for j, s in enumerate(sl):
            if lam == s:
                lo = bp[j - 1] if j > 0 else 0.0
                hi = bp[j] if j < len(bp) else np.inf
                return lo, hi
            if j + 1 < len(sl) and s < lam < sl[j + 1]:
                return bp[j], bp[j]
        raise AssertionError("unreachable")


@dataclass(frozen=True)
class AggregateTerm:
    """``coef * [sum_i Q_i - threshold]+`` added to the separable cost."""

    coef: float
    threshold: float


@dataclass(frozen=True)
class CompSolution:
    powers: np.ndarray
    prices: np.ndarray
    theta: float
    sweeps: int
    kkt_residual: float


@dataclass(frozen=True, eq=False)
class CompAllocation:
    powers: np.ndarray              # (n_bs, n_subbands)
    sub_band_width: float
    mt_of_subband: tuple[int, ...]
    prices: tuple[float, ...] = ()
    kkt_residual: float = 0.0
    targets: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def received_power(self, s: Scenario) -> np.ndarray:
        g = s.gains[:, list(self.mt_of_subband)]
        amp = np.sqrt(g * self.powers).sum(axis=0)
        return amp * amp

    def rates(self, s: Scenario) -> np.ndarray:
        if not self.mt_of_subband:
            return np.zeros(0)
        rates = np.zeros(s.n_mt)
        rates[list(self.mt_of_subband)] = awgn_rate(self.received_power(s), self.sub_band_width,
                                                    s.noise_density, 1.0)
        return rates


def comp_plan(s: Scenario) -> tuple[float, np.ndarray, np.ndarray]:
    """Sub-band width, per-sub-band received-power targets and gains."""
    if s.n_mt == 0:
        return 0.0, np.zeros(0), np.zeros((s.n_bs, 0))
    w = float(s.bandwidth.sum()) / s.n_mt
    targets = np.asarray(comp_target(s.min_rates, w, s.noise_density), dtype=float).reshape(-1)
    g = np.ascontiguousarray(s.gains, dtype=float)
    dead = ~(g > 0).any(axis=0)
    if dead.any():
        raise InfeasibleError(f"terminal {int(np.argmax(dead))} has zero gain to every BS")
    return w, targets, g


def _kkt_residual(loads, prices, costs) -> float:
    worst = 0.0
    for q, lam, f in zip(loads, prices, costs):
        lo, hi = f.conjugate_range(lam)
        worst = max(worst, lo - q, q - hi)
    return max(worst, 0.0)


def _update_price(i, g, targets, lam, f: PiecewiseLinearCost) -> float:
    sl = f.slopes

    def load(x):
        trial = lam.copy()
        trial[i] = x
        return kernels.bs_load(g, targets, trial, i)

    def excess(x):
        q = load(x)
        lo, hi = f.conjugate_range(x)
        if q > hi:
            return q - hi
        if q < lo:
            return q - lo
        return 0.0

    if len(sl) == 1:
        return sl[0]
    if excess(sl[-1]) >= 0.0:
        return sl[-1]
    if excess(sl[0]) <= 0.0:
        return sl[0]
    # sl[0] > 0 here (see _lift_free), so bisect on log price for relative accuracy
    u = bisect(lambda v: excess(np.exp(v)), np.log(sl[0]), np.log(sl[-1]), _PRICE_CFG)
    return float(min(max(np.exp(u), sl[0]), sl[-1]))


def _lift_free(f: PiecewiseLinearCost) -> PiecewiseLinearCost:
    if len(f.slopes) == 1 or f.slopes[0] > 0.0:
        return f
    return PiecewiseLinearCost((FREE_SLOPE * f.slopes[1],) + f.slopes[1:], f.breakpoints, f.offset)


def _solve_separable(g, targets, costs, lam0=None) -> tuple[np.ndarray, int]:
    n = g.shape[0]
    lam = np.array([f.slopes[-1] for f in costs], dtype=float) if lam0 is None else lam0.copy()
    for sweep in range(1, MAX_SWEEPS + 1):
        moved = 0.0
        for i in range(n):
            new = _update_price(i, g, targets, lam, costs[i])
            if new != lam[i]:
                moved = max(moved, abs(new - lam[i]) / max(new, lam[i]))
            lam[i] = new
        if moved <= SWEEP_TOL:
            return lam, sweep
    raise ConvergenceError(f"price coordinate ascent did not settle in {MAX_SWEEPS} sweeps")


def solve_comp(g, targets, costs: Sequence[PiecewiseLinearCost],
               aggregate: AggregateTerm | None = None) -> CompSolution:
    """Minimize ``sum_i f_i(Q_i) [+ aggregate]`` over coherent allocations."""
    g = np.ascontiguousarray(g, dtype=float)
    targets = np.ascontiguousarray(targets, dtype=float)
    costs = [_lift_free(f) for f in costs]
    if g.shape[0] != len(costs):
        raise ValueError("one cost function per BS is required")
    if g.shape[1] == 0:
        return CompSolution(np.zeros_like(g), np.zeros(len(costs)), 0.0, 0, 0.0)

    theta = 0.0
    if aggregate is None or aggregate.coef == 0:
        lam, sweeps = _solve_separable(g, targets, costs)
    else:
        state = {"lam": None, "sweeps": 0}

        def inner(th):
            shifted = [f.shifted(aggregate.coef * th) for f in costs]
            warm = None if state["lam"] is None else state["lam"] + aggregate.coef * (th - state["th"])
            if warm is not None:
                warm = np.clip(warm, [f.slopes[0] for f in shifted], [f.slopes[-1] for f in shifted])
            lam, n = _solve_separable(g, targets, shifted, warm)
            state.update(lam=lam, th=th, sweeps=state["sweeps"] + n)
            return lam

        def gap(th):
            lam = inner(th)
            return float(kernels.split_powers(g, targets, lam).sum()) - aggregate.threshold

        if gap(0.0) <= 0.0:
            theta = 0.0
        elif gap(1.0) >= 0.0:
            theta = 1.0
        else:
            theta = bisect(gap, 0.0, 1.0, _PRICE_CFG)
        lam = inner(theta)
        sweeps = state["sweeps"]
        costs = [f.shifted(aggregate.coef * theta) for f in costs]

    p = kernels.split_powers(g, targets, lam)
    kkt = _kkt_residual(p.sum(axis=1), lam, costs)
    return CompSolution(p, lam, theta, sweeps, kkt)


def grid_price_model(s: Scenario) -> list[PiecewiseLinearCost]:
    pi = s.tariff.grid_price
    return [PiecewiseLinearCost.free_then(b.harvest_rate, pi) for b in s.base_stations]


def allocation_from(s: Scenario, sol: CompSolution, w: float, targets) -> CompAllocation:
    powers = np.array(sol.powers)
    powers.setflags(write=False)
    return CompAllocation(powers, w, tuple(range(s.n_mt)), tuple(sol.prices.tolist()),
                          sol.kkt_residual, np.asarray(targets))


def optimize_comp(s: Scenario, price_model: Sequence[PiecewiseLinearCost] | None = None
                  ) -> tuple[CompAllocation, PowerProfile, CostBreakdown]:
    """Cheapest coherent allocation under a per-BS price model.

    Without ``price_model`` each BS's harvest is free and the grid price
    applies beyond it, so the returned cost is the grid bill.  With a custom
    model the cost is ``sum_i f_i(Q_i)``.
    """
    w, targets, g = comp_plan(s)
    costs = grid_price_model(s) if price_model is None else list(price_model)
    sol = solve_comp(g, targets, costs)
    alloc = allocation_from(s, sol, w, targets)
    q = sol.powers.sum(axis=1)
    total = float(sum(f(x) for f, x in zip(costs, q)))
    return alloc, PowerProfile(q), CostBreakdown(grid_cost=total)
