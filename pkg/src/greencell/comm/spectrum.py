"""Cost-aware spectrum sharing between two BSs.

A signed amount ``s`` of spectrum moves from BS 0 to BS 1 (negative means the
other way).  Each BS then splits its effective band equally over its own
terminals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from ..errors import BracketError, UnsupportedScenarioError
from ..link import LN2, LinkPlan, equal_split_plan
from ..model import PowerProfile, Scenario
from ..solvers import SolverConfig, bisect, golden_min
from ..tariff import CostBreakdown, cost_baseline

_CFG = SolverConfig(abs_tol=1e-10, max_iters=400)


@dataclass(frozen=True)
class SpectrumPartition:
    shared_amount: float
    effective_bandwidths: tuple[float, ...]
    plan: LinkPlan | None = None

    def rates(self, s: Scenario) -> np.ndarray:
        return self.plan.rates(s)


def partition(s: Scenario, shared: float) -> SpectrumPartition:
    _require_two(s)
    w = s.bandwidth
    return SpectrumPartition(float(shared), (float(w[0] - shared), float(w[1] + shared)))


def _require_two(s: Scenario) -> None:
    if s.n_bs != 2:
        raise UnsupportedScenarioError(f"spectrum sharing is defined for 2 BSs, scenario has {s.n_bs}")


def spectrum_plan(s: Scenario, part: SpectrumPartition) -> LinkPlan:
    if any(b < 0 for b in part.effective_bandwidths):
        raise ValueError("effective bandwidths must be >= 0")
    return equal_split_plan(s, s.homes, part.effective_bandwidths)


def spectrum_demand(s: Scenario, part: SpectrumPartition) -> PowerProfile:
    return PowerProfile(spectrum_plan(s, part).per_bs(s.n_bs))


def demand_curve(s: Scenario) -> Callable[[float], np.ndarray]:
    """Fast ``shared -> (Q_0, Q_1)``; infinite where a loaded BS has no band."""
    _require_two(s)
    homes, rates, g = s.homes, s.min_rates, s.gains
    w = s.bandwidth
    n0 = s.noise_density
    groups = []
    for i in range(2):
        idx = np.flatnonzero(homes == i)
        groups.append((rates[idx], g[i, idx]))

    def curve(shared: float) -> np.ndarray:
        eff = (w[0] - shared, w[1] + shared)
        out = np.zeros(2)
        for i, (r, gi) in enumerate(groups):
            if r.size == 0:
                continue
            if eff[i] <= 0:
                out[i] = np.inf
                continue
            sub = eff[i] / r.size
            with np.errstate(over="ignore", divide="ignore"):
                out[i] = float((n0 * sub * np.expm1(r / sub * LN2) / gi).sum())
        return out

    return curve


def minimize_shared(objective: Callable[[float], float], lo: float, hi: float,
                    extra: Iterable[float] = (), floor: float | None = None) -> float:
    """Minimize a convex function of the shared amount on ``[lo, hi]``.

    Golden section plus caller-supplied candidates (kinks).  ``floor`` is the
    objective's known lower bound; when the minimum sits on that flat floor
    the optimal point closest to zero sharing is returned.
    """
    cands = [golden_min(objective, lo, hi, _CFG), 0.0, *extra]
    cands = [c for c in cands if lo <= c <= hi]
    vals = [objective(c) for c in cands]
    best = min(vals)
    tol = 1e-12 * max(1.0, abs(best))
    x = min((c for c, v in zip(cands, vals) if v <= best + tol), key=abs)
    if x == 0.0 or floor is None or best > floor + tol:
        return x

    # slide toward zero along the optimal level set (an interval, by convexity)
    def side(t):
        above = objective(t) > best + tol
        return (1.0 if above else -1.0) * (1.0 if x > 0 else -1.0)

    if objective(0.0) <= best + tol:
        return 0.0
    edge = bisect(side, min(0.0, x), max(0.0, x), _CFG)
    return edge if objective(edge) <= best + tol else x


def harvest_kinks(curve, s: Scenario, lo: float, hi: float) -> list[float]:
    e = s.harvest
    out = []
    for i in range(2):
        f = lambda t, i=i: float(curve(t)[i] - e[i])
        try:
            out.append(bisect(f, lo, hi, _CFG))
        except BracketError:
            pass
    return out


def shared_bounds(s: Scenario) -> tuple[float, float]:
    w = s.bandwidth
    return -float(w[1]), float(w[0])


def optimize_spectrum_sharing(s: Scenario) -> tuple[SpectrumPartition, PowerProfile, CostBreakdown]:
    """Shared amount minimizing the grid bill ``sum_i pi [Q_i(s) - E_i]+``."""
    curve = demand_curve(s)
    e = s.harvest
    pi = s.tariff.grid_price

    def cost(t):
        return float(pi * np.maximum(curve(t) - e, 0.0).sum())

    lo, hi = shared_bounds(s)
    x = minimize_shared(cost, lo, hi, harvest_kinks(curve, s, lo, hi), floor=0.0)
    part = partition(s, x)
    plan = spectrum_plan(s, part)
    part = SpectrumPartition(part.shared_amount, part.effective_bandwidths, plan)
    q = PowerProfile(plan.per_bs(2))
    return part, q, cost_baseline(q, s)
