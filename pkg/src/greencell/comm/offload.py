"""Cost-aware traffic offloading: re-associate terminals to cheaper BSs.

Every BS keeps its own band and splits it equally over the terminals it
currently serves.  Small instances are searched exhaustively; larger ones
use steepest-descent single-terminal moves starting from the home
association.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..errors import InfeasibleError
from ..link import LinkPlan, equal_split_plan
from ..model import PowerProfile, Scenario
from ..tariff import CostBreakdown, cost_baseline

MAX_EXHAUSTIVE = 200_000


@dataclass(frozen=True)
class Association:
    serving_bs: tuple[int, ...]
    method: str = "home"
    plan: LinkPlan | None = None

    def rates(self, s: Scenario) -> np.ndarray:
        return self.plan.rates(s)


def _arrays(s: Scenario):
    return (np.ascontiguousarray(s.gains, dtype=float), s.bandwidth, s.min_rates,
            float(s.noise_density), s.harvest, float(s.tariff.grid_price))


def association_cost(s: Scenario, serving) -> float:
    g, w, r, n0, e, pi = _arrays(s)
    return kernels.association_cost(np.asarray(serving, dtype=np.int64), g, w, r, n0, e, pi)


def local_search(s: Scenario, start) -> np.ndarray:
    """Steepest descent over single-terminal moves.

    Each round takes the strictly best move; ties go to the lowest terminal id,
    then the lowest BS id.
    """
    g, w, r, n0, e, pi = _arrays(s)
    assoc = np.array(start, dtype=np.int64)
    cost = kernels.association_cost(assoc, g, w, r, n0, e, pi)
    while True:
        best_move, best_cost = None, cost
        for k in range(s.n_mt):
            here = assoc[k]
            for i in range(s.n_bs):
                if i == here or g[i, k] <= 0:
                    continue
                assoc[k] = i
                c = kernels.association_cost(assoc, g, w, r, n0, e, pi)
                assoc[k] = here
                if c < best_cost - 1e-12 * max(1.0, abs(best_cost)):
                    best_move, best_cost = (k, i), c
        if best_move is None:
            return assoc
        assoc[best_move[0]] = best_move[1]
        cost = best_cost


def optimize_offloading(s: Scenario, method: str = "auto",
                        max_candidates: int = MAX_EXHAUSTIVE
                        ) -> tuple[Association, PowerProfile, CostBreakdown]:
    """Association minimizing ``sum_i pi [Q_i - E_i]+``.

    ``method`` is ``"auto"``, ``"exhaustive"`` or ``"local"``.  The home
    association is kept unless something strictly cheaper exists.
    """
    g = s.gains
    if s.n_mt and not np.all((g > 0).any(axis=0)):
        k = int(np.argmax(~(g > 0).any(axis=0)))
        raise InfeasibleError(f"terminal {k} has zero gain to every BS")
    home = s.homes.copy()
    for k in range(s.n_mt):
        if g[home[k], k] <= 0:
            # home link is dead; fall back to the strongest BS
            home[k] = int(np.argmax(g[:, k]))
    if method == "auto":
        method = "exhaustive" if s.n_bs ** s.n_mt <= max_candidates else "local"
    if s.n_bs == 1 or s.n_mt == 0:
        assoc, method = home, "home"
    elif method == "exhaustive":
        gg, w, r, n0, e, pi = _arrays(s)
        incumbent = kernels.association_cost(home, gg, w, r, n0, e, pi)
        code, _ = kernels.exhaustive_association(gg, w, r, n0, e, pi, incumbent)
        assoc = home if code < 0 else kernels.decode_association(code, s.n_bs, s.n_mt)
    elif method == "local":
        assoc = local_search(s, home)
    else:
        raise ValueError(f"unknown method {method!r}")
    plan = equal_split_plan(s, assoc, s.bandwidth)
    q = PowerProfile(plan.per_bs(s.n_bs))
    association = Association(tuple(int(i) for i in assoc), method, plan)
    return association, q, cost_baseline(q, s)
