"""Exhaustive grid oracles for certifying the optimizers on small instances.

Nothing in the optimizing path imports this module.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

MAX_DIM = 4
MAX_RESOLUTION = 2000
_CHUNK = 1 << 20


def _grid_min(objective, axes):
    d = len(axes)
    shape = tuple(a.size for a in axes)
    total = int(np.prod(shape))
    best_val, best_pt = np.inf, None
    for start in range(0, total, _CHUNK):
        flat = np.arange(start, min(start + _CHUNK, total))
        idx = np.unravel_index(flat, shape)
        pts = np.stack([axes[j][idx[j]] for j in range(d)], axis=1)
        vals = np.asarray(objective(pts), dtype=float)
        vals = np.where(np.isnan(vals), np.inf, vals)
        j = int(np.argmin(vals))
        if vals[j] < best_val:
            best_val, best_pt = float(vals[j]), pts[j].copy()
    return best_pt, best_val


def brute_force_oracle(objective: Callable[[np.ndarray], np.ndarray],
                       bounds: Sequence[tuple[float, float]], resolution: int = 201,
                       refine: int = 0, margin: int = 3) -> tuple[np.ndarray, float]:
    """Exhaustive grid minimum of a vectorized objective over a box.

    ``objective`` maps an ``(n_points, d)`` array to ``n_points`` values
    (``inf`` marks infeasible points).  With ``refine > 0`` the grid is
    re-laid ``refine`` times over ``margin`` cells around the incumbent,
    which is sound for convex objectives.
    """
    d = len(bounds)
    if not 1 <= d <= MAX_DIM:
        raise ValueError(f"dimension must be 1..{MAX_DIM}, got {d}")
    if not 2 <= resolution <= MAX_RESOLUTION:
        raise ValueError(f"resolution must be 2..{MAX_RESOLUTION}, got {resolution}")
    lo = np.array([b[0] for b in bounds], dtype=float)
    hi = np.array([b[1] for b in bounds], dtype=float)
    cur_lo, cur_hi = lo.copy(), hi.copy()
    best_pt, best_val = None, np.inf
    for _ in range(refine + 1):
        axes = [np.linspace(a, b, resolution) for a, b in zip(cur_lo, cur_hi)]
        pt, val = _grid_min(objective, axes)
        if pt is not None and val <= best_val:
            best_pt, best_val = pt, val
        if best_pt is None:
            break
        step = (cur_hi - cur_lo) / (resolution - 1)
        cur_lo = np.maximum(best_pt - margin * step, lo)
        cur_hi = np.minimum(best_pt + margin * step, hi)
    return best_pt, best_val


def comp_powers_from_shares(shares, g, targets):
    """Powers of a 2-BS coherent allocation from BS 0's amplitude share.

    ``shares`` has shape ``(n_points, n_subbands)``; returns ``(n_points, 2,
    n_subbands)``.  A share of BS 0 equal to ``u`` on sub-band ``k`` means
    amplitudes ``u*sqrt(S_k)`` and ``(1-u)*sqrt(S_k)``.
    """
    u = np.asarray(shares, dtype=float)
    amp0 = u * np.sqrt(targets)[None, :]
    amp1 = (1.0 - u) * np.sqrt(targets)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        p0 = np.where(amp0 > 0, amp0 ** 2 / g[0][None, :], 0.0)
        p1 = np.where(amp1 > 0, amp1 ** 2 / g[1][None, :], 0.0)
    return np.stack([p0, p1], axis=1)


def comp_oracle(g, targets, cost_of_loads: Callable[[np.ndarray], np.ndarray],
                groups: Sequence[Sequence[int]] | None = None, resolution: int = 61,
                refine: int = 8) -> tuple[np.ndarray, float]:
    """Grid oracle for 2-BS coherent transmission.

    One decision variable per group of sub-bands (identical sub-bands can be
    pooled); ``cost_of_loads`` maps ``(n_points, 2)`` per-BS loads to cost.
    Returns the best per-BS loads and their cost.
    """
    g = np.asarray(g, dtype=float)
    targets = np.asarray(targets, dtype=float)
    k = g.shape[1]
    if groups is None:
        groups = [[j] for j in range(k)]
    member = np.zeros(k, dtype=int)
    for v, grp in enumerate(groups):
        member[list(grp)] = v

    def loads(x):
        powers = comp_powers_from_shares(x[:, member], g, targets)
        return powers.sum(axis=2)

    def objective(x):
        return cost_of_loads(loads(x))

    x, val = brute_force_oracle(objective, [(0.0, 1.0)] * len(groups), resolution, refine)
    return loads(x[None, :])[0], val
