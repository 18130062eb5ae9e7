"""Scalar root finding, 1-D minimization and the weighted coherent split."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import BracketError, ConvergenceError, InfeasibleError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SolverConfig:
    abs_tol: float = 1e-9
    max_iters: int = 200

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be > 0")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


DEFAULT = SolverConfig()


def _sign(v: float) -> int:
    if v > 0:
        return 1
    if v < 0:
        return -1
    if v == 0:
        return 0
    raise ValueError(f"function returned {v}")


def bisect(f: Callable[[float], float], lo: float, hi: float,
           cfg: SolverConfig = DEFAULT) -> float:
    """Root of a monotone ``f`` on ``[lo, hi]``.

    Infinite endpoint values are allowed as long as their sign is right.
    Returns the midpoint of a bracket no wider than ``cfg.abs_tol``, or an
    exact zero if one is hit on the way.
    """
    flo, fhi = _sign(f(lo)), _sign(f(hi))
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if flo == fhi:
        raise BracketError(f"no sign change on [{lo}, {hi}]")
    for _ in range(cfg.max_iters):
        if hi - lo <= cfg.abs_tol:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            # bracket is already at float resolution
            return mid
        fm = _sign(f(mid))
        if fm == 0:
            return mid
        if fm == flo:
            lo = mid
        else:
            hi = mid
    if hi - lo <= cfg.abs_tol:
        return 0.5 * (lo + hi)
    raise ConvergenceError(f"bisection did not reach width {cfg.abs_tol} in {cfg.max_iters} steps")


def golden_min(f: Callable[[float], float], lo: float, hi: float,
               cfg: SolverConfig = DEFAULT) -> float:
    """Golden-section search for the minimizer of a unimodal ``f``.

    Unimodality is the caller's responsibility.  The endpoints are compared
    at the end so a monotone ``f`` returns the better endpoint.
    """
    a, b = float(lo), float(hi)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(cfg.max_iters):
        if b - a <= cfg.abs_tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    else:
        if b - a > cfg.abs_tol:
            raise ConvergenceError(f"golden section did not reach width {cfg.abs_tol}")
    x = c if fc <= fd else d
    fx = min(fc, fd)
    for end in (lo, hi):
        fe = f(end)
        if fe < fx:
            x, fx = end, fe
    return x


def weighted_split(costs: Sequence[float], gains: Sequence[float], target: float) -> np.ndarray:
    """Cheapest powers meeting ``(sum_i sqrt(g_i p_i))**2 >= target``.

    Minimizes ``sum_i c_i p_i``.  The optimal amplitudes ``sqrt(g_i p_i)``
    are proportional to ``g_i / c_i``; the minimum cost is
    ``target / sum_j (g_j / c_j)``.
    """
    c = np.asarray(costs, dtype=float)
    g = np.asarray(gains, dtype=float)
    if c.shape != g.shape:
        raise ValueError("costs and gains must have the same length")
    if np.any(c <= 0):
        raise ValueError("costs must be > 0")
    if np.any(g < 0):
        raise ValueError("gains must be >= 0")
    if target < 0:
        raise ValueError("target must be >= 0")
    p = np.zeros_like(g)
    if target == 0:
        return p
    if not np.any(g > 0):
        raise InfeasibleError("no transmitter has a positive gain")
    ratio = g / c
    share = ratio / ratio.sum()
    pos = g > 0
    p[pos] = target * share[pos] ** 2 / g[pos]
    return p


def weighted_split_cost(costs, gains, target: float) -> float:
    c = np.asarray(costs, dtype=float)
    g = np.asarray(gains, dtype=float)
    if target == 0:
        return 0.0
    return float(target / (g / c).sum())
