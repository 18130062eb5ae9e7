"""AWGN power/bandwidth/rate law and non-cooperative power demand.

Serving rate ``r`` over bandwidth ``W`` with noise density ``N0`` and power
gain ``g`` needs transmit power ``N0 * W * (2**(r/W) - 1) / g``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError
from .model import PowerProfile, Scenario

LN2 = np.log(2.0)
POWER_FLOOR = 1e-12


@dataclass(frozen=True)
class LinkRequirement:
    rate: float
    bandwidth: float
    noise_density: float = 1.0
    gain: float = 1.0


def _clamp(p):
    p = np.where(np.abs(p) < POWER_FLOOR, 0.0, p)
    return p if p.ndim else float(p)


def awgn_power(rate, bandwidth=None, noise_density=1.0, gain=1.0):
    """Transmit power needed for ``rate``; broadcasts over array inputs.

    ``rate`` may also be a :class:`LinkRequirement`, in which case the other
    arguments are ignored.

    Powers below ``POWER_FLOOR`` are returned as exactly zero.
    """
    if isinstance(rate, LinkRequirement):
        req = rate
        rate, bandwidth, noise_density, gain = req.rate, req.bandwidth, req.noise_density, req.gain
    elif bandwidth is None:
        raise TypeError("awgn_power needs a bandwidth")
    r = np.asarray(rate, dtype=float)
    w = np.asarray(bandwidth, dtype=float)
    g = np.asarray(gain, dtype=float)
    n0 = np.asarray(noise_density, dtype=float)
    if np.any(w <= 0):
        raise ValueError("bandwidth must be > 0")
    if np.any(g <= 0):
        raise ValueError("gain must be > 0")
    if np.any(n0 <= 0):
        raise ValueError("noise density must be > 0")
    with np.errstate(over="ignore"):
        p = n0 * w * np.expm1(r / w * LN2) / g
    return _clamp(p)


def awgn_rate(power, bandwidth, noise_density=1.0, gain=1.0):
    """Inverse of :func:`awgn_power`."""
    p = np.asarray(power, dtype=float)
    w = np.asarray(bandwidth, dtype=float)
    n0 = np.asarray(noise_density, dtype=float)
    if np.any(w <= 0):
        raise ValueError("bandwidth must be > 0")
    if np.any(n0 <= 0):
        raise ValueError("noise density must be > 0")
    r = w * np.log1p(np.asarray(gain, dtype=float) * p / (n0 * w)) / LN2
    return r if r.ndim else float(r)


def comp_target(rate, sub_band_width, noise_density=1.0):
    """Received power a terminal needs on a sub-band of width ``w``."""
    return awgn_power(rate, sub_band_width, noise_density, 1.0)


@dataclass(frozen=True)
class LinkPlan:
    """Per-terminal serving BS, bandwidth and power for orthogonal schemes."""

    serving_bs: tuple[int, ...]
    bandwidth: tuple[float, ...]
    power: tuple[float, ...]

    def per_bs(self, n_bs: int) -> np.ndarray:
        q = np.zeros(n_bs)
        for i, p in zip(self.serving_bs, self.power):
            q[i] += p
        return q

    def rates(self, s: Scenario) -> np.ndarray:
        g = s.gains[list(self.serving_bs), np.arange(s.n_mt)] if s.n_mt else np.zeros(0)
        return np.asarray(awgn_rate(np.array(self.power), np.array(self.bandwidth),
                                    s.noise_density, g), dtype=float).reshape(-1)


def equal_split_plan(s: Scenario, serving, bandwidths) -> LinkPlan:
    """Each BS splits ``bandwidths[i]`` equally over the terminals it serves.

    One terminal per sub-band, served at exactly its minimum rate.
    """
    serving = np.asarray(serving, dtype=np.int64)
    bandwidths = np.asarray(bandwidths, dtype=float)
    counts = np.bincount(serving, minlength=s.n_bs) if serving.size else np.zeros(s.n_bs, int)
    bw = np.zeros(s.n_mt)
    pw = np.zeros(s.n_mt)
    for k in range(s.n_mt):
        i = serving[k]
        if bandwidths[i] <= 0:
            raise InfeasibleError(f"BS {i} serves terminal {k} with no bandwidth")
        g = s.gains[i, k]
        if g <= 0:
            raise InfeasibleError(f"terminal {k} has zero gain to its serving BS {i}")
        bw[k] = bandwidths[i] / counts[i]
        pw[k] = awgn_power(s.terminals[k].min_rate, bw[k], s.noise_density, g)
    return LinkPlan(tuple(int(i) for i in serving), tuple(bw.tolist()), tuple(pw.tolist()))


def conventional_plan(s: Scenario) -> LinkPlan:
    return equal_split_plan(s, s.homes, s.bandwidth)


def conventional_demand(s: Scenario) -> PowerProfile:
    return PowerProfile(conventional_plan(s).per_bs(s.n_bs))
