"""Inner loops: per-sub-band coherent split and association costing.

Each kernel exists twice, a numba loop version (``*_nb``) and a vectorized
numpy version (``*_np``).  The public names point at one of them depending on
:data:`greencell._accel.USE_NUMBA`.  Both versions sum over sub-bands and
terminals in index order.

Split convention: on sub-band ``k`` BS ``i`` gets amplitude weight
``g[i, k] / lam[i]``.  A BS with ``lam[i] == 0`` and positive gain is free;
when a sub-band has any free BS, only free BSs transmit there and they split
by gain (minimum total power among them).
"""

import math

import numpy as np

from ._accel import USE_NUMBA, njit

LN2 = math.log(2.0)


# -- coherent split ---------------------------------------------------------

def split_powers_np(g, target, lam):
    n, k = g.shape
    free = lam <= 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        w = g / lam[:, None]
    if free.any():
        has_free = (g[free] > 0.0).any(axis=0)
        w = np.where(has_free[None, :], np.where(free[:, None], g, 0.0), w)
    pos = g > 0.0
    w = np.where(pos, w, 0.0)
    tot = w.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        share = w / tot
        p = np.where(pos, target * share * share / g, 0.0)
    return p


@njit
def split_powers_nb(g, target, lam):
    n, k = g.shape
    p = np.zeros((n, k))
    w = np.zeros(n)
    for j in range(k):
        any_free = False
        for i in range(n):
            if lam[i] <= 0.0 and g[i, j] > 0.0:
                any_free = True
        tot = 0.0
        for i in range(n):
            if g[i, j] <= 0.0:
                w[i] = 0.0
            elif any_free:
                w[i] = g[i, j] if lam[i] <= 0.0 else 0.0
            else:
                w[i] = g[i, j] / lam[i]
            tot += w[i]
        for i in range(n):
            if w[i] > 0.0:
                s = w[i] / tot
                p[i, j] = target[j] * s * s / g[i, j]
    return p


def bs_load_np(g, target, lam, i):
    return float(split_powers_np(g, target, lam)[i].sum())


@njit
def bs_load_nb(g, target, lam, i):
    n, k = g.shape
    total = 0.0
    for j in range(k):
        if g[i, j] <= 0.0:
            continue
        any_free = False
        for m in range(n):
            if lam[m] <= 0.0 and g[m, j] > 0.0:
                any_free = True
        if any_free and lam[i] > 0.0:
            continue
        tot = 0.0
        for m in range(n):
            if g[m, j] <= 0.0:
                continue
            if any_free:
                if lam[m] <= 0.0:
                    tot += g[m, j]
            else:
                tot += g[m, j] / lam[m]
        wi = g[i, j] if any_free else g[i, j] / lam[i]
        s = wi / tot
        total += target[j] * s * s / g[i, j]
    return total


# -- association costing ----------------------------------------------------

def association_loads_np(assoc, g, bandwidth, rate, n0):
    """Per-BS load for a batch of associations, shape ``(batch, n_bs)``."""
    assoc = np.atleast_2d(assoc)
    b, m = assoc.shape
    n = g.shape[0]
    cols = np.arange(m)
    counts = np.stack([(assoc == i).sum(axis=1) for i in range(n)], axis=1)
    gk = g[assoc, cols[None, :]]
    cnt = np.take_along_axis(counts, assoc, axis=1)
    w = bandwidth[assoc] / cnt
    with np.errstate(divide="ignore", over="ignore"):
        p = n0 * w * np.expm1(rate[None, :] / w * LN2) / gk
    p = np.where(gk > 0.0, p, np.inf)
    loads = np.zeros((b, n))
    for i in range(n):
        loads[:, i] = np.where(assoc == i, p, 0.0).sum(axis=1)
    return loads


def association_cost_np(assoc, g, bandwidth, rate, n0, harvest, price):
    loads = association_loads_np(assoc, g, bandwidth, rate, n0)
    return (price * np.maximum(loads - harvest[None, :], 0.0)).sum(axis=1)


@njit
def association_cost_nb(assoc, g, bandwidth, rate, n0, harvest, price):
    n = g.shape[0]
    m = assoc.shape[0]
    counts = np.zeros(n)
    for k in range(m):
        counts[assoc[k]] += 1.0
    loads = np.zeros(n)
    for k in range(m):
        i = assoc[k]
        gk = g[i, k]
        if gk <= 0.0:
            return np.inf
        w = bandwidth[i] / counts[i]
        loads[i] += n0 * w * math.expm1(rate[k] / w * LN2) / gk
    cost = 0.0
    for i in range(n):
        if loads[i] > harvest[i]:
            cost += price * (loads[i] - harvest[i])
    return cost


@njit
def _improves(cost, best):
    # strict improvement by a relative margin; any finite cost beats an infinite incumbent
    if math.isinf(best):
        return cost < best
    return cost < best - 1e-12 * max(1.0, abs(best))


def _decode(codes, n, m):
    powers = n ** np.arange(m - 1, -1, -1, dtype=np.int64)
    return (codes[:, None] // powers[None, :]) % n


def exhaustive_association_np(g, bandwidth, rate, n0, harvest, price, incumbent, chunk=1 << 15):
    """Scan all ``n**m`` associations; terminal 0 is the most significant digit.

    Returns ``(code, cost)`` of the first association strictly cheaper than
    ``incumbent`` by more than a relative 1e-12, or ``(-1, incumbent)``.
    """
    n, m = g.shape
    total = n ** m
    best_code, best = -1, float(incumbent)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        costs = association_cost_np(_decode(codes, n, m), g, bandwidth, rate, n0, harvest, price)
        j = int(np.argmin(costs))
        if _improves(costs[j], best):
            best_code, best = int(codes[j]), float(costs[j])
    return best_code, best


@njit
def exhaustive_association_nb(g, bandwidth, rate, n0, harvest, price, incumbent):
    n, m = g.shape
    total = n ** m
    assoc = np.zeros(m, dtype=np.int64)
    best_code = -1
    best = incumbent
    for code in range(total):
        c = code
        for k in range(m - 1, -1, -1):
            assoc[k] = c % n
            c //= n
        cost = association_cost_nb(assoc, g, bandwidth, rate, n0, harvest, price)
        if _improves(cost, best):
            best_code = code
            best = cost
    return best_code, best


def decode_association(code, n, m):
    return _decode(np.array([code], dtype=np.int64), n, m)[0]


def association_cost_nb_wrapper(assoc, g, bandwidth, rate, n0, harvest, price):
    return float(association_cost_nb(np.ascontiguousarray(assoc, dtype=np.int64), g,
                                     bandwidth, rate, n0, harvest, price))


def association_cost_np_single(assoc, g, bandwidth, rate, n0, harvest, price):
    return float(association_cost_np(np.asarray(assoc, dtype=np.int64)[None, :], g,
                                      bandwidth, rate, n0, harvest, price)[0])


BACKENDS = {
    "numpy": dict(split_powers=split_powers_np, bs_load=bs_load_np,
                  association_cost=association_cost_np_single,
                  exhaustive_association=exhaustive_association_np),
    "numba": dict(split_powers=split_powers_nb, bs_load=bs_load_nb,
                  association_cost=association_cost_nb_wrapper,
                  exhaustive_association=exhaustive_association_nb),
}

BACKEND = "numba" if USE_NUMBA else "numpy"
_active = BACKENDS[BACKEND]
split_powers = _active["split_powers"]
bs_load = _active["bs_load"]
association_cost = _active["association_cost"]
exhaustive_association = _active["exhaustive_association"]
