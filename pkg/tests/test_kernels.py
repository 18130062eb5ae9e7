import os
import subprocess
import sys

import numpy as np
import pytest

from greencell import kernels
from greencell._accel import ENV_FLAG, HAVE_NUMBA

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")


def _split_case(rng, n=3, k=4, free=False):
    g = rng.uniform(0.0, 2.0, size=(n, k))
    g[rng.random((n, k)) < 0.2] = 0.0
    g[0] = np.maximum(g[0], 0.1)  # every sub-band has a transmitter
    target = rng.uniform(0.0, 3.0, size=k)
    lam = rng.uniform(0.1, 2.0, size=n)
    if free:
        lam[rng.integers(n)] = 0.0
    return g, target, lam


@needs_numba
@pytest.mark.parametrize("free", [False, True])
def test_split_backends_agree(rng, free):
    for _ in range(50):
        g, target, lam = _split_case(rng, free=free)
        a = kernels.split_powers_np(g, target, lam)
        b = kernels.split_powers_nb(g, target, lam)
        assert np.allclose(a, b, rtol=1e-13, atol=0)
        for i in range(g.shape[0]):
            assert kernels.bs_load_nb(g, target, lam, i) == pytest.approx(
                kernels.bs_load_np(g, target, lam, i), rel=1e-13)


def test_split_meets_targets(rng):
    for _ in range(50):
        g, target, lam = _split_case(rng, free=bool(rng.integers(2)))
        p = kernels.split_powers_np(g, target, lam)
        assert np.allclose(np.sqrt(g * p).sum(axis=0) ** 2, target, rtol=1e-12)


def test_free_bs_takes_whole_subband():
    g = np.array([[1.0, 1.0], [0.6, 0.0]])
    p = kernels.split_powers_np(g, np.array([1.0, 1.0]), np.array([1.0, 0.0]))
    # sub-band 0: only the free BS 1 transmits; sub-band 1: BS 1 has no link
    assert p[:, 0] == pytest.approx([0.0, 1 / 0.6])
    assert p[:, 1] == pytest.approx([1.0, 0.0])


def _assoc_case(rng, n=2, m=5):
    g = rng.uniform(0.1, 1.5, size=(n, m))
    bw = rng.uniform(1.0, 10.0, size=n)
    rate = rng.uniform(0.2, 1.5, size=m)
    harvest = rng.uniform(0.0, 3.0, size=n)
    return g, bw, rate, 1.0, harvest, 1.0


@needs_numba
def test_association_backends_agree(rng):
    for _ in range(20):
        g, bw, rate, n0, harvest, price = _assoc_case(rng, n=int(rng.integers(2, 4)))
        n, m = g.shape
        for _ in range(10):
            a = rng.integers(n, size=m)
            assert kernels.association_cost_nb_wrapper(a, g, bw, rate, n0, harvest, price) == \
                pytest.approx(kernels.association_cost_np_single(a, g, bw, rate, n0, harvest, price),
                              rel=1e-12)
        code_np, best_np = kernels.exhaustive_association_np(g, bw, rate, n0, harvest, price, np.inf)
        code_nb, best_nb = kernels.exhaustive_association_nb(g, bw, rate, n0, harvest, price, np.inf)
        assert best_nb == pytest.approx(best_np, rel=1e-12)
        a_np = kernels.decode_association(code_np, n, m)
        a_nb = kernels.decode_association(code_nb, n, m)
        assert kernels.association_cost_np_single(a_nb, g, bw, rate, n0, harvest, price) == \
            pytest.approx(best_np, rel=1e-12)
        assert code_np == code_nb or np.isclose(best_np, best_nb)
        assert a_np.shape == (m,)


def test_decode_most_significant_first():
    assert kernels.decode_association(5, 2, 3).tolist() == [1, 0, 1]
    assert kernels.decode_association(7, 3, 2).tolist() == [2, 1]


def test_exhaustive_keeps_incumbent_on_ties(rng):
    g, bw, rate, n0, harvest, price = _assoc_case(rng)
    harvest = harvest + 1e6  # every association costs 0
    code, best = kernels.exhaustive_association_np(g, bw, rate, n0, harvest, price, 0.0)
    assert (code, best) == (-1, 0.0)


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, **{ENV_FLAG: "1"})
    out = subprocess.run([sys.executable, "-c", "import greencell.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
