import os
import subprocess
import sys

import numpy as np
import pytest

from relphase import kernels

from conftest import random_psd, random_vector


def _vecs(rng, n, d):
    return np.ascontiguousarray(random_vector(rng, n * d).reshape(n, d))


@pytest.mark.parametrize("n,d", [(3, 2), (17, 5), (400, 3)])
def test_overlap_kernels_agree(rng, n, d):
    v = _vecs(rng, n, d)
    rho = np.ascontiguousarray(random_psd(rng, d))
    a = kernels._cyclic_overlaps_nb(v)
    assert np.allclose(a, kernels._cyclic_overlaps_np(v), rtol=1e-13, atol=0)
    assert a[0] == pytest.approx(np.vdot(v[1], v[0]))
    assert a[-1] == pytest.approx(np.vdot(v[0], v[-1]))
    assert np.allclose(kernels._sandwich_overlaps_nb(v, rho),
                       kernels._sandwich_overlaps_np(v, rho), rtol=1e-13, atol=0)


def test_chain_product_agrees_and_survives_underflow(rng):
    f = 1e-3 * np.exp(1j * rng.uniform(-np.pi, np.pi, 2000))
    u_nb, log_nb = kernels._chain_product_nb(f)
    u_np, log_np = kernels._chain_product_np(f)
    assert abs(u_nb - u_np) < 1e-10 and abs(abs(u_nb) - 1) < 1e-12
    assert log_nb == pytest.approx(2000 * np.log(1e-3)) == log_np


def test_connection_sum_agrees(rng):
    samples = _vecs(rng, 201, 4)
    rho = np.ascontiguousarray(random_psd(rng, 4))
    nb = kernels._connection_sum_nb(samples, rho)
    npy = kernels._connection_sum_np(samples, rho)
    assert nb[0] == pytest.approx(npy[0], rel=1e-12)
    assert nb[1] == pytest.approx(npy[1], rel=1e-12)
    assert nb[2] == npy[2]


def test_env_flag_selects_numpy():
    env = dict(os.environ, RELPHASE_NO_JIT="1")
    out = subprocess.run([sys.executable, "-c", "from relphase import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
