"""Inner loops: Bargmann chain products and the connection-form line sum.

Each kernel exists twice, a numba ``@njit`` loop and a vectorised numpy
version with identical semantics. The public names point at whichever
``relphase._accel.USE_NUMBA`` selects; both variants stay importable for tests
and the benchmark.
"""

import numpy as np

from ._accel import USE_NUMBA, njit


# -- cyclic overlaps ---------------------------------------------------------

@njit(cache=True)
def _cyclic_overlaps_nb(vecs):
    n, d = vecs.shape
    out = np.empty(n, dtype=np.complex128)
    for j in range(n):
        k = (j + 1) % n
        acc = 0j
        for i in range(d):
            acc += vecs[k, i].conjugate() * vecs[j, i]
        out[j] = acc
    return out


def _cyclic_overlaps_np(vecs):
    nxt = np.roll(vecs, -1, axis=0)
    return np.einsum("ji,ji->j", nxt.conj(), vecs)


@njit(cache=True)
def _sandwich_overlaps_nb(vecs, rho):
    n, d = vecs.shape
    out = np.empty(n, dtype=np.complex128)
    tmp = np.empty(d, dtype=np.complex128)
    for j in range(n):
        k = (j + 1) % n
        for a in range(d):
            s = 0j
            for b in range(d):
                s += rho[a, b] * vecs[j, b]
            tmp[a] = s
        acc = 0j
        for a in range(d):
            acc += vecs[k, a].conjugate() * tmp[a]
        out[j] = acc
    return out


def _sandwich_overlaps_np(vecs, rho):
    nxt = np.roll(vecs, -1, axis=0)
    return np.einsum("ja,ab,jb->j", nxt.conj(), rho, vecs, optimize=True)


# -- chain product -----------------------------------------------------------

@njit(cache=True)
def _chain_product_nb(factors):
    # running product, rescaled into a log-modulus only when it drifts far from 1
    acc = 1.0 + 0j
    logmod = 0.0
    for z in factors:
        if z == 0.0:
            return 0j, -np.inf
        acc = acc * z
        scale = abs(acc.real) + abs(acc.imag)
        if scale < 1e-100 or scale > 1e100:
            m = abs(acc)
            logmod += np.log(m)
            acc = acc / m
    m = abs(acc)
    return acc / m, logmod + np.log(m)


def _chain_product_np(factors):
    mods = np.abs(factors)
    if np.any(mods == 0.0):
        return 0j, -np.inf
    angle = np.sum(np.angle(factors))
    return complex(np.exp(1j * angle)), float(np.sum(np.log(mods)))


# -- connection one-form -----------------------------------------------------

@njit(cache=True, error_model="numpy")
def _connection_sum_nb(samples, rho):
    # samples hold the path at half-steps: even rows are nodes, odd rows midpoints
    m = (samples.shape[0] - 1) // 2
    d = samples.shape[1]
    total = 0.0
    worst = np.inf
    worst_at = -1
    rphi = np.empty(d, dtype=np.complex128)
    for k in range(m):
        mid = samples[2 * k + 1]
        for a in range(d):
            s = 0j
            for b in range(d):
                s += rho[a, b] * mid[b]
            rphi[a] = s
        num = 0j
        den = 0j
        for a in range(d):
            # <mid|rho|dphi> = conj(<dphi|rho|mid>) for Hermitian rho
            dphi = samples[2 * k + 2, a] - samples[2 * k, a]
            num += dphi * rphi[a].conjugate()
            den += mid[a].conjugate() * rphi[a]
        if den.real < worst:
            worst = den.real
            worst_at = k
        total += num.imag / den.real
    return total, worst, worst_at


def _connection_sum_np(samples, rho):
    mids = samples[1::2]
    dphi = samples[2::2] - samples[:-1:2]
    rmid = mids @ rho.T
    num = np.einsum("ka,ka->k", rmid.conj(), dphi)
    den = np.einsum("ka,ka->k", mids.conj(), rmid).real
    k = int(np.argmin(den))
    return float(np.sum(num.imag / den)), float(den[k]), k


if USE_NUMBA:
    cyclic_overlaps = _cyclic_overlaps_nb
    sandwich_overlaps = _sandwich_overlaps_nb
    chain_product = _chain_product_nb
    connection_sum = _connection_sum_nb
else:
    cyclic_overlaps = _cyclic_overlaps_np
    sandwich_overlaps = _sandwich_overlaps_np
    chain_product = _chain_product_np
    connection_sum = _connection_sum_np

BACKEND = "numba" if USE_NUMBA else "numpy"
