import numpy as np
import pytest
from scipy.stats import unitary_group

from relphase import BipartiteState, StateSequence


def random_vector(rng, d):
    return rng.normal(size=d) + 1j * rng.normal(size=d)


def random_state(rng, d1, d2):
    return BipartiteState.from_matrix(random_vector(rng, d1 * d2).reshape(d1, d2), normalize=True)


def random_product(rng, d1, d2):
    return BipartiteState.product(random_vector(rng, d1), random_vector(rng, d2))


def random_max_entangled(rng, k, d2=None):
    """sum_i |i>|u_i> / sqrt(k) with a Haar-random isometry, k <= d2."""
    d2 = d2 or k
    u = unitary_group.rvs(d2, random_state=rng)[:, :k]
    return BipartiteState.from_matrix(u.T / np.sqrt(k))


def random_sequence(rng, d, n):
    return StateSequence(np.array([random_vector(rng, d) for _ in range(n)]))


def random_gauge(rng, n):
    return rng.uniform(0.2, 3.0, n) * np.exp(1j * rng.uniform(-np.pi, np.pi, n))


def random_psd(rng, d, floor=0.05):
    a = random_vector(rng, d * d).reshape(d, d)
    m = a @ a.conj().T + floor * np.eye(d)
    return m / np.trace(m).real


@pytest.fixture
def rng():
    return np.random.default_rng(20071015)


def separable_witness():
    """Separable, full-rank state with a nontrivial open-chain holonomy.

    Returns ``(state, vectors)``; the two product terms carry non-commuting
    H2 factors, so the relative density operators do not commute.
    """
    from relphase import MixedBipartiteState

    sa = np.array([[0.9, 0.0], [0.0, 0.1]])
    sb = np.array([[0.5, 0.4], [0.4, 0.5]])
    terms = [MixedBipartiteState.product(np.diag([1.0, 0.0]), sa),
             MixedBipartiteState.product(np.diag([0.0, 1.0]), sb)]
    state = MixedBipartiteState.mixture([0.5, 0.5], terms)
    vectors = np.array([[1.0, 0.0], [np.cos(0.5), np.sin(0.5)], [np.cos(1.0), np.sin(1.0)]])
    return state, vectors


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
