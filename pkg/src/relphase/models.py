"""Worked examples: the two-qubit family and two-mode squeezed states.

Each example comes with a closed-form phase used as an oracle for the
numerical routines.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc, gammaln

from .bargmann import StateSequence, wrap_phase
from .errors import ContractViolation, TruncationError, UndefinedPhase
from .state import BipartiteState

TAIL_TOL = 1e-12
DEFAULT_TRUNCATION = 60


# -- two qubits --------------------------------------------------------------

@dataclass(frozen=True)
class TwoQubitLambda:
    lam: float

    def __post_init__(self):
        if not 0.0 <= self.lam <= np.pi:
            raise ContractViolation(f"lambda must lie in [0, pi], got {self.lam!r}")

    def state(self):
        return make_two_qubit(self.lam)


def make_two_qubit(lam):
    """``cos(lam/2)|00> + sin(lam/2)|11>``."""
    if not 0.0 <= lam <= np.pi:
        raise ContractViolation(f"lambda must lie in [0, pi], got {lam!r}")
    amps = np.zeros(4, dtype=np.complex128)
    amps[0] = np.cos(lam / 2)
    amps[3] = np.sin(lam / 2)
    return BipartiteState(amps, 2, 2)


def qubit_sequence(phi):
    """Triangle ``|0>, (|0>+|1>)/sqrt2, (|0>+e^{i phi}|1>)/sqrt2`` on the Bloch sphere.

    Its Bargmann phase is ``-phi/2``. Note the sign of the relative phase in
    the third vector: with ``e^{-i phi}`` every phase below flips sign.
    """
    if not 0.0 <= phi < np.pi:
        raise ContractViolation(f"phi must lie in [0, pi), got {phi!r}")
    s = 1 / np.sqrt(2)
    return StateSequence(np.array([[1, 0], [s, s], [s, s * np.exp(1j * phi)]]),
                         label=f"qubit triangle phi={phi!r}")


def gamma_two_qubit_closed_form(lam, phi):
    """``phi/2 - arctan(cos(lam) tan(phi/2))``."""
    if not 0.0 <= lam <= np.pi or not 0.0 <= phi < np.pi:
        raise ContractViolation(f"(lambda, phi) = ({lam!r}, {phi!r}) out of range")
    if lam == np.pi:
        raise UndefinedPhase("relative state of |0> vanishes at lambda = pi", overlap=0.0)
    # atan2 form stays finite as phi -> pi
    return wrap_phase(phi / 2 - np.arctan2(np.cos(lam) * np.sin(phi / 2), np.cos(phi / 2)))


# -- oscillators -------------------------------------------------------------

def coherent_tail(z, truncation):
    """Poisson probability of more than ``truncation`` quanta in ``|z>``."""
    return float(gammainc(truncation + 1, abs(z) ** 2))


def squeezed_tail(r, truncation):
    return float(np.tanh(r) ** (2 * (truncation + 1)))


def coherent_vector(z, truncation=DEFAULT_TRUNCATION):
    """Fock amplitudes ``exp(-|z|^2/2) z^n / sqrt(n!)`` for ``n <= truncation``."""
    tail = coherent_tail(z, truncation)
    if tail >= TAIL_TOL:
        raise TruncationError(
            f"coherent state z={z!r} leaves tail {tail:.3e} beyond n={truncation}", tail=tail)
    return coherent_amplitudes(z, truncation)


def coherent_amplitudes(z, truncation):
    """Unchecked version of :func:`coherent_vector`; accepts an array of labels."""
    z = np.asarray(z, dtype=np.complex128)
    n = np.arange(truncation + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        logmag = n * np.log(np.abs(z)[..., None]) - 0.5 * gammaln(n + 1)
    logmag = np.where(n == 0, 0.0, logmag)
    amps = np.exp(logmag - 0.5 * np.abs(z)[..., None] ** 2 + 1j * n * np.angle(z)[..., None])
    return amps


@dataclass(frozen=True)
class SqueezedState:
    r: float
    truncation: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        make_squeezed(self.r, self.truncation)  # validation only

    def state(self):
        return make_squeezed(self.r, self.truncation)

    @property
    def tail(self):
        return squeezed_tail(self.r, self.truncation)


def make_squeezed(r, truncation=DEFAULT_TRUNCATION):
    """Two-mode squeezed vacuum ``sum_n tanh(r)^n |nn> / cosh(r)`` cut at ``n <= truncation``."""
    if r < 0:
        raise ContractViolation(f"squeezing must be non-negative, got {r!r}")
    if truncation < 1:
        raise ContractViolation("truncation must be >= 1")
    tail = squeezed_tail(r, truncation)
    if tail >= TAIL_TOL:
        raise TruncationError(
            f"squeezing r={r!r} leaves tail {tail:.3e} beyond n={truncation}", tail=tail)
    d = truncation + 1
    coeffs = np.zeros((d, d), dtype=np.complex128)
    coeffs[np.arange(d), np.arange(d)] = np.tanh(r) ** np.arange(d) / np.cosh(r)
    return BipartiteState.from_matrix(coeffs, normalize=True)


def relative_coherent_label(r, z):
    """Label of the coherent relative state of ``|z>``: ``tanh(r) * conj(z)``."""
    if r < 0:
        raise ContractViolation(f"squeezing must be non-negative, got {r!r}")
    return np.tanh(r) * np.conj(z)


@dataclass(frozen=True, eq=False)
class PhasePolygon:
    """Closed polygon of coherent-state labels ``z_j = (q_j + i p_j)/sqrt2``."""

    vertices: np.ndarray

    def __post_init__(self):
        z = np.array(self.vertices, dtype=np.complex128).ravel()
        if z.size < 3:
            raise ContractViolation("a phase-space polygon needs at least 3 vertices")
        if np.any(z == np.roll(z, -1)):
            raise ContractViolation("consecutive polygon vertices must be distinct")
        z.setflags(write=False)
        object.__setattr__(self, "vertices", z)

    @classmethod
    def from_qp(cls, q, p):
        return cls((np.asarray(q) + 1j * np.asarray(p)) / np.sqrt(2))

    @property
    def q(self):
        return np.sqrt(2) * self.vertices.real

    @property
    def p(self):
        return np.sqrt(2) * self.vertices.imag

    def reversed(self):
        return PhasePolygon(self.vertices[::-1])

    def sequence(self, truncation=DEFAULT_TRUNCATION):
        return StateSequence(np.array([coherent_vector(z, truncation) for z in self.vertices]),
                             label="coherent polygon")


def polygon_pdq_area(poly):
    """Exact ``oint p dq`` along the straight edges of ``poly``."""
    q, p = poly.q, poly.p
    q1, p1 = np.roll(q, -1), np.roll(p, -1)
    return float(np.sum(0.5 * (p + p1) * (q1 - q)))


def gamma_squeezed_closed_form(r, poly):
    """``-tanh(r)^2 * oint p dq``."""
    if r < 0:
        raise ContractViolation(f"squeezing must be non-negative, got {r!r}")
    return -np.tanh(r) ** 2 * polygon_pdq_area(poly)
