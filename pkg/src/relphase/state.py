"""Bipartite pure states, density operators and the relative-state map.

Amplitudes of ``|i>_1 |j>_2`` live at flat index ``i * d2 + j``; every module
reshapes with this convention.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-10
PSD_FLOOR = -1e-10


def as_vector(x, dim=None, name="vector"):
    """Coerce ``x`` to a read-only 1-D complex128 array and check its size."""
    v = np.array(x, dtype=np.complex128)
    if v.ndim != 1 or v.size == 0:
        raise ContractViolation(f"{name} must be a non-empty 1-D array, got shape {v.shape}")
    if dim is not None and v.size != dim:
        raise ContractViolation(f"{name} has dimension {v.size}, expected {dim}")
    v.setflags(write=False)
    return v


def as_state_vector(x, dim=None, name="vector"):
    """Like :func:`as_vector` but also rejects the zero vector."""
    v = as_vector(x, dim, name)
    if not np.any(v):
        raise ContractViolation(f"{name} is the zero vector")
    return v


def _frozen(a):
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Normalised pure state on H1 (x) H2."""

    amplitudes: np.ndarray
    d1: int
    d2: int

    def __post_init__(self):
        amps = as_vector(self.amplitudes, name="amplitudes")
        if self.d1 < 1 or self.d2 < 1 or self.d1 * self.d2 != amps.size:
            raise ContractViolation(
                f"dimensions {self.d1}x{self.d2} do not factor {amps.size} amplitudes")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ContractViolation(f"state norm is {norm!r}, expected 1")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_matrix(cls, coeffs, normalize=False):
        """Build from the d1 x d2 coefficient matrix ``coeffs[i, j]``."""
        m = np.array(coeffs, dtype=np.complex128)
        if m.ndim != 2:
            raise ContractViolation("coefficient matrix must be 2-D")
        if normalize:
            m = m / np.linalg.norm(m)
        return cls(m.reshape(-1), m.shape[0], m.shape[1])

    @classmethod
    def product(cls, alpha, beta):
        a = as_state_vector(alpha, name="alpha")
        b = as_state_vector(beta, name="beta")
        return cls.from_matrix(np.outer(a / np.linalg.norm(a), b / np.linalg.norm(b)))

    @property
    def matrix(self):
        return self.amplitudes.reshape(self.d1, self.d2)

    @property
    def dim(self):
        return self.d1 * self.d2


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian positive semidefinite matrix; the trace need not be one."""

    matrix: np.ndarray
    hermiticity_defect: float = field(init=False)
    min_eigenvalue: float = field(init=False)

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ContractViolation(f"density operator must be square, got shape {m.shape}")
        defect = float(np.max(np.abs(m - m.conj().T)))
        if defect > HERMITIAN_TOL:
            raise ContractViolation(f"matrix is not Hermitian (defect {defect:.3e})")
        herm = 0.5 * (m + m.conj().T)
        lam = float(np.linalg.eigvalsh(herm)[0])
        if lam < PSD_FLOOR:
            raise ContractViolation(f"matrix is not positive semidefinite (min eigenvalue {lam:.3e})")
        if np.trace(herm).real <= 0.0:
            raise ContractViolation("density operator has non-positive trace")
        object.__setattr__(self, "matrix", _frozen(herm))
        object.__setattr__(self, "hermiticity_defect", defect)
        object.__setattr__(self, "min_eigenvalue", lam)

    @classmethod
    def pure(cls, vec):
        v = as_state_vector(vec)
        return cls(np.outer(v, v.conj()))

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def trace(self):
        return float(np.trace(self.matrix).real)

    def expectation(self, phi):
        """``<phi|rho|phi>`` (real, non-negative up to rounding)."""
        v = as_vector(phi, self.dim, "phi")
        return float(np.vdot(v, self.matrix @ v).real)


def relative_state(psi, phi):
    """Everett relative state ``<phi|Psi>`` in H2 (unnormalised, antilinear in ``phi``)."""
    v = as_state_vector(phi, psi.d1, "phi")
    return psi.matrix.T @ v.conj()


def relative_states(psi, vectors):
    """Relative states of a stack of H1 vectors, one per row."""
    vs = np.asarray(vectors, dtype=np.complex128)
    if vs.ndim != 2 or vs.shape[1] != psi.d1:
        raise ContractViolation(f"expected an (N, {psi.d1}) array of vectors, got {vs.shape}")
    return vs.conj() @ psi.matrix


def reduced_density(psi, subsystem=1):
    """Marginal density operator on subsystem 1 or 2."""
    m = psi.matrix
    if subsystem == 1:
        return DensityOperator(m @ m.conj().T)
    if subsystem == 2:
        return DensityOperator(m.T @ m.conj())
    raise ContractViolation(f"subsystem must be 1 or 2, got {subsystem!r}")


def marginal_probability(psi, phi):
    """Probability of outcome ``phi`` on subsystem 1; ``phi`` must be normalised."""
    v = as_state_vector(phi, psi.d1, "phi")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > NORM_TOL:
        raise ContractViolation(f"phi has norm {norm!r}; a normalised outcome is required")
    r = relative_state(psi, v)
    return float(np.vdot(r, r).real)


def schmidt_coefficients(psi):
    return np.linalg.svd(psi.matrix, compute_uv=False)


def schmidt_rank(psi, tol=1e-10):
    if tol <= 0:
        raise ContractViolation("tol must be positive")
    return int(np.count_nonzero(schmidt_coefficients(psi) > tol))
