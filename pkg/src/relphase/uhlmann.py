"""Relative density operators and the discrete Uhlmann holonomy."""

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, RankDeficient
from .state import DensityOperator, as_state_vector

RANK_TOL = 1e-10
TRACE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class MixedBipartiteState:
    """Unit-trace density operator on H1 (x) H2 (flat index ``i * d2 + j``)."""

    rho: DensityOperator
    d1: int
    d2: int

    def __post_init__(self):
        rho = self.rho if isinstance(self.rho, DensityOperator) else DensityOperator(self.rho)
        if rho.dim != self.d1 * self.d2:
            raise ContractViolation(f"rho is {rho.dim}-dimensional, expected {self.d1}x{self.d2}")
        if abs(rho.trace - 1.0) > TRACE_TOL:
            raise ContractViolation(f"rho has trace {rho.trace!r}, expected 1")
        object.__setattr__(self, "rho", rho)

    @classmethod
    def pure(cls, psi):
        return cls(DensityOperator.pure(psi.amplitudes), psi.d1, psi.d2)

    @classmethod
    def product(cls, rho_a, rho_b):
        a, b = np.asarray(rho_a), np.asarray(rho_b)
        return cls(DensityOperator(np.kron(a, b)), a.shape[0], b.shape[0])

    @classmethod
    def mixture(cls, weights, states):
        """Convex combination of ``MixedBipartiteState`` objects of equal shape."""
        w = np.asarray(weights, dtype=float)
        if np.any(w < 0) or abs(w.sum() - 1.0) > TRACE_TOL:
            raise ContractViolation("mixture weights must be a probability vector")
        first = states[0]
        m = sum(wk * s.rho.matrix for wk, s in zip(w, states))
        return cls(DensityOperator(m), first.d1, first.d2)

    @property
    def tensor(self):
        return self.rho.matrix.reshape(self.d1, self.d2, self.d1, self.d2)


def relative_density(state, phi):
    """``<phi| rho |phi>``: the (subnormalised) operator on H2 given outcome ``phi``."""
    v = as_state_vector(phi, state.d1, "phi")
    block = np.einsum("i,ijkl,k->jl", v.conj(), state.tensor, v)
    return DensityOperator(block)


def _eigh(m):
    mat = m.matrix if isinstance(m, DensityOperator) else np.asarray(m)
    lam, vec = np.linalg.eigh(0.5 * (mat + mat.conj().T))
    return lam, vec


def sqrt_psd(m):
    """Principal square root of a positive semidefinite matrix."""
    lam, vec = _eigh(m)
    return (vec * np.sqrt(np.clip(lam, 0.0, None))) @ vec.conj().T


def inv_sqrt_psd(m, rank_tol=RANK_TOL):
    lam, vec = _eigh(m)
    if not lam[0] > rank_tol:
        raise RankDeficient(f"matrix is not faithful (min eigenvalue {lam[0]:.3e})",
                            min_eigenvalue=float(lam[0]))
    return (vec / np.sqrt(lam)) @ vec.conj().T


@dataclass(frozen=True, eq=False)
class HolonomyResult:
    unitary: np.ndarray
    step_factors: list
    min_eigenvalue_seen: float
    cyclic: bool = False

    @property
    def unitarity_defect(self):
        u = self.unitary
        return float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))))

    @property
    def deviation_from_identity(self):
        return float(np.max(np.abs(self.unitary - np.eye(self.unitary.shape[0]))))


def _factor(sq_next, sq_prev, rank_tol):
    a = sq_next @ sq_prev
    return inv_sqrt_psd(a @ a.conj().T, rank_tol) @ a


def uhlmann_holonomy(rhos, rank_tol=RANK_TOL, cyclic=False):
    """Ordered product of ``(sqrt(r_k) r_{k-1} sqrt(r_k))^{-1/2} sqrt(r_k) sqrt(r_{k-1})``.

    The factor for ``k = 2`` acts first (rightmost). With ``cyclic=True`` an
    extra closing factor for the pair ``N -> 1`` is applied last; this closing
    step is an extension, the default is the open chain.
    """
    ops = [r if isinstance(r, DensityOperator) else DensityOperator(r) for r in rhos]
    if len(ops) < 2:
        raise ContractViolation("the holonomy needs at least two density operators")
    dim = ops[0].dim
    if any(r.dim != dim for r in ops):
        raise ContractViolation("density operators differ in dimension")
    lowest = np.inf
    for idx, r in enumerate(ops):
        lam = _eigh(r)[0][0]
        lowest = min(lowest, lam)
        if not lam > rank_tol:
            raise RankDeficient(f"density operator {idx + 1} is not faithful "
                                f"(min eigenvalue {lam:.3e})", min_eigenvalue=float(lam), index=idx)
    roots = [sqrt_psd(r) for r in ops]
    pairs = [(k - 1, k) for k in range(1, len(ops))]
    if cyclic:
        pairs.append((len(ops) - 1, 0))
    factors = []
    u = np.eye(dim, dtype=np.complex128)
    for prev, nxt in pairs:
        w = _factor(roots[nxt], roots[prev], rank_tol)
        factors.append(w)
        u = w @ u
    return HolonomyResult(u, factors, float(lowest), cyclic)


def relative_holonomy(state, seq, rank_tol=RANK_TOL, cyclic=False):
    """Holonomy of the relative density operators ``rho(phi_1), ..., rho(phi_N)``."""
    vs = getattr(seq, "vectors", seq)
    return uhlmann_holonomy([relative_density(state, v) for v in vs], rank_tol, cyclic)


def regularized_pure_diagnostic(psi, seq, eps_values=(1e-2, 1e-3, 1e-4), element=(0, 0)):
    """Holonomy of ``(1-eps)|Psi><Psi| + eps/(d1 d2)`` for a few ``eps``.

    Reports ``arg U[element]`` per ``eps`` as raw data; no limiting relation to
    the pure-state phase is implied.
    """
    pure = DensityOperator.pure(psi.amplitudes).matrix
    d = psi.d1 * psi.d2
    rows = []
    for eps in eps_values:
        mixed = MixedBipartiteState(DensityOperator((1 - eps) * pure + eps * np.eye(d) / d),
                                    psi.d1, psi.d2)
        res = relative_holonomy(mixed, seq, rank_tol=0.0)
        rows.append({"eps": float(eps), "arg": float(np.angle(res.unitary[element])),
                     "deviation_from_identity": res.deviation_from_identity})
    return rows
