"""Pancharatnam phases and discrete (Bargmann) geometric phases.

All phases are returned on the branch (-pi, pi]. Orthogonality checks use the
normalised overlap modulus ``|<b|a>| / (|a| |b|)`` so they are insensitive to
the gauge of the vectors.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ContractViolation, UndefinedPhase
from .state import DensityOperator, as_state_vector, relative_states

EPS_ORTH = 1e-9
BRANCH = "(-pi,pi]"


def wrap_phase(x):
    """Map an angle (or array of angles) onto (-pi, pi]."""
    y = np.pi - np.mod(np.pi - np.asarray(x, dtype=float), 2.0 * np.pi)
    return float(y) if y.ndim == 0 else y


def phase_distance(a, b):
    """Distance between two angles on the circle, in [0, pi]."""
    return np.abs(wrap_phase(np.asarray(a) - np.asarray(b)))


@dataclass(frozen=True, eq=False)
class StateSequence:
    """Ordered sequence ``phi_1, ..., phi_N`` of nonzero vectors (rows of ``vectors``)."""

    vectors: np.ndarray
    label: str = ""

    def __post_init__(self):
        vs = np.array(self.vectors, dtype=np.complex128)
        if vs.ndim != 2:
            raise ContractViolation("a sequence needs a 2-D array of row vectors")
        if vs.shape[0] < 3:
            raise ContractViolation(f"a sequence needs N >= 3 states, got {vs.shape[0]}")
        norms = np.linalg.norm(vs, axis=1)
        if np.any(norms == 0.0):
            raise ContractViolation(f"sequence vector {int(np.argmin(norms)) + 1} is zero")
        vs.setflags(write=False)
        object.__setattr__(self, "vectors", vs)

    @classmethod
    def of(cls, vectors, label=""):
        return cls(np.array([as_state_vector(v) for v in vectors]), label)

    def __len__(self):
        return self.vectors.shape[0]

    @property
    def dim(self):
        return self.vectors.shape[1]

    def normalized(self):
        vs = self.vectors / np.linalg.norm(self.vectors, axis=1)[:, None]
        return StateSequence(vs, self.label)

    def rescaled(self, coeffs):
        """Local gauge transformation ``phi_j -> c_j phi_j``."""
        c = np.asarray(coeffs, dtype=np.complex128)
        return StateSequence(self.vectors * c[:, None], self.label)

    def shifted(self, k=1):
        return StateSequence(np.roll(self.vectors, -k, axis=0), self.label)

    def reversed(self):
        return StateSequence(self.vectors[::-1], self.label)


@dataclass(frozen=True)
class PhaseResult:
    phase: float
    min_adjacent_overlap: float
    chain_product: complex
    log_modulus: float = 0.0
    route_discrepancy: float = 0.0
    branch: str = BRANCH


def _as_rows(seq):
    if isinstance(seq, StateSequence):
        return seq.vectors
    return StateSequence(seq).vectors


def _chain(overlaps, norms_sq, eps, what, sign=1):
    # norms_sq[j] is the squared norm of element j, paired cyclically with j+1
    denom = np.sqrt(norms_sq * np.roll(norms_sq, -1))
    n = len(overlaps)
    with np.errstate(divide="ignore", invalid="ignore"):
        moduli = np.where(denom > 0.0, np.abs(overlaps) / np.where(denom > 0, denom, 1.0), 0.0)
    bad = np.flatnonzero(~(moduli > eps))
    if bad.size:
        j = int(bad[0])
        raise UndefinedPhase(
            f"{what} {j + 1} and {(j + 1) % n + 1} are orthogonal "
            f"(normalised overlap {moduli[j]:.3e} <= {eps:g})",
            overlap=float(moduli[j]), index=j)
    unit, logmod = kernels.chain_product(np.ascontiguousarray(overlaps))
    phase = wrap_phase(sign * np.angle(unit))
    prod = np.exp(logmod) * (unit if sign > 0 else np.conj(unit))
    return PhaseResult(phase, float(moduli.min()), complex(prod), float(logmod))


def bargmann_phase(vectors, eps=EPS_ORTH):
    """``arg(<v1|vN><vN|vN-1>...<v2|v1>)`` for the rows of ``vectors``."""
    vs = np.ascontiguousarray(vectors, dtype=np.complex128)
    overlaps = kernels.cyclic_overlaps(vs)
    norms_sq = np.einsum("ji,ji->j", vs.conj(), vs).real
    return _chain(overlaps, norms_sq, eps, "states")


def pancharatnam_phase(a, b, eps=EPS_ORTH):
    """``arg <b|a>``: the phase ``f`` making ``|a> + e^{if}|b>`` maximally intense."""
    va = as_state_vector(a, name="a")
    vb = as_state_vector(b, va.size, "b")
    ov = np.vdot(vb, va)
    mod = abs(ov) / (np.linalg.norm(va) * np.linalg.norm(vb))
    if not mod > eps:
        raise UndefinedPhase(f"states are orthogonal (normalised overlap {mod:.3e})", overlap=mod)
    return wrap_phase(np.angle(ov))


def sequence_phase(seq, eps=EPS_ORTH):
    """Geometric phase of the sequence itself."""
    return bargmann_phase(_as_rows(seq), eps)


def rho_sequence_phase(rho1, seq, eps=EPS_ORTH):
    """``-arg(<phi1|rho|phiN><phiN|rho|phiN-1>...<phi2|rho|phi1>)``."""
    if not isinstance(rho1, DensityOperator):
        rho1 = DensityOperator(rho1)
    vs = np.ascontiguousarray(_as_rows(seq))
    if vs.shape[1] != rho1.dim:
        raise ContractViolation(f"sequence dimension {vs.shape[1]} does not match rho ({rho1.dim})")
    rho = np.ascontiguousarray(rho1.matrix)
    overlaps = kernels.sandwich_overlaps(vs, rho)
    diag = np.einsum("ja,ab,jb->j", vs.conj(), rho, vs).real
    return _chain(overlaps, np.clip(diag, 0.0, None), eps, "relative states", sign=-1)


def relative_sequence_phase(psi, seq, eps=EPS_ORTH):
    """Geometric phase of the relative states ``Psi(phi_1), ..., Psi(phi_N)``.

    Evaluated from the relative-state overlaps and, independently, from the
    marginal ``rho_1`` sandwich chain; the wrap-aware gap between the two is
    stored in ``route_discrepancy``.
    """
    vs = _as_rows(seq)
    if vs.shape[1] != psi.d1:
        raise ContractViolation(f"sequence dimension {vs.shape[1]} does not match d1={psi.d1}")
    rel = np.ascontiguousarray(relative_states(psi, vs))
    overlaps = kernels.cyclic_overlaps(rel)
    norms_sq = np.einsum("ji,ji->j", rel.conj(), rel).real
    direct = _chain(overlaps, norms_sq, eps, "relative states")

    m = psi.matrix
    via_rho = rho_sequence_phase(DensityOperator(m @ m.conj().T), vs, eps)
    gap = float(phase_distance(direct.phase, via_rho.phase))
    return PhaseResult(direct.phase, direct.min_adjacent_overlap, direct.chain_product,
                       direct.log_modulus, gap)
