"""Null phase curves and the line integral of the connection one-form.

A segment is a smooth map ``t in [0, 1] -> vector``; a :class:`RayPath` chains
segments that join up to a phase (continuity in ray space). Two families of
null phase curves are provided: great circles (geodesics; for qubits these are
exactly the null phase curves) and straight lines of coherent-state labels.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .bargmann import EPS_ORTH, bargmann_phase, wrap_phase
from .errors import ContractViolation, NoUniqueGeodesic, SingularConnection, TruncationError
from .models import TAIL_TOL, coherent_amplitudes, coherent_tail
from .state import DensityOperator, as_state_vector, relative_states

RAY_CONTINUITY_TOL = 1e-9
SINGULAR_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Segment:
    """Vector-valued curve on [0, 1]; ``func`` maps an array of t to rows of vectors."""

    func: object
    dim: int
    kind: str = "curve"

    def __call__(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.asarray(self.func(t), dtype=np.complex128).reshape(t.size, self.dim)

    @property
    def start(self):
        return self(0.0)[0]

    @property
    def end(self):
        return self(1.0)[0]

    def reversed(self):
        f = self.func
        return Segment(lambda t: f(1.0 - t), self.dim, self.kind)

    def with_section(self, phase):
        """Same rays, vectors multiplied by ``exp(i * phase(t))``."""
        f = self.func
        return Segment(lambda t: f(t) * np.exp(1j * phase(t))[:, None], self.dim, self.kind)


def _ray_fidelity(a, b):
    return abs(np.vdot(a, b)) / (np.linalg.norm(a) * np.linalg.norm(b))


@dataclass(frozen=True, eq=False)
class RayPath:
    segments: tuple
    closed: bool = True
    junction_fidelities: tuple = field(init=False, default=())

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise ContractViolation("a path needs at least one segment")
        dim = segs[0].dim
        if any(s.dim != dim for s in segs):
            raise ContractViolation("segments live in different dimensions")
        n = len(segs) if self.closed else len(segs) - 1
        fid = tuple(_ray_fidelity(segs[k].end, segs[(k + 1) % len(segs)].start) for k in range(n))
        for k, f in enumerate(fid):
            if f <= 1.0 - RAY_CONTINUITY_TOL:
                raise ContractViolation(
                    f"segment {k} does not join segment {(k + 1) % len(segs)} in ray space "
                    f"(fidelity {f:.12f})")
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "junction_fidelities", fid)

    @property
    def dim(self):
        return self.segments[0].dim

    def __len__(self):
        return len(self.segments)

    def reversed(self):
        return RayPath(tuple(s.reversed() for s in reversed(self.segments)), self.closed)

    def with_section(self, phase):
        return RayPath(tuple(s.with_section(phase) for s in self.segments), self.closed)

    def vertices(self):
        return np.array([s.start for s in self.segments])


# -- null phase curve families -----------------------------------------------

def _slerp_weights(t, theta):
    if theta < 1e-15:
        return 1.0 - t, t
    s = np.sin(theta)
    return np.sin((1.0 - t) * theta) / s, np.sin(t * theta) / s


def geodesic(a, b, eps=EPS_ORTH):
    """Constant-speed great circle from ray ``a`` to ray ``b`` (horizontal lift)."""
    va = as_state_vector(a, name="a")
    vb = as_state_vector(b, va.size, "b")
    ua = va / np.linalg.norm(va)
    ub = vb / np.linalg.norm(vb)
    ov = np.vdot(ua, ub)
    if abs(ov) <= eps:
        raise NoUniqueGeodesic(f"endpoints are orthogonal (overlap {abs(ov):.3e})")
    ub = ub * np.exp(-1j * np.angle(ov))
    theta = float(np.arccos(min(1.0, abs(ov))))

    def func(t):
        wa, wb = _slerp_weights(t, theta)
        return wa[:, None] * ua + wb[:, None] * ub

    return Segment(func, va.size, "geodesic")


def qubit_geodesic(a, b, eps=EPS_ORTH):
    """Great-circle arc between two qubit rays; these are the qubit null phase curves."""
    va = as_state_vector(a, 2, "a")
    vb = as_state_vector(b, 2, "b")
    return geodesic(va, vb, eps)


def coherent_line(z1, z2, truncation=60):
    """Coherent states along the straight phase-space line from ``z1`` to ``z2``."""
    for z in (z1, z2):
        tail = coherent_tail(z, truncation)
        if tail >= TAIL_TOL:
            raise TruncationError(
                f"coherent state z={z!r} leaves tail {tail:.3e} beyond n={truncation}", tail=tail)
    z1, z2 = complex(z1), complex(z2)

    def func(t):
        return coherent_amplitudes((1.0 - t) * z1 + t * z2, truncation)

    return Segment(func, truncation + 1, "coherent line")


def geodesic_polygon(vectors, eps=EPS_ORTH):
    """Closed chain of geodesics through the rows of ``vectors``."""
    vs = np.asarray(getattr(vectors, "vectors", vectors))
    n = len(vs)
    return RayPath(tuple(geodesic(vs[k], vs[(k + 1) % n], eps) for k in range(n)))


def coherent_polygon(vertices, truncation=60):
    z = np.asarray(getattr(vertices, "vertices", vertices), dtype=np.complex128)
    n = len(z)
    return RayPath(tuple(coherent_line(z[k], z[(k + 1) % n], truncation) for k in range(n)))


def relative_geodesic_polygon(psi, seq, eps=EPS_ORTH):
    """Closed path in H1 whose relative states run along geodesics of H2.

    Each edge is ``w_a(t) phi_a + w_b(t) e^{i chi} phi_b`` with real slerp
    weights, so by antilinearity its image ``w_a Psi(phi_a) + w_b e^{-i chi}
    Psi(phi_b)`` is the great circle between the two relative states.
    """
    vs = np.asarray(getattr(seq, "vectors", seq), dtype=np.complex128)
    rel = relative_states(psi, vs)
    norms = np.linalg.norm(rel, axis=1)
    if np.any(norms == 0.0):
        raise NoUniqueGeodesic(f"relative state {int(np.argmin(norms)) + 1} vanishes")
    n = len(vs)
    segs = []
    for k in range(n):
        j = (k + 1) % n
        ov = np.vdot(rel[k], rel[j]) / (norms[k] * norms[j])
        if abs(ov) <= eps:
            raise NoUniqueGeodesic(f"relative states {k + 1} and {j + 1} are orthogonal")
        theta = float(np.arccos(min(1.0, abs(ov))))
        fa = vs[k] / norms[k]
        fb = vs[j] * np.exp(1j * np.angle(ov)) / norms[j]

        def func(t, fa=fa, fb=fb, theta=theta):
            wa, wb = _slerp_weights(t, theta)
            return wa[:, None] * fa + wb[:, None] * fb

        segs.append(Segment(func, psi.d1, "relative geodesic"))
    return RayPath(tuple(segs))


def three_point_phase(segment, t1, t2, t3, eps=EPS_ORTH):
    """Bargmann phase of three points on one segment; zero for a null phase curve."""
    return bargmann_phase(segment(np.array([t1, t2, t3])), eps).phase


# -- integration -------------------------------------------------------------

def _as_density(rho1):
    return rho1 if isinstance(rho1, DensityOperator) else DensityOperator(rho1)


def connection_integral(path, rho1, steps_per_segment=10_000):
    """``oint Im <phi|rho|dphi> / <phi|rho|phi>`` around a closed path.

    Composite midpoint rule with central differences for ``dphi``; each
    junction where consecutive segments meet with different vector phases
    contributes ``arg <end_k|rho|start_k+1>`` so the result depends only on the
    rays.
    """
    if not path.closed:
        raise ContractViolation("the connection integral needs a closed path")
    if steps_per_segment < 1:
        raise ContractViolation("steps_per_segment must be positive")
    rho1 = _as_density(rho1)
    if rho1.dim != path.dim:
        raise ContractViolation(f"rho has dimension {rho1.dim}, path has {path.dim}")
    rho = np.ascontiguousarray(rho1.matrix)
    rho_norm = float(np.linalg.eigvalsh(rho)[-1])
    t = np.linspace(0.0, 1.0, 2 * steps_per_segment + 1)

    total = 0.0
    ends = []
    for k, seg in enumerate(path.segments):
        samples = np.ascontiguousarray(seg(t))
        part, worst, at = kernels.connection_sum(samples, rho)
        scale = rho_norm * float(np.max(np.einsum("ka,ka->k", samples.conj(), samples).real))
        if not worst > SINGULAR_TOL * scale:
            raise SingularConnection(
                f"<phi|rho|phi> vanishes on segment {k} near t={t[2 * at + 1]:.6f}",
                t=float(t[2 * at + 1]), segment=k)
        total += part
        ends.append((samples[0], samples[-1]))

    n = len(ends)
    for k in range(n):
        end, start = ends[k][1], ends[(k + 1) % n][0]
        jump = np.vdot(end, rho @ start)
        if abs(jump) <= SINGULAR_TOL * rho_norm * np.linalg.norm(end) * np.linalg.norm(start):
            raise SingularConnection(f"<phi|rho|phi> vanishes at junction {k}", t=1.0, segment=k)
        total += np.angle(jump)
    return wrap_phase(total)


def sample_path(path, samples_per_segment):
    """``samples_per_segment`` points per segment at ``t = k/M``, k < M, stacked."""
    t = np.arange(samples_per_segment) / samples_per_segment
    return np.concatenate([seg(t) for seg in path.segments])


def refinement_phase(path, psi, samples_per_segment, eps=EPS_ORTH):
    """Discrete phase of the relative states of a finely sampled path."""
    if samples_per_segment < 3:
        raise ContractViolation("need at least 3 samples per segment")
    if not path.closed:
        raise ContractViolation("refinement needs a closed path")
    rel = relative_states(psi, sample_path(path, samples_per_segment))
    return bargmann_phase(rel, eps).phase
