"""Simulation of the ancilla-assisted interference protocol.

Alice holds H1 and ancilla A1, Bob holds H2 and ancilla A2. The joint state
``|Psi>|Phi_a>`` is stored as a :class:`BipartiteState` with Alice's factor
H1 (x) A1 (index ``2*i + alpha``) and Bob's factor H2 (x) A2 (index
``2*j + beta``). Step ``j`` post-selects Alice's outcome
``|phi_j>|0> + e^{i f_j}|phi_{j+1}>|1>``; Bob scans a phase shift on A2,
applies a Hadamard, records the probability of reading 0, and takes the
fringe maximum as ``f_{j+1}``. After N steps ``f_{N+1}`` is the relative-state
geometric phase.
"""

from dataclasses import dataclass, field

import numpy as np

from .bargmann import StateSequence, wrap_phase
from .errors import ContractViolation, PostselectionImpossible, RelPhaseError, ZeroVisibility
from .state import BipartiteState, as_state_vector

MIN_PROBABILITY = 1e-14
MIN_VISIBILITY = 1e-9


def visibility_law(a):
    """Fringe visibility factor ``2 sqrt(a (1 - a))`` of a nonmaximal ancilla."""
    if not 0.0 <= a <= 1.0:
        raise ContractViolation(f"ancilla parameter must lie in [0, 1], got {a!r}")
    return 2.0 * np.sqrt(a * (1.0 - a))


def ancilla_state(a):
    """``sqrt(a)|00> + sqrt(1-a)|11>`` as a 2x2 coefficient matrix."""
    if not 0.0 <= a <= 1.0:
        raise ContractViolation(f"ancilla parameter must lie in [0, 1], got {a!r}")
    return np.diag([np.sqrt(a), np.sqrt(1.0 - a)]).astype(np.complex128)


def joint_state(psi, a=0.5):
    """``|Psi>|Phi_a>`` regrouped as Alice (H1, A1) versus Bob (H2, A2)."""
    xi = np.einsum("ij,ab->iajb", psi.matrix, ancilla_state(a))
    return BipartiteState.from_matrix(xi.reshape(2 * psi.d1, 2 * psi.d2))


def _normalized(v, name):
    v = as_state_vector(v, name=name)
    n = np.linalg.norm(v)
    if abs(n - 1.0) > 1e-10:
        raise ContractViolation(f"{name} must be normalised (norm {n!r})")
    return v


def alice_vector(phi_j, phi_next, f_j):
    v = np.stack([_normalized(phi_j, "phi_j"),
                  np.exp(1j * f_j) * _normalized(phi_next, "phi_next")], axis=1)
    return v.reshape(-1)


def alice_projector(phi_j, phi_next, f_j):
    """``(|phi_j>|0> + e^{if}|phi_next>|1>)(h.c.) / 2`` on H1 (x) A1.

    The ancilla kets are orthogonal, so for normalised ``phi`` the vector has
    squared norm 2 and the operator is an exact rank-1 projector.
    """
    v = alice_vector(phi_j, phi_next, f_j)
    return np.outer(v, v.conj()) / np.vdot(v, v).real


def postselect(state, projector, step=None):
    """Apply ``projector (x) 1`` to Alice's side; return (normalised state, probability)."""
    proj = np.asarray(projector, dtype=np.complex128)
    if proj.shape != (state.d1, state.d1):
        raise ContractViolation(f"projector shape {proj.shape} does not act on Alice's "
                                f"{state.d1}-dimensional factor")
    kept = proj @ state.matrix
    prob = float(np.vdot(kept, kept).real)
    if prob < MIN_PROBABILITY:
        raise PostselectionImpossible(
            f"post-selection succeeds with probability {prob:.3e}", probability=prob, step=step)
    return BipartiteState.from_matrix(kept / np.sqrt(prob)), prob


def bob_intensity(post, f, outcome=0):
    """Probability that Bob's ancilla reads ``outcome`` after phase shift ``f`` and a Hadamard."""
    x = post.matrix.reshape(post.d1, post.d2 // 2, 2)
    f = np.asarray(f, dtype=float)
    shift = np.exp(1j * f)[..., None, None]
    sign = 1.0 if outcome == 0 else -1.0
    amp = (x[..., 0] + sign * shift * x[..., 1]) / np.sqrt(2.0)
    out = np.sum(np.abs(amp) ** 2, axis=(-2, -1))
    return float(out) if out.ndim == 0 else out


def fringe_grid(points):
    return -np.pi + 2.0 * np.pi * np.arange(points) / points


@dataclass(frozen=True)
class FringeFit:
    offset: float
    amplitude: float
    f_max: float
    covariance: np.ndarray = field(repr=False, default=None)
    sigma_f: float = 0.0

    @property
    def visibility(self):
        return self.amplitude / self.offset if self.offset > 0 else 0.0


def fit_fringe(f, intensity, variance=None):
    """Least-squares fit of ``c0 + c1 cos(f - f_max)``; exact for noiseless data."""
    f = np.asarray(f, dtype=float)
    y = np.asarray(intensity, dtype=float)
    if f.size < 3:
        raise ContractViolation("a fringe fit needs at least 3 points")
    design = np.column_stack([np.ones_like(f), np.cos(f), np.sin(f)])
    w = np.ones_like(y) if variance is None else 1.0 / np.asarray(variance, dtype=float)
    normal = design.T @ (design * w[:, None])
    coef = np.linalg.solve(normal, design.T @ (w * y))
    c0, ca, cb = coef
    amp = float(np.hypot(ca, cb))
    cov = np.linalg.inv(normal) if variance is not None else None
    sigma_f = 0.0
    if cov is not None and amp > 0:
        grad = np.array([0.0, -cb, ca]) / amp ** 2  # d atan2(cb, ca)
        sigma_f = float(np.sqrt(grad @ cov @ grad))
    return FringeFit(float(c0), amp, wrap_phase(np.arctan2(cb, ca)), cov, sigma_f)


def find_fringe_max(post, fringe_points=16, shots=None, rng=None, step=None):
    """Locate Bob's fringe maximum; returns ``(fit, fringe)`` with rows ``(f, intensity)``.

    Without ``shots`` the exact intensities are fitted; otherwise each point is
    a binomial estimate from ``shots`` trials drawn from ``rng`` (a callable
    ``point_index -> Generator``) and the fit is weighted by the binomial
    variance.
    """
    fs = fringe_grid(fringe_points)
    exact = bob_intensity(post, fs)
    if shots is None:
        fit = fit_fringe(fs, exact)
        measured = exact
    else:
        counts = np.array([rng(k).binomial(shots, min(max(p, 0.0), 1.0))
                           for k, p in enumerate(exact)])
        measured = counts / shots
        floor = 0.5 / shots
        p = np.clip(measured, floor, 1.0 - floor)
        fit = fit_fringe(fs, measured, p * (1.0 - p) / shots)
    if not fit.visibility > MIN_VISIBILITY:
        raise ZeroVisibility(f"fringe visibility {fit.visibility:.3e} is too small to locate a "
                             "maximum", visibility=fit.visibility, step=step)
    return fit, np.column_stack([fs, measured])


@dataclass(frozen=True, eq=False)
class ProtocolConfig:
    psi: BipartiteState
    sequence: StateSequence
    ancilla_a: float = 0.5
    mode: str = "exact"
    shots: int = 100_000
    seed: int = None
    fringe_points: int = 16

    def __post_init__(self):
        seq = self.sequence if isinstance(self.sequence, StateSequence) \
            else StateSequence(self.sequence)
        if seq.dim != self.psi.d1:
            raise ContractViolation(f"sequence dimension {seq.dim} does not match d1={self.psi.d1}")
        object.__setattr__(self, "sequence", seq.normalized())
        if not 0.0 <= self.ancilla_a <= 1.0:
            raise ContractViolation(f"ancilla_a must lie in [0, 1], got {self.ancilla_a!r}")
        if self.mode not in ("exact", "sampled"):
            raise ContractViolation(f"mode must be 'exact' or 'sampled', got {self.mode!r}")
        if self.mode == "sampled":
            if self.seed is None:
                raise ContractViolation("sampled mode requires an explicit seed")
            if self.shots < 1:
                raise ContractViolation("shots must be >= 1")
        if self.fringe_points < 8:
            raise ContractViolation("fringe_points must be >= 8")


@dataclass(frozen=True, eq=False)
class StepRecord:
    j: int
    f_j: float
    f_next: float
    success_probability: float
    visibility: float
    fringe_amplitude: float
    sigma_f: float
    fringe: np.ndarray = field(repr=False)


@dataclass(frozen=True, eq=False)
class ProtocolRun:
    gamma: float
    steps: list
    sigma: float = 0.0

    def __iter__(self):
        return iter((self.gamma, self.steps))


def run_protocol(cfg):
    """Iterate the N post-selection/interference steps starting from ``f_1 = 0``."""
    vs = cfg.sequence.vectors
    n = len(vs)
    xi = joint_state(cfg.psi, cfg.ancilla_a)
    f = 0.0
    var = 0.0
    steps = []
    for j in range(1, n + 1):
        phi_j, phi_next = vs[j - 1], vs[j % n]
        try:
            post, prob = postselect(xi, alice_projector(phi_j, phi_next, f), step=j)
            if cfg.mode == "sampled":
                def rng(k, j=j):
                    return np.random.default_rng([cfg.seed, j, k])
                fit, fringe = find_fringe_max(post, cfg.fringe_points, cfg.shots, rng, step=j)
            else:
                fit, fringe = find_fringe_max(post, cfg.fringe_points, step=j)
        except RelPhaseError as exc:
            if getattr(exc, "step", None) is None:
                exc.step = j
            raise
        steps.append(StepRecord(j, f, fit.f_max, prob, fit.visibility,
                                fit.amplitude * prob, fit.sigma_f, fringe))
        var += fit.sigma_f ** 2
        f = fit.f_max
    return ProtocolRun(f, steps, float(np.sqrt(var)))
