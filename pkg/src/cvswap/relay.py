"""The N-port Bell-detection relay and Gaussian homodyne conditioning.

The relay interferes the N travelling modes through a fixed cascade of
beam splitters with transmissivities T_k = 1 - 1/k (k = 2..N), which is
equivalent to one orthogonal N x N matrix acting identically on the X and P
quadrature vectors. Port 1 is homodyned in P, ports 2..N in X; broadcasting
the outcomes lets each user cancel the conditional displacement locally, so
the state left on the kept modes is a covariance-only object.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gaussian import (
    GaussianState,
    apply_symplectic,
    reduce as reduce_state,
    tensor,
)

__all__ = [
    "RelayPlan",
    "ClusterBlocks",
    "build_relay",
    "relay_orthogonal",
    "relay_from_cascade",
    "embed_orthogonal",
    "homodyne_condition",
    "bell_detect",
    "displacement_correction",
    "cluster_closed_form",
    "sum_p_variance",
    "diff_x_variance",
]


def relay_orthogonal(n_users: int) -> np.ndarray:
    """Mode-mixing matrix of the relay, written row by row.

    Row 1 is the uniform vector (1/sqrt(N), ..., 1/sqrt(N)); row k for
    k = 2..N is sqrt(1 - 1/k) * (e_k - (k-1)^{-1} sum_{i<k} e_i).
    """
    if n_users < 2:
        raise ValueError("the relay needs at least two users")
    N = n_users
    U = np.zeros((N, N))
    U[0, :] = 1.0 / np.sqrt(N)
    for k in range(2, N + 1):
        row = np.zeros(N)
        row[k - 1] = 1.0
        row[: k - 1] = -1.0 / (k - 1)
        U[k - 1, :] = np.sqrt(1.0 - 1.0 / k) * row
    return U


def relay_from_cascade(n_users: int) -> np.ndarray:
    """Same matrix built the way the hardware does it: a beam-splitter chain.

    Each two-port splitter with transmissivity T acts on (bus, port k) as
    [[sqrt(T), sqrt(1-T)], [-sqrt(1-T), sqrt(T)]]; the bus accumulates the
    uniform combination while the reflected outputs realize rows 2..N.
    """
    if n_users < 2:
        raise ValueError("the relay needs at least two users")
    N = n_users
    U = np.eye(N)
    for k in range(2, N + 1):
        T = 1.0 - 1.0 / k
        t, r = np.sqrt(T), np.sqrt(1.0 - T)
        bs = np.eye(N)
        bs[0, 0] = t
        bs[0, k - 1] = r
        bs[k - 1, 0] = -r
        bs[k - 1, k - 1] = t
        U = bs @ U
    # the cascade leaves the uniform row on the bus (slot 1) and row k on slot k
    return U


@dataclass(frozen=True)
class RelayPlan:
    """Orthogonal mixing matrix plus the list of homodynes to perform.

    ``measurements`` is an ordered list of (port index, quadrature) pairs with
    ports numbered from 0; the relay measures P on port 0 and X on the rest.
    """

    n_users: int
    ortho: np.ndarray
    measurements: tuple = field(default=None)

    def __post_init__(self):
        U = np.asarray(self.ortho, dtype=float)
        if np.max(np.abs(U @ U.T - np.eye(self.n_users))) > 1e-12:
            raise ValueError("relay matrix is not orthogonal")
        if self.measurements is None:
            meas = ((0, "P"),) + tuple((k, "X") for k in range(1, self.n_users))
            object.__setattr__(self, "measurements", meas)


def build_relay(n_users: int) -> RelayPlan:
    return RelayPlan(n_users=n_users, ortho=relay_orthogonal(n_users))


def embed_orthogonal(U: np.ndarray, modes, n_modes_total: int) -> np.ndarray:
    """Promote an orthogonal mode-mixer to a symplectic on the full register.

    ``U`` acts identically on the X and the P quadratures of the listed modes
    (orthogonal x identity-per-mode is symplectic); all other modes are left
    alone.
    """
    U = np.asarray(U, dtype=float)
    modes = [int(m) for m in modes]
    if U.shape != (len(modes), len(modes)):
        raise ValueError("matrix size does not match the mode list")
    S = np.eye(2 * n_modes_total)
    for i, mi in enumerate(modes):
        S[2 * mi, 2 * mi] = S[2 * mi + 1, 2 * mi + 1] = 0.0
        for j, mj in enumerate(modes):
            S[2 * mi, 2 * mj] = U[i, j]
            S[2 * mi + 1, 2 * mj + 1] = U[i, j]
    return S


def homodyne_condition(
    state: GaussianState, mode: int, quadrature: str, outcome: float = 0.0
) -> GaussianState:
    """Condition on a quadrature measurement of one mode and drop that mode.

    With Pi the rank-1 projector on the measured direction pi inside the
    measured mode's 2x2 block, the kept block transforms as

        cov -> V_B - C (Pi V_A Pi)^+ C^T
        mean -> mean_B + C (Pi V_A Pi)^+ (outcome * pi - Pi mean_A)

    The pseudo-inverse uses a 1e-12 singular-value cutoff. The conditional
    covariance does not depend on the outcome.
    """
    if state.n_modes < 2:
        raise ValueError("conditioning needs at least two modes")
    if not 0 <= mode < state.n_modes:
        raise IndexError(f"mode index {mode} out of range")
    if quadrature not in ("X", "P"):
        raise ValueError("quadrature must be 'X' or 'P'")
    q = 2 * mode + (0 if quadrature == "X" else 1)

    var = state.cov[q, q]
    if var < 1e-12:
        raise ValueError("measured quadrature variance is numerically degenerate")

    keep = [m for m in range(state.n_modes) if m != mode]
    kidx = np.concatenate([[2 * m, 2 * m + 1] for m in keep]).astype(int)
    aidx = np.array([2 * mode, 2 * mode + 1])

    VA = state.cov[np.ix_(aidx, aidx)]
    C = state.cov[np.ix_(kidx, aidx)]
    pi = np.zeros(2)
    pi[q - 2 * mode] = 1.0
    Pi = np.outer(pi, pi)
    core = np.linalg.pinv(Pi @ VA @ Pi, rcond=1e-12)

    cov = state.cov[np.ix_(kidx, kidx)] - C @ core @ C.T
    mean_a = state.mean[aidx]
    mean = state.mean[kidx] + C @ core @ (outcome * pi - Pi @ mean_a)
    return GaussianState(cov, mean)


def bell_detect(copies, plan: RelayPlan, outcomes=None, rng=None):
    """Run the multipartite Bell detection on N two-mode copies.

    Each copy is a state on modes (A, B) with A the mode sent to the relay.
    The copies are tensored as (A1, B1, ..., AN, BN), the relay matrix is
    applied to the A modes, and the planned homodynes are conditioned in
    order. ``outcomes`` may be a length-N vector, ``"sample"`` (draw each
    readout from its exact Gaussian marginal using ``rng``), or None for all
    zeros.

    Returns ``(state, gamma)``: the conditional N-mode state on (B1..BN) with
    its conditional mean, and the outcome vector that was used.
    """
    copies = list(copies)
    N = plan.n_users
    if len(copies) != N:
        raise ValueError("number of copies does not match the relay plan")
    for c in copies:
        if c.n_modes != 2:
            raise ValueError("each copy must have exactly two modes (A, B)")

    state = copies[0]
    for c in copies[1:]:
        state = tensor(state, c)
    a_modes = [2 * k for k in range(N)]

    S = embed_orthogonal(plan.ortho, a_modes, 2 * N)
    state = apply_symplectic(state, S)

    sample = isinstance(outcomes, str) and outcomes == "sample"
    if sample:
        if rng is None:
            raise ValueError("sampling outcomes requires an rng")
        gamma = np.empty(N)
    elif outcomes is None:
        gamma = np.zeros(N)
    else:
        gamma = np.asarray(outcomes, dtype=float).reshape(-1)
        if gamma.shape[0] != N:
            raise ValueError("outcome vector has wrong length")

    # measured ports live on the A slots; track current positions as modes drop
    position = {m: m for m in range(2 * N)}
    for i, (port, quad) in enumerate(plan.measurements):
        mode_now = position[a_modes[port]]
        if sample:
            q = 2 * mode_now + (0 if quad == "X" else 1)
            gamma[i] = rng.normal(state.mean[q], np.sqrt(state.cov[q, q]))
        state = homodyne_condition(state, mode_now, quad, gamma[i])
        removed = a_modes[port]
        for m in position:
            if position[m] > position[removed]:
                position[m] -= 1
        del position[removed]

    return state, gamma


def displacement_correction(state: GaussianState) -> GaussianState:
    """The users' local displacements: zero the conditional mean, keep the cov."""
    return GaussianState(state.cov, np.zeros(2 * state.n_modes), check=False)


@dataclass(frozen=True)
class ClusterBlocks:
    """The (V', C') block pair of the closed-form output state."""

    n_users: int
    v_prime: np.ndarray
    c_prime: np.ndarray

    def assemble(self) -> np.ndarray:
        """Full 2N x 2N covariance: V' on the diagonal, C' everywhere else."""
        N = self.n_users
        cov = np.kron(np.eye(N), self.v_prime) + np.kron(
            np.ones((N, N)) - np.eye(N), self.c_prime
        )
        return cov


def cluster_closed_form(x: float, y: float, z: float, n_users: int) -> ClusterBlocks:
    """Closed-form conditional covariance of the N kept modes.

    For identical copies in the (x, y, z) normal form the output has
    V' = diag(y - (N-1) z^2 / (N x), y - z^2 / (N x)) on the diagonal and
    C' = (z^2 / (N x)) * diag(1, -1) between any two modes.
    """
    if n_users < 2:
        raise ValueError("n_users must be >= 2")
    if x <= 0:
        raise ValueError("x must be positive")
    N = n_users
    w = z * z / (N * x)
    v_prime = np.diag([y - (N - 1) * w, y - w])
    c_prime = np.diag([w, -w])
    return ClusterBlocks(n_users=N, v_prime=v_prime, c_prime=c_prime)


def sum_p_variance(cov: np.ndarray) -> float:
    """Var of the total momentum sum_k P_k of an N-mode covariance matrix."""
    n = cov.shape[0] // 2
    u = np.zeros(2 * n)
    u[1::2] = 1.0
    return float(u @ cov @ u)


def diff_x_variance(cov: np.ndarray, i: int, j: int) -> float:
    """Var of the relative position X_i - X_j."""
    n = cov.shape[0] // 2
    u = np.zeros(2 * n)
    u[2 * i] = 1.0
    u[2 * j] = -1.0
    return float(u @ cov @ u)
