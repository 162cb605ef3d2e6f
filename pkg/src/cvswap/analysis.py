"""Network entanglement formulas and their independent numerical oracles.

The closed forms describe N users who each share a two-mode squeezed vacuum
of variance mu whose travelling arm crossed a thermal-loss channel
(transmissivity eta, noise omega) before the relay. Every formula here has a
matrix-side twin computed directly from the output covariance matrix via
Williamson spectra — the two roads are kept separate on purpose and the
tests drive them against each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import (
    GaussianState,
    apply_symplectic,
    log_negativity,
    partial_transpose,
    reduce as reduce_state,
    rotation,
    symplectic_eigenvalues,
)
from .relay import bell_detect, build_relay, cluster_closed_form, homodyne_condition
from .sources import TwoModeNormalForm, thermal_loss_on_a, tmsv

__all__ = [
    "NetworkPoint",
    "e2_formula",
    "pairwise_logneg_formula",
    "gle_formula",
    "block_logneg_formula",
    "full_house_logneg",
    "network_cluster_cm",
    "pairwise_logneg_numeric",
    "pairwise_logneg_numeric_raw",
    "gle_numeric",
    "block_logneg_numeric",
    "swap_logneg_two",
    "tmsv_swap_bound",
]


@dataclass(frozen=True)
class NetworkPoint:
    """One (mu, eta, omega, N) configuration of the symmetric network."""

    mu: float
    eta: float
    omega: float
    n_users: int

    def __post_init__(self):
        if self.mu < 1.0:
            raise ValueError("mu must be >= 1")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError("eta must be in (0, 1]")
        if self.omega < 1.0:
            raise ValueError("omega must be >= 1")
        if self.n_users < 2:
            raise ValueError("n_users must be >= 2")

    @property
    def alpha(self) -> float:
        """alpha = eta (mu^2 - 1) / (eta + (1 - eta) mu omega), recomputed."""
        return self.eta * (self.mu**2 - 1.0) / (self.eta + (1.0 - self.eta) * self.mu * self.omega)

    def normal_form(self) -> TwoModeNormalForm:
        return thermal_loss_on_a(tmsv(self.mu), self.eta, self.omega)


def _clamp(value: float, clamped: bool) -> float:
    return max(0.0, value) if clamped else value


def e2_formula(pt: NetworkPoint, clamped: bool = True) -> float:
    """Two-user swapped log-negativity ln[(eta mu + (1-eta) omega) / (eta + (1-eta) mu omega)]."""
    num = pt.eta * pt.mu + (1.0 - pt.eta) * pt.omega
    den = pt.eta + (1.0 - pt.eta) * pt.mu * pt.omega
    return _clamp(float(np.log(num / den)), clamped)


def pairwise_logneg_formula(pt: NetworkPoint, clamped: bool = True) -> float:
    """Entanglement between any two users: E2 - ln(1 + alpha (N-2)/N) / 2."""
    N = pt.n_users
    raw = e2_formula(pt, clamped=False) - 0.5 * np.log(1.0 + pt.alpha * (N - 2) / N)
    return _clamp(float(raw), clamped)


def gle_formula(pt: NetworkPoint, clamped: bool = True) -> float:
    """Localizable entanglement when the other N-2 users homodyne optimally.

    Algebraically identical to E2 - ln(1 + (N-2)/(N/alpha + 2)) / 2 but
    written so that alpha = 0 is regular (the correction vanishes there).
    """
    N = pt.n_users
    a = pt.alpha
    raw = e2_formula(pt, clamped=False) - 0.5 * np.log(1.0 + a * (N - 2) / (N + 2.0 * a))
    return _clamp(float(raw), clamped)


def block_logneg_formula(pt: NetworkPoint, n_prime: int, clamped: bool = True) -> float:
    """Entanglement between two disjoint groups of n_prime users each."""
    N = pt.n_users
    if 2 * n_prime > N:
        raise ValueError("2 * n_prime must not exceed n_users")
    if n_prime < 1:
        raise ValueError("n_prime must be >= 1")
    raw = e2_formula(pt, clamped=False) - 0.5 * np.log(1.0 + pt.alpha * (N - 2 * n_prime) / N)
    return _clamp(float(raw), clamped)


def full_house_logneg(pt: NetworkPoint, clamped: bool = True) -> float:
    """Block entanglement of the even split N' = N/2 — exactly E2."""
    if pt.n_users % 2:
        raise ValueError("full-house splitting needs an even number of users")
    return block_logneg_formula(pt, pt.n_users // 2, clamped=clamped)


# --- numerical oracles ---------------------------------------------------


def network_cluster_cm(pt: NetworkPoint, pipeline: bool = False) -> np.ndarray:
    """Output covariance of the N kept modes.

    By default assembles the closed form; with ``pipeline=True`` runs the
    full tensor/relay/conditioning machinery instead (slower, used to
    cross-check the closed form).
    """
    nf = pt.normal_form()
    if pipeline:
        copies = [nf.state() for _ in range(pt.n_users)]
        out, _ = bell_detect(copies, build_relay(pt.n_users))
        return out.cov
    return cluster_closed_form(nf.x, nf.y, nf.z, pt.n_users).assemble()


def pairwise_logneg_numeric(cluster_cov: np.ndarray, i: int = 0, j: int = 1) -> float:
    """Log-negativity of the (i, j) pair reduced out of the cluster."""
    state = GaussianState(cluster_cov, check=False)
    pair = reduce_state(state, [i, j])
    return log_negativity(pair, [0])


def pairwise_logneg_numeric_raw(cluster_cov: np.ndarray, i: int = 0, j: int = 1) -> float:
    """Unclamped -ln(nu_min) of the partially transposed (i, j) pair.

    Negative values mean the pair is separable with that much margin; this is
    the matrix-side twin of the unclamped formulas.
    """
    state = GaussianState(cluster_cov, check=False)
    pair = reduce_state(state, [i, j])
    nus = symplectic_eigenvalues(partial_transpose(pair.cov, [0]))
    return float(-np.log(nus[0]))


def block_logneg_numeric(cluster_cov: np.ndarray, group_a, group_b) -> float:
    """Log-negativity across two disjoint groups of cluster modes."""
    group_a = [int(m) for m in group_a]
    group_b = [int(m) for m in group_b]
    if set(group_a) & set(group_b):
        raise ValueError("groups must be disjoint")
    state = GaussianState(cluster_cov, check=False)
    sub = reduce_state(state, group_a + group_b)
    return log_negativity(sub, range(len(group_a)))


def block_logneg_numeric_raw(cluster_cov: np.ndarray, group_a, group_b) -> float:
    """Unclamped -ln(nu_min) across two disjoint groups of cluster modes."""
    group_a = [int(m) for m in group_a]
    group_b = [int(m) for m in group_b]
    state = GaussianState(cluster_cov, check=False)
    sub = reduce_state(state, group_a + group_b)
    nus = symplectic_eigenvalues(partial_transpose(sub.cov, range(len(group_a))))
    return float(-np.log(nus[0]))


def _measure_rotated_x(state: GaussianState, mode: int, theta: float) -> GaussianState:
    """Homodyne mode ``mode`` along the quadrature rotated by theta."""
    S = np.eye(2 * state.n_modes)
    S[2 * mode : 2 * mode + 2, 2 * mode : 2 * mode + 2] = rotation(theta)
    rotated = apply_symplectic(state, S)
    return homodyne_condition(rotated, mode, "X", 0.0)


def gle_numeric(
    cluster_cov: np.ndarray,
    i: int = 0,
    j: int = 1,
    coarse: int = 64,
    tol: float = 1e-8,
    max_passes: int = 40,
) -> float:
    """Localizable entanglement by optimized homodynes on the other modes.

    Every mode except (i, j) is measured along an adjustable quadrature
    angle. The ascent starts from the best common angle on a ``coarse``
    grid, then optimizes one angle at a time (grid scan plus golden-section
    refinement) until a full pass improves the pair log-negativity by less
    than ``tol``.
    """
    state = GaussianState(cluster_cov, check=False)
    n = state.n_modes
    others = [m for m in range(n) if m not in (i, j)]
    if not others:
        return log_negativity(reduce_state(state, [i, j]), [0])

    def condition_all(thetas, skip=None):
        """Measure every assisting mode except ``skip``; conditioning is
        order-independent, so this fixes the context for one coordinate."""
        out = state
        current = list(range(n))
        for k in sorted(range(len(others)), key=lambda m: -others[m]):
            if k == skip:
                continue
            mode = others[k]
            out = _measure_rotated_x(out, current.index(mode), thetas[k])
            current.remove(mode)
        return out, current

    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    # Coordinate moves cannot leave a configuration whose whole single-angle
    # neighborhood is separable (the clamped value is identically zero there),
    # so seed the ascent with the best common angle instead of a fixed corner.
    seed_grid = np.linspace(0.0, np.pi, coarse, endpoint=False)
    seed_vals = [
        log_negativity(condition_all(np.full(len(others), g))[0], [0])
        for g in seed_grid
    ]
    thetas = np.full(len(others), seed_grid[int(np.argmax(seed_vals))])
    best = float(np.max(seed_vals))
    for _ in range(max_passes):
        improved = best
        for k in range(len(others)):
            prep, current = condition_all(thetas, skip=k)
            pos = current.index(others[k])

            def f(theta):
                return log_negativity(_measure_rotated_x(prep, pos, theta), [0])

            grid = np.linspace(0.0, np.pi, coarse, endpoint=False)
            vals = [f(g) for g in grid]
            kbest = int(np.argmax(vals))
            a = grid[kbest] - np.pi / coarse
            b = grid[kbest] + np.pi / coarse
            c = b - invphi * (b - a)
            d = a + invphi * (b - a)
            fc, fd = f(c), f(d)
            while abs(b - a) > 1e-10:
                if fc > fd:
                    b, d, fd = d, c, fc
                    c = b - invphi * (b - a)
                    fc = f(c)
                else:
                    a, c, fc = c, d, fd
                    d = a + invphi * (b - a)
                    fd = f(d)
            theta_k = c if fc > fd else d
            val = max(fc, fd)
            if val > best:
                best = val
                thetas[k] = theta_k
        if best - improved < tol:
            break
    return float(best)


def swap_logneg_two(x: float, y: float, z: float, clamped: bool = True) -> float:
    """Two-user swapped output entanglement -ln(y - z^2 / x) for one copy pair."""
    arg = y - z * z / x
    if arg <= 0:
        raise ValueError("invalid normal form: conditional variance not positive")
    return _clamp(float(-np.log(arg)), clamped)


def tmsv_swap_bound(e_in: float) -> float:
    """Swapped output entanglement of a pure two-mode squeezed vacuum, ln cosh(E_in).

    A TMSV of variance mu has E_in = ln(mu + sqrt(mu^2 - 1)) and swapped
    output ln mu, hence E_out = ln cosh(E_in). This is the symmetric (d = 0)
    frontier against which sampled states are compared.
    """
    return float(np.log(np.cosh(e_in)))
