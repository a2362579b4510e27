"""Coherence, entropy, correlation and entanglement diagnostics.

All logarithms are base 2 and ``0 log 0 = 0``. Two-qubit functions expect a
:class:`~remote_coherence.linalg.DensityMatrix` with layout ``(2, 2)``; the
measured party in discord is always register 0 (Alice).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    PAULIS,
    TOL,
    DensityMatrix,
    as_matrix,
    hermitian_eigenvalues,
    kron,
    partial_trace,
    partial_transpose,
)

# discord optimizer: coarse (theta, phi) grid, then local refinement rounds
GRID_THETA = 64
GRID_PHI = 128
REFINE_ROUNDS = 3
REFINE_SHRINK = 4


def _matrix(rho) -> np.ndarray:
    return rho.matrix if isinstance(rho, DensityMatrix) else as_matrix(rho)


def _require_two_qubit(rho: DensityMatrix) -> None:
    if not isinstance(rho, DensityMatrix) or rho.dims != (2, 2):
        dims = getattr(rho, "dims", None)
        raise ValueError(f"expected a two-qubit DensityMatrix with layout (2, 2), got {dims}")


def xlog2x(x):
    """Elementwise ``x log2 x`` with the limit value 0 at ``x <= 0``."""
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, x * np.log2(safe), 0.0)


def _entropy_from_spectrum(lam) -> float:
    return float(-np.sum(xlog2x(lam)))


def l1_coherence(rho) -> float:
    """Sum of absolute off-diagonal entries in the computational basis."""
    m = _matrix(rho)
    off = ~np.eye(m.shape[0], dtype=bool)
    return float(np.sum(np.abs(m[off])))


def von_neumann_entropy(rho) -> float:
    return _entropy_from_spectrum(hermitian_eigenvalues(_matrix(rho)))


def mutual_information(rho_ab: DensityMatrix) -> float:
    if rho_ab.n_registers != 2:
        raise ValueError(f"mutual information needs a bipartite layout, got {rho_ab.dims}")
    h_a = von_neumann_entropy(partial_trace(rho_ab, [0]))
    h_b = von_neumann_entropy(partial_trace(rho_ab, [1]))
    return h_a + h_b - von_neumann_entropy(rho_ab)


def _measurement_kets(theta, phi):
    """Kets ``|n>`` and ``|-n>`` for Bloch direction (theta, phi); leading axis is the batch."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    up = np.stack([c + 0j, np.exp(1j * phi) * s], axis=-1)
    down = np.stack([-np.exp(-1j * phi) * s, c + 0j], axis=-1)
    return up, down


def _conditional_entropy(t: np.ndarray, theta, phi) -> np.ndarray:
    """Average entropy of Bob's state after measuring Alice along (theta, phi).

    ``t`` is the two-qubit density matrix reshaped to ``(2, 2, 2, 2)``.
    """
    total = np.zeros(np.shape(theta))
    for ket in _measurement_kets(theta, phi):
        blocks = np.einsum("...a,abcd,...c->...bd", ket.conj(), t, ket)
        prob = np.real(np.trace(blocks, axis1=-2, axis2=-1))
        safe = np.where(prob > 1e-14, prob, 1.0)
        lam = np.linalg.eigvalsh(blocks / safe[..., None, None])
        h = -np.sum(xlog2x(lam), axis=-1)
        total += np.where(prob > 1e-14, prob * h, 0.0)
    return total


def _minimize_conditional_entropy(rho_ab: DensityMatrix) -> tuple[float, tuple[float, float]]:
    t = rho_ab.matrix.reshape(2, 2, 2, 2)
    # theta in [0, pi) suffices since n and -n define the same measurement
    d_theta = np.pi / GRID_THETA
    d_phi = 2 * np.pi / GRID_PHI
    th, ph = np.meshgrid(np.arange(GRID_THETA) * d_theta, np.arange(GRID_PHI) * d_phi, indexing="ij")
    values = _conditional_entropy(t, th, ph)
    idx = np.unravel_index(np.argmin(values), values.shape)
    best = float(values[idx])
    best_theta, best_phi = float(th[idx]), float(ph[idx])

    offsets = np.arange(-REFINE_SHRINK, REFINE_SHRINK + 1)
    for _ in range(REFINE_ROUNDS):
        d_theta /= REFINE_SHRINK
        d_phi /= REFINE_SHRINK
        th, ph = np.meshgrid(best_theta + offsets * d_theta, best_phi + offsets * d_phi, indexing="ij")
        values = _conditional_entropy(t, th, ph)
        idx = np.unravel_index(np.argmin(values), values.shape)
        if values[idx] < best:
            best = float(values[idx])
            best_theta, best_phi = float(th[idx]), float(ph[idx])

    # fold back into theta in [0, pi], phi in [0, 2 pi)
    if best_theta < 0:
        best_theta = -best_theta
        best_phi += np.pi
    if best_theta > np.pi:
        best_theta = 2 * np.pi - best_theta
        best_phi += np.pi
    return best, (best_theta, float(np.mod(best_phi, 2 * np.pi)))


def classical_correlation(rho_ab: DensityMatrix) -> tuple[float, tuple[float, float]]:
    """Maximal ``H(B) - H(B|{Pi_A})`` over rank-1 projective measurements on A.

    Returns the value and the Bloch angles ``(theta, phi)`` of the optimal
    measurement direction. The search is a deterministic grid followed by
    local refinement, so repeated calls give identical results.
    """
    _require_two_qubit(rho_ab)
    h_b = von_neumann_entropy(partial_trace(rho_ab, [1]))
    cond, basis = _minimize_conditional_entropy(rho_ab)
    return h_b - cond, basis


@dataclass(frozen=True)
class DiscordBreakdown:
    mutual_information: float
    classical_correlation: float
    discord: float
    optimizer_basis: tuple[float, float]


def discord_bruteforce(rho_ab: DensityMatrix) -> DiscordBreakdown:
    """Quantum discord ``D(B|A)`` by explicit optimization over measurements on A."""
    _require_two_qubit(rho_ab)
    mi = mutual_information(rho_ab)
    cc, basis = classical_correlation(rho_ab)
    return DiscordBreakdown(mi, cc, mi - cc, basis)


@dataclass(frozen=True)
class CorrelationVector:
    """Diagonal correlations ``c_i = Tr[(sigma_i x sigma_i) rho]``."""

    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        for v in (self.c1, self.c2, self.c3):
            if not -1 - TOL <= v <= 1 + TOL:
                raise ValueError(f"correlation component {v} outside [-1, 1]")

    @property
    def c(self) -> float:
        return max(abs(self.c1), abs(self.c2), abs(self.c3))

    def bell_weights(self) -> np.ndarray:
        """Four times the eigenvalues of the matching Bell-diagonal state."""
        c1, c2, c3 = self.c1, self.c2, self.c3
        return np.array([1 - c1 - c2 - c3, 1 - c1 + c2 + c3, 1 + c1 - c2 + c3, 1 + c1 + c2 - c3])

    def bell_diagonal_state(self) -> DensityMatrix:
        m = kron(PAULIS[0], PAULIS[0])
        for ci, s in zip((self.c1, self.c2, self.c3), PAULIS[1:]):
            m = m + ci * kron(s, s)
        return DensityMatrix(m / 4, (2, 2))


def correlation_vector(rho_ab: DensityMatrix) -> CorrelationVector:
    _require_two_qubit(rho_ab)
    m = rho_ab.matrix
    comps = [float(np.real(np.trace(kron(s, s) @ m))) for s in PAULIS[1:]]
    return CorrelationVector(*comps)


def discord_bell_diagonal(cv: CorrelationVector) -> float:
    """Closed-form discord of a state with maximally mixed marginals."""
    weights = cv.bell_weights()
    if np.any(weights < -TOL):
        raise ValueError(f"correlation vector {cv} does not describe a valid state")
    c = cv.c
    total = 0.25 * float(np.sum(xlog2x(weights)))
    classical = 0.5 * float(xlog2x(1 - c) + xlog2x(1 + c))
    return total - classical


def _k(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"control weight p must lie in [0, 1], got {p}")
    return float(np.sqrt(p * (1 - p)))


def discord_scenario_A(p: float) -> float:
    """Discord of the ``+``-conditioned shared state for two complete depolarizing channels.

    The state is Bell diagonal with ``c1 = c2 = c3 = -k/(2+k)``.
    """
    x = _k(p) / (2 + _k(p))
    mi = 0.25 * (3 * xlog2x(1 - x) + xlog2x(1 + 3 * x))
    return float(mi - 0.5 * (xlog2x(1 - x) + xlog2x(1 + x)))


def discord_scenario_B(p: float, gamma: float, delta: float) -> float:
    """Closed-form discord for the unitary + complete-depolarizing SWITCH.

    Two branches, split at ``delta = pi/4``; ``delta`` must lie in
    ``[0, pi/2]``. The normalization is ``1 + k(1 + cos gamma)``, the same
    quantity that normalizes the partial-transpose spectrum. This formula is
    kept as a claim under test: compare with :func:`discord_bruteforce` on
    the shared state (see ``protocols.scenario_B_discord_report``).
    """
    if not 0.0 <= delta <= np.pi / 2:
        raise ValueError(f"delta must lie in [0, pi/2], got {delta}")
    k = _k(p)
    cg = np.cos(gamma)
    s2 = np.sin(gamma / 2) ** 2
    norm = 1 + k * (1 + cg)
    branch = np.cos(delta) ** 2 if delta <= np.pi / 4 else np.sin(delta) ** 2
    a = 2 * k * branch * s2 / norm
    b = 2 * k * np.cos(2 * delta) * s2 / norm
    # each bracket term of the form w log2(w / norm) equals norm * xlog2x(w / norm)
    value = (
        xlog2x((1 + 2 * k) / norm)
        + xlog2x((1 + 2 * k * cg) / norm)
        - 2 * xlog2x(1 - a)
        - 2 * xlog2x(1 + a)
        + 2 * xlog2x(1 + b)
        + 2 * xlog2x(1 - b)
    )
    return float(value / 4)


def min_pt_eigenvalue(rho_ab: DensityMatrix) -> float:
    _require_two_qubit(rho_ab)
    return float(hermitian_eigenvalues(partial_transpose(rho_ab, 0))[0])


def is_ppt(rho_ab: DensityMatrix) -> bool:
    return min_pt_eigenvalue(rho_ab) >= -TOL


def negativity(rho_ab: DensityMatrix) -> float:
    """Sum of the magnitudes of the negative partial-transpose eigenvalues."""
    _require_two_qubit(rho_ab)
    lam = hermitian_eigenvalues(partial_transpose(rho_ab, 0))
    return float(-np.sum(lam[lam < 0]))


def pt_eigs_scenario_B(p: float, gamma: float) -> tuple[float, float]:
    """The two doubly degenerate partial-transpose eigenvalues for the unitary scenario."""
    k = _k(p)
    cg = np.cos(gamma)
    denom = 4 * (1 + k * (1 + cg))
    return float((1 + 2 * k) / denom), float((1 + 2 * k * cg) / denom)
