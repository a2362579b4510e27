"""Kraus channels, the depolarizing family, and the quantum SWITCH.

Ordering convention for the SWITCH: with Kraus operators ``X_i`` for the
``first`` channel and ``Y_j`` for the ``second``, the SWITCH Kraus operators
on ``system (x) control`` are::

    W_ij = X_i Y_j (x) |0><0|  +  Y_j X_i (x) |1><1|

so when the control is ``|0>`` the *second* channel acts on the state first,
and when the control is ``|1>`` the *first* channel acts first. The control
register is always the last tensor factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .linalg import (
    I2,
    KET0,
    KET1,
    PAULIS,
    TOL,
    DensityMatrix,
    as_matrix,
    dagger,
    kron,
    partial_trace,
    projector,
)


class NullOutcomeError(RuntimeError):
    """Raised when the post-measurement state of a zero-probability outcome is requested."""


def _freeze(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=complex)
    m.setflags(write=False)
    return m


def completeness_residual(kraus_ops: Sequence[np.ndarray]) -> float:
    """Largest entry of ``|sum K^dagger K - I|``."""
    d_in = kraus_ops[0].shape[1]
    total = sum(dagger(k) @ k for k in kraus_ops)
    return float(np.max(np.abs(total - np.eye(d_in))))


@dataclass(frozen=True)
class KrausChannel:
    """A CPTP map given by its Kraus operators.

    Completeness ``sum K_i^dagger K_i = I`` is enforced at construction.
    """

    kraus_ops: tuple[np.ndarray, ...]
    label: str = ""
    noise_param: Optional[float] = None

    def __post_init__(self):
        ops = tuple(_freeze(as_matrix(k)) for k in self.kraus_ops)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.shape != shape for k in ops):
            raise ValueError("Kraus operators must share one shape")
        residual = completeness_residual(ops)
        if residual > TOL:
            raise ValueError(f"Kraus operators are not complete (residual {residual:.3e})")
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def dim(self) -> int:
        return self.kraus_ops[0].shape[1]

    def completeness_residual(self) -> float:
        return completeness_residual(self.kraus_ops)

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        return apply_channel(self, rho)


def identity_channel(dim: int = 2) -> KrausChannel:
    return KrausChannel((np.eye(dim, dtype=complex),), label="identity")


def unitary_channel(u, label: str = "unitary") -> KrausChannel:
    return KrausChannel((as_matrix(u),), label=label)


def complete_depolarizing() -> KrausChannel:
    """Qubit channel sending every state to ``I/2``; Kraus set ``{sigma_i / 2}``."""
    return KrausChannel(tuple(s / 2 for s in PAULIS), label="complete_depolarizing", noise_param=1.0)


def partial_depolarizing(q: float) -> KrausChannel:
    """Qubit channel ``rho -> (1 - q) rho + q I/2`` for ``0 <= q <= 1``."""
    q = float(q)
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"depolarizing strength q must lie in [0, 1], got {q}")
    ops = (np.sqrt(1 - 3 * q / 4) * I2,) + tuple(np.sqrt(q) / 2 * s for s in PAULIS[1:])
    return KrausChannel(ops, label=f"partial_depolarizing(q={q:g})", noise_param=q)


def unitary_u(gamma: float, delta: float) -> np.ndarray:
    """The rotation ``[[cos g/2, -sin g/2 e^{-i d}], [sin g/2 e^{i d}, cos g/2]]``."""
    c, s = np.cos(gamma / 2), np.sin(gamma / 2)
    return np.array(
        [[c, -s * np.exp(-1j * delta)], [s * np.exp(1j * delta), c]],
        dtype=complex,
    )


def state_unitary(alpha: complex, beta: complex) -> np.ndarray:
    """Unitary with ``U|0> = alpha|0> + beta|1>`` and ``U|1> = -beta*|0> + alpha*|1>``."""
    norm = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm - 1) > TOL:
        raise ValueError(f"|alpha|^2 + |beta|^2 must be 1, got {norm:.12g}")
    return np.array([[alpha, -np.conj(beta)], [beta, np.conj(alpha)]], dtype=complex)


def apply_channel(ch: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    m = rho.matrix
    if m.shape[0] != ch.dim:
        raise ValueError(f"channel acts on dimension {ch.dim}, state has dimension {m.shape[0]}")
    out = sum(k @ m @ dagger(k) for k in ch.kraus_ops)
    dims = rho.dims if ch.kraus_ops[0].shape[0] == ch.dim else None
    return DensityMatrix(out, dims)


def compose(outer: KrausChannel, inner: KrausChannel) -> KrausChannel:
    """Sequential channel ``outer o inner`` (``inner`` acts first)."""
    if outer.dim != inner.kraus_ops[0].shape[0]:
        raise ValueError("channel dimensions do not chain")
    ops = tuple(a @ b for a in outer.kraus_ops for b in inner.kraus_ops)
    return KrausChannel(ops, label=f"{outer.label} o {inner.label}")


@dataclass(frozen=True)
class ControlSpec:
    """Pure control qubit ``sqrt(p)|0> + sqrt(1-p)|1>``."""

    p: float

    def __post_init__(self):
        p = float(self.p)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"control weight p must lie in [0, 1], got {p}")
        object.__setattr__(self, "p", p)

    @property
    def k(self) -> float:
        """Control coherence amplitude ``sqrt(p(1-p))``, always in ``[0, 1/2]``."""
        return float(np.sqrt(self.p * (1 - self.p)))

    @property
    def ket(self) -> np.ndarray:
        return np.array([np.sqrt(self.p), np.sqrt(1 - self.p)], dtype=complex)

    def state(self) -> DensityMatrix:
        return DensityMatrix(projector(self.ket))


@dataclass(frozen=True)
class SwitchChannel:
    """Quantum SWITCH of two channels with a pure control qubit.

    ``kraus_ops`` holds the ``W_ij`` on ``system (x) control`` (see module
    docstring for the order convention).
    """

    first: KrausChannel
    second: KrausChannel
    control: ControlSpec
    kraus_ops: tuple[np.ndarray, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if self.first.dim != self.second.dim or any(
            k.shape != (self.first.dim, self.first.dim)
            for k in self.first.kraus_ops + self.second.kraus_ops
        ):
            raise ValueError("SWITCH requires two channels on the same square dimension")
        p0, p1 = projector(KET0), projector(KET1)
        ops = tuple(
            _freeze(kron(x @ y, p0) + kron(y @ x, p1))
            for x in self.first.kraus_ops
            for y in self.second.kraus_ops
        )
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def dim(self) -> int:
        return self.first.dim

    def completeness_residual(self) -> float:
        return completeness_residual(self.kraus_ops)

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        """Act on ``rho (x) rho_c``; returns a state with the control appended."""
        if rho.dim != self.dim:
            raise ValueError(f"SWITCH acts on dimension {self.dim}, state has dimension {rho.dim}")
        joint = kron(rho.matrix, self.control.state().matrix)
        out = sum(w @ joint @ dagger(w) for w in self.kraus_ops)
        return DensityMatrix(out, rho.dims + (2,))


def switch_channel(first: KrausChannel, second: KrausChannel, control: ControlSpec) -> SwitchChannel:
    return SwitchChannel(first, second, control)


def apply_switch_to_second_qubit(rho12: DensityMatrix, sw: SwitchChannel) -> DensityMatrix:
    """Send Bob's half of a two-qubit state through the SWITCH.

    Returns the joint state on ``(Alice, Bob, control)``.
    """
    if rho12.dims != (2, 2):
        raise ValueError(f"expected a two-qubit state with layout (2, 2), got {rho12.dims}")
    joint = kron(rho12.matrix, sw.control.state().matrix)
    out = np.zeros_like(joint)
    for w in sw.kraus_ops:
        lifted = kron(I2, w)
        out += lifted @ joint @ dagger(lifted)
    return DensityMatrix(out, (2, 2, 2))


class MeasurementResult:
    """One outcome of a projective measurement.

    ``post_state`` is the normalized state of the remaining registers; it
    raises :class:`NullOutcomeError` when the outcome has probability zero.
    """

    NULL_THRESHOLD = 1e-12

    def __init__(self, probability: float, post_state: Optional[DensityMatrix], outcome_label: str):
        self.probability = probability
        self._post_state = post_state
        self.outcome_label = outcome_label

    @property
    def is_null(self) -> bool:
        return self._post_state is None

    @property
    def post_state(self) -> DensityMatrix:
        if self._post_state is None:
            raise NullOutcomeError(f"outcome {self.outcome_label!r} has zero probability")
        return self._post_state

    def __repr__(self):
        return f"MeasurementResult({self.outcome_label!r}, p={self.probability:.6g})"


def _check_basis(basis: Sequence, d: int) -> list[np.ndarray]:
    vecs = [np.asarray(v, dtype=complex).reshape(-1) for v in basis]
    if len(vecs) != d or any(v.shape != (d,) for v in vecs):
        raise ValueError(f"basis must contain {d} vectors of length {d}")
    gram = np.array([[np.vdot(a, b) for b in vecs] for a in vecs])
    if np.max(np.abs(gram - np.eye(d))) > TOL:
        raise ValueError("measurement basis is not orthonormal")
    return vecs


def measure_register(
    rho: DensityMatrix,
    register: int,
    basis: Sequence,
    labels: Sequence[str] | None = None,
) -> list[MeasurementResult]:
    """Projectively measure one register and discard it.

    Each result carries the outcome probability and the normalized state of
    the other registers (in their original order).
    """
    dims = rho.dims
    if not 0 <= register < len(dims):
        raise IndexError(f"register {register} out of range for layout {dims}")
    if len(dims) < 2:
        raise ValueError("cannot measure away the only register")
    vecs = _check_basis(basis, dims[register])
    if labels is None:
        labels = [str(i) for i in range(len(vecs))]
    rest = tuple(d for i, d in enumerate(dims) if i != register)
    d_rest = int(np.prod(rest))

    n = len(dims)
    t = rho.matrix.reshape(dims + dims)
    # bring the measured register to the front on both row and column sides
    order = [register] + [i for i in range(n) if i != register]
    t = t.transpose(order + [n + i for i in order]).reshape(dims[register], d_rest, dims[register], d_rest)

    results = []
    for v, label in zip(vecs, labels):
        block = np.einsum("a,axby,b->xy", v.conj(), t, v)
        prob = float(np.real(np.trace(block)))
        if prob < MeasurementResult.NULL_THRESHOLD:
            results.append(MeasurementResult(0.0, None, label))
        else:
            results.append(MeasurementResult(prob, DensityMatrix(block / prob, rest), label))
    return results


def sequential_on_second_qubit(rho12: DensityMatrix, *channels: KrausChannel) -> DensityMatrix:
    """Apply channels to Bob's qubit one after another, in the given order."""
    m = rho12.matrix
    for ch in channels:
        m = sum(kron(I2, k) @ m @ dagger(kron(I2, k)) for k in ch.kraus_ops)
    return DensityMatrix(m, rho12.dims)


def reduce_to(rho: DensityMatrix, keep) -> DensityMatrix:
    return partial_trace(rho, keep)
