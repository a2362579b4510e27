"""Small dense complex linear algebra for qubit registers.

Matrices are plain ``numpy`` complex arrays. Multi-register states carry an
ordered tuple of subsystem dimensions; the leftmost register is the most
significant tensor factor, so a basis ket ``|a b c>`` has ``a`` drawn from
``dims[0]``. Throughout the package the register order is
Alice (0), Bob (1), control (2).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

TOL = 1e-10

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, SIGMA_X, SIGMA_Y, SIGMA_Z)

for _m in PAULIS:
    _m.setflags(write=False)

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
KET_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)


class NotHermitianError(ValueError):
    """Raised when a matrix that must be Hermitian is not."""

    def __init__(self, max_asymmetry: float):
        self.max_asymmetry = max_asymmetry
        super().__init__(f"matrix is not Hermitian: max |M - M^dagger| = {max_asymmetry:.3e}")


class InvalidStateError(ValueError):
    """Raised when a matrix violates a density-matrix invariant."""


def as_matrix(a) -> np.ndarray:
    """Coerce to a finite 2-D complex array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains NaN or Inf entries")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def kron(a, b) -> np.ndarray:
    """Kronecker product with block structure ``a[i, j] * b``."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(mats: Iterable) -> np.ndarray:
    return reduce(kron, mats)


def projector(ket) -> np.ndarray:
    v = np.asarray(ket, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def max_asymmetry(h: np.ndarray) -> float:
    return float(np.max(np.abs(h - dagger(h)))) if h.size else 0.0


def hermitian_eigenvalues(h, tol: float = TOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix in ascending order.

    Raises
    ------
    NotHermitianError
        If any entry of ``h - h^dagger`` exceeds ``tol`` in magnitude.
    """
    m = as_matrix(h)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    asym = max_asymmetry(m)
    if asym > tol:
        raise NotHermitianError(asym)
    # symmetrize so LAPACK sees an exactly Hermitian input
    return np.linalg.eigvalsh(0.5 * (m + dagger(m)))


@dataclass(frozen=True)
class DensityMatrix:
    """A validated density matrix together with its register layout.

    ``dims`` lists the subsystem dimensions, most significant first. The
    matrix is stored read-only; construction checks Hermiticity, unit trace
    and positivity to within ``TOL``.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __init__(self, matrix, dims: Sequence[int] | None = None, *, tol: float = TOL):
        m = as_matrix(matrix).copy()
        n = m.shape[0]
        if m.shape != (n, n):
            raise InvalidStateError(f"density matrix must be square, got {m.shape}")
        if dims is None:
            dims = (n,)
        dims = tuple(int(d) for d in dims)
        if any(d < 2 for d in dims):
            raise InvalidStateError(f"register dimensions must be >= 2, got {dims}")
        if int(np.prod(dims)) != n:
            raise InvalidStateError(f"layout {dims} does not match matrix dimension {n}")
        asym = max_asymmetry(m)
        if asym > tol:
            raise NotHermitianError(asym)
        tr = np.trace(m)
        if abs(tr - 1) > tol:
            raise InvalidStateError(f"trace is {tr:.12g}, expected 1")
        lam_min = np.linalg.eigvalsh(0.5 * (m + dagger(m)))[0]
        if lam_min < -tol:
            raise InvalidStateError(f"matrix is not positive semidefinite (min eigenvalue {lam_min:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_ket(cls, ket, dims: Sequence[int] | None = None) -> "DensityMatrix":
        v = np.asarray(ket, dtype=complex).reshape(-1)
        return cls(projector(v / np.linalg.norm(v)), dims)

    @classmethod
    def product(cls, *states: "DensityMatrix") -> "DensityMatrix":
        return cls(kron_all(s.matrix for s in states), sum((s.dims for s in states), ()))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_registers(self) -> int:
        return len(self.dims)

    def eigenvalues(self) -> np.ndarray:
        return hermitian_eigenvalues(self.matrix)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def _check_registers(dims: tuple[int, ...], idx: Iterable[int]) -> list[int]:
    out = sorted(set(int(i) for i in idx))
    for i in out:
        if not 0 <= i < len(dims):
            raise IndexError(f"register index {i} out of range for layout {dims}")
    return out


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the registers in ``keep`` (original order preserved)."""
    keep = _check_registers(rho.dims, keep)
    if not keep:
        raise ValueError("keep must name at least one register")
    dims = rho.dims
    n = len(dims)
    t = rho.matrix.reshape(dims + dims)
    # einsum labels: row index i_r, column index j_r; traced registers share a label
    row = [chr(ord("a") + r) for r in range(n)]
    col = [chr(ord("a") + n + r) if r in keep else row[r] for r in range(n)]
    out = [row[r] for r in keep] + [col[r] for r in keep]
    reduced = np.einsum("".join(row) + "".join(col) + "->" + "".join(out), t)
    kept_dims = tuple(dims[r] for r in keep)
    d = int(np.prod(kept_dims))
    return DensityMatrix(reduced.reshape(d, d), kept_dims)


def partial_transpose(rho, subsystem: int, dims: Sequence[int] | None = None) -> np.ndarray:
    """Transpose register ``subsystem`` of a multi-register operator.

    ``rho`` may be a :class:`DensityMatrix` or a bare square matrix, in which
    case ``dims`` gives its layout. The result is Hermitian with unit trace
    for a state input but need not be positive.
    """
    if isinstance(rho, DensityMatrix):
        m, dims = rho.matrix, rho.dims
    else:
        m = as_matrix(rho)
        if dims is None:
            raise ValueError("dims is required for a bare matrix")
        dims = tuple(int(d) for d in dims)
        if int(np.prod(dims)) != m.shape[0] or m.shape[0] != m.shape[1]:
            raise ValueError(f"layout {dims} does not match matrix shape {m.shape}")
    (sub,) = _check_registers(dims, [subsystem])
    n = len(dims)
    axes = list(range(2 * n))
    axes[sub], axes[n + sub] = axes[n + sub], axes[sub]
    return m.reshape(dims + dims).transpose(axes).reshape(m.shape)


def embed(op, register: int, dims: Sequence[int]) -> np.ndarray:
    """Lift a single-register operator to the full register space."""
    dims = tuple(dims)
    (register,) = _check_registers(dims, [register])
    op = as_matrix(op)
    if op.shape != (dims[register], dims[register]):
        raise ValueError(f"operator shape {op.shape} does not fit register of dimension {dims[register]}")
    factors = [np.eye(d, dtype=complex) for d in dims]
    factors[register] = op
    return kron_all(factors)
