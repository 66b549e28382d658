"""Dense complex linear algebra for small density matrices.

Everything here operates on plain complex ndarrays (row-major, square).
Matrices never exceed a few thousand rows at desk scale, so clarity and
robust validation win over asymptotics.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "DensityMatrix",
    "hermitian_eigensystem",
    "hermitian_eigenvalues",
    "partial_transpose",
    "negativity",
    "tensor",
    "fidelity_with_pure",
    "trace_norm",
]

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-9


def _as_square_complex(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


class DensityMatrix:
    """A validated density operator, optionally carrying an A|B bipartition.

    Validation enforces Hermiticity, unit trace and positivity (up to a
    small negative eigenvalue tolerance; loss-channel constructions are
    analytic, so only rounding noise is expected below zero).
    """

    def __init__(self, matrix, bipartition: tuple[int, int] | None = None, *,
                 hermiticity_tol: float = HERMITICITY_TOL,
                 trace_tol: float = TRACE_TOL,
                 positivity_tol: float = POSITIVITY_TOL):
        m = _as_square_complex(matrix)
        if np.max(np.abs(m - m.conj().T)) > hermiticity_tol:
            raise ValueError("density matrix is not Hermitian within tolerance")
        tr = np.trace(m)
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(f"density matrix trace {tr} is not 1 within tolerance")
        evals = np.linalg.eigvalsh(m)
        if evals[0] < -positivity_tol:
            raise ValueError(f"density matrix has eigenvalue {evals[0]} below -{positivity_tol}")
        if bipartition is not None:
            da, db = bipartition
            if da * db != m.shape[0]:
                raise ValueError(f"bipartition {bipartition} incompatible with dim {m.shape[0]}")
        self.matrix = m
        self.bipartition = bipartition

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self) -> str:  # pragma: no cover
        return f"DensityMatrix(dim={self.dim}, bipartition={self.bipartition})"


def hermitian_eigensystem(m, tol: float = HERMITICITY_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.

    Raises if the input is not square or not Hermitian within `tol`.
    """
    a = _as_square_complex(m)
    if np.max(np.abs(a - a.conj().T)) > tol:
        raise ValueError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(a)
    return w, v


def hermitian_eigenvalues(m, tol: float = HERMITICITY_TOL) -> np.ndarray:
    w, _ = hermitian_eigensystem(m, tol)
    return w


def partial_transpose(rho: DensityMatrix) -> np.ndarray:
    """Transpose subsystem A of a bipartite density matrix.

    Block (i,j) <-> (j,i) on the first tensor factor; Hermiticity and
    trace are preserved.
    """
    if rho.bipartition is None:
        raise ValueError("partial transpose requires a bipartition")
    da, db = rho.bipartition
    t = rho.matrix.reshape(da, db, da, db)
    return t.transpose(2, 1, 0, 3).reshape(da * db, da * db)


def trace_norm(m) -> float:
    """Trace norm of a Hermitian matrix: sum of |eigenvalues|."""
    return float(np.sum(np.abs(hermitian_eigenvalues(m))))


def negativity(rho: DensityMatrix) -> float:
    """Entanglement negativity: absolute sum of the negative eigenvalues
    of the partial transpose, equivalently (||rho^T_A||_1 - 1) / 2."""
    ev = np.linalg.eigvalsh(partial_transpose(rho))
    neg = -float(ev[ev < 0].sum())
    return max(neg, 0.0)


def tensor(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def fidelity_with_pure(rho, psi, norm_tol: float = 1e-10) -> float:
    """<psi|rho|psi> for a normalized pure target state."""
    v = np.asarray(psi, dtype=complex).ravel()
    if abs(np.linalg.norm(v) - 1.0) > norm_tol:
        raise ValueError("target state is not normalized")
    m = rho.matrix if isinstance(rho, DensityMatrix) else _as_square_complex(rho)
    if m.shape[0] != v.size:
        raise ValueError(f"dimension mismatch: matrix {m.shape[0]} vs state {v.size}")
    val = np.vdot(v, m @ v)
    if abs(val.imag) > 1e-10:
        raise ValueError(f"fidelity has non-real value {val}")
    return float(val.real)
