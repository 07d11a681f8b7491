"""Dense complex linear algebra on the 2-, 4-, and 16-dimensional spaces used here.

Matrices are plain complex ndarrays.  The four-qubit basis is ordered
|n_a n_b n_A n_B> with index 8*n_a + 4*n_b + 2*n_A + n_B (ground state |0000>
at index 0), and the reduced target-pair basis is {|00>, |01>, |10>, |11>}
with index 2*n_A + n_B.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import InvalidStateError, NoConvergenceError, NotHermitianError


class HermitianSpectrum(NamedTuple):
    """Eigendecomposition of a Hermitian matrix.

    eigenvalues are real and ascending; eigenvectors holds the matching
    orthonormal eigenvectors as columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with entry (i*dB + k, j*dB + l) = A[i, j] * B[k, l]."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def max_abs(m: np.ndarray) -> float:
    """Largest absolute entry (max norm)."""
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def hermiticity_defect(m: np.ndarray) -> float:
    """Max-norm distance from m to its own conjugate transpose."""
    m = np.asarray(m)
    return max_abs(m - m.conj().T)


def require_hermitian(m: np.ndarray, rtol: float = 1e-10) -> None:
    """Raise NotHermitianError unless m is Hermitian within rtol * max|m|."""
    defect = hermiticity_defect(m)
    if defect > rtol * max(max_abs(m), 1e-300):
        raise NotHermitianError(
            f"matrix deviates from Hermiticity by {defect:.3e} (rtol={rtol:.1e})"
        )


def hermitian_eig(m: np.ndarray, rtol: float = 1e-10) -> HermitianSpectrum:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    Backed by LAPACK through numpy, which is deterministic for identical
    input on a given platform.  Raises NotHermitianError for non-Hermitian
    input and NoConvergenceError if the backend fails to converge.
    """
    m = np.asarray(m, dtype=complex)
    require_hermitian(m, rtol=rtol)
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - not reachable for 16x16
        raise NoConvergenceError(str(exc)) from exc
    return HermitianSpectrum(eigenvalues, eigenvectors)


def partial_trace_to_target(rho: np.ndarray) -> np.ndarray:
    """Trace the donor qubits (a, b) out of a 16x16 four-qubit density matrix.

    Returns the 4x4 target-pair matrix with
    out[2i+j, 2k+l] = sum_{m,n} rho[8m+4n+2i+j, 8m+4n+2k+l].
    Trace and Hermiticity are preserved exactly up to rounding.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (16, 16):
        raise InvalidStateError(f"expected a 16x16 matrix, got shape {rho.shape}")
    require_hermitian(rho)
    trace = complex(np.trace(rho))
    if abs(trace - 1.0) > 1e-10:
        raise InvalidStateError(f"trace {trace!r} is not 1 within 1e-10")
    # Row index 8m+4n+2i+j splits into donor part 2m+n and target part 2i+j.
    blocks = rho.reshape(4, 4, 4, 4)
    return np.trace(blocks, axis1=0, axis2=2)


def partial_transpose_first(rho: np.ndarray) -> np.ndarray:
    """Transpose the first-qubit indices of a two-qubit operator.

    out[2i+j, 2k+l] = rho[2k+j, 2i+l].  Applying it twice returns the input;
    Hermiticity, trace, and the diagonal are preserved, and the result of a
    Hermitian input has a real spectrum.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidStateError(f"expected a 4x4 matrix, got shape {rho.shape}")
    return rho.reshape(2, 2, 2, 2).transpose(2, 1, 0, 3).reshape(4, 4)


def projector(psi: np.ndarray) -> np.ndarray:
    """Density matrix |psi><psi| of a normalized pure state."""
    psi = np.asarray(psi, dtype=complex)
    norm_sq = float(np.vdot(psi, psi).real)
    if abs(norm_sq - 1.0) > 1e-10:
        raise InvalidStateError(f"state norm^2 {norm_sq!r} is not 1 within 1e-10")
    return np.outer(psi, psi.conj())
