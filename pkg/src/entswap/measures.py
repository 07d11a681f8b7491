"""Entanglement negativity and mean energy of the target-pair state."""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .closed_form import XStateAB
from .errors import InvalidStateError
from .linalg import hermitian_eig, max_abs, partial_transpose_first


class ObservablePair(NamedTuple):
    negativity: float
    energy: float


def _require_density(rho: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Validate a 4x4 density matrix: Hermitian, unit trace, positive within tol."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidStateError(f"expected a 4x4 matrix, got shape {rho.shape}")
    defect = max_abs(rho - rho.conj().T)
    if defect > tol * max(max_abs(rho), 1e-300):
        raise InvalidStateError(f"matrix deviates from Hermiticity by {defect:.3e}")
    trace = complex(np.trace(rho))
    if abs(trace - 1.0) > tol:
        raise InvalidStateError(f"trace {trace!r} is not 1 within {tol:.1e}")
    smallest = float(np.linalg.eigvalsh(rho)[0])
    if smallest < -tol:
        raise InvalidStateError(f"smallest eigenvalue {smallest:.3e} below -{tol:.1e}")
    return rho


def negativity(rho: np.ndarray) -> float:
    """Entanglement negativity 2 * sum |negative eigenvalues of the partial transpose|.

    For two qubits the partial transpose has at most one negative eigenvalue,
    so this equals 2 * max(0, -lambda_min); normalized so that a Bell state
    gives 1 and separable states give 0.  Raises InvalidStateError if rho is
    not a density matrix within 1e-8.
    """
    rho = _require_density(rho)
    eigenvalues = hermitian_eig(partial_transpose_first(rho)).eigenvalues
    negatives = eigenvalues[eigenvalues < 0.0]
    assert (eigenvalues < -1e-12).sum() <= 1, "two-qubit partial transpose grew a second negative eigenvalue"
    return float(-2.0 * negatives.sum()) if negatives.size else 0.0


def energy(rho: np.ndarray, omega: float = 1.0) -> float:
    """Mean free energy of the target pair in units of omega.

    Tr(rho H_AB) / omega with H_AB = diag(-omega, 0, 0, omega); ranges over
    [-1, 1], and equals -a for a single-excitation X state with ground
    population a.
    """
    rho = _require_density(rho)
    h = np.diag([-omega, 0.0, 0.0, omega])
    return float(np.trace(rho @ h).real) / omega


def xstate_observables(x: XStateAB) -> ObservablePair:
    """Negativity and energy of an X state straight from its entries.

    N = sqrt(a^2 + 4|d|^2) - a and U = -a; agrees with the eigensolver route
    applied to the assembled matrix.
    """
    n = math.hypot(x.a, 2.0 * abs(x.d)) - x.a
    return ObservablePair(negativity=n, energy=-x.a)
