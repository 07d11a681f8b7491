"""Physical constructors: Hamiltonians, initial state, decay channels.

Two donor qubits (a, b) start with one shared excitation and hand it to two
target qubits (A, B) through resonant excitation exchange.  Tensor positions
are a=0, b=1, A=2, B=3, so basis index = 8*n_a + 4*n_b + 2*n_A + n_B.
Units: hbar = 1, energies in units of the shared transition frequency omega.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import kron

IDENTITY_2 = np.eye(2, dtype=complex)
# |0> sits at index 0, so sigma_z = |1><1| - |0><0| is diag(-1, +1).
SIGMA_Z = np.diag([-1.0 + 0j, 1.0 + 0j])
SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)   # |1><0|
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|

POS_DONOR_A, POS_DONOR_B, POS_TARGET_A, POS_TARGET_B = 0, 1, 2, 3


@dataclass(frozen=True)
class SystemConfig:
    """Parameters of the two exchange-coupled pairs.

    theta     initial-state angle in radians; any value is accepted
    g_aa      coupling between donor a and target A
    g_bb      coupling between donor b and target B
    kappa_a   amplitude decay rate of target A
    kappa_b   amplitude decay rate of target B
    omega     shared transition frequency (all four qubits resonant)
    """

    theta: float
    g_aa: float = 1.0
    g_bb: float = 1.0
    kappa_a: float = 0.0
    kappa_b: float = 0.0
    omega: float = 1.0

    def __post_init__(self) -> None:
        if not (self.omega > 0):
            raise ValueError(f"omega must be positive, got {self.omega}")
        for name in ("g_aa", "g_bb", "kappa_a", "kappa_b"):
            value = getattr(self, name)
            if not (value >= 0) or not math.isfinite(value):
                raise ValueError(f"{name} must be finite and >= 0, got {value}")
        if not math.isfinite(self.theta):
            raise ValueError(f"theta must be finite, got {self.theta}")

    @property
    def is_closed(self) -> bool:
        """True when both decay rates vanish."""
        return self.kappa_a == 0.0 and self.kappa_b == 0.0


def basis_index(n_a: int, n_b: int, n_A: int, n_B: int) -> int:
    """Index of |n_a n_b n_A n_B> in the 16-dimensional product basis."""
    return 8 * n_a + 4 * n_b + 2 * n_A + n_B


def single_qubit(op: np.ndarray, position: int) -> np.ndarray:
    """Embed a one-qubit operator at the given tensor position (0..3)."""
    factors = [IDENTITY_2] * 4
    factors[position] = np.asarray(op, dtype=complex)
    out = factors[0]
    for factor in factors[1:]:
        out = kron(out, factor)
    return out


def pair_hamiltonian(omega: float, g: float) -> np.ndarray:
    """4x4 Hamiltonian of one resonant pair: free terms plus excitation exchange.

    (omega/2)(sigma_z x I + I x sigma_z) + g(sigma_- x sigma_+ + sigma_+ x sigma_-).
    Restricted to the one-excitation doublet {|01>, |10>} the exchange term has
    eigenvalues -g and +g.
    """
    free = 0.5 * omega * (kron(SIGMA_Z, IDENTITY_2) + kron(IDENTITY_2, SIGMA_Z))
    exchange = g * (kron(SIGMA_MINUS, SIGMA_PLUS) + kron(SIGMA_PLUS, SIGMA_MINUS))
    return free + exchange


def build_hamiltonian(cfg: SystemConfig) -> np.ndarray:
    """16x16 Hamiltonian: both pair Hamiltonians, a with A and b with B.

    Commutes with the total excitation number; the global ground state
    |0000> has eigenvalue -2*omega.
    """
    h = 0.5 * cfg.omega * sum(single_qubit(SIGMA_Z, q) for q in range(4))
    for g, donor, target in (
        (cfg.g_aa, POS_DONOR_A, POS_TARGET_A),
        (cfg.g_bb, POS_DONOR_B, POS_TARGET_B),
    ):
        h = h + g * (
            single_qubit(SIGMA_MINUS, donor) @ single_qubit(SIGMA_PLUS, target)
            + single_qubit(SIGMA_PLUS, donor) @ single_qubit(SIGMA_MINUS, target)
        )
    return h


def target_hamiltonian(cfg: SystemConfig) -> np.ndarray:
    """Free Hamiltonian of the target pair: diag(-omega, 0, 0, omega)."""
    return 0.5 * cfg.omega * (
        kron(SIGMA_Z, IDENTITY_2) + kron(IDENTITY_2, SIGMA_Z)
    )


def initial_state(cfg: SystemConfig) -> np.ndarray:
    """Normalized start state sin(theta)|0100> + cos(theta)|1000>.

    One excitation shared between the donors; both targets in the ground state.
    """
    psi = np.zeros(16, dtype=complex)
    psi[basis_index(0, 1, 0, 0)] = math.sin(cfg.theta)
    psi[basis_index(1, 0, 0, 0)] = math.cos(cfg.theta)
    return psi


def jump_operators(cfg: SystemConfig) -> list[np.ndarray]:
    """Collapse operators sqrt(2*kappa) sigma_- on each lossy target qubit.

    Channels with zero rate are omitted, so the closed system returns [].
    """
    ops = []
    if cfg.kappa_a > 0:
        ops.append(math.sqrt(2.0 * cfg.kappa_a) * single_qubit(SIGMA_MINUS, POS_TARGET_A))
    if cfg.kappa_b > 0:
        ops.append(math.sqrt(2.0 * cfg.kappa_b) * single_qubit(SIGMA_MINUS, POS_TARGET_B))
    return ops


def excitation_number() -> np.ndarray:
    """Total excitation-number operator; diagonal entry = popcount of the index."""
    return np.diag([float(bin(i).count("1")) for i in range(16)]).astype(complex)
