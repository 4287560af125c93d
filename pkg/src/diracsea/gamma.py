"""Dirac matrices in the Dirac representation, signature (+,-,-,-).

gamma5 = i g0 g1 g2 g3; the spin scalar product is Phi^dag gamma0 Psi, and
the Dirac adjoint of a matrix is B* = gamma0 B^dag gamma0.
"""

import numpy as np

_I2 = np.eye(2, dtype=complex)
_Z2 = np.zeros((2, 2), dtype=complex)
_SIG = [
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]

GAMMA = np.empty((4, 4, 4), dtype=complex)
GAMMA[0] = np.block([[_I2, _Z2], [_Z2, -_I2]])
for _k in range(3):
    GAMMA[_k + 1] = np.block([[_Z2, _SIG[_k]], [-_SIG[_k], _Z2]])

GAMMA5 = 1j * GAMMA[0] @ GAMMA[1] @ GAMMA[2] @ GAMMA[3]
ETA = np.diag([1.0, -1.0, -1.0, -1.0])

CHI_L = 0.5 * (np.eye(4) - GAMMA5)
CHI_R = 0.5 * (np.eye(4) + GAMMA5)


def slash(v) -> np.ndarray:
    """v_mu gamma^mu for a (possibly complex) 4-vector with upper indices."""
    v = np.asarray(v)
    return np.tensordot(ETA @ v, GAMMA, axes=(0, 0))


def minkowski(a, b) -> complex:
    """Bilinear Minkowski product a^mu b_mu (no conjugation)."""
    a = np.asarray(a)
    b = np.asarray(b)
    return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]


def dirac_adjoint(B: np.ndarray) -> np.ndarray:
    """B* = gamma0 B^dag gamma0 (per 4x4 block for 4g x 4g inputs)."""
    n = B.shape[0]
    G0 = np.kron(np.eye(n // 4), GAMMA[0]) if n > 4 else GAMMA[0]
    return G0 @ B.conj().T @ G0
