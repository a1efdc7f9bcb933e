"""矩阵运算辅助函数"""

import numpy as np
from scipy.linalg import block_diag

# Pauli 矩阵
SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.array([SIGMA_1, SIGMA_2, SIGMA_3])

# Levi-Civita 张量，ε_123 = 1
LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
    LEVI_CIVITA[_i, _j, _k] = 1.0
    LEVI_CIVITA[_i, _k, _j] = -1.0


def max_entry(matrix) -> float:
    """最大元素模"""
    matrix = np.asarray(matrix)
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.abs(matrix)))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def hermiticity_residual(a: np.ndarray) -> float:
    """‖A − A†‖_max"""
    return max_entry(a - dagger(a))


def anti_hermiticity_residual(a: np.ndarray) -> float:
    """‖A + A†‖_max"""
    return max_entry(a + dagger(a))


def sigma_dot(vector) -> np.ndarray:
    """σ·v"""
    vector = np.asarray(vector, dtype=float)
    return np.einsum("i,iab->ab", vector, PAULI)


def block_diag2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """diag(a, b)"""
    return block_diag(a, b).astype(complex)


def anti_block2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """((0, a), (b, 0))"""
    n = a.shape[0]
    out = np.zeros((2 * n, 2 * n), dtype=complex)
    out[:n, n:] = a
    out[n:, :n] = b
    return out


def readonly(array) -> np.ndarray:
    """复制并冻结数组"""
    out = np.array(array, copy=True)
    out.setflags(write=False)
    return out
