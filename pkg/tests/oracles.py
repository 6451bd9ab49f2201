"""
Independent reference computations shared by the tests.
"""
import numpy as np


def expm_eig(A: np.ndarray) -> tuple[np.ndarray, float]:
    """exp(A) through an eigendecomposition, with the condition number of the eigenbasis."""
    w, V = np.linalg.eig(A)
    out = (V * np.exp(w)) @ np.linalg.inv(V)
    if np.isrealobj(A):
        out = out.real
    return out, float(np.linalg.cond(V))


def expm_eigh(A: np.ndarray) -> np.ndarray:
    """exp(A) for a symmetric A."""
    w, V = np.linalg.eigh(A)
    return (V * np.exp(w)) @ V.T


def gaussian_2d(x: np.ndarray, xi: np.ndarray, x0: float, xi0: float, var_x: float, var_xi: float) -> np.ndarray:
    """Unit-mass axis-aligned Gaussian on the tensor grid x (rows) by xi (columns)."""
    gx = np.exp(-0.5 * (x - x0) ** 2 / var_x) / np.sqrt(2.0 * np.pi * var_x)
    gp = np.exp(-0.5 * (xi - xi0) ** 2 / var_xi) / np.sqrt(2.0 * np.pi * var_xi)
    return np.outer(gx, gp)
