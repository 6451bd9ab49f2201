"""
Dense matrix exponential.

Scaling and squaring with a diagonal Padé approximant of degree 3, 5, 7, 9 or
13. The degree is the smallest one whose backward-error threshold covers the
1-norm of the matrix; beyond the degree-13 threshold the matrix is scaled by
2**-s first. The rational approximant is evaluated with a partial-pivoted LU
solve.
"""
import logging
import math

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from ..errors import NumericError

logger = logging.getLogger(__name__)

# backward-error thresholds for double precision
_THETA = {
    3: 1.495585217958292e-2,
    5: 2.539398330063230e-1,
    7: 9.504178996162932e-1,
    9: 2.097847961257068e0,
    13: 5.371920351148152e0,
}

_PADE_COEFFS = {
    3: (120., 60., 12., 1.),
    5: (30240., 15120., 3360., 420., 30., 1.),
    7: (17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.),
    9: (17643225600., 8821612800., 2075673600., 302702400., 30270240.,
        2162160., 110880., 3960., 90., 1.),
    13: (64764752532480000., 32382376266240000., 7771770303897600.,
         1187353796428800., 129060195264000., 10559470521600.,
         670442572800., 33522128640., 1323241920., 40840800.,
         960960., 16380., 182., 1.),
}


def _pade_uv(A: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    b = _PADE_COEFFS[m]
    ident = np.eye(A.shape[0], dtype=A.dtype)
    A2 = A @ A
    if m == 13:
        A4 = A2 @ A2
        A6 = A2 @ A4
        U = A @ (A6 @ (b[13] * A6 + b[11] * A4 + b[9] * A2)
                 + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * ident)
        V = (A6 @ (b[12] * A6 + b[10] * A4 + b[8] * A2)
             + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * ident)
        return U, V
    U = b[1] * ident
    V = b[0] * ident
    A2n = ident
    for i in range(1, m // 2 + 1):
        A2n = A2n @ A2
        U = U + b[2 * i + 1] * A2n
        V = V + b[2 * i] * A2n
    return A @ U, V


def matrix_exp(A: np.ndarray) -> np.ndarray:
    """
    exp(A) for a dense square matrix (real or complex).

    Raises:
        NumericError: non-finite input, or overflow while squaring
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NumericError("matrix_exp expects a square matrix", diagnostics={"shape": A.shape})
    if not np.all(np.isfinite(A)):
        raise NumericError("matrix_exp input has non-finite entries")
    dtype = np.complex128 if np.iscomplexobj(A) else np.float64
    A = A.astype(dtype, copy=True)

    norm = float(np.linalg.norm(A, ord=1))
    if norm == 0.0:
        return np.eye(A.shape[0], dtype=dtype)

    s = 0
    for m in (3, 5, 7, 9):
        if norm <= _THETA[m]:
            break
    else:
        m = 13
        if norm > _THETA[13]:
            s = max(0, int(math.ceil(math.log2(norm / _THETA[13]))))
            A = A / (2.0 ** s)

    U, V = _pade_uv(A, m)
    X = lu_solve(lu_factor(V - U), V + U)
    for i in range(s):
        X = X @ X
        if not np.all(np.isfinite(X)):
            raise NumericError("matrix_exp overflow while squaring",
                               diagnostics={"norm1": norm, "pade_degree": m,
                                            "squarings": s, "failed_at": i + 1})
    logger.debug(f"matrix_exp n={A.shape[0]} norm1={norm:.3e} degree={m} squarings={s}")
    return X
