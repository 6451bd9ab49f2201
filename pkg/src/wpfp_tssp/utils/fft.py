"""
FFT kernels shared by the split steps.

Coefficients are kept in DFT index order (0, 1, ..., n/2-1, -n/2, ..., -1), the
same order as the frequency tables of :class:`wpfp_tssp.grid.GridSpec`.
"""
from typing import Sequence

import numpy as np
from scipy import fft as sp_fft

from .. import settings
from ..errors import NumericError

# max|Im| <= IMAG_RESIDUE_RTOL * max|Re| after a spectral step
IMAG_RESIDUE_RTOL = 1e-10


def forward(values: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    return sp_fft.fftn(values, axes=tuple(axes), workers=settings.thread_count())


def inverse(coeffs: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    return sp_fft.ifftn(coeffs, axes=tuple(axes), workers=settings.thread_count())


def hermitian_symmetrize(multiplier: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """
    Project a Fourier multiplier onto its real-preserving part.

    For every axis in ``axes`` the entry of mode ``-j`` must be the conjugate of
    the entry of mode ``j``. Only the unpaired ``-n/2`` modes can violate this;
    they are replaced by ``(g + conj(g_mirror)) / 2``.
    """
    mirrored = multiplier
    for axis in axes:
        n = multiplier.shape[axis]
        mirrored = np.take(mirrored, (-np.arange(n)) % n, axis=axis)
    return 0.5 * (multiplier + np.conj(mirrored))


def drop_unpaired(multiplier: np.ndarray, axis: int) -> np.ndarray:
    """Copy of ``multiplier`` with the -n/2 entries along ``axis`` set to zero (n even)."""
    out = np.array(multiplier, copy=True)
    index = [slice(None)] * out.ndim
    index[axis] = out.shape[axis] // 2
    out[tuple(index)] = 0
    return out


def apply_multiplier(values: np.ndarray, multiplier: np.ndarray, axes: Sequence[int],
                     stage: str) -> np.ndarray:
    """FFT along ``axes``, multiply, inverse FFT, back to real storage."""
    out = inverse(forward(values, axes) * multiplier, axes)
    return real_part(out, stage)


def real_part(values: np.ndarray, stage: str) -> np.ndarray:
    """Drop the imaginary residue after checking it is round-off."""
    re = np.ascontiguousarray(values.real)
    max_re = float(np.max(np.abs(re))) if re.size else 0.0
    max_im = float(np.max(np.abs(values.imag))) if values.size else 0.0
    if max_im > IMAG_RESIDUE_RTOL * max_re and max_im > np.finfo(float).tiny:
        raise NumericError(f"{stage}: imaginary residue exceeds tolerance",
                           diagnostics={"max_im": max_im, "max_re": max_re})
    return re
