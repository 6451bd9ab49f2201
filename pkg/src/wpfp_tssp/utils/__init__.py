from .fft import apply_multiplier, drop_unpaired, forward, hermitian_symmetrize, inverse, real_part
from .linalg import matrix_exp

__all__ = [
    "apply_multiplier",
    "drop_unpaired",
    "forward",
    "hermitian_symmetrize",
    "inverse",
    "real_part",
    # linalg
    "matrix_exp",
]
