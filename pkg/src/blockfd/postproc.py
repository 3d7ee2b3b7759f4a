"""
Spectral post-processing.

The bounded part of the BFD error lives on the high-frequency alias band
(wavenumber index |m| >= N/2 of the 2N-point grid).  Projecting onto the low
band removes it and leaves only the small, slowly growing phase error.
"""

import numpy as np

from .grid import GridFunction


def low_band_mask(N: int) -> np.ndarray:
    """Boolean mask over FFT ordering of the 2N coefficients kept by the filter.

    Indices with |m| >= N/2 are dropped, including both band-edge indices
    +-N/2 when N is even.
    """
    m = np.fft.fftfreq(2 * N, d=1.0 / (2 * N))
    return 2 * np.abs(m) < N


def spectral_filter(u: GridFunction) -> GridFunction:
    """Zero every Fourier coefficient of u outside the low band."""
    values = u.values
    spectrum = np.fft.fft(values)
    spectrum[~low_band_mask(u.grid.N)] = 0.0
    out = np.fft.ifft(spectrum)
    # the mask is symmetric in m, so real input stays real up to rounding
    return u.with_values(out.real if np.isrealobj(values) else out)
