"""FFT-based boundary fields: harmonic and analytic extensions of samples.

Everything here works with band-limited interpolants of uniform boundary
samples.  The harmonic/analytic extension of the interpolant is evaluated
exactly via Fourier multipliers rho^|k|, which stays accurate at any depth
1-rho (there is no near-boundary quadrature breakdown to work around).
"""

from __future__ import annotations

import numpy as np

__all__ = ["HarmonicField", "AnalyticField", "poisson_cell_masses"]


def _polyval(coeffs: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Horner evaluation of sum_k coeffs[k] * w^k (ascending order)."""
    out = np.zeros_like(w, dtype=complex)
    for c in coeffs[::-1]:
        out = out * w + c
    return out


class HarmonicField:
    """Harmonic extension of real boundary samples on a uniform grid.

    The samples are interpolated by the degree-n/2 trigonometric polynomial
    and extended harmonically; evaluation multiplies each Fourier mode by
    rho^|k|.
    """

    def __init__(self, samples: np.ndarray):
        samples = np.asarray(samples, dtype=float)
        self.n = samples.size
        self.spectrum = np.fft.rfft(samples)

    def mean(self) -> float:
        return float(self.spectrum[0].real) / self.n

    def on_ring(self, rho: float) -> np.ndarray:
        """Values at rho * e^{i theta_j} on the sample angular grid."""
        k = np.arange(self.spectrum.size)
        return np.fft.irfft(self.spectrum * rho**k, self.n)

    def at(self, w: np.ndarray) -> np.ndarray:
        """Values at scattered interior points (vectorized over w; a scalar
        argument yields a 0-d array)."""
        w = np.asarray(w, dtype=complex)
        half = self.spectrum.size - 1  # = n/2
        c = self.spectrum / self.n
        inner = _polyval(2.0 * c[1:half], w) * w  # k = 1 .. n/2-1
        vals = c[0].real + inner.real + (c[half] * w**half).real
        return vals


class AnalyticField:
    """Analytic function given by Taylor coefficients c_0..c_half.

    ``from_boundary`` recovers the coefficients from boundary samples by the
    DFT, truncating at frequency n/2 (higher content aliases; callers choose
    grids that resolve their data).
    """

    def __init__(self, coeffs: np.ndarray, n: int):
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.n = int(n)

    @classmethod
    def from_boundary(cls, samples: np.ndarray) -> "AnalyticField":
        samples = np.asarray(samples, dtype=complex)
        n = samples.size
        c = np.fft.fft(samples) / n
        return cls(c[: n // 2 + 1], n)

    def at(self, w: np.ndarray) -> np.ndarray:
        w = np.asarray(w, dtype=complex)
        return _polyval(self.coeffs, w)

    def on_ring(self, rho: float, n_out: int | None = None) -> np.ndarray:
        """Values at rho * e^{i theta_j}, j = 0..n_out-1 uniform."""
        n_out = n_out or self.n
        spec = np.zeros(n_out, dtype=complex)
        k = np.arange(self.coeffs.size)
        spec[: self.coeffs.size] = self.coeffs * rho**k
        return np.fft.ifft(spec) * n_out

    def derivative(self) -> "AnalyticField":
        k = np.arange(1, self.coeffs.size)
        return AnalyticField(self.coeffs[1:] * k, self.n)

    def h2_tail_norms(self) -> np.ndarray:
        """sqrt(sum_{k>m} |c_k|^2) for m = 0..len-1 (diagnostic helper)."""
        tail = np.sqrt(np.cumsum(np.abs(self.coeffs[::-1]) ** 2))[::-1]
        return tail


def poisson_cell_masses(w: complex, n: int) -> np.ndarray:
    """Exact harmonic measure, seen from w, of the n uniform grid cells.

    Cell j is the arc of half-width pi/n around theta_j = 2 pi j / n.  The
    Moebius transform phi_w(zeta) = (zeta - w)/(1 - conj(w) zeta) maps the
    circle to itself; the harmonic measure of an arc from w is the normalized
    length of its image, so each cell mass is an exact angle difference (no
    kernel quadrature).  The masses are positive and sum to 1 up to roundoff
    at any |w| < 1.
    """
    dtheta = 2.0 * np.pi / n
    edges = (np.arange(n) - 0.5) * dtheta
    z = np.exp(1j * edges)
    psi = np.angle((z - w) / (1.0 - np.conj(w) * z))
    d = np.diff(psi, append=psi[:1])
    return np.mod(d, 2.0 * np.pi) / (2.0 * np.pi)


def harmonic_ring(samples: np.ndarray, rho: float) -> np.ndarray:
    """Harmonic extension of complex boundary samples to the circle of
    radius rho, at the same angles (multiplier rho^|k| on the full spectrum)."""
    samples = np.asarray(samples)
    n = samples.size
    k = np.abs(np.fft.fftfreq(n, d=1.0 / n))
    return np.fft.ifft(np.fft.fft(samples) * rho ** k)
