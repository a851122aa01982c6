"""Small shared helpers: capped quadrature signalling and output formatting."""

from __future__ import annotations

import math

import numpy as np

# Any partial quadrature exceeding this cap is reported as a signalled
# infinity instead of a bare float, so callers can distinguish "diverged"
# from "large but trusted".
QUADRATURE_CAP = 1e12


class SignaledInfinity(float):
    """A float('inf') carrying the partial value that tripped the cap.

    Behaves exactly like ``inf`` in arithmetic and comparisons; the partial
    quadrature value is kept in :attr:`partial` for diagnostics.
    """

    __slots__ = ("partial",)

    def __new__(cls, partial: float):
        obj = super().__new__(cls, math.inf)
        obj.partial = float(partial)
        return obj

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"SignaledInfinity(partial={self.partial!r})"


def capped(value: float, cap: float = QUADRATURE_CAP) -> float:
    """Return ``value``, or a :class:`SignaledInfinity` if it exceeds ``cap``."""
    v = float(value)
    if not math.isfinite(v) or v > cap:
        return SignaledInfinity(min(v, cap) if math.isfinite(v) else cap)
    return v


def fmt(x) -> str:
    """Format a real number with 15 significant digits ('.' decimal point)."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    xf = float(x)
    if math.isnan(xf):
        return "nan"
    if math.isinf(xf):
        return "inf" if xf > 0 else "-inf"
    return format(xf, ".15g")


def fmt_point(z: complex) -> str:
    """Format a complex point as ``a+bi`` with 15 significant digits."""
    re, im = fmt(z.real), fmt(z.imag)
    sign = "+" if not im.startswith("-") else ""
    return f"{re}{sign}{im}i"


def parse_point(text: str) -> complex:
    """Parse ``a+bi`` / ``a`` / plain python complex syntax into a complex."""
    s = text.strip().replace(" ", "")
    if s.endswith("i"):
        s = s[:-1] + "j"
    try:
        return complex(s)
    except ValueError:
        return complex(float(s), 0.0)


def wrap_angle(theta):
    """Wrap angles into (-pi, pi]."""
    t = np.mod(np.asarray(theta, dtype=float) + np.pi, 2 * np.pi) - np.pi
    return np.where(t == -np.pi, np.pi, t)


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0
