"""Sobolev, Hölder and Slobodeckij norms for periodic fields.

The H^s norm of a d-component field is computed from Fourier coefficients
with the weight (1 + |2 pi k|^2)^s,

    ||f||_s^2 = sum_k (1 + 4 pi^2 |k|^2)^s |fhat_k|^2,

summed over components.  For integer s the same norm can be assembled from
plain L2 norms of mixed partials; the two routes agree up to an explicit
multinomial constant, which norm_equivalence_constant returns.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .grid import (
    GridFunction,
    GridSpec,
    Spectrum,
    TWO_PI,
    differentiate_multi,
    forward_transform,
    inverse_transform,
)


@dataclass(frozen=True)
class SobolevIndex:
    """Regularity index with the two thresholds the torus calculus uses."""

    s: float

    def __post_init__(self):
        if not np.isfinite(self.s) or self.s < 0:
            raise ValueError(f"s must be finite and >= 0, got {self.s}")

    def embeds_in_c0(self, dim: int) -> bool:
        """s > dim/2: continuous representatives exist."""
        return self.s > dim / 2

    def composition_regular(self, dim: int) -> bool:
        """s > dim/2 + 1: the regime where composition and inversion behave."""
        return self.s > dim / 2 + 1


@dataclass(frozen=True)
class NormReport:
    """Value of one norm evaluation plus how it was computed."""

    norm_value: float
    method: str  # fourier | derivative_sum | slobodeckij | sup
    params: dict

    def __post_init__(self):
        if self.norm_value < 0:
            raise ValueError("norms are nonnegative")


def sobolev_weight(spec: GridSpec, s: float) -> np.ndarray:
    return (1.0 + TWO_PI**2 * spec.wavevector_sq()) ** s


def hs_norm(F: Spectrum, s: float) -> float:
    """Fourier-side H^s norm; s may be fractional or zero."""
    w = sobolev_weight(F.spec, s)
    return float(np.sqrt(np.sum(w[None] * np.abs(F.coeffs) ** 2)))


def multi_indices(dim: int, max_order: int) -> list[tuple[int, ...]]:
    """All multi-indices alpha with |alpha| <= max_order."""
    out = []
    for total in range(max_order + 1):
        for alpha in itertools.product(range(total + 1), repeat=dim):
            if sum(alpha) == total:
                out.append(alpha)
    return out


def hs_norm_derivative(f: GridFunction, s: int) -> float:
    """Integer-s H^s norm as sqrt(sum of ||d^alpha f||_0^2, |alpha| <= s).

    Each mixed partial enters once, unweighted.  Pointwise in frequency the
    weight is sum_{|alpha|<=s} xi^{2 alpha}, which brackets the Fourier
    weight (1+|xi|^2)^s between factors 1 and C_s^2 (multinomial maximum),
    so hs_norm / hs_norm_derivative always lies in [1, C_s] for fields
    without Nyquist content.  Derivatives are spectral.
    """
    if s != int(s) or s < 0:
        raise ValueError(f"derivative-form norm needs integer s >= 0, got {s}")
    s = int(s)
    F = forward_transform(f)
    total = 0.0
    for alpha in multi_indices(f.spec.dim, s):
        dF = differentiate_multi(F, alpha)
        total += np.sum(np.abs(dF.coeffs) ** 2)
    return float(np.sqrt(total))


def _multinomial(s: int, alpha: tuple[int, ...]) -> float:
    """s! / (alpha! (s - |alpha|)!) as an exact float."""
    rest = s - sum(alpha)
    denom = math.prod(math.factorial(a) for a in alpha) * math.factorial(rest)
    return math.factorial(s) / denom


def norm_equivalence_constant(s: int, dim: int) -> float:
    """C_s with ||f||_s(Fourier) <= C_s * derivative-form sum of plain L2
    squares; equals sqrt(max multinomial coefficient of (1+|xi|^2)^s)."""
    best = max(_multinomial(int(s), alpha) for alpha in multi_indices(dim, int(s)))
    return float(np.sqrt(best))


def cr_norm(f: GridFunction, r: int) -> float:
    """C^r norm: max over |alpha| <= r of the grid sup of |d^alpha f|."""
    if r < 0 or r != int(r):
        raise ValueError(f"r must be a nonnegative integer, got {r}")
    F = forward_transform(f)
    best = 0.0
    for alpha in multi_indices(f.spec.dim, int(r)):
        vals = inverse_transform(differentiate_multi(F, alpha)).values
        best = max(best, float(np.max(np.abs(vals))))
    return best


def embedding_constant(spec: GridSpec, s: float) -> float:
    """Discrete embedding constant: sup|f| <= K * ||f||_s for band-limited
    fields, K = sqrt(sum over the grid's modes of (1+|2 pi k|^2)^{-s})."""
    if s <= spec.dim / 2:
        raise ValueError(f"need s > dim/2 for the sup bound, got s={s}")
    return float(np.sqrt(np.sum(sobolev_weight(spec, -s))))


def slobodeckij_seminorm(f: GridFunction, lam: float) -> float:
    """Fractional seminorm on the circle via the double-integral quadrature.

    [f]_lam^2 ~ h^2 * sum_{i != j} |f(x_i)-f(x_j)|^2 / d(x_i,x_j)^{1+2 lam}
    with d the periodic distance and h = 1/N.  Diagonal terms are excluded.
    Only dim == 1 grids are supported.
    """
    if f.spec.dim != 1:
        raise ValueError("slobodeckij_seminorm is implemented for dim == 1 only")
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lam must lie in (0,1), got {lam}")
    n = f.spec.size
    h = 1.0 / n
    vals = f.values  # (d, N)
    total = 0.0
    for m in range(1, n):
        dist = min(m * h, 1.0 - m * h)
        diff2 = np.sum((vals - np.roll(vals, -m, axis=1)) ** 2)
        total += diff2 / dist ** (1.0 + 2.0 * lam)
    return float(np.sqrt(total * h * h))


def holder_quotient_sup(f: GridFunction, lam: float) -> float:
    """sup_{i != j} |f(x_i)-f(x_j)| / d(x_i,x_j)^lam on the grid (dim 1)."""
    if f.spec.dim != 1:
        raise ValueError("dim == 1 only")
    n = f.spec.size
    h = 1.0 / n
    best = 0.0
    for m in range(1, n):
        dist = min(m * h, 1.0 - m * h)
        diff = np.max(np.abs(f.values - np.roll(f.values, -m, axis=1)))
        best = max(best, diff / dist**lam)
    return float(best)
