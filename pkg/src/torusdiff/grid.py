"""Spectral grids on the unit torus.

Fields live on regular grids over [0,1)^n (n = 1 or 2) and are represented
either by their values at the grid points or by their Fourier coefficients.
All transforms use the convention

    fhat_k = N^{-n} * sum_j f(x_j) exp(-2*pi*i k.x_j),

so that fhat_0 is the mean value and Parseval reads
sum_k |fhat_k|^2 = mean_j |f(x_j)|^2.  Wavevectors are integers in standard
FFT ordering; the Nyquist slot k = -N/2 is treated as the real cosine mode
cos(pi*N*x) wherever point evaluation or grid refinement needs an
unambiguous trigonometric interpolant.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class GridSpec:
    """Regular periodic grid: `size` points per axis on [0,1)^dim."""

    dim: int
    size: int

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        if self.size < 8 or self.size % 2 != 0:
            raise ValueError(f"size must be even and >= 8, got {self.size}")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.size,) * self.dim

    @property
    def num_points(self) -> int:
        return self.size**self.dim

    @property
    def spacing(self) -> float:
        return 1.0 / self.size

    def axis_coordinates(self) -> np.ndarray:
        return np.arange(self.size) / self.size

    def points(self) -> np.ndarray:
        """All grid points, shape (num_points, dim), C order."""
        x = self.axis_coordinates()
        if self.dim == 1:
            return x[:, None]
        xx, yy = np.meshgrid(x, x, indexing="ij")
        return np.stack([xx.ravel(), yy.ravel()], axis=-1)

    def wavenumbers(self) -> np.ndarray:
        """Integer wavenumbers along one axis in FFT order."""
        return np.fft.fftfreq(self.size, d=1.0 / self.size)

    def wavevector_sq(self) -> np.ndarray:
        """|k|^2 on the full spectral grid, shape == self.shape."""
        k = self.wavenumbers()
        if self.dim == 1:
            return k**2
        return k[:, None] ** 2 + k[None, :] ** 2

    def refined(self, factor: int) -> "GridSpec":
        return GridSpec(self.dim, self.size * factor)

    def spatial_axes(self) -> tuple[int, ...]:
        """Axes of a (components, *shape) array that carry space."""
        return tuple(range(1, self.dim + 1))


def _as_component_array(spec: GridSpec, values: np.ndarray, dtype) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype)
    if arr.shape == spec.shape:
        arr = arr[None]
    if arr.ndim != spec.dim + 1 or arr.shape[1:] != spec.shape:
        raise ValueError(
            f"expected shape (d,) + {spec.shape} or {spec.shape}, got {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite entries")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class GridFunction:
    """Real d-component field sampled on a grid; values shape (d, *shape)."""

    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "values", _as_component_array(self.spec, self.values, np.float64)
        )

    @property
    def num_components(self) -> int:
        return self.values.shape[0]

    @classmethod
    def from_callable(cls, spec: GridSpec, func) -> "GridFunction":
        """Sample func(points)->(..., d) or scalar array at the grid points."""
        vals = np.asarray(func(spec.points()), dtype=np.float64)
        if vals.ndim == 1:
            vals = vals[:, None]
        d = vals.shape[1]
        return cls(spec, vals.T.reshape((d,) + spec.shape))

    def flat_points_values(self) -> np.ndarray:
        """Values as (num_points, d), matching GridSpec.points() order."""
        return self.values.reshape(self.num_components, -1).T


@dataclass(frozen=True)
class Spectrum:
    """Fourier coefficients of a real field; coeffs shape (d, *shape).

    Construction enforces Hermitian symmetry fhat_{-k} = conj(fhat_k) up to
    a small relative tolerance, so a Spectrum always represents a real field.
    """

    spec: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        c = _as_component_array(self.spec, self.coeffs, np.complex128)
        object.__setattr__(self, "coeffs", c)
        scale = np.max(np.abs(c)) if c.size else 0.0
        if scale > 0.0:
            err = np.max(np.abs(np.conj(_mirror_modes(self.spec, c)) - c))
            if err > 1e-12 * max(scale, 1.0):
                raise ValueError(
                    f"coefficients are not Hermitian-symmetric (defect {err:.3e})"
                )

    @property
    def num_components(self) -> int:
        return self.coeffs.shape[0]


def _mirror_modes(spec: GridSpec, coeffs: np.ndarray) -> np.ndarray:
    """coeffs re-indexed k -> -k along every spatial axis."""
    mirror = coeffs
    for ax in spec.spatial_axes():
        mirror = np.roll(np.flip(mirror, axis=ax), 1, axis=ax)
    return mirror


def forward_transform(f: GridFunction) -> Spectrum:
    """FFT normalized so fhat_k = mean(f * e^{-2 pi i k.x}).

    The raw FFT of real values is Hermitian only to roundoff; the result
    is symmetrized exactly so that later per-mode operations (which all
    preserve exact symmetry) can never drift out of the real class, even
    after high-order differentiation amplifies high modes.
    """
    axes = f.spec.spatial_axes()
    coeffs = np.fft.fftn(f.values, axes=axes) / f.spec.num_points
    coeffs = 0.5 * (coeffs + np.conj(_mirror_modes(f.spec, coeffs)))
    return Spectrum(f.spec, coeffs)


def inverse_transform(F: Spectrum) -> GridFunction:
    axes = F.spec.spatial_axes()
    vals = np.fft.ifftn(F.coeffs, axes=axes) * F.spec.num_points
    return GridFunction(F.spec, vals.real)


@lru_cache(maxsize=64)
def _extended_wavenumbers(size: int) -> np.ndarray:
    """Wavenumbers -N/2..N/2 with the Nyquist coefficient split evenly."""
    half = size // 2
    return np.arange(-half, half + 1, dtype=np.float64)


def _extend_axis(coeffs: np.ndarray, axis: int, size: int) -> np.ndarray:
    """Reorder one FFT axis to -N/2..N/2, halving the Nyquist slot."""
    idx = np.fft.fftshift(np.arange(size))  # slots for k=-N/2..N/2-1
    ext = np.take(coeffs, idx, axis=axis)
    nyq = np.take(ext, [0], axis=axis) / 2.0
    ext = np.concatenate([nyq, np.delete(ext, 0, axis=axis), nyq], axis=axis)
    return ext


def evaluate(F: Spectrum, points: np.ndarray) -> np.ndarray:
    """Evaluate the trigonometric interpolant at arbitrary points.

    points: (P, dim) or (P,) when dim == 1.  Returns (d, P) real values.
    At grid points this reproduces the inverse transform exactly (up to
    rounding) for every real field, including ones with Nyquist content.
    """
    spec = F.spec
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.shape[1] != spec.dim:
        raise ValueError(f"points must have {spec.dim} columns, got {pts.shape}")
    k = _extended_wavenumbers(spec.size)
    if spec.dim == 1:
        ext = _extend_axis(F.coeffs, 1, spec.size)  # (d, N+1)
        phase = np.exp(TWO_PI * 1j * pts[:, 0, None] * k[None, :])  # (P, N+1)
        return (ext @ phase.T).real
    ext = _extend_axis(_extend_axis(F.coeffs, 1, spec.size), 2, spec.size)
    ph0 = np.exp(TWO_PI * 1j * pts[:, 0, None] * k[None, :])  # (P, N+1)
    ph1 = np.exp(TWO_PI * 1j * pts[:, 1, None] * k[None, :])
    out = np.empty((F.num_components, pts.shape[0]))
    for c in range(F.num_components):
        out[c] = np.sum((ph0 @ ext[c]) * ph1, axis=1).real
    return out


def _symbol(spec: GridSpec, axis: int) -> np.ndarray:
    """Derivative symbol 2*pi*i*k along `axis`, Nyquist zeroed."""
    k = spec.wavenumbers()
    k = k.copy()
    k[spec.size // 2] = 0.0
    sym = TWO_PI * 1j * k
    if spec.dim == 1:
        return sym
    return sym[:, None] if axis == 0 else sym[None, :]


def differentiate(F: Spectrum, axis: int = 0) -> Spectrum:
    """Spectral partial derivative along a space axis (0-based)."""
    if not 0 <= axis < F.spec.dim:
        raise ValueError(f"axis {axis} out of range for dim {F.spec.dim}")
    return Spectrum(F.spec, F.coeffs * _symbol(F.spec, axis))


def differentiate_multi(F: Spectrum, alpha: tuple[int, ...]) -> Spectrum:
    """Mixed partial d^alpha applied in spectral space."""
    if len(alpha) != F.spec.dim or any(a < 0 for a in alpha):
        raise ValueError(f"bad multi-index {alpha} for dim {F.spec.dim}")
    out = F.coeffs
    for axis, order in enumerate(alpha):
        if order:
            out = out * _symbol(F.spec, axis) ** order
    return Spectrum(F.spec, out)


def smoothstep_cutoff(t: np.ndarray) -> np.ndarray:
    """Quintic cutoff: 1 on t<=1, 0 on t>=2, C^2 monotone in between."""
    t = np.asarray(t, dtype=np.float64)
    u = np.clip(t - 1.0, 0.0, 1.0)
    return 1.0 - u**3 * (10.0 - 15.0 * u + 6.0 * u**2)


def fourier_truncate(F: Spectrum, cutoff: float, mode: str = "sharp") -> Spectrum:
    """Keep modes with |k| <= cutoff (sharp) or taper with the quintic cutoff
    chi(|k|/cutoff) supported on |k| <= 2*cutoff (smooth)."""
    if not 0 < cutoff <= F.spec.size // 2:
        raise ValueError(f"cutoff must lie in (0, N/2], got {cutoff}")
    mag = np.sqrt(F.spec.wavevector_sq())
    if mode == "sharp":
        mask = (mag <= cutoff).astype(np.float64)
    elif mode == "smooth":
        mask = smoothstep_cutoff(mag / cutoff)
    else:
        raise ValueError(f"mode must be 'sharp' or 'smooth', got {mode!r}")
    return Spectrum(F.spec, F.coeffs * mask[None])


@lru_cache(maxsize=32)
def _half_modes(dim: int, size: int) -> tuple[tuple[int, ...], ...]:
    """One representative per conjugate mode pair, Nyquist excluded.

    Ordered by the l-infinity ring so that the list for a coarse grid is a
    prefix of the list for any finer grid: random fields drawn mode by mode
    then share their low modes across resolutions.
    """
    half = size // 2
    if dim == 1:
        return tuple((k,) for k in range(1, half))
    modes = []
    for ring in range(1, half):
        ring_modes = []
        for k1 in range(-ring, ring + 1):
            for k2 in range(-ring, ring + 1):
                if max(abs(k1), abs(k2)) != ring:
                    continue
                if k1 > 0 or (k1 == 0 and k2 > 0):
                    ring_modes.append((k1, k2))
        modes.extend(sorted(ring_modes))
    return tuple(modes)


def random_field(
    spec: GridSpec,
    s: float,
    seed: int,
    decay: float | None = None,
    components: int = 1,
) -> Spectrum:
    """Seeded random field with coefficient decay (1+|k|^2)^{-(s+decay)/2}.

    Each conjugate mode pair carries an independent standard complex
    Gaussian, so E|fhat_k|^2 = (1+|k|^2)^{-(s+decay)}.  Modes are drawn in a
    resolution-stable order (see _half_modes), the Nyquist slots stay zero,
    and the same seed always reproduces the same field bit for bit.
    """
    if decay is None:
        decay = 0.6 if spec.dim == 1 else 1.1
    if decay <= spec.dim / 2:
        raise ValueError(f"decay must exceed dim/2 = {spec.dim / 2}, got {decay}")
    rng = np.random.default_rng(seed)
    modes = _half_modes(spec.dim, spec.size)
    exponent = -(s + decay) / 2.0
    ksq = np.array([sum(c * c for c in m) for m in modes], dtype=np.float64)
    sigma = (1.0 + ksq) ** exponent
    coeffs = np.zeros((components,) + spec.shape, dtype=np.complex128)
    for comp in range(components):
        mean = rng.standard_normal()
        draws = rng.standard_normal(2 * len(modes))
        zeta = (draws[0::2] + 1j * draws[1::2]) / np.sqrt(2.0)
        comp_coeffs = coeffs[comp]
        comp_coeffs[(0,) * spec.dim] = mean
        vals = sigma * zeta
        for m, v in zip(modes, vals):
            comp_coeffs[m] = v
            neg = tuple(-c for c in m)
            comp_coeffs[neg] = np.conj(v)
    return Spectrum(spec, coeffs)


def refine(F: Spectrum, factor: int) -> GridFunction:
    """Trigonometric interpolation onto a grid refined by `factor`."""
    if factor < 1 or not isinstance(factor, (int, np.integer)):
        raise ValueError(f"factor must be a positive integer, got {factor}")
    if factor == 1:
        return inverse_transform(F)
    spec = F.spec
    fine = spec.refined(factor)
    ext = F.coeffs
    for ax in spec.spatial_axes():
        ext = _extend_axis(ext, ax, spec.size)
    # Scatter the -N/2..N/2 block into the fine FFT layout.
    half = spec.size // 2
    dest = np.arange(-half, half + 1) % fine.size
    out = np.zeros((F.num_components,) + fine.shape, dtype=np.complex128)
    if spec.dim == 1:
        out[:, dest] = ext
    else:
        out[np.ix_(np.arange(F.num_components), dest, dest)] = ext
    vals = np.fft.ifftn(out, axes=fine.spatial_axes()) * fine.num_points
    return GridFunction(fine, vals.real)


def _restrict_axis(coeffs: np.ndarray, axis: int, coarse: int) -> np.ndarray:
    """Fold one fine FFT axis onto a coarse band, recombining +-N/2."""
    fine = coeffs.shape[axis]
    half = coarse // 2
    k = np.fft.fftfreq(fine, d=1.0 / fine).astype(int)
    keep = np.where((k >= -half + 1) & (k <= half - 1))[0]
    low = np.take(coeffs, keep, axis=axis)
    klow = k[keep]
    order = np.argsort(klow % coarse)
    low = np.take(low, order, axis=axis)
    plus = np.take(coeffs, np.where(k == half)[0], axis=axis)
    minus = np.take(coeffs, np.where(k == -half)[0], axis=axis)
    nyq = plus + minus
    # low is ordered by slot id 0..coarse-1 skipping the Nyquist slot `half`.
    pre = [np.s_[:]] * axis
    out = np.concatenate(
        [low[tuple(pre + [np.s_[:half]])], nyq, low[tuple(pre + [np.s_[half:]])]],
        axis=axis,
    )
    return out


def band_project(f: GridFunction, coarse: GridSpec) -> Spectrum:
    """L2 projection of a finer-grid field onto the coarse spectral band."""
    if f.spec.dim != coarse.dim or f.spec.size % coarse.size:
        raise ValueError("coarse grid must divide the fine grid")
    c = forward_transform(f).coeffs
    for ax in coarse.spatial_axes():
        c = _restrict_axis(c, ax, coarse.size)
    return Spectrum(coarse, c)


def grid_l2_norm(f: GridFunction) -> float:
    """Discrete L2 norm: sqrt of the grid mean of |f|^2 over all components."""
    return float(np.sqrt(np.mean(np.sum(f.values**2, axis=0))))
