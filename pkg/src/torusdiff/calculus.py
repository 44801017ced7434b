"""Calculus of the composition map (u, phi) -> u o phi.

The composition map is differentiable as a map of Sobolev fields only
after giving up derivatives of u; this module makes that quantitative.
It provides the multilinear coefficients eta_k of the Taylor expansion

    (u + du) o (phi + dphi) = sum_{k<=r} eta_k / k!  +  R1 + R2,

the two integral remainders (Gauss-Legendre in the path parameter, with
every intermediate map phi + t*dphi certified), the differential of the
inversion map, and probes that measure remainder decay orders, Lipschitz
constants of right translation, and the one-derivative loss of left
translation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import multiply
from .diffeo import Diffeo, compose_function, invert, make_diffeo
from .grid import (
    GridFunction,
    Spectrum,
    differentiate_multi,
    evaluate,
    forward_transform,
    inverse_transform,
    random_field,
)
from .norms import hs_norm

GL_NODES = 16


def _gauss_legendre_01(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(nodes)
    return (x + 1.0) / 2.0, w / 2.0


def _exact_indices(dim: int, order: int) -> list[tuple[int, ...]]:
    if dim == 1:
        return [(order,)]
    return [(a, order - a) for a in range(order + 1)]


def _monomial(dphi: GridFunction, alpha: tuple[int, ...]) -> GridFunction:
    """dphi^alpha = prod_i dphi_i^{alpha_i} with dealiased products."""
    spec = dphi.spec
    out = GridFunction(spec, np.ones((1,) + spec.shape))
    for i, power in enumerate(alpha):
        comp = GridFunction(spec, dphi.values[i : i + 1])
        for _ in range(power):
            out = multiply(out, comp)
    return out


def path_diffeo(phi: Diffeo, dphi: GridFunction, t: float) -> Diffeo:
    """Certified diffeomorphism id + (u_phi + t * dphi)."""
    vals = phi.disp_values + t * dphi.values
    return make_diffeo(
        forward_transform(GridFunction(phi.spec, vals)),
        min_det_floor=phi.min_det_floor,
    )


def eta_k(
    u: Spectrum,
    phi: Diffeo,
    du: Spectrum | None,
    dphi: GridFunction | None,
    k: int,
) -> GridFunction:
    """k-th Taylor coefficient of the composition map at (u, phi).

    eta_k = sum_{|a|=k} (k!/a!) (d^a u o phi) dphi^a
          + sum_{|a|=k-1} (k!/a!) (d^a du o phi) dphi^a.

    Either increment may be None (treated as zero).  Returns the k-th
    derivative as a field; divide by k! for the Taylor term.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    spec = phi.spec
    n = spec.dim
    acc = np.zeros((u.num_components,) + spec.shape)

    def accumulate(F: Spectrum, order: int):
        for alpha in _exact_indices(n, order):
            coeff = math.factorial(k) / math.prod(math.factorial(a) for a in alpha)
            comp = compose_function(differentiate_multi(F, alpha), phi)
            if order == 0:
                acc[...] += coeff * comp.values
            elif dphi is not None:
                acc[...] += coeff * multiply(comp, _monomial(dphi, alpha)).values

    accumulate(u, k)
    if du is not None and k >= 1:
        accumulate(du, k - 1)
    return GridFunction(spec, acc)


def remainder_r1(
    u: Spectrum,
    phi: Diffeo,
    dphi: GridFunction,
    r: int,
    nodes: int = GL_NODES,
) -> GridFunction:
    """Integral remainder carrying the top derivatives of the base field:

    R1 = sum_{|a|=r} (r/a!) int_0^1 (1-t)^{r-1}
         [(d^a u)(phi + t dphi) - (d^a u)(phi)] dphi^a dt.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    spec = phi.spec
    ts, ws = _gauss_legendre_01(nodes)
    path = [path_diffeo(phi, dphi, t) for t in ts]
    acc = np.zeros((u.num_components,) + spec.shape)
    for alpha in _exact_indices(spec.dim, r):
        coeff = r / math.prod(math.factorial(a) for a in alpha)
        da_u = differentiate_multi(u, alpha)
        base = compose_function(da_u, phi).values
        mono = _monomial(dphi, alpha)
        for t, w, phi_t in zip(ts, ws, path):
            bracket = GridFunction(spec, compose_function(da_u, phi_t).values - base)
            acc += (
                coeff
                * w
                * (1.0 - t) ** (r - 1)
                * multiply(bracket, mono).values
            )
    return GridFunction(spec, acc)


def remainder_r2(
    du: Spectrum,
    phi: Diffeo,
    dphi: GridFunction,
    r: int,
    nodes: int = GL_NODES,
) -> GridFunction:
    """Integral remainder carrying the increment field:

    R2 = sum_{|a|=r} (r/a!) int_0^1 (1-t)^{r-1}
         (d^a du)(phi + t dphi) dphi^a dt.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    spec = phi.spec
    ts, ws = _gauss_legendre_01(nodes)
    path = [path_diffeo(phi, dphi, t) for t in ts]
    acc = np.zeros((du.num_components,) + spec.shape)
    for alpha in _exact_indices(spec.dim, r):
        coeff = r / math.prod(math.factorial(a) for a in alpha)
        da_du = differentiate_multi(du, alpha)
        mono = _monomial(dphi, alpha)
        for t, w, phi_t in zip(ts, ws, path):
            term = compose_function(da_du, phi_t)
            acc += coeff * w * (1.0 - t) ** (r - 1) * multiply(term, mono).values
    return GridFunction(spec, acc)


def taylor_defect(
    u: Spectrum,
    phi: Diffeo,
    du: Spectrum,
    dphi: GridFunction,
    r: int,
) -> float:
    """Max grid defect of the order-r expansion with both remainders."""
    spec = phi.spec
    perturbed = path_diffeo(phi, dphi, 1.0)
    total = Spectrum(spec, u.coeffs + du.coeffs)
    lhs = compose_function(total, perturbed).values
    rhs = compose_function(u, phi).values.copy()  # k = 0 term
    for k in range(1, r + 1):
        rhs += eta_k(u, phi, du, dphi, k).values / math.factorial(k)
    rhs += remainder_r1(u, phi, dphi, r).values
    rhs += remainder_r2(du, phi, dphi, r).values
    return float(np.max(np.abs(lhs - rhs)))


@dataclass(frozen=True)
class TaylorProbe:
    """Remainder norms along a scale ladder and the fitted decay order."""

    order: int
    scales: tuple[float, ...]
    norms: tuple[float, ...]
    slope: float | None
    monotone: bool
    degenerate: bool

    def as_dict(self) -> dict:
        return {
            "order": self.order,
            "scales": list(self.scales),
            "norms": list(self.norms),
            "slope": self.slope,
            "monotone": self.monotone,
            "degenerate": self.degenerate,
        }


DEFAULT_SCALES = tuple(2.0**-m for m in range(1, 9))


def remainder_order_probe(
    u: Spectrum,
    phi: Diffeo,
    du_dir: Spectrum,
    dphi_dir: GridFunction,
    r: int,
    s: float = 2.0,
    scales: tuple[float, ...] = DEFAULT_SCALES,
) -> TaylorProbe:
    """Fit the decay order of ||R1 + R2||_s along a geometric scale ladder.

    For directions scaled by eps the combined remainder should vanish like
    eps^{r+1}; the probe reports the fitted log-log slope.  Identically
    zero directions yield a degenerate (vacuously passing) probe.
    """
    norms = []
    for eps in scales:
        dphi = GridFunction(phi.spec, eps * dphi_dir.values)
        du = Spectrum(phi.spec, eps * du_dir.coeffs)
        rem = remainder_r1(u, phi, dphi, r).values + remainder_r2(
            du, phi, dphi, r
        ).values
        norms.append(hs_norm(forward_transform(GridFunction(phi.spec, rem)), s))
    norms_t = tuple(float(v) for v in norms)
    if max(norms_t) < 1e-14:
        return TaylorProbe(r, scales, norms_t, None, True, True)
    monotone = all(a > b for a, b in zip(norms_t, norms_t[1:]))
    slope = float(np.polyfit(np.log(scales), np.log(norms_t), 1)[0])
    return TaylorProbe(r, scales, norms_t, slope, monotone, False)


def inv_differential(phi: Diffeo, dphi: GridFunction, psi: Diffeo | None = None) -> GridFunction:
    """Derivative of the inversion map phi -> phi^{-1} applied to dphi:

        d inv(phi) dphi = -[(d phi)^{-1} dphi] o phi^{-1}.
    """
    if psi is None:
        psi = invert(phi)
    n = phi.dim
    spec = phi.spec
    jac = phi.jacobian.reshape(n, n, -1)
    dv = dphi.values.reshape(n, -1)
    if n == 1:
        solved = dv / jac[0, 0]
    else:
        a, b, c, d = jac[0, 0], jac[0, 1], jac[1, 0], jac[1, 1]
        det = a * d - b * c
        solved = np.stack(
            [(d * dv[0] - b * dv[1]) / det, (a * dv[1] - c * dv[0]) / det]
        )
    b_spec = forward_transform(GridFunction(spec, solved.reshape((n,) + spec.shape)))
    pulled = evaluate(b_spec, psi.point_images())
    return GridFunction(spec, -pulled.reshape((n,) + spec.shape))


def inv_differential_fd_error(
    phi: Diffeo, dphi: GridFunction, eps: float, psi: Diffeo | None = None
) -> float:
    """Sup distance between d inv(phi) dphi and a centred difference of the
    inversion map with step eps; decays like eps^2 for smooth data."""
    formula = inv_differential(phi, dphi, psi=psi)
    plus = invert(path_diffeo(phi, dphi, eps))
    minus = invert(path_diffeo(phi, dphi, -eps))
    fd = (plus.disp_values - minus.disp_values) / (2.0 * eps)
    return float(np.max(np.abs(formula.values - fd)))


def right_translation_quotients(
    f: Spectrum,
    phi0: Diffeo,
    radius: float,
    trials: int,
    seed: int,
    s: float,
) -> list[float]:
    """Lipschitz quotients ||f o phi - f o phi0||_s / (||f||_{s+1} ||phi - phi0||_s)
    over random certified phi in an H^s ball of the given radius."""
    spec = phi0.spec
    base = compose_function(f, phi0)
    fnorm = hs_norm(f, s + 1.0)
    out = []
    for trial in range(trials):
        w = random_field(spec, s, seed + 1000 * trial, components=spec.dim)
        scale = radius / hs_norm(w, s)
        step = inverse_transform(Spectrum(spec, scale * w.coeffs))
        phi = path_diffeo(phi0, step, 1.0)
        diff = forward_transform(
            GridFunction(spec, compose_function(f, phi).values - base.values)
        )
        out.append(float(hs_norm(diff, s) / (fnorm * radius)))
    return out


def loss_of_derivative_probe(
    phi: Diffeo,
    dphi_dir: GridFunction,
    s: float,
    octaves: int = 5,
    eps_ladder: tuple[float, ...] = (1e-2, 5e-3, 2.5e-3),
) -> dict:
    """Left-translation roughness against mode frequency.

    For unit-H^s single-mode fields psi_j at frequency 2^j the quotient

        L_j = sup_eps ||psi_j o phi_eps - psi_j o phi||_s / ||phi_eps - phi||_s

    grows like 2^j (one full derivative is lost), while the right-translation
    quotient ||psi_j o phi||_s / ||psi_j||_s stays bounded.  Returns the per-
    octave quotients and their consecutive growth factors.
    """
    spec = phi.spec
    if spec.dim != 1:
        raise ValueError("the octave probe is built on dim == 1 grids")
    dir_norm = hs_norm(forward_transform(dphi_dir), s)
    left, right = [], []
    path = [path_diffeo(phi, dphi_dir, eps) for eps in eps_ladder]
    for j in range(1, octaves + 1):
        k = 2**j
        if 2 * k > spec.size // 2:
            raise ValueError(f"octave {j} unresolvable at size {spec.size}")
        weight = (1.0 + (2.0 * np.pi * k) ** 2) ** (s / 2.0)
        coeffs = np.zeros((1,) + spec.shape, dtype=np.complex128)
        amp = np.sqrt(2.0) / weight  # unit H^s norm for the sine mode
        coeffs[0, k] = amp / (2.0 * 1j)
        coeffs[0, -k] = -amp / (2.0 * 1j)
        psi_j = Spectrum(spec, coeffs)
        base = compose_function(psi_j, phi)
        quot = 0.0
        for eps, phi_eps in zip(eps_ladder, path):
            diff = forward_transform(
                GridFunction(spec, compose_function(psi_j, phi_eps).values - base.values)
            )
            quot = max(quot, hs_norm(diff, s) / (eps * dir_norm))
        left.append(float(quot))
        right.append(float(hs_norm(forward_transform(base), s)))
    growth = [b / a for a, b in zip(left, left[1:])]
    return {
        "octaves": list(range(1, octaves + 1)),
        "left_quotients": left,
        "growth_factors": growth,
        "right_quotients": right,
    }
