"""Certified diffeomorphisms of the torus close to the identity.

A map phi = id + u (u periodic, same dimension as the grid) is accepted as
a diffeomorphism when two conditions hold on a 4x refined grid:

  * orientation: det(d phi) stays above a configurable positive floor;
  * injectivity: sup over points of the operator norm of du is < 1, which
    makes x + u(x) a contraction argument away from collisions.

The second condition is sufficient but not necessary; it is the price of a
certificate that needs no global search.  Composition re-certifies its
output in full.  Newton inversion re-checks orientation and conditioning
but not the contraction bound: the computed map is the two-sided inverse
of a certified bijection (verified through its residual), so injectivity
holds by construction even when sup|d(phi^{-1} - id)| reaches 1.  Such
inverses carry `contraction_certified = False` in their certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import (
    GridFunction,
    GridSpec,
    Spectrum,
    differentiate,
    evaluate,
    forward_transform,
    inverse_transform,
    refine,
)

CERT_REFINE = 4
DEFAULT_MIN_DET = 0.05


class DiffeoError(ValueError):
    """Certificate failure; `reason` is 'orientation', 'injectivity' or
    'conditioning', and `witness` locates an offending refined grid point."""

    def __init__(self, reason: str, witness, value: float):
        self.reason = reason
        self.witness = witness
        self.value = value
        super().__init__(f"{reason} failure: value {value:.6g} at x = {witness}")


class InversionError(RuntimeError):
    """Newton inversion failed to meet its residual target."""

    def __init__(self, worst_residual: float, tol: float):
        self.worst_residual = worst_residual
        self.tol = tol
        super().__init__(
            f"inverse residual {worst_residual:.3e} exceeds {10 * tol:.3e}"
        )


@dataclass(frozen=True)
class Diffeo:
    """phi = id + u with a positive-Jacobian certificate attached."""

    displacement: Spectrum
    disp_values: np.ndarray  # (n, *shape)
    jacobian: np.ndarray  # d phi = I + du at grid points, (n, n, *shape)
    det_values: np.ndarray  # det(d phi) at grid points, (*shape)
    min_det: float  # over the refined certificate grid
    max_grad: float  # sup of |du|_op over the refined grid
    min_det_floor: float
    contraction_certified: bool = True  # False only for by-construction inverses

    @property
    def spec(self) -> GridSpec:
        return self.displacement.spec

    @property
    def dim(self) -> int:
        return self.spec.dim

    @property
    def mean_displacement(self) -> np.ndarray:
        """Mean of u along each axis (the k=0 Fourier coefficient)."""
        zero = (slice(None),) + (0,) * self.dim
        return self.displacement.coeffs[zero].real.copy()

    def point_images(self) -> np.ndarray:
        """phi evaluated at all grid points, shape (num_points, n)."""
        pts = self.spec.points()
        return pts + self.disp_values.reshape(self.dim, -1).T

    def __call__(self, points: np.ndarray) -> np.ndarray:
        """phi at arbitrary points (P, n) -> (P, n), lifted (no wrapping)."""
        pts = np.asarray(points, dtype=np.float64)
        squeeze = pts.ndim == 1 and self.dim == 1
        if squeeze:
            pts = pts[:, None]
        out = pts + evaluate(self.displacement, pts).T
        return out[:, 0] if squeeze else out


def _displacement_gradient(u: Spectrum) -> Spectrum:
    """du as a stacked spectrum with n*n components, row-major (i, j)."""
    n = u.spec.dim
    rows = []
    for i in range(n):
        comp = Spectrum(u.spec, u.coeffs[i : i + 1])
        for j in range(n):
            rows.append(differentiate(comp, j).coeffs[0])
    return Spectrum(u.spec, np.stack(rows))


def _det_and_opnorm(grad_vals: np.ndarray, dim: int):
    """det(I + du) and |du|_op from stacked gradient values (n*n, ...)."""
    if dim == 1:
        du = grad_vals[0]
        return 1.0 + du, np.abs(du)
    a, b, c, d = grad_vals  # du rows: (d1u1, d2u1, d1u2, d2u2)
    det = (1.0 + a) * (1.0 + d) - b * c
    frob2 = a * a + b * b + c * c + d * d
    det_du = a * d - b * c
    gap = np.sqrt(np.maximum(frob2 * frob2 - 4.0 * det_du * det_du, 0.0))
    opnorm = np.sqrt(np.maximum((frob2 + gap) / 2.0, 0.0))
    return det, opnorm


def make_diffeo(
    displacement: Spectrum,
    min_det_floor: float = DEFAULT_MIN_DET,
    refine_factor: int = CERT_REFINE,
    check_contraction: bool = True,
) -> Diffeo:
    """Certify id + u and build the Diffeo, or raise DiffeoError.

    `check_contraction=False` skips the sup|du|_op < 1 rejection (used by
    invert, whose output is injective by construction); the measured bound
    is still recorded and the certificate flagged.
    """
    spec = displacement.spec
    if displacement.num_components != spec.dim:
        raise ValueError(
            f"displacement needs {spec.dim} components, got "
            f"{displacement.num_components}"
        )
    if min_det_floor <= 0:
        raise ValueError("min_det_floor must be positive")
    grad = _displacement_gradient(displacement)
    fine = refine(grad, refine_factor)
    det, opnorm = _det_and_opnorm(fine.values, spec.dim)
    fine_pts = fine.spec.points()

    idx = int(np.argmin(det))
    min_det = float(det.reshape(-1)[idx])
    if min_det <= 0.0:
        raise DiffeoError("orientation", fine_pts[idx], min_det)
    gidx = int(np.argmax(opnorm))
    max_grad = float(opnorm.reshape(-1)[gidx])
    if check_contraction and max_grad >= 1.0:
        raise DiffeoError("injectivity", fine_pts[gidx], max_grad)
    if min_det < min_det_floor:
        raise DiffeoError("conditioning", fine_pts[idx], min_det)

    disp_values = inverse_transform(displacement).values
    jac_vals = inverse_transform(grad).values
    n = spec.dim
    jac = jac_vals.reshape((n, n) + spec.shape).copy()
    for i in range(n):
        jac[i, i] += 1.0
    det_grid, _ = _det_and_opnorm(jac_vals.reshape((n * n,) + spec.shape), n)
    return Diffeo(
        displacement,
        disp_values,
        jac,
        det_grid,
        min_det,
        max_grad,
        min_det_floor,
        contraction_certified=max_grad < 1.0,
    )


def identity_diffeo(spec: GridSpec) -> Diffeo:
    zero = Spectrum(spec, np.zeros((spec.dim,) + spec.shape, dtype=np.complex128))
    return make_diffeo(zero)


def compose_function(f: Spectrum, phi: Diffeo) -> GridFunction:
    """Pullback f o phi sampled on phi's grid (exact trigonometric f)."""
    if f.spec.dim != phi.dim:
        raise ValueError("dimension mismatch between field and diffeomorphism")
    vals = evaluate(f, phi.point_images())
    return GridFunction(phi.spec, vals.reshape((f.num_components,) + phi.spec.shape))


def compose_diffeo(outer: Diffeo, inner: Diffeo) -> Diffeo:
    """outer o inner, re-certified.  Displacements add as
    w = u_outer o (id + u_inner) + u_inner."""
    if outer.spec != inner.spec:
        raise ValueError("diffeomorphisms live on different grids")
    pulled = compose_function(outer.displacement, inner)
    w = pulled.values + inner.disp_values
    return make_diffeo(
        forward_transform(GridFunction(outer.spec, w)),
        min_det_floor=min(outer.min_det_floor, inner.min_det_floor),
    )


def _solve_newton_step(jac_pts: np.ndarray, r: np.ndarray, dim: int) -> np.ndarray:
    """Solve (I + du)(x) step = r pointwise; jac_pts is (n*n, P)."""
    if dim == 1:
        return r / (1.0 + jac_pts[0])[None]
    a, b, c, d = jac_pts
    a, d = 1.0 + a, 1.0 + d
    det = a * d - b * c
    s0 = (d * r[0] - b * r[1]) / det
    s1 = (a * r[1] - c * r[0]) / det
    return np.stack([s0, s1])


def invert(
    phi: Diffeo,
    tol: float = 1e-12,
    max_iter: int = 50,
    max_halvings: int = 5,
) -> Diffeo:
    """Pointwise Newton inversion of phi on its grid, re-certified.

    Solves phi(x) = y for every grid point y with x0 = y, damping steps
    (up to max_halvings per sweep) whenever the residual would grow.  The
    final map id + v interpolates x - y and satisfies
    max |phi(phi^{-1}(y)) - y| < 10*tol, or InversionError is raised.
    Re-certification checks orientation and conditioning only; the result
    is injective by construction, so a contraction bound >= 1 is recorded
    rather than rejected (contraction_certified turns False).
    """
    spec = phi.spec
    n = spec.dim
    y = spec.points().T  # (n, P)
    grad = _displacement_gradient(phi.displacement)

    def residual(x):
        return x + evaluate(phi.displacement, x.T) - y

    x = y.copy()
    r = residual(x)
    rnorm = np.sqrt(np.sum(r * r, axis=0))
    for _ in range(max_iter):
        jac_pts = evaluate(grad, x.T)
        step = _solve_newton_step(jac_pts, r, n)
        x_new = x - step
        r_new = residual(x_new)
        rn_new = np.sqrt(np.sum(r_new * r_new, axis=0))
        for _ in range(max_halvings):
            bad = rn_new > np.maximum(rnorm, 10.0 * tol)
            if not np.any(bad):
                break
            step = np.where(bad[None], step / 2.0, step)
            x_new = x - step
            r_new = residual(x_new)
            rn_new = np.sqrt(np.sum(r_new * r_new, axis=0))
        x, r, rnorm = x_new, r_new, rn_new
        if np.max(np.sqrt(np.sum(step * step, axis=0))) < tol:
            break
    worst = float(np.max(rnorm))
    if worst >= 10.0 * tol:
        raise InversionError(worst, tol)
    v = (x - y).reshape((n,) + spec.shape)
    return make_diffeo(
        forward_transform(GridFunction(spec, v)),
        min_det_floor=phi.min_det_floor,
        check_contraction=False,
    )


def chain_rule_residual(f: Spectrum, phi: Diffeo) -> float:
    """Max grid defect of d(f o phi) = (df o phi) . d phi.

    The left side differentiates the sampled composite spectrally; the
    right side pairs exact derivative evaluations with the stored Jacobian
    pointwise, so the defect measures pure aliasing.
    """
    comp = forward_transform(compose_function(f, phi))
    d = f.num_components
    n = phi.dim
    stacked = Spectrum(
        f.spec,
        np.concatenate(
            [
                differentiate(Spectrum(f.spec, f.coeffs[c : c + 1]), j).coeffs
                for c in range(d)
                for j in range(n)
            ]
        ),
    )
    df_at_phi = evaluate(stacked, phi.point_images()).reshape((d, n) + phi.spec.shape)
    worst = 0.0
    for axis in range(n):
        lhs = inverse_transform(differentiate(comp, axis)).values
        rhs = np.einsum("cj...,j...->c...", df_at_phi, phi.jacobian[:, axis])
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def inverse_derivative_residual(phi: Diffeo, psi: Diffeo | None = None) -> float:
    """Max grid defect of d(phi^{-1} - id) = ((d phi)^{-1} - I) o phi^{-1}."""
    if psi is None:
        psi = invert(phi)
    n = phi.dim
    spec = phi.spec
    lhs = inverse_transform(_displacement_gradient(psi.displacement)).values
    jac = phi.jacobian.reshape(n, n, -1)
    if n == 1:
        binv = 1.0 / jac[0, 0] - 1.0
        b_entries = binv[None]
    else:
        a, b, c, d = jac[0, 0], jac[0, 1], jac[1, 0], jac[1, 1]
        det = a * d - b * c
        b_entries = np.stack(
            [d / det - 1.0, -b / det, -c / det, a / det - 1.0]
        )
    b_spec = forward_transform(
        GridFunction(spec, b_entries.reshape((n * n,) + spec.shape))
    )
    rhs = evaluate(b_spec, psi.point_images())
    return float(np.max(np.abs(lhs.reshape(n * n, -1) - rhs)))
