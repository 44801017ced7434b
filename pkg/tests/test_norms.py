"""Sobolev, derivative-sum, sup, and Slobodeckij norms."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torusdiff.grid import (
    GridFunction,
    GridSpec,
    Spectrum,
    forward_transform,
    inverse_transform,
    random_field,
)
from torusdiff.norms import (
    SobolevIndex,
    cr_norm,
    embedding_constant,
    holder_quotient_sup,
    hs_norm,
    hs_norm_derivative,
    multi_indices,
    norm_equivalence_constant,
    slobodeckij_seminorm,
    sobolev_weight,
)

TWO_PI = 2.0 * np.pi


def single_mode(spec, k, amp=1.0):
    x = spec.axis_coordinates()
    return forward_transform(GridFunction(spec, (amp * np.sin(TWO_PI * k * x))[None]))


# ---------------------------------------------------------------------------
# index bookkeeping


def test_sobolev_index_thresholds():
    assert SobolevIndex(1.0).embeds_in_c0(1)
    assert not SobolevIndex(0.5).embeds_in_c0(1)
    assert SobolevIndex(2.0).composition_regular(1)
    assert not SobolevIndex(1.5).composition_regular(1)
    assert not SobolevIndex(2.0).composition_regular(2)


def test_multi_indices_counts():
    assert multi_indices(1, 2) == [(0,), (1,), (2,)]
    idx2 = multi_indices(2, 2)
    assert len(idx2) == 6  # (0,0),(0,1),(1,0),(1,1),(0,2),(2,0)
    assert all(sum(a) <= 2 for a in idx2)


# ---------------------------------------------------------------------------
# Fourier norm


def test_s0_norm_is_l2():
    spec = GridSpec(1, 64)
    F = random_field(spec, 2.0, 1)
    f = inverse_transform(F)
    assert hs_norm(F, 0.0) == pytest.approx(
        np.sqrt(np.mean(f.values**2)), rel=1e-12
    )


def test_hs_norm_single_mode_closed_form():
    spec = GridSpec(1, 64)
    F = single_mode(spec, 3, amp=2.0)
    w = 1.0 + (TWO_PI * 3) ** 2
    # |sin| carries L2 mass 1/2, so the norm is amp * w^{s/2} / sqrt(2)
    assert hs_norm(F, 2.0) == pytest.approx(2.0 * w / np.sqrt(2.0), rel=1e-12)


def test_hs_norm_monotone_in_s():
    spec = GridSpec(1, 64)
    F = random_field(spec, 2.0, 5)
    norms = [hs_norm(F, s) for s in (0.0, 0.5, 1.0, 2.0)]
    assert all(a < b for a, b in zip(norms, norms[1:]))


def test_sobolev_weight_negative_exponent():
    spec = GridSpec(1, 16)
    w = sobolev_weight(spec, -1.0)
    assert w.shape == (16,)
    assert np.all(w <= 1.0)
    assert w[0] == 1.0


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 5000))
def test_triangle_inequality(seed):
    spec = GridSpec(1, 32)
    F = random_field(spec, 1.0, seed)
    G = random_field(spec, 1.0, seed + 9999)
    s = 1.5
    lhs = hs_norm(Spectrum(spec, F.coeffs + G.coeffs), s)
    assert lhs <= hs_norm(F, s) + hs_norm(G, s) + 1e-10


# ---------------------------------------------------------------------------
# derivative-sum norm equivalence


def test_derivative_norm_equals_fourier_at_s1():
    spec = GridSpec(1, 64)
    for seed in range(10):
        F = random_field(spec, 1.0, seed)
        ratio = hs_norm(F, 1.0) / hs_norm_derivative(inverse_transform(F), 1)
        assert abs(ratio - 1.0) < 1e-10


def test_derivative_norm_bracket_at_s2():
    spec = GridSpec(1, 64)
    bound = norm_equivalence_constant(2, 1)
    assert bound == pytest.approx(np.sqrt(2.0))
    for seed in range(10):
        F = random_field(spec, 2.0, seed)
        ratio = hs_norm(F, 2.0) / hs_norm_derivative(inverse_transform(F), 2)
        assert 1.0 - 1e-12 <= ratio <= bound + 1e-12


def test_derivative_norm_single_mode_oracle():
    """For a pure sine at frequency k the s=2 ratio has a closed form:
    (1+w)^2 / (1 + w + w^2) with w = (2 pi k)^2."""
    spec = GridSpec(1, 64)
    F = single_mode(spec, 1)
    w = (TWO_PI) ** 2
    expected = np.sqrt((1 + w) ** 2 / (1 + w + w**2))
    ratio = hs_norm(F, 2.0) / hs_norm_derivative(inverse_transform(F), 2)
    assert ratio == pytest.approx(expected, rel=1e-12)


def test_norm_equivalence_constant_values():
    assert norm_equivalence_constant(1, 1) == pytest.approx(1.0)
    assert norm_equivalence_constant(2, 2) == pytest.approx(np.sqrt(2.0))
    assert norm_equivalence_constant(3, 1) == pytest.approx(np.sqrt(3.0))


@pytest.mark.parametrize("dim", [1, 2])
@pytest.mark.parametrize("s", [1, 2])
def test_inductive_norm_decomposition(dim, s):
    """|f|_0 + sum_i |d_i f|_{s-1} is equivalent to |f|_s with constants
    [1, sqrt(n+1)]; holds for s in {1, 2} (the upper end is Cauchy-Schwarz
    over the n+1 summands, the lower end per-mode plus a cross term)."""
    from torusdiff.grid import differentiate

    spec = GridSpec(dim, 32 if dim == 1 else 16)
    hi = np.sqrt(dim + 1.0)
    for seed in range(8):
        F = random_field(spec, float(s), seed)
        total = hs_norm(F, 0.0)
        for axis in range(dim):
            total += hs_norm(differentiate(F, axis), float(s - 1))
        ratio = total / hs_norm(F, float(s))
        assert 1.0 - 1e-9 <= ratio <= hi + 1e-9


# ---------------------------------------------------------------------------
# sup norms and embedding


def test_cr_norm_of_sine():
    spec = GridSpec(1, 128)
    f = inverse_transform(single_mode(spec, 1))
    assert cr_norm(f, 0) == pytest.approx(1.0, abs=1e-6)
    assert cr_norm(f, 1) == pytest.approx(TWO_PI, abs=1e-4)


def test_embedding_bound_holds():
    spec = GridSpec(1, 64)
    K = embedding_constant(spec, 1.0)
    for seed in range(20):
        F = random_field(spec, 1.0, seed)
        assert cr_norm(inverse_transform(F), 0) <= K * hs_norm(F, 1.0)


def test_embedding_constant_requires_supercritical():
    with pytest.raises(ValueError):
        embedding_constant(GridSpec(1, 32), 0.5)
    with pytest.raises(ValueError):
        embedding_constant(GridSpec(2, 16), 1.0)


# ---------------------------------------------------------------------------
# Slobodeckij seminorm


def test_slobodeckij_constant_vanishes():
    spec = GridSpec(1, 64)
    f = GridFunction(spec, np.full((1, 64), 3.0))
    assert slobodeckij_seminorm(f, 0.5) == 0.0


def test_slobodeckij_refinement_stable():
    lam = 0.5
    vals = {}
    for n in (256, 1024):
        spec = GridSpec(1, n)
        x = spec.axis_coordinates()
        vals[n] = slobodeckij_seminorm(GridFunction(spec, np.sin(TWO_PI * x)[None]), lam)
    assert abs(vals[256] - vals[1024]) / vals[1024] < 0.02


def test_slobodeckij_rejects_bad_lambda():
    spec = GridSpec(1, 32)
    f = GridFunction(spec, np.zeros((1, 32)))
    for lam in (0.0, 1.0, -0.5):
        with pytest.raises(ValueError):
            slobodeckij_seminorm(f, lam)
    with pytest.raises(ValueError):
        slobodeckij_seminorm(GridFunction(GridSpec(2, 16), np.zeros((1, 16, 16))), 0.5)


def test_holder_quotient_of_sine():
    # the lam-Holder quotient of sin is attained at small separations
    spec = GridSpec(1, 256)
    x = spec.axis_coordinates()
    f = GridFunction(spec, np.sin(TWO_PI * x)[None])
    q = holder_quotient_sup(f, 0.5)
    h = spec.spacing
    local = TWO_PI * h / h**0.5  # slope-limited nearest-neighbour quotient
    assert q >= local * 0.9
    assert q < 2.0 * TWO_PI
