"""Weight optimization, certificates, and the explicit dilation."""

import numpy as np
import pytest

from framescale.frames import FramePair, bessel_and_frame_bounds, pair_operator
from framescale.instances import (
    canonical_dual_pair,
    gaussian_pair,
    mangle,
    mangling_scalars,
    onb_union_pair,
)
from framescale.linalg import top_singular_triplet
from framescale.multiplier import (
    amplified_input_norm,
    assemble_block,
    mask_matrix,
)
from framescale.rescale import (
    CbBracket,
    balance,
    bessel_pair_objective,
    build_dilation,
    dilation_reconstruct,
    extract_scaling,
    optimize,
    subgradient,
)

from conftest import haar_unitary, random_complex


def test_objective_matches_frame_bounds_of_scaled_families():
    rng = np.random.default_rng(70)
    pair = gaussian_pair(rng, 5, 3)
    t = rng.uniform(-1.0, 1.0, 5)
    f, g = bessel_pair_objective(pair, t)
    alpha = np.exp(0.5 * t)
    fx = bessel_and_frame_bounds(alpha[:, None] * pair.xs).upper
    gy = bessel_and_frame_bounds(pair.ys / alpha[:, None]).upper
    assert abs(f - fx) <= 1e-9 * (1.0 + f)
    assert abs(g - gy) <= 1e-9 * (1.0 + g)


def test_objective_homogeneity_under_common_shift():
    rng = np.random.default_rng(71)
    pair = gaussian_pair(rng, 4, 2)
    t = rng.uniform(-1.0, 1.0, 4)
    f, g = bessel_pair_objective(pair, t)
    c = 0.7
    fc, gc = bessel_pair_objective(pair, t + c)
    assert abs(fc - np.exp(c) * f) <= 1e-10 * (1.0 + fc)
    assert abs(gc - np.exp(-c) * g) <= 1e-10 * (1.0 + gc)


def test_balance_closed_form_and_fixed_point():
    rng = np.random.default_rng(72)
    pair = gaussian_pair(rng, 4, 2)
    t = rng.uniform(-1.0, 1.0, 4)
    f, g = bessel_pair_objective(pair, t)
    shifted = balance(pair, t)
    assert np.max(np.abs((shifted - t) - 0.5 * np.log(g / f))) <= 1e-12
    f2, g2 = bessel_pair_objective(pair, shifted)
    assert abs(f2 - g2) <= 1e-10 * (f2 + g2)
    assert abs(f2 - np.sqrt(f * g)) <= 1e-10 * (1.0 + f2)
    again = balance(pair, shifted)
    assert np.max(np.abs(again - shifted)) <= 1e-10


def _fd_gradient(pair, t, h=1e-5):
    out = np.zeros_like(t)
    for k in range(t.size):
        e = np.zeros_like(t)
        e[k] = h
        fp = max(bessel_pair_objective(pair, t + e))
        fm = max(bessel_pair_objective(pair, t - e))
        out[k] = (fp - fm) / (2.0 * h)
    return out


def _smooth_point(rng, pair, spread=1.2):
    """Draw t where both top eigenvalues are simple and the branches split."""
    while True:
        t = rng.uniform(-spread, spread, pair.n)
        from framescale.rescale import _rank_one_stacks
        from framescale.linalg import jacobi_eigh
        xx, yy = _rank_one_stacks(pair)
        wf, _ = jacobi_eigh(np.tensordot(np.exp(t), xx, axes=1))
        wg, _ = jacobi_eigh(np.tensordot(np.exp(-t), yy, axes=1))
        f, g = wf[-1], wg[-1]
        gap_f = wf[-1] - wf[-2] if pair.dim > 1 else 1.0
        gap_g = wg[-1] - wg[-2] if pair.dim > 1 else 1.0
        if gap_f >= 1e-4 and gap_g >= 1e-4 and abs(f - g) >= 1e-3 * max(f, g):
            return t


def test_subgradient_matches_central_differences_at_smooth_points():
    rng = np.random.default_rng(73)
    for _ in range(10):
        n = int(rng.integers(2, 6))
        d = int(rng.integers(1, 4))
        pair = gaussian_pair(rng, n, d)
        t = _smooth_point(rng, pair)
        sub = subgradient(pair, t)
        fd = _fd_gradient(pair, t)
        f, g = bessel_pair_objective(pair, t)
        assert np.max(np.abs(sub - fd)) <= 1e-4 * (1.0 + max(f, g))


def test_subgradient_swap_symmetry():
    rng = np.random.default_rng(74)
    pair = gaussian_pair(rng, 4, 2)
    swapped = FramePair(pair.ys, pair.xs)
    t = rng.uniform(-1.0, 1.0, 4)
    a = subgradient(pair, t)
    b = subgradient(swapped, -t)
    assert np.max(np.abs(a + b)) <= 1e-10 * (1.0 + np.max(np.abs(a)))


def test_subgradient_scalar_case_closed_form():
    pair = FramePair(np.array([[2.0], [1.0]], dtype=complex),
                     np.array([[1.0], [1.0]], dtype=complex))
    t = np.array([0.0, 0.0])
    # f = 5 > g = 2, so the gradient is the f branch: e^{t_k} |x_k|^2
    sub = subgradient(pair, t)
    assert np.max(np.abs(sub - np.array([4.0, 1.0]))) <= 1e-12


def test_optimize_on_orthonormal_pair_is_exact():
    rng = np.random.default_rng(75)
    u = haar_unitary(rng, 3)
    pair = FramePair(u.T, u.T)
    br = optimize(pair)
    assert abs(br.m_upper - 1.0) <= 1e-9
    assert np.max(np.abs(br.log_weights)) <= 1e-9
    assert br.m_lower <= br.m_upper + 1e-8
    assert br.m_lower >= 1.0 - 1e-9


def test_optimize_scalar_pair_closed_form():
    pair = FramePair(np.array([[10.0], [0.1]], dtype=complex),
                     np.array([[1.0], [1.0]], dtype=complex))
    br = optimize(pair)
    assert abs(br.m_upper - 10.1) <= 1e-6 * 10.1
    sc = extract_scaling(pair, br.log_weights)
    ratio = sc.alpha / sc.alpha[0]
    expected = np.array([1.0, np.sqrt(10.0) / np.sqrt(0.1)])
    assert np.max(np.abs(ratio - expected) / expected) <= 1e-4


def test_optimize_invariant_under_diagonal_reparameterization():
    rng = np.random.default_rng(76)
    pair = canonical_dual_pair(rng, 4, 2)
    scaled = mangle(pair, mangling_scalars(rng, 4, (1e-3, 1e3)))
    a = optimize(pair)
    b = optimize(scaled)
    assert abs(a.m_upper - b.m_upper) <= 1e-6 * (1.0 + a.m_upper)


def test_optimize_invariant_under_common_unitary():
    rng = np.random.default_rng(77)
    pair = gaussian_pair(rng, 4, 3)
    u = haar_unitary(rng, 3)
    rotated = FramePair(pair.xs @ u.T, pair.ys @ u.T)
    a = optimize(pair)
    b = optimize(rotated)
    assert abs(a.m_upper - b.m_upper) <= 1e-9 * (1.0 + a.m_upper)


def test_bracket_fields_consistent():
    rng = np.random.default_rng(78)
    pair = gaussian_pair(rng, 4, 2)
    br = optimize(pair)
    assert br.m_lower <= br.m_upper + 1e-8
    assert abs(max(br.f, br.g) - br.m_upper) <= 1e-10 * (1.0 + br.m_upper)
    assert abs(br.f - br.g) <= 1e-8 * (br.f + br.g)
    with pytest.raises(ValueError):
        CbBracket(2.0, 1.0, np.zeros(4), 1.0, 1.0)


def test_certificate_valid_at_arbitrary_weights():
    # any weights give a bound sqrt(f g) on every amplified norm
    rng = np.random.default_rng(79)
    pair = gaussian_pair(rng, 4, 2)
    for _ in range(5):
        t = rng.uniform(-1.5, 1.5, 4)
        f, g = bessel_pair_objective(pair, t)
        cert = np.sqrt(f * g)
        for m in (1, 2, 3):
            mats = np.stack([haar_unitary(rng, m) for _ in range(4)])
            sigma, _, _ = top_singular_triplet(assemble_block(pair, mats))
            assert sigma <= cert * amplified_input_norm(mats) + 1e-8


def test_optimized_bound_dominates_sampled_cb_norm():
    rng = np.random.default_rng(80)
    for _ in range(5):
        pair = gaussian_pair(rng, int(rng.integers(2, 6)), int(rng.integers(1, 4)))
        br = optimize(pair)
        assert br.m_lower <= br.m_upper + 1e-8


def test_extract_scaling_cross_checks_objective():
    rng = np.random.default_rng(81)
    pair = gaussian_pair(rng, 5, 2)
    br = optimize(pair)
    sc = extract_scaling(pair, br.log_weights)
    assert abs(sc.bounds_x.upper - br.f) <= 1e-9 * (1.0 + br.f)
    assert abs(sc.bounds_y.upper - br.g) <= 1e-9 * (1.0 + br.g)
    assert np.all(sc.alpha > 0.0)


def test_dilation_isometries_and_reconstruction():
    rng = np.random.default_rng(82)
    for n, d in ((3, 2), (5, 3), (4, 1)):
        pair = gaussian_pair(rng, n, d)
        br = optimize(pair)
        dil = build_dilation(pair, br.log_weights, br.m_upper)
        eye = np.eye(d)
        assert np.max(np.abs(dil.v1.conj().T @ dil.v1 - eye)) <= 1e-10
        assert np.max(np.abs(dil.v2.conj().T @ dil.v2 - eye)) <= 1e-10
        assert dil.v1.shape == (n + 2 * d, d)
        for _ in range(10):
            a = rng.uniform(0.0, 1.0, n) * np.exp(2j * np.pi * rng.uniform(size=n))
            lhs = dilation_reconstruct(dil, a)
            rhs = mask_matrix(pair, a)
            assert np.max(np.abs(lhs - rhs)) <= 1e-10 * (1.0 + np.max(np.abs(rhs)))


def test_dilation_identity_mask_gives_pair_operator():
    rng = np.random.default_rng(83)
    pair = canonical_dual_pair(rng, 4, 2)
    br = optimize(pair)
    dil = build_dilation(pair, br.log_weights, br.m_upper)
    rec = dilation_reconstruct(dil, np.ones(4))
    assert np.max(np.abs(rec - pair_operator(pair))) <= 1e-10


def test_dilation_rejects_insufficient_norm():
    rng = np.random.default_rng(84)
    pair = gaussian_pair(rng, 4, 2)
    br = optimize(pair)
    with pytest.raises(ValueError):
        build_dilation(pair, br.log_weights, 0.5 * max(br.f, br.g))


def test_end_to_end_rescaled_schauder_frame_bounds():
    rng = np.random.default_rng(85)
    pair = mangle(canonical_dual_pair(rng, 5, 3),
                  mangling_scalars(rng, 5, (1e-3, 1e3)))
    br = optimize(pair)
    sc = extract_scaling(pair, br.log_weights)
    assert sc.bounds_x.lower > 1e-10
    assert sc.bounds_y.lower > 1e-10
    assert sc.bounds_x.upper <= br.m_upper + 1e-8
    assert sc.bounds_y.upper <= br.m_upper + 1e-8


def test_union_of_bases_bound_between_one_and_count():
    rng = np.random.default_rng(86)
    pair = onb_union_pair(rng, 6, 3)
    br = optimize(pair)
    # two bases with duals x/2: unmasked sum is the identity, worst mask
    # can at most double the energy
    assert br.m_lower >= 1.0 - 1e-9
    assert br.m_upper <= 2.0 + 1e-6
