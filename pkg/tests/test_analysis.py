import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsmc import (ConfigError, augmented_vs_direct, build_aug, charpoly,
                  check_memory_spectrum, make_gains, memory_block,
                  stability_over_T, variant_for_kind,
                  verify_first_order_memory, verify_second_order_memory)

from conftest import (ALPHA_BENCH, BETA_BENCH, H_BENCH, H_UNSTABLE, T_BENCH)


# --- characteristic polynomial ----------------------------------------------

def test_charpoly_hand_2x2():
    coeffs = charpoly(np.array([[2.0, 1.0], [0.0, 3.0]]))
    assert np.allclose(coeffs, [1.0, -5.0, 6.0], atol=1e-13)


def test_charpoly_zero_matrix():
    assert np.allclose(charpoly(np.zeros((3, 3))), [1, 0, 0, 0], atol=0)


def test_charpoly_companion():
    # companion matrix of p(x) = x^3 - 2x^2 + 3x - 4
    comp = np.array([[2.0, -3.0, 4.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    assert np.allclose(charpoly(comp), [1.0, -2.0, 3.0, -4.0], atol=1e-12)


def test_charpoly_matches_eigenvalue_route():
    rng = np.random.default_rng(2)
    for _ in range(10):
        A = rng.standard_normal((5, 5))
        A = (A + A.T) / 2  # symmetric: eigenvalues well conditioned
        ours = charpoly(A)
        ref = np.poly(np.linalg.eigvalsh(A))
        scale = max(1.0, np.max(np.abs(ref)))
        assert np.max(np.abs(ours - ref)) / scale <= 1e-10


# --- memory block -----------------------------------------------------------

def test_memory_block_hand_case():
    # m = 1, no surface drift, alpha = 0.5: the 2x2 block is explicit and its
    # spectrum is {0.5, 0}
    blk = memory_block(0.5, 0.01, np.zeros((1, 1)), "aug1")
    assert np.allclose(blk, [[1.0, 1.0], [-0.5, -0.5]], atol=0)
    assert np.allclose(charpoly(blk), [1.0, -0.5, 0.0], atol=1e-15)


def test_memory_block_dimensions():
    cpl = np.ones((2, 2))
    assert memory_block(0.9, 0.01, cpl, "aug1").shape == (4, 4)
    assert memory_block(0.9, 0.01, cpl, "aug2").shape == (8, 8)
    with pytest.raises(ConfigError):
        memory_block(0.9, 0.01, cpl, "aug3")


def test_memory_spectrum_deadbeat():
    # alpha = 0: every memory eigenvalue sits at the origin
    rng = np.random.default_rng(7)
    cpl = rng.standard_normal((2, 2))
    for variant in ("aug1", "aug2"):
        rep = check_memory_spectrum(0.0, 0.05, cpl, variant)
        assert rep.ok(1e-10)
        assert np.allclose(rep.expected[1:], 0.0, atol=0)


def test_memory_spectrum_bench_design(bench_gains):
    rep1 = verify_first_order_memory(bench_gains)
    rep2 = verify_second_order_memory(bench_gains)
    assert rep1.ok(1e-12) and rep2.ok(1e-12)
    assert rep1.variant == "aug1" and rep2.variant == "aug2"
    assert rep1.m == 2 and rep1.alpha == ALPHA_BENCH


@settings(max_examples=60, deadline=None)
@given(
    m=st.integers(1, 3),
    alpha=st.floats(0.0, 0.999),
    T=st.floats(1e-4, 0.2),
    seed=st.integers(0, 2**31),
)
def test_memory_spectrum_invariant_under_coupling(m, alpha, T, seed):
    # the spectrum {alpha x m, 0 x rest} holds for every coupling, not just
    # the shipped design's
    rng = np.random.default_rng(seed)
    cpl = 2.0 * rng.uniform(-1, 1, size=(m, m))
    for variant in ("aug1", "aug2"):
        rep = check_memory_spectrum(alpha, T, cpl, variant)
        assert rep.ok(1e-8), (variant, rep.max_coeff_error)


# --- augmented assembly -----------------------------------------------------

def test_variant_for_kind():
    assert variant_for_kind("m1") == "aug1"
    assert variant_for_kind("mm1") == "aug1"
    assert variant_for_kind("eq") == "aug1"
    assert variant_for_kind("m2") == "aug2"
    assert variant_for_kind("mm2") == "aug2"


def test_build_aug_dimensions(bench_design, bench_gains):
    a1 = build_aug(bench_design, bench_gains, "aug1")
    a2 = build_aug(bench_design, bench_gains, "aug2")
    assert a1.dim == 6 and a1.A_aug.shape == (6, 6)
    assert a2.dim == 10 and a2.A_aug.shape == (10, 10)
    # top-left block is the reduced-motion step in both variants
    assert np.array_equal(a1.A_aug[:2, :2], bench_design.xi_step)
    assert np.array_equal(a2.A_aug[:2, :2], bench_design.xi_step)
    with pytest.raises(ConfigError):
        build_aug(bench_design, bench_gains, "aug9")


def test_disturbance_vector_assembly(bench_design, bench_gains):
    a1 = build_aug(bench_design, bench_gains, "aug1")
    a2 = build_aug(bench_design, bench_gains, "aug2")
    d_xi = np.array([1.0, -2.0])
    d_s = np.array([0.5, 0.25])
    T, a = bench_gains.T, bench_gains.alpha
    cpl = bench_gains.drift_from_s
    v1 = a1.disturbance_vector(d_xi, d_s)
    assert v1.shape == (6,)
    tail = -(((2 - a) * np.eye(2) + T * cpl) @ d_s)
    assert np.allclose(v1, np.concatenate([d_xi, d_s, tail]), atol=0)
    v2 = a2.disturbance_vector(d_xi, d_s)
    assert v2.shape == (10,)
    assert np.allclose(v2[4:6], 0.0, atol=0) and np.allclose(v2[8:], 0.0, atol=0)
    tail2 = -(((3 - a) * np.eye(2) + T * cpl) @ d_s)
    assert np.allclose(v2[6:8], tail2, atol=0)


def test_build_aug_rejects_period_mismatch(bench_plant, bench_design):
    from qsmc import build_surface, discretize
    other = build_surface(bench_plant, discretize(bench_plant, 0.02), H_BENCH)
    gains_other = make_gains(other, beta=BETA_BENCH)
    with pytest.raises(ConfigError):
        build_aug(bench_design, gains_other, "aug1")


# --- stability over sampling periods ----------------------------------------

def test_stability_benchmark_point(bench_plant):
    rep = stability_over_T(bench_plant, H_BENCH, [T_BENCH], alpha=ALPHA_BENCH)
    row = rep.rows[0]
    assert row.certified
    assert row.rho_aug1 == pytest.approx(0.9982520070918972, abs=1e-10)
    assert row.rho_aug2 == pytest.approx(0.9982058640351513, abs=1e-10)
    assert rep.all_certified
    assert rep.largest_certified == T_BENCH


def test_stability_margin_scales_with_period(bench_plant):
    # with the contraction rate fixed in time, the stability margin 1 - rho
    # closes linearly in T
    T_list = [0.04, 0.02, 0.01, 0.005]
    rep = stability_over_T(bench_plant, H_BENCH, T_list, beta=BETA_BENCH)
    assert rep.all_certified
    margins1 = np.array([1.0 - r.rho_aug1 for r in rep.rows])
    margins2 = np.array([1.0 - r.rho_aug2 for r in rep.rows])
    Ts = np.array([r.T for r in rep.rows])
    slope1 = np.polyfit(np.log(Ts), np.log(margins1), 1)[0]
    slope2 = np.polyfit(np.log(Ts), np.log(margins2), 1)[0]
    assert 0.6 <= slope1 <= 1.4
    assert 0.6 <= slope2 <= 1.4
    # alpha recomputed per T: 1 - alpha = beta T
    for r in rep.rows:
        assert r.alpha == pytest.approx(1.0 - BETA_BENCH * r.T, abs=1e-14)


def test_stability_flags_destabilizing_surface(bench_plant):
    rep = stability_over_T(bench_plant, H_UNSTABLE, [0.02, 0.01, 0.005],
                           alpha=ALPHA_BENCH)
    assert not rep.all_certified
    assert rep.largest_certified is None
    assert all(r.rho_aug1 > 1.0 for r in rep.rows)


def test_stability_needs_rate(bench_plant):
    with pytest.raises(ConfigError):
        stability_over_T(bench_plant, H_BENCH, [0.01])


def test_eigenvalue_clustering_tightens(bench_plant):
    # conditioned cluster distances shrink superlinearly as T -> 0
    rep = stability_over_T(bench_plant, H_BENCH, [0.02, 0.01, 0.005, 0.0025],
                           beta=BETA_BENCH)
    rows = sorted(rep.rows, key=lambda r: r.T)
    c1 = np.array([r.conditioned_dist_aug1 for r in rows])
    c2 = np.array([r.conditioned_dist_aug2 for r in rows])
    assert np.all(np.diff(c1) > 0) and np.all(np.diff(c2) > 0)
    Ts = np.array([r.T for r in rows])
    slope1 = np.polyfit(np.log(Ts), np.log(c1), 1)[0]
    slope2 = np.polyfit(np.log(Ts), np.log(c2), 1)[0]
    assert slope1 >= 1.7
    assert slope2 >= 1.7


# --- augmented recursion vs direct simulation --------------------------------

@pytest.mark.parametrize("kind,variant", [("mm1", "aug1"), ("m1", "aug1"),
                                          ("mm2", "aug2"), ("m2", "aug2")])
def test_augmented_matches_direct(bench_design, bench_gains, bench_scenario,
                                  kind, variant):
    gap = augmented_vs_direct(bench_design, bench_gains, variant,
                              bench_scenario.with_(kind=kind, horizon=5.0))
    assert gap <= 1e-8


def test_augmented_vs_direct_guards(bench_design, bench_gains, bench_scenario):
    with pytest.raises(ConfigError):
        augmented_vs_direct(bench_design, bench_gains, "aug2",
                            bench_scenario.with_(kind="mm1"))
    from qsmc import NoiseSpec
    noisy = bench_scenario.with_(kind="mm1",
                                 noise=NoiseSpec(kind="uniform", halfwidth=0.005))
    with pytest.raises(ConfigError):
        augmented_vs_direct(bench_design, bench_gains, "aug1", noisy)
