import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coopbeam.channel import (
    CorrelationMatrix,
    apply_correlation,
    condition_diagnostics,
    correlation_level,
    draw_iid_rayleigh,
    exponential_correlation,
)


def test_draw_same_seed_identical():
    a = draw_iid_rayleigh(3, 3, np.random.default_rng(77))
    b = draw_iid_rayleigh(3, 3, np.random.default_rng(77))
    assert np.array_equal(a, b)


def test_draw_shape_and_dtype():
    H = draw_iid_rayleigh(2, 5, np.random.default_rng(0))
    assert H.shape == (2, 5)
    assert np.iscomplexobj(H)
    assert np.all(np.isfinite(H))


def test_draw_unit_mean_square_magnitude():
    # |CN(0,1)|^2 is Exp(1); one million samples pin the mean to 1 +- 0.01
    H = draw_iid_rayleigh(1000, 1000, np.random.default_rng(3))
    assert abs(np.mean(np.abs(H) ** 2) - 1.0) < 0.01


def test_draw_halved_component_variance():
    H = draw_iid_rayleigh(700, 700, np.random.default_rng(9))
    assert abs(np.var(H.real) - 0.5) < 0.01
    assert abs(np.var(H.imag) - 0.5) < 0.01


def test_draw_rejects_zero_dims():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        draw_iid_rayleigh(0, 3, rng)
    with pytest.raises(ValueError):
        draw_iid_rayleigh(3, 0, rng)


def test_exponential_correlation_r0_identity():
    C = exponential_correlation(3, 0.0)
    assert np.array_equal(C.entries, np.eye(3))
    assert C.level == 0.0


def test_exponential_correlation_direct_2x2():
    C = exponential_correlation(2, 0.5)
    assert np.array_equal(C.entries, [[1.0, 0.5], [0.5, 1.0]])


def test_exponential_correlation_stores_matching_level():
    C = exponential_correlation(3, 0.5)
    assert C.level == correlation_level(C.entries)
    # PSD by construction
    assert np.all(np.linalg.eigvalsh(C.entries) > -1e-12)


def test_exponential_correlation_domain():
    with pytest.raises(ValueError):
        exponential_correlation(3, 1.0)
    with pytest.raises(ValueError):
        exponential_correlation(3, -0.1)
    with pytest.raises(ValueError):
        exponential_correlation(0, 0.5)


def test_correlation_matrix_rejects_wrong_level():
    with pytest.raises(ValueError):
        CorrelationMatrix(np.eye(2), level=0.3)


def test_level_hand_values():
    # ||C - diag||_F / ||diag||_F worked by hand
    assert correlation_level([[1.0, 0.5], [0.5, 1.0]]) == pytest.approx(
        np.sqrt(0.5) / np.sqrt(2.0), abs=1e-15)
    assert correlation_level([[1.0, 1.0], [1.0, 1.0]]) == pytest.approx(
        1.0, abs=1e-15)


def test_level_matches_independent_norms():
    C = exponential_correlation(4, 0.6).entries
    off = C - np.diag(np.diag(C))
    expect = np.sqrt((off ** 2).sum()) / np.sqrt((np.diag(C) ** 2).sum())
    assert correlation_level(C) == pytest.approx(expect, rel=1e-14)


def test_level_zero_diagonal_raises():
    with pytest.raises(ZeroDivisionError):
        correlation_level([[0.0, 1.0], [1.0, 0.0]])


@pytest.mark.properties
@given(m=st.integers(1, 8))
@settings(deadline=None)
def test_level_identity_is_zero(m):
    assert correlation_level(np.eye(m)) == 0.0


@pytest.mark.properties
@given(r=st.floats(0.05, 0.9), m=st.integers(2, 6), seed=st.integers(0, 99))
@settings(deadline=None, max_examples=40)
def test_level_permutation_invariant(r, m, seed):
    C = exponential_correlation(m, r).entries
    perm = np.random.default_rng(seed).permutation(m)
    P = np.eye(m)[perm]
    assert correlation_level(P @ C @ P.T) == pytest.approx(
        correlation_level(C), rel=1e-12)


@pytest.mark.properties
def test_level_strictly_increasing_in_r():
    for m in (2, 3, 5):
        levels = [exponential_correlation(m, r).level
                  for r in np.linspace(0.0, 0.95, 12)]
        assert all(b > a for a, b in zip(levels, levels[1:]))


def test_apply_identity_exact():
    H = draw_iid_rayleigh(3, 4, np.random.default_rng(5))
    out = apply_correlation(np.eye(3), H)
    assert np.array_equal(out, H)


@pytest.mark.properties
def test_apply_identity_exact_via_constructed_matrix():
    H = draw_iid_rayleigh(4, 2, np.random.default_rng(11))
    C = exponential_correlation(4, 0.0)
    assert np.array_equal(apply_correlation(C, H), H)


def test_apply_rank_one_collapse():
    H = np.array([[2.0 + 1.0j], [-1.0 + 0.5j]])
    out = apply_correlation([[1.0, 1.0], [1.0, 1.0]], H)
    assert np.allclose(out[0], out[1])
    assert out[0, 0] == pytest.approx(H[0, 0] + H[1, 0])


def test_apply_dimension_mismatch():
    with pytest.raises(ValueError):
        apply_correlation(np.eye(3), np.zeros((2, 4), dtype=complex))


def test_apply_covariance_propagation():
    # rows of C @ h have covariance C C^T when h is iid CN(0,1)
    m, draws = 3, 100_000
    C = exponential_correlation(m, 0.5)
    rng = np.random.default_rng(17)
    H = draw_iid_rayleigh(m, draws, rng)
    Y = apply_correlation(C, H)
    sample_cov = (Y @ Y.conj().T).real / draws
    assert np.max(np.abs(sample_cov - C.entries @ C.entries.T)) < 0.02


def test_condition_orthonormal_columns():
    Q, _ = np.linalg.qr(draw_iid_rayleigh(5, 3, np.random.default_rng(2)))
    diag = condition_diagnostics(Q)
    assert np.allclose(diag["eigenvalues"], 1.0, atol=1e-10)
    assert diag["condition_number"] == pytest.approx(1.0, abs=1e-10)


def test_condition_scaled_identity():
    diag = condition_diagnostics(2.0 * np.eye(2))
    assert diag["eigenvalues"] == pytest.approx([4.0, 4.0])
    assert diag["condition_number"] == pytest.approx(1.0)


def test_condition_descending_and_sentinel():
    # rank-deficient matrix saturates to +inf rather than a huge float
    H = np.array([[1.0, 1.0], [1.0, 1.0]])
    diag = condition_diagnostics(H)
    eigs = diag["eigenvalues"]
    assert eigs == sorted(eigs, reverse=True)
    assert diag["condition_number"] == np.inf


@pytest.mark.properties
def test_condition_mean_grows_with_correlation():
    # same seed stream, with and without receive correlation
    def mean_cond(r):
        rng = np.random.default_rng(123)
        C = exponential_correlation(3, r)
        total = 0.0
        for _ in range(10_000):
            H = draw_iid_rayleigh(3, 3, rng)
            total += condition_diagnostics(apply_correlation(C, H))[
                "condition_number"]
        return total / 10_000

    assert mean_cond(0.75) > mean_cond(0.0)
