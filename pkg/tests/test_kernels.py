import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from twopoint.kernels import (
    MercerKernel, decay_report, decay_verdict_holder, decay_verdict_sobolev, eigen_sequence,
    example_exponent, example_kernel, fractional_kernel, holder_exponent, holder_family,
    holder_profile, n_width, n_width_slope, sqrt_kernel, validate,
)
from twopoint.spaces import catalog, cumulative_dims, harmonic_dims, laplace_eigenvalue, representative_spaces
from twopoint.zonal import fractional_derivative, lp_norm

SPACES = representative_spaces()
T_GRID = np.geomspace(0.005, 0.05, 10)


def test_validation_examples(s2):
    assert validate(MercerKernel(s2, 2.0 ** -np.arange(40))).valid
    v = validate(MercerKernel(s2, [1.0, 2.0, 0.5]))
    assert not v.monotone and v.first_increase == 0
    v = validate(MercerKernel(s2, [1.0, 0.5, -0.1]))
    assert not v.positive and v.first_negative == 2
    assert any("positivity" in msg for msg in v.violations())


def test_non_summable_kernel_is_gated(s2):
    k = MercerKernel(s2, np.ones(200))
    assert not validate(k).summable
    with pytest.raises(ValueError, match="validation"):
        decay_verdict_holder(k, 1.0)


def test_constructor_rejects_bad_coefficients(s2):
    with pytest.raises(ValueError):
        MercerKernel(s2, [])
    with pytest.raises(ValueError):
        MercerKernel(s2, [1.0, np.inf])


def test_json_round_trip_and_per_j(s2):
    k = MercerKernel(s2, [1.0, 0.5, 0.25])
    assert np.array_equal(MercerKernel.from_dict(k.to_dict()).coeffs, k.coeffs)
    with pytest.warns(UserWarning, match="collapsed"):
        c = MercerKernel.from_dict({"family": "sphere", "m": 2, "per_j": [[1.0], [0.2, 0.5, 0.4]]})
    assert c.coeffs.tolist() == [1.0, 0.5]


def test_eigen_sequence_examples(s2):
    seq = eigen_sequence(MercerKernel(s2, [1.0, 0.5, 0.25]))
    assert seq.expand().tolist() == [1.0] + [0.5] * 3 + [0.25] * 5
    assert len(seq) == 9 and seq.eigenvalue(4) == 0.5 and seq.eigenvalue(5) == 0.25
    assert eigen_sequence(MercerKernel(s2, [1.0])).expand().tolist() == [1.0]
    assert eigen_sequence(MercerKernel(s2, [1.0, 0.5, 0.25]), N=6).expand().tolist() == [1.0, 0.5, 0.5, 0.5, 0.25, 0.25]
    with pytest.raises(ValueError):
        eigen_sequence(MercerKernel(s2, [1.0, 0.5]), N=5)
    with pytest.raises(IndexError):
        seq.eigenvalue(10)


@given(st.sampled_from(SPACES[:3]), st.lists(st.floats(1e-6, 1.0), min_size=1, max_size=20))
def test_eigen_sequence_nonincreasing(p, raw):
    b = np.sort(np.asarray(raw))[::-1]
    seq = eigen_sequence(MercerKernel(p, b))
    lam = seq.expand()
    assert lam.size == cumulative_dims(p, b.size - 1)[-1]
    assert np.all(np.diff(lam) <= 0)
    n = np.arange(lam.size)
    assert np.array_equal(n_width(MercerKernel(p, b), n) ** 2, np.sqrt(lam) ** 2)


def test_n_width_examples(s2):
    # b_k = 1/(k+1)^2 with d_k multiplicities: lambda = {1, 1/4 x 3, 1/9 x 5, ...}
    k = MercerKernel(s2, 1.0 / (np.arange(10) + 1.0) ** 2)
    assert n_width(k, 0) == 1.0
    assert n_width(k, 3) == pytest.approx(0.5)
    assert n_width(k, 4) == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        n_width(k, 100)


def test_sqrt_kernel_examples(s2):
    k = MercerKernel(s2, [1.0, 1.0, 0.0, 0.0])
    assert np.array_equal(sqrt_kernel(k).coeffs, k.coeffs)
    b = 3.0 ** -np.arange(20)
    np.testing.assert_allclose(sqrt_kernel(sqrt_kernel(MercerKernel(s2, b))).coeffs, b**0.25, rtol=1e-14)


@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_fractional_kernel_diagonal_identity(space, r):
    k = example_kernel(space, 2.0 / space.m, 2, K=64)
    frac = fractional_kernel(k, r)
    assert frac.coeffs[0] == 0
    # ||B^r K_{1/2}^y||_2^2 by quadrature of the slice versus the coefficient trace
    via_norm = lp_norm(fractional_derivative(sqrt_kernel(k).slice(), r), 2) ** 2
    assert via_norm == pytest.approx(frac.trace, rel=1e-10)
    with pytest.raises(ValueError):
        fractional_kernel(k, 0)


def test_trace_tail_diagnostic(s2):
    d = harmonic_dims(s2, 4000)
    k = np.arange(4001.0)
    k[0] = 1
    assert fractional_kernel(MercerKernel(s2, k**-1.0 / d), 0.01).trace_class is False
    assert fractional_kernel(MercerKernel(s2, k**-3.0 / d), 0.25).trace_class is True


def test_holder_degenerate_and_analytic(s2):
    est = holder_exponent(MercerKernel(s2, [2.0]), T_GRID)
    assert est.beta is None and est.degenerate
    analytic = holder_exponent(MercerKernel(s2, np.exp(-np.arange(60.0))), T_GRID)
    # smooth kernels saturate the range (0, 2]
    assert 1.99 <= analytic.beta <= 2.0
    with pytest.raises(ValueError):
        holder_exponent(MercerKernel(s2, [1.0, 0.5]), T_GRID[:4])


@pytest.mark.parametrize("beta0", [0.5, 1.0, 1.5])
def test_holder_recovery(beta0):
    p = catalog("complex-projective", 4)
    est = holder_exponent(holder_family(p, beta0), T_GRID)
    assert abs(est.beta - beta0) <= 0.1


def test_holder_profile_grid_convergence(s2):
    k = holder_family(s2, 1.0, K=2048)
    a = holder_profile(k, T_GRID, 2048)
    b = holder_profile(k, T_GRID, 4096)
    assert np.max(np.abs(a - b) / b) < 1e-3


@pytest.mark.parametrize("space_args, eps, r", [(("complex-projective", 4), 0.5, 1), (("sphere", 2), 1.0, 1),
                                                (("quaternion-projective", 8), 0.25, 2)])
def test_example_kernel(space_args, eps, r):
    p = catalog(*space_args)
    k = example_kernel(p, eps, r, K=512)
    n = np.arange(1, 513)
    assert k.coeffs[0] == 1
    assert np.max(np.abs(k.coeffs[1:] * n ** example_exponent(p.m, eps, r) - 1)) <= 1e-8
    assert validate(k).valid
    rep = decay_verdict_sobolev(k, r, window=(cumulative_dims(p, 16)[-1], cumulative_dims(p, 256)[-1]))
    assert rep.verdict
    assert abs(rep.fitted_slope + (1 + eps + (2 * r - 1) / p.m)) <= 0.1
    assert rep.fitted_slope <= -(1 + 2 * r / p.m)
    if p.family.value == "sphere":
        assert any("sphere" in note for note in k.notes)


def test_example_kernel_requires_m_eps_above_one():
    with pytest.raises(ValueError):
        example_kernel(catalog("cp", 4), 0.2, 1)


def test_example_kernel_holder_verdict():
    p = catalog("complex-projective", 4)
    k = example_kernel(p, 0.5, 1, K=256)
    # eigenvalue rate eps + (2r - 1)/m read as beta/m
    beta_eff = min(2.0, p.m * 0.5 + 1)
    assert decay_verdict_holder(k, beta_eff).verdict


def test_log_factor_counterexample_fails(s2):
    K = 2000
    D = cumulative_dims(s2, K).astype(float)
    beta = 1.0
    b = D ** (-1 - beta / 2) * np.log(D + 1)
    b[0] = b[1]
    rep = decay_verdict_holder(MercerKernel(s2, b), beta)
    assert not rep.verdict and rep.diagnostics


def test_sobolev_log_family_passes(s2):
    r, K = 1.0, 4000
    k = np.arange(K + 1.0)
    lam = laplace_eigenvalue(s2, k)
    b = np.empty(K + 1)
    b[1:] = lam[1:] ** -r / harmonic_dims(s2, K)[1:] * k[1:] ** -1.01
    b[0] = b[1]
    kern = MercerKernel(s2, b)
    assert fractional_kernel(kern, r).trace_class
    assert decay_verdict_sobolev(kern, r).verdict


def test_verdict_preconditions(s2):
    k = example_kernel(s2, 1.0, 1, K=128)
    with pytest.raises(ValueError):
        decay_verdict_sobolev(k, 0)
    with pytest.raises(ValueError):
        decay_verdict_holder(k, 2.5)
    with pytest.raises(ValueError, match="2 decades"):
        decay_report(k, -2.0, "holder", window=(10, 500))


def test_decay_report_dict(s2):
    d = decay_verdict_sobolev(example_kernel(s2, 1.0, 1, K=256), 1).to_dict()
    assert d["verdict"] in {"pass", "fail"} and len(d["fit_window"]) == 2


def test_n_width_slope_example():
    p = catalog("complex-projective", 4)
    k = example_kernel(p, 0.5, 1, K=256)
    rate = 0.5 + 1 / p.m
    slope = n_width_slope(k, window=(cumulative_dims(p, 16)[-1], cumulative_dims(p, 256)[-1]))
    assert abs(slope - (-0.5 - rate / 2)) <= 0.05


def test_large_spaces_do_not_overflow():
    p = catalog("quaternion-projective", 8)
    k = example_kernel(p, 0.25, 2, K=512)
    seq = eigen_sequence(k)
    assert seq.length > 10**18
    assert n_width(k, 10) == pytest.approx(math.sqrt(seq.eigenvalue(11)))
    with pytest.raises(MemoryError):
        seq.expand()
