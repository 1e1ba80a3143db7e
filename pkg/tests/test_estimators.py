import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.utils.estimator_checks import parametrize_with_checks

from twopoint.estimators import EnergyTransformer, KernelSpectrumEstimator, MultiplierTransformer
from twopoint.kernels import example_kernel
from twopoint.multipliers import eta, gen_shift_values, one_minus_gen_shift
from twopoint.spaces import catalog, cumulative_dims, harmonic_dims, laplace_eigenvalue
from twopoint.zonal import energies, random_zonal


@parametrize_with_checks([EnergyTransformer(), MultiplierTransformer(), MultiplierTransformer(kind="eta")])
def test_sklearn_compatible(estimator, check):
    check(estimator)


def _rows(space, n=5, kmax=20):
    return np.vstack([random_zonal(space, kmax, seed).coeffs for seed in range(n)])


def test_energy_transformer_matches_energies():
    p = catalog("cp", 4)
    X = _rows(p)
    out = EnergyTransformer(family="cp", m=4).fit_transform(X)
    np.testing.assert_allclose(out[2], energies(random_zonal(p, 20, 2)), rtol=1e-15)
    weighted = EnergyTransformer(family="cp", m=4, sobolev_order=1.5).fit_transform(X)
    lam = laplace_eigenvalue(p, np.arange(21))
    np.testing.assert_allclose(weighted, out * lam**1.5, rtol=1e-14)


@pytest.mark.parametrize("kind", ["gen_shift", "gen_shift_diff", "shift", "eta"])
def test_multiplier_kinds(kind):
    p = catalog("sphere", 2)
    X = _rows(p)
    est = MultiplierTransformer(family="sphere", m=2, kind=kind, r=2, t=0.1, a=1.0).fit(X)
    expected = {
        "gen_shift": gen_shift_values(p, 2, 0.1, 20),
        "gen_shift_diff": -one_minus_gen_shift(p, 2, 0.1, 20),
        "shift": gen_shift_values(p, 1, 0.1, 20),
        "eta": eta(0.1 * np.arange(21)),
    }[kind]
    np.testing.assert_allclose(est.transform(X), X * expected, rtol=1e-14, atol=1e-300)


def test_multiplier_parameter_errors():
    X = _rows(catalog("sphere", 2))
    with pytest.raises(ValueError):
        MultiplierTransformer(kind="nope").fit(X)
    with pytest.raises(ValueError):
        MultiplierTransformer(r=1.5).fit(X)
    with pytest.raises(ValueError):
        MultiplierTransformer(t=4.0).fit(X)
    with pytest.raises(ValueError):
        MultiplierTransformer(family="cp", m=3).fit(X)


def test_transform_checks_fit_and_width():
    X = _rows(catalog("sphere", 2))
    with pytest.raises(NotFittedError):
        EnergyTransformer().transform(X)
    est = EnergyTransformer().fit(X)
    with pytest.raises(ValueError):
        est.transform(X[:, :5])


def test_pipeline_and_clone():
    X = _rows(catalog("sphere", 2))
    pipe = make_pipeline(MultiplierTransformer(kind="gen_shift_diff", r=1, t=0.2), EnergyTransformer())
    out = pipe.fit_transform(X)
    om = one_minus_gen_shift(catalog("sphere", 2), 1, 0.2, 20)
    np.testing.assert_allclose(out, X**2 * om**2 / harmonic_dims(catalog("sphere", 2), 20), rtol=1e-13)
    assert clone(pipe).get_params()["multipliertransformer__t"] == 0.2


def test_kernel_spectrum_estimator():
    p = catalog("complex-projective", 4)
    k = example_kernel(p, 0.5, 1, K=256)
    window = (cumulative_dims(p, 16)[-1], cumulative_dims(p, 256)[-1])
    est = KernelSpectrumEstimator(family="complex-projective", m=4, mode="sobolev", r=1, window=window)
    est.fit(k.coeffs)
    assert est.score() == 1.0
    assert abs(est.slope_ + (1 + 0.5 + 1 / 4)) <= 0.1
    pred = est.predict([1e3, 1e4])
    assert pred[1] / pred[0] == pytest.approx(10**est.slope_)
    with pytest.raises(ValueError):
        est.predict([0])
    with pytest.raises(ValueError):
        KernelSpectrumEstimator(mode="other").fit(k.coeffs)
    with pytest.raises(NotFittedError):
        KernelSpectrumEstimator().predict([1])
