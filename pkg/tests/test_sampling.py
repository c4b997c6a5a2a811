import numpy as np
import pytest

from dirichlet_ruc import DomainError, Estimate, GridPolicy, SamplerConfig
from dirichlet_ruc.sampling import (
    gaussian_samples,
    sign_samples,
    steinhaus_samples,
    uniform_bits,
)


def test_estimate_invariants():
    Estimate(value=1.0, mode="exact")
    Estimate(value=1.0, stderr=0.1, mode="mc", samples_used=10)
    Estimate(value=1.0, mode="quadrature", quad_error=0.01)
    with pytest.raises(DomainError):
        Estimate(value=1.0, stderr=0.1, mode="exact")
    with pytest.raises(DomainError):
        Estimate(value=1.0, stderr=0.1, mode="quadrature")
    with pytest.raises(DomainError):
        Estimate(value=1.0, mode="bogus")


def test_estimate_scaled():
    est = Estimate(value=2.0, stderr=0.5, mode="mc", samples_used=4)
    scaled = est.scaled(-3)
    assert scaled.value == 6.0 and scaled.stderr == 1.5 and scaled.mode == "mc"


def test_sampler_config_validation():
    SamplerConfig(seed=1, samples=1, exact_cutoff=0)
    with pytest.raises(DomainError):
        SamplerConfig(samples=0)
    with pytest.raises(DomainError):
        SamplerConfig(exact_cutoff=25)


def test_grid_policy_power_of_two():
    policy = GridPolicy(factor=4, min_size=16)
    assert policy.size_for(0) == 16
    assert policy.size_for(5) == 32
    assert policy.size_for(100) == 512


def test_streams_are_decorrelated():
    a = uniform_bits(7, 1, 100, 2)
    b = uniform_bits(7, 2, 100, 2)
    assert not np.array_equal(a, b)
    assert not np.array_equal(uniform_bits(7, 1, 100, 2), uniform_bits(8, 1, 100, 2))


def test_sign_samples_are_balanced():
    signs = sign_samples(3, 2, 20_000, 1)
    assert set(np.unique(signs)) == {-1.0, 1.0}
    assert abs(signs.mean()) < 0.02


def test_steinhaus_samples_unimodular():
    z = steinhaus_samples(3, 5, 1000, 2)
    assert np.allclose(np.abs(z), 1.0, atol=1e-12)


def test_gaussian_moments():
    g = gaussian_samples(11, 4, 200_000, 1, variant="complex")
    assert abs((np.abs(g) ** 2).mean() - 1.0) < 0.02
    r = gaussian_samples(11, 4, 200_000, 1, variant="real")
    assert abs((r**2).mean() - 1.0) < 0.02
    assert abs(r.mean()) < 0.01
