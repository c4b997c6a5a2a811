import math

import numpy as np
import pytest

from dirichlet_ruc import (
    DirichletPolynomial,
    DomainError,
    FunctionLr,
    HilbertSpace,
    SamplerConfig,
    SearchConfig,
    SequenceSpace,
    SupSpace,
    TrigPolynomial,
    UndefinedRatioError,
    cotype_constant_witness,
    dirichlet_kernel_l1,
    experiment_lacunary_power,
    experiment_prime_ap,
    experiment_summing_basis,
    hp_norm,
    primes_up_to,
    ruc_constant_search,
    ruc_ratio,
    rud_ratio,
    scalar_polynomial,
    summing_combination,
    type_constant_witness,
)

CFG = SamplerConfig(seed=13, samples=2000)


def summing_family(m):
    return [np.concatenate([np.ones(k + 1), np.zeros(m - k - 1)]) for k in range(m)]


def test_ruc_ratio_hilbert_is_one():
    D = DirichletPolynomial(HilbertSpace(3), {2: [1, 0, 1], 5: [0, 2, 0]})
    rep = ruc_ratio(D, 2, CFG)
    assert rep.ratio == 1.0
    assert rep.numerator.mode == "exact" and rep.denominator.mode == "exact"
    assert rud_ratio(D, 2, CFG).ratio == 1.0


def test_ruc_ratio_scalar_is_one():
    D = scalar_polynomial({1: 1, 2: -2, 6: 1j})
    assert ruc_ratio(D, 2, CFG).ratio == 1.0


def test_ruc_rud_reciprocal():
    D = DirichletPolynomial(SupSpace(3), {n + 1: x for n, x in enumerate(summing_family(3))})
    a = ruc_ratio(D, 1, CFG)
    b = rud_ratio(D, 1, CFG)
    assert a.ratio * b.ratio == pytest.approx(1.0, abs=1e-15)
    assert a.numerator == b.denominator and a.denominator == b.numerator


def test_ruc_ratio_zero_polynomial():
    with pytest.raises(UndefinedRatioError):
        ruc_ratio(scalar_polynomial({}), 2, CFG)


def test_ruc_ratio_summing_combination():
    element, _ = summing_combination([1, -1, 1])
    D = DirichletPolynomial(SupSpace(3), {n + 1: x for n, x in enumerate(summing_family(3))})
    rep = ruc_ratio(D, 2, CFG)
    slack = 3 * (rep.numerator.uncertainty + rep.denominator.uncertainty)
    assert rep.ratio >= 1 - slack - 0.05


def test_scale_invariance_exact_modes():
    D = DirichletPolynomial(HilbertSpace(2), {2: [1, 0], 3: [0, 1]})
    a = ruc_ratio(D, 2, CFG)
    b = ruc_ratio(D.scaled(2.5 - 0.3j), 2, CFG)
    assert a.ratio == b.ratio and a.numerator.mode == "exact"


def test_scale_invariance_mc_shared_seed():
    D = DirichletPolynomial(SupSpace(3), {1: [1, 0, 0], 2: [1, 1, 0], 3: [1, 1, 1]})
    a = ruc_ratio(D, 1, CFG)
    b = ruc_ratio(D.scaled(2.5 - 0.3j), 1, CFG)
    slack = 3 * (
        a.numerator.uncertainty / a.denominator.value
        + b.numerator.uncertainty / b.denominator.value
    )
    # shared panels leave only float-rounding differences, far below 3 sigma
    assert abs(a.ratio - b.ratio) <= max(slack, 1e-12)


def test_search_hilbert_stays_at_one():
    result = ruc_constant_search(
        HilbertSpace(2),
        [np.array([1, 0]), np.array([0, 1])],
        2,
        SearchConfig(restarts=1, iterations=3),
        CFG,
    )
    assert result.report.ratio == 1.0


def test_search_dominates_all_ones_start():
    family = summing_family(5)
    cfg = SamplerConfig(seed=13, samples=600)
    result = ruc_constant_search(
        SupSpace(5), family, 2, SearchConfig(restarts=2, iterations=6), cfg
    )
    all_ones = ruc_ratio(
        DirichletPolynomial(SupSpace(5), {n + 1: x for n, x in enumerate(family)}), 2, cfg
    )
    assert result.report.ratio >= all_ones.ratio - 1e-12
    assert np.abs(result.coefficients).max() == pytest.approx(1.0)


def test_search_deterministic():
    family = summing_family(3)
    cfg = SamplerConfig(seed=5, samples=300)
    scfg = SearchConfig(restarts=2, iterations=4)
    a = ruc_constant_search(SupSpace(3), family, 2, scfg, cfg)
    b = ruc_constant_search(SupSpace(3), family, 2, scfg, cfg)
    assert a.report == b.report
    assert np.array_equal(a.coefficients, b.coefficients)


def test_search_rejects_degenerate():
    with pytest.raises(DomainError):
        ruc_constant_search(HilbertSpace(2), [np.zeros(2)], 2, SearchConfig(), CFG)


@pytest.mark.parametrize("n", [4, 8, 16])
def test_type_cotype_witnesses(n):
    basis = np.eye(n)
    assert abs(type_constant_witness(SequenceSpace(1, n), basis, CFG) - math.sqrt(n)) <= 1e-12
    assert abs(cotype_constant_witness(SupSpace(n), basis, CFG) - math.sqrt(n)) <= 1e-12
    assert abs(type_constant_witness(HilbertSpace(n), basis, CFG) - 1.0) <= 1e-12
    assert abs(cotype_constant_witness(HilbertSpace(n), basis, CFG) - 1.0) <= 1e-12


def test_witness_single_vector():
    assert type_constant_witness(SupSpace(2), [[1, 1]], CFG) == 1.0
    assert cotype_constant_witness(SupSpace(2), [[1, 1]], CFG) == 1.0
    with pytest.raises(DomainError):
        type_constant_witness(SupSpace(2), [[0, 0]], CFG)


def test_experiment_prime_ap_rows():
    rows = experiment_prime_ap([1, 3, 10], 3000, CFG)
    assert rows[0].ratio == 1.0
    assert (rows[1].ap.start, rows[1].ap.step) == (3, 2)
    assert (rows[2].ap.start, rows[2].ap.step) == (199, 210)
    assert rows[2].lhs.value == math.sqrt(10)
    assert rows[2].ratio > rows[1].ratio


def test_experiment_prime_ap_not_found_is_reported():
    rows = experiment_prime_ap([7], 100, CFG)
    assert rows[0].ap is None and rows[0].ratio is None
    assert "no AP" in rows[0].note


def test_experiment_lacunary_rows():
    rows = experiment_lacunary_power(64, CFG)
    assert [r.n for r in rows] == [1, 2, 4, 8, 16, 32, 64]
    assert rows[0].ratio == 1.0
    assert rows[1].ratio == pytest.approx(math.pi * math.sqrt(2) / 4, abs=1e-9)
    assert rows[-1].ratio > rows[1].ratio


def test_experiment_summing_basis():
    rep = experiment_summing_basis([1], CFG)
    assert rep.sup_tail_norm.value == 1.0 and rep.sup_tail_norm.mode == "exact"
    rep = experiment_summing_basis([1, 1], SamplerConfig(seed=3, samples=20_000))
    assert rep.sup_tail_norm.value + 3 * rep.sup_tail_norm.stderr >= math.sqrt(2)
    rep8 = experiment_summing_basis(np.ones(8), SamplerConfig(seed=3, samples=20_000))
    assert rep8.lower_bound_ok
    assert math.isfinite(rep8.carleson_hunt_ratio)
    with pytest.raises(DomainError):
        experiment_summing_basis([], CFG)


def test_zero_prefix_regression():
    # Prepending zero coefficients must not move the ratio beyond tolerance.
    family = summing_family(4)
    base = DirichletPolynomial(SupSpace(4), {n + 1: x for n, x in enumerate(family)})
    padded = DirichletPolynomial(
        SupSpace(4), {n + 3: x for n, x in enumerate(family)}
    )
    cfg = SamplerConfig(seed=29, samples=4000)
    r1 = ruc_ratio(base, 2, cfg)
    r2 = ruc_ratio(padded, 2, cfg)
    slack = 3 * (
        r1.numerator.uncertainty
        + r1.denominator.uncertainty
        + r2.numerator.uncertainty
        + r2.denominator.uncertainty
    )
    assert abs(r1.ratio - r2.ratio) <= slack + 0.05


def _example_family(N):
    """w1^n for prime n, w2^(2^n) otherwise, inside L_1 of the 2-torus."""
    table = primes_up_to(max(N, 2))
    family = []
    for n in range(1, N + 1):
        if table.is_prime(n):
            family.append(TrigPolynomial({(n, 0): 1.0}, 2))
        else:
            family.append(TrigPolynomial({(0, 2**n): 1.0}, 2))
    return family


def test_function_valued_family_construction():
    family = _example_family(12)
    assert family[1].coeffs == {(2, 0): (1 + 0j)}  # x_2 = w1^2
    assert family[3].coeffs == {(0, 16): (1 + 0j)}  # x_4 = w2^16
    assert family[11].coeffs == {(0, 4096): (1 + 0j)}  # x_12 = w2^4096
    space = FunctionLr(1, 2)
    from dirichlet_ruc import norm

    assert norm(space, family[11]).value == pytest.approx(1.0, abs=1e-12)


def test_function_valued_smoke_ratio():
    family = _example_family(5)
    space = FunctionLr(1, 2)
    D = DirichletPolynomial(space, {n + 1: x for n, x in enumerate(family)})
    cfg = SamplerConfig(seed=2, samples=60)
    est = hp_norm(D, 2, cfg)
    assert est.value > 0
    rep = ruc_ratio(D, 2, cfg)
    assert 0.25 <= rep.ratio <= 4.0


def test_kernel_values_reused_by_experiments():
    rows = experiment_lacunary_power(4, CFG)
    assert rows[1].rhs.value == dirichlet_kernel_l1(2).value
