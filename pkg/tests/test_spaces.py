import math

import numpy as np
import pytest
from scipy import integrate

from dirichlet_ruc import (
    DomainError,
    FunctionLr,
    HilbertSpace,
    SequenceSpace,
    ShapeError,
    SupSpace,
    TrigPolynomial,
    norm,
    summing_combination,
    trig_eval,
)
from dirichlet_ruc.errors import ArityError
from dirichlet_ruc.spaces import CombinationEvaluator, as_element, is_hilbertian

from conftest import assert_close


def test_norm_examples():
    assert norm(SequenceSpace(1, 3), [1, 1, 1]).value == 3.0
    assert norm(SupSpace(3), [1, -2, 1]).value == 2.0
    assert norm(HilbertSpace(2), [3, 4]).value == 5.0


def test_function_l1_norm_of_one_plus_w():
    # Independent oracle: (1/2pi) * integral |1 + e^{it}| dt.
    oracle, err = integrate.quad(lambda t: abs(1 + np.exp(1j * t)), 0, 2 * math.pi)
    oracle /= 2 * math.pi
    assert_close(oracle, 4 / math.pi, 1e-9, "oracle vs closed form")
    est = norm(FunctionLr(1, 1), {(0,): 1, (1,): 1})
    assert est.mode == "quadrature"
    assert abs(est.value - 4 / math.pi) <= max(3 * est.quad_error, 1e-3)


def test_space_validation():
    with pytest.raises(DomainError):
        SequenceSpace(0.5, 3)
    with pytest.raises(DomainError):
        FunctionLr(1, 0)
    with pytest.raises(ShapeError):
        norm(HilbertSpace(3), [1, 2])


def test_homogeneity_exact_spaces(rng):
    spaces = [SequenceSpace(1, 4), SequenceSpace(2.5, 4), HilbertSpace(4), SupSpace(4)]
    for i in range(200):
        space = spaces[i % len(spaces)]
        x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        c = complex(rng.standard_normal(), rng.standard_normal())
        lhs = norm(space, c * x).value
        rhs = abs(c) * norm(space, x).value
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, rhs)


def test_homogeneity_function_space(rng):
    space = FunctionLr(1.5, 2)
    for _ in range(20):
        coeffs = {
            (int(rng.integers(-3, 4)), int(rng.integers(-3, 4))): complex(
                rng.standard_normal(), rng.standard_normal()
            )
            for _ in range(3)
        }
        x = TrigPolynomial(coeffs, 2)
        c = complex(rng.standard_normal(), rng.standard_normal())
        ex = norm(space, x)
        ecx = norm(space, c * x)
        tol = abs(c) * ex.quad_error + ecx.quad_error + 1e-9
        assert abs(ecx.value - abs(c) * ex.value) <= tol


def test_triangle_inequality(rng):
    spaces = [SequenceSpace(1, 3), SequenceSpace(3, 3), SupSpace(3), HilbertSpace(3)]
    for i in range(200):
        space = spaces[i % len(spaces)]
        x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        y = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        nx, ny, nxy = norm(space, x), norm(space, y), norm(space, x + y)
        slack = 3 * (nx.uncertainty + ny.uncertainty + nxy.uncertainty) + 1e-12
        assert nxy.value <= nx.value + ny.value + slack


def test_triangle_inequality_function_space(rng):
    space = FunctionLr(1, 1)
    for _ in range(20):
        x = TrigPolynomial({(int(rng.integers(-4, 5)),): 1.0 + 0.3j, (1,): 0.5}, 1)
        y = TrigPolynomial({(int(rng.integers(-4, 5)),): complex(rng.standard_normal()), (0,): 1}, 1)
        nx, ny, nxy = norm(space, x), norm(space, y), norm(space, x + y)
        slack = 3 * (nx.uncertainty + ny.uncertainty + nxy.uncertainty) + 1e-9
        assert nxy.value <= nx.value + ny.value + slack


def test_function_l2_is_parseval(rng):
    space = FunctionLr(2, 2)
    for _ in range(25):
        coeffs = {
            (int(rng.integers(-5, 6)), int(rng.integers(-5, 6))): complex(
                rng.standard_normal(), rng.standard_normal()
            )
            for _ in range(4)
        }
        x = TrigPolynomial(coeffs, 2)
        est = norm(space, x)
        assert abs(est.value - x.l2_norm()) <= 1e-10


def test_summing_combination_examples():
    _, value = summing_combination([1, 1, 1])
    assert value == 3.0
    element, value = summing_combination([1, -1, 1])
    assert value == 1.0
    assert np.allclose(element, [1, 0, 1])
    assert summing_combination([1])[1] == 1.0
    with pytest.raises(DomainError):
        summing_combination([])


def test_summing_combination_matches_sup_norm(rng):
    for _ in range(50):
        m = int(rng.integers(1, 9))
        a = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        element, value = summing_combination(a)
        assert value == norm(SupSpace(m), element).value


def test_trig_eval_examples():
    assert trig_eval(TrigPolynomial({(0,): 1}, 1), (0.3 + 0.9539392014169456j,)) == 1
    assert abs(trig_eval(TrigPolynomial({(1,): 1}, 1), (-1,)) + 1) < 1e-12
    value = trig_eval(TrigPolynomial({(1,): 1, (-1,): 1}, 1), (1j,))
    assert abs(value) < 1e-12
    with pytest.raises(ArityError):
        trig_eval(TrigPolynomial({(1, 1): 1}, 2), (1j,))


def test_evaluator_matches_single_norms(rng):
    space = SequenceSpace(1.5, 3)
    xs = [rng.standard_normal(3) + 1j * rng.standard_normal(3) for _ in range(4)]
    ev = CombinationEvaluator(space, xs)
    coeff = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    combo = sum(c * x for c, x in zip(coeff, xs))
    assert abs(ev.norms(coeff[:, None])[0] - norm(space, combo).value) < 1e-10


def test_is_hilbertian():
    assert is_hilbertian(HilbertSpace(3))
    assert is_hilbertian(SequenceSpace(2, 5))
    assert is_hilbertian(SequenceSpace(7, 1))
    assert is_hilbertian(FunctionLr(2, 2))
    assert not is_hilbertian(SupSpace(2))
    assert not is_hilbertian(FunctionLr(1, 1))


def test_as_element_function_space():
    x = as_element(FunctionLr(1, 2), {(1,): 2.0})
    assert isinstance(x, TrigPolynomial) and x.coeffs == {(1, 0): 2.0}
    with pytest.raises(ShapeError):
        as_element(FunctionLr(1, 1), {(1, 2): 1.0})
