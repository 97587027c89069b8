import numpy as np
import pytest
from hypothesis import given, strategies as st

from sekine.algebra import d, e, unit
from sekine.functionals import (
    Functional,
    convolve,
    convolve_oracle,
    convolve_power,
    counit_functional,
    evaluate,
    fourier,
    fourier_all,
    idempotency_report,
    inverse_fourier,
    is_state,
    point_d,
    point_e,
    zero_functional,
)
from sekine.idempotents import build_type2, haar_functional
from sekine.representations import labels
from sekine.selfcheck import random_functional
from sekine.walks import random_state

from oracles import as_vector, dense_convolve, split


@st.composite
def functionals(draw, k=None):
    k = draw(st.integers(2, 6)) if k is None else k
    seed = draw(st.integers(0, 2**32 - 1))
    return random_functional(k, np.random.default_rng(seed))


@st.composite
def functional_pairs(draw, max_k=6):
    k = draw(st.integers(2, max_k))
    return draw(functionals(k)), draw(functionals(k))


@st.composite
def states(draw, max_k=6):
    k = draw(st.integers(2, max_k))
    seed = draw(st.integers(0, 2**32 - 1))
    density = draw(st.sampled_from([0.2, 0.5, 1.0]))
    rank = draw(st.sampled_from([0, 1, None]))
    return random_state(k, seed, alpha_density=density, kappa_rank=rank)


def phi(k, l):
    """(1/2k) sum_i d~_{i,0} + (1/2) e~_{l,l}."""
    a = np.zeros((k, k))
    a[:, 0] = 1 / (2 * k)
    c = np.zeros((k, k))
    c[l, l] = 0.5
    return Functional(k, a, c)


def pm_family(p, m, alpha_coef):
    """alpha_coef * sum_i sum_{l<m} d~_{i,lp} + (1/2m) sum_{l<m} e~_{lp,lp}, with k = pm."""
    k = p * m
    a = np.zeros((k, k))
    c = np.zeros((k, k))
    for l in range(m):
        a[:, l * p] = alpha_coef
        c[l * p, l * p] = 1 / (2 * m)
    return Functional(k, a, c)


def test_evaluate_examples():
    k = 3
    assert evaluate(counit_functional(k), d(k, 0, 0)) == 1
    assert abs(evaluate(haar_functional(k), unit(k)) - 1) < 1e-15
    for r in range(k):
        assert abs(evaluate(haar_functional(k), e(k, r, r)) - 1 / (2 * k)) < 1e-15


def test_evaluate_rejects_mismatched_k():
    with pytest.raises(ValueError):
        evaluate(counit_functional(2), unit(3))


@given(functionals())
def test_counit_is_neutral(mu):
    eps = counit_functional(mu.k)
    assert convolve(eps, mu).distance(mu) < 1e-12
    assert convolve(mu, eps).distance(mu) < 1e-12


@pytest.mark.parametrize("k", [2, 3, 4, 7])
def test_haar_is_idempotent(k):
    h = haar_functional(k)
    assert convolve(h, h).distance(h) < 1e-15


@pytest.mark.parametrize("k", [2, 3, 5])
def test_point_masses_add_indices(k):
    for a, b, c, dd in [(0, 1, 1, 1), (1, 2, k - 1, 3), (2, 0, 2, 2)]:
        assert convolve(point_d(k, a, b), point_d(k, c, dd)).distance(point_d(k, a + c, b + dd)) < 1e-15


@given(functional_pairs(max_k=4))
def test_closed_form_matches_tensor_oracle(pair):
    mu, nu = pair
    assert convolve(mu, nu).distance(convolve_oracle(mu, nu)) < 1e-10


@given(functional_pairs(max_k=4))
def test_closed_form_matches_dense_oracle(pair):
    mu, nu = pair
    k = mu.k
    vec = dense_convolve(k, as_vector(mu.alpha, mu.kappa), as_vector(nu.alpha, nu.kappa))
    assert np.abs(vec - convolve(mu, nu).vector()).max() < 1e-10


def test_oracle_examples():
    eps = counit_functional(2)
    assert convolve_oracle(eps, eps).distance(eps) == 0
    for seed in range(5):
        phi_ = random_state(3, seed)
        assert convolve_oracle(haar_functional(3), phi_).distance(haar_functional(3)) < 1e-12


@given(st.data())
def test_convolution_is_associative(data):
    k = data.draw(st.integers(2, 5))
    a, b, c = (data.draw(functionals(k)) for _ in range(3))
    assert convolve(convolve(a, b), c).distance(convolve(a, convolve(b, c))) < 1e-10


def test_convolve_power_examples():
    mu = random_state(3, 7)
    assert convolve_power(mu, 1).distance(mu) == 0
    assert convolve_power(point_d(2, 1, 0), 2).distance(counit_functional(2)) < 1e-15
    h = haar_functional(4)
    for n in (1, 2, 5, 64):
        assert convolve_power(h, n).distance(h) < 1e-12
    sequential = mu
    for _ in range(4):
        sequential = convolve(sequential, mu)
    assert convolve_power(mu, 5).distance(sequential) < 1e-12


@pytest.mark.parametrize("n", [0, -1, 1.5])
def test_convolve_power_rejects_bad_n(n):
    with pytest.raises(ValueError):
        convolve_power(counit_functional(2), n)


def test_is_state_examples():
    assert is_state(haar_functional(3)).passed
    h = haar_functional(3)
    a = np.array(h.alpha)
    a[0, 0] = -1
    rep = is_state(Functional(3, a, h.kappa))
    assert not rep.positive and rep.failures()
    half = 0.5 * point_e(3, 0, 1)
    rep = is_state(half)
    assert rep.kappa_hermitian > 0 and not rep.passed
    assert not is_state(zero_functional(2)).passed


@pytest.mark.parametrize("k", [2, 3, 4, 6])
def test_phi_family_is_idempotent(k):
    for l in range(k):
        rep = idempotency_report(phi(k, l))
        assert rep.passed, rep.as_dict()


@pytest.mark.parametrize("p, m", [(2, 2), (2, 3), (3, 2), (2, 4)])
def test_pm_family_is_idempotent_and_type2(p, m):
    k = p * m
    f = pm_family(p, m, 1 / (2 * k * m))
    assert idempotency_report(f).passed
    assert f.distance(build_type2(k, p, 0)) < 1e-15


def test_pm_family_with_quarter_coefficient_is_not_normalized():
    # 1/(4km) on the k*m points of Z_k x pZ_k leaves total mass 3/4
    f = pm_family(2, 2, 1 / (4 * 4 * 2))
    rep = idempotency_report(f)
    assert abs(rep.residual_C - 0.25) < 1e-12
    assert not rep.passed


def test_perturbed_uniform_state_fails():
    k = 3
    a = np.full((k, k), 1 / (4 * k * k))
    a[1, 2] += 1e-3
    f = Functional(k, a, np.eye(k) / (2 * k))
    rep = idempotency_report(f)
    assert not rep.passed
    assert 1e-4 < rep.residual_A < 1e-2


@given(states())
def test_equations_agree_with_fixed_point(mu):
    # for any state, small residuals in one formulation imply small in the other
    rep = idempotency_report(mu)
    assert (rep.residual_fixed_point < 1e-9) == (max(rep.residual_A, rep.residual_B, rep.residual_C) < 1e-9)


def test_fourier_examples():
    for k in (2, 3, 4):
        eps = counit_functional(k)
        for lab in labels(k):
            assert np.abs(fourier(eps, *lab).matrix - np.eye(2)).max() < 1e-15
        h = haar_functional(k)
        for (p, q), fm in fourier_all(h).items():
            expected = np.full((2, 2), 0.5) if p == q == 0 else np.zeros((2, 2))
            assert np.abs(fm.matrix - expected).max() < 1e-12


@given(functional_pairs())
def test_fourier_is_multiplicative(pair):
    mu, nu = pair
    lhs, a, b = fourier_all(convolve(mu, nu)), fourier_all(mu), fourier_all(nu)
    for lab in lhs:
        assert np.abs(lhs[lab].matrix - a[lab] @ b[lab]).max() < 1e-10


@given(states())
def test_state_fourier_matrices_are_contractions(mu):
    for fm in fourier_all(mu).values():
        assert np.linalg.norm(fm.matrix, 2) <= 1 + 1e-12


@given(functionals())
def test_inverse_fourier_roundtrip(mu):
    mats = {lab: fm.matrix for lab, fm in fourier_all(mu).items()}
    assert inverse_fourier(mu.k, mats).distance(mu) < 1e-12


def test_functional_arithmetic_and_shape_checks():
    f = point_d(2, 0, 1)
    g = point_e(2, 1, 1)
    assert (f + g - g).distance(f) == 0
    assert (2 * f).alpha[0, 1] == 2
    assert (f @ counit_functional(2)).distance(f) < 1e-15
    with pytest.raises(ValueError):
        Functional(2, np.zeros((3, 3)), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        f.distance(point_d(3, 0, 0))


@given(states())
def test_dichotomy_holds_for_idempotent_limits(mu):
    from sekine.walks import cesaro_limit

    lim = cesaro_limit(mu)
    assert idempotency_report(lim, 1e-9).passed
    mass, trace = lim.alpha_mass.real, lim.kappa_trace.real
    assert np.isclose(mass, 1) and abs(trace) < 1e-9 or np.isclose(mass, 0.5) and np.isclose(trace, 0.5)


def test_split_helper_roundtrip():
    mu = random_state(3, 1)
    a, c = split(3, mu.vector())
    assert np.array_equal(a, mu.alpha) and np.array_equal(c, mu.kappa)
