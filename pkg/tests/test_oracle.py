import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncanonical import ensemble as E
from ncanonical import oracle as O
from ncanonical.exceptions import InputError


def test_uniform_weights():
    ens = O.make_ensemble([4, 5, 6], 0.0)
    np.testing.assert_allclose(ens.weights, 1 / 3, atol=1e-16)


def test_three_state_weights():
    ens = O.make_ensemble([4, 5, 6], 1.0)
    np.testing.assert_allclose(
        ens.weights, [0.6652409557748219, 0.24472847105479764, 0.09003057317038046], rtol=1e-14
    )


def test_two_state_logistic():
    ens = O.make_ensemble([0, 7], 0.1)
    p = 1 / (1 + math.exp(-0.7))
    np.testing.assert_allclose(ens.weights, [p, 1 - p], rtol=1e-14)


@pytest.mark.parametrize("states", [[], [1, 1], [1, 2, 1]])
def test_bad_states(states):
    with pytest.raises(InputError):
        O.make_ensemble(states, 0.2)


def test_non_integer_state():
    with pytest.raises(InputError):
        O.make_ensemble([1, 2.5], 0.2)


def test_non_finite_gamma():
    with pytest.raises(InputError):
        O.make_ensemble([1, 2], math.inf)


def test_too_many_states():
    with pytest.raises(InputError):
        O.make_ensemble(range(O.MAX_STATES + 1), 0.0)


def test_large_state_list():
    ens = O.make_ensemble(range(O.MAX_STATES), 1e-3)
    assert O.oracle_moment(ens, 0) == pytest.approx(1.0, abs=1e-14)
    assert O.oracle_purity(ens) >= 1 / O.MAX_STATES


def test_moments():
    ens = O.make_ensemble([4, 5, 6], 0.0)
    assert O.oracle_moment(ens, 0) == 1.0
    assert O.oracle_moment(ens, 1) == pytest.approx(5.0, abs=1e-15)
    ens = O.make_ensemble([4, 5, 6], 1.0)
    assert O.oracle_mean(ens) == pytest.approx(4.424789617395558, rel=1e-14)
    var = O.oracle_moment(ens, 2) - O.oracle_mean(ens) ** 2
    assert var == pytest.approx(0.4244045446892544, rel=1e-12)
    assert O.oracle_variance(ens) == pytest.approx(0.4244045446892544, rel=1e-14)


def test_purity():
    assert O.oracle_purity(O.make_ensemble([4, 5, 6], 0.0)) == pytest.approx(1 / 3, abs=1e-16)
    assert O.oracle_purity(O.make_ensemble([4, 5, 6], 1.0)) == pytest.approx(0.5105430578904047, rel=1e-14)
    assert O.oracle_purity(O.make_ensemble([17], 2.0)) == 1.0


def test_cov():
    assert O.oracle_cov(O.make_ensemble([1, 3, 5, 7], 0.0)) == pytest.approx(0.0, abs=1e-15)
    ens = O.make_ensemble([4, 5, 6], 1.0)
    assert O.oracle_cov(ens) == pytest.approx(-0.14077035746963013, rel=1e-13)
    naive = math.fsum(w * w * m for w, m in zip(ens.weights, ens.states))
    naive -= O.oracle_purity(ens) * O.oracle_mean(ens)
    assert O.oracle_cov(ens) == pytest.approx(naive, abs=1e-14)
    assert O.oracle_cov(O.make_ensemble([9], -3.0)) == 0.0


def test_entropy_and_log_partition():
    ens = O.make_ensemble([4, 5, 6], 1.0)
    assert O.oracle_entropy(ens) == pytest.approx(0.8323955818399389, rel=1e-14)
    assert O.oracle_log_partition(ens) == pytest.approx(-3.59239403555562, rel=1e-14)
    assert O.oracle_entropy(O.make_ensemble([4, 5, 6], 50.0)) == pytest.approx(9.83662422461598e-21, rel=1e-12)


@given(
    st.lists(st.integers(-50, 50), min_size=1, max_size=12, unique=True),
    st.floats(-3, 3, allow_nan=False),
)
def test_ensemble_invariants(states, g):
    ens = O.make_ensemble(states, g)
    assert abs(math.fsum(ens.weights) - 1) <= 1e-12
    n = len(states)
    assert 1 / n - 1e-15 <= O.oracle_purity(ens) <= 1 + 1e-15
    # pairwise ratios follow exp(-gamma dM)
    for i in range(n - 1):
        wi, wj = ens.weights[i], ens.weights[i + 1]
        if min(wi, wj) > 1e-290:
            dm = states[i + 1] - states[i]
            assert wi / wj == pytest.approx(math.exp(g * dm), rel=1e-10)


@given(st.lists(st.integers(-20, 20), min_size=2, max_size=8, unique=True))
def test_purity_minimum_only_at_zero(states):
    n = len(states)
    assert O.oracle_purity(O.make_ensemble(states, 0.0)) == pytest.approx(1 / n, abs=1e-15)
    assert O.oracle_purity(O.make_ensemble(states, 0.05)) > 1 / n


@pytest.mark.parametrize("q", range(1, 7))
def test_matches_closed_forms(q):
    n = q + 4
    spec = E.DomainSpec(n, q)
    for g in np.linspace(-30 / q, 30 / q, 61):
        ens = O.three_state_ensemble(n, q, g)
        assert O.oracle_mean(ens) == pytest.approx(E.mean_population(spec, g), rel=1e-12, abs=1e-12)
        assert O.oracle_variance(ens) == pytest.approx(E.variance(q, g), rel=1e-12, abs=1e-12)
        assert O.oracle_purity(ens) == pytest.approx(E.purity(q, g), abs=1e-12)
        assert O.oracle_cov(ens) == pytest.approx(E.covariance_rho_m(q, g), abs=1e-12)
        assert O.oracle_entropy(ens) == pytest.approx(E.entropy(spec, g), abs=1e-12)
        assert O.oracle_log_partition(ens) == pytest.approx(E.log_partition(spec, g), rel=1e-12, abs=1e-12)
