"""Response functions, updates, faithfulness."""

import numpy as np
import pytest

import ontolab as ol
from ontolab.measurement import base_context_containing, outcomes_matrix
from ontolab.models import sample_conditional_matrix
from ontolab.states import element_matrix, haar_states_matrix


def test_outcome_of_central_elements():
    rng = np.random.default_rng(0)
    c = ol.haar_context(3, 3, rng)
    for i in range(3):
        assert ol.outcome_of(c.elements[i], c) == i


def test_outcome_tie_rule_embedded():
    # a state orthogonal to the whole embedded subspace overlaps nothing:
    # ties resolve to the lowest index
    c = ol.computational_context(2, 3)
    lam = ol.make_pure_state([0, 0, 1])
    assert ol.outcome_of(lam, c) == 0


def test_outcome_dimension_mismatch():
    c = ol.computational_context(2, 2)
    with pytest.raises(ol.DimensionMismatchError):
        ol.outcome_of(ol.make_pure_state([1, 0, 0]), c)


def test_heaviside_equivalence_qubit():
    # for d = D = 2 the argmax rule coincides with the step-function form
    # theta(overlap - 1/2), overlaps summing to one
    rng = np.random.default_rng(1)
    n = 100_000
    lam = haar_states_matrix(2, n, rng)
    ctx = ol.haar_context(2, 2, rng)
    elements = element_matrix(ctx)
    t0 = np.abs(lam @ elements[0].conj()) ** 2
    argmax_rule = outcomes_matrix(lam, elements)
    heaviside_rule = np.where(t0 - 0.5 >= 0.0, 0, 1)
    assert np.array_equal(argmax_rule, heaviside_rule)


def test_characteristic_partition():
    rng = np.random.default_rng(2)
    c = ol.haar_context(3, 3, rng)
    for _ in range(50):
        lam = ol.haar_state(3, rng)
        values = [ol.characteristic(lam, c, i) for i in range(3)]
        assert sum(values) == 1
    assert ol.characteristic(c.elements[1], c, 1) == 1
    assert ol.characteristic(c.elements[1], c, 0) == 0
    with pytest.raises(IndexError):
        ol.characteristic(lam, c, 3)


def test_outcome_unitary_covariance():
    rng = np.random.default_rng(3)
    for _ in range(50):
        c = ol.haar_context(3, 3, rng)
        lam = ol.haar_state(3, rng)
        u = ol.haar_unitary(3, rng)
        assert ol.outcome_of(ol.apply_unitary(u, lam), ol.rotate_context(u, c)) == ol.outcome_of(lam, c)


def test_collapse_update():
    model = ol.make_model("ks-qubit")
    c = ol.computational_context(2, 2)
    state = ol.collapse_update(model, c, 0)
    assert np.allclose(state.center.amplitudes, [1, 0])
    with pytest.raises(IndexError):
        ol.collapse_update(model, c, 2)


def test_bayes_posterior_samples_give_conditioned_outcome():
    rng = np.random.default_rng(4)
    model = ol.make_model("linear-trace", delta=0.4)
    psi = ol.haar_state(3, rng)
    state = ol.EpistemicState(model, psi)
    c = ol.computational_context(3, 3)
    elements = element_matrix(c)
    for i in range(3):
        post = ol.bayes_update(state, c, i)
        lam = post.sample_matrix(500, rng)
        assert np.all(outcomes_matrix(lam, elements) == i)


def test_bayes_posterior_centered_prior_accepts_everything():
    # prior centered on element 0 with delta >= 1/2 never answers anything else
    rng = np.random.default_rng(5)
    model = ol.make_model("linear-trace")
    c = ol.computational_context(3, 3)
    state = ol.EpistemicState(model, c.elements[0])
    lam = sample_conditional_matrix(state, 20_000, rng)
    assert np.all(outcomes_matrix(lam, element_matrix(c)) == 0)


def test_bayes_zero_probability_outcome():
    rng = np.random.default_rng(6)
    model = ol.make_model("linear-trace")
    c = ol.computational_context(3, 3)
    state = ol.EpistemicState(model, c.elements[0])
    post = ol.bayes_update(state, c, 1, max_draws=2_000)
    with pytest.raises(ol.ZeroProbabilityOutcomeError):
        post.sample(rng)


def test_bayes_density_is_filtered_prior():
    rng = np.random.default_rng(7)
    model = ol.make_model("ks-qubit")
    psi = ol.haar_state(2, rng)
    state = ol.EpistemicState(model, psi)
    c = ol.computational_context(2, 2)
    post = ol.bayes_update(state, c, 0)
    for _ in range(20):
        lam = ol.haar_state(2, rng)
        want = ol.density_at(state, lam) * ol.characteristic(lam, c, 0)
        assert post.unnormalized_density(lam) == pytest.approx(want, abs=1e-12)


def test_faithful_analytic_examples():
    rng = np.random.default_rng(8)
    target = ol.haar_state(3, rng)
    assert ol.faithful_analytic(target, target)

    # overlap 0.4: some context containing the target must flip the outcome
    eta = ol.PureState(ol.states.complement_basis(target)[:, 0])
    lam = ol.make_pure_state(
        np.sqrt(0.4) * target.amplitudes + np.sqrt(0.6) * eta.amplitudes
    )
    assert not ol.faithful_analytic(lam, target)
    assert not ol.faithful_sampled(lam, target, 200, rng)

    with pytest.raises(ol.DimensionMismatchError):
        ol.faithful_analytic(ol.make_pure_state([1, 0]), target)


def test_faithful_sampled_trivia():
    rng = np.random.default_rng(9)
    target = ol.haar_state(3, rng)
    assert ol.faithful_sampled(target, target, 10, rng)

    perp = ol.PureState(ol.states.complement_basis(target)[:, 1])
    assert not ol.faithful_sampled(perp, target, 50, rng)


def test_faithful_agreement_small():
    # analytic rule and context sampling agree away from the overlap = 1/2 boundary
    rng = np.random.default_rng(10)
    target = ol.make_pure_state([1, 0, 0])
    disagreements = 0
    for _ in range(300):
        lam = ol.haar_state(3, rng)
        a = ol.faithful_analytic(lam, target)
        s = ol.faithful_sampled(lam, target, 300, rng)
        if a != s:
            disagreements += 1
            assert abs(ol.overlap(lam, target) - 0.5) < 0.01
    assert disagreements <= 3


def test_support_inside_faithful_set():
    # delta >= 1/2 keeps every sample strictly faithful to its center
    rng = np.random.default_rng(11)
    for model in (ol.make_model("linear-trace"), ol.make_model("linear-trace", delta=0.5)):
        target = ol.haar_state(3, rng)
        lam = sample_conditional_matrix(ol.EpistemicState(model, target), 20_000, rng)
        t = np.abs(lam @ target.amplitudes.conj()) ** 2
        assert np.all(t > 0.5)


def test_base_context_containing():
    rng = np.random.default_rng(12)
    axis = ol.haar_state(3, rng)
    c = base_context_containing(axis)
    assert c.system_dim == c.ontic_dim == 3
    assert ol.overlap(c.elements[0], axis) == pytest.approx(1.0, abs=1e-12)
