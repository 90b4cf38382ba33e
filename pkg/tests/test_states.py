"""State/unitary/context layer: canonicalization, Haar laws, embeddings."""

import numpy as np
import pytest
from scipy import stats

import ontolab as ol
from ontolab.states import complement_basis, element_matrix, haar_states_matrix


def test_make_pure_state_examples():
    s = ol.make_pure_state([1, 0])
    assert np.allclose(s.amplitudes, [1, 0])

    s = ol.make_pure_state([0, 2j])
    assert np.allclose(s.amplitudes, [0, 1])

    s = ol.make_pure_state([1, 1, 0])
    assert np.allclose(s.amplitudes, [1 / np.sqrt(2), 1 / np.sqrt(2), 0])


def test_zero_vector_rejected():
    with pytest.raises(ol.ZeroVectorError):
        ol.make_pure_state([0, 0, 0])
    with pytest.raises(ol.ZeroVectorError):
        ol.make_pure_state([1e-15, 0])


def test_dimension_bounds():
    with pytest.raises(ValueError):
        ol.make_pure_state([1.0])
    with pytest.raises(ValueError):
        ol.make_pure_state(np.ones(9))


def test_norm_invariant_and_idempotency():
    rng = np.random.default_rng(0)
    for _ in range(200):
        dim = rng.integers(2, 9)
        raw = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        s = ol.make_pure_state(raw)
        assert abs(np.sum(np.abs(s.amplitudes) ** 2) - 1) < 1e-12
        again = ol.make_pure_state(s.amplitudes)
        assert np.array_equal(again.amplitudes, s.amplitudes)


def test_canonical_pivot_real_nonnegative():
    rng = np.random.default_rng(1)
    for _ in range(100):
        s = ol.haar_state(4, rng)
        pivot = np.argmax(np.abs(s.amplitudes))
        z = s.amplitudes[pivot]
        assert z.imag == 0.0 and z.real >= 0.0


def test_overlap_examples():
    e0 = ol.make_pure_state([1, 0])
    e1 = ol.make_pure_state([0, 1])
    assert ol.overlap(e0, e1) == pytest.approx(0.0, abs=1e-15)
    assert ol.overlap(e0, e0) == pytest.approx(1.0, abs=1e-12)
    tilted = ol.make_pure_state([np.cos(np.pi / 6), np.sin(np.pi / 6)])
    assert ol.overlap(e0, tilted) == pytest.approx(0.75, abs=1e-12)
    with pytest.raises(ol.DimensionMismatchError):
        ol.overlap(e0, ol.make_pure_state([1, 0, 0]))


def test_overlap_symmetric():
    rng = np.random.default_rng(2)
    for _ in range(50):
        a, b = ol.haar_state(3, rng), ol.haar_state(3, rng)
        assert ol.overlap(a, b) == pytest.approx(ol.overlap(b, a), abs=1e-14)


def test_distance_examples():
    e0 = ol.make_pure_state([1, 0])
    e1 = ol.make_pure_state([0, 1])
    assert ol.distance(e0, e1) == pytest.approx(1.0)
    assert ol.distance(e0, e0) == pytest.approx(0.0, abs=1e-12)
    tilted = ol.make_pure_state([np.cos(np.pi / 6), np.sin(np.pi / 6)])
    assert ol.distance(e0, tilted) == pytest.approx(0.25, abs=1e-12)


def test_phase_gauge_invariance():
    rng = np.random.default_rng(3)
    for _ in range(50):
        raw = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        phase = np.exp(1j * rng.uniform(0, 2 * np.pi))
        a = ol.make_pure_state(raw)
        b = ol.make_pure_state(phase * raw)
        assert np.allclose(a.amplitudes, b.amplitudes, atol=1e-12)


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_haar_overlap_marginal(dim):
    # overlap with a fixed state has CDF 1 - (1-t)^(D-1)
    rng = np.random.default_rng(100 + dim)
    probe = np.zeros(dim)
    probe[0] = 1.0
    samples = haar_states_matrix(dim, 30_000, rng)
    t = np.abs(samples @ probe) ** 2
    ks = stats.kstest(t, lambda x: ol.overlap_marginal_cdf(dim, x)).statistic
    assert ks < 0.015


def test_haar_unitary_invariance_of_overlap_statistics():
    # overlap statistics with any fixed reference state share one law
    rng = np.random.default_rng(4)
    psi1 = ol.make_pure_state([1, 0, 0])
    psi2 = ol.haar_state(3, rng)
    samples = haar_states_matrix(3, 30_000, rng)
    t1 = np.abs(samples @ psi1.amplitudes.conj()) ** 2
    samples = haar_states_matrix(3, 30_000, rng)
    t2 = np.abs(samples @ psi2.amplitudes.conj()) ** 2
    assert stats.ks_2samp(t1, t2).statistic < 0.015


def test_unitary_type_checks():
    with pytest.raises(ValueError):
        ol.Unitary(np.array([[1.0, 1.0], [0.0, 1.0]]))
    u = ol.haar_unitary(3, np.random.default_rng(5))
    dev = np.max(np.abs(u.entries.conj().T @ u.entries - np.eye(3)))
    assert dev < 1e-10


def test_apply_unitary_examples():
    rng = np.random.default_rng(6)
    s = ol.haar_state(2, rng)
    ident = ol.Unitary(np.eye(2, dtype=complex))
    assert np.allclose(ol.apply_unitary(ident, s).amplitudes, s.amplitudes)

    flip = ol.Unitary(np.array([[0, 1], [1, 0]], dtype=complex))
    assert np.allclose(ol.apply_unitary(flip, ol.make_pure_state([1, 0])).amplitudes, [0, 1])

    u = ol.haar_unitary(3, rng)
    a, b = ol.haar_state(3, rng), ol.haar_state(3, rng)
    assert ol.overlap(ol.apply_unitary(u, a), ol.apply_unitary(u, b)) == pytest.approx(
        ol.overlap(a, b), abs=1e-10
    )


def test_embed_examples():
    e0 = ol.make_pure_state([1, 0])
    emb = ol.embed(e0, 3)
    assert np.allclose(emb.amplitudes, [1, 0, 0])
    with pytest.raises(ol.DimensionMismatchError):
        ol.embed(ol.make_pure_state([1, 0, 0]), 2)

    rng = np.random.default_rng(7)
    a, b = ol.haar_state(2, rng), ol.haar_state(2, rng)
    assert ol.overlap(ol.embed(a, 4), ol.embed(b, 4)) == pytest.approx(ol.overlap(a, b), abs=1e-12)

    back = ol.make_pure_state(ol.embed(a, 4).amplitudes[:2])
    assert np.allclose(back.amplitudes, a.amplitudes, atol=1e-12)


def test_haar_context_invariants():
    rng = np.random.default_rng(8)
    c = ol.haar_context(3, 3, rng)
    for i in range(3):
        for j in range(i + 1, 3):
            assert ol.overlap(c.elements[i], c.elements[j]) < 1e-10

    c23 = ol.haar_context(2, 3, rng)
    assert all(abs(e.amplitudes[2]) < 1e-14 for e in c23.elements)


def test_context_completeness():
    # full contexts resolve the identity: overlaps with any state sum to 1
    rng = np.random.default_rng(9)
    for _ in range(50):
        c = ol.haar_context(3, 3, rng)
        lam = ol.haar_state(3, rng)
        total = sum(ol.overlap(lam, e) for e in c.elements)
        assert total == pytest.approx(1.0, abs=1e-10)


def test_haar_context_mean_overlap():
    # E[overlap(lam, element_0)] = 1/3 by symmetry and completeness
    rng = np.random.default_rng(10)
    lam = ol.haar_state(3, rng).amplitudes
    n = 20_000
    u = np.stack([element_matrix(ol.haar_context(3, 3, rng)) for _ in range(n)])
    t0 = np.abs(u[:, 0, :] @ lam.conj()) ** 2
    se = t0.std() / np.sqrt(n)
    assert abs(t0.mean() - 1 / 3) < 3 * se


def test_context_rejects_nonorthogonal():
    e0 = ol.make_pure_state([1, 0])
    tilted = ol.make_pure_state([np.cos(0.3), np.sin(0.3)])
    with pytest.raises(ValueError):
        ol.Context(2, 2, (e0, tilted))


def test_unitary_fixing_axis():
    rng = np.random.default_rng(11)
    axis = ol.haar_state(3, rng)
    u = ol.unitary_fixing_axis(axis, rng)
    assert ol.overlap(ol.apply_unitary(u, axis), axis) == pytest.approx(1.0, abs=1e-10)

    comp = complement_basis(axis)
    perp = ol.PureState(comp[:, 0])
    moved = ol.apply_unitary(u, perp)
    assert ol.overlap(moved, axis) < 1e-10

    # rotating a context about element 0 keeps the others orthogonal to it
    base = ol.haar_context(3, 3, rng)
    u0 = ol.unitary_fixing_axis(base.elements[0], rng)
    rotated = ol.rotate_context(u0, base)
    assert ol.overlap(rotated.elements[0], base.elements[0]) == pytest.approx(1.0, abs=1e-10)
    assert ol.overlap(rotated.elements[1], base.elements[0]) < 1e-10
    assert ol.overlap(rotated.elements[2], base.elements[0]) < 1e-10


def test_unitary_fixing_axis_angle_form():
    axis = ol.make_pure_state([0, 0, 1])
    u = ol.unitary_fixing_axis(axis, angle=0.7)
    assert ol.overlap(ol.apply_unitary(u, axis), axis) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        ol.unitary_fixing_axis(ol.make_pure_state([1, 0]), angle=0.5)
    with pytest.raises(ValueError):
        ol.unitary_fixing_axis(axis)


def test_sphere_state():
    v = ol.RealSphereState(np.array([0.0, 0.0, 2.0]))
    assert np.allclose(v.vector, [0, 0, 1])
    with pytest.raises(ol.ZeroVectorError):
        ol.RealSphereState(np.zeros(3))
