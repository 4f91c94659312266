import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from starspec import edge_transfer, monodromy, secular, secular_det_oracle, symmetric_graph, validate, wrap_transfer
from starspec.errors import IndexOutOfRange
from starspec.transfer import system_matrix

from conftest import random_graph

taus = st.floats(-10, 10).filter(lambda t: abs(abs(t) - 2) > 1e-2)


def test_free_edge_is_identity():
    g = validate(2, [1.0], [1.0, 0.0])
    np.testing.assert_allclose(edge_transfer(g, 2, 0.37).entries, np.eye(2), atol=1e-15)


def test_edge_transfer_at_zero_phase():
    # omega_{j-1} = 0 is not a valid geometry, so build the matrix at lambda = -1/2,
    # where the phase factor is 1 for every angle
    g = validate(2, [1.0], [0.0, 1.0])
    want = np.array([[1.25, 1.0], [1.0, 1.25]]) / 0.75
    np.testing.assert_allclose(edge_transfer(g, 2, -0.5).entries, want, atol=1e-15)


def test_edge_index_range():
    g = symmetric_graph(3, [1, 1, 1])
    for j in (0, 1, 4):
        with pytest.raises(IndexOutOfRange):
            edge_transfer(g, j, 0.0)


def test_wrap_examples():
    g = validate(2, [math.pi / 3], [0.0, 1.0])
    np.testing.assert_allclose(wrap_transfer(g, 0.0).entries, np.eye(2), atol=1e-15)
    np.testing.assert_allclose(wrap_transfer(g, -0.5).entries, -np.eye(2), atol=1e-15)
    g = validate(2, [math.pi / 3], [1.0, 0.5])
    b = wrap_transfer(g, 0.3).entries
    assert b[1, 1] == pytest.approx(np.conj(b[0, 0]))
    assert b[1, 0] == pytest.approx(np.conj(b[0, 1]))


@settings(max_examples=200, deadline=None)
@given(st.floats(-10, 10).filter(lambda t: abs(abs(t) - 2) > 0.25), st.floats(0.05, 3.0), st.floats(-2, 2))
def test_unit_determinant(tau, w, lam):
    g = validate(2, [w], [tau, tau])
    assert abs(edge_transfer(g, 2, lam).det - 1) < 1e-12
    assert abs(wrap_transfer(g, lam).det - 1) < 1e-12


@settings(max_examples=200, deadline=None)
@given(taus, st.floats(0.05, 3.0), st.floats(-2, 2))
def test_unit_determinant_near_confinement(tau, w, lam):
    g = validate(2, [w], [tau, tau])
    # det = (m^2 - tau^2)/p^2 cancels; rounding scales with the squared entries
    for t in (edge_transfer(g, 2, lam), wrap_transfer(g, lam)):
        scale = max(1.0, float(np.sum(np.abs(t.entries) ** 2)))
        assert abs(t.det - 1) < 1e-14 * scale


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6), st.floats(-2, 2))
def test_monodromy_structure(seed, lam):
    g = random_graph(np.random.default_rng(seed))
    m = monodromy(g, lam)
    t = m.t
    scale = max(1.0, np.abs(t).max())
    assert abs(np.linalg.det(t) - 1) < 1e-10 * scale ** 2
    assert abs(t[1, 1] - np.conj(t[0, 0])) < 1e-12 * scale
    assert abs(t[1, 0] - np.conj(t[0, 1])) < 1e-12 * scale
    assert abs(np.trace(t).imag) < 1e-10 * scale
    assert m.secular == pytest.approx(np.trace(t).real - 2)


def test_free_monodromy():
    g = symmetric_graph(4, [0, 0, 0, 0])
    lam = np.linspace(-2, 2, 41)
    np.testing.assert_allclose(secular(g, lam), 2 * np.cos(2 * np.pi * lam) - 2, atol=1e-13)
    m = monodromy(g, 0.3)
    np.testing.assert_allclose(m.t, np.diag([np.exp(-0.6j * np.pi), np.exp(0.6j * np.pi)]), atol=1e-14)


def test_single_edge_closed_form():
    g = validate(2, [1.2], [1.0, 0.0])
    lam = np.linspace(-1, 1, 11)
    np.testing.assert_allclose(secular(g, lam), 2 * (5 / 3) * np.cos(2 * np.pi * lam) - 2, atol=1e-13)
    root = -math.acos(3 / 5) / (2 * math.pi)
    assert root == pytest.approx(-0.147584, abs=1e-6)
    assert abs(secular(g, root)) < 1e-14
    assert abs(secular_det_oracle(g, root)) < 1e-9


def test_secular_equals_minus_det():
    rng = np.random.default_rng(3)
    for _ in range(30):
        g = random_graph(rng)
        lam = rng.uniform(-2, 2)
        m = monodromy(g, lam)
        assert m.secular == pytest.approx(-np.linalg.det(m.t - np.eye(2)).real, rel=1e-9, abs=1e-10)


def test_system_matrix_shape():
    g = symmetric_graph(5, [1, 2.5, 0.4, -1, 3])
    mat = system_matrix(g, 0.1)
    assert mat.shape == (10, 10)
    assert np.all(np.count_nonzero(np.abs(mat) > 0, axis=1) == 3)


def test_det_oracle_nonzero_free():
    g = symmetric_graph(3, [0, 0, 0])
    assert abs(secular_det_oracle(g, 0.25)) > 1e-3


def test_det_oracle_magnitude_tracks_secular():
    # |det M| = |det(I - T)| = |G| for this block ordering
    rng = np.random.default_rng(11)
    for _ in range(50):
        g = random_graph(rng)
        lam = rng.uniform(-1, 0)
        assert abs(secular_det_oracle(g, lam)) == pytest.approx(abs(secular(g, lam)), rel=1e-8, abs=1e-12)


def test_sign_changes_colocated():
    rng = np.random.default_rng(5)
    x = np.linspace(-1, 0, 2001)
    for _ in range(100):
        g = random_graph(rng, n=int(rng.integers(2, 7)))
        gv = secular(g, x)
        dv = np.array([secular_det_oracle(g, v) for v in x[::10]])
        # zeros of G coincide with small |det|: check at every bracket of G
        for i in np.flatnonzero(np.sign(gv[:-1]) * np.sign(gv[1:]) < 0):
            mid = 0.5 * (x[i] + x[i + 1])
            assert abs(secular_det_oracle(g, mid)) < 1e-2 * max(1, np.abs(dv).max())


def test_spectral_symmetry_of_secular():
    rng = np.random.default_rng(8)
    lam = np.linspace(-2, 2, 101)
    for _ in range(20):
        g = random_graph(rng)
        np.testing.assert_allclose(secular(g, -1 - lam), secular(g, lam), atol=1e-9)


def test_large_lambda_phase_wrapping():
    g = symmetric_graph(3, [1, 1, 1])
    # every phase in the symmetric 3-star is 3-periodic in lambda
    assert secular(g, 3e5 + 0.25) == pytest.approx(secular(g, 0.25), abs=1e-8)
