import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from starspec import (
    broken_line_graph,
    convention_map_broken_line,
    derive_edge_constants,
    inverse_convention_map,
    symmetric_graph,
    validate,
)
from starspec.errors import AngleOrdering, AngleRange, Confinement, ValidationError


def test_edge_constants_free():
    c = derive_edge_constants(0.0)
    assert (c.epsilon, c.p, c.m) == (0.0, 1.0, 1.0)


def test_edge_constants_unit():
    c = derive_edge_constants(1.0)
    np.testing.assert_allclose((c.epsilon, c.p, c.m), (-1.0, 0.75, 1.25), rtol=0, atol=1e-15)


@pytest.mark.parametrize("tau", [2.0, -2.0, 2.0 + 5e-13])
def test_confinement(tau):
    with pytest.raises(Confinement):
        derive_edge_constants(tau)


@given(st.floats(-50, 50).filter(lambda t: abs(abs(t) - 2) > 1e-3))
def test_unimodularity_identity(tau):
    c = derive_edge_constants(tau)
    assert abs((c.m ** 2 - tau ** 2) / c.p ** 2 - 1.0) < 1e-12
    assert c.m - c.p == pytest.approx(tau * tau / 2)


def test_validate_examples():
    g = validate(2, [math.pi / 3], [1, 1])
    assert g.n_edges == 2
    g3 = validate(3, [math.pi / 3, math.pi], [1, 1, 1])
    assert g3.symmetric
    with pytest.raises(AngleOrdering):
        validate(3, [math.pi, math.pi / 3], [1, 1, 1])


def test_validate_range_errors():
    with pytest.raises(AngleRange):
        validate(2, [0.0], [1, 1])
    with pytest.raises(AngleRange):
        validate(3, [1.0, 2 * math.pi - 1.0], [1, 1, 1])
    with pytest.raises(Confinement):
        validate(2, [1.0], [1, -2])
    with pytest.raises(ValidationError):
        validate(3, [1.0], [1, 1, 1])


def test_sector_lengths_sum():
    g = validate(4, [0.3, 1.0, 4.0], [1, 0, 2.5, -1])
    assert g.sector_lengths.sum() == pytest.approx(2 * math.pi)
    assert g.omega(0) == -0.3 and g.omega(4) == pytest.approx(2 * math.pi - 0.3)


@pytest.mark.parametrize("n", range(2, 65))
def test_symmetric_graph_valid(n):
    g = symmetric_graph(n, np.zeros(n))
    np.testing.assert_allclose(g.sector_lengths, 2 * math.pi / n, atol=1e-12)
    assert g.symmetric


def test_symmetric_examples():
    np.testing.assert_allclose(symmetric_graph(3, [1, 1, 1]).omegas, [math.pi / 3, math.pi])
    np.testing.assert_allclose(symmetric_graph(2, [1, -1]).omegas, [math.pi / 2])
    g6 = symmetric_graph(6, [1, -1, 1, 1, -1, 1])
    np.testing.assert_allclose(g6.omegas, (2 * np.arange(1, 6) - 1) * math.pi / 6)


def test_convention_map():
    assert convention_map_broken_line(0.0, 0.0) == (0.0, 0.0)
    assert convention_map_broken_line(1.0, 1.0) == (-1.0, -1.0)
    assert convention_map_broken_line(3.0, -3.0) == (3.0, -3.0)


@given(st.floats(-10, 10), st.floats(-10, 10))
def test_convention_map_roundtrip(tl, tr):
    assert inverse_convention_map(*convention_map_broken_line(tl, tr)) == (tl, tr)


def test_broken_line_angle_range():
    with pytest.raises(AngleRange):
        broken_line_graph(1, 1, math.pi)


def test_graph_is_immutable():
    g = symmetric_graph(3, [1, 1, 1])
    with pytest.raises(ValueError):
        g.taus[0] = 5.0
