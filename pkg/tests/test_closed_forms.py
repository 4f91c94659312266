import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from starspec import broken_line_graph, deficiency_indices, find_eigenvalues, symmetric_graph, validate
from starspec.closed_forms import (
    BrokenLineConfig,
    n2_double_eigenvalue_families,
    n2_equal_secular,
    n2_opposite_secular,
    n2_ray_roots,
    n2_secular,
    n3_secular,
    n3_symmetric_deficiency,
    n3_symmetric_residual,
    n3_symmetric_roots,
)
from starspec.errors import Confinement, ZeroStrength
from starspec.graph import inverse_convention_map
from starspec.transfer import identity_defect, secular

strength = st.floats(-5, 5).filter(lambda t: abs(abs(t) - 2) > 0.05)


def test_n2_free():
    assert n2_secular(0.0, BrokenLineConfig(0, 0, 1.0)) == 0.0


@given(strength, st.floats(0.05, 3.0), st.floats(-1, 1))
def test_n2_ray_reduction(tl, w, lam):
    c = BrokenLineConfig(tl, 0.0, w)
    p, m = 1 - tl ** 2 / 4, 1 + tl ** 2 / 4
    assert n2_secular(lam, c) == pytest.approx(1 - m * math.cos(2 * math.pi * lam) / p, abs=1e-12)


@given(strength, st.floats(0.05, 3.0), st.floats(-1, 1))
def test_equal_and_opposite_are_scaled_n2(tau, w, lam):
    scale = (4 - tau ** 2) ** 2
    assert n2_equal_secular(lam, tau, w) == pytest.approx(scale * n2_secular(lam, BrokenLineConfig(tau, tau, w)), abs=1e-9)
    assert n2_opposite_secular(lam, tau, w) == pytest.approx(scale * n2_secular(lam, BrokenLineConfig(tau, -tau, w)), abs=1e-9)


def test_equal_secular_examples():
    assert n2_equal_secular(-0.5, 1.0, 0.7) == pytest.approx(9 + 25 + 16)
    assert n2_equal_secular(0.0, 1.0, math.pi / 4) == pytest.approx(-16 * (1 + math.cos(math.pi / 2)))
    assert n2_equal_secular(0.0, 1.0, math.pi / 4) < 0


def test_opposite_secular_examples():
    assert n2_opposite_secular(-0.5, 1.0, 0.7) == pytest.approx(18.0)
    assert n2_opposite_secular(0.0, 1.0, math.pi / 4) == pytest.approx(-16 * (1 - math.cos(math.pi / 2)))


@given(strength, st.floats(0.05, 3.0), st.floats(-2, 2))
def test_reflection_identities(tau, w, lam):
    assert n2_equal_secular(-1 - lam, tau, w) == pytest.approx(n2_equal_secular(lam, tau, w), abs=1e-12 * (4 + tau * tau) ** 2)
    assert n2_opposite_secular(-1 - lam, tau, w) == pytest.approx(n2_opposite_secular(lam, tau, w), abs=1e-12 * (4 + tau * tau) ** 2)


def test_ray_roots_examples():
    l1, l2 = n2_ray_roots(1.0)
    assert l2 == pytest.approx(-0.147584, abs=1e-6)
    assert l1 == pytest.approx(-0.852416, abs=1e-6)
    assert l1 + l2 == pytest.approx(-1.0, abs=1e-15)
    a, b = n2_ray_roots(1e-7)
    # weak coupling: roots approach the free values lambda = -1 and 0
    assert abs(a + 1.0) < 1e-6 and abs(b) < 1e-6
    with pytest.raises(ZeroStrength):
        n2_ray_roots(0.0)


@pytest.mark.parametrize("tl", [0.5, 1.0, 3.0, -4.0])
@pytest.mark.parametrize("w", [0.3, 1.5, 2.8])
def test_ray_roots_omega_independent(tl, w):
    for lam in n2_ray_roots(tl):
        assert abs(n2_secular(lam, BrokenLineConfig(tl, 0.0, w))) < 1e-12


def test_n2_secular_matches_general_solver():
    rng = np.random.default_rng(12)
    for _ in range(200):
        tl, tr = rng.uniform(-5, 5, 2)
        if min(abs(abs(tl) - 2), abs(abs(tr) - 2)) < 0.25:
            continue
        w = rng.uniform(0.05, math.pi - 0.05)
        cfg = BrokenLineConfig(tl, tr, w)
        recs = find_eigenvalues(broken_line_graph(tl, tr, w), -0.5 + 1e-9, 0.5 - 1e-9).records
        for r in recs:
            assert abs(n2_secular(r.lam, cfg)) < 1e-8


def test_families_classification():
    assert n2_double_eigenvalue_families(1, 1).family == "equal"
    assert n2_double_eigenvalue_families(1, -1).family == "opposite"
    assert n2_double_eigenvalue_families(4, 1).family == "product+4"
    f = n2_double_eigenvalue_families(1, -4)
    assert f.family == "product-4" and f.has_zero_mode
    g = n2_double_eigenvalue_families(1, 3)
    assert g.family == "none" and not g.has_zero_mode


def test_equal_family_example():
    fam = n2_double_eigenvalue_families(1.0, 1.0)
    w = fam.omega(0, 0)
    assert w == pytest.approx(math.pi / 2)
    assert identity_defect(broken_line_graph(1, 1, w), fam.lam(0)) < 1e-12


@pytest.mark.parametrize("pair", [(1.0, 1.0), (0.7, 0.7), (1.0, -1.0), (3.0, -3.0), (4.0, 1.0), (0.8, 5.0),
                                  (1.0, -4.0), (2.5, -1.6)])
def test_families_produce_doubles(pair):
    fam = n2_double_eigenvalue_families(*pair)
    angles = fam.angles()
    assert angles
    for k, s, w in angles:
        assert identity_defect(broken_line_graph(*pair, w), fam.lam(k)) < 1e-9


def test_zero_mode_any_angle():
    fam = n2_double_eigenvalue_families(2.5, -1.6)
    assert fam.omega(-1, 0) is None
    for w in (0.2, 1.0, 2.9):
        assert identity_defect(broken_line_graph(2.5, -1.6, w), -0.5) < 1e-12


def test_generic_pair_simple():
    for w in np.linspace(0.1, 3.0, 15):
        assert all(r.multiplicity == 1 for r in find_eigenvalues(broken_line_graph(1, 3, w), -2, 2).records)


def test_n3_free():
    lam = np.linspace(-2, 2, 9)
    np.testing.assert_allclose(n3_secular(lam, 0, 0, 0, 1.0, 2.0), 1 - np.cos(2 * np.pi * lam), atol=1e-15)


@settings(max_examples=100, deadline=None)
@given(strength, strength, strength, st.floats(0.1, 2.0), st.floats(0.1, 2.0), st.floats(-2, 2))
def test_n3_matches_monodromy(t1, t2, t3, w, gap, lam):
    w2 = w + gap
    if w2 >= 2 * math.pi - w:
        return
    g = validate(3, [w, w2], [t1, t2, t3])
    p = (1 - t1 ** 2 / 4) * (1 - t2 ** 2 / 4) * (1 - t3 ** 2 / 4)
    assert secular(g, lam) == pytest.approx(-2 * n3_secular(lam, t1, t2, t3, w, w2) / p, rel=1e-9, abs=1e-9)


@given(strength, strength, st.floats(0.1, 2.0), st.floats(0.1, 1.0), st.floats(-1, 1))
def test_n3_collapses_to_n2(t1, t2, w, gap, lam):
    tl, tr = inverse_convention_map(t1, t2)
    p = (1 - t1 ** 2 / 4) * (1 - t2 ** 2 / 4)
    want = p * n2_secular(lam, BrokenLineConfig(tl, tr, min(w, 3.0)))
    assert n3_secular(lam, t1, t2, 0.0, min(w, 3.0), min(w, 3.0) + gap) == pytest.approx(want, abs=1e-10)


@given(strength, st.floats(-2, 2))
def test_n3_symmetric_proportional(tau, lam):
    a = n3_secular(lam, tau, tau, tau, math.pi / 3, math.pi)
    b = n3_symmetric_residual(lam, tau)
    assert b == pytest.approx(-64 * a, abs=1e-9 * (4 + tau * tau) ** 3)


def test_n3_roots_examples():
    r = [m for m in n3_symmetric_roots(4.0) if m.in_window]
    lam = [m.lam for m in r]
    want = 3 / math.pi * math.atan((6 - 4 * math.sqrt(3)) / (12 + 2 * math.sqrt(3)))
    assert want == pytest.approx(-0.05724, abs=1e-5)
    assert any(abs(x - want) < 1e-14 for x in lam)
    assert not any(m.in_window for m in n3_symmetric_roots(1.0))
    special = n3_symmetric_roots(2 / math.sqrt(3))
    assert not any(m.in_window for m in special)
    assert {0.5, 1.5} <= {round(m.lam % 3, 12) for m in special}


@settings(max_examples=200, deadline=None)
@given(strength)
def test_n3_roots_satisfy_equation(tau):
    for m in n3_symmetric_roots(tau):
        assert m.residual < 1e-12


def test_n3_roots_match_solver():
    rng = np.random.default_rng(13)
    for tau in rng.uniform(-8, 8, 200):
        if abs(abs(tau) - 2) < 0.05:
            continue
        res = deficiency_indices(symmetric_graph(3, [tau] * 3))
        got = sorted(r.lam for r in res.spectrum.records)
        ref = sorted(m.lam for m in n3_symmetric_roots(tau) if m.in_window)
        np.testing.assert_allclose(got, ref, atol=1e-8)
        assert res.as_tuple() == n3_symmetric_deficiency(tau)


def test_n3_deficiency_examples():
    assert n3_symmetric_deficiency(4) == (1, 1)
    assert n3_symmetric_deficiency(1) == (0, 0)
    assert n3_symmetric_deficiency(2 * math.sqrt(3)) == (0, 0)
    with pytest.raises(Confinement):
        n3_symmetric_deficiency(2.0)
