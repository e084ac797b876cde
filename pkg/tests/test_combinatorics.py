import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinpic import combinatorics as comb
from spinpic.combinatorics import NodeOrder, Sector
from spinpic.errors import UsageError


@pytest.mark.parametrize("i,r,uv", [(1, 3, (1, 2)), (3, 5, (0, 0)), (2, 2, (1, 1))])
def test_node_order_separating(i, r, uv):
    o = comb.node_order_separating(i, r)
    assert (o.u, o.v) == uv


def test_node_order_validation():
    with pytest.raises(UsageError):
        NodeOrder(1, 1, 3)
    with pytest.raises(UsageError):
        NodeOrder(0, 3, 3)
    with pytest.raises(UsageError):
        comb.node_order_separating(0, 3)


def test_sectors():
    assert NodeOrder(0, 0, 6).sector().tag is Sector.RAMOND
    assert NodeOrder(1, 5, 6).sector().tag is Sector.NEVEU_SCHWARZ
    sr = NodeOrder(2, 4, 6).sector()
    assert sr.tag is Sector.SEMI_RAMOND and sr.ell == 2


def test_levels():
    assert comb.c_level(2, 3) == 3
    assert comb.d_level(0, 6) == 6
    assert comb.d_level(2, 8) == 2


@pytest.mark.parametrize(
    "g,r,m,ell",
    [(3, 2, (), 2), (1, 6, (0,), 6), (2, 3, (), 0), (0, 3, (1,), 1), (0, 3, (), 0)],
)
def test_ell_invariant(g, r, m, ell):
    assert comb.ell_invariant(g, r, m) == ell


def test_ell_invariant_point_count_mismatch():
    with pytest.raises(UsageError):
        comb.ell_invariant(2, 2, (0,), n=2)


def brute_divisors(n):
    return sum(1 for k in range(1, n + 1) if n % k == 0)


@pytest.mark.parametrize("g,r,m,count", [(3, 2, (), 2), (1, 12, (0,), 6), (2, 3, (), 0)])
def test_component_count(g, r, m, count):
    assert comb.component_count(g, r, m) == count


@given(st.integers(0, 4), st.integers(1, 12), st.lists(st.integers(-3, 12), max_size=3))
def test_component_count_matches_brute_divisors(g, r, m):
    ell = comb.ell_invariant(g, r, m)
    n = comb.component_count(g, r, m)
    assert n == (brute_divisors(ell) if ell else 0)
    assert (n == 1) == (ell == 1)


@pytest.mark.parametrize("g,r,n", [(2, 2, 16), (1, 5, 25), (2, 3, 0), (4, 3, 3**8)])
def test_spin_structure_count(g, r, n):
    assert comb.spin_structure_count(g, r) == n


@pytest.mark.parametrize("r,n", [(3, 5), (5, 13), (7, 25)])
def test_genus1_iso_class_count(r, n):
    assert comb.genus1_iso_class_count(r) == n


def test_genus1_iso_class_count_rejects_even():
    with pytest.raises(UsageError):
        comb.genus1_iso_class_count(4)


@pytest.mark.parametrize("u,v,r,ram", [(1, 1, 2, 2), (0, 0, 6, 1), (2, 4, 6, 3)])
def test_node_ramification(u, v, r, ram):
    assert comb.node_ramification(NodeOrder(u, v, r)) == ram


def _label(labels, name):
    return next(lab for lab in labels if lab.name == name)


def test_boundary_inventory_even_level():
    labels = comb.boundary_inventory(5, 2)
    assert _label(labels, "alpha_2").components_above == 4


def test_boundary_inventory_odd_level():
    # 3 does not divide 2*5-2, so the smallest odd example uses g = 7
    with pytest.raises(UsageError):
        comb.boundary_inventory(5, 3)
    labels = comb.boundary_inventory(7, 3)
    for i in range(2, 4):
        assert _label(labels, f"alpha_{i}").components_above == 1


def test_boundary_inventory_gluing():
    lab = _label(comb.boundary_inventory(3, 4), "gamma_2")
    assert lab.gluing_count == 2 and lab.half_gluing == 1
    assert lab.gluing_classes_range == (1, 2)


def test_boundary_inventory_odd_gluing_flagged():
    lab = _label(comb.boundary_inventory(4, 6), "gamma_3")
    assert lab.gluing_count == 3 and lab.half_gluing is None
    assert "odd gluing level" in lab.gluing_note


@pytest.mark.parametrize("r", range(2, 13))
def test_boundary_ramification_invariants(r):
    for g in range(2, 16):
        if (2 * g - 2) % r:
            continue
        for lab in comb.boundary_inventory(g, r):
            if lab.kind == "gamma":
                assert lab.ramification == r // math.gcd(lab.index, r)
                if lab.index == 0:
                    assert lab.ramification == 1
            else:
                assert (lab.ramification == 1) == ((2 * lab.index - 1) % r == 0)
                assert lab.ramification == r // comb.c_level(lab.index, r)


def test_pullback_examples():
    assert comb.pullback_coeff_alpha(1, 2, 4) == 2
    targets = comb.pullback_targets_gamma(1, 2, 8)
    assert [k for k, _ in targets] == [1, 3]
    assert all(c == 4 for _, c in targets)
    assert comb.pullback_targets_gamma(0, 2, 4) == [(0, 1), (2, 2)]


def test_pullback_rejects_bad_levels():
    with pytest.raises(UsageError):
        comb.pullback_coeff_alpha(1, 3, 4)
    with pytest.raises(UsageError):
        comb.pullback_targets_gamma(2, 2, 4)


def test_pullback_integrality_sweep():
    for r in range(1, 31):
        for s in (s for s in range(1, r + 1) if r % s == 0):
            for i in range(1, 31):
                assert comb.pullback_coeff_alpha(i, s, r) >= 1
            for j in range(s // 2 + 1):
                for _, c in comb.pullback_targets_gamma(j, s, r):
                    assert c >= 1


def test_pullback_targets_congruence_and_coefficient():
    for r in range(2, 25):
        for s in (s for s in range(1, r + 1) if r % s == 0):
            for j in range(s // 2 + 1):
                targets = comb.pullback_targets_gamma(j, s, r)
                assert targets
                for k, c in targets:
                    assert (k - j) % s == 0 or (k + j) % s == 0
                    assert c * s * math.gcd(k, r) == r * math.gcd(k, s)
