import pytest

from multigrounded.character import MODULE_WEIGHTS, build_module
from multigrounded.crystal import FAMILIES, FAMILY_MIN_N, CrystalError, build_family
from multigrounded.paths import (LambdaPath, bounded_paths, enumerate_paths, ground_state_path,
                                 kmn_weight, path_sum, path_weight, weight_from_tag)

MODULES = [(f, FAMILY_MIN_N[f], w) for f in FAMILIES for w in MODULE_WEIGHTS[f]]


@pytest.mark.parametrize("family,n,weight,g", [
    ("A2n_2", 2, "L0", ("0",)),
    ("A2nm1_2", 3, "L0", ("1bar", "1")),
    ("A2nm1_2", 3, "L1", ("1", "1bar")),
    ("Dnp1_2", 2, "Ln", ("0bar",)),
    ("Bn_1", 3, "Ln", ("0",)),
    ("Dn_1", 4, "Ln", ("4", "4bar")),
    ("Dn_1", 4, "Ln-1", ("4bar", "4")),
])
def test_ground_state_paths(family, n, weight, g):
    md = build_module(family, n, weight)
    assert tuple(md.gsp.labels()) == g


@pytest.mark.parametrize("family,n,weight", MODULES)
def test_gsp_invariants(family, n, weight):
    md = build_module(family, n, weight)
    cr, gsp = md.crystal, md.gsp
    assert cr.phi_vec(gsp.g[0]) == weight_from_tag(weight, n)
    for k in range(gsp.t):
        assert cr.eps_vec(gsp.g[k]) == cr.phi_vec(gsp.at(k + 1))
    assert all(sum(cr.weight(b)[i] for b in gsp.g) == 0 for i in range(n + 1))
    assert all(sum(cr.colours[b][i] for b in gsp.g) == 0 for i in range(n + 1))
    zero = LambdaPath((), gsp)
    assert path_weight(zero, md.energy, gsp) == (0, (0,) * (n + 1))


def test_unrealizable_weight():
    cr = build_family("A2n_2", 2)
    with pytest.raises(CrystalError, match="not realizable"):
        ground_state_path(cr, (0, 0, 5))


def test_path_counts():
    md = build_module("A2n_2", 2, "L0")
    assert [p.prefix for p in enumerate_paths(md.crystal, md.gsp, 0)] == [()]
    assert len(enumerate_paths(md.crystal, md.gsp, 1)) == 5
    md = build_module("A2nm1_2", 3, "L0")
    assert len(enumerate_paths(md.crystal, md.gsp, 2)) == 36
    with pytest.raises(ValueError):
        enumerate_paths(md.crystal, md.gsp, -1)


def test_a2n2_single_defect_weight():
    md = build_module("A2n_2", 2, "L0")
    one = md.crystal.index("1")
    assert path_weight(LambdaPath((one,), md.gsp), md.energy, md.gsp) == (1, (0, 1, 0))


def test_canonical_trims_ground_agreement():
    md = build_module("A2nm1_2", 3, "L0")
    g = md.gsp.g
    p = LambdaPath((md.crystal.index("2"), g[1], g[0], g[1]), md.gsp)
    assert p.canonical().prefix == (md.crystal.index("2"),)
    assert p.m == 1


@pytest.mark.parametrize("family,n,weight", MODULES)
def test_two_weight_formulas_agree(family, n, weight):
    """The D*H_lambda part-sum form and the raw-H form give the same weights."""
    md = build_module(family, n, weight)
    L = 3 if len(md.crystal) <= 7 else 2
    for p in enumerate_paths(md.crystal, md.gsp, L):
        assert path_weight(p, md.energy, md.gsp) == kmn_weight(p.prefix, md.H, md.gsp, md.D)


@pytest.mark.parametrize("family,n,weight", [("A2nm1_2", 3, "L1"), ("Dn_1", 4, "Ln-1"),
                                             ("A2n_2", 2, "L0")])
def test_bounded_paths_and_path_sum_agree_with_brute_force(family, n, weight):
    md = build_module(family, n, weight)
    length, cap = 4, 3
    brute = {}
    for p in enumerate_paths(md.crystal, md.gsp, length):
        q, col = kmn_weight(p.prefix, md.H, md.gsp, md.D)
        if q <= cap:
            brute[(q, col)] = brute.get((q, col), 0) + 1
    seen = sorted(bounded_paths(md.H, md.gsp, md.D, length, cap))
    assert len(seen) == sum(brute.values())
    agg = path_sum(md.H, md.gsp, md.D, length, cap)
    assert {(q, m): c for q, poly in agg.items() for m, c in poly.items()} == brute


def test_path_stability_under_longer_prefixes():
    md = build_module("A2nm1_2", 3, "L0")
    a = path_sum(md.H, md.gsp, md.D, 12, 6)
    b = path_sum(md.H, md.gsp, md.D, 14, 6)
    assert a == b
