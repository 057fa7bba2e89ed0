from fractions import Fraction

import pytest

from multigrounded.character import (MODULE_WEIGHTS, THEOREMS, StabilityPolicy, align_factor,
                                     build_module, character_enumerative, character_flexible,
                                     character_product, module_for_theorem,
                                     path_character_oracle, product_in_internal_units,
                                     theorem_formula, verify_theorem, _raw_product)
from multigrounded.crystal import FAMILIES, FAMILY_MIN_N
from multigrounded.mgp import EnumerationUnstable
from multigrounded.series import (SeriesError, TruncatedSeries, even_extract, inverse_poch_q,
                                  series_mul)

from oracles import as_dict, naive_mul, partition_counts, theorem_rhs

MODULES = [(f, FAMILY_MIN_N[f], w) for f in FAMILIES for w in MODULE_WEIGHTS[f]]
SMALLEST = {"1.2": 2, "1.3a": 2, "1.3b": 2, "1.4a": 3, "1.4b": 3, "1.5a": 3, "1.5b": 3,
            "1.6a": 4, "1.6b": 4, "1.6c": 4, "1.6d": 4}


def unit_mono(md):
    return (0,) * md.rank


# --- products -----------------------------------------------------------------

@pytest.mark.parametrize("theorem", THEOREMS)
def test_product_matches_hand_expansion(theorem):
    n = SMALLEST[theorem]
    assert as_dict(character_product(theorem, n, 10)) == theorem_rhs(theorem, n, 10)


def test_product_small_caps():
    assert character_product("1.2", 2, 0) == TruncatedSeries.one(3, 0, Fraction(1, 2))
    s = character_product("1.2", 2, 1)
    assert s.coefficient(1) == {(0, 1, 0): 1, (0, -1, 0): 1, (0, 0, 1): 1, (0, 0, -1): 1}


def test_second_rank_agrees_with_hand_expansion():
    assert as_dict(character_product("1.2", 3, 8)) == theorem_rhs("1.2", 3, 8)
    assert as_dict(character_product("1.6a", 5, 6)) == theorem_rhs("1.6a", 5, 6)


@pytest.mark.parametrize("theorem", [t for t in THEOREMS if t[:3] in ("1.4", "1.5", "1.6")])
def test_even_extractor_equals_half_sum(theorem):
    n = SMALLEST[theorem]
    assert character_product(theorem, n, 12) == character_product(theorem, n, 12,
                                                                   explicit_even=True)


def test_shifted_product_reaches_below_zero_before_extraction():
    f = theorem_formula("1.4b", 3)
    raw = _raw_product(f.factors, 4, 6, f.q_unit)
    low = raw.coefficient(-1)
    assert raw.valuation() == -1 and (0, -1, 0, 0) in low
    # every q^-1 monomial has odd colour degree, so the extractor removes it
    assert all(sum(m[1:]) % 2 for m in low)
    assert even_extract(raw, f.even_slots).valuation() == 0


def test_unknown_theorem():
    with pytest.raises(KeyError, match="1.2"):
        character_product("1.7", 3, 4)


# --- alignment --------------------------------------------------------------------

def test_alignment_factors():
    assert align_factor(Fraction(1, 2), Fraction(1, 2)) == 1
    assert align_factor(Fraction(1), Fraction(1, 2)) == 2
    with pytest.raises(ValueError):
        align_factor(Fraction(1, 2), Fraction(1))


@pytest.mark.parametrize("theorem", ["1.6c", "1.6d", "1.2"])
def test_alignment_is_a_relabelling(theorem):
    md = module_for_theorem(theorem, SMALLEST[theorem])
    internal = product_in_internal_units(theorem, md, 6)
    k = align_factor(md.unit, theorem_formula(theorem, md.n).q_unit)
    assert internal.unit == md.unit
    assert internal.map_exponents(k).contract_exponents(k) == internal
    assert internal.map_exponents(k) == character_product(theorem, md.n, 6 * k)


def test_odd_exponents_refuse_to_contract():
    with pytest.raises(SeriesError):
        character_product("1.2", 2, 4).contract_exponents(2)


# --- the three routes --------------------------------------------------------------

def test_a2n2_first_coefficient():
    md = build_module("A2n_2", 2, "L0")
    s = character_enumerative(md, 3)
    assert s.coefficient(0) == {(0, 0, 0): 1}
    assert s.coefficient(1) == {(0, 1, 0): 1, (0, -1, 0): 1, (0, 0, 1): 1, (0, 0, -1): 1}


def test_a2nm1_first_coefficient_vanishes():
    md = build_module("A2nm1_2", 3, "L0")
    assert character_enumerative(md, 3).coefficient(1) == {}


@pytest.mark.parametrize("family,n,weight", MODULES)
def test_positivity_and_constant_term(family, n, weight):
    md = build_module(family, n, weight)
    s = character_enumerative(md, 8)
    assert s.valuation() == 0
    assert s.coefficient(0).get(unit_mono(md)) == 1
    assert all(c > 0 for _, _, c in s.items())


@pytest.mark.parametrize("family,n,weight", MODULES)
def test_flexible_is_minimal_over_euler(family, n, weight):
    md = build_module(family, n, weight)
    flex = character_flexible(md, 8)
    mini = character_enumerative(md, 8)
    assert flex == series_mul(mini, inverse_poch_q(md.d, md.rank, 8, md.unit))


def test_flexible_a2n2_against_hand_product():
    md = build_module("A2n_2", 2, "L0")
    flex = character_flexible(md, 8, d=2)
    counts = partition_counts([2, 4, 6, 8], 8)
    inv = {(w, (0, 0, 0)): c for w, c in enumerate(counts) if c}
    assert as_dict(flex) == naive_mul(theorem_rhs("1.2", 2, 8), inv, 8)


def test_other_d_also_factors():
    md = build_module("A2nm1_2", 3, "L1")
    for d in (1, 2, 4):
        flex = character_flexible(md, 6, d=d)
        assert flex == series_mul(character_enumerative(md, 6),
                                  inverse_poch_q(d, md.rank, 6, md.unit))


@pytest.mark.parametrize("family,n,weight", MODULES)
def test_path_oracle_agrees(family, n, weight):
    md = build_module(family, n, weight)
    assert path_character_oracle(md, 6) == character_enumerative(md, 6)


def test_path_oracle_cap_zero():
    for family, n, weight in MODULES:
        if weight == "L0":
            md = build_module(family, n, weight)
            assert path_character_oracle(md, 0) == TruncatedSeries.one(md.rank, 0, md.unit)


def test_compute_only_module_has_no_formula_but_works():
    md = build_module("Bn_1", 3, "Ln")
    s = character_enumerative(md, 6)
    assert s == path_character_oracle(md, 6)
    # q^0 carries the 8 weights of the spin representation, shifted by -Lambda_n
    top = s.coefficient(0)
    assert len(top) == 8 and set(top.values()) == {1} and (0, 0, 0, 0) in top


# --- verification and stability ------------------------------------------------------

def test_verify_small():
    rep = verify_theorem("1.2", 2, 8)
    assert rep.equal and rep.first_diff is None
    assert rep.telemetry["enumerative"]["converged"]
    data = rep.to_json(timings=False)
    assert set(data) == {"theorem", "n", "cap", "equal", "first_diff", "telemetry"}


@pytest.mark.parametrize("theorem", THEOREMS)
def test_perturbed_product_is_reported_unequal(theorem):
    rep = verify_theorem(theorem, SMALLEST[theorem], 8, perturb=1)
    assert not rep.equal
    diff = rep.first_diff
    assert diff["missing"] or diff["extra"]
    assert all(x["coeff"] > 0 for x in diff["missing"] + diff["extra"])


def test_tiny_ceiling_raises_unstable():
    md = build_module("A2nm1_2", 3, "L0")
    with pytest.raises(EnumerationUnstable) as exc:
        character_enumerative(md, 10, StabilityPolicy(start=2, ceiling=4))
    assert exc.value.telemetry["converged"] is False
    with pytest.raises(EnumerationUnstable):
        path_character_oracle(md, 10, L0=2, ceiling=4)


def test_telemetry_records_two_equal_sweeps():
    md = build_module("Dn_1", 4, "Ln-1")
    tel = {}
    character_enumerative(md, 6, telemetry=tel)
    path_character_oracle(md, 6, telemetry=tel)
    for key in ("enumerative", "paths"):
        t = tel[key]
        assert t["converged"] and len(t["caps"]) >= 2 and t["counts"][-1] == t["counts"][-2]
