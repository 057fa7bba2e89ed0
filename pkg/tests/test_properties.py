"""Randomised laws for the series ring and the even-part extractor."""
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from multigrounded.character import build_module, character_enumerative, character_product
from multigrounded.series import (TruncatedSeries, even_extract, flip_signs, poch_expand,
                                  series_add, specialize)

from oracles import as_dict, half_sum_even, naive_mul

RANK = 3
UNIT = Fraction(1, 2)

monomials = st.tuples(*[st.integers(-2, 2)] * RANK)


@st.composite
def series(draw, cap=None):
    cap = draw(st.integers(0, 4)) if cap is None else cap
    terms = draw(st.dictionaries(st.integers(-2, cap),
                                 st.dictionaries(monomials, st.integers(-3, 3), max_size=3),
                                 max_size=4))
    return TruncatedSeries(RANK, cap, terms, UNIT)


def same_upto(a, b):
    cap = min(a.cap, b.cap)
    return a.truncate(cap) == b.truncate(cap)


LAWS = settings(max_examples=1000, deadline=None)


@LAWS
@given(series(), series())
def test_add_commutes(a, b):
    assert a + b == b + a


@LAWS
@given(series(), series(), series())
def test_add_associates(a, b, c):
    assert (a + b) + c == a + (b + c)


@LAWS
@given(series())
def test_additive_inverse(a):
    assert (a - a).is_zero()


@LAWS
@given(series(), series())
def test_mul_commutes(a, b):
    assert a * b == b * a


@LAWS
@given(series(), series(), series())
def test_mul_associates(a, b, c):
    assert same_upto((a * b) * c, a * (b * c))


@LAWS
@given(series(), series(), series())
def test_distributes(a, b, c):
    assert same_upto(a * (b + c), a * b + a * c)


@LAWS
@given(series(), series())
def test_mul_matches_naive_convolution(a, b):
    out = a * b
    assert as_dict(out) == naive_mul(as_dict(a), as_dict(b), out.cap)


@LAWS
@given(series())
def test_one_is_neutral(a):
    one = TruncatedSeries.one(RANK, a.cap, UNIT)
    assert same_upto(a * one, a)


@st.composite
def with_hidden_terms(draw, s):
    """The same series, plus arbitrary terms just above its cap."""
    extra = draw(st.dictionaries(st.integers(s.cap + 1, s.cap + 3),
                                 st.dictionaries(monomials, st.integers(-3, 3), max_size=2),
                                 max_size=3))
    terms = s.terms
    terms.update(extra)
    return TruncatedSeries(RANK, s.cap + 3, terms, UNIT)


@LAWS
@given(st.data())
def test_product_cap_is_sound(data):
    # whatever lies above the input caps cannot change the product below its cap
    a, b = data.draw(series()), data.draw(series())
    low = a * b
    hi = data.draw(with_hidden_terms(a)) * data.draw(with_hidden_terms(b))
    assert hi.truncate(low.cap) == low


# --- even part ------------------------------------------------------------------

subsets = st.sets(st.integers(0, RANK - 1), min_size=1)


@settings(max_examples=300, deadline=None)
@given(series(), subsets)
def test_even_extract_idempotent(a, subset):
    e = even_extract(a, subset)
    assert even_extract(e, subset) == e


@settings(max_examples=300, deadline=None)
@given(series(), series(), subsets, st.integers(-3, 3))
def test_even_extract_linear(a, b, subset, k):
    lhs = even_extract(series_add(a, b.scale(k)), subset)
    rhs = series_add(even_extract(a, subset), even_extract(b, subset).scale(k))
    assert lhs == rhs


@settings(max_examples=300, deadline=None)
@given(series(), subsets)
def test_even_extract_is_sign_flip_half_sum(a, subset):
    assert as_dict(even_extract(a, subset)) == half_sum_even(as_dict(a), sorted(subset))
    assert series_add(a, flip_signs(a, subset)) == even_extract(a, subset).scale(2)


@settings(max_examples=300, deadline=None)
@given(series(), st.integers(0, RANK - 1))
def test_specialize_plus_and_minus_one(a, slot):
    plus = specialize(a, {slot: 1})
    minus = specialize(a, {slot: -1})
    assert specialize(even_extract(a, {slot}), {slot: 1}) == \
        series_add(plus, minus).exact_div(2)


# --- truncation soundness -------------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(st.sampled_from([1, -1]), monomials, st.integers(-3, 3), st.integers(1, 4),
       st.integers(0, 8), st.integers(0, 6))
def test_poch_truncation_sound(sign, mono, j, step, c1, extra):
    hi = poch_expand(sign, mono, j, step, c1 + extra)
    assert hi.truncate(c1) == poch_expand(sign, mono, j, step, c1)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["1.2", "1.4b", "1.5a", "1.6c"]), st.integers(0, 6), st.integers(1, 4))
def test_product_truncation_sound(theorem, c1, extra):
    n = {"1.2": 2, "1.4b": 3, "1.5a": 3, "1.6c": 4}[theorem]
    assert character_product(theorem, n, c1 + extra).truncate(c1) == \
        character_product(theorem, n, c1)


def test_character_truncation_sound():
    for args in [("A2nm1_2", 3, "L1"), ("Dn_1", 4, "Ln"), ("Dnp1_2", 2, "Ln")]:
        md = build_module(*args)
        hi = character_enumerative(md, 10)
        for c in (0, 3, 7):
            assert hi.truncate(c) == character_enumerative(md, c)
