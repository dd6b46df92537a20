import pytest
import sympy
from hypothesis import given, settings, strategies as st

from siegelzeros.char_ring import (
    ALT2,
    SYM2,
    CharPoly,
    IrredDecomp,
    NotEffective,
    decompose,
    external,
    irreducible_char,
    plethysm,
    unit,
)

a, b = sympy.symbols("a b")


def as_poly(ch: CharPoly):
    """Torus character of a one-factor CharPoly as a Laurent polynomial in a, b."""
    return sympy.expand(sum(m * a ** w[0] * b ** w[1] for w, m in ch.terms.items()))


def sym_poly(j, k=0):
    return sympy.expand(sum(a ** (j - i + k) * b ** (i + k) for i in range(j + 1)))


js = st.integers(min_value=0, max_value=7)
ks = st.integers(min_value=-3, max_value=3)


def test_sym_character_matches_polynomial_oracle():
    for j in range(6):
        for k in (-2, 0, 3):
            assert as_poly(irreducible_char(j, k)) == sym_poly(j, k)


def test_clebsch_gordan_small_case():
    d = decompose(irreducible_char(2) * irreducible_char(1))
    assert d.parts == ((1, 1, 1), (3, 0, 1))


def test_plethysm_of_sym3_and_sym4():
    assert decompose(plethysm(irreducible_char(3), SYM2)).parts == ((2, 2, 1), (6, 0, 1))
    assert decompose(plethysm(irreducible_char(4), SYM2)).parts == ((0, 4, 1), (4, 2, 1), (8, 0, 1))
    assert decompose(plethysm(irreducible_char(4), ALT2)).parts == ((2, 3, 1), (6, 1, 1))


def test_virtual_character_refuses_weights():
    virtual = irreducible_char(1) - irreducible_char(3)
    with pytest.raises(NotEffective):
        virtual.weights()
    with pytest.raises(NotEffective):
        decompose(virtual)


def test_non_weyl_invariant_rejected():
    with pytest.raises(ValueError):
        CharPoly(1, {(1, 0): 1})


def test_bad_factor_index():
    with pytest.raises(ValueError):
        irreducible_char(1, 0, 3)


def test_two_factor_external_dimension():
    ch = external(irreducible_char(2), irreducible_char(3))
    d = decompose(ch)
    assert d.parts == ((2, 0, 3, 0, 1),)
    assert ch.dim == 12 and d.dim == 12


def test_decomp_validation():
    with pytest.raises(ValueError):
        IrredDecomp(1, ((1, 0, 0),))
    with pytest.raises(ValueError):
        IrredDecomp(1, ((-1, 0, 1),))


@settings(max_examples=60, deadline=None)
@given(js, js, ks, ks)
def test_tensor_is_polynomial_product(j1, j2, k1, k2):
    x, y = irreducible_char(j1, k1), irreducible_char(j2, k2)
    assert as_poly(x * y) == sympy.expand(sym_poly(j1, k1) * sym_poly(j2, k2))


@settings(max_examples=60, deadline=None)
@given(js, js, ks)
def test_decompose_round_trip(j1, j2, k):
    ch = irreducible_char(j1, k) * irreducible_char(j2) + irreducible_char(j2, k)
    assert decompose(ch).character() == ch
    assert decompose(ch).dim == ch.dim


@settings(max_examples=60, deadline=None)
@given(js, ks)
def test_dual_is_involution_and_preserves_dim(j, k):
    ch = irreducible_char(j, k)
    assert ch.dual().dual() == ch
    assert ch.dual().dim == ch.dim
    # sym^j det^k is dual to sym^j det^(-j-k)
    assert ch.dual() == irreducible_char(j, -j - k)


@settings(max_examples=40, deadline=None)
@given(js)
def test_plethysm_dimensions_and_sum(j):
    ch = irreducible_char(j)
    n = j + 1
    s2, a2 = plethysm(ch, SYM2), plethysm(ch, ALT2)
    assert s2.dim == n * (n + 1) // 2
    assert a2.dim == n * (n - 1) // 2
    assert s2 + a2 == ch * ch


@settings(max_examples=40, deadline=None)
@given(js, js)
def test_dimension_multiplicative(j1, j2):
    assert (irreducible_char(j1) * irreducible_char(j2)).dim == (j1 + 1) * (j2 + 1)


def test_unit_is_identity_for_tensor():
    ch = irreducible_char(3, 1)
    assert ch * unit() == ch
