from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from oracles import satake_sym_factor, tau_naive

from siegelzeros.char_ring import decompose, external, irreducible_char
from siegelzeros.local_factors import (
    EXACT,
    FLOAT,
    INERT,
    RAMIFIED,
    SPLIT,
    HeckeLocal,
    LocalFactorPoly,
    OverflowPolicyError,
    PrimeMismatch,
    SplittingType,
    induced_local_factor,
    local_factor,
    local_pole_abscissa,
    newton_coefficients,
    representation_traces,
    rs_pairing_factor,
    twisted_sym_unramified,
)

TAU = tau_naive(60)
PRIMES = [p for p in range(2, 60) if sympy.isprime(p)]


def delta_local(p):
    return HeckeLocal(p, TAU[p - 1], p ** 11, EXACT)


def test_standard_factor_of_delta_at_two():
    assert local_factor(delta_local(2), irreducible_char(1)).coeffs == (1, 24, 2048)


def test_sym2_of_delta_at_two_by_both_routes():
    expected = (1, 1472, -3014656, -8589934592)
    d = irreducible_char(2)
    assert local_factor(delta_local(2), d).coeffs == expected
    assert local_factor(delta_local(2), d, method="matrix").coeffs == expected


def test_trivial_representation():
    assert local_factor(delta_local(3), irreducible_char(0)).coeffs == (1, -1)


@pytest.mark.parametrize("j", [1, 2, 3, 4, 6])
@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_unitary_sym_powers_against_satake_oracle(j, p):
    k = -j // 2 if j % 2 == 0 else 0
    poly = local_factor(delta_local(p), irreducible_char(j, k))
    with mpmath.workdps(50):
        if j % 2:
            # odd powers stay in arithmetic normalization; rescale X by p^(11 j / 2)
            scale = mpmath.sqrt(p) ** (11 * j)
            got = [mpmath.mpf(int(c)) / scale ** i for i, c in enumerate(poly.coeffs)]
        else:
            got = [mpmath.mpf(Fraction(c).numerator) / Fraction(c).denominator for c in poly.coeffs]
        want = satake_sym_factor(TAU[p - 1], p, 12, j)
        errors = [abs(x - y) / max(1, abs(y)) for x, y in zip(got, want)]
    assert len(got) == len(want)
    assert max(errors) < 1e-25


def test_unitary_self_dual_factor_is_reciprocal():
    # det = 1 and self-duality give c[n - i] = (-1)^n c[i]
    poly = local_factor(delta_local(5), irreducible_char(2, -1) * irreducible_char(2, -1))
    c, n = poly.coeffs, poly.degree
    assert n == 9 and c[n] == -1
    assert all(c[n - i] == -c[i] for i in range(n + 1))


def test_truncation_matches_prefix():
    full = local_factor(delta_local(3), irreducible_char(4))
    assert local_factor(delta_local(3), irreducible_char(4), max_degree=2).coeffs == full.coeffs[:3]


def test_rankin_selberg_pairing_degree_and_prime_check():
    h1 = delta_local(2)
    h2 = HeckeLocal(2, 216, 2 ** 15, EXACT)
    poly = rs_pairing_factor(h1, h2, decompose(external(irreducible_char(1), irreducible_char(1))))
    # (1 - a b X)(1 - a b' X)(1 - a' b X)(1 - a' b' X): X coefficient is -a_p b_p
    assert poly.degree == 4 and poly.coeffs[1] == -(-24 * 216)
    with pytest.raises(PrimeMismatch):
        rs_pairing_factor(h1, HeckeLocal(3, 1, 3, EXACT), decompose(external(irreducible_char(1), irreducible_char(1))))


def test_exact_mode_rejects_fractions():
    with pytest.raises(OverflowPolicyError):
        HeckeLocal(2, Fraction(1, 2), 1, EXACT)


def test_mixed_primes_rejected():
    with pytest.raises(PrimeMismatch):
        LocalFactorPoly(2, (1, 1)) * LocalFactorPoly(3, (1, 1))


def test_inverse_series_gives_prime_power_coefficients():
    poly = local_factor(delta_local(2), irreducible_char(1))
    assert poly.inverse_series(4) == [1, TAU[1], TAU[3], TAU[7], TAU[15]]


def test_float_mode_agrees_with_exact():
    p = 7
    exact = local_factor(delta_local(p), irreducible_char(2, -1))
    h = HeckeLocal(p, mpmath.mpf(TAU[p - 1]) / mpmath.sqrt(p) ** 11, 1, FLOAT)
    approx = local_factor(h, irreducible_char(2))
    assert exact.first_difference(approx, 1e-9) is None


def test_induced_factors():
    x, y = sympy.symbols("x y")
    assert induced_local_factor(SplittingType(SPLIT, (x, y))).coeffs == (1, -(x + y), x * y)
    assert induced_local_factor(SplittingType(INERT, (x,))).coeffs == (1, 0, -x)
    assert induced_local_factor(SplittingType(RAMIFIED, (x,))).coeffs == (1, -x)
    with pytest.raises(ValueError):
        SplittingType(SPLIT, (x,))


def test_pole_abscissa_unitary_vs_arithmetic():
    uni = local_factor(delta_local(3), irreducible_char(2, -1))
    assert abs(local_pole_abscissa(uni)) < 1e-9
    arith = local_factor(delta_local(3), irreducible_char(1))
    assert abs(local_pole_abscissa(arith) - 5.5) < 1e-9


def test_twisted_sym_unramified():
    assert twisted_sym_unramified(4, 2) and not twisted_sym_unramified(3, 2)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(PRIMES), st.integers(min_value=0, max_value=5))
def test_trace_and_matrix_routes_agree(p, j):
    d = irreducible_char(j)
    assert local_factor(delta_local(p), d).coeffs == local_factor(delta_local(p), d, method="matrix").coeffs


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(PRIMES), st.integers(min_value=1, max_value=4), st.integers(min_value=1, max_value=4))
def test_factor_of_direct_sum_is_product(p, j1, j2):
    h = delta_local(p)
    both = local_factor(h, irreducible_char(j1) + irreducible_char(j2))
    assert both == local_factor(h, irreducible_char(j1)) * local_factor(h, irreducible_char(j2))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=-5, max_value=5), min_size=1, max_size=5))
def test_newton_recovers_elementary_symmetric(roots):
    traces = [sum(r ** k for r in roots) for k in range(1, len(roots) + 1)]
    X = sympy.Symbol("X")
    expected = sympy.Poly(sympy.prod([1 - r * X for r in roots]), X).all_coeffs()[::-1]
    expected = [int(c) for c in expected] + [0] * (len(roots) + 1)
    assert list(newton_coefficients(traces, len(roots))) == expected[: len(roots) + 1]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(PRIMES), st.integers(min_value=1, max_value=6))
def test_traces_of_sym_power(p, n):
    # tr sym^j(C^k) for j = 1 equals alpha^k + beta^k
    tr = representation_traces((delta_local(p),), decompose(irreducible_char(1)), n)
    a, q = TAU[p - 1], p ** 11
    s = [2, a]
    for _ in range(n):
        s.append(a * s[-1] - q * s[-2])
    assert tr == s[1 : n + 1]
