import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from oracles import class_number_dirichlet, dirichlet_L, zeta_euler_maclaurin

from siegelzeros.analytic_scan import (
    LOCATED,
    PASS,
    UNRESOLVED,
    AccuracyUnreachable,
    CompletedL,
    NotSelfDual,
    PeeledProduct,
    PositivityUnverified,
    PrerequisiteFailed,
    RootNumberMismatch,
    ScanConfig,
    class_number,
    class_number_oracle,
    evaluate_completed,
    prepare,
    residue_at_one,
    scan_real_zeros,
    siegel_lower_bound_check,
    zero_count_bound,
)
from siegelzeros.archimedean import InfinityType
from siegelzeros.char_ring import irreducible_char
from siegelzeros.forms_data import NotFundamental, is_fundamental
from siegelzeros.global_series import (
    CharacterFactor,
    LSeriesSpec,
    PositivityReport,
    RepFactor,
    expand_coeffs,
    positivity_report,
    zeta_spec,
)


def chi_spec(D):
    return LSeriesSpec(f"chi({D})", (CharacterFactor(D),), conductor=abs(D), root_number=1)


def zeta_chi(D):
    return LSeriesSpec(f"zeta*chi({D})", (CharacterFactor(1), CharacterFactor(D)), conductor=abs(D),
                       pole_order=1, root_number=1)


def sym_spec(j):
    return LSeriesSpec(f"sym{j}", (RepFactor(("delta",), irreducible_char(j, -j // 2)),), root_number=1)


ZETA = CompletedL(zeta_spec())


@pytest.mark.parametrize("s", [0.1, 0.3, 0.5, 0.75, 0.95, 1.2, 1.5, 2.0])
def test_zeta_matches_euler_maclaurin(s):
    got = (s - 1) * ZETA.L_scaled(s)
    want = (s - 1) * zeta_euler_maclaurin(s)
    assert abs(got - float(want)) < 1e-8


def test_zeta_peeled_value_at_one_half():
    got = ZETA.peeled_scaled(0.5)
    assert abs(got - float(-0.5 * zeta_euler_maclaurin(0.5))) < 1e-8


@pytest.mark.parametrize("D", [-3, -4, -8, 5, 12])
@pytest.mark.parametrize("s", [0.3, 0.5, 1.0, 1.5])
def test_quadratic_l_values_match_hurwitz_oracle(D, s):
    got = CompletedL(chi_spec(D)).L_scaled(s)
    assert abs(got - float(dirichlet_L(s, D))) < 1e-8


@pytest.mark.parametrize("spec", [zeta_spec(), chi_spec(-3), zeta_chi(-3), sym_spec(2), sym_spec(4)],
                         ids=lambda sp: sp.name)
def test_functional_equation_residual(spec):
    ev = CompletedL(spec)
    for s in (0.2, 0.3, 0.4, 0.6, 0.7, 0.8):
        a, b = ev.completed(s), ev.completed(1 - s)
        assert abs(a - ev.root_number * b) <= 1e-7 * max(1, abs(a))


def test_value_independent_of_smoothing_parameter():
    ev = CompletedL(sym_spec(2))
    assert ev.L_scaled(0.6, t=1.0) == pytest.approx(ev.L_scaled(0.6, t=1.4), abs=1e-9)


def test_wrong_root_number_detected():
    spec = LSeriesSpec("chi(-3)", (CharacterFactor(-3),), conductor=3, root_number=-1)
    with pytest.raises(RootNumberMismatch):
        CompletedL(spec).L_scaled(0.5)


def test_undeclared_root_number_found():
    spec = LSeriesSpec("chi(-7)", (CharacterFactor(-7),), conductor=7)
    assert CompletedL(spec).root_number == 1


def test_not_self_dual_rejected():
    with pytest.raises(NotSelfDual):
        CompletedL(LSeriesSpec("z", (CharacterFactor(1),), self_dual=False))
    arithmetic = LSeriesSpec("std", (RepFactor(("delta",), irreducible_char(1)),))
    with pytest.raises(NotSelfDual):
        CompletedL(arithmetic)


def test_cutoff_limit_raises():
    with pytest.raises(AccuracyUnreachable):
        CompletedL(sym_spec(2), max_terms=5).L_scaled(0.5)


def test_evaluate_completed_domain():
    with pytest.raises(ValueError):
        evaluate_completed(zeta_spec(), None, 2.5)
    v = evaluate_completed(chi_spec(-4), None, 1.0)
    # Lambda(1) = 4^(1/2) Gamma_R(2) L(1) = 2 / pi * pi / 4
    assert float(v) == pytest.approx(0.5, abs=1e-9)


@pytest.mark.parametrize("D", [-3, -4, -7, -8, -11, -23, -163])
def test_class_number_formula(D):
    assert CompletedL(chi_spec(D)).L_scaled(1.0) == pytest.approx(class_number_oracle(D), abs=1e-9)


def test_class_number_examples():
    assert class_number_oracle(-4) == pytest.approx(math.pi / 4)
    assert class_number_oracle(-3) == pytest.approx(2 * math.pi / (6 * math.sqrt(3)))
    assert class_number_oracle(-23) == pytest.approx(3 * 2 * math.pi / (2 * math.sqrt(23)))
    with pytest.raises(NotFundamental):
        class_number_oracle(-12)
    with pytest.raises(NotFundamental):
        class_number_oracle(5)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([D for D in range(-3000, -2) if is_fundamental(D)]))
def test_form_count_matches_dirichlet_class_number(D):
    assert class_number(D) == class_number_dirichlet(D)


def test_residues():
    assert residue_at_one(zeta_spec()) == pytest.approx(1, abs=1e-9)
    assert residue_at_one(zeta_spec(), method="richardson") == pytest.approx(1, abs=1e-6)
    r = residue_at_one(zeta_chi(-4))
    assert r == pytest.approx(math.pi / 4, abs=1e-9)
    # product rule: residue of zeta * L(chi) equals L(1, chi)
    assert r == pytest.approx(CompletedL(chi_spec(-4)).L_scaled(1.0), abs=1e-9)
    with pytest.raises(ValueError):
        residue_at_one(chi_spec(-4))


def test_scans_find_nothing_for_zeta_and_chi():
    cfg = ScanConfig((0.5, 0.999), 100)
    assert scan_real_zeros(zeta_spec(), None, cfg).zeros == []
    assert scan_real_zeros(chi_spec(-3), None, cfg).zeros == []


def test_scan_signs_match_high_precision_oracle():
    cfg = ScanConfig((0.99, 0.9999), 12)
    result = scan_real_zeros(zeta_chi(-163), None, cfg)
    for s, v in result.grid:
        with mpmath.workdps(30):
            s_mp = mpmath.mpf(s)
            want = (s_mp - 1) * mpmath.zeta(s_mp) * dirichlet_L(s_mp, -163)
            # completed scaling: N^(s/2) Gamma_R(s) Gamma_R(s + 1)
            want *= mpmath.mpf(163) ** (s_mp / 2) * mpmath.pi ** (-s_mp - 0.5) * mpmath.gamma(s_mp / 2) * mpmath.gamma((s_mp + 1) / 2)
        assert abs(v - want) <= 1e-8 * max(1, abs(want))
        assert (v > 0) == (want > 0)
    assert result.zeros == []


class _Synthetic(PeeledProduct):
    def __init__(self, roots):
        super().__init__("synthetic", [], InfinityType((0,), True), 1, 0)
        self.roots = roots

    def value(self, s):
        out = mpmath.mpf(1)
        for r in self.roots:
            out *= s - r
        return out


def test_bisection_locates_synthetic_zeros():
    result = scan_real_zeros(_Synthetic([0.6, 0.77]), None, ScanConfig((0.5, 0.99), 30, tol=1e-10))
    assert [z.status for z in result.zeros] == [LOCATED, LOCATED]
    assert result.zeros[0].location == pytest.approx(0.6, abs=1e-9)
    assert result.zeros[1].location == pytest.approx(0.77, abs=1e-9)
    lo, hi = result.zeros[1].bracket
    assert lo < 0.77 < hi


def test_zero_near_one_is_unresolved():
    result = scan_real_zeros(_Synthetic([1 - 1e-12]), None, ScanConfig((0.9, 1.0), 11))
    assert [z.status for z in result.zeros] == [UNRESOLVED]


def test_threads_do_not_change_values():
    one = scan_real_zeros(chi_spec(-3), None, ScanConfig((0.5, 0.9), 16, threads=1))
    four = scan_real_zeros(chi_spec(-3), None, ScanConfig((0.5, 0.9), 16, threads=4))
    assert one.grid == four.grid


def test_scan_config_validation():
    with pytest.raises(ValueError):
        ScanConfig((0.5, 1.2), 10)
    with pytest.raises(ValueError):
        ScanConfig((0.5, 0.9), 1)
    with pytest.raises(ValueError):
        ScanConfig((0.5, 0.9), 10, c=0)


def test_zero_count_bound_requires_positivity():
    cfg = ScanConfig(grid=20)
    with pytest.raises(PositivityUnverified):
        zero_count_bound(zeta_spec(), cfg)
    with pytest.raises(PositivityUnverified):
        zero_count_bound(zeta_spec(), cfg, PositivityReport(2, 10, 0))
    ok = positivity_report(expand_coeffs(zeta_chi(-4), 500))
    assert zero_count_bound(zeta_chi(-4), cfg, ok) == (0, 1, PASS)


def test_siegel_lower_bound_for_zeta():
    pos = positivity_report(expand_coeffs(zeta_spec(), 100))
    res, bound, verdict, cmax = siegel_lower_bound_check(zeta_spec(), ScanConfig(grid=20, c=0.5), pos)
    assert res == pytest.approx(1) and verdict == PASS
    assert bound == pytest.approx(0.5 / math.log(2))
    assert cmax == pytest.approx(math.log(2))
    with pytest.raises(PrerequisiteFailed) as err:
        siegel_lower_bound_check(zeta_spec(), ScanConfig(grid=20), PositivityReport(3, 10, 0))
    assert err.value.which == "positivity"


def test_siegel_lower_bound_against_class_number():
    spec = zeta_chi(-163)
    pos = positivity_report(expand_coeffs(spec, 500))
    res, _, _, cmax = siegel_lower_bound_check(spec, ScanConfig(grid=20), pos)
    assert res > 0 and cmax > 0
    assert res == pytest.approx(class_number_oracle(-163), abs=1e-9)


def test_split_evaluation_matches_direct():
    spec = LSeriesSpec("s2xs2", (RepFactor(("delta",), irreducible_char(2, -1) * irreducible_char(2, -1)),),
                       pole_order=1, root_number=1)
    direct = prepare(spec)
    split = prepare(spec, split=True)
    assert len(split.pieces) == 3
    for s in (0.6, 0.9):
        a, b = direct.value(s), split.value(s)
        assert abs(a - b) <= 1e-8 * abs(a)


def test_declared_pole_order_is_cross_checked():
    spec = LSeriesSpec("s2xs2", (RepFactor(("delta",), irreducible_char(2, -1) * irreducible_char(2, -1)),),
                       pole_order=2)
    with pytest.raises(ValueError):
        prepare(spec)
