"""End-to-end acceptance checks, one test per numbered criterion.

The conftest hook prints a PASS/FAIL line per criterion in the terminal summary.
"""
import math
import subprocess
import sys
import time

import mpmath
from oracles import dirichlet_L

from siegelzeros.analytic_scan import (
    PASS,
    CompletedL,
    ScanConfig,
    class_number_oracle,
    prepare,
    residue_at_one,
    scan_real_zeros,
    zero_count_bound,
)
from siegelzeros.archimedean import c_of_pi, stirling_ratio_check
from siegelzeros.char_ring import ALT2, SYM2, decompose, irreducible_char, plethysm
from siegelzeros.cli import main, parse_spec
from siegelzeros.global_series import (
    EXACT,
    MATCH,
    MISMATCH,
    CharacterFactor,
    FormBank,
    LSeriesSpec,
    RepFactor,
    expand_coeffs,
    log_deriv_coeffs,
    positivity_report,
    zeta_spec,
)
from siegelzeros.identities import _pair_square_factorization, pair_square_degrees, run_identity

BANK = FormBank()
PI_PI_BAR = "isob(delta)xisob(delta)"


def chi_spec(D):
    return LSeriesSpec(f"chi({D})", (CharacterFactor(D),), conductor=abs(D), root_number=1)


def zeta_chi(D):
    return LSeriesSpec(f"zeta*chi({D})", (CharacterFactor(1), CharacterFactor(D)), conductor=abs(D),
                       pole_order=1, root_number=1)


def test_criterion_01():
    start = time.perf_counter()
    for j1 in range(9):
        for j2 in range(j1 + 1):
            got = decompose(irreducible_char(j1) * irreducible_char(j2)).parts
            want = tuple(sorted((j1 + j2 - 2 * i, i, 1) for i in range(j2 + 1)))
            assert tuple(sorted(got)) == want, (j1, j2)
    assert decompose(plethysm(irreducible_char(3), SYM2)).parts == ((2, 2, 1), (6, 0, 1))
    assert decompose(plethysm(irreducible_char(4), SYM2)).parts == ((0, 4, 1), (4, 2, 1), (8, 0, 1))
    assert decompose(plethysm(irreducible_char(4), ALT2)).parts == ((2, 3, 1), (6, 1, 1))
    assert time.perf_counter() - start < 1.0


def test_criterion_02():
    report = run_identity("5.17", ("delta",), pmax=200)
    assert report.status == MATCH
    assert report.mismatches == []
    # rows of the second line of the factorization are keyed "p#2"
    primes = {int(str(r[0]).split("#")[0]) for r in report.rows}
    assert max(primes) == 199 and len(primes) == 46 and len(report.rows) == 92


def test_criterion_03():
    printed = run_identity("5.16", ("delta",), pmax=200)
    assert printed.status == MISMATCH and printed.mismatches[0][0] == 2
    assert run_identity("5.16c", ("delta",), pmax=200).status == MATCH

    assert run_identity("4.19", ("delta",), pmax=200).status == MISMATCH
    assert run_identity("4.19c", ("delta",), pmax=200).status == MATCH

    assert run_identity("7.2", ("delta",), pmax=200).status == MISMATCH
    assert run_identity("7.2u", ("delta",), pmax=200).status == MATCH
    assert run_identity("7.3", ("delta",), pmax=200).status == MATCH


def test_criterion_04():
    report = run_identity("4.15", ("delta", "f16"), pmax=100)
    assert report.status == MATCH and len(report.rows) == 25
    parts = pair_square_degrees()
    assert parts == [1, 4, 4, 3, 3, 16, 9, 12, 12]
    (lhs, rhs), = _pair_square_factorization("delta", "f16")
    assert lhs.degree == rhs.degree == sum(parts) == 64


def test_criterion_05():
    spec = parse_spec(PI_PI_BAR, BANK)
    assert spec.mode == EXACT and spec.degree == 81
    coeffs = expand_coeffs(spec, 10 ** 4, BANK)
    report = positivity_report(coeffs)
    assert report.ok and report.checked == 10 ** 4
    logd = log_deriv_coeffs(spec, 10 ** 4, BANK)
    assert min(logd) >= 0
    # the prime-power terms carry the exact sign of an integral trace
    assert logd[1] > 0


def _gamma_direct(t):
    with mpmath.workdps(40):
        t = mpmath.mpf(t)
        return mpmath.pi ** -3 * abs(mpmath.gamma(0.5 + 2j * t)) ** 2 * abs(mpmath.gamma(0.5 + 1j * t)) ** 4


def test_criterion_06():
    for t in (0, 0.5, 1, 5, 9.5337):
        want = _gamma_direct(t)
        assert abs(c_of_pi(t) - want) <= 1e-12 * want
    d100, d1000 = stirling_ratio_check(100), stirling_ratio_check(1000)
    assert d100 < 0.02
    assert d1000 < d100


def test_criterion_07():
    for D in (-3, -4, -7, -8, -11, -23, -163):
        value = CompletedL(chi_spec(D)).L_scaled(1.0)
        assert abs(value - class_number_oracle(D)) < 1e-6
        assert abs(value - float(dirichlet_L(1, D))) < 1e-6
    assert abs(residue_at_one(zeta_spec()) - 1) < 1e-6
    assert abs(residue_at_one(zeta_chi(-4)) - math.pi / 4) < 1e-6


def test_criterion_08():
    cfg = ScanConfig((0.5, 0.999), 1000)
    assert scan_real_zeros(zeta_spec(), None, cfg).zeros == []
    assert scan_real_zeros(chi_spec(-3), None, cfg).zeros == []

    siegel = ScanConfig(c=0.1)
    for spec in (zeta_spec(), zeta_chi(-4)):
        pos = positivity_report(expand_coeffs(spec, 10 ** 4))
        assert zero_count_bound(spec, siegel, pos) == (0, 1, PASS)
    spec = parse_spec(PI_PI_BAR, BANK)
    pos = positivity_report(expand_coeffs(spec, 10 ** 4, BANK))
    count, r, verdict = zero_count_bound(prepare(spec, None, BANK), siegel, pos)
    assert r == 3 and verdict == PASS and count <= r


def test_criterion_09():
    s2 = RepFactor(("delta",), irreducible_char(2, -1))
    s4 = RepFactor(("delta",), irreducible_char(4, -2))
    pair = RepFactor(("delta",), irreducible_char(2, -1) * irreducible_char(2, -1))
    residue = residue_at_one(LSeriesSpec("sym2 x sym2", (pair,), pole_order=1, root_number=1))
    left = CompletedL(LSeriesSpec("sym2", (s2,), root_number=1)).L_scaled(1.0)
    right = CompletedL(LSeriesSpec("sym4", (s4,), root_number=1)).L_scaled(1.0)
    assert abs(residue - left * right) < 1e-5


def _cli(argv, capsys):
    assert main(argv) == 0
    return capsys.readouterr().out


def test_criterion_10(capsys):
    scan = ["scan", "--spec", "zeta*chi(-163)", "--interval", "0.5:0.999", "--grid", "60", "--format", "csv"]
    outs = {_cli(scan + ["--threads", n], capsys) for n in ("1", "2", "4", "1")}
    assert len(outs) == 1
    argv = [sys.executable, "-m", "siegelzeros.cli", "coeffs", "--spec", "sym2(delta)xsym2(delta)",
            "--xmax", "300", "--logderiv", "--format", "structured"]
    runs = {subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(2)}
    assert len(runs) == 1
