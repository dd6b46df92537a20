"""Registry of L-function factorizations, each checked prime by prime.

Two kinds of entries exist:

* exact entries compare inverse local factors built from level-one Hecke data;
* dihedral entries compare local factors of representations induced from a
  quadratic extension, symbolically, in the split and inert cases.

Every entry carries an annotation.  ``as-printed`` identities are expected to
hold, ``corrected`` ones replace a printed form that is wrong, and
``printed-typo`` entries keep the printed form so that its failure is visible;
their mismatches are informational.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import sympy

from .char_ring import (
    ALT2,
    SYM2,
    CharPoly,
    decompose,
    external,
    irreducible_char,
    plethysm,
    tensor_chars,
    unit,
)
from .global_series import (
    DEFAULT_BANK,
    MATCH,
    MISMATCH,
    CharacterFactor,
    FormBank,
    IdentityReport,
    LSeriesSpec,
    RepFactor,
    compare_polys,
    verify_local_identity,
)
from .local_factors import (
    INERT,
    SPLIT,
    LocalFactorPoly,
    SplittingType,
    local_factor,
)

AS_PRINTED = "as-printed"
CORRECTED = "corrected"
PRINTED_TYPO = "printed-typo"


class UnknownIdentityTag(KeyError):
    pass


# -- representation helpers ----------------------------------------------------

STD = irreducible_char(1)


def sym(j: int, k: int = 0) -> CharPoly:
    return irreducible_char(j, k)


def usym(j: int) -> CharPoly:
    """sym^j twisted to trivial central character (j even)."""
    if j % 2:
        raise ValueError("unitary twist of an odd symmetric power is not integral")
    return irreducible_char(j, -j // 2)


def _rep(forms, char, exponent=1, label=""):
    return RepFactor(tuple(forms), decompose(char), exponent, label)


def _spec(name, *factors):
    return LSeriesSpec(name, tuple(factors), self_dual=False)


ZETA = CharacterFactor(1)


# -- exact identities ------------------------------------------------------------

def _pair_pi(f, g):
    """Pi = 1 + (pi x pi') + sym^2(pi-bar) (x) omega with det tracked exactly."""
    pp = external(STD, STD)
    s2bar = plethysm(STD.dual(), SYM2).twist(1).promote()
    return unit(2) + pp + s2bar, pp, s2bar


def _pair_square_factorization(f, g):
    big, pp, s2bar = _pair_pi(f, g)
    fg = (f, g)
    lhs = _spec("L(Pi x Pi-bar)", _rep(fg, tensor_chars(big, big.dual()), label="Pi x Pi-bar"))
    s2 = plethysm(STD, SYM2).twist(-1).promote()
    rhs = _spec(
        "factorization",
        ZETA,
        _rep(fg, pp, label="pi x pi'"),
        _rep(fg, pp.dual(), label="pi-bar x pi'-bar"),
        _rep(fg, s2, label="sym2(pi) w^-1"),
        _rep(fg, s2bar, label="sym2(pi-bar) w"),
        _rep(fg, tensor_chars(pp, pp.dual()), label="(pi x pi') x (pi-bar x pi'-bar)"),
        _rep(fg, tensor_chars(s2, s2bar), label="sym2(pi) x sym2(pi-bar)"),
        _rep(fg, tensor_chars(pp, s2), label="(pi x pi') x sym2(pi) w^-1"),
        _rep(fg, tensor_chars(pp.dual(), s2bar), label="(pi-bar x pi'-bar) x sym2(pi-bar) w"),
    )
    return [(lhs, rhs)]


def pair_square_degrees() -> list:
    """Degrees of the nine factors on the right of the Pi x Pi-bar factorization."""
    (_, rhs), = _pair_square_factorization("delta", "f16")
    return [f.degree for f in rhs.factors]


def _std_times_sym(f, third=3):
    lhs = _spec(f"std x sym{third}", _rep((f,), tensor_chars(STD, sym(third))))
    rhs = _spec("std w + sym3", _rep((f,), STD.twist(1)), _rep((f,), sym(3)))
    return [(lhs, rhs)]


def _pair_times_sym2(f, g):
    pp = external(STD, STD)
    s2 = sym(2, -1).promote()
    lhs = _spec("(pi x pi') x sym2(pi) w^-1", _rep((f, g), tensor_chars(pp, s2)))
    a3 = external(sym(3, -1), STD)
    rhs = _spec("(pi x pi') (A3(pi) x pi')", _rep((f, g), pp), _rep((f, g), a3))
    return [(lhs, rhs)]


def _sym2_square(f):
    lhs = _spec("sym2 x sym2", _rep((f,), tensor_chars(usym(2), usym(2))))
    rhs = _spec("sym4 sym2 zeta", _rep((f,), usym(4)), _rep((f,), usym(2)), ZETA)
    return [(lhs, rhs)]


def _sym4_times_sym2(f, with_sym4):
    lhs = _spec("sym4 x sym2", _rep((f,), tensor_chars(usym(4), usym(2))))
    parts = [_rep((f,), usym(2)), _rep((f,), usym(6))]
    if with_sym4:
        parts.insert(1, _rep((f,), usym(4)))
    return [(lhs, _spec("sym2 sym4 sym6" if with_sym4 else "sym2 sym6", *parts))]


def isobaric_pi() -> CharPoly:
    return unit() + usym(2) + usym(4)


def _isobaric_square(f):
    big = isobaric_pi()
    lhs = _spec("Pi x Pi", _rep((f,), tensor_chars(big, big)))
    common = (
        ZETA,
        _rep((f,), tensor_chars(usym(2), usym(2))),
        _rep((f,), tensor_chars(usym(4), usym(4))),
    )
    first = _spec(
        "first line",
        *common,
        _rep((f,), usym(2), 2),
        _rep((f,), usym(4), 2),
        _rep((f,), tensor_chars(usym(4), usym(2)), 2),
    )
    second = _spec(
        "second line",
        *common,
        _rep((f,), usym(2), 4),
        _rep((f,), usym(4), 4),
        _rep((f,), usym(6), 2),
    )
    return [(lhs, first), (lhs, second)]


def _sym2_of_usym3() -> CharPoly:
    return plethysm(sym(3), SYM2).twist(-3)


def _sym2_of_sym3(f):
    lhs = _spec("sym3; sym2", _rep((f,), _sym2_of_usym3()))
    rhs = _spec("sym2 sym6", _rep((f,), usym(2)), _rep((f,), usym(6)))
    return [(lhs, rhs)]


def _sym2_of_sym4(f):
    lhs = _spec("sym4; sym2", _rep((f,), plethysm(sym(4), SYM2).twist(-4)))
    rhs = _spec("sym8 sym4 zeta", _rep((f,), usym(8)), _rep((f,), usym(4)), ZETA)
    return [(lhs, rhs)]


def _sym2_sym3_against_alt2_sym4(f, unitary):
    s2s3 = plethysm(sym(3), SYM2)
    a2s4 = plethysm(sym(4), ALT2)
    if unitary:
        s2s3, a2s4 = s2s3.twist(-3), a2s4.twist(-4)
    lhs = _spec("sym2(sym3)", _rep((f,), s2s3))
    rhs = _spec("alt2(sym4)", _rep((f,), a2s4))
    return [(lhs, rhs)]


def _sym_plethysms(f):
    return _sym2_of_sym3(f) + _sym2_of_sym4(f)


# -- dihedral identities ------------------------------------------------------------

@dataclass(frozen=True)
class KChar:
    """Monomial prod base**m * (base o theta)**n in characters of K."""

    exps: tuple  # ((name, m, n), ...)

    def __mul__(self, other: "KChar") -> "KChar":
        acc = {}
        for name, m, n in self.exps + other.exps:
            a, b = acc.get(name, (0, 0))
            acc[name] = (a + m, b + n)
        return KChar(tuple(sorted((k, m, n) for k, (m, n) in acc.items())))

    def __pow__(self, e: int) -> "KChar":
        return KChar(tuple((k, m * e, n * e) for k, m, n in self.exps))

    def conj(self) -> "KChar":
        return KChar(tuple((k, n, m) for k, m, n in self.exps))


def kchar(name: str) -> KChar:
    return KChar(((name, 1, 0),))


K_ONE = KChar(())


class DihedralCase:
    """Local values at a split or inert prime for a family of characters of K.

    Base characters get symbols: x_b, y_b at the two primes above a split p,
    c_b at the inert prime.  ``omega_trivial`` imposes x*y = 1 and c = -1 on
    the base character named ``chi``, which is what a trivial central
    character of its induction forces.
    """

    def __init__(self, kind: str, names, omega_trivial: bool = False):
        self.kind = kind
        self.sym = {}
        for b in names:
            if kind == SPLIT:
                x, y = sympy.symbols(f"x_{b} y_{b}", nonzero=True)
                if omega_trivial and b == "chi":
                    y = 1 / x
                self.sym[b] = (x, y)
            else:
                c = sympy.Symbol(f"c_{b}", nonzero=True)
                if omega_trivial and b == "chi":
                    c = sympy.Integer(-1)
                self.sym[b] = (c,)

    def split_values(self, ch: KChar) -> tuple:
        at_p, at_q = sympy.Integer(1), sympy.Integer(1)
        for b, m, n in ch.exps:
            x, y = self.sym[b]
            at_p *= x ** m * y ** n
            at_q *= y ** m * x ** n
        return at_p, at_q

    def inert_value(self, ch: KChar):
        v = sympy.Integer(1)
        for b, m, n in ch.exps:
            (c,) = self.sym[b]
            v *= c ** (m + n)
        return v

    def splitting(self, ch: KChar) -> SplittingType:
        if self.kind == SPLIT:
            return SplittingType(SPLIT, self.split_values(ch))
        return SplittingType(INERT, (self.inert_value(ch),))

    def induced(self, ch: KChar) -> LocalFactorPoly:
        """L_p(s, I(ch)) inverse factor; equal to L_p over K of ch."""
        from .local_factors import induced_local_factor

        return induced_local_factor(self.splitting(ch))

    def restricted(self, a: int = 0, b: int = 0, base: str = "chi") -> LocalFactorPoly:
        """Factor of the F-character chi_0**a * delta**b, chi_0 the restriction of base."""
        if self.kind == SPLIT:
            x, y = self.sym[base]
            v = (x * y) ** a
        else:
            (c,) = self.sym[base]
            v = c ** a * (-1) ** b
        return LocalFactorPoly(None, (1, -v))


def _product(polys) -> LocalFactorPoly:
    out = LocalFactorPoly(None, (1,))
    for q in polys:
        out = out * q
    return out


def _expand_poly(poly: LocalFactorPoly) -> LocalFactorPoly:
    return LocalFactorPoly(None, tuple(sympy.expand(sympy.together(c)) for c in poly.coeffs))


def _dihedral_induced_product(case: DihedralCase):
    lam, xi = kchar("lam"), kchar("xi")
    lhs = local_factor((case.splitting(lam).hecke(), case.splitting(xi).hecke()),
                       external(STD, STD))
    rhs = case.induced(lam * xi) * case.induced(lam * xi.conj())
    return lhs, rhs


def _dihedral_pair(case: DihedralCase):
    chi, chi2 = kchar("chi"), kchar("chip")
    lhs = local_factor((case.splitting(chi).hecke(), case.splitting(chi2).hecke()),
                       external(STD, STD))
    rhs = case.induced(chi * chi2) * case.induced(chi * chi2.conj())
    return lhs, rhs


def _dihedral_pair_inverse(case: DihedralCase, corrected: bool):
    chi = kchar("chi")
    chip = chi ** -1  # chi * chi' = 1
    nu = chip.conj() * chip ** -1
    lhs = local_factor((case.splitting(chi).hecke(), case.splitting(chip).hecke()),
                       external(STD, STD))
    if corrected:
        zeta_k = case.induced(K_ONE)
        rhs = zeta_k * case.induced(nu)
    else:
        rhs = LocalFactorPoly(None, (1, -1)) * case.induced(nu)
    return lhs, rhs


def _dihedral_sym2(case: DihedralCase):
    chi = kchar("chi")
    lhs = local_factor(case.splitting(chi).hecke(), sym(2))
    rhs = case.induced(chi ** 2) * case.restricted(1, 0)
    return lhs, rhs


def _dihedral_sym2_square(case: DihedralCase):
    chi = kchar("chi")
    s2 = plethysm(STD, SYM2)
    lhs = local_factor(case.splitting(chi).hecke(), tensor_chars(s2, s2))
    rhs = _product([
        case.induced(chi ** 4),
        case.restricted(2, 0) ** 2,
        case.restricted(2, 1),
        case.induced(chi ** 3 * chi.conj()) ** 2,
    ])
    return lhs, rhs


def _dihedral_sym2_square_trivial_omega(case: DihedralCase, corrected: bool):
    chi = kchar("chi")
    s2 = plethysm(STD, SYM2)
    lhs = local_factor(case.splitting(chi).hecke(), tensor_chars(s2, s2))
    last = chi ** 2 if corrected else chi
    rhs = _product([
        case.induced(chi ** 4),
        LocalFactorPoly(None, (1, -1)) ** 2,
        case.restricted(0, 1),
        case.induced(last) ** 2,
    ])
    return lhs, rhs


DIHEDRAL_BASES = {
    "4.9": ("chi", "chip"),
    "4.10": ("chi",),
    "4.10c": ("chi",),
    "5.3": ("lam", "xi"),
    "5.4": ("chi",),
    "5.5": ("chi",),
    "5.6": ("chi",),
    "5.6c": ("chi",),
}


def _run_dihedral(tag: str, builder, omega_trivial: bool = False) -> IdentityReport:
    report = IdentityReport(tag, "")
    for kind in (SPLIT, INERT):
        case = DihedralCase(kind, DIHEDRAL_BASES[tag], omega_trivial)
        lhs, rhs = builder(case)
        status, idx, a, b = compare_polys(_expand_poly(lhs), _expand_poly(rhs))
        report.rows.append((kind, status, idx, a, b))
    return report


def biquadratic_report(tag: str = "4.11") -> IdentityReport:
    """zeta * L(mu) L(nu) L(mu nu) against the Dedekind zeta factor of the compositum.

    At an unramified p the Frobenius is an element g of the Klein group
    V = {1, mu-kernel...}; the Dedekind zeta factor is det(1 - X g) on the
    permutation representation of V on itself.
    """
    X = sympy.Symbol("X")
    report = IdentityReport(tag, "")
    for m in (1, -1):
        for n in (1, -1):
            g = (0 if m == 1 else 1, 0 if n == 1 else 1)
            elems = [(a, b) for a in (0, 1) for b in (0, 1)]
            perm = sympy.zeros(4, 4)
            for i, e in enumerate(elems):
                j = elems.index(((e[0] + g[0]) % 2, (e[1] + g[1]) % 2))
                perm[j, i] = 1
            dedekind = sympy.Poly((sympy.eye(4) - X * perm).det(), X).all_coeffs()[::-1]
            product = sympy.Poly((1 - X) * (1 - m * X) * (1 - n * X) * (1 - m * n * X), X)
            lhs = LocalFactorPoly(None, tuple(dedekind))
            rhs = LocalFactorPoly(None, tuple(product.all_coeffs()[::-1]))
            status, idx, a, b = compare_polys(lhs, rhs)
            report.rows.append((f"mu={m},nu={n}", status, idx, a, b))
    return report


# -- registry ----------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityEntry:
    tag: str
    summary: str
    annotation: str
    kind: str  # "exact" | "dihedral"
    default_forms: tuple = ()
    build: Optional[Callable] = None
    note: str = ""

    @property
    def informational(self) -> bool:
        return self.annotation == PRINTED_TYPO


def _e(tag, summary, annotation, forms, build, note=""):
    return IdentityEntry(tag, summary, annotation, "exact", forms, build, note)


def _d(tag, summary, annotation, build, note=""):
    return IdentityEntry(tag, summary, annotation, "dihedral", (), build, note)


REGISTRY = {
    e.tag: e
    for e in [
        _e("4.15", "L(Pi x Pi-bar) for Pi = 1 + pi x pi' + sym2(pi-bar) w, nine factors of total degree 64",
           AS_PRINTED, ("delta", "f16"), _pair_square_factorization),
        _e("4.19", "std x sym3 = std w + sym3 (printed)", PRINTED_TYPO, ("delta",),
           lambda f: _std_times_sym(f, 3), "dimensions 8 vs 6"),
        _e("4.19c", "std x sym2 = std w + sym3", CORRECTED, ("delta",), lambda f: _std_times_sym(f, 2)),
        _e("4.20", "(pi x pi') x sym2(pi) w^-1 = (pi x pi') (A3(pi) x pi')", AS_PRINTED,
           ("delta", "f16"), _pair_times_sym2),
        _e("5.11", "sym2 x sym2 = sym4 . sym2 w . zeta (trivial central character)", AS_PRINTED,
           ("delta",), _sym2_square),
        _e("5.16", "sym4 x sym2 = sym2 . sym6 (printed)", PRINTED_TYPO, ("delta",),
           lambda f: _sym4_times_sym2(f, False), "degree 15 against 10"),
        _e("5.16c", "sym4 x sym2 = sym2 . sym4 . sym6", CORRECTED, ("delta",),
           lambda f: _sym4_times_sym2(f, True)),
        _e("5.17", "Pi x Pi for Pi = 1 + sym2 + sym4, both displayed lines", AS_PRINTED,
           ("delta",), _isobaric_square),
        _e("5.23", "sym3; sym2 = sym2 . sym6", AS_PRINTED, ("delta",), _sym2_of_sym3),
        _e("7.1i", "sym3; sym2 = sym6 . sym2", AS_PRINTED, ("delta",), _sym2_of_sym3),
        _e("7.1ii", "sym4; sym2 = sym8 . sym4 . zeta", AS_PRINTED, ("delta",), _sym2_of_sym4),
        _e("7.2", "sym2(sym3) = alt2(sym4) with det tracked exactly", PRINTED_TYPO, ("delta",),
           lambda f: _sym2_sym3_against_alt2_sym4(f, False),
           "both sides have degree 10; they differ by a det twist and agree once the "
           "central character is trivialized (see 7.2u)"),
        _e("7.2u", "sym2(sym3) = alt2(sym4) after trivializing the central character", AS_PRINTED,
           ("delta",), lambda f: _sym2_sym3_against_alt2_sym4(f, True)),
        _e("7.3", "sym2(sym3) = sym6 + sym2 and sym2(sym4) = sym8 + sym4 + 1", AS_PRINTED,
           ("delta",), _sym_plethysms),
        _d("4.9", "I(chi) x I(chi') = L(chi chi') L(chi chi'^theta)", AS_PRINTED, _dihedral_pair),
        _d("4.10", "chi chi' = 1: L = zeta_F L(nu) (printed)", PRINTED_TYPO,
           lambda c: _dihedral_pair_inverse(c, False), "degree 3 against 4"),
        _d("4.10c", "chi chi' = 1: L = zeta_K L(nu) = zeta_F L(delta) L(nu)", CORRECTED,
           lambda c: _dihedral_pair_inverse(c, True)),
        _d("4.11", "zeta L(mu) L(nu) L(mu nu) = Dedekind zeta of the biquadratic field",
           AS_PRINTED, None),
        _d("5.3", "I(lam) x I(xi) = I(lam xi) + I(lam xi^theta)", AS_PRINTED, _dihedral_induced_product),
        _d("5.4", "sym2 I(chi) = I(chi^2) + chi_0", AS_PRINTED, _dihedral_sym2),
        _d("5.5", "sym2 x sym2 of I(chi), abelian factorization", AS_PRINTED, _dihedral_sym2_square),
        _d("5.6", "trivial central character: ... L(chi)^2 (printed)", PRINTED_TYPO,
           lambda c: _dihedral_sym2_square_trivial_omega(c, False), "chi^3 chi^theta equals chi^2 when omega = 1"),
        _d("5.6c", "trivial central character: ... L(chi^2)^2", CORRECTED,
           lambda c: _dihedral_sym2_square_trivial_omega(c, True)),
    ]
}

OMEGA_TRIVIAL = {"5.6", "5.6c"}


def primes_upto(pmax: int) -> list:
    return list(sympy.primerange(2, pmax + 1))


def run_identity(tag: str, forms: Optional[tuple] = None, pmax: int = 200,
                 bank: FormBank = DEFAULT_BANK) -> IdentityReport:
    entry = REGISTRY.get(tag)
    if entry is None:
        raise UnknownIdentityTag(tag)
    if entry.kind == "dihedral":
        if tag == "4.11":
            report = biquadratic_report(tag)
        else:
            report = _run_dihedral(tag, entry.build, tag in OMEGA_TRIVIAL)
    else:
        forms = tuple(forms) if forms else entry.default_forms
        if len(forms) < len(entry.default_forms):
            forms = forms + entry.default_forms[len(forms):]
        forms = forms[: len(entry.default_forms)]
        report = IdentityReport(tag, "")
        for i, (lhs, rhs) in enumerate(entry.build(*forms)):
            sub = verify_local_identity(lhs, rhs, primes_upto(pmax), bank)
            for row in sub.rows:
                key = row[0] if i == 0 else f"{row[0]}#{i + 1}"
                report.rows.append((key,) + tuple(row[1:]))
    report.annotation = entry.annotation
    report.note = entry.note
    return report
