"""Gamma factors, infinity types and conductor bookkeeping.

Convention: an infinity type is a multiset of shifts ``b_j`` and stands for
``prod Gamma_R(s + b_j)`` with ``Gamma_R(s) = pi**(-s/2) Gamma(s/2)``.  A factor
``Gamma((s + w)/2)`` written elsewhere converts to the shift ``b = w``, and
``Gamma_C(s + a) = Gamma_R(s + a) Gamma_R(s + a + 1)`` up to the constant 2.
The conversion happens only when an infinity type is built.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence, Union

import mpmath
import sympy

from .char_ring import CharPoly, IrredDecomp, decompose, external, irreducible_char
from .local_factors import LocalFactorPoly

HOLOMORPHIC = "holomorphic"
MAASS = "maass"

_mp = mpmath.MPContext()
_mp.dps = 40


class DisagreementError(ArithmeticError):
    pass


class NonPositiveNorm(ValueError):
    pass


@dataclass(frozen=True)
class ArchParameter:
    """The archimedean component of one GL(2) form, unitary normalization."""

    kind: str
    weight: int = 0
    t: float = 0.0
    parity: int = 0

    def __post_init__(self):
        if self.kind == HOLOMORPHIC and self.weight < 1:
            raise ValueError("weight must be at least 1")
        if self.kind == MAASS and self.parity not in (0, 1):
            raise ValueError("parity must be 0 or 1")
        if self.kind not in (HOLOMORPHIC, MAASS):
            raise ValueError(f"unknown archimedean kind {self.kind!r}")


def _key(b: complex) -> tuple:
    return (round(b.real, 12), round(b.imag, 12))


@dataclass(frozen=True)
class InfinityType:
    shifts: tuple
    self_dual: bool = False
    params: tuple = ()  # ArchParameter per GL(2) factor, when known

    def __post_init__(self):
        object.__setattr__(self, "shifts", tuple(sorted((complex(b) for b in self.shifts), key=_key)))
        if self.self_dual and not self.conjugation_closed():
            raise ValueError("self-dual infinity type must be closed under conjugation")

    @property
    def degree(self) -> int:
        return len(self.shifts)

    @property
    def analytic_conductor_weight(self) -> float:
        """Lambda = sum |b_j|, always recomputed from the shifts."""
        return float(sum(abs(b) for b in self.shifts))

    def conjugation_closed(self) -> bool:
        return Counter(_key(b) for b in self.shifts) == Counter(_key(b.conjugate()) for b in self.shifts)

    def __add__(self, other: "InfinityType") -> "InfinityType":
        return InfinityType(self.shifts + other.shifts, self.self_dual and other.self_dual)

    def log_gamma(self, s, ctx=_mp):
        """log prod Gamma_R(s + b_j) (principal branches, summed)."""
        total = ctx.mpf(0)
        for b in self.shifts:
            z = ctx.mpf(s) + ctx.mpc(b.real, b.imag) if b.imag else ctx.mpf(s) + b.real
            total += -z / 2 * ctx.log(ctx.pi) + ctx.loggamma(z / 2)
        return total

    def gamma(self, s, ctx=_mp):
        return ctx.exp(self.log_gamma(s, ctx))


def gamma_r(s, ctx=_mp):
    return ctx.pi ** (-s / 2) * ctx.gamma(s / 2)


def infinity_type_holomorphic(k: int) -> InfinityType:
    """Gamma_C(s + (k-1)/2) written as two Gamma_R shifts."""
    p = ArchParameter(HOLOMORPHIC, weight=k)
    return InfinityType(((k - 1) / 2, (k + 1) / 2), True, (p,))


def infinity_type_maass(t: float, parity: int) -> InfinityType:
    p = ArchParameter(MAASS, t=t, parity=parity)
    return InfinityType((complex(parity, t), complex(parity, -t)), True, (p,))


def zeta_infinity() -> InfinityType:
    return InfinityType((0,), True)


def character_infinity(D: int) -> InfinityType:
    """Gamma_R(s + a) with a = 0 for even and 1 for odd quadratic characters."""
    return InfinityType((0 if D > 0 else 1,), True)


def _monomial_data(params: Sequence[ArchParameter], label, exps):
    """C*-character and image under j for the weight vector e1^a e2^b (per factor).

    Returns (a, mu, image, sign): the C*-character is (z/zbar)^a |z|^(2 mu),
    and j maps the vector to sign * (image vector).
    """
    a_total, mu, sign, image = 0.0, 0.0, 1, []
    for f, par in enumerate(params):
        j, k = label[2 * f], label[2 * f + 1]
        u, v = exps[f]  # e1^u e2^v inside sym^j, u + v = j
        if par.kind == HOLOMORPHIC:
            ell = par.weight - 1
            a_total += (u - v) * ell / 2
            # j e1 = e2, j e2 = (-1)^ell e1, det(j) = (-1)^weight
            sign *= (-1) ** ((ell * v + par.weight * k) % 2)
            image.append((v, u))
        else:
            mu += (u - v) * par.t
            sign *= (-1) ** ((par.parity * j) % 2)
            image.append((u, v))
    return a_total, mu, tuple(image), sign


def functorial_infinity(base: Union[InfinityType, Sequence[InfinityType]], d) -> InfinityType:
    """Infinity type of r(sigma_infinity) for the representation with decomposition d.

    Works on the archimedean Weil-group parameters recorded in ``base``: each
    weight vector of each irreducible part carries a C*-character and j either
    fixes it up to sign (a Gamma_R factor) or pairs it with a partner
    (a Gamma_C factor).
    """
    bases = [base] if isinstance(base, InfinityType) else list(base)
    if isinstance(d, CharPoly):
        d = decompose(d)
    if len(bases) != d.factors:
        raise ValueError(f"need {d.factors} base infinity type(s), got {len(bases)}")
    params = []
    for b in bases:
        if len(b.params) != 1:
            raise ValueError("base infinity types must come from a single GL(2) form")
        params.append(b.params[0])
    shifts = []
    for part in d.parts:
        *label, mult = part
        ranges = [range(label[2 * f] + 1) for f in range(d.factors)]
        vectors = [()]
        for f, r in enumerate(ranges):
            j = label[2 * f]
            vectors = [v + ((j - i, i),) for v in vectors for i in r]
        seen = set()
        local = []
        for vec in vectors:
            if vec in seen:
                continue
            a, mu, image, sign = _monomial_data(params, label, vec)
            seen.add(vec)
            if image == vec:
                local.append(complex(0 if sign == 1 else 1, mu))
            else:
                seen.add(image)
                # the pair spans Ind(C* -> W_R); its factor is Gamma_C(s + mu + |a|)
                local += [complex(abs(a), mu), complex(abs(a) + 1, mu)]
        shifts += local * mult
    return InfinityType(tuple(shifts), all(b.self_dual for b in bases), ())


# -- scalar formulas ------------------------------------------------------------

def c_of_pi(t: float, rel_tol: float = 1e-12) -> float:
    """1 / (cosh(2 pi t) cosh(pi t)^2), cross-checked against two gamma-function paths."""
    mp = _mp
    t = mp.mpf(t)
    closed = 1 / (mp.cosh(2 * mp.pi * t) * mp.cosh(mp.pi * t) ** 2)
    direct = mp.pi ** -3 * abs(mp.gamma(mp.mpf(1) / 2 + 2j * t)) ** 2 * abs(mp.gamma(mp.mpf(1) / 2 + 1j * t)) ** 4
    # product of Gamma_R(1 + b_j) over the degree-9 infinity type of sym2 x sym2
    inf = functorial_infinity([infinity_type_maass(float(t), 0)] * 2, _s2xs2())
    via_type = inf.gamma(1).real
    for name, value in (("direct", direct), ("infinity type", via_type)):
        if abs(value - closed) > rel_tol * closed:
            raise DisagreementError(f"{name} path {value} differs from closed form {closed}")
    return float(closed)


def _s2xs2() -> IrredDecomp:
    s2 = irreducible_char(2, -1)
    return decompose(external(s2, s2))


def thickened_conductor(N: int, inf: InfinityType) -> float:
    if N < 1:
        raise ValueError("conductor must be positive")
    return N * (2 + inf.analytic_conductor_weight)


def zero_region_width(N_pair: float, D_F: float, t: float, lam: float, deg: int) -> float:
    """log[N_pair * D_F^4 * (2 + |t| + Lambda)^(4 deg)]."""
    if N_pair <= 0 or D_F <= 0 or deg < 1 or lam < 0:
        raise ValueError("inputs must be positive")
    return float(_mp.log(N_pair) + 4 * _mp.log(D_F) + 4 * deg * _mp.log(2 + abs(t) + lam))


def stirling_ratio_check(t: float) -> float:
    """| |Gamma(1+it) / Gamma(-1/2+it)| / t^(3/2) - 1 |."""
    if t < 10:
        raise ValueError("the asymptotic check needs t >= 10")
    mp = _mp
    ratio = abs(mp.gamma(1 + 1j * mp.mpf(t)) / mp.gamma(mp.mpf(-0.5) + 1j * mp.mpf(t)))
    return float(abs(ratio / mp.mpf(t) ** 1.5 - 1))


def stirling_modulus(sigma: float, t: float) -> float:
    """Leading term sqrt(2 pi) e^(-pi |t| / 2) |t|^(sigma - 1/2) of |Gamma(sigma + it)|."""
    mp = _mp
    return float(mp.sqrt(2 * mp.pi) * mp.exp(-mp.pi * abs(t) / 2) * abs(mp.mpf(t)) ** (sigma - 0.5))


def spectral_a11(norm_sq: float) -> float:
    """|a(1,1)| from |a(1,1)|^2 <phi, phi> = 1."""
    if not norm_sq > 0:
        raise NonPositiveNorm(f"norm must be positive, got {norm_sq}")
    return float(1 / _mp.sqrt(norm_sq))


def petersson_from_residue(residue: float, eisenstein_constant: float) -> float:
    """<phi, phi> = R / C with C an opaque positive constant."""
    if not eisenstein_constant > 0:
        raise ValueError("the Eisenstein constant must be positive")
    return residue / eisenstein_constant


def conductor_pair_bound(M_pi: float, n_pi: int, M_pi2: float, n_pi2: int, M_pair: float) -> bool:
    """M(pi)^(-n') M(pi')^(-n) <= M(pi x pi') <= M(pi)^(n') M(pi')^(n) on declared values."""
    lo = M_pi ** (-n_pi2) * M_pi2 ** (-n_pi)
    hi = M_pi ** n_pi2 * M_pi2 ** n_pi
    return lo <= M_pair <= hi


def degree_nine_satake_factor(alpha, p=None) -> LocalFactorPoly:
    """(1-a^4 X)(1-b^4 X)(1-a^2 X)^2 (1-b^2 X)^2 (1-X)^3 with b = 1/a."""
    X = sympy.Symbol("X")
    a = sympy.sympify(alpha)
    b = 1 / a
    expr = (1 - a ** 4 * X) * (1 - b ** 4 * X) * (1 - a ** 2 * X) ** 2 * (1 - b ** 2 * X) ** 2 * (1 - X) ** 3
    coeffs = sympy.Poly(sympy.expand(expr), X).all_coeffs()[::-1]
    return LocalFactorPoly(p, tuple(coeffs))
