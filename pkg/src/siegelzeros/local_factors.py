"""Unramified local L-factors from Hecke data at a good prime.

Everything is driven by the 2x2 companion matrix ``C`` of ``x^2 - trace*x + scale``.
The inverse local factor ``det(1 - X r(C))`` of a representation ``r`` is
recovered from the traces ``tr r(C^k)`` through Newton's identities, so no
eigenvalue is ever extracted. ``representation_matrix`` builds ``r(C)``
explicitly and serves as the second route.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence, Union

import mpmath
import numpy as np
import sympy
from gmpy2 import lcm, mpq, mpz

from .char_ring import CharPoly, IrredDecomp, decompose

EXACT = "EXACT"
FLOAT = "FLOAT"
SYMBOLIC = "SYMBOLIC"

SPLIT = "SPLIT"
INERT = "INERT"
RAMIFIED = "RAMIFIED"

FLOAT_PREC = 128
FLOAT_TOL = 1e-9

fp = mpmath.MPContext()
fp.prec = FLOAT_PREC

_MPQ = type(mpq(1, 2))


class PrimeMismatch(ValueError):
    pass


class OverflowPolicyError(ValueError):
    """EXACT mode was requested for data that is not integral."""


@dataclass(frozen=True)
class HeckeLocal:
    p: int
    trace: object
    scale: object
    arithmetic_mode: str = EXACT

    def __post_init__(self):
        mode = self.arithmetic_mode
        if mode not in (EXACT, FLOAT, SYMBOLIC):
            raise ValueError(f"unknown arithmetic mode {mode!r}")
        if mode != SYMBOLIC and not sympy.isprime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if mode == EXACT:
            for name in ("trace", "scale"):
                v = getattr(self, name)
                if not isinstance(v, Rational) or Fraction(v).denominator != 1:
                    raise OverflowPolicyError(f"{name}={v!r} is not an integer in EXACT mode")
        elif mode == FLOAT:
            object.__setattr__(self, "trace", fp.mpf(self.trace))
            object.__setattr__(self, "scale", fp.mpf(self.scale))
        if self.scale == 0:
            raise ValueError("scale must be nonzero")

    def companion(self) -> sympy.Matrix:
        return sympy.Matrix([[0, -self.scale], [1, self.trace]])


@dataclass(frozen=True)
class LocalFactorPoly:
    """Inverse local factor sum(coeffs[i] * X**i) with coeffs[0] == 1."""

    p: int
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(_normalize(c) for c in self.coeffs)
        if not coeffs or coeffs[0] != 1:
            raise ValueError("constant coefficient must be 1")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __mul__(self, other: "LocalFactorPoly") -> "LocalFactorPoly":
        if self.p != other.p:
            raise PrimeMismatch(f"{self.p} != {other.p}")
        if _all_rational(self.coeffs) and _all_rational(other.coeffs):
            return LocalFactorPoly(self.p, _rational_convolve(self.coeffs, other.coeffs))
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return LocalFactorPoly(self.p, tuple(out))

    def __pow__(self, n: int) -> "LocalFactorPoly":
        out = LocalFactorPoly(self.p, (1,))
        for _ in range(n):
            out = out * self
        return out

    def truncate(self, n: int) -> "LocalFactorPoly":
        return LocalFactorPoly(self.p, self.coeffs[: n + 1])

    def inverse_series(self, n: int) -> list:
        """First n+1 coefficients of 1/P(X): the Dirichlet coefficients at p**e."""
        c = self.coeffs
        out = [1]
        for e in range(1, n + 1):
            acc = 0
            for i in range(1, min(e, len(c) - 1) + 1):
                acc -= c[i] * out[e - i]
            out.append(_normalize(acc))
        return out

    def first_difference(self, other: "LocalFactorPoly", tol: float = 0.0):
        """Index of the first differing coefficient, or None when they agree."""
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        for i, (x, y) in enumerate(zip(a, b)):
            if not _agree(x, y, tol):
                return i
        return None


def _all_rational(cs) -> bool:
    return all(isinstance(c, (int, _MPQ)) for c in cs)


def _rational_convolve(a, b) -> tuple:
    """Exact product of rational coefficient lists via one common denominator each."""
    da = _common_denominator(a)
    db = _common_denominator(b)
    ia = [mpz(c * da) for c in a]
    ib = [mpz(c * db) for c in b]
    out = [mpz(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(ia):
        if x:
            for j, y in enumerate(ib):
                out[i + j] += x * y
    d = da * db
    return tuple(_normalize(mpq(c, d)) for c in out)


def _common_denominator(cs):
    d = mpz(1)
    for c in cs:
        if isinstance(c, _MPQ):
            d = lcm(d, c.denominator)
    return d


def _normalize(c):
    """Exact rationals become ints when integral and gmpy2 rationals otherwise."""
    if isinstance(c, (Fraction, _MPQ)):
        return int(c) if c.denominator == 1 else mpq(c)
    if isinstance(c, sympy.Basic):
        c = sympy.expand(sympy.cancel(c))
        if c.is_Integer:
            return int(c)
    return c


def _agree(x, y, tol: float) -> bool:
    if isinstance(x, sympy.Basic) or isinstance(y, sympy.Basic):
        return sympy.simplify(sympy.sympify(x) - sympy.sympify(y)) == 0
    if tol:
        x, y = _as_real(x), _as_real(y)
        return abs(x - y) <= tol * max(1, abs(x), abs(y))
    return x == y


def _as_real(v):
    if isinstance(v, Rational):
        return fp.mpf(int(v.numerator)) / int(v.denominator)
    return v


def _inv(x):
    if isinstance(x, sympy.Basic):
        return 1 / x
    if isinstance(x, Rational):
        return mpq(1, 1) / mpq(x)
    return 1 / x


def _div_int(x, k: int):
    if isinstance(x, sympy.Basic):
        return x / sympy.Integer(k)
    if isinstance(x, int):
        q, r = divmod(x, k)
        return q if r == 0 else mpq(x, k)
    if isinstance(x, Rational):
        return mpq(x) / k
    return x / k


def _power(base, inv_base, e: int):
    return base ** e if e >= 0 else inv_base ** (-e)


def _power_sums(h: HeckeLocal, n: int) -> list:
    """alpha^k + beta^k for k = 0..n from trace and scale alone."""
    ps = [2, h.trace]
    for _ in range(2, n + 1):
        ps.append(h.trace * ps[-1] - h.scale * ps[-2])
    return ps[: n + 1]


def _complete_homogeneous(t, d, j: int):
    """tr sym^j of a 2x2 matrix with trace t and determinant d."""
    a, b = 1, t
    if j == 0:
        return 1
    for _ in range(j - 1):
        a, b = b, t * b - d * a
    return b


def _as_decomp(d: Union[IrredDecomp, CharPoly]) -> IrredDecomp:
    return decompose(d) if isinstance(d, CharPoly) else d


def representation_traces(hs: Sequence[HeckeLocal], d: IrredDecomp, n: int) -> list:
    """tr r(C^k) for k = 1..n where r is the representation with decomposition d."""
    if len(hs) != d.factors:
        raise ValueError(f"need {d.factors} Hecke datum(s), got {len(hs)}")
    psums = [_power_sums(h, n) for h in hs]
    out = []
    for k in range(1, n + 1):
        per_factor = []
        for f, h in enumerate(hs):
            sk = h.scale ** k
            per_factor.append((psums[f][k], sk, _inv(sk)))
        memo = {}
        total = 0
        for part in d.parts:
            *label, m = part
            term = m
            for f in range(d.factors):
                j, e = label[2 * f], label[2 * f + 1]
                t, sk, sk_inv = per_factor[f]
                if (f, j, e) not in memo:
                    memo[f, j, e] = _power(sk, sk_inv, e) * _complete_homogeneous(t, sk, j)
                term = term * memo[f, j, e]
            total += term
        out.append(total)
    return out


def newton_coefficients(traces: Sequence, degree: int) -> tuple:
    """Coefficients of prod(1 - g X) from the power sums tr = sum g**k."""
    if all(isinstance(t, int) for t in traces[:degree]):
        return _newton_integer(traces, degree)
    e = [1]
    for k in range(1, degree + 1):
        acc = 0
        for i in range(1, k + 1):
            term = e[k - i] * traces[i - 1]
            acc = acc + term if i % 2 else acc - term
        e.append(_normalize(_div_int(acc, k)))
    return tuple(c if k % 2 == 0 else -c for k, c in enumerate(e))


def _newton_integer(traces: Sequence, degree: int) -> tuple:
    """Newton's identities over GMP integers; every division is exact."""
    t = [mpz(x) for x in traces[:degree]]
    e = [mpz(1)]
    for k in range(1, degree + 1):
        acc = mpz(0)
        for i in range(1, k + 1):
            if i % 2:
                acc += e[k - i] * t[i - 1]
            else:
                acc -= e[k - i] * t[i - 1]
        q, r = divmod(acc, k)
        if r:
            raise ArithmeticError("power sums are not those of algebraic integers")
        e.append(q)
    return tuple(int(c) if k % 2 == 0 else -int(c) for k, c in enumerate(e))


def local_factor(h, d, max_degree: int | None = None, method: str = "trace") -> LocalFactorPoly:
    """Inverse local factor det(1 - X r(C)) of the representation d.

    ``h`` is one HeckeLocal, or a pair for two-factor decompositions.
    ``max_degree`` truncates the polynomial; only that many traces are formed.
    """
    hs = (h,) if isinstance(h, HeckeLocal) else tuple(h)
    d = _as_decomp(d)
    if len({x.p for x in hs}) > 1:
        raise PrimeMismatch(f"primes differ: {[x.p for x in hs]}")
    degree = d.dim if max_degree is None else min(d.dim, max_degree)
    if method == "matrix":
        poly = _charpoly_from_matrix(representation_matrix(hs, d))
        return LocalFactorPoly(hs[0].p, poly[: degree + 1])
    if all(x.arithmetic_mode == EXACT for x in hs):
        return _exact_local_factor(hs, d, degree)
    traces = representation_traces(hs, d, degree)
    return LocalFactorPoly(hs[0].p, newton_coefficients(traces, degree))


def _exact_local_factor(hs, d: IrredDecomp, degree: int) -> LocalFactorPoly:
    """Integer-only Newton pass after shifting every det twist to be nonnegative.

    With shifts e_f the eigenvalues are multiplied by D = prod scale_f**e_f and
    become algebraic integers, so all intermediate values are integers; the
    coefficient of X**i is divided by D**i at the very end.
    """
    shifts = [max([0] + [-part[2 * f + 1] for part in d.parts]) for f in range(d.factors)]
    if any(shifts):
        parts = []
        for part in d.parts:
            part = list(part)
            for f, e in enumerate(shifts):
                part[2 * f + 1] += e
            parts.append(tuple(part))
        d = IrredDecomp(d.factors, tuple(parts))
    traces = representation_traces(hs, d, degree)
    coeffs = newton_coefficients(traces, degree)
    D = 1
    for h, e in zip(hs, shifts):
        D *= h.scale ** e
    if D != 1:
        coeffs = tuple(_normalize(mpq(c, D ** i)) for i, c in enumerate(coeffs))
    return LocalFactorPoly(hs[0].p, coeffs)


def rs_pairing_factor(h1: HeckeLocal, h2: HeckeLocal, d, max_degree: int | None = None) -> LocalFactorPoly:
    if h1.p != h2.p:
        raise PrimeMismatch(f"{h1.p} != {h2.p}")
    d = _as_decomp(d)
    if d.factors != 2:
        raise ValueError("Rankin-Selberg pairing needs a two-factor decomposition")
    return local_factor((h1, h2), d, max_degree)


def _sym_power_matrix(m: sympy.Matrix, j: int) -> sympy.Matrix:
    """Action of m on degree-j polynomials in e1, e2 (basis e1^(j-i) e2^i)."""
    if j == 0:
        return sympy.Matrix([[1]])
    x, y = sympy.symbols("_e1 _e2")
    img1 = m[0, 0] * x + m[1, 0] * y
    img2 = m[0, 1] * x + m[1, 1] * y
    out = sympy.zeros(j + 1, j + 1)
    for col in range(j + 1):
        poly = sympy.Poly(sympy.expand(img1 ** (j - col) * img2 ** col), x, y)
        for row in range(j + 1):
            out[row, col] = poly.coeff_monomial(x ** (j - row) * y ** row)
    return out


def representation_matrix(hs: Sequence[HeckeLocal], d: IrredDecomp) -> sympy.Matrix:
    """Block-diagonal r(C): sym^j, det twists and Kronecker products of companions."""
    blocks = []
    for part in d.parts:
        *label, m = part
        mat = sympy.Matrix([[1]])
        for f, h in enumerate(hs):
            j, e = label[2 * f], label[2 * f + 1]
            scale = sympy.nsimplify(h.scale) if h.arithmetic_mode == FLOAT else h.scale
            block = _sym_power_matrix(h.companion(), j) * sympy.Integer(1) * sympy.sympify(scale) ** e
            mat = sympy.kronecker_product(mat, block)
        blocks.extend([mat] * m)
    return sympy.diag(*blocks)


def _charpoly_from_matrix(mat: sympy.Matrix) -> tuple:
    lam = sympy.Symbol("_lam")
    cp = mat.charpoly(lam).all_coeffs()  # det(lam I - M), leading 1
    out = []
    for c in cp:
        c = sympy.nsimplify(c) if c.is_Number else sympy.expand(c)
        out.append(Fraction(int(c.p), int(c.q)) if c.is_Rational else c)
    return tuple(_normalize(c) for c in out)


@dataclass(frozen=True)
class SplittingType:
    """Local behaviour at p of a character of a quadratic extension K/F."""

    kind: str
    values: tuple

    def __post_init__(self):
        expected = {SPLIT: 2, INERT: 1, RAMIFIED: 1}
        if self.kind not in expected:
            raise ValueError(f"unknown splitting type {self.kind!r}")
        if len(self.values) != expected[self.kind]:
            raise ValueError(f"{self.kind} carries {expected[self.kind]} character value(s)")

    def hecke(self, p=None) -> HeckeLocal:
        """Frobenius data of the induced two-dimensional representation."""
        if self.kind == SPLIT:
            x, y = self.values
            return HeckeLocal(p, x + y, x * y, SYMBOLIC)
        if self.kind == INERT:
            (c,) = self.values
            return HeckeLocal(p, 0, -c, SYMBOLIC)
        raise ValueError("ramified induced data has no unramified Frobenius")


def induced_local_factor(s: SplittingType, p=None) -> LocalFactorPoly:
    if s.kind == SPLIT:
        x, y = s.values
        return LocalFactorPoly(p, (1, -(x + y), x * y))
    if s.kind == INERT:
        (c,) = s.values
        return LocalFactorPoly(p, (1, 0, -c))
    (r,) = s.values
    return LocalFactorPoly(p, (1, -r))


def character_factor(value, p=None) -> LocalFactorPoly:
    """Degree-one factor 1 - value*X of a Hecke character of the base field."""
    return LocalFactorPoly(p, (1, -value))


def local_pole_abscissa(poly: LocalFactorPoly) -> float:
    """Largest real part of a pole of 1/P(p^-s), in units where Re(s) = log|g| / log p."""
    coeffs = [complex(c) for c in poly.coeffs]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) == 1:
        return float("-inf")
    # roots of X^d P(1/X) are the g_i
    gammas = np.roots(coeffs)
    return float(max(np.log(abs(g)) for g in gammas) / np.log(poly.p))


def twisted_sym_unramified(j: int, twist_order: int) -> bool:
    """sym^j(nu (x) sigma0) = nu^j sym^j(sigma0) is unramified iff nu^j = 1."""
    return j % twist_order == 0
