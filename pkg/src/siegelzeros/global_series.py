"""Global incomplete L-series assembled from local factors over good primes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from numbers import Rational
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

import sympy
import yaml

from .char_ring import (
    CharPoly,
    IrredDecomp,
    decomp_of,
    decompose,
    external,
    irreducible_char,
    plethysm,
    tensor_chars,
    unit,
    SYM2,
)
from .forms_data import (
    MaassFormData,
    NewformQExpansion,
    QuadraticCharacter,
    kronecker,
    level_one_eigenform,
    MissingPrime,
)
from .local_factors import (
    EXACT,
    FLOAT,
    FLOAT_TOL,
    HeckeLocal,
    LocalFactorPoly,
    _normalize,
    fp,
    local_factor,
    representation_traces,
)

MATCH = "MATCH"
MISMATCH = "MISMATCH"


# -- forms -----------------------------------------------------------------

_BUILTIN_WEIGHTS = {"delta": 12, "f16": 16, "f18": 18, "f20": 20, "f22": 22}


class FormBank:
    """Name -> Hecke data source; holomorphic built-ins grow their cutoff on demand."""

    def __init__(self):
        self._extra: dict = {}
        self._cache: dict = {}

    def register(self, name: str, form: Union[MaassFormData, NewformQExpansion]) -> None:
        self._extra[name] = form

    def names(self) -> list:
        return sorted(set(_BUILTIN_WEIGHTS) | set(self._extra))

    def form(self, name: str, pmax: int = 2):
        if name in self._extra:
            return self._extra[name]
        if name not in _BUILTIN_WEIGHTS:
            raise KeyError(f"unknown form {name!r}")
        cached = self._cache.get(name)
        if cached is None or cached.cutoff < pmax:
            size = max(pmax, 2 * (cached.cutoff if cached else 0), 1000)
            cached = level_one_eigenform(_BUILTIN_WEIGHTS[name], size)
            self._cache[name] = cached
        return cached

    def hecke(self, name: str, p: int, mode: str) -> HeckeLocal:
        return self.form(name, p).hecke(p, mode)

    def is_exact(self, name: str) -> bool:
        return not isinstance(self.form(name), MaassFormData)


DEFAULT_BANK = FormBank()


# -- specs -------------------------------------------------------------------

@dataclass(frozen=True)
class RepFactor:
    """L(s, r(forms))**exponent for a representation r of one or two GL(2) factors."""

    forms: tuple
    rep: IrredDecomp
    exponent: int = 1
    label: str = ""

    def __post_init__(self):
        if isinstance(self.rep, CharPoly):
            object.__setattr__(self, "rep", decompose(self.rep))
        if len(self.forms) != self.rep.factors:
            raise ValueError(f"{self.label or self.rep}: need {self.rep.factors} form(s)")
        if self.exponent < 1:
            raise ValueError("exponent must be at least 1")

    @property
    def degree(self) -> int:
        return self.rep.dim

    def local(self, p: int, mode: str, bank: FormBank, max_degree=None) -> LocalFactorPoly:
        hs = tuple(bank.hecke(f, p, mode) for f in self.forms)
        return local_factor(hs, self.rep, max_degree)

    def traces(self, p: int, mode: str, bank: FormBank, n: int) -> list:
        hs = tuple(bank.hecke(f, p, mode) for f in self.forms)
        return representation_traces(hs, self.rep, n)

    def is_unitary(self, bank: FormBank) -> bool:
        """Twisted so that the exact arithmetic data has unitary Frobenius."""
        for part in self.rep.parts:
            *label, _ = part
            for f, name in enumerate(self.forms):
                j, k = label[2 * f], label[2 * f + 1]
                if bank.is_exact(name) and j + 2 * k != 0:
                    return False
        return True


@dataclass(frozen=True)
class CharacterFactor:
    """L(s, chi_D)**exponent for a quadratic Dirichlet character; D = 1 gives zeta."""

    D: int
    exponent: int = 1

    def __post_init__(self):
        QuadraticCharacter(self.D)
        if self.exponent < 1:
            raise ValueError("exponent must be at least 1")

    @property
    def degree(self) -> int:
        return 1

    @property
    def label(self) -> str:
        return "zeta" if self.D == 1 else f"chi({self.D})"

    def value(self, p: int) -> int:
        return 1 if self.D == 1 else kronecker(self.D, p)

    def local(self, p: int, mode: str, bank=None, max_degree=None) -> LocalFactorPoly:
        return LocalFactorPoly(p, (1, -self.value(p)))

    def traces(self, p: int, mode: str, bank, n: int) -> list:
        v = self.value(p)
        return [v ** k for k in range(1, n + 1)]


Factor = Union[RepFactor, CharacterFactor]


@dataclass(frozen=True)
class LSeriesSpec:
    name: str
    factors: tuple
    mode: str = EXACT
    excluded: frozenset = frozenset()
    self_dual: bool = True
    conductor: int = 1
    root_number: Optional[int] = None
    pole_order: int = 0
    declared_degree: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        object.__setattr__(self, "excluded", frozenset(self.excluded))
        if self.declared_degree is not None and self.declared_degree != self.degree:
            raise ValueError(
                f"{self.name}: factor degrees sum to {self.degree}, declared {self.declared_degree}"
            )
        if self.conductor < 1:
            raise ValueError("conductor must be positive")

    @property
    def degree(self) -> int:
        return sum(f.degree * f.exponent for f in self.factors)

    def good(self, p: int) -> bool:
        return p not in self.excluded

    def local(self, p: int, bank: FormBank = DEFAULT_BANK, max_degree=None) -> LocalFactorPoly:
        """Product of all factor polynomials at p (truncated to max_degree if given)."""
        out = LocalFactorPoly(p, (1,))
        for f in self.factors:
            poly = f.local(p, self.mode, bank, max_degree) ** f.exponent
            out = out * poly
            if max_degree is not None:
                out = out.truncate(max_degree)
        return out

    def traces(self, p: int, n: int, bank: FormBank = DEFAULT_BANK) -> list:
        """sum over eigenvalues g of g**k, k = 1..n, for the whole product."""
        total = [0] * n
        for f in self.factors:
            for k, t in enumerate(f.traces(p, self.mode, bank, n)):
                total[k] = total[k] + f.exponent * t
        return [_normalize(t) for t in total]

    def with_factors(self, *extra: Factor, name: str = None) -> "LSeriesSpec":
        return LSeriesSpec(name or self.name, self.factors + extra, self.mode, self.excluded,
                           self.self_dual, self.conductor, self.root_number, self.pole_order)


def zeta_spec() -> LSeriesSpec:
    return LSeriesSpec("zeta", (CharacterFactor(1),), root_number=1, pole_order=1)


# -- Dirichlet coefficients ------------------------------------------------------

@dataclass(frozen=True)
class DirichletCoeffs:
    values: tuple  # a_1 .. a_X
    mode: str = EXACT

    def __post_init__(self):
        if self.values and self.values[0] != 1:
            raise ValueError("a_1 must be 1 for an Euler product")

    @property
    def cutoff(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int):
        return self.values[n - 1]

    def as_floats(self) -> list:
        return [float(v) for v in self.values]

    def as_mpf(self) -> list:
        return [to_mpf(v) for v in self.values]


def _max_exponent(p: int, X: int) -> int:
    e, q = 0, p
    while q <= X:
        e += 1
        q *= p
    return e


def _spf(X: int) -> list:
    spf = list(range(X + 1))
    for i in range(2, int(math.isqrt(X)) + 1):
        if spf[i] == i:
            for m in range(i * i, X + 1, i):
                if spf[m] == m:
                    spf[m] = i
    return spf


def _assemble(prime_powers: Mapping[int, list], X: int) -> list:
    spf = _spf(X)
    a = [0] * (X + 1)
    if X >= 1:
        a[1] = 1
    for n in range(2, X + 1):
        p = spf[n]
        m, e = n, 0
        while m % p == 0:
            m //= p
            e += 1
        a[n] = prime_powers[p][e] * a[m] if m > 1 else prime_powers[p][e]
    return a[1:]


def expand_coeffs(spec: LSeriesSpec, X: int, bank: FormBank = DEFAULT_BANK) -> DirichletCoeffs:
    """Dirichlet coefficients a_1..a_X of the good-prime Euler product."""
    if X < 1:
        raise ValueError("cutoff must be at least 1")
    powers = {}
    for p in sympy.primerange(2, X + 1):
        e = _max_exponent(p, X)
        if not spec.good(p):
            powers[p] = [1] + [0] * e
            continue
        powers[p] = spec.local(p, bank, max_degree=e).inverse_series(e)
    return DirichletCoeffs(tuple(_normalize(v) for v in _assemble(powers, X)), spec.mode)


def dirichlet_convolve(x: Sequence, y: Sequence) -> list:
    n = min(len(x), len(y))
    out = [0] * n
    for i in range(1, n + 1):
        xi = x[i - 1]
        if xi == 0:
            continue
        for j in range(1, n // i + 1):
            out[i * j - 1] += xi * y[j - 1]
    return out


# -- positivity ---------------------------------------------------------------------

@dataclass(frozen=True)
class PositivityReport:
    first_violation: Optional[int]
    checked: int
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.first_violation is None

    def describe(self) -> str:
        where = "NONE" if self.ok else str(self.first_violation)
        return f"first negative index: {where} (checked n <= {self.checked})"


def positivity_report(values: Union[DirichletCoeffs, Sequence], mode: str = None) -> PositivityReport:
    if isinstance(values, DirichletCoeffs):
        mode = mode or values.mode
        values = values.values
    tol = -FLOAT_TOL if mode == FLOAT else 0
    for n, v in enumerate(values, start=1):
        if v < tol:
            return PositivityReport(n, len(values), tol)
    return PositivityReport(None, len(values), tol)


def to_mpf(v):
    if isinstance(v, Rational):
        return fp.mpf(int(v.numerator)) / int(v.denominator)
    return fp.mpf(v)


def log_deriv_coeffs(spec: LSeriesSpec, X: int, bank: FormBank = DEFAULT_BANK) -> list:
    """Coefficients c_n of -L'/L = sum c_n n^-s, n = 1..X, as 128-bit reals.

    c_{p^k} = log(p) * sum_g g^k over the Frobenius eigenvalues; zero off prime powers.
    The sign is that of the exact trace, so exact-mode positivity is exact.
    """
    out = [fp.mpf(0)] * X
    for p in sympy.primerange(2, X + 1):
        if not spec.good(p):
            continue
        e = _max_exponent(p, X)
        logp = fp.log(p)
        for k, t in enumerate(spec.traces(p, e, bank), start=1):
            out[p ** k - 1] = to_mpf(t) * logp
    return out


# -- identity verification ------------------------------------------------------

@dataclass
class IdentityReport:
    tag: str
    annotation: str
    rows: list = field(default_factory=list)  # (key, status, first differing index, lhs, rhs)
    note: str = ""

    @property
    def mismatches(self) -> list:
        return [r for r in self.rows if r[1] == MISMATCH]

    @property
    def all_match(self) -> bool:
        return bool(self.rows) and not self.mismatches

    @property
    def status(self) -> str:
        return MATCH if self.all_match else MISMATCH

    def to_document(self) -> dict:
        first = self.mismatches[0] if self.mismatches else None
        doc = {
            "tag": self.tag,
            "annotation": self.annotation,
            "status": self.status,
            "checked": [str(r[0]) for r in self.rows],
            "mismatched": [str(r[0]) for r in self.mismatches],
        }
        if first is not None:
            doc["first_difference"] = {
                "at": str(first[0]),
                "coefficient_index": first[2],
                "lhs": str(first[3]),
                "rhs": str(first[4]),
            }
        if self.note:
            doc["note"] = self.note
        return doc

    def to_text(self) -> str:
        return yaml.safe_dump(self.to_document(), sort_keys=True)


def compare_polys(lhs: LocalFactorPoly, rhs: LocalFactorPoly, tol: float = 0.0) -> tuple:
    idx = lhs.first_difference(rhs, tol)
    if idx is None:
        return MATCH, None, None, None
    a = lhs.coeffs[idx] if idx < len(lhs.coeffs) else 0
    b = rhs.coeffs[idx] if idx < len(rhs.coeffs) else 0
    return MISMATCH, idx, a, b


def verify_local_identity(lhs: LSeriesSpec, rhs: LSeriesSpec, primes: Iterable[int],
                          bank: FormBank = DEFAULT_BANK, tag: str = "", annotation: str = "") -> IdentityReport:
    """Compare the full inverse local factors of both sides prime by prime."""
    tol = FLOAT_TOL if FLOAT in (lhs.mode, rhs.mode) else 0.0
    report = IdentityReport(tag or f"{lhs.name} = {rhs.name}", annotation)
    for p in sorted(set(primes)):
        if not sympy.isprime(p) or not (lhs.good(p) and rhs.good(p)):
            continue
        status, idx, a, b = compare_polys(lhs.local(p, bank), rhs.local(p, bank), tol)
        report.rows.append((p, status, idx, a, b))
    return report
