"""Hecke data sources: level-one eigenforms, quadratic characters, form files."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Literal, Mapping, Optional, Union

import sympy
import yaml
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from .local_factors import EXACT, FLOAT, HeckeLocal, fp

UNITARY = "UNITARY"
LEVEL_ONE_WEIGHTS = (12, 16, 18, 20, 22)


class NotFundamental(ValueError):
    pass


class MissingPrime(KeyError):
    def __init__(self, primes):
        self.primes = sorted(primes)
        super().__init__(f"missing prime data for {self.primes}")


class SchemaError(ValueError):
    def __init__(self, path: str, message: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if message else path)


class InvariantError(ValueError):
    pass


# -- exact power series -------------------------------------------------------

def _pack(coeffs, nbytes):
    return int.from_bytes(b"".join(c.to_bytes(nbytes, "little") for c in coeffs), "little")


def _unpack(n, nbytes, length):
    raw = n.to_bytes(nbytes * length, "little")
    return [int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") for i in range(length)]


def series_mul(a: list, b: list, n: int) -> list:
    """Product of two integer series truncated to n terms (Kronecker substitution)."""
    a, b = a[:n], b[:n]
    if not a or not b:
        return [0] * n
    bound = max(map(abs, a)) * max(map(abs, b)) * min(len(a), len(b))
    nbytes = bound.bit_length() // 8 + 1
    pos_a = [max(c, 0) for c in a]
    neg_a = [max(-c, 0) for c in a]
    pos_b = [max(c, 0) for c in b]
    neg_b = [max(-c, 0) for c in b]
    length = len(a) + len(b) - 1

    def prod(x, y):
        return _unpack(_pack(x, nbytes) * _pack(y, nbytes), nbytes, length)

    pp, nn = prod(pos_a, pos_b), prod(neg_a, neg_b)
    pn, np_ = prod(pos_a, neg_b), prod(neg_a, pos_b)
    out = [pp[i] + nn[i] - pn[i] - np_[i] for i in range(length)]
    return (out + [0] * n)[:n]


def _euler_cubed(n: int) -> list:
    """prod (1 - q^m)^3 = sum (-1)^r (2r+1) q^(r(r+1)/2), to n terms."""
    out = [0] * n
    r = 0
    while r * (r + 1) // 2 < n:
        out[r * (r + 1) // 2] = (-1) ** r * (2 * r + 1)
        r += 1
    return out


@dataclass(frozen=True)
class NewformQExpansion:
    weight: int
    coefficients: tuple  # a_1 .. a_X
    level: int = 1
    provenance: str = "internal"

    def __post_init__(self):
        if self.coefficients and self.coefficients[0] != 1:
            raise InvariantError("a_1 must be 1")

    @property
    def cutoff(self) -> int:
        return len(self.coefficients)

    def a(self, n: int) -> int:
        return self.coefficients[n - 1]

    def prime_data(self) -> dict:
        return {p: self.a(p) for p in sympy.primerange(2, self.cutoff + 1)}

    def hecke(self, p: int, mode: str = EXACT) -> HeckeLocal:
        if mode == EXACT:
            return HeckeLocal(p, self.a(p), p ** (self.weight - 1), EXACT)
        return HeckeLocal(p, fp.mpf(self.a(p)) / fp.sqrt(p) ** (self.weight - 1), 1, FLOAT)


@lru_cache(maxsize=8)
def delta_q_expansion(X: int) -> NewformQExpansion:
    """Delta = q prod(1 - q^n)^24 with exact integer coefficients a_1..a_X."""
    if X < 1:
        raise ValueError("cutoff must be at least 1")
    j = _euler_cubed(X)
    j2 = series_mul(j, j, X)
    j4 = series_mul(j2, j2, X)
    j8 = series_mul(j4, j4, X)
    return NewformQExpansion(12, tuple(j8[:X]))


def bernoulli(k: int) -> Fraction:
    b = sympy.bernoulli(k)
    return Fraction(int(b.p), int(b.q))


def divisor_power_sums(power: int, X: int) -> list:
    """sigma_power(n) for n = 0..X (index 0 unused)."""
    out = [0] * (X + 1)
    for d in range(1, X + 1):
        dp = d ** power
        for m in range(d, X + 1, d):
            out[m] += dp
    return out


def eisenstein_series(k: int, X: int) -> list:
    """Coefficients e_0..e_{X-1} of E_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n."""
    if k == 0:
        return [1] + [0] * (X - 1)
    factor = -Fraction(2 * k) / bernoulli(k)
    if factor.denominator != 1:
        raise ValueError(f"E_{k} does not have integral normalization")
    sig = divisor_power_sums(k - 1, X)
    return [1] + [int(factor) * sig[n] for n in range(1, X)]


@lru_cache(maxsize=16)
def level_one_eigenform(k: int, X: int) -> NewformQExpansion:
    """The normalized cusp eigenform of level one and weight k in {12,16,18,20,22}."""
    if k not in LEVEL_ONE_WEIGHTS:
        raise ValueError(f"weight {k} does not have a one-dimensional cusp space")
    delta = delta_q_expansion(X)
    if k == 12:
        return delta
    e = eisenstein_series(k - 12, X)
    coeffs = series_mul(list(delta.coefficients), e, X)
    return NewformQExpansion(k, tuple(coeffs))


# -- quadratic characters ------------------------------------------------------

def is_fundamental(D: int) -> bool:
    if D == 1:
        return True
    if D == 0:
        return False
    if D % 4 == 1:
        return sympy.ntheory.factor_.core(abs(D)) == abs(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and sympy.ntheory.factor_.core(abs(m)) == abs(m)
    return False


def kronecker(D: int, n: int) -> int:
    if not is_fundamental(D):
        raise NotFundamental(f"{D} is not a fundamental discriminant")
    if n < 1:
        raise ValueError("n must be positive")
    return int(sympy.kronecker_symbol(D, n))


@dataclass(frozen=True)
class QuadraticCharacter:
    D: int

    def __post_init__(self):
        if not is_fundamental(self.D):
            raise NotFundamental(f"{self.D} is not a fundamental discriminant")

    def __call__(self, n: int) -> int:
        return kronecker(self.D, n)

    @property
    def conductor(self) -> int:
        return abs(self.D)

    @property
    def parity(self) -> int:
        """0 for even characters, 1 for odd ones."""
        return 0 if self.D > 0 else 1


# -- multiplicative extension ------------------------------------------------------

def multiplicative_extend(prime_data: Mapping[int, object], k: Union[int, str], X: int) -> list:
    """a_1..a_X from prime coefficients via the Hecke recursion.

    ``k`` is the weight (arithmetic normalization, alpha*beta = p^(k-1)) or
    UNITARY (alpha*beta = 1).
    """
    primes = list(sympy.primerange(2, X + 1))
    missing = [p for p in primes if p not in prime_data]
    if missing:
        raise MissingPrime(missing)
    a = [0] * (X + 1)
    a[1] = 1
    for p in primes:
        scale = 1 if k == UNITARY else p ** (k - 1)
        prev, cur = 1, prime_data[p]
        q = p
        while q <= X:
            a[q] = cur
            prev, cur = cur, prime_data[p] * cur - scale * prev
            q *= p
    spf = _smallest_prime_factors(X)
    for n in range(2, X + 1):
        p = spf[n]
        q = p
        while n % (q * p) == 0:
            q *= p
        if q != n:
            a[n] = a[q] * a[n // q]
    return a[1:]


def _smallest_prime_factors(X: int) -> list:
    spf = list(range(X + 1))
    for i in range(2, int(X ** 0.5) + 1):
        if spf[i] == i:
            for m in range(i * i, X + 1, i):
                if spf[m] == m:
                    spf[m] = i
    return spf


# -- Maass data and form files -----------------------------------------------

@dataclass(frozen=True)
class MaassFormData:
    spectral_parameter: float
    parity: int
    ap: Mapping[int, object]
    level: int = 1
    provenance: str = ""

    def __post_init__(self):
        if not self.spectral_parameter > 0:
            raise InvariantError(f"spectral parameter must be positive, got {self.spectral_parameter}")
        if self.parity not in (0, 1):
            raise InvariantError("parity must be 0 or 1")

    @property
    def eigenvalue(self) -> float:
        return 0.25 + self.spectral_parameter ** 2

    def hecke(self, p: int, mode: str = FLOAT) -> HeckeLocal:
        if p not in self.ap:
            raise MissingPrime([p])
        return HeckeLocal(p, self.ap[p], 1, FLOAT)


class _FormFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    type: Literal["maass", "holomorphic"]
    level: int
    weight: Optional[int] = None
    spectral_parameter_t: Optional[float] = None
    parity: Optional[int] = None
    ap: dict[str, Union[int, float, str]]
    provenance: str

    @field_validator("ap")
    @classmethod
    def _prime_keys(cls, v):
        seen = set()
        for key in v:
            if not key.strip().isdigit() or not sympy.isprime(int(key)):
                raise ValueError(f"key {key!r} is not a prime")
            if int(key) in seen:
                raise ValueError(f"prime {key} listed twice")
            seen.add(int(key))
        return v


def _first_error_path(err: ValidationError) -> str:
    first = err.errors()[0]
    return ".".join(str(x) for x in first["loc"]) or "<root>"


def parse_form_document(doc) -> Union[MaassFormData, NewformQExpansion]:
    if not isinstance(doc, dict):
        raise SchemaError("<root>", "document must be a mapping")
    try:
        rec = _FormFile.model_validate(doc)
    except ValidationError as err:
        raise SchemaError(_first_error_path(err), str(err.errors()[0]["msg"])) from None
    ap = {int(k): v for k, v in rec.ap.items()}
    if rec.type == "maass":
        for name in ("spectral_parameter_t", "parity"):
            if getattr(rec, name) is None:
                raise SchemaError(name, "required for maass records")
        if rec.weight is not None:
            raise SchemaError("weight", "not allowed for maass records")
        vals = {p: fp.mpf(v) for p, v in ap.items()}
        return MaassFormData(rec.spectral_parameter_t, rec.parity, vals, rec.level, rec.provenance)
    if rec.weight is None:
        raise SchemaError("weight", "required for holomorphic records")
    if rec.spectral_parameter_t is not None or rec.parity is not None:
        raise SchemaError("spectral_parameter_t", "not allowed for holomorphic records")
    if rec.level != 1:
        raise InvariantError("only level-one holomorphic records are supported")
    X = max(ap) if ap else 1
    coeffs = multiplicative_extend({p: int(v) for p, v in ap.items()}, rec.weight, X)
    return NewformQExpansion(rec.weight, tuple(coeffs), rec.level, rec.provenance)


def load_form_file(path) -> Union[MaassFormData, NewformQExpansion]:
    text = Path(path).read_text()
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as err:
        raise SchemaError("<root>", f"unparseable: {err}") from None
    return parse_form_document(doc)


def dump_form(form: Union[MaassFormData, NewformQExpansion]) -> str:
    if isinstance(form, MaassFormData):
        doc = {
            "type": "maass",
            "level": form.level,
            "spectral_parameter_t": float(form.spectral_parameter),
            "parity": form.parity,
            "ap": {str(p): str(v) for p, v in sorted(form.ap.items())},
            "provenance": form.provenance,
        }
    else:
        doc = {
            "type": "holomorphic",
            "level": form.level,
            "weight": form.weight,
            "ap": {str(p): a for p, a in sorted(form.prime_data().items())},
            "provenance": form.provenance,
        }
    return yaml.safe_dump(doc, sort_keys=True)
