"""Completed L-functions on the real axis: evaluation, real-zero scans, residues.

Evaluation uses the smoothed approximate functional equation.  For a
completed function ``Lam(s) = N^(s/2) gamma(s) L(s)`` with ``Lam(s) = W Lam(1-s)``
and at most a simple pole at ``s = 1`` (residue ``rho``), moving the contour of

    (1/2 pi i) int_(c) Lam(s+z) t^z dz/z

past ``z = 0`` and applying the functional equation gives, for every ``t > 0``,

    Lam(s) = F_t(s) + W F_(1/t)(1-s) - rho (t^(1-s)/(1-s) + W t^(-s)/s),
    F_t(s) = sum a_n (1/2 pi i) int_(c) gamma(s+z) (n/sqrt N)^(-s-z) t^z dz/z.

The inner integrals are computed by the trapezoidal rule on ``Re z = c``; the
result does not depend on ``t``, which checks both the quadrature and the root
number, and two values of ``t`` determine ``rho`` when it is unknown.

Large products (for instance a Rankin-Selberg square of an isobaric sum) are
evaluated as products of their irreducible pieces, with the poles of the
zeta pieces peeled off: ``(s-1)^r Lam = [(s-1) Lam_zeta]^r prod Lam_piece``.
"""
from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath
import numpy as np
from scipy.special import loggamma, logsumexp

from .archimedean import (
    InfinityType,
    character_infinity,
    functorial_infinity,
    infinity_type_holomorphic,
    infinity_type_maass,
    thickened_conductor,
)
from .char_ring import IrredDecomp
from .forms_data import MaassFormData, NotFundamental, is_fundamental
from .global_series import (
    DEFAULT_BANK,
    CharacterFactor,
    FormBank,
    LSeriesSpec,
    PositivityReport,
    RepFactor,
    expand_coeffs,
)

DIRECT_MAX_DEGREE = 9
UNRESOLVED = "UNRESOLVED"
LOCATED = "LOCATED"
PASS = "PASS"
FAIL = "FAIL"


class AccuracyUnreachable(RuntimeError):
    pass


class NotSelfDual(ValueError):
    pass


class PositivityUnverified(RuntimeError):
    pass


class PrerequisiteFailed(RuntimeError):
    def __init__(self, which: str):
        self.which = which
        super().__init__(f"prerequisite failed: {which}")


class RootNumberMismatch(ArithmeticError):
    pass


@dataclass(frozen=True)
class ScanConfig:
    interval: tuple = (0.5, 0.999)
    grid: int = 200
    tol: float = 1e-9
    target: float = 1e-8
    c: float = 0.1
    max_terms: int = 200_000
    threads: int = 1

    def __post_init__(self):
        a, b = self.interval
        if not 0 < a < b <= 1:
            raise ValueError(f"interval must satisfy 0 < a < b <= 1, got {self.interval}")
        if self.grid < 2:
            raise ValueError("grid must have at least 2 points")
        if not self.c > 0:
            raise ValueError("c must be positive")

    def with_interval(self, a: float, b: float) -> "ScanConfig":
        return ScanConfig((a, b), self.grid, self.tol, self.target, self.c, self.max_terms, self.threads)


# -- infinity types of specs ------------------------------------------------------

def form_infinity(bank: FormBank, name: str) -> InfinityType:
    form = bank.form(name)
    if isinstance(form, MaassFormData):
        return infinity_type_maass(form.spectral_parameter, form.parity)
    return infinity_type_holomorphic(form.weight)


def spec_infinity(spec: LSeriesSpec, bank: FormBank = DEFAULT_BANK) -> InfinityType:
    shifts = []
    for f in spec.factors:
        if isinstance(f, CharacterFactor):
            inf = character_infinity(f.D)
        else:
            inf = functorial_infinity([form_infinity(bank, n) for n in f.forms], f.rep)
        shifts += list(inf.shifts) * f.exponent
    return InfinityType(tuple(shifts), True)


def spec_conductor(factors: Sequence) -> int:
    N = 1
    for f in factors:
        if isinstance(f, CharacterFactor):
            N *= abs(f.D) ** f.exponent
    return N


# -- one completed L-function -----------------------------------------------------

class CompletedL:
    """Evaluator for one self-dual completed L-function with at most a simple pole."""

    C = 2.0  # abscissa of the inverse-Mellin contour

    def __init__(self, spec: LSeriesSpec, inf: Optional[InfinityType] = None,
                 bank: FormBank = DEFAULT_BANK, target: float = 1e-8, max_terms: int = 200_000):
        _require_self_dual(spec, bank)
        if spec.pole_order > 1:
            raise ValueError("direct evaluation handles at most a simple pole")
        self.spec = spec
        self.bank = bank
        self.inf = inf if inf is not None else spec_infinity(spec, bank)
        if self.inf.degree != spec.degree:
            raise ValueError(f"infinity type has degree {self.inf.degree}, spec has {spec.degree}")
        self.shifts = np.array(self.inf.shifts, dtype=complex)
        self.N = spec.conductor
        self.target = target
        self.max_terms = max_terms
        self.pole = spec.pole_order
        self._maass = any(
            isinstance(bank.form(n), MaassFormData)
            for f in spec.factors if isinstance(f, RepFactor) for n in f.forms
        )
        self._coeffs = np.zeros(0)
        self._lock = threading.Lock()
        self._W = spec.root_number
        self._rho = None  # residue of Lam at s = 1
        self._calibrated = False

    # coefficients
    def coeffs(self, n: int) -> np.ndarray:
        if n > self.max_terms:
            raise AccuracyUnreachable(f"{self.spec.name}: needs {n} terms, maximum is {self.max_terms}")
        with self._lock:
            if len(self._coeffs) < n:
                size = min(self.max_terms, max(n, 2 * len(self._coeffs), 64))
                c = expand_coeffs(self.spec, size, self.bank)
                self._coeffs = np.array(c.as_floats())
            return self._coeffs[:n]

    # gamma factor
    def log_gamma(self, w: np.ndarray) -> np.ndarray:
        """log prod Gamma_R(w + b_j) for an array of complex w."""
        w = np.asarray(w, dtype=complex)
        u = (w[..., None] + self.shifts) / 2
        return np.sum(loggamma(u) - u * math.log(math.pi), axis=-1)

    def log_gamma_real(self, s: float) -> float:
        return float(np.real(self.log_gamma(np.array([s]))[0]))

    # inverse-Mellin weights
    def _nodes(self, sigma: float, s: float, logt: float):
        """Half-line nodes z = c + i y (y >= 0) and weights for the integral."""
        c = self.C
        lg_s = self.log_gamma_real(s)
        growth = self.log_gamma_real(sigma + 2 * c) - lg_s
        h = min(0.25, 2 * math.pi * c / (70.0 + max(growth, 0.0)))
        peak = self.log_gamma_real(sigma + c) - lg_s + c * logt
        Y = 16.0
        while True:
            ys = np.arange(0.0, Y + h / 2, h)
            z = c + 1j * ys
            logw = self.log_gamma(sigma + z) - lg_s + z * logt - np.log(z)
            if np.real(logw[-1]) < peak - 55 and np.all(np.real(logw[-8:]) < peak - 50):
                break
            Y *= 1.5
        w = np.exp(logw) * h / (2 * math.pi)
        w[0] *= 0.5
        return z, 2 * w  # the y < 0 half is the complex conjugate

    def _tail_terms(self, sigma: float, s: float, logt: float, budget: float) -> int:
        """Smallest n0 for which the coefficient tail is below ``budget`` (normalized units)."""
        deg = self.inf.degree
        # the smoothing weight is O(1) up to about sqrt(q) with q = N prod(|b| / 2 pi),
        # so a cutoff beyond max_terms is certain before any integration is done
        log_q = math.log(self.N) + sum(max(0.0, math.log(abs(b) / (2 * math.pi))) for b in self.inf.shifts if b)
        if log_q / 2 > math.log(self.max_terms):
            raise AccuracyUnreachable(
                f"{self.spec.name}: needs more than {math.exp(log_q / 2):.3g} terms, maximum is {self.max_terms}")
        # |a_n| <= d_deg(n) n^extra <= n^theta; extra = 0 where Ramanujan is known
        theta = math.log2(max(deg, 2)) + (deg / 4 if self._maass else 0.0)
        lg_s = self.log_gamma_real(s)
        # the gamma factor has its bulk near y = |Im b|, so the window must reach past it
        reach = max((abs(complex(b).imag) for b in self.inf.shifts), default=0.0)
        best = None
        for cp in (2.0, 4.0, 8.0, 16.0, 32.0, 64.0):
            if cp + sigma - theta - 1 <= 0.5:
                continue
            ys = np.linspace(0.0, 400.0 + 40 * cp + reach, 8001 + int(4 * reach))
            z = cp + 1j * ys
            log_mag = np.real(self.log_gamma(sigma + z)) - lg_s + cp * logt - np.log(np.abs(z))
            # trapezoid rule in log space; the integrand is log-convex so this overestimates
            wts = np.full(ys.size, ys[1] - ys[0])
            wts[[0, -1]] *= 0.5
            log_B = float(logsumexp(log_mag, b=wts)) + math.log(2 / (2 * math.pi))
            # tail <= B N^(cp/2) sum_{n>n0} n^(theta - sigma - cp)
            expo = cp + sigma - theta - 1
            log_need = log_B + cp / 2 * math.log(self.N) - math.log(expo) - math.log(budget)
            n0 = math.exp(min(log_need / expo, 700.0)) if log_need > 0 else 1.0
            best = n0 if best is None else min(best, n0)
        return int(math.ceil(min(best, 1e300))) + 1

    def _sum(self, sigma: float, s: float, logt: float) -> float:
        """sum a_n n^-sigma V(n) in units of N^(s/2) gamma(s) (dual scaling added by caller)."""
        n_max = self._tail_terms(sigma, s, logt, self.target / 4)
        a = self.coeffs(n_max)
        z, w = self._nodes(sigma, s, logt)
        n = np.arange(1, n_max + 1, dtype=float)
        logx = np.log(n) - 0.5 * math.log(self.N)
        total = 0.0
        for lo in range(0, n_max, 2048):
            hi = min(n_max, lo + 2048)
            E = np.exp(-np.outer(logx[lo:hi], z))
            V = np.real(E @ w)
            total += float(np.sum(a[lo:hi] * n[lo:hi] ** (-sigma) * V))
        return total

    def _G(self, s: float, t: float, W: int) -> float:
        """(F_t(s) + W F_(1/t)(1-s)) / (N^(s/2) gamma(s))."""
        logt = math.log(t)
        direct = self._sum(s, s, logt)
        dual = self._sum(1 - s, s, -logt) * self.N ** ((1 - 2 * s) / 2)
        return direct + W * dual

    def _scale(self, s: float) -> float:
        """log of N^(s/2) gamma(s)."""
        return s / 2 * math.log(self.N) + self.log_gamma_real(s)

    @staticmethod
    def _polar(s: float, t: float, W: int) -> float:
        return t ** (1 - s) / (1 - s) + W * t ** (-s) / s

    # root number and residue
    def _calibrate(self):
        if self._calibrated:
            return
        s0 = 0.3
        ts = (0.8, 1.6, 1.15)
        candidates = [self._W] if self._W is not None else [1, -1]
        scale = None
        for W in candidates:
            G = [self._G(s0, t, W) for t in ts]
            if self.pole:
                r = [self._polar(s0, t, W) for t in ts]
                rho_hat = (G[0] - G[1]) / (r[0] - r[1])
                vals = [g - rho_hat * x for g, x in zip(G, r)]
            else:
                rho_hat, vals = 0.0, G
            scale = max(1.0, max(abs(v) for v in vals))
            if max(vals) - min(vals) <= 1e3 * self.target * scale:
                self._W = W
                self._calibrated = True
                self._rho = rho_hat * math.exp(self._scale(s0)) if self.pole else 0.0
                return
        raise RootNumberMismatch(
            f"{self.spec.name}: values depend on t for root number(s) {candidates}; "
            "the declared data is inconsistent"
        )

    @property
    def root_number(self) -> int:
        self._calibrate()
        return self._W

    @property
    def rho(self) -> float:
        """Residue of the completed function at s = 1."""
        self._calibrate()
        return self._rho

    # public values
    def L_scaled(self, s: float, t: float = 1.0) -> float:
        """Lam(s) / (N^(s/2) gamma(s)), i.e. the finite L-value for s not a pole."""
        self._calibrate()
        val = self._G(s, t, self._W)
        if self.pole:
            val -= self._rho * math.exp(-self._scale(s)) * self._polar(s, t, self._W)
        return val

    def completed(self, s: float, t: float = 1.0):
        return mpmath.mpf(self.L_scaled(s, t)) * mpmath.exp(self._scale(s))

    def peeled_scaled(self, s: float, t: float = 1.0) -> float:
        """(s-1)^pole Lam(s) / (N^(s/2) gamma(s)); finite at s = 1."""
        self._calibrate()
        if not self.pole:
            return self.L_scaled(s, t)
        rho_hat = self._rho * math.exp(-self._scale(s))
        if abs(s - 1) < 1e-14:
            return rho_hat
        G = self._G(s, t, self._W)
        return (s - 1) * G + rho_hat * (t ** (1 - s) - (s - 1) * self._W * t ** (-s) / s)

    def peeled(self, s: float):
        return mpmath.mpf(self.peeled_scaled(s)) * mpmath.exp(self._scale(s))

    def residue_of_L(self) -> float:
        """Residue of the finite L-function at s = 1 (zero for entire functions)."""
        return self.rho * math.exp(-self._scale(1.0)) if self.pole else 0.0


def _require_self_dual(spec: LSeriesSpec, bank: FormBank):
    if not spec.self_dual:
        raise NotSelfDual(f"{spec.name} is not declared self-dual")
    for f in spec.factors:
        if isinstance(f, RepFactor):
            ch = f.rep.character()
            if ch != ch.dual():
                raise NotSelfDual(f"{f.label or f.rep} is not self-dual")
            if not f.is_unitary(bank):
                raise NotSelfDual(f"{f.label or f.rep} is not twisted to unitary normalization")


# -- products of pieces ------------------------------------------------------------

@dataclass
class PeeledProduct:
    """(s-1)^r Lam(s) as a product of completed pieces raised to exponents."""

    name: str
    pieces: list  # (CompletedL, exponent)
    inf: InfinityType
    conductor: int
    pole_order: int

    def warm_up(self) -> None:
        """Fix root numbers and residues before any concurrent evaluation."""
        for piece, _ in self.pieces:
            piece._calibrate()

    def value(self, s: float):
        out = mpmath.mpf(1)
        for piece, e in self.pieces:
            out *= piece.peeled(s) ** e
        return out

    def sign(self, s: float) -> int:
        v = self.value(s)
        return 0 if v == 0 else (1 if v > 0 else -1)

    def residue_of_L(self) -> float:
        """lim (s-1) L(s) when the total pole order is one."""
        if self.pole_order != 1:
            raise ValueError("residue needs a simple pole")
        out = 1.0
        for piece, e in self.pieces:
            if piece.pole:
                out *= piece.residue_of_L() ** e
            else:
                out *= piece.L_scaled(1.0) ** e
        return out


def _single_piece_specs(spec: LSeriesSpec) -> list:
    """Split a spec into (piece spec, exponent) with merged duplicates."""
    acc = {}
    for f in spec.factors:
        if isinstance(f, CharacterFactor):
            key = ("char", f.D)
            acc[key] = acc.get(key, 0) + f.exponent
            continue
        for part in f.rep.parts:
            *label, mult = part
            if all(label[i] == 0 for i in range(0, len(label), 2)):
                key = ("char", 1)  # a det power; unitary twists make it trivial
            else:
                key = ("rep", f.forms, tuple(label))
            acc[key] = acc.get(key, 0) + mult * f.exponent
    out = []
    for key in sorted(acc, key=repr):
        e = acc[key]
        if key[0] == "char":
            D = key[1]
            piece = LSeriesSpec("zeta" if D == 1 else f"chi({D})", (CharacterFactor(D),),
                                mode=spec.mode, conductor=abs(D), pole_order=1 if D == 1 else 0,
                                root_number=1)
        else:
            _, forms, label = key
            rep = IrredDecomp(len(forms), (label + (1,),))
            piece = LSeriesSpec(f"{'x'.join(forms)}:{label}", (RepFactor(forms, rep),),
                                mode=spec.mode, conductor=1, root_number=1)
        out.append((piece, e))
    return out


def prepare(spec: LSeriesSpec, inf: Optional[InfinityType] = None, bank: FormBank = DEFAULT_BANK,
            target: float = 1e-8, max_terms: int = 200_000, split: Optional[bool] = None) -> PeeledProduct:
    """Choose direct evaluation or a product of pieces and return the evaluator."""
    _require_self_dual(spec, bank)
    inf = inf if inf is not None else spec_infinity(spec, bank)
    if split is None:
        split = spec.degree > DIRECT_MAX_DEGREE or spec.pole_order > 1
    if not split:
        piece = CompletedL(spec, inf, bank, target, max_terms)
        return PeeledProduct(spec.name, [(piece, 1)], inf, spec.conductor, spec.pole_order)
    pieces = [(CompletedL(p, None, bank, target, max_terms), e) for p, e in _single_piece_specs(spec)]
    r = sum(e for p, e in pieces if p.pole)
    if r != spec.pole_order:
        raise ValueError(f"{spec.name}: declared pole order {spec.pole_order}, pieces give {r}")
    return PeeledProduct(spec.name, pieces, inf, spec.conductor, r)


def evaluate_completed(spec: LSeriesSpec, inf: Optional[InfinityType], s: float,
                       bank: FormBank = DEFAULT_BANK, target: float = 1e-8):
    """Lam(s) for a self-dual spec with at most a simple pole, s in (0, 2] and s != 1."""
    if not 0 < s <= 2:
        raise ValueError("s must lie in (0, 2]")
    return CompletedL(spec, inf, bank, target).completed(s)


# -- scanning ----------------------------------------------------------------------

@dataclass(frozen=True)
class RealZero:
    location: float
    bracket: tuple
    status: str


@dataclass
class ScanResult:
    name: str
    grid: list  # (s, value)
    zeros: list = field(default_factory=list)

    def csv_rows(self) -> list:
        brackets = {z.bracket[0] for z in self.zeros}
        return [(s, v, 1 if s in brackets else 0) for s, v in self.grid]


def _grid_points(cfg: ScanConfig) -> list:
    a, b = cfg.interval
    return [a + (b - a) * i / (cfg.grid - 1) for i in range(cfg.grid)]


def _sign(v) -> int:
    return 0 if v == 0 else (1 if v > 0 else -1)


def scan_real_zeros(spec, inf: Optional[InfinityType], cfg: ScanConfig,
                    bank: FormBank = DEFAULT_BANK) -> ScanResult:
    """Sign changes of (s-1)^r Lam(s) on a grid, refined by bisection."""
    ev = spec if isinstance(spec, PeeledProduct) else prepare(spec, inf, bank, cfg.target, cfg.max_terms)
    pts = _grid_points(cfg)
    ev.warm_up()
    if cfg.threads > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            values = list(pool.map(ev.value, pts))
    else:
        values = [ev.value(s) for s in pts]
    result = ScanResult(ev.name, list(zip(pts, values)))
    for (s0, v0), (s1, v1) in zip(result.grid, result.grid[1:]):
        g0, g1 = _sign(v0), _sign(v1)
        if g0 == 0:
            result.zeros.append(RealZero(s0, (s0, s0), LOCATED))
            continue
        if g0 * g1 < 0:
            lo, hi = s0, s1
            while hi - lo > cfg.tol:
                mid = (lo + hi) / 2
                gm = _sign(ev.value(mid))
                if gm == 0:
                    lo = hi = mid
                    break
                if gm == g0:
                    lo = mid
                else:
                    hi = mid
            status = UNRESOLVED if 1 - hi <= cfg.tol else LOCATED
            result.zeros.append(RealZero((lo + hi) / 2, (s0, s1), status))
    if result.grid and _sign(result.grid[-1][1]) == 0:
        s_last = result.grid[-1][0]
        status = UNRESOLVED if 1 - s_last <= cfg.tol else LOCATED
        result.zeros.append(RealZero(s_last, (s_last, s_last), status))
    return result


SIEGEL_LEFT_FLOOR = 1e-3


def siegel_interval(M: float, c: float) -> tuple:
    """(1 - c / log M, 1), with the left end kept inside the open unit interval."""
    return (max(1 - c / math.log(M), SIEGEL_LEFT_FLOOR), 1.0)


def zero_count_bound(spec, cfg: ScanConfig, positivity: Optional[PositivityReport] = None,
                     inf: Optional[InfinityType] = None, bank: FormBank = DEFAULT_BANK) -> tuple:
    """(zeros found in (1 - c/log M, 1), r, PASS iff found <= r)."""
    if positivity is None:
        raise PositivityUnverified("coefficient positivity was not checked")
    if not positivity.ok:
        raise PositivityUnverified(f"coefficients fail positivity at n = {positivity.first_violation}")
    ev = spec if isinstance(spec, PeeledProduct) else prepare(spec, inf, bank, cfg.target, cfg.max_terms)
    M = thickened_conductor(ev.conductor, ev.inf)
    scan = scan_real_zeros(ev, None, cfg.with_interval(*siegel_interval(M, cfg.c)))
    count = len(scan.zeros)
    return count, ev.pole_order, PASS if count <= ev.pole_order else FAIL


# -- residues ----------------------------------------------------------------------

def residue_at_one(spec, inf: Optional[InfinityType] = None, method: str = "direct",
                   bank: FormBank = DEFAULT_BANK, h: float = 0.05, levels: int = 6) -> float:
    """lim_(s->1) (s-1) L(s) for a spec whose total pole order is one.

    ``direct`` reads the residue off the polar term of the functional equation
    (two smoothing parameters determine it); ``richardson`` extrapolates
    (s-1) L(s) from s = 1 + h 2^-j.
    """
    ev = spec if isinstance(spec, PeeledProduct) else prepare(spec, inf, bank, target=1e-10)
    if ev.pole_order != 1:
        raise ValueError("residue_at_one needs total pole order one")
    if method == "direct":
        return ev.residue_of_L()
    if method != "richardson":
        raise ValueError(f"unknown method {method!r}")

    def g(s):
        out = 1.0
        for piece, e in ev.pieces:
            out *= piece.peeled_scaled(s) ** e
        return out

    table = [[g(1 + h / 2 ** j)] for j in range(levels)]
    for m in range(1, levels):
        for j in range(m, levels):
            prev, cur = table[j - 1][m - 1], table[j][m - 1]
            table[j].append(cur + (cur - prev) / (2 ** m - 1))
    best, second = table[-1][-1], table[-1][-2]
    if abs(best - second) > 1e-6 * max(1.0, abs(best)):
        raise AccuracyUnreachable(f"Richardson table not converged: {best} vs {second}")
    return best


def siegel_lower_bound_check(spec, cfg: ScanConfig, positivity: Optional[PositivityReport] = None,
                             inf: Optional[InfinityType] = None, bank: FormBank = DEFAULT_BANK) -> tuple:
    """(residue, c / log M, verdict, largest passing c)."""
    if positivity is None or not positivity.ok:
        raise PrerequisiteFailed("positivity")
    ev = spec if isinstance(spec, PeeledProduct) else prepare(spec, inf, bank, cfg.target, cfg.max_terms)
    M = thickened_conductor(ev.conductor, ev.inf)
    scan = scan_real_zeros(ev, None, cfg.with_interval(*siegel_interval(M, cfg.c)))
    if scan.zeros:
        raise PrerequisiteFailed("zero-freeness")
    res = residue_at_one(ev)
    bound = cfg.c / math.log(M)
    return res, bound, PASS if res >= bound else FAIL, res * math.log(M)


# -- class number oracle ---------------------------------------------------------------

def class_number(D: int) -> int:
    """Number of reduced primitive forms (a, b, c) of discriminant D < 0."""
    if D >= 0 or not is_fundamental(D):
        raise NotFundamental(f"{D} is not a negative fundamental discriminant")
    h = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if c == a and b < 0:
                continue
            if math.gcd(math.gcd(a, abs(b)), c) == 1:
                h += 1
        a += 1
    return h


def class_number_oracle(D: int) -> float:
    """L(1, chi_D) = 2 pi h / (w sqrt|D|)."""
    if D >= 0 or abs(D) > 10 ** 4:
        raise NotFundamental(f"oracle covers negative fundamental D with |D| <= 10^4, got {D}")
    h = class_number(D)
    w = {-3: 6, -4: 4}.get(D, 2)
    return 2 * math.pi * h / (w * math.sqrt(-D))
