"""Virtual characters of one or two GL(2) dual tori.

A weight ``(i, j)`` stands for the monomial ``a**i * b**j`` in the torus
variables of one factor; with two factors the weight is ``(i, j, i2, j2)``.
All multiplicities are integers and every character is Weyl invariant.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Mapping

SYM2 = "SYM2"
ALT2 = "ALT2"


class NotEffective(ValueError):
    """Raised when a character has negative multiplicities where it must not."""


Weight = tuple  # tuple[int, ...] of length 2 * factors


def _swap(w: Weight, factor: int) -> Weight:
    i = 2 * factor
    return w[:i] + (w[i + 1], w[i]) + w[i + 2:]


@dataclass(frozen=True)
class CharPoly:
    factors: int
    terms: Mapping[Weight, int]

    def __post_init__(self):
        if self.factors not in (1, 2):
            raise ValueError(f"factors must be 1 or 2, got {self.factors}")
        clean = {}
        for w, m in self.terms.items():
            w = tuple(int(x) for x in w)
            if len(w) != 2 * self.factors:
                raise ValueError(f"weight {w} has wrong length for {self.factors} factor(s)")
            if m:
                clean[w] = clean.get(w, 0) + int(m)
        clean = {w: m for w, m in clean.items() if m}
        for w, m in clean.items():
            for f in range(self.factors):
                if clean.get(_swap(w, f), 0) != m:
                    raise ValueError(f"character is not Weyl invariant at weight {w}")
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @property
    def dim(self) -> int:
        return sum(self.terms.values())

    def is_effective(self) -> bool:
        return all(m > 0 for m in self.terms.values())

    def weights(self) -> list[Weight]:
        """Weights repeated by multiplicity (effective characters only)."""
        if not self.is_effective():
            raise NotEffective("weight list of a virtual character")
        out = []
        for w, m in self.terms.items():
            out.extend([w] * m)
        return out

    def promote(self) -> "CharPoly":
        """View a one-factor character as a two-factor one, trivial on the second."""
        if self.factors == 2:
            return self
        return CharPoly(2, {w + (0, 0): m for w, m in self.terms.items()})

    def dual(self) -> "CharPoly":
        return CharPoly(self.factors, {tuple(-x for x in w): m for w, m in self.terms.items()})

    def twist(self, k: int, factor_index: int = 1) -> "CharPoly":
        """Tensor with det**k of the given factor."""
        return tensor_chars(self, irreducible_char(0, k, factor_index))

    def __add__(self, other: "CharPoly") -> "CharPoly":
        x, y = _align(self, other)
        terms = Counter(x.terms)
        terms.update(y.terms)
        return CharPoly(x.factors, terms)

    def __sub__(self, other: "CharPoly") -> "CharPoly":
        return self + CharPoly(other.factors, {w: -m for w, m in other.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return CharPoly(self.factors, {w: m * other for w, m in self.terms.items()})
        return tensor_chars(self, other)

    __rmul__ = __mul__


def _align(x: CharPoly, y: CharPoly) -> tuple[CharPoly, CharPoly]:
    if x.factors == y.factors:
        return x, y
    return x.promote(), y.promote()


def unit(factors: int = 1) -> CharPoly:
    return CharPoly(factors, {(0,) * (2 * factors): 1})


def irreducible_char(j: int, k: int = 0, factor_index: int = 1) -> CharPoly:
    """Character of sym^j (x) det^k placed in factor 1 or 2.

    Placing it in factor 2 gives a two-factor character trivial on factor 1.
    """
    if factor_index not in (1, 2):
        raise ValueError(f"factor_index must be 1 or 2, got {factor_index}")
    if j < 0:
        raise ValueError("j must be nonnegative")
    weights = [(j - i + k, i + k) for i in range(j + 1)]
    if factor_index == 1:
        return CharPoly(1, Counter(weights))
    return CharPoly(2, Counter((0, 0) + w for w in weights))


def external(x: CharPoly, y: CharPoly) -> CharPoly:
    """External product of two one-factor characters: x on factor 1, y on factor 2."""
    if x.factors != 1 or y.factors != 1:
        raise ValueError("external product takes two one-factor characters")
    terms: Counter = Counter()
    for w1, m1 in x.terms.items():
        for w2, m2 in y.terms.items():
            terms[w1 + w2] += m1 * m2
    return CharPoly(2, terms)


def tensor_chars(x: CharPoly, y: CharPoly) -> CharPoly:
    x, y = _align(x, y)
    terms: Counter = Counter()
    for w1, m1 in x.terms.items():
        for w2, m2 in y.terms.items():
            terms[tuple(a + b for a, b in zip(w1, w2))] += m1 * m2
    return CharPoly(x.factors, terms)


def plethysm(x: CharPoly, kind: str) -> CharPoly:
    """Symmetric or exterior square of an effective one-factor character."""
    if x.factors != 1:
        raise ValueError("plethysm of two-factor characters is not supported")
    ws = x.weights()
    if kind == SYM2:
        pairs = combinations_with_replacement(range(len(ws)), 2)
    elif kind == ALT2:
        pairs = combinations(range(len(ws)), 2)
    else:
        raise ValueError(f"unknown plethysm kind {kind!r}")
    terms = Counter(tuple(a + b for a, b in zip(ws[i], ws[j])) for i, j in pairs)
    return CharPoly(1, terms)


@dataclass(frozen=True)
class IrredDecomp:
    """Formal sum of sym^j det^k (or external products of two such) with multiplicities.

    Parts are tuples ``(j, k, mult)`` for one factor and
    ``(j, k, j2, k2, mult)`` for two factors.
    """

    factors: int
    parts: tuple = field(default_factory=tuple)

    def __post_init__(self):
        width = 2 * self.factors + 1
        merged: Counter = Counter()
        for part in self.parts:
            if len(part) != width:
                raise ValueError(f"part {part} does not match {self.factors} factor(s)")
            *label, m = part
            if any(label[i] < 0 for i in range(0, len(label), 2)):
                raise ValueError(f"negative symmetric power in {part}")
            merged[tuple(label)] += m
        for label, m in merged.items():
            if m <= 0:
                raise ValueError(f"multiplicity of {label} must be positive")
        object.__setattr__(self, "parts", tuple(sorted(l + (m,) for l, m in merged.items())))

    @property
    def dim(self) -> int:
        total = 0
        for part in self.parts:
            d = part[-1]
            for j in part[:-1:2]:
                d *= j + 1
            total += d
        return total

    def character(self) -> CharPoly:
        total = CharPoly(self.factors, {})
        for part in self.parts:
            total = total + part_character(part[:-1]) * part[-1]
        return total

    def __add__(self, other: "IrredDecomp") -> "IrredDecomp":
        if self.factors != other.factors:
            raise ValueError("cannot add decompositions with different factor counts")
        return IrredDecomp(self.factors, self.parts + other.parts)


def part_character(label: tuple) -> CharPoly:
    if len(label) == 2:
        return irreducible_char(label[0], label[1])
    return external(irreducible_char(label[0], label[1]), irreducible_char(label[2], label[3]))


def decompose(x: CharPoly) -> IrredDecomp:
    """Peel irreducibles off by lexicographically highest weight."""
    remaining = dict(x.terms)
    parts = []
    while remaining:
        top = max(remaining)
        m = remaining[top]
        if m < 0:
            raise NotEffective(f"negative multiplicity {m} at weight {top}")
        label = []
        for f in range(x.factors):
            hi, lo = top[2 * f], top[2 * f + 1]
            label += [hi - lo, lo]
        for w, c in part_character(tuple(label)).terms.items():
            left = remaining.get(w, 0) - c * m
            if left:
                remaining[w] = left
            else:
                remaining.pop(w, None)
        parts.append(tuple(label) + (m,))
    return IrredDecomp(x.factors, tuple(parts))


def decomp_of(parts: Iterable[tuple], factors: int = 1) -> IrredDecomp:
    return IrredDecomp(factors, tuple(parts))
