"""Generalized complete intersections: closed-form p and σ, classification,
Fitting minors of the symbol matrix, and the binomial identity behind the
finite-type count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, prod
from typing import Mapping, Sequence

from .jetspace import MultiIndex
from .qlinalg import as_scalar
from .symbolic import SymbolicSystem, order_profile


class ConditionViolated(ValueError):
    """The counts do not satisfy m ≤ r < n + m."""


def elementary_symmetric(j: int, values: Sequence[int | Fraction]) -> int | Fraction:
    """e_j(values); e_0 = 1."""
    if not 0 <= j <= len(values):
        raise ValueError(f"need 0 <= j <= {len(values)}")
    # e_j via the recurrence over prefixes
    e = [1] + [0] * j
    for v in values:
        for t in range(j, 0, -1):
            e[t] += e[t - 1] * v
    return e[j]


@dataclass(frozen=True)
class GciProfile:
    n: int
    m: int
    orders: tuple[int, ...]
    d: int = 1

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(k) for k in self.orders))
        if self.n < 1 or self.m < 1:
            raise ValueError("need n >= 1 and m >= 1")
        if any(k < 1 for k in self.orders):
            raise ValueError("orders must be positive")
        if self.d < 1:
            raise ValueError("fiber dimension d must be >= 1")

    @property
    def r(self) -> int:
        return len(self.orders)

    def check(self) -> None:
        if not self.m <= self.r < self.n + self.m:
            raise ConditionViolated(f"need m <= r < n + m, got m={self.m}, r={self.r}, n={self.n}")


def gci_dimension(profile: GciProfile) -> int:
    """Functional dimension m + n − r − 1."""
    profile.check()
    return profile.m + profile.n - profile.r - 1


def gci_rank(profile: GciProfile) -> int:
    """Functional rank d · e_{r−m+1}(orders)."""
    profile.check()
    return profile.d * elementary_symmetric(profile.r - profile.m + 1, profile.orders)


@dataclass(frozen=True)
class GciClassification:
    is_gci: bool
    r: int
    m: int
    n: int
    orders: tuple[int, ...]
    count_condition: bool
    codim_condition: bool
    char_codim: int
    fiber_condition: str = "assumed (dim K_x = 1 is not verified)"

    def profile(self, d: int = 1) -> GciProfile:
        return GciProfile(self.n, self.m, self.orders, d)

    def as_dict(self) -> dict:
        return {
            "is_gci": self.is_gci,
            "r": self.r,
            "orders": list(self.orders),
            "conditions": {
                "m_le_r_lt_n_plus_m": self.count_condition,
                "char_codim_eq_r_minus_m_plus_1": self.codim_condition,
                "fiber_dim_one": self.fiber_condition,
            },
            "char_codim": self.char_codim,
        }


def classify_gci(sys: SymbolicSystem, hilbert_p: int, up_to: int | None = None) -> GciClassification:
    """Test m ≤ r < n+m and n − p = r − m + 1, with r = codim(g).

    ``up_to`` bounds the order search and defaults to the largest equation order.
    """
    up_to = up_to if up_to is not None else max(sys.max_order, 1)
    prof = order_profile(sys, up_to)
    orders = tuple(r for r, mult in prof.orders for _ in range(mult))
    r, m, n = prof.codim, sys.m, sys.n
    count_ok = m <= r < n + m
    char_codim = n - hilbert_p
    codim_ok = char_codim == r - m + 1
    return GciClassification(count_ok and codim_ok, r, m, n, orders, count_ok, codim_ok, char_codim)


# ---------------------------------------------------------------------------
# symbol matrices and their maximal minors

Poly = dict[MultiIndex, Fraction]


def _pmul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, Fraction(0)) + ca * cb
    return {e: c for e, c in out.items() if c}


def _padd(a: Poly, b: Poly, sign: int = 1) -> Poly:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, Fraction(0)) + sign * c
    return {e: c for e, c in out.items() if c}


def canonical_terms(p: Poly) -> tuple[tuple[MultiIndex, Fraction], ...]:
    """Terms sorted by degree, then graded-lex (larger leading exponents first)."""
    return tuple(sorted(p.items(), key=lambda t: (sum(t[0]), tuple(-x for x in t[0]))))


@dataclass(frozen=True)
class PolySymbolMatrix:
    """m × r matrix of homogeneous symbols; column j has degree degrees[j]."""

    n: int
    entries: tuple[tuple[Mapping[MultiIndex, Fraction], ...], ...]
    degrees: tuple[int, ...]

    def __post_init__(self):
        ents = tuple(tuple({tuple(e): as_scalar(c) for e, c in dict(p).items() if as_scalar(c)} for p in row)
                     for row in self.entries)
        object.__setattr__(self, "entries", ents)
        object.__setattr__(self, "degrees", tuple(self.degrees))
        for row in ents:
            if len(row) != len(self.degrees):
                raise ValueError("every row needs one entry per column")
            for j, p in enumerate(row):
                for e in p:
                    if len(e) != self.n:
                        raise ValueError(f"exponent {e} has wrong length")
                    if sum(e) != self.degrees[j]:
                        raise ValueError(f"column {j} is not homogeneous of degree {self.degrees[j]}")

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def r(self) -> int:
        return len(self.degrees)

    @classmethod
    def from_system(cls, sys: SymbolicSystem) -> PolySymbolMatrix:
        cols = []
        for eq in sys.equations:
            col = [dict() for _ in range(sys.m)]
            for (alpha, dep), c in eq.coefficients.items():
                col[dep][alpha] = c
            cols.append(col)
        rows = tuple(tuple(cols[j][i] for j in range(len(cols))) for i in range(sys.m))
        return cls(sys.n, rows, tuple(eq.order for eq in sys.equations))


def _det(mat: list[list[Poly]]) -> Poly:
    """Cofactor expansion along the first row."""
    k = len(mat)
    if k == 1:
        return dict(mat[0][0])
    out: Poly = {}
    for c in range(k):
        if not mat[0][c]:
            continue
        minor = [row[:c] + row[c + 1:] for row in mat[1:]]
        out = _padd(out, _pmul(mat[0][c], _det(minor)), -1 if c % 2 else 1)
    return out


@dataclass(frozen=True)
class Minor:
    columns: tuple[int, ...]
    degree: int
    terms: tuple[tuple[MultiIndex, Fraction], ...]


def fitting_minors(M: PolySymbolMatrix) -> list[Minor]:
    """All maximal (m × m) minors, one per choice of m columns, in lex column order."""
    if M.m > M.r:
        raise ValueError("need m <= r for maximal minors")
    out = []
    for cols in combinations(range(M.r), M.m):
        sub = [[dict(M.entries[i][c]) for c in cols] for i in range(M.m)]
        out.append(Minor(cols, sum(M.degrees[c] for c in cols), canonical_terms(_det(sub))))
    return out


# ---------------------------------------------------------------------------


def _binom(a: int, b: int) -> int:
    if b < 0 or a < b:
        # a < 0 is never reached for the arguments used below
        return 0
    return comb(a, b)


def lemma_sides(n: int, m: int, k: int) -> tuple[int, int]:
    """Both sides of the alternating binomial identity for r = n + m − 1 equations of order k."""
    if n < 1 or m < 1 or k < 1:
        raise ValueError("need n, m, k >= 1")
    lhs = m * _binom(n + k * (n + m - 1), n) - (n + m - 1) * _binom(n + k * (n + m - 2), n)
    for j in range(1, n):
        lhs += (-1) ** (j - 1) * _binom(j + m - 2, m - 1) * _binom(n + m - 1, j + m) * _binom((k + 1) * n - k * (1 + j), n)
    rhs = _binom(n + m - 1, n) * k ** n
    return lhs, rhs


def lemma_check(n: int, m: int, k: int) -> bool:
    lhs, rhs = lemma_sides(n, m, k)
    return lhs == rhs
