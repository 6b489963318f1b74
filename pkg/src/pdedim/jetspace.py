"""Monomial and wedge bases of S^k T* ⊗ N ⊗ Λ^j T*.

Monomials of degree k in n variables are exponent tuples, listed in graded
lexicographic order: within a degree, larger leading exponents come first,
so for n=2, k=2 the order is x0^2, x0*x1, x1^2.

Coordinates of S^k T* ⊗ N ⊗ Λ^j T* are linearized with the dependent index
varying slowest, then the monomial, then the wedge subset::

    index = (dep * dim_sym(n, k) + mono_index) * binom(n, j) + wedge_index

This order is part of the report format.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

MultiIndex = tuple[int, ...]
Wedge = tuple[int, ...]


def dim_sym(n: int, alpha: int) -> int:
    """dim S^alpha of an n-dimensional space; zero for negative alpha."""
    if alpha < 0:
        return 0
    return comb(alpha + n - 1, alpha)


def dim_jet_fiber(n: int, beta: int) -> int:
    """dim of the fiber of vertical beta-jets, binom(beta + n, n)."""
    if beta < 0:
        return 0
    return comb(beta + n, n)


@lru_cache(maxsize=None)
def _monomials(n: int, k: int) -> tuple[MultiIndex, ...]:
    if n == 1:
        return ((k,),)
    out = []
    for first in range(k, -1, -1):
        out.extend((first,) + rest for rest in _monomials(n - 1, k - first))
    return tuple(out)


def enumerate_monomials(n: int, k: int) -> list[MultiIndex]:
    """All exponent vectors of degree ``k`` in ``n`` variables, graded-lex."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    return list(_monomials(n, k))


@lru_cache(maxsize=None)
def monomial_index(n: int, k: int) -> dict[MultiIndex, int]:
    return {a: i for i, a in enumerate(_monomials(n, k))}


def enumerate_wedge(n: int, j: int) -> list[Wedge]:
    """Strictly increasing j-subsets of range(n), lexicographic."""
    if not 0 <= j <= n:
        raise ValueError("need 0 <= j <= n")
    return list(combinations(range(n), j))


@lru_cache(maxsize=None)
def wedge_index(n: int, j: int) -> dict[Wedge, int]:
    return {w: i for i, w in enumerate(combinations(range(n), j))}


def wedge_insert(a: int, w: Wedge) -> tuple[int, Wedge] | None:
    """``e_a ∧ e_w`` as (sign, sorted subset), or None when a ∈ w."""
    if a in w:
        return None
    smaller = sum(1 for b in w if b < a)
    merged = tuple(sorted(w + (a,)))
    return (-1 if smaller % 2 else 1), merged


@dataclass(frozen=True)
class BasisIndex:
    mono: MultiIndex
    dep: int
    wedge: Wedge = ()

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.wedge, self.wedge[1:])):
            raise ValueError("wedge indices must be strictly increasing")

    @property
    def degree(self) -> int:
        return sum(self.mono)


@dataclass(frozen=True)
class TensorSpace:
    """The space S^k T* ⊗ N ⊗ Λ^j T* with n = dim T, m = dim N."""

    n: int
    m: int
    k: int
    j: int = 0

    @property
    def n_mono(self) -> int:
        return dim_sym(self.n, self.k)

    @property
    def n_wedge(self) -> int:
        return comb(self.n, self.j)

    @property
    def dim(self) -> int:
        return self.m * self.n_mono * self.n_wedge

    def index(self, b: BasisIndex) -> int:
        mi = monomial_index(self.n, self.k)[b.mono]
        wi = wedge_index(self.n, self.j)[b.wedge]
        return (b.dep * self.n_mono + mi) * self.n_wedge + wi

    def basis(self) -> list[BasisIndex]:
        if self.k < 0:
            return []
        monos = _monomials(self.n, self.k)
        wedges = enumerate_wedge(self.n, self.j)
        return [BasisIndex(a, d, w) for d in range(self.m) for a in monos for w in wedges]


def sym_index(n: int, m: int, k: int, mono: MultiIndex, dep: int) -> int:
    """Linear index of ``x^mono ⊗ e_dep`` in S^k T* ⊗ N."""
    return dep * dim_sym(n, k) + monomial_index(n, k)[mono]
