"""Cartan characters along generic flags, Cartan's involutivity test, genre and
integer, and the Spencer-vanishing involutivity criterion.

Characters come from the kernel chain g_{k,j} = {p ∈ g_k : δ_{v_1}p = ... =
δ_{v_j}p = 0} of a flag v_1, ..., v_n: s_j = dim g_{k,j−1} − dim g_{k,j}.
Only the genre and the integer are flag independent; the intermediate s_j
are reported relative to the flag that produced them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import flint

from .hilbert import HilbertProfile, poly_eval
from .qlinalg import Subspace, _integral
from .spencer import SpencerComplex, spencer_table
from .symbolic import SymbolicSystem, delta_images

MAX_FLAG_ATTEMPTS = 100


class GenericityFailure(RuntimeError):
    """Cartan's inequality failed, so a non-generic flag went undetected."""


class NoInvolutiveOrder(RuntimeError):
    """No component inside the window passed Cartan's test."""


@dataclass(frozen=True)
class CartanCharacters:
    order: int
    s: tuple[int, ...]
    flag_seed: int
    samples: int
    involutive: bool
    dim_next: int
    genre: int
    integer_sigma: int

    @property
    def weighted_sum(self) -> int:
        return sum(j * sj for j, sj in enumerate(self.s, start=1))

    def as_dict(self) -> dict:
        return {
            "order": self.order,
            "characters": list(self.s),
            "flag_seed": self.flag_seed,
            "samples": self.samples,
            "involutive": self.involutive,
            "dim_prolongation": self.dim_next,
            "weighted_sum": self.weighted_sum,
            "genre": self.genre,
            "integer": self.integer_sigma,
        }


def _det_nonzero(rows: list[list[int]]) -> bool:
    n = len(rows)
    return flint.fmpz_mat(n, n, [x for r in rows for x in r]).det() != 0


def generic_flag(seed: int, n: int, bound: int = 10) -> list[list[int]]:
    """n independent integer vectors with entries uniform in [−bound, bound].

    Deterministic in ``seed``; after 100 dependent draws the bound doubles.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(seed)
    attempts = 0
    while True:
        rows = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
        if _det_nonzero(rows):
            return rows
        attempts += 1
        if attempts >= MAX_FLAG_ATTEMPTS:
            attempts = 0
            bound *= 2


def _kernel_chain(g: Subspace, n: int, m: int, k: int, flag: list[list[int]]) -> list[int]:
    """dim g_{k,j} for j = 0..n."""
    B = _integral(g.basis.flint)
    d = B.nrows()
    if d == 0:
        return [0] * (n + 1)
    imgs = delta_images(B, n, m, k)
    # δ_v = Σ_a v_a δ_{e_a}
    dirs = []
    for v in flag:
        acc = None
        for a, c in enumerate(v):
            if c:
                term = imgs[a] * c
                acc = term if acc is None else acc + term
        dirs.append(acc if acc is not None else flint.fmpz_mat(d, imgs[0].ncols()))
    out = [d]
    for j in range(1, n + 1):
        cols = dirs[:j]
        w = cols[0].ncols()
        flat: list = []
        ents = [c.entries() for c in cols]
        for r in range(d):
            for e in ents:
                flat.extend(e[r * w:(r + 1) * w])
        M = flint.fmpz_mat(d, w * j, flat)
        out.append(d - M.rank())
    return out


def characters(g_k: Subspace, n: int, m: int, k: int, flag: list[list[int]]) -> list[int]:
    """s_1..s_n of g_k ⊂ S^k T* ⊗ N along ``flag``."""
    if k < 1:
        raise ValueError("characters are defined for k >= 1")
    dims = _kernel_chain(g_k, n, m, k, flag)
    return [dims[j - 1] - dims[j] for j in range(1, n + 1)]


def _from_dims(dims: list[int]) -> tuple[int, ...]:
    return tuple(dims[j - 1] - dims[j] for j in range(1, len(dims)))


def _genre(s: tuple[int, ...]) -> tuple[int, int]:
    p = max((j for j, sj in enumerate(s, start=1) if sj), default=0)
    return p, (s[p - 1] if p else 0)


def cartan_test(sys: SymbolicSystem, k: int, seed: int = 0, samples: int = 3) -> CartanCharacters:
    """Characters of g_k (minimum kernel dims over ``samples`` flags) and the test
    dim g_k^(1) = Σ j·s_j.  Cartan's inequality is asserted on the way.

    The prolongation g_k^(1) is what g^{|k>} has in degree k+1; it equals
    g_{k+1} unless an equation of order k+1 or higher cuts further.
    """
    if k < 1:
        raise ValueError("cartan_test needs k >= 1")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    n, m = sys.n, sys.m
    g = sys.component(k)
    best: list[int] | None = None
    for t in range(samples):
        flag = generic_flag(seed * 1_000_003 + t, n)
        dims = _kernel_chain(g, n, m, k, flag)
        best = dims if best is None else [min(x, y) for x, y in zip(best, dims)]
    assert best is not None
    s = _from_dims(best)
    dim_next = sys.prolonged(k + 1).dim
    weighted = sum(j * sj for j, sj in enumerate(s, start=1))
    if dim_next > weighted:
        raise GenericityFailure(
            f"Cartan's inequality fails at order {k}: dim g_{k}^(1) = {dim_next} > Σ j·s_j = {weighted}; "
            "try another --seed or more --flag-samples"
        )
    p, sig = _genre(s)
    return CartanCharacters(k, s, seed, samples, dim_next == weighted, dim_next, p, sig)


@dataclass(frozen=True)
class GenreResult:
    p: int
    sigma: int
    order: int
    characters: CartanCharacters | None

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "sigma": self.sigma,
            "order": self.order,
            "characters": self.characters.as_dict() if self.characters else None,
        }


def genre_and_integer(sys: SymbolicSystem, profile: HilbertProfile, seed: int = 0,
                      samples: int = 3, search_limit: int | None = None) -> GenreResult:
    """Genre and integer of the first involutive component at or above the
    stabilization order (and at or above every equation order).

    For finite type (all characters zero) σ is the constant Hilbert polynomial.
    """
    k0 = max(1, profile.stabilized_from, sys.max_order)
    top = search_limit if search_limit is not None else len(profile.values) - 2
    top = max(top, k0)
    last = None
    for k in range(k0, top + 1):
        last = cartan_test(sys, k, seed, samples)
        if last.involutive:
            break
    assert last is not None
    if not last.involutive:
        raise NoInvolutiveOrder(f"no involutive order found in [{k0}, {top}]; raise --max-degree")
    if last.genre == 0:
        return GenreResult(0, int(poly_eval(profile.polynomial, 0)), last.order, last)
    return GenreResult(last.genre, last.integer_sigma, last.order, last)


def involutivity_via_spencer(sys: SymbolicSystem, k: int, window: int,
                             complex_: SpencerComplex | None = None) -> bool:
    """True iff the Spencer cohomology of g^{|k>} vanishes on rows k..window.

    When no equation has order above k, g^{|k>} agrees with g from degree k
    on, so the table of g itself is used (and ``complex_`` may share its ranks).
    """
    if window < k + sys.n:
        raise ValueError(f"window must be >= k + n = {k + sys.n}")
    if k >= sys.max_order:
        aux, cx = sys, complex_
    else:
        aux, cx = sys.generated_by(k), None
    table = spencer_table(aux, window, rows_from=k, complex_=cx)
    return not any(table.entries.values())
