"""Spencer δ-complexes of a symbolic system and their cohomology dimensions.

δ: g_i ⊗ Λ^j T* → g_{i-1} ⊗ Λ^{j+1} T* sends ω ⊗ α to Σ_a δ_{e_a}ω ⊗ (e_a ∧ α),
where e_a ∧ α is re-sorted with sign (−1)^{#(elements of α below a)}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterator

import flint

from .jetspace import enumerate_wedge, wedge_index, wedge_insert
from .qlinalg import ExactMatrix, _integral
from .symbolic import SymbolicSystem, _delta_along, ambient_dim, delta_images


class IncompleteTable(ValueError):
    """The table does not certify that all cohomology has been seen."""


@dataclass(frozen=True)
class SpencerTable:
    n: int
    entries: dict[tuple[int, int], int]
    i_max: int
    vanished_beyond: int | None = None

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= j <= self.n) or i < 0:
            return 0
        if i > self.i_max:
            raise KeyError(f"h^{{{i},{j}}} lies outside the computed window (i_max={self.i_max})")
        return self.entries[(i, j)]

    def row(self, i: int) -> list[int]:
        return [self[i, j] for j in range(self.n + 1)]

    def grid(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.i_max + 1)]

    def nonzero(self) -> dict[tuple[int, int], int]:
        return {k: v for k, v in sorted(self.entries.items()) if v}

    def items(self) -> Iterator[tuple[tuple[int, int], int]]:
        return iter(sorted(self.entries.items()))

    @property
    def complete(self) -> bool:
        return self.vanished_beyond is not None

    def require_complete(self) -> None:
        if self.vanished_beyond is None:
            raise IncompleteTable(
                f"Spencer cohomology does not vanish at the top of the window (i_max={self.i_max}); "
                "raise the degree window"
            )


def _assemble(blocks: dict, row_sizes: list[int], col_sizes: list[int], cls):
    """Dense block matrix (of FLINT type ``cls``) from a sparse grid of blocks."""
    ncols = sum(col_sizes)
    nrows = sum(row_sizes)
    if nrows == 0 or ncols == 0:
        return cls(nrows, ncols)
    flat: list = []
    cached = {key: (b.entries(), b.ncols()) for key, b in blocks.items()}
    for bi, rs in enumerate(row_sizes):
        for r in range(rs):
            for bj, cs in enumerate(col_sizes):
                got = cached.get((bi, bj))
                if got is None:
                    flat.extend([0] * cs)
                else:
                    ent, w = got
                    flat.extend(ent[r * w:(r + 1) * w])
    return cls(nrows, ncols, flat)


def _delta_blocks(sys: SymbolicSystem, i: int, j: int, integral: bool):
    """Transpose of δ on g_i ⊗ Λ^j in block form.

    Rows are grouped by source wedge (then basis vector of g_i), columns by
    target wedge (then S^{i-1} ⊗ N coordinate).  With ``integral`` the basis
    is rescaled to integers, which keeps the rank and speeds FLINT up.
    """
    n, m = sys.n, sys.m
    B = sys.component(i).basis.flint
    if integral:
        B = _integral(B)
    d = B.nrows()
    amb_prev = ambient_dim(n, m, i - 1)
    src = enumerate_wedge(n, j)
    tgt_idx = wedge_index(n, j + 1)
    img = delta_images(B, n, m, i)
    neg: dict = {}
    blocks = {}
    for si, w in enumerate(src):
        for a in range(n):
            ins = wedge_insert(a, w)
            if ins is None:
                continue
            sign, w2 = ins
            if sign < 0 and a not in neg:
                neg[a] = -img[a]
            blocks[(si, tgt_idx[w2])] = img[a] if sign > 0 else neg[a]
    return blocks, [d] * len(src), [amb_prev] * comb(n, j + 1), type(B)


def delta_matrix(sys: SymbolicSystem, i: int, j: int) -> ExactMatrix:
    """Matrix of δ: g_i ⊗ Λ^j → S^{i-1}T* ⊗ N ⊗ Λ^{j+1} (column action).

    Columns are indexed by (basis vector of g_i, wedge) with the wedge varying
    fastest; rows use the ambient linearization of :mod:`pdedim.jetspace`.
    For i = 0 or j = n the target is zero and a 0-row matrix is returned.
    """
    n, m = sys.n, sys.m
    if not 0 <= j <= n or i < 0:
        raise ValueError("need i >= 0 and 0 <= j <= n")
    d = sys.component(i).dim
    ncols = d * comb(n, j)
    if i == 0 or j == n:
        return ExactMatrix(0, ncols)
    amb_prev = ambient_dim(n, m, i - 1)
    W, C = comb(n, j + 1), comb(n, j)
    if ncols == 0:
        return ExactMatrix(amb_prev * W, 0)
    M = _assemble(*_delta_blocks(sys, i, j, integral=False))
    ents = M.entries()
    width = M.ncols()
    out = [0] * (amb_prev * W * ncols)
    # block layout: row = w*d + b, col = w2*amb_prev + s; canonical: row = s*W + w2, col = b*C + w
    for w in range(C):
        for b in range(d):
            base = (w * d + b) * width
            for w2 in range(W):
                for s in range(amb_prev):
                    x = ents[base + w2 * amb_prev + s]
                    if x != 0:
                        out[(s * W + w2) * ncols + b * C + w] = x
    return ExactMatrix._wrap(flint.fmpq_mat(amb_prev * W, ncols, out))


def ambient_delta_matrix(n: int, m: int, i: int, j: int) -> ExactMatrix:
    """δ on the whole of S^i T* ⊗ N ⊗ Λ^j (column action, canonical coordinates)."""
    W, C = comb(n, j + 1) if j < n else 0, comb(n, j)
    amb, amb_prev = ambient_dim(n, m, i), ambient_dim(n, m, i - 1)
    if i == 0 or j == n:
        return ExactMatrix(0, amb * C)
    tgt_idx = wedge_index(n, j + 1)
    src = enumerate_wedge(n, j)
    D = [_delta_along(n, m, i, a) for a in range(n)]
    flat = [0] * (amb_prev * W * amb * C)
    for a in range(n):
        Da = D[a]
        for si, w in enumerate(src):
            ins = wedge_insert(a, w)
            if ins is None:
                continue
            sign, w2 = ins
            ti = tgt_idx[w2]
            for s in range(amb):
                for t in range(amb_prev):
                    x = Da[s, t]
                    if x != 0:
                        flat[(t * W + ti) * (amb * C) + s * C + si] = sign * int(x)
    return ExactMatrix(amb_prev * W, amb * C, flat)


class SpencerComplex:
    """Ranks of δ on g_i ⊗ Λ^j, cached, for one system.

    With ``shortcuts`` the ranks at j = 0 and j = 1 are read off from
    dimensions: δ is injective on S^i for i ≥ 1, and the kernel of δ on
    g_i ⊗ T* is the gradient image of g_i^(1).
    """

    def __init__(self, sys: SymbolicSystem, shortcuts: bool = True):
        self.sys = sys
        self.shortcuts = shortcuts
        self._ranks: dict[tuple[int, int], int] = {}

    def rank_out(self, i: int, j: int) -> int:
        n = self.sys.n
        if i <= 0 or j < 0 or j >= n:
            return 0
        key = (i, j)
        if key not in self._ranks:
            self._ranks[key] = self._compute_rank(i, j)
        return self._ranks[key]

    def _compute_rank(self, i: int, j: int) -> int:
        sys = self.sys
        g = sys.component(i)
        if g.dim == 0:
            return 0
        if self.shortcuts and j == 0:
            return g.dim
        if self.shortcuts and j == 1:
            return sys.n * g.dim - sys.prolonged(i + 1).dim
        M = _assemble(*_delta_blocks(sys, i, j, integral=True))
        if M.nrows() == 0 or M.ncols() == 0:
            return 0
        return M.rank()

    def cohomology_dim(self, i: int, j: int) -> int:
        n = self.sys.n
        if i < 0 or not 0 <= j <= n:
            return 0
        size = self.sys.component(i).dim * comb(n, j)
        incoming = self.rank_out(i + 1, j - 1) if j >= 1 else 0
        return size - self.rank_out(i, j) - incoming


def cohomology_dim(sys: SymbolicSystem, i: int, j: int) -> int:
    """h^{i,j} = dim H^{i,j}(g)."""
    return SpencerComplex(sys).cohomology_dim(i, j)


def spencer_table(sys: SymbolicSystem, i_max: int, *, rows_from: int = 0,
                  complex_: SpencerComplex | None = None) -> SpencerTable:
    """All h^{i,j} with rows_from ≤ i ≤ i_max, 0 ≤ j ≤ n.

    ``vanished_beyond`` is the first row of the trailing block of zero rows,
    or None when row i_max is nonzero.  Rows below ``rows_from`` are
    recorded as absent by leaving them out of ``entries``.
    """
    if i_max < 0:
        raise ValueError("i_max must be >= 0")
    cx = complex_ or SpencerComplex(sys)
    sys.component(i_max + 1)
    entries = {}
    for i in range(rows_from, i_max + 1):
        for j in range(sys.n + 1):
            entries[(i, j)] = cx.cohomology_dim(i, j)
    vanished = None
    for i in range(i_max, rows_from - 1, -1):
        if any(entries[(i, j)] for j in range(sys.n + 1)):
            break
        vanished = i
    return SpencerTable(sys.n, entries, i_max, vanished)


def euler_characteristic_holds(sys: SymbolicSystem, table: SpencerTable) -> bool:
    """Alternating sums of every order-k complex equal those of its cohomology."""
    n = sys.n
    for k in range(table.i_max + 1):
        lhs = sum((-1) ** j * sys.component(k - j).dim * comb(n, j) for j in range(n + 1) if k - j >= 0)
        rhs = sum((-1) ** j * table[k - j, j] for j in range(n + 1) if k - j >= 0)
        if lhs != rhs:
            return False
    return True
