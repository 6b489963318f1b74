"""Slow pure-Fraction reference computations used as test oracles."""

from fractions import Fraction

from pdedim.qlinalg import rref_reference
from pdedim.symbolic import ambient_dim, directional_delta


def kernel_rows(rows, ncols):
    """Kernel of the matrix with the given rows, as canonical RREF rows."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, piv = rref_reference(rows)
    free = [c for c in range(ncols) if c not in piv]
    vecs = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in zip(red, piv):
            v[p] = -r[f]
        vecs.append(v)
    return rref_reference(vecs)[0] if vecs else []


def prolong_oracle(basis_rows, n, m, k):
    """{p ∈ S^{k+1} ⊗ N : δ_{e_a} p ∈ span(basis_rows) for every a}, canonical rows."""
    amb, amb_next = ambient_dim(n, m, k), ambient_dim(n, m, k + 1)
    ann = kernel_rows([list(r) for r in basis_rows], amb)
    units = [[Fraction(int(i == j)) for j in range(amb_next)] for i in range(amb_next)]
    constraints = []
    for a in range(n):
        e = [int(i == a) for i in range(n)]
        images = [directional_delta(u, e, n, m, k + 1) for u in units]
        for w in ann:
            constraints.append([sum(wi * yi for wi, yi in zip(w, img)) for img in images])
    return kernel_rows(constraints, amb_next)
