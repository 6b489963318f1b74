"""Symbolic systems g = {g_k}, g_k ⊂ S^k T* ⊗ N, and their prolongations.

An element of S^k T* ⊗ N is a row vector in the monomial coordinates of
:mod:`pdedim.jetspace`.  A scalar equation of order r with coefficients
c_{α,j} (the symbol Σ c_{α,j} ξ^α on the j-th unknown) cuts out the
hyperplane Σ c_{α,j} α! p_{α,j} = 0: the factor α! comes from pairing ξ^α
with x^β by differentiation, so that (ξ·x)^r lies in the kernel exactly when
ξ is characteristic.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Iterable, Mapping, Sequence

import flint

from .jetspace import MultiIndex, dim_sym, enumerate_monomials, monomial_index
from .qlinalg import (
    DimensionMismatch,
    ExactMatrix,
    ScalarLike,
    Subspace,
    _integral,
    as_scalar,
    kernel_of_integer_rows,
    intersect,
    kernel_basis,
    vstack,
)

DEFAULT_LIMIT_BASIS = 200_000


class InvalidSystem(ValueError):
    """The supplied equations do not define a symbolic system."""


class ResourceLimitExceeded(RuntimeError):
    """An ambient space is larger than the configured basis limit."""


def _mono_factorial(alpha: MultiIndex) -> int:
    return prod(factorial(a) for a in alpha)


@dataclass(frozen=True)
class EquationSymbol:
    """Principal symbol of one scalar equation of a fixed order."""

    order: int
    coefficients: Mapping[tuple[MultiIndex, int], Fraction]

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 0:
            raise InvalidSystem("equation order must be a non-negative integer")
        clean: dict[tuple[MultiIndex, int], Fraction] = {}
        for (alpha, dep), c in dict(self.coefficients).items():
            alpha = tuple(int(a) for a in alpha)
            if any(a < 0 for a in alpha):
                raise InvalidSystem(f"negative exponent in {alpha}")
            if sum(alpha) != self.order:
                raise InvalidSystem(
                    f"term {alpha} has degree {sum(alpha)} in an equation of order {self.order}; "
                    "supply the principal symbol per declared order (lower-order terms do not belong to it)"
                )
            c = as_scalar(c)
            key = (alpha, int(dep))
            clean[key] = clean.get(key, Fraction(0)) + c
        clean = {k: v for k, v in clean.items() if v != 0}
        if not clean:
            raise InvalidSystem("equation has no nonzero coefficient")
        ordered = dict(sorted(clean.items(), key=lambda kv: _term_key(kv[0])))
        object.__setattr__(self, "coefficients", ordered)

    def terms(self) -> list[tuple[MultiIndex, int, Fraction]]:
        return [(a, d, c) for (a, d), c in self.coefficients.items()]

    def validate_for(self, n: int, m: int) -> None:
        if self.order == 0:
            raise InvalidSystem("order-0 equations are not allowed (g_0 = N is fixed)")
        for alpha, dep in self.coefficients:
            if len(alpha) != n:
                raise InvalidSystem(f"exponent vector {alpha} has length {len(alpha)}, expected {n}")
            if not 0 <= dep < m:
                raise InvalidSystem(f"dependent index {dep} outside [0, {m})")

    def constraint_row(self, n: int, m: int) -> list[Fraction]:
        """The linear functional on S^order T* ⊗ N this equation imposes."""
        ds = dim_sym(n, self.order)
        idx = monomial_index(n, self.order)
        row = [Fraction(0)] * (ds * m)
        for (alpha, dep), c in self.coefficients.items():
            row[dep * ds + idx[alpha]] = c * _mono_factorial(alpha)
        return row

    @classmethod
    def from_constraint(cls, order: int, row: Sequence[ScalarLike], n: int, m: int) -> EquationSymbol:
        """Inverse of :meth:`constraint_row`."""
        monos = enumerate_monomials(n, order)
        ds = len(monos)
        coeffs = {}
        for dep in range(m):
            for i, alpha in enumerate(monos):
                v = as_scalar(row[dep * ds + i])
                if v:
                    coeffs[(alpha, dep)] = v / _mono_factorial(alpha)
        return cls(order, coeffs)


def _term_key(key: tuple[MultiIndex, int]):
    alpha, dep = key
    # graded-lex: descending exponent tuples within the degree
    return (sum(alpha), tuple(-a for a in alpha), dep)


# ---------------------------------------------------------------------------
# elementary maps on S^k T* ⊗ N (row-vector action)


def ambient_dim(n: int, m: int, k: int) -> int:
    return dim_sym(n, k) * m


@lru_cache(maxsize=256)
def _delta_along(n: int, m: int, k: int, a: int) -> flint.fmpz_mat:
    """δ_{e_a}: S^k ⊗ N → S^{k-1} ⊗ N as an (amb_k × amb_{k-1}) row-action matrix."""
    src = enumerate_monomials(n, k)
    ds, dt = len(src), dim_sym(n, k - 1)
    tidx = monomial_index(n, k - 1)
    flat = [0] * (ds * m * dt * m)
    for i, alpha in enumerate(src):
        if alpha[a] == 0:
            continue
        beta = alpha[:a] + (alpha[a] - 1,) + alpha[a + 1:]
        j = tidx[beta]
        for dep in range(m):
            flat[(dep * ds + i) * (dt * m) + dep * dt + j] = alpha[a]
    return flint.fmpz_mat(ds * m, dt * m, flat)


@lru_cache(maxsize=256)
def _multiply_by(n: int, m: int, k: int, a: int) -> flint.fmpz_mat:
    """Multiplication by x_a: S^k ⊗ N → S^{k+1} ⊗ N, row action."""
    src = enumerate_monomials(n, k)
    ds, dt = len(src), dim_sym(n, k + 1)
    tidx = monomial_index(n, k + 1)
    flat = [0] * (ds * m * dt * m)
    for i, alpha in enumerate(src):
        beta = alpha[:a] + (alpha[a] + 1,) + alpha[a + 1:]
        j = tidx[beta]
        for dep in range(m):
            flat[(dep * ds + i) * (dt * m) + dep * dt + j] = 1
    return flint.fmpz_mat(ds * m, dt * m, flat)


@lru_cache(maxsize=256)
def _delta_targets(n: int, m: int, k: int, a: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """For each column t of S^{k-1} ⊗ N: source column t + e_a in S^k ⊗ N and factor t_a + 1."""
    tgt = enumerate_monomials(n, k - 1)
    sidx = monomial_index(n, k)
    ds, dt = dim_sym(n, k), len(tgt)
    src, fac = [], []
    for dep in range(m):
        for beta in tgt:
            src.append(dep * ds + sidx[beta[:a] + (beta[a] + 1,) + beta[a + 1:]])
            fac.append(beta[a] + 1)
    return tuple(src), tuple(fac)


@lru_cache(maxsize=256)
def _delta_sources(n: int, m: int, k: int, a: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """For each column s of S^k ⊗ N: target column s − e_a (or −1) and factor s_a."""
    src = enumerate_monomials(n, k)
    tidx = monomial_index(n, k - 1)
    dt = dim_sym(n, k - 1)
    tgt, fac = [], []
    for dep in range(m):
        for alpha in src:
            if alpha[a]:
                tgt.append(dep * dt + tidx[alpha[:a] + (alpha[a] - 1,) + alpha[a + 1:]])
                fac.append(alpha[a])
            else:
                tgt.append(-1)
                fac.append(0)
    return tuple(tgt), tuple(fac)


def _gather(mat, idx: Sequence[int], fac: Sequence[int]) -> list:
    """Flat entries of the matrix whose column c is fac[c] * mat[:, idx[c]] (zero for idx −1)."""
    ents = mat.entries()
    w = mat.ncols()
    out: list = []
    pairs = list(zip(idx, fac))
    for r in range(mat.nrows()):
        row = ents[r * w:(r + 1) * w]
        out.extend([0 if c < 0 else (row[c] if f == 1 else row[c] * f) for c, f in pairs])
    return out


def delta_images(B, n: int, m: int, k: int) -> list:
    """[B·δ_{e_a}] for a = 0..n−1, rows of B in S^k ⊗ N, same FLINT type as B."""
    cls = type(B)
    out = []
    for a in range(n):
        idx, fac = _delta_targets(n, m, k, a)
        out.append(cls(B.nrows(), len(idx), _gather(B, idx, fac)) if B.nrows() else cls(0, len(idx)))
    return out


def delta_along_matrix(n: int, m: int, k: int, a: int) -> ExactMatrix:
    if k < 1:
        raise ValueError("δ is defined on degree >= 1")
    return ExactMatrix._wrap(_delta_along(n, m, k, a))


def directional_delta(p: Sequence[ScalarLike], v: Sequence[ScalarLike], n: int, m: int, k: int) -> list[Fraction]:
    """δ_v p for p ∈ S^k T* ⊗ N (a derivative along v)."""
    if k < 1:
        raise ValueError("directional derivative of a degree-0 element")
    if len(p) != ambient_dim(n, m, k) or len(v) != n:
        raise DimensionMismatch("argument lengths do not match (n, m, k)")
    monos = enumerate_monomials(n, k)
    ds = len(monos)
    dt = dim_sym(n, k - 1)
    tidx = monomial_index(n, k - 1)
    out = [Fraction(0)] * (dt * m)
    vv = [as_scalar(x) for x in v]
    for dep in range(m):
        for i, alpha in enumerate(monos):
            c = as_scalar(p[dep * ds + i])
            if not c:
                continue
            for a in range(n):
                if alpha[a] and vv[a]:
                    beta = alpha[:a] + (alpha[a] - 1,) + alpha[a + 1:]
                    out[dep * dt + tidx[beta]] += c * vv[a] * alpha[a]
    return out


# ---------------------------------------------------------------------------
# prolongation


def _check_ambient(h: Subspace, n: int, m: int, k: int) -> None:
    if h.ambient_dim != ambient_dim(n, m, k):
        raise DimensionMismatch(
            f"subspace of dimension-{h.ambient_dim} space is not inside S^{k}T*⊗N (dim {ambient_dim(n, m, k)})"
        )


def _prolong_by_annihilator(h: Subspace, n: int, m: int, k: int) -> Subspace:
    ann = _integral(h.annihilator().flint)
    cols = ambient_dim(n, m, k + 1)
    flat: list = []
    for a in range(n):
        flat.extend(_gather(ann, *_delta_sources(n, m, k + 1, a)))
    return kernel_of_integer_rows(flint.fmpz_mat(n * ann.nrows(), cols, flat))


def _prolong_by_symmetry(h: Subspace, n: int, m: int, k: int) -> Subspace:
    """Solve for derivative tuples (q_1..q_n) in h with δ_b q_a = δ_a q_b.

    Any such tuple is the gradient of p = Σ x_a q_a / (k+1).
    """
    d = h.dim
    B = h.basis.flint
    amb_next = ambient_dim(n, m, k + 1)
    if k == 0:
        coeffs = flint.fmpq_mat(flint.fmpz_mat(n * d, n * d, [int(i == j) for i in range(n * d) for j in range(n * d)]))
    else:
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
        amb_prev = ambient_dim(n, m, k - 1)
        BD = delta_images(B, n, m, k)
        # rows of M indexed by (a, basis vector), columns by (pair, S^{k-1} ⊗ N coordinate)
        width = len(pairs) * amb_prev
        flat = [flint.fmpq(0)] * (n * d * width)
        for pi, (a, b) in enumerate(pairs):
            off = pi * amb_prev
            Db, Da = BD[b], BD[a]
            for i in range(d):
                ra = (a * d + i) * width + off
                rb = (b * d + i) * width + off
                for c in range(amb_prev):
                    x = Db[i, c]
                    if x != 0:
                        flat[ra + c] = x
                    y = Da[i, c]
                    if y != 0:
                        flat[rb + c] = -y
        M = ExactMatrix._wrap(flint.fmpq_mat(n * d, width, flat))
        coeffs = kernel_basis(M.transpose()).basis.flint
    nk = coeffs.nrows()
    if nk == 0:
        return Subspace.zero(amb_next)
    acc = flint.fmpq_mat(nk, amb_next)
    for a in range(n):
        block = flint.fmpq_mat(nk, d, [coeffs[r, a * d + i] for r in range(nk) for i in range(d)])
        acc += block * B * flint.fmpq_mat(_multiply_by(n, m, k, a))
    return Subspace.span(ExactMatrix._wrap(acc))


def prolong(h: Subspace, n: int, m: int, k: int, method: str = "auto") -> Subspace:
    """First prolongation h^(1) ⊂ S^{k+1} T* ⊗ N of h ⊂ S^k T* ⊗ N.

    ``method`` is ``"annihilator"`` (kernel of the stacked maps δ_{e_a} mod h),
    ``"symmetry"`` (solve for compatible gradients in h) or ``"auto"``, which
    picks the smaller linear system.  Both give the same canonical subspace.
    """
    _check_ambient(h, n, m, k)
    amb_next = ambient_dim(n, m, k + 1)
    if h.dim == 0:
        return Subspace.zero(amb_next)
    if h.is_full():
        return Subspace.full(amb_next)
    if method == "auto":
        amb = h.ambient_dim
        r1, c1 = n * (amb - h.dim), amb_next
        r2, c2 = comb(n, 2) * ambient_dim(n, m, k - 1) if k else 0, n * h.dim
        method = "annihilator" if r1 * c1 * min(r1, c1) <= r2 * c2 * min(r2, c2) else "symmetry"
    if method == "annihilator":
        return _prolong_by_annihilator(h, n, m, k)
    if method == "symmetry":
        return _prolong_by_symmetry(h, n, m, k)
    raise ValueError(f"unknown prolongation method {method!r}")


def prolong_by_intersection(h: Subspace, n: int, m: int, k: int) -> Subspace:
    """h^(1) as (T* ⊗ h) ∩ S^{k+1}T* ⊗ N inside T* ⊗ S^k T* ⊗ N.

    S^{k+1} is embedded by its gradient p ↦ (δ_{e_1}p, ..., δ_{e_n}p).
    Slow; kept as an independent route for checking :func:`prolong`.
    """
    _check_ambient(h, n, m, k)
    amb, amb_next = h.ambient_dim, ambient_dim(n, m, k + 1)
    d = h.dim
    B = h.basis.flint
    # T* ⊗ h: block-diagonal copies of the basis
    tflat = [flint.fmpq(0)] * (n * d * n * amb)
    for a in range(n):
        for i in range(d):
            row = (a * d + i) * (n * amb) + a * amb
            for c in range(amb):
                tflat[row + c] = B[i, c]
    Th = Subspace.span(ExactMatrix._wrap(flint.fmpq_mat(n * d, n * amb, tflat))) if d else Subspace.zero(n * amb)
    grad = [flint.fmpq_mat(_delta_along(n, m, k + 1, a)) for a in range(n)]
    G = flint.fmpq_mat(amb_next, n * amb, [grad[a][r, c] for r in range(amb_next) for a in range(n) for c in range(amb)])
    image = Subspace.span(ExactMatrix._wrap(G))
    both = intersect(Th, image)
    if both.dim == 0:
        return Subspace.zero(amb_next)
    X = both.basis.flint
    acc = flint.fmpq_mat(both.dim, amb_next)
    for a in range(n):
        block = flint.fmpq_mat(both.dim, amb, [X[r, a * amb + c] for r in range(both.dim) for c in range(amb)])
        acc += block * flint.fmpq_mat(_multiply_by(n, m, k, a))
    return Subspace.span(ExactMatrix._wrap(acc))


# ---------------------------------------------------------------------------
# systems


@dataclass(frozen=True)
class OrderProfile:
    orders: tuple[tuple[int, int], ...]
    codim: int

    def multiplicity(self, r: int) -> int:
        return dict(self.orders).get(r, 0)


class SymbolicSystem:
    """A symbolic system with lazily computed components g_k.

    The component cache is extended under a lock, so concurrent readers see
    the same values as a sequential evaluation.
    """

    def __init__(self, n: int, m: int, equations: Iterable[EquationSymbol] = (),
                 limit_basis: int = DEFAULT_LIMIT_BASIS, name: str = ""):
        if n < 1 or m < 1:
            raise InvalidSystem("need n >= 1 independent and m >= 1 dependent variables")
        eqs = list(equations)
        for e in eqs:
            if not isinstance(e, EquationSymbol):
                raise InvalidSystem("equations must be EquationSymbol instances")
            e.validate_for(n, m)
        self.n = n
        self.m = m
        self.name = name
        self.equations: tuple[EquationSymbol, ...] = tuple(
            sorted(eqs, key=lambda e: (e.order, [_term_key(k) for k in e.coefficients]))
        )
        self.limit_basis = limit_basis
        self._components: dict[int, Subspace] = {0: Subspace.full(m)}
        self._prolongations: dict[int, Subspace] = {}
        self._lock = threading.RLock()

    def __repr__(self) -> str:
        return f"SymbolicSystem(n={self.n}, m={self.m}, equations={len(self.equations)})"

    @property
    def max_computed(self) -> int:
        return max(self._components)

    @property
    def equation_orders(self) -> list[int]:
        return sorted({e.order for e in self.equations})

    @property
    def max_order(self) -> int:
        return max(self.equation_orders, default=0)

    def ambient_dim(self, k: int) -> int:
        return ambient_dim(self.n, self.m, k)

    def equations_of_order(self, k: int) -> list[EquationSymbol]:
        return [e for e in self.equations if e.order == k]

    def _check_limit(self, k: int) -> None:
        size = self.ambient_dim(k)
        if size > self.limit_basis:
            raise ResourceLimitExceeded(
                f"S^{k}T*⊗N has {size} basis elements, above the limit {self.limit_basis}; "
                "lower the degree window or raise --limit-basis"
            )

    def component(self, k: int) -> Subspace:
        """g_k: prolongation of g_{k-1} cut by the equations of order k."""
        if k < 0:
            raise ValueError("degree must be non-negative")
        with self._lock:
            for i in range(self.max_computed + 1, k + 1):
                self._check_limit(i)
                pro = prolong(self._components[i - 1], self.n, self.m, i - 1)
                self._prolongations[i] = pro
                eqs = self.equations_of_order(i)
                if eqs:
                    rows = ExactMatrix.from_rows([e.constraint_row(self.n, self.m) for e in eqs])
                    g = intersect(pro, kernel_basis(rows))
                else:
                    g = pro
                self._components[i] = g
            return self._components[k]

    def prolonged(self, k: int) -> Subspace:
        """g_{k-1}^(1), the prolongation of the previous component (k >= 1)."""
        if k < 1:
            raise ValueError("prolonged(k) needs k >= 1")
        self.component(k)
        return self._prolongations[k]

    def dims(self, k_max: int) -> list[int]:
        return [self.component(k).dim for k in range(k_max + 1)]

    def generated_by(self, k: int) -> SymbolicSystem:
        """g^{|k>}: full below k, prolongations of g_k from degree k on."""
        g = self.component(k)
        eqs = []
        if k >= 1 and not g.is_full():
            ann = g.annihilator()
            eqs = [EquationSymbol.from_constraint(k, ann.row(i), self.n, self.m) for i in range(ann.nrows)]
        return SymbolicSystem(self.n, self.m, eqs, limit_basis=self.limit_basis,
                              name=f"{self.name}|{k}>" if self.name else "")


def new_system(n: int, m: int, equations: Iterable[EquationSymbol], **kw) -> SymbolicSystem:
    return SymbolicSystem(n, m, equations, **kw)


def component(sys: SymbolicSystem, k: int) -> Subspace:
    return sys.component(k)


def order_profile(sys: SymbolicSystem, up_to: int) -> OrderProfile:
    """Orders r ≤ up_to with multiplicities m(r) = dim g_{r-1}^(1) − dim g_r."""
    if up_to < 1:
        raise ValueError("up_to must be >= 1")
    out = []
    for r in range(1, up_to + 1):
        mr = sys.prolonged(r).dim - sys.component(r).dim
        if mr > 0:
            out.append((r, mr))
    return OrderProfile(tuple(out), sum(x for _, x in out))
