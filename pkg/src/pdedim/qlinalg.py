"""Exact rational linear algebra.

Matrices are immutable wrappers around FLINT ``fmpq_mat`` values; every
subspace is stored by its reduced row-echelon basis so that two subspaces are
equal exactly when their bases are equal.  A plain ``Fraction`` elimination
(:func:`rref_reference`) is kept alongside the FLINT path and serves as the
independent check in the test suite.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

import flint

ScalarLike = Union[int, Fraction, str, "flint.fmpq", "flint.fmpz"]


class DimensionMismatch(ValueError):
    """Raised when operands live in spaces of different dimension."""


def as_scalar(x: ScalarLike) -> Fraction:
    """Coerce ``x`` to a normalized ``Fraction``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, flint.fmpz):
        return Fraction(int(x))
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")


def _to_fmpq(x: ScalarLike) -> flint.fmpq:
    if isinstance(x, int) and not isinstance(x, bool):
        return flint.fmpq(x)
    if isinstance(x, (flint.fmpq, flint.fmpz)):
        return flint.fmpq(x)
    f = as_scalar(x)
    return flint.fmpq(f.numerator, f.denominator)


def format_scalar(x: Fraction) -> str:
    """Render as ``"p"`` or ``"p/q"``."""
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class ExactMatrix:
    """Immutable dense matrix over Q, row-major."""

    __slots__ = ("_m",)

    def __init__(self, nrows: int, ncols: int, entries: Iterable[ScalarLike] | None = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix shape must be non-negative")
        if entries is None:
            m = flint.fmpq_mat(nrows, ncols)
        else:
            flat = list(entries)
            if len(flat) != nrows * ncols:
                raise ValueError(f"expected {nrows * ncols} entries, got {len(flat)}")
            if all(type(x) is int for x in flat):
                m = flint.fmpq_mat(flint.fmpz_mat(nrows, ncols, flat)) if flat else flint.fmpq_mat(nrows, ncols)
            else:
                m = flint.fmpq_mat(nrows, ncols, [_to_fmpq(x) for x in flat])
        object.__setattr__(self, "_m", m)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def _wrap(cls, m) -> ExactMatrix:
        obj = object.__new__(cls)
        if isinstance(m, flint.fmpz_mat):
            m = flint.fmpq_mat(m)
        object.__setattr__(obj, "_m", m)
        return obj

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[ScalarLike]], ncols: int | None = None) -> ExactMatrix:
        rows = [list(r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for an empty row list")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise DimensionMismatch(f"row of length {len(r)} in a {ncols}-column matrix")
        return cls(len(rows), ncols, [x for r in rows for x in r])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> ExactMatrix:
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> ExactMatrix:
        return cls._wrap(flint.fmpq_mat(flint.fmpz_mat(n, n, [int(i == j) for i in range(n) for j in range(n)])))

    @property
    def nrows(self) -> int:
        return self._m.nrows()

    @property
    def ncols(self) -> int:
        return self._m.ncols()

    @property
    def shape(self) -> tuple[int, int]:
        return (self._m.nrows(), self._m.ncols())

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return tuple(as_scalar(x) for x in self._m.entries())

    @property
    def flint(self) -> flint.fmpq_mat:
        """A copy of the underlying FLINT matrix."""
        return flint.fmpq_mat(self._m)

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        return as_scalar(self._m[i, j])

    def row(self, i: int) -> tuple[Fraction, ...]:
        return tuple(as_scalar(self._m[i, j]) for j in range(self.ncols))

    def tolist(self) -> list[list[Fraction]]:
        flat = self.entries
        c = self.ncols
        return [list(flat[i * c:(i + 1) * c]) for i in range(self.nrows)]

    def transpose(self) -> ExactMatrix:
        return ExactMatrix._wrap(self._m.transpose())

    @property
    def T(self) -> ExactMatrix:
        return self.transpose()

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        if self.nrows == 0 or other.ncols == 0 or self.ncols == 0:
            return ExactMatrix(self.nrows, other.ncols)
        return ExactMatrix._wrap(self._m * other._m)

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return ExactMatrix._wrap(self._m + other._m)

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot subtract {self.shape} and {other.shape}")
        return ExactMatrix._wrap(self._m - other._m)

    def __neg__(self) -> ExactMatrix:
        return ExactMatrix._wrap(-self._m)

    def scale(self, c: ScalarLike) -> ExactMatrix:
        return ExactMatrix._wrap(self._m * _to_fmpq(c))

    def is_zero(self) -> bool:
        nr, nc = self.shape
        return nr == 0 or nc == 0 or self._m == flint.fmpq_mat(nr, nc)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and (self.nrows == 0 or self.ncols == 0 or self._m == other._m)

    def __hash__(self) -> int:
        return hash((self.shape, self.entries))

    def __repr__(self) -> str:
        return f"ExactMatrix({self.nrows}x{self.ncols})"


def vstack(mats: Sequence[ExactMatrix], ncols: int | None = None) -> ExactMatrix:
    """Stack matrices vertically."""
    mats = [m for m in mats]
    if ncols is None:
        if not mats:
            raise ValueError("ncols required for an empty stack")
        ncols = mats[0].ncols
    for m in mats:
        if m.ncols != ncols:
            raise DimensionMismatch("vstack column mismatch")
    nonempty = [m for m in mats if m.nrows]
    if not nonempty:
        return ExactMatrix(0, ncols)
    if len(nonempty) == 1:
        return nonempty[0]
    flat: list = []
    for m in nonempty:
        flat.extend(m._m.entries())
    return ExactMatrix._wrap(flint.fmpq_mat(sum(m.nrows for m in nonempty), ncols, flat))


def hstack(mats: Sequence[ExactMatrix]) -> ExactMatrix:
    return vstack([m.transpose() for m in mats], ncols=mats[0].nrows if mats else 0).transpose()


def _integral(m: flint.fmpq_mat) -> flint.fmpz_mat:
    """An integer matrix with the same row space (common denominator cleared)."""
    return m.numer_denom()[0]


def _rref_int(z: flint.fmpz_mat) -> tuple[flint.fmpq_mat, tuple[int, ...]]:
    nr, nc = z.nrows(), z.ncols()
    if nr == 0 or nc == 0:
        return flint.fmpq_mat(0, nc), ()
    r, den, rk = z.rref()
    pivots = []
    c = 0
    for i in range(rk):
        while r[i, c] == 0:
            c += 1
        pivots.append(c)
        c += 1
    if rk == 0:
        return flint.fmpq_mat(0, nc), ()
    if rk < nr:
        r = flint.fmpz_mat(rk, nc, r.entries()[:rk * nc])
    q = flint.fmpq_mat(r)
    if den != 1:
        q = q * flint.fmpq(1, den)
    return q, tuple(pivots)


def _rref_flint(m: flint.fmpq_mat) -> tuple[flint.fmpq_mat, tuple[int, ...]]:
    if m.nrows() == 0 or m.ncols() == 0:
        return flint.fmpq_mat(0, m.ncols()), ()
    return _rref_int(_integral(m))


def rref(M: ExactMatrix) -> tuple[ExactMatrix, tuple[int, ...]]:
    """Reduced row-echelon form with zero rows dropped, plus pivot columns."""
    r, piv = _rref_flint(M._m)
    return ExactMatrix._wrap(r), piv


def rref_reference(rows: Sequence[Sequence[ScalarLike]]) -> tuple[list[list[Fraction]], list[int]]:
    """Pure-Python Gauss-Jordan over ``Fraction``.

    Pivot is the first nonzero entry in column order.  Returns the nonzero
    rows of the reduced echelon form and the pivot columns.
    """
    a = [[as_scalar(x) for x in r] for r in rows]
    if not a:
        return [], []
    nr, nc = len(a), len(a[0])
    pivots: list[int] = []
    prow = 0
    for c in range(nc):
        if prow == nr:
            break
        sel = next((i for i in range(prow, nr) if a[i][c] != 0), None)
        if sel is None:
            continue
        a[prow], a[sel] = a[sel], a[prow]
        inv = 1 / a[prow][c]
        a[prow] = [x * inv for x in a[prow]]
        for i in range(nr):
            if i != prow and a[i][c] != 0:
                f = a[i][c]
                pr = a[prow]
                a[i] = [x - f * y for x, y in zip(a[i], pr)]
        pivots.append(c)
        prow += 1
    return a[:prow], pivots


def rank(M: ExactMatrix) -> int:
    """Row rank of ``M``."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    return _integral(M._m).rank()


def _kernel_rows(r: flint.fmpq_mat, pivots: Sequence[int], ncols: int) -> flint.fmpq_mat:
    """Kernel vectors (one per free column) of an RREF matrix, as rows."""
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    if not free:
        return flint.fmpq_mat(0, ncols)
    col_of_free = {f: k for k, f in enumerate(free)}
    flat = [flint.fmpq(0)] * (len(free) * ncols)
    for k, f in enumerate(free):
        flat[k * ncols + f] = flint.fmpq(1)
    for i, p in enumerate(pivots):
        for f in free:
            if f > p:
                v = r[i, f]
                if v != 0:
                    flat[col_of_free[f] * ncols + p] = -v
    return flint.fmpq_mat(len(free), ncols, flat)


class Subspace:
    """A linear subspace of Q^d stored by its canonical RREF basis."""

    __slots__ = ("ambient_dim", "basis", "pivots", "_ann")

    def __init__(self, ambient_dim: int, basis: ExactMatrix, pivots: Sequence[int], _checked: bool = False):
        if not _checked:
            if basis.ncols != ambient_dim:
                raise DimensionMismatch("basis width differs from ambient dimension")
            basis, pivots = rref(basis)
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "pivots", tuple(pivots))
        object.__setattr__(self, "_ann", None)

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def span(cls, vectors: ExactMatrix | Sequence[Sequence[ScalarLike]], ambient_dim: int | None = None) -> Subspace:
        if not isinstance(vectors, ExactMatrix):
            vectors = [list(v) for v in vectors]
            if ambient_dim is None:
                if not vectors:
                    raise ValueError("ambient_dim required for an empty spanning set")
                ambient_dim = len(vectors[0])
            vectors = ExactMatrix.from_rows(vectors, ncols=ambient_dim)
        if ambient_dim is None:
            ambient_dim = vectors.ncols
        if vectors.ncols != ambient_dim:
            raise DimensionMismatch("vector length differs from ambient dimension")
        b, piv = rref(vectors)
        return cls(ambient_dim, b, piv, _checked=True)

    @classmethod
    def full(cls, d: int) -> Subspace:
        return cls(d, ExactMatrix.identity(d), range(d), _checked=True)

    @classmethod
    def zero(cls, d: int) -> Subspace:
        return cls(d, ExactMatrix(0, d), (), _checked=True)

    @classmethod
    def from_constraints(cls, constraints: ExactMatrix) -> Subspace:
        """The subspace ``{v : C v = 0}``."""
        return kernel_basis(constraints)

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def annihilator(self) -> ExactMatrix:
        """Rows spanning the linear functionals vanishing on this subspace, in RREF."""
        if self._ann is None:
            ann = kernel_basis(self.basis).basis if self.dim else ExactMatrix.identity(self.ambient_dim)
            object.__setattr__(self, "_ann", ann)
        return self._ann

    def contains(self, v: Sequence[ScalarLike]) -> bool:
        return contains(self, v)

    def issubspace(self, other: Subspace) -> bool:
        """True iff ``self`` is contained in ``other``."""
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("ambient dimension mismatch")
        if self.dim == 0 or other.is_full():
            return True
        return (other.annihilator() @ self.basis.transpose()).is_zero()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.pivots == other.pivots and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.pivots))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def kernel_basis(M: ExactMatrix) -> Subspace:
    """Canonical basis of ``{v : M v = 0}``."""
    nc = M.ncols
    if M.nrows == 0:
        return Subspace.full(nc)
    return _kernel_of_rref(*_rref_flint(M._m), nc)


def _kernel_of_rref(r: flint.fmpq_mat, piv: tuple[int, ...], nc: int) -> Subspace:
    k = _kernel_rows(r, piv, nc)
    if k.nrows() == 0:
        out = Subspace.zero(nc)
    else:
        b, kpiv = _rref_flint(k)
        out = Subspace(nc, ExactMatrix._wrap(b), kpiv, _checked=True)
    # the annihilator of a kernel is the row space we just reduced
    object.__setattr__(out, "_ann", ExactMatrix._wrap(r) if r.nrows() else ExactMatrix(0, nc))
    return out


def kernel_of_integer_rows(z: flint.fmpz_mat) -> Subspace:
    """Kernel of an integer matrix given directly as ``fmpz_mat``."""
    nc = z.ncols()
    if z.nrows() == 0:
        return Subspace.full(nc)
    return _kernel_of_rref(*_rref_int(z), nc)


def row_space(M: ExactMatrix) -> Subspace:
    return Subspace.span(M)


def intersect(A: Subspace, B: Subspace) -> Subspace:
    """``A ∩ B`` as the kernel of the stacked annihilators."""
    if A.ambient_dim != B.ambient_dim:
        raise DimensionMismatch(f"ambient dimensions {A.ambient_dim} and {B.ambient_dim} differ")
    if A.is_full():
        return B
    if B.is_full():
        return A
    if A.dim == 0 or B.dim == 0:
        return Subspace.zero(A.ambient_dim)
    return kernel_basis(vstack([A.annihilator(), B.annihilator()]))


def subspace_sum(A: Subspace, B: Subspace) -> Subspace:
    if A.ambient_dim != B.ambient_dim:
        raise DimensionMismatch("ambient dimension mismatch")
    return Subspace.span(vstack([A.basis, B.basis], ncols=A.ambient_dim))


def contains(A: Subspace, v: Sequence[ScalarLike]) -> bool:
    """Membership test ``v ∈ A``."""
    v = list(v)
    if len(v) != A.ambient_dim:
        raise DimensionMismatch(f"vector of length {len(v)} in a {A.ambient_dim}-dimensional space")
    vec = ExactMatrix(1, len(v), v)
    if vec.is_zero():
        return True
    if A.dim == 0:
        return False
    coeffs = ExactMatrix(1, A.dim, [vec._m[0, p] for p in A.pivots])
    return (vec - coeffs @ A.basis).is_zero()


def canonical(M: ExactMatrix) -> ExactMatrix:
    """RREF of the row space of ``M``."""
    return rref(M)[0]
