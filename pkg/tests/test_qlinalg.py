from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdedim.qlinalg import (
    DimensionMismatch,
    ExactMatrix,
    Subspace,
    as_scalar,
    canonical,
    contains,
    format_scalar,
    intersect,
    kernel_basis,
    rank,
    rref,
    rref_reference,
    subspace_sum,
)


def M(rows):
    return ExactMatrix.from_rows(rows)


def S(rows, d=None):
    return Subspace.span(rows, d)


# --- scalars -----------------------------------------------------------------


def test_scalar_normalization():
    x = as_scalar("6/4")
    assert (x.numerator, x.denominator) == (3, 2)
    assert as_scalar("-0/5") == 0 and as_scalar("-0/5").denominator == 1
    assert format_scalar(Fraction(-3, 2)) == "-3/2"
    assert format_scalar(Fraction(4)) == "4"
    with pytest.raises(TypeError):
        as_scalar(0.5)
    with pytest.raises(TypeError):
        as_scalar(True)


def test_matrix_shape_checked():
    with pytest.raises(ValueError):
        ExactMatrix(2, 2, [1, 2, 3])
    with pytest.raises(DimensionMismatch):
        M([[1, 2]]) @ M([[1, 2]])


def test_matrix_is_immutable():
    A = M([[1, 2]])
    with pytest.raises(AttributeError):
        A._m = None


def test_matrix_arithmetic():
    A = M([[1, 2], [3, 4]])
    assert (A @ ExactMatrix.identity(2)) == A
    assert (A - A).is_zero()
    assert A.T == M([[1, 3], [2, 4]])
    assert A.scale("1/2")[1, 1] == 2
    assert A.entries == (1, 2, 3, 4)


# --- rank --------------------------------------------------------------------


def test_rank_identity():
    assert rank(ExactMatrix.identity(3)) == 3


def test_rank_zero():
    assert rank(ExactMatrix.zeros(2, 3)) == 0


def test_rank_hand_elimination():
    # row 2 = 2·row 1, row 3 independent
    assert rank(M([[1, 2, 3], [2, 4, 6], [0, 1, 1]])) == 2


def test_rank_rational_entries():
    assert rank(M([["1/2", "1/3"], ["3/2", 1]])) == 1


# --- kernels -----------------------------------------------------------------


def test_kernel_of_identity():
    k = kernel_basis(ExactMatrix.identity(2))
    assert k.dim == 0 and k.ambient_dim == 2


def test_kernel_hand_solution():
    assert kernel_basis(M([[1, -1]])) == S([[1, 1]])


def test_kernel_of_zero_matrix():
    assert kernel_basis(ExactMatrix.zeros(2, 3)).is_full()


def test_kernel_vectors_are_killed():
    A = M([[1, 2, 3, 4], [2, 4, 7, 9]])
    K = kernel_basis(A)
    assert K.dim == 2
    assert (A @ K.basis.T).is_zero()


# --- intersection and membership ---------------------------------------------


def test_intersect_with_full_space():
    B = S([[1, 2, 0]])
    assert intersect(Subspace.full(3), B) == B


def test_intersect_axes():
    assert intersect(S([[1, 0]]), S([[0, 1]])).dim == 0


def test_intersect_hand_solution():
    A = S([[1, 1, 0], [0, 0, 1]])
    B = S([[1, 1, 1]])
    assert intersect(A, B) == S([[1, 1, 1]])


def test_intersect_ambient_mismatch():
    with pytest.raises(DimensionMismatch):
        intersect(Subspace.full(2), Subspace.full(3))


def test_contains_zero_vector():
    assert contains(S([[1, 5]]), [0, 0])
    assert contains(Subspace.zero(2), [0, 0])


def test_contains_rejects():
    assert not contains(S([[0, 1]]), [1, 0])


def test_contains_multiple():
    assert contains(S([[1, 1, 1]]), [2, 2, 2])


def test_contains_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        contains(S([[1, 1, 1]]), [1, 1])


def test_subspace_canonical_basis_is_rref():
    A = S([[2, 4, 6], [1, 1, 1]])
    ref, piv = rref_reference([[2, 4, 6], [1, 1, 1]])
    assert A.basis.tolist() == ref
    assert list(A.pivots) == piv


def test_subspace_equality_ignores_spanning_set():
    assert S([[1, 1, 0], [0, 1, 1]]) == S([[1, 2, 1], [1, 0, -1]])


# --- properties --------------------------------------------------------------

entry = st.integers(-4, 4) | st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = draw(st.lists(st.lists(entry, min_size=c, max_size=c), min_size=r, max_size=r))
    return M(rows)


@st.composite
def subspace_pairs(draw):
    d = draw(st.integers(1, 5))

    def sub():
        k = draw(st.integers(1, 4))
        rows = draw(st.lists(st.lists(st.integers(-3, 3), min_size=d, max_size=d), min_size=k, max_size=k))
        return S(rows, d)

    return sub(), sub(), sub()


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_equals_rank_of_transpose(A):
    assert rank(A) == rank(A.T)


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_nullity(A):
    assert kernel_basis(A).dim + rank(A) == A.ncols


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_canonical_idempotent(A):
    c = canonical(A)
    assert canonical(c) == c


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_flint_rref_matches_reference(A):
    R, piv = rref(A)
    ref, ref_piv = rref_reference(A.tolist())
    assert R.tolist() == ref
    assert list(piv) == ref_piv


@settings(max_examples=60, deadline=None)
@given(subspace_pairs())
def test_intersect_commutative_and_associative(abc):
    A, B, C = abc
    assert intersect(A, B) == intersect(B, A)
    assert intersect(intersect(A, B), C) == intersect(A, intersect(B, C))


@settings(max_examples=60, deadline=None)
@given(subspace_pairs())
def test_grassmann_formula(abc):
    A, B, _ = abc
    assert A.dim + B.dim - intersect(A, B).dim == subspace_sum(A, B).dim
