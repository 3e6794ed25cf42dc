import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logalg.errors import ResourceExceeded
from logalg.exactla import (
    IntMatrix,
    cokernel,
    complex_homology,
    det,
    hilbert_basis,
    hilbert_basis_bruteforce,
    is_group_isomorphism,
    kernel_basis,
    lattice_contains,
    smith,
    solve_integer,
)
from logalg.limits import limited

from oracles import cokernel_invariants, invariant_factors, minimal_solutions

small = st.integers(-6, 6)


def matrices(max_r=4, max_c=4):
    return st.integers(1, max_r).flatmap(
        lambda r: st.integers(1, max_c).flatmap(lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
    )


@settings(max_examples=120, deadline=None)
@given(matrices())
def test_smith_form_matches_sympy(rows):
    s = smith(IntMatrix(rows))
    A = IntMatrix(rows)
    assert s.U @ A @ s.V == s.D
    assert s.U @ s.U_inv == IntMatrix.identity(A.rows)
    assert s.V @ s.V_inv == IntMatrix.identity(A.cols)
    diag = [d for d in s.diagonal if d]
    assert all(d > 0 for d in diag)
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    assert sorted(diag) == invariant_factors(rows)


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_cokernel_invariants(rows):
    G = cokernel(IntMatrix(rows))
    assert (G.free_rank, G.torsion) == cokernel_invariants(rows, len(rows))


@settings(max_examples=60, deadline=None)
@given(matrices(3, 5))
def test_kernel_basis_spans_kernel(rows):
    A = IntMatrix(rows)
    K = kernel_basis(A)
    assert (A @ K).is_zero()
    assert K.cols == A.cols - smith(A).rank


@settings(max_examples=60, deadline=None)
@given(matrices(3, 3), st.lists(small, min_size=3, max_size=3))
def test_solve_integer_roundtrip(rows, x):
    A = IntMatrix(rows)
    x = x[: A.cols] + [0] * (A.cols - len(x))
    b = [sum(A[i, j] * x[j] for j in range(A.cols)) for i in range(A.rows)]
    y = solve_integer(A, b)
    assert y is not None
    assert [sum(A[i, j] * y[j] for j in range(A.cols)) for i in range(A.rows)] == b


def test_solve_integer_detects_no_solution():
    assert solve_integer(IntMatrix([[2]]), [1]) is None
    assert not lattice_contains(IntMatrix([[2, 0], [0, 2]]), [1, 0])
    assert lattice_contains(IntMatrix([[2, 0], [0, 2]]), [4, -2])


def test_det_matches_sympy():
    import sympy

    for rows in ([[2, 1], [1, 3]], [[0, 1, 2], [3, 4, 5], [6, 7, 9]], [[1, 2], [2, 4]]):
        assert det(IntMatrix(rows)) == int(sympy.Matrix(rows).det())


def test_group_printing_and_order():
    G = cokernel(IntMatrix([[2, 0], [0, 0]]))
    assert str(G) == "Z + Z/2"
    assert G.order() is None
    assert cokernel(IntMatrix([[2, 0], [0, 3]])).order() == 6
    assert cokernel(IntMatrix([[1]])).is_trivial()


def test_group_isomorphism_check():
    Z2 = cokernel(IntMatrix([[2]]))
    Z = cokernel(IntMatrix.zeros(1, 0))
    assert is_group_isomorphism(IntMatrix([[1]]), Z2, Z2)
    assert not is_group_isomorphism(IntMatrix([[2]]), Z, Z)
    assert is_group_isomorphism(IntMatrix([[-1]]), Z, Z)


def test_complex_homology_of_circle():
    # cellular chain complex of S^1: Z --0--> Z
    H = complex_homology(IntMatrix.zeros(1, 1), IntMatrix.zeros(0, 1))
    assert (H.free_rank, H.torsion) == (1, ())


HILBERT_CASES = [
    [[1, -1]],
    [[1, 1, -2]],
    [[2, -1, -1]],
    [[1, 2, -3]],
    [[1, 1, -1, -1]],
    [[3, -2, -1]],
    [[2, 3, -5]],
    [[1, 1, -1, 0], [0, 1, 1, -1]],
]


@pytest.mark.parametrize("A", HILBERT_CASES, ids=lambda A: str(A))
def test_hilbert_basis_against_enumeration(A):
    assert hilbert_basis(A) == minimal_solutions(A, 6)
    assert hilbert_basis_bruteforce(A, 6) == minimal_solutions(A, 6)


def test_hilbert_basis_cap():
    with pytest.raises(ResourceExceeded):
        hilbert_basis([[2, 3, -5]], cap=2)
    with limited(max_hilbert=2), pytest.raises(ResourceExceeded):
        hilbert_basis([[2, 3, -5]])
