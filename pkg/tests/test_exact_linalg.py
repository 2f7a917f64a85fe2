import itertools
import math

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from sandpiles.abelian import TRIVIAL_GROUP, from_cyclic_orders
from sandpiles.digraphs import de_bruijn, laplacian
from sandpiles.exact_linalg import (
    IntMatrix,
    determinant,
    format_matrix,
    parse_matrix,
    smith_group,
    smith_normal_form,
)


def random_matrix_strategy(max_dim=5, max_entry=9):
    return st.integers(min_value=0, max_value=max_dim).flatmap(
        lambda m: st.integers(min_value=0, max_value=max_dim).flatmap(
            lambda n: st.lists(
                st.integers(min_value=-max_entry, max_value=max_entry),
                min_size=m * n,
                max_size=m * n,
            ).map(lambda es: IntMatrix(m, n, tuple(es)))
        )
    )


matrices = random_matrix_strategy()
square_matrices = st.integers(min_value=1, max_value=5).flatmap(
    lambda n: st.lists(
        st.integers(min_value=-9, max_value=9), min_size=n * n, max_size=n * n
    ).map(lambda es: IntMatrix(n, n, tuple(es)))
)


def sympy_invariant_factors(M: IntMatrix) -> tuple[int, ...]:
    if M.rows == 0 or M.cols == 0:
        return ()
    s = sympy_snf(sympy.Matrix(M.to_rows()), domain=sympy.ZZ)
    diag = [int(s[i, i]) for i in range(min(M.rows, M.cols))]
    return tuple(d for d in diag if d != 0)


def test_int_matrix_validation():
    with pytest.raises(ValueError):
        IntMatrix(2, 2, (1, 2, 3))
    with pytest.raises(ValueError):
        IntMatrix(-1, 2, ())
    with pytest.raises(ValueError):
        IntMatrix.from_rows([[1, 2], [3]])
    m = IntMatrix.from_rows([[1, 2], [3, 4]])
    assert m.entry(1, 0) == 3
    with pytest.raises(IndexError):
        m.entry(2, 0)
    with pytest.raises(IndexError):
        m.entry(0, -1)


def test_int_matrix_ops():
    a = IntMatrix.from_rows([[1, 2], [3, 4]])
    assert a.transpose().to_rows() == [[1, 3], [2, 4]]
    assert (a @ IntMatrix.identity(2)) == a
    assert (IntMatrix.identity(2) @ a) == a
    b = IntMatrix.from_rows([[1, 0, 2], [0, 1, 0]])
    assert (a @ b).to_rows() == [[1, 2, 2], [3, 4, 6]]
    with pytest.raises(ValueError):
        b @ a
    assert IntMatrix.zeros(2, 3).to_rows() == [[0, 0, 0], [0, 0, 0]]
    assert IntMatrix.zeros(0, 3).to_rows() == []


def test_snf_known_values():
    assert smith_normal_form(IntMatrix.from_rows([[2, 4], [4, 2]])).invariant_factors == (
        2,
        6,
    )
    assert smith_normal_form(IntMatrix.from_rows([[-4, 6], [2, -8]])).invariant_factors == (
        2,
        10,
    )
    assert smith_normal_form(IntMatrix.zeros(3, 2)).invariant_factors == ()
    assert smith_normal_form(IntMatrix.zeros(0, 0)).invariant_factors == ()
    assert smith_normal_form(IntMatrix.identity(4)).invariant_factors == (1, 1, 1, 1)
    L = laplacian(de_bruijn(4, 3), reduce_at=0)
    assert smith_normal_form(L).invariant_factors == (1, 1, 4)


@given(matrices)
def test_snf_matches_sympy(M):
    assert smith_normal_form(M).invariant_factors == sympy_invariant_factors(M)


@given(matrices)
def test_snf_divisor_chain(M):
    fs = smith_normal_form(M).invariant_factors
    assert all(s > 0 for s in fs)
    for a, b in zip(fs, fs[1:]):
        assert b % a == 0
    assert len(fs) <= min(M.rows, M.cols)


@given(matrices)
def test_snf_transforms(M):
    res = smith_normal_form(M, want_transforms=True)
    assert res.P is not None and res.Q is not None
    assert abs(determinant(res.P)) == 1
    assert abs(determinant(res.Q)) == 1
    assert (res.P @ M @ res.Q) == res.diagonal_matrix()


@given(matrices, st.randoms(use_true_random=False))
def test_snf_permutation_invariance(M, rng):
    rows = M.to_rows()
    rng.shuffle(rows)
    cols = list(range(M.cols))
    rng.shuffle(cols)
    shuffled = [[row[j] for j in cols] for row in rows]
    N = IntMatrix(M.rows, M.cols, tuple(x for row in shuffled for x in row))
    assert (
        smith_normal_form(N).invariant_factors
        == smith_normal_form(M).invariant_factors
    )


@given(random_matrix_strategy(max_dim=4, max_entry=6))
def test_snf_determinantal_divisors(M):
    """The product s_1 ... s_k equals the gcd of all k x k minors."""
    fs = smith_normal_form(M).invariant_factors
    rows = M.to_rows()
    for k in range(1, min(M.rows, M.cols) + 1):
        g = 0
        for ri in itertools.combinations(range(M.rows), k):
            for ci in itertools.combinations(range(M.cols), k):
                sub = IntMatrix.from_rows([[rows[i][j] for j in ci] for i in ri])
                g = math.gcd(g, determinant(sub))
        expected = math.prod(fs[:k]) if k <= len(fs) else 0
        assert g == expected


def test_determinant_examples():
    assert determinant(IntMatrix.from_rows([[2, 4], [4, 2]])) == -12
    assert determinant(IntMatrix.from_rows([[1, 2], [2, 4]])) == 0
    assert determinant(IntMatrix.identity(5)) == 1
    assert determinant(IntMatrix.zeros(0, 0)) == 1
    assert determinant(IntMatrix.from_rows([[7]])) == 7
    with pytest.raises(ValueError):
        determinant(IntMatrix.zeros(2, 3))


@given(square_matrices)
def test_determinant_matches_sympy(M):
    assert determinant(M) == int(sympy.Matrix(M.to_rows()).det())


def test_smith_group_examples():
    assert smith_group(IntMatrix.zeros(2, 3)) == (3, TRIVIAL_GROUP)
    assert smith_group(IntMatrix.from_rows([[2, 0], [0, 0]])) == (
        1,
        from_cyclic_orders([2]),
    )
    assert smith_group(IntMatrix.from_rows([[2, 4], [4, 2]])) == (
        0,
        from_cyclic_orders([2, 6]),
    )
    assert smith_group(IntMatrix.identity(3)) == (0, TRIVIAL_GROUP)


@given(matrices)
def test_parse_format_round_trip(M):
    assert parse_matrix(format_matrix(M)) == M


def test_parse_matrix_examples_and_errors():
    m = parse_matrix("2 2\n2 4\n4 2\n")
    assert m.to_rows() == [[2, 4], [4, 2]]
    # Blank lines are ignored; whitespace is flexible.
    assert parse_matrix("\n2 2\n\n 2  4 \n4 2\n\n") == m
    with pytest.raises(ValueError):
        parse_matrix("")
    with pytest.raises(ValueError):
        parse_matrix("2\n1 2\n3 4\n")
    with pytest.raises(ValueError):
        parse_matrix("a b\n")
    with pytest.raises(ValueError):
        parse_matrix("2 2\n1 2\n")
    with pytest.raises(ValueError):
        parse_matrix("2 2\n1 2\n3 x\n")
    with pytest.raises(ValueError):
        parse_matrix("2 2\n1 2 3\n4 5 6\n")
    with pytest.raises(ValueError):
        parse_matrix("-1 2\n")
