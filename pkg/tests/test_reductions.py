"""Exact construction checks: golden matrices, identities, extensions."""

import random
from fractions import Fraction

import pytest

from helpers import random_instance
from minctrl.errors import InvalidInputError
from minctrl.linalg import rank_exact
from minctrl.matrices import RationalMatrix
from minctrl.reductions import (
    HittingSetInstance,
    build_reduction,
    build_symmetric_extension,
    eigenvector_matrix,
    eigenvector_matrix_inverse,
    incidence_matrix,
    orthogonal_extension,
)


# --- instance validation ------------------------------------------------------

def test_instance_rejects_empty_set():
    with pytest.raises(InvalidInputError, match="set #2"):
        HittingSetInstance.from_sets(2, [[1, 2], []])


def test_instance_rejects_uncovered_element():
    with pytest.raises(InvalidInputError, match="element 3"):
        HittingSetInstance.from_sets(3, [[1, 2]])


def test_instance_rejects_out_of_range():
    with pytest.raises(InvalidInputError, match="out-of-range"):
        HittingSetInstance.from_sets(2, [[1, 2, 5]])


def test_instance_json_round_trip(paper_instance):
    obj = paper_instance.to_json_dict()
    assert obj["m"] == 3
    assert HittingSetInstance.from_json_dict(obj) == paper_instance


# --- incidence ------------------------------------------------------------------

def test_incidence_paper(paper_instance):
    C = incidence_matrix(paper_instance)
    assert C == RationalMatrix.from_rows(
        [[1, 1, 0], [0, 1, 1], [1, 0, 1], [1, 1, 1]]
    )


def test_incidence_trivial():
    assert incidence_matrix(
        HittingSetInstance.from_sets(1, [[1]])
    ) == RationalMatrix.from_rows([[1]])
    assert incidence_matrix(
        HittingSetInstance.from_sets(2, [[1], [2]])
    ) == RationalMatrix.identity(2)


# --- eigenvector matrix -----------------------------------------------------------

def test_eigenvector_matrix_paper(paper_instance, paper_V):
    V = eigenvector_matrix(paper_instance)
    assert V == paper_V
    # spot-check the block layout: set rows carry m+1 on the diagonal and the
    # element rows share the trailing ones column
    assert V.data[3][3] == 4
    assert V.data[0][7] == 1


def test_eigenvector_matrix_single_set():
    V = eigenvector_matrix(HittingSetInstance.from_sets(1, [[1]]))
    assert V == RationalMatrix.from_rows([[2, 0, 1], [1, 2, 0], [0, 0, 1]])


def test_eigenvector_matrix_full_rank_random():
    rng = random.Random(4)
    for _ in range(20):
        inst = random_instance(rng)
        V = eigenvector_matrix(inst)
        assert rank_exact(V) == inst.state_dim


# --- reduction -------------------------------------------------------------------

def test_build_reduction_paper_golden(paper_instance, paper_A):
    red = build_reduction(paper_instance)
    assert red.system_matrix == paper_A
    assert red.eigenvalues == tuple(range(1, 9))
    assert red.index_map.elements == (0, 1, 2)
    assert red.index_map.sets == (3, 4, 5, 6)
    assert red.index_map.anchor == 7


def test_build_reduction_single_set():
    red = build_reduction(HittingSetInstance.from_sets(1, [[1]]))
    V, A = red.left_eigenvectors, red.system_matrix
    D = RationalMatrix.diagonal([1, 2, 3])
    assert V @ A == D @ V  # rows of V are exact left eigenvectors


def test_left_eigenvector_identity_random():
    rng = random.Random(8)
    for _ in range(15):
        inst = random_instance(rng)
        red = build_reduction(inst)
        n = inst.state_dim
        D = RationalMatrix.diagonal(list(range(1, n + 1)))
        assert red.left_eigenvectors @ red.system_matrix == D @ red.left_eigenvectors


# --- closed-form inverse -----------------------------------------------------------

def test_inverse_closed_form_paper_entries(paper_instance):
    M = eigenvector_matrix_inverse(paper_instance)
    assert M.data[0][0] == Fraction(1, 2)
    assert M.data[0][7] == Fraction(-1, 2)
    # first set {1,2}: |S| = 2, m+1 = 4 -> anchor entry 2/8 = 1/4
    assert M.data[3][7] == Fraction(1, 4)
    assert M.data[3][3] == Fraction(1, 4)
    assert M.data[3][0] == Fraction(-1, 8)


def test_inverse_closed_form_equals_elimination_random():
    rng = random.Random(15)
    for _ in range(15):
        inst = random_instance(rng)
        assert eigenvector_matrix_inverse(inst) == eigenvector_matrix(inst).inverse()


def test_inverse_sparsity_pattern(paper_instance):
    # same nonzero pattern as the eigenvector matrix except the anchor column
    V = eigenvector_matrix(paper_instance)
    M = eigenvector_matrix_inverse(paper_instance)
    n = V.rows
    for i in range(n):
        for j in range(n - 1):
            assert (V.data[i][j] != 0) == (M.data[i][j] != 0)
    assert all(M.data[i][n - 1] != 0 for i in range(n))


# --- orthogonal extension ----------------------------------------------------------

def test_orthogonal_extension_simple():
    out = orthogonal_extension([[0, 1]])
    assert len(out) == 1
    assert out[0][0] != 0
    assert sum(a * b for a, b in zip(out[0], (0, 1))) == 0


@pytest.mark.parametrize(
    "vectors",
    [
        [[0, 1, -1]],
        [[0, 1, 1, 0], [0, 1, -1, 0]],
        [[0, 2, 0, 3, 0]],
    ],
)
def test_orthogonal_extension_postconditions(vectors):
    out = orthogonal_extension(vectors)
    n = len(vectors[0])
    assert len(out) == n - len(vectors)
    everything = [tuple(Fraction(x) for x in v) for v in vectors] + out
    for i, v in enumerate(everything):
        for w in everything[i + 1 :]:
            assert sum(a * b for a, b in zip(v, w)) == 0
    for v in out:
        assert v[0] != 0


def test_orthogonal_extension_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        orthogonal_extension([[1, 0]])  # nonzero first coordinate
    with pytest.raises(InvalidInputError):
        orthogonal_extension([[0, 1, 0], [0, 1, 1]])  # not orthogonal
    with pytest.raises(InvalidInputError):
        orthogonal_extension([[0, 1], [0, 2]])  # k = n and dependent


# --- symmetric extension ------------------------------------------------------------

def test_symmetric_extension_single_set():
    inst = HittingSetInstance.from_sets(1, [[1]])
    sym = build_symmetric_extension(inst)
    r = 1 + 1 + 2 + 3  # elements + sets + anchor/final + pairs of 3 rows
    assert sym.left_eigenvectors.rows == 7 == r
    assert sym.system_matrix.is_symmetric()
    assert sym.eigenvalues == tuple(range(1, 8))


def test_symmetric_extension_rows_orthogonal(paper_instance):
    rng = random.Random(23)
    for inst in [
        HittingSetInstance.from_sets(1, [[1]]),
        HittingSetInstance.from_sets(2, [[1, 2]]),
        random_instance(rng, max_m=2, max_p=2),
    ]:
        sym = build_symmetric_extension(inst)
        V = sym.left_eigenvectors
        gram = V @ V.transpose()
        for i in range(V.rows):
            for j in range(V.rows):
                if i != j:
                    assert gram.data[i][j] == 0
                else:
                    assert gram.data[i][j] > 0


def test_symmetric_extension_restriction_equals_original():
    inst = HittingSetInstance.from_sets(2, [[1, 2]])
    V = eigenvector_matrix(inst)
    sym = build_symmetric_extension(inst)
    k = inst.state_dim
    for i in range(k):
        assert sym.left_eigenvectors.row(i)[:k] == V.row(i)


def test_symmetric_extension_eigen_identity():
    inst = HittingSetInstance.from_sets(2, [[1, 2]])
    sym = build_symmetric_extension(inst)
    r = sym.left_eigenvectors.rows
    D = RationalMatrix.diagonal(list(range(1, r + 1)))
    assert sym.left_eigenvectors @ sym.system_matrix == D @ sym.left_eigenvectors


def test_symmetric_extension_column_map():
    inst = HittingSetInstance.from_sets(1, [[1]])
    sym = build_symmetric_extension(inst)
    pairs = dict(sym.pair_columns)
    assert set(pairs) == {(1, 2), (1, 3), (2, 3)}
    assert sorted(pairs.values()) == [3, 4, 5]
    assert sym.final_column == 6
