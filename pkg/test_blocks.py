import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose, assert_array_equal

from structures.blocks import (
    BlockColumn, BlockGrid, BlockRow, BlockToeplitz, Tolerance,
    adjoint, block_mul, expand, flatten, grid_mul, is_block_diagonal,
    split_diagonal, unflatten,
)
from structures.errors import NonFiniteError, ShapeMismatchError
from verification.generators import random_block_toeplitz, random_grid
from verification.oracle import diagonal_scan_is_toeplitz, naive_block_mul

finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


@st.composite
def grids(draw, max_n=5, max_d=3):
    n = draw(st.integers(1, max_n))
    d = draw(st.integers(1, max_d))
    real = draw(arrays(np.float64, (n, n, d, d), elements=finite))
    imag = draw(arrays(np.float64, (n, n, d, d), elements=finite))
    return BlockGrid(real + 1j * imag)


def test_block_mul_identity_and_scalar():
    x = np.array([[1 + 2j, 3], [4j, -1]])
    assert_array_equal(block_mul(np.eye(2), x), x)
    assert_array_equal(block_mul([[2 + 1j]], [[3]]), [[6 + 3j]])


def test_block_mul_matches_triple_loop():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert_allclose(block_mul(a, b), naive_block_mul(a, b), rtol=1e-12, atol=1e-12)


def test_block_mul_rejects_mismatched_blocks():
    with pytest.raises(ShapeMismatchError):
        block_mul(np.eye(2), np.eye(3))


def test_grid_mul_identity_and_shift_pair():
    rng = np.random.default_rng(0)
    g = random_grid(rng, 3, 2)
    assert_array_equal(grid_mul(g, BlockGrid.identity(3, 2)).blocks, g.blocks)

    lower = BlockGrid(np.array([[[[0]], [[0]]], [[[1]], [[0]]]]))
    upper = BlockGrid(np.array([[[[0]], [[1]]], [[[0]], [[0]]]]))
    assert_array_equal(flatten(grid_mul(lower, upper)), [[0, 0], [0, 1]])


def test_grid_mul_matches_flattened_product():
    rng = np.random.default_rng(11)
    for n, d in [(4, 2), (8, 3), (5, 8)]:
        g1, g2 = random_grid(rng, n, d), random_grid(rng, n, d)
        dense = flatten(g1) @ flatten(g2)
        assert_allclose(flatten(grid_mul(g1, g2)), dense, rtol=1e-12, atol=1e-12 * np.abs(dense).max())


def test_grid_mul_shape_mismatch():
    with pytest.raises(ShapeMismatchError):
        grid_mul(BlockGrid.zeros(2, 1), BlockGrid.zeros(3, 1))


def test_adjoint_of_hermitian_is_itself():
    m = np.array([[2, 1 - 1j, 0], [1 + 1j, 3, 4j], [0, -4j, 1]])
    g = unflatten(m, 3, 1)
    assert_array_equal(adjoint(g).blocks, g.blocks)


@seed(20240101)
@settings(max_examples=60, deadline=None)
@given(grids())
def test_adjoint_involution_and_dense_form(g):
    assert_array_equal(adjoint(adjoint(g)).blocks, g.blocks)
    assert_array_equal(flatten(adjoint(g)), flatten(g).conj().T)


def test_adjoint_is_anti_homomorphism():
    rng = np.random.default_rng(5)
    a, b = random_grid(rng, 4, 3), random_grid(rng, 4, 3)
    left = adjoint(grid_mul(a, b)).blocks
    right = grid_mul(adjoint(b), adjoint(a)).blocks
    assert Tolerance().close(left, right)


@seed(7)
@settings(max_examples=60, deadline=None)
@given(grids(max_n=6, max_d=4))
def test_flatten_round_trip_is_exact(g):
    m = flatten(g)
    assert m.shape == (g.n * g.d, g.n * g.d)
    assert_array_equal(unflatten(m, g.n, g.d).blocks, g.blocks)
    assert_array_equal(flatten(unflatten(m, g.n, g.d)), m)


def test_unflatten_shape_mismatch():
    with pytest.raises(ShapeMismatchError):
        unflatten(np.zeros((4, 4)), 3, 1)


def test_expand_single_block():
    t = BlockToeplitz(np.array([[[1, 2], [3, 4]]]))
    assert expand(t).n == 1
    assert_array_equal(expand(t).block(0, 0), [[1, 2], [3, 4]])


def test_expand_places_positive_symbols_above_diagonal():
    # (a_{-2}, a_{-1}, a_0, a_1, a_2)
    t = BlockToeplitz(np.array([-2, -1, 0, 1, 2]).reshape(5, 1, 1))
    expected = [[0, 1, 2],
                [-1, 0, 1],
                [-2, -1, 0]]
    assert_array_equal(flatten(expand(t)), expected)


def test_expand_is_toeplitz_under_diagonal_scan():
    rng = np.random.default_rng(2)
    for n, d in [(1, 1), (3, 2), (6, 3)]:
        assert diagonal_scan_is_toeplitz(expand(random_block_toeplitz(rng, n, d)))


def test_from_symbols_and_symbol_lookup():
    t = BlockToeplitz.from_symbols({-1: [[1]], 0: [[2]], 1: [[3]]})
    assert (t.n, t.d) == (2, 1)
    assert t.symbol(-1)[0, 0] == 1
    assert t.symbol(1)[0, 0] == 3
    with pytest.raises(IndexError):
        t.symbol(2)
    with pytest.raises(ShapeMismatchError):
        BlockToeplitz.from_symbols({0: [[1]], 1: [[2]]})


def test_constructors_reject_bad_input():
    with pytest.raises(NonFiniteError):
        BlockGrid(np.full((1, 1, 1, 1), np.nan))
    with pytest.raises(NonFiniteError):
        BlockToeplitz(np.array([[[np.inf]]]))
    with pytest.raises(ShapeMismatchError):
        BlockToeplitz(np.zeros((2, 1, 1)))
    with pytest.raises(ShapeMismatchError):
        BlockGrid(np.zeros((2, 3, 1, 1)))
    with pytest.raises(ShapeMismatchError):
        BlockColumn(np.zeros((2, 1, 2)))


def test_values_are_read_only_copies():
    source = np.zeros((3, 1, 1), dtype=complex)
    t = BlockToeplitz(source)
    source[0] = 5
    assert t.symbols[0, 0, 0] == 0
    with pytest.raises(ValueError):
        t.symbols[0, 0, 0] = 1


def test_column_and_row_stacking():
    entries = np.arange(8).reshape(2, 2, 2)
    assert_array_equal(BlockColumn(entries).stacked(), np.vstack([entries[0], entries[1]]))
    assert_array_equal(BlockRow(entries).stacked(), np.hstack([entries[0], entries[1]]))


def test_toeplitz_arithmetic():
    rng = np.random.default_rng(9)
    a, b = random_block_toeplitz(rng, 3, 2), random_block_toeplitz(rng, 3, 2)
    assert_allclose(flatten(expand(a + b)), flatten(expand(a)) + flatten(expand(b)))
    assert_allclose(flatten(expand(a - b)), flatten(expand(a)) - flatten(expand(b)))
    assert_allclose(a.scaled(2j).symbols, 2j * a.symbols)
    assert_array_equal(flatten(expand(BlockToeplitz.identity(3, 2))), np.eye(6))
    with pytest.raises(ShapeMismatchError):
        a + BlockToeplitz.zeros(2, 2)


def test_split_diagonal():
    rng = np.random.default_rng(4)
    t = random_block_toeplitz(rng, 4, 2)
    off, diag = split_diagonal(t)
    assert_array_equal(off.symbol(0), np.zeros((2, 2)))
    assert is_block_diagonal(diag)
    assert not is_block_diagonal(t)
    assert_array_equal(flatten(expand(off)) + flatten(expand(diag)), flatten(expand(t)))


def test_tolerance():
    tol = Tolerance(1e-9)
    assert tol.scale(np.array([0.5])) == 1.0
    assert tol.threshold(np.array([10.0])) == pytest.approx(1e-8)
    assert tol.vanishes(np.array([1e-9]), np.array([1.0]))
    assert not tol.vanishes(np.array([2e-9]), np.array([1.0]))
    with pytest.raises(ValueError):
        Tolerance(-1.0)
