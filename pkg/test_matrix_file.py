import json
from pathlib import Path

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from structures.blocks import BlockToeplitz, expand
from structures.errors import MatrixFileError, NotDiagonalError, NotToeplitzError, SizeLimitError
from structures.normality import DiagonalBlockToeplitz
from verification.generators import complex_normal, random_block_toeplitz
from verification.matrix_file import MatrixFile, load, parse, save, serialize

GOLDEN = Path(__file__).parent / 'golden'
CANONICAL = [
    'shift_lower.json', 'shift_upper.json', 'zero.json',
    'quad_a.json', 'quad_b.json', 'quad_c.json', 'quad_d.json',
    'normal_mixed.json', 'not_normal.json',
    'dense_diag01.json', 'dense_toeplitz.json', 'dense_1x1.json',
]


@pytest.mark.parametrize('name', CANONICAL)
def test_canonical_files_round_trip_byte_identical(name):
    text = (GOLDEN / name).read_text(encoding='utf-8')
    assert serialize(parse(text)) == text


def test_minimal_dense_file():
    matrix = load(str(GOLDEN / 'dense_1x1.json'))
    grid = matrix.to_grid()
    assert (grid.n, grid.d) == (1, 1)
    assert grid.block(0, 0)[0, 0] == 2.5 - 1j


def test_missing_symbol_key_is_named():
    with pytest.raises(MatrixFileError) as excinfo:
        load(str(GOLDEN / 'missing_zero.json'))
    assert "'0'" in str(excinfo.value)
    assert excinfo.value.position == 'payload'


def test_non_finite_number_position():
    with pytest.raises(MatrixFileError) as excinfo:
        load(str(GOLDEN / 'non_finite.json'))
    assert 'non-finite' in str(excinfo.value)
    assert excinfo.value.position == 'payload["0"][0][0]'


def test_syntax_error_carries_line_and_column():
    with pytest.raises(MatrixFileError) as excinfo:
        load(str(GOLDEN / 'truncated.json'))
    assert excinfo.value.position.startswith('line ')
    assert 'column' in excinfo.value.position


@pytest.mark.parametrize('doc, position', [
    ({'kind': 'sparse', 'n': 1, 'd': 1, 'payload': []}, 'kind'),
    ({'kind': 'dense', 'n': True, 'd': 1, 'payload': [[[[[1, 0]]]]]}, 'n'),
    ({'kind': 'dense', 'n': 0, 'd': 1, 'payload': []}, 'n'),
    ({'kind': 'dense', 'n': 1, 'd': 1, 'payload': [[[[[1, 0]]]]], 'extra': 1}, 'extra'),
    ({'kind': 'dense', 'n': 1, 'd': 1, 'payload': [[[[[1, 0, 0]]]]]}, 'payload[0][0][0][0]'),
    ({'kind': 'dense', 'n': 2, 'd': 1, 'payload': [[[[[1, 0]]]]]}, 'payload'),
    ({'kind': 'block-toeplitz', 'n': 1, 'd': 1, 'payload': {'0': [[[1, 0]]], '1': [[[1, 0]]]}}, 'payload'),
    ({'kind': 'diagonal-block-toeplitz', 'n': 1, 'd': 2, 'payload': {'0': [[1, 0]]}}, 'payload["0"]'),
])
def test_schema_errors_carry_positions(doc, position):
    with pytest.raises(MatrixFileError) as excinfo:
        parse(json.dumps(doc))
    assert excinfo.value.position == position


def test_top_level_must_be_an_object():
    with pytest.raises(MatrixFileError) as excinfo:
        parse('[1, 2]')
    assert excinfo.value.position == '$'


def test_size_limit():
    doc = {'kind': 'block-toeplitz', 'n': 5000, 'd': 2, 'payload': {}}
    with pytest.raises(SizeLimitError):
        parse(json.dumps(doc))
    with pytest.raises(SizeLimitError):
        parse(json.dumps({'kind': 'dense', 'n': 3, 'd': 2, 'payload': []}), cap=4)


def test_block_toeplitz_save_and_load(tmp_path):
    t = random_block_toeplitz(np.random.default_rng(0), 4, 3)
    path = tmp_path / 't.json'
    save(MatrixFile.from_block_toeplitz(t), str(path))
    loaded = load(str(path))
    assert loaded.kind == 'block-toeplitz'
    assert_array_equal(loaded.to_block_toeplitz().symbols, t.symbols)
    assert serialize(loaded) == path.read_text(encoding='utf-8')


def test_diagonal_and_dense_constructors():
    rng = np.random.default_rng(1)
    diag = DiagonalBlockToeplitz(complex_normal(rng, (5, 2)))
    matrix = parse(serialize(MatrixFile.from_diagonal(diag)))
    assert_array_equal(matrix.to_diagonal().symbols, diag.symbols)
    assert_array_equal(matrix.to_block_toeplitz().symbols, diag.to_block_toeplitz().symbols)

    t = random_block_toeplitz(rng, 3, 2)
    dense = parse(serialize(MatrixFile.from_grid(expand(t))))
    assert dense.kind == 'dense'
    assert np.abs(dense.to_block_toeplitz().symbols - t.symbols).max() <= 1e-14
    assert dense.scale() == pytest.approx(max(1.0, np.abs(t.symbols).max()))


def test_dense_operands_must_be_toeplitz():
    matrix = load(str(GOLDEN / 'dense_diag01.json'))
    with pytest.raises(NotToeplitzError):
        matrix.to_block_toeplitz()
    toeplitz = load(str(GOLDEN / 'dense_toeplitz.json')).to_block_toeplitz()
    assert_array_equal(toeplitz.symbols.ravel(), [1, 2, 3])


def test_non_diagonal_symbols_are_rejected_for_normality():
    matrix = MatrixFile.from_block_toeplitz(BlockToeplitz(np.ones((3, 2, 2))))
    with pytest.raises(NotDiagonalError):
        matrix.to_diagonal()
