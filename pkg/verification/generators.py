"""
Generadores de instancias estructuradas para tests, CLI y benchmark.
Cada instancia cumple por construcción la propiedad que anuncia.
"""

from typing import List, Optional, Tuple

import numpy as np

from structures.blocks import BlockGrid, BlockToeplitz
from structures.normality import DiagonalBlockToeplitz
from verification.matrix_file import MatrixFile

KINDS = (
    'random-toeplitz',
    'lower-triangular',
    'circulant',
    'gap-matched-quadruple',
    'normal-slices',
    'non-normal',
)
BRANCHES = ('circulant', 'conjugate', 'mixed')


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def unimodular(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * np.pi * rng.random()))


def random_grid(rng: np.random.Generator, n: int, d: int) -> BlockGrid:
    return BlockGrid(complex_normal(rng, (n, n, d, d)))


def random_block_toeplitz(rng: np.random.Generator, n: int, d: int) -> BlockToeplitz:
    return BlockToeplitz(complex_normal(rng, (2 * n - 1, d, d)))


def lower_triangular(rng: np.random.Generator, n: int, d: int) -> BlockToeplitz:
    """Símbolos positivos nulos"""
    symbols = complex_normal(rng, (2 * n - 1, d, d))
    symbols[n:] = 0
    return BlockToeplitz(symbols)


def upper_triangular(rng: np.random.Generator, n: int, d: int) -> BlockToeplitz:
    symbols = complex_normal(rng, (2 * n - 1, d, d))
    symbols[:n - 1] = 0
    return BlockToeplitz(symbols)


def diagonal_toeplitz(rng: np.random.Generator, n: int, d: int) -> BlockToeplitz:
    symbols = np.zeros((2 * n - 1, d, d), dtype=np.complex128)
    symbols[n - 1] = complex_normal(rng, (d, d))
    return BlockToeplitz(symbols)


def circulant(rng: np.random.Generator, n: int, d: int) -> BlockToeplitz:
    """T_{-k} = T_{n-k} para k = 1 .. n-1"""
    first_row = complex_normal(rng, (n, d, d))
    symbols = np.concatenate([first_row[1:], first_row])
    return BlockToeplitz(symbols)


def with_new_diagonal(rng: np.random.Generator, t: BlockToeplitz) -> BlockToeplitz:
    """Mismas alas, T_0 nuevo"""
    symbols = np.array(t.symbols)
    symbols[t.n - 1] = complex_normal(rng, (t.d, t.d))
    return BlockToeplitz(symbols)


def gap_matched_quadruple(rng: np.random.Generator, n: int, d: int) -> Tuple[BlockToeplitz, ...]:
    """C y D copian las alas de A y B con diagonales principales arbitrarias"""
    a = random_block_toeplitz(rng, n, d)
    b = random_block_toeplitz(rng, n, d)
    return a, b, with_new_diagonal(rng, a), with_new_diagonal(rng, b)


def perturb_off_pattern(rng: np.random.Generator, g: BlockGrid, magnitude: float) -> BlockGrid:
    """Perturba un bloque que no está en la primera fila/columna"""
    if g.n < 2:
        raise ValueError("perturbation off the border needs n >= 2")
    blocks = np.array(g.blocks)
    i, j = rng.integers(1, g.n, size=2)
    r, c = rng.integers(0, g.d, size=2)
    blocks[i, j, r, c] += magnitude
    return BlockGrid(blocks)


def normal_slice_symbols(rng: np.random.Generator, n: int, branch: str, lam: complex) -> np.ndarray:
    """Símbolos (2n-1,) de un Toeplitz escalar normal en la rama dada"""
    symbols = np.zeros(2 * n - 1, dtype=np.complex128)
    symbols[n - 1:] = complex_normal(rng, n)
    for j in range(1, n):
        if branch == 'circulant':
            symbols[n - 1 - j] = lam * symbols[n - 1 + n - j]
        else:
            symbols[n - 1 - j] = lam * np.conj(symbols[n - 1 + j])
    return symbols


def normal_slices(rng: np.random.Generator, n: int, d: int,
                  branches: str = 'mixed', lam: Optional[complex] = None) -> DiagonalBlockToeplitz:
    if branches not in BRANCHES:
        raise ValueError(f"unknown branch choice {branches!r}, expected one of {BRANCHES}")
    if lam is not None and abs(abs(lam) - 1.0) > 1e-12:
        raise ValueError(f"lambda must be unimodular, got |lambda| = {abs(lam)}")
    columns = []
    for k in range(d):
        branch = branches if branches != 'mixed' else ('circulant', 'conjugate')[k % 2]
        columns.append(normal_slice_symbols(rng, n, branch, unimodular(rng) if lam is None else lam))
    return DiagonalBlockToeplitz(np.stack(columns, axis=1))


def non_normal(rng: np.random.Generator, n: int, d: int) -> DiagonalBlockToeplitz:
    """
    Rebanadas normales salvo una, cuyo |a_{-1}| difiere de |a_1| y de
    |a_{n-1}|: ninguna de las dos ramas puede cumplirse.
    """
    if n < 2:
        raise ValueError("every 1x1 block Toeplitz matrix with diagonal entries is normal")
    t = normal_slices(rng, n, d)
    symbols = np.array(t.symbols)
    k = int(rng.integers(0, d))
    modulus = max(abs(symbols[n, k]), abs(symbols[2 * n - 2, k])) + 1.0
    symbols[n - 2, k] = modulus * unimodular(rng)
    return DiagonalBlockToeplitz(symbols)


def generate(kind: str, n: int, d: int, seed: int,
             lam: Optional[complex] = None, branches: str = 'mixed') -> List[MatrixFile]:
    """Instancias deterministas para (kind, n, d, seed); el cuádruple produce cuatro archivos"""
    if n < 1 or d < 1:
        raise ValueError(f"n and d must be >= 1, got n={n}, d={d}")
    rng = np.random.default_rng(seed)

    if kind == 'random-toeplitz':
        return [MatrixFile.from_block_toeplitz(random_block_toeplitz(rng, n, d))]
    if kind == 'lower-triangular':
        return [MatrixFile.from_block_toeplitz(lower_triangular(rng, n, d))]
    if kind == 'circulant':
        return [MatrixFile.from_block_toeplitz(circulant(rng, n, d))]
    if kind == 'gap-matched-quadruple':
        return [MatrixFile.from_block_toeplitz(t) for t in gap_matched_quadruple(rng, n, d)]
    if kind == 'normal-slices':
        return [MatrixFile.from_diagonal(normal_slices(rng, n, d, branches, lam))]
    if kind == 'non-normal':
        return [MatrixFile.from_diagonal(non_normal(rng, n, d))]
    raise ValueError(f"unknown kind {kind!r}, expected one of {KINDS}")
