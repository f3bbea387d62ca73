"""
Aritmética de bloques complejos y conversiones entre representaciones
estructuradas (block Toeplitz) y densas (nd x nd).

Convención de índices: el bloque (i, j) de un block Toeplitz es T_{j-i};
las superdiagonales llevan índices positivos.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from structures.errors import NonFiniteError, ShapeMismatchError


def frozen_array(values, ndim: int, what: str) -> np.ndarray:
    """Copia a complex128 de solo lectura, rechazando NaN/Inf"""
    arr = np.array(values, dtype=np.complex128, copy=True)
    if arr.ndim != ndim:
        raise ShapeMismatchError(f"{what} must have {ndim} dimensions, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{what} contains non-finite entries")
    arr.flags.writeable = False
    return arr


def max_abs(*arrays) -> float:
    """Magnitud máxima de entrada entre varios arrays (0 si están vacíos)"""
    return max((float(np.max(np.abs(a))) if np.size(a) else 0.0 for a in arrays), default=0.0)


@dataclass(frozen=True)
class Tolerance:
    eps: float = 1e-9

    def __post_init__(self):
        if not self.eps >= 0:
            raise ValueError(f"tolerance must be >= 0, got {self.eps}")

    @staticmethod
    def scale(*operands) -> float:
        return max(1.0, max_abs(*operands))

    def threshold(self, *operands) -> float:
        return self.eps * self.scale(*operands)

    def vanishes(self, residual, *operands) -> bool:
        """True si max|residual| <= eps * scale(operands)"""
        return max_abs(residual) <= self.threshold(*operands)

    def close(self, x, y, *operands) -> bool:
        return self.vanishes(np.asarray(x) - np.asarray(y), x, y, *operands)


@dataclass(frozen=True)
class BlockGrid:
    """Matriz n x n de bloques d x d, almacenada como array (n, n, d, d)"""
    blocks: np.ndarray

    def __post_init__(self):
        arr = frozen_array(self.blocks, 4, "BlockGrid")
        n, n2, d, d2 = arr.shape
        if n != n2 or d != d2 or n < 1 or d < 1:
            raise ShapeMismatchError(f"BlockGrid needs shape (n, n, d, d) with n, d >= 1, got {arr.shape}")
        object.__setattr__(self, 'blocks', arr)

    @property
    def n(self) -> int:
        return self.blocks.shape[0]

    @property
    def d(self) -> int:
        return self.blocks.shape[2]

    def block(self, i: int, j: int) -> np.ndarray:
        return self.blocks[i, j]

    @classmethod
    def zeros(cls, n: int, d: int) -> 'BlockGrid':
        return cls(np.zeros((n, n, d, d), dtype=np.complex128))

    @classmethod
    def identity(cls, n: int, d: int) -> 'BlockGrid':
        blocks = np.zeros((n, n, d, d), dtype=np.complex128)
        blocks[np.arange(n), np.arange(n)] = np.eye(d)
        return cls(blocks)

    def __add__(self, other: 'BlockGrid') -> 'BlockGrid':
        check_same_shape(self, other)
        return BlockGrid(self.blocks + other.blocks)

    def __sub__(self, other: 'BlockGrid') -> 'BlockGrid':
        check_same_shape(self, other)
        return BlockGrid(self.blocks - other.blocks)


@dataclass(frozen=True)
class BlockToeplitz:
    """
    Block Toeplitz n x n con símbolos T_{-(n-1)} .. T_{n-1}.
    symbols tiene forma (2n-1, d, d); T_k vive en la fila k + n - 1.
    """
    symbols: np.ndarray

    def __post_init__(self):
        arr = frozen_array(self.symbols, 3, "BlockToeplitz symbols")
        count, d, d2 = arr.shape
        if count % 2 == 0 or d != d2 or d < 1:
            raise ShapeMismatchError(f"BlockToeplitz needs (2n-1, d, d) symbols, got {arr.shape}")
        object.__setattr__(self, 'symbols', arr)

    @property
    def n(self) -> int:
        return (self.symbols.shape[0] + 1) // 2

    @property
    def d(self) -> int:
        return self.symbols.shape[1]

    def symbol(self, k: int) -> np.ndarray:
        if not -self.n < k < self.n:
            raise IndexError(f"symbol index {k} outside -({self.n - 1})..{self.n - 1}")
        return self.symbols[k + self.n - 1]

    @classmethod
    def from_symbols(cls, symbols: dict) -> 'BlockToeplitz':
        """Construye desde un dict k -> bloque d x d"""
        n = (len(symbols) + 1) // 2
        missing = [k for k in range(1 - n, n) if k not in symbols]
        if len(symbols) % 2 == 0 or missing:
            raise ShapeMismatchError(f"symbol keys must cover -(n-1)..n-1, missing {missing}")
        return cls(np.stack([np.asarray(symbols[k], dtype=np.complex128) for k in range(1 - n, n)]))

    @classmethod
    def zeros(cls, n: int, d: int) -> 'BlockToeplitz':
        return cls(np.zeros((2 * n - 1, d, d), dtype=np.complex128))

    @classmethod
    def identity(cls, n: int, d: int) -> 'BlockToeplitz':
        symbols = np.zeros((2 * n - 1, d, d), dtype=np.complex128)
        symbols[n - 1] = np.eye(d)
        return cls(symbols)

    def __add__(self, other: 'BlockToeplitz') -> 'BlockToeplitz':
        check_same_shape(self, other)
        return BlockToeplitz(self.symbols + other.symbols)

    def __sub__(self, other: 'BlockToeplitz') -> 'BlockToeplitz':
        check_same_shape(self, other)
        return BlockToeplitz(self.symbols - other.symbols)

    def scaled(self, factor: complex) -> 'BlockToeplitz':
        return BlockToeplitz(self.symbols * factor)


@dataclass(frozen=True)
class BlockColumn:
    """Vector columna de n bloques (forma (n, d, d))"""
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'entries', _vector(self.entries, "BlockColumn"))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def d(self) -> int:
        return self.entries.shape[1]

    def stacked(self) -> np.ndarray:
        """Matriz densa nd x d"""
        return self.entries.reshape(self.n * self.d, self.d)


@dataclass(frozen=True)
class BlockRow:
    """Vector fila de n bloques (forma (n, d, d))"""
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'entries', _vector(self.entries, "BlockRow"))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def d(self) -> int:
        return self.entries.shape[1]

    def stacked(self) -> np.ndarray:
        """Matriz densa d x nd"""
        return np.concatenate(list(self.entries), axis=1)


def _vector(values, what: str) -> np.ndarray:
    arr = frozen_array(values, 3, what)
    if arr.shape[1] != arr.shape[2] or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeMismatchError(f"{what} needs shape (n, d, d), got {arr.shape}")
    return arr


def check_same_shape(*operands) -> Tuple[int, int]:
    """Verifica que todos los operandos compartan (n, d) y lo devuelve"""
    shapes = {(op.n, op.d) for op in operands}
    if len(shapes) != 1:
        raise ShapeMismatchError(f"operands disagree in (n, d): {sorted(shapes)}")
    return operands[0].n, operands[0].d


def block_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Producto de dos bloques d x d"""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise ShapeMismatchError(f"block_mul needs equal square blocks, got {a.shape} and {b.shape}")
    return a @ b


def grid_mul(g1: BlockGrid, g2: BlockGrid) -> BlockGrid:
    """Producto por bloques: (i, j) = sum_k g1(i, k) g2(k, j)"""
    check_same_shape(g1, g2)
    return BlockGrid(np.einsum('ikab,kjbc->ijac', g1.blocks, g2.blocks))


def adjoint(g: BlockGrid) -> BlockGrid:
    """Bloque (i, j) del resultado = conjugada transpuesta del bloque (j, i)"""
    return BlockGrid(g.blocks.transpose(1, 0, 3, 2).conj())


def expand(t: BlockToeplitz) -> BlockGrid:
    """Coloca T_{j-i} en la posición (i, j)"""
    n = t.n
    index = np.arange(n)[None, :] - np.arange(n)[:, None] + n - 1
    return BlockGrid(t.symbols[index])


def flatten(g: BlockGrid) -> np.ndarray:
    """Matriz densa nd x nd"""
    n, d = g.n, g.d
    return g.blocks.transpose(0, 2, 1, 3).reshape(n * d, n * d).copy()


def unflatten(m: np.ndarray, n: int, d: int) -> BlockGrid:
    m = np.asarray(m)
    if m.shape != (n * d, n * d):
        raise ShapeMismatchError(f"expected a {n * d}x{n * d} matrix for n={n}, d={d}, got {m.shape}")
    return BlockGrid(m.reshape(n, d, n, d).transpose(0, 2, 1, 3))


def split_diagonal(t: BlockToeplitz) -> Tuple[BlockToeplitz, BlockToeplitz]:
    """Separa A = Ã + Ã0: parte sin diagonal principal y parte diagonal"""
    off = np.array(t.symbols)
    off[t.n - 1] = 0
    diag = np.zeros_like(off)
    diag[t.n - 1] = t.symbols[t.n - 1]
    return BlockToeplitz(off), BlockToeplitz(diag)


def is_block_diagonal(t: BlockToeplitz, tol: Tolerance = Tolerance()) -> bool:
    """True si solo T_0 es no nulo (dentro de tol)"""
    off, _ = split_diagonal(t)
    return tol.vanishes(off.symbols, t.symbols)
