"""
Operador de desplazamiento D(M) = M - S M S*, su inversa y la
caracterización de matrices block Toeplitz por rango de desplazamiento.

S nunca se materializa: S M S* es un corrimiento de índices.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from loguru import logger

from structures.blocks import (
    BlockColumn, BlockGrid, BlockToeplitz, Tolerance, flatten, max_abs,
)
from structures.errors import ShapeMismatchError


@dataclass(frozen=True)
class DisplacementFactors:
    """D(A) = X P+ + P+* X'*, con X'_0 = 0"""
    x: BlockColumn
    xprime: BlockColumn

    def __post_init__(self):
        if self.x.entries.shape != self.xprime.entries.shape:
            raise ShapeMismatchError(
                f"X and X' must have the same shape, got {self.x.entries.shape} and {self.xprime.entries.shape}")
        if np.any(self.xprime.entries[0] != 0):
            raise ShapeMismatchError("X'_0 must be the zero block")

    def to_displacement(self) -> BlockGrid:
        """Materializa X P+ + P+* X'*"""
        n, d = self.x.n, self.x.d
        blocks = np.zeros((n, n, d, d), dtype=np.complex128)
        blocks[:, 0] = self.x.entries
        blocks[0, 1:] = self.xprime.entries[1:].conj().transpose(0, 2, 1)
        return BlockGrid(blocks)

    def to_toeplitz(self) -> BlockToeplitz:
        """Símbolos T_{-i} = X_i, T_j = X'_j*"""
        symbols = np.concatenate([
            self.x.entries[::-1],
            self.xprime.entries[1:].conj().transpose(0, 2, 1),
        ])
        return BlockToeplitz(symbols)


def shift_down(g: BlockGrid) -> BlockGrid:
    """S g S*: bloque (i, j) <- g(i-1, j-1), ceros en la primera fila/columna"""
    blocks = np.zeros_like(g.blocks)
    blocks[1:, 1:] = g.blocks[:-1, :-1]
    return BlockGrid(blocks)


def displacement(g: BlockGrid) -> BlockGrid:
    return g - shift_down(g)


def reconstruct(dg: BlockGrid) -> BlockGrid:
    """M = sum_k S^k D(M) S^k* (S^n = 0), fila a fila: M(i, j) = D(i, j) + M(i-1, j-1)"""
    blocks = np.array(dg.blocks)
    for i in range(1, dg.n):
        blocks[i, 1:] += blocks[i - 1, :-1]
    return BlockGrid(blocks)


def interior_residual(g: BlockGrid) -> float:
    """Máximo |D(g)| fuera de la primera fila y columna de bloques"""
    return max_abs(displacement(g).blocks[1:, 1:])


def toeplitz_factor(g: BlockGrid, tol: Tolerance = Tolerance()) -> Optional[DisplacementFactors]:
    """
    Devuelve (X, X') si D(g) se anula fuera del borde, None en otro caso.
    X_i = D(g)(i, 0); X'_0 = 0; X'_j = D(g)(0, j)* para j >= 1.
    """
    dg = displacement(g)
    residual = max_abs(dg.blocks[1:, 1:])
    threshold = tol.threshold(g.blocks)
    if residual > threshold:
        logger.debug(f"Not block Toeplitz: interior displacement {residual:.3e} > {threshold:.3e}")
        return None

    xprime = np.zeros((g.n, g.d, g.d), dtype=np.complex128)
    xprime[1:] = dg.blocks[0, 1:].conj().transpose(0, 2, 1)
    return DisplacementFactors(BlockColumn(dg.blocks[:, 0]), BlockColumn(xprime))


def is_block_toeplitz(g: BlockGrid, tol: Tolerance = Tolerance()) -> bool:
    return toeplitz_factor(g, tol) is not None


def to_block_toeplitz(g: BlockGrid, tol: Tolerance = Tolerance()) -> Optional[BlockToeplitz]:
    """Símbolos de g si es block Toeplitz (vía sus factores de desplazamiento)"""
    factors = toeplitz_factor(g, tol)
    return factors.to_toeplitz() if factors is not None else None


def displacement_rank(g: BlockGrid, tol: Tolerance = Tolerance()) -> int:
    """Rango numérico de D(g); <= 2d para todo block Toeplitz"""
    singular = np.linalg.svd(flatten(displacement(g)), compute_uv=False)
    return int(np.sum(singular > tol.threshold(g.blocks)))
