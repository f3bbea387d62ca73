"""
Criterios para productos de matrices block Toeplitz sin formar el
producto completo:

    AB - CD es block Toeplitz  <=>  Ã-B̃+ - Ã+B̃-  =  C̃-D̃+ - C̃+D̃-
    AB = CD                    <=>  lo anterior, Y = Z e Y' = Z'

Con tolerancia, "Toeplitz" acota |M(i, j) - M(i-1, j-1)| y "igual" acota
|M| para M = AB - CD, ambos contra eps * product_scale.

Todo se evalúa con costo O(n^2 d^3); nunca se multiplican grids completos.
"""

from dataclasses import dataclass

import numpy as np
from loguru import logger

from structures.blocks import (
    BlockColumn, BlockGrid, BlockRow, BlockToeplitz, Tolerance,
    check_same_shape, expand, flatten, max_abs, unflatten,
)
from structures.displacement import DisplacementFactors, reconstruct


@dataclass(frozen=True)
class WingSet:
    """Vectores con bloque cero en la componente 0"""
    minus_col: BlockColumn  # (0, A_{-1}, ..., A_{-(n-1)})
    plus_col: BlockColumn  # (0, A_{n-1}, ..., A_1)
    plus_row: BlockRow  # (0, B_1, ..., B_{n-1})
    minus_row: BlockRow  # (0, B_{1-n}, ..., B_{-1})


@dataclass(frozen=True)
class WingGap:
    """Ã-B̃+ - Ã+B̃- en forma factorizada (rango por bloques <= 2)"""
    minus_col: BlockColumn
    plus_col: BlockColumn
    plus_row: BlockRow
    minus_row: BlockRow

    @property
    def n(self) -> int:
        return self.minus_col.n

    @property
    def d(self) -> int:
        return self.minus_col.d

    def left(self) -> np.ndarray:
        """[Ã- | -Ã+] como matriz nd x 2d"""
        return np.hstack([self.minus_col.stacked(), -self.plus_col.stacked()])

    def right(self) -> np.ndarray:
        """[B̃+ ; B̃-] como matriz 2d x nd"""
        return np.vstack([self.plus_row.stacked(), self.minus_row.stacked()])

    def dense(self) -> np.ndarray:
        return self.left() @ self.right()

    def materialize(self) -> BlockGrid:
        return unflatten(self.dense(), self.n, self.d)


@dataclass(frozen=True)
class ProductDisplacement:
    """D(AB) = Y P+ + P+* Y'* + gap"""
    y: BlockColumn
    yprime: BlockColumn
    gap: WingGap

    def materialize(self) -> BlockGrid:
        return DisplacementFactors(self.y, self.yprime).to_displacement() + self.gap.materialize()


def wings(t: BlockToeplitz) -> WingSet:
    n, d = t.n, t.d
    inner = np.arange(1, n)

    def bordered(indices):
        entries = np.zeros((n, d, d), dtype=np.complex128)
        entries[1:] = t.symbols[indices + n - 1]
        return entries

    return WingSet(
        minus_col=BlockColumn(bordered(-inner)),
        plus_col=BlockColumn(bordered(n - inner)),
        plus_row=BlockRow(bordered(inner)),
        minus_row=BlockRow(bordered(inner - n)),
    )


def wing_gap(a: BlockToeplitz, b: BlockToeplitz) -> WingGap:
    check_same_shape(a, b)
    wa, wb = wings(a), wings(b)
    return WingGap(wa.minus_col, wa.plus_col, wb.plus_row, wb.minus_row)


def product_first_column(a: BlockToeplitz, b: BlockToeplitz) -> BlockColumn:
    """Primera columna de bloques de AB: sum_k A_{k-i} B_{-k}"""
    n, d = check_same_shape(a, b)
    b_column = b.symbols[n - 1::-1].reshape(n * d, d)
    return BlockColumn((flatten(expand(a)) @ b_column).reshape(n, d, d))


def product_first_row(a: BlockToeplitz, b: BlockToeplitz) -> BlockRow:
    """Primera fila de bloques de AB: sum_k A_k B_{j-k}"""
    n, d = check_same_shape(a, b)
    a_row = np.concatenate(list(a.symbols[n - 1:]), axis=1)
    row = a_row @ flatten(expand(b))
    return BlockRow(row.reshape(d, n, d).transpose(1, 0, 2))


def product_displacement(a: BlockToeplitz, b: BlockToeplitz) -> ProductDisplacement:
    n, d = check_same_shape(a, b)
    # D(AB) coincide con AB en la primera fila y columna de bloques
    y = product_first_column(a, b)
    yprime = np.zeros((n, d, d), dtype=np.complex128)
    yprime[1:] = product_first_row(a, b).entries[1:].conj().transpose(0, 2, 1)
    return ProductDisplacement(y, BlockColumn(yprime), wing_gap(a, b))


def product_scale(*pairs) -> float:
    """max(1, max|A| max|B|, ...) sobre los pares (A, B) de los productos"""
    return max([1.0] + [max_abs(a.symbols) * max_abs(b.symbols) for a, b in pairs])


def gap_residual(a: BlockToeplitz, b: BlockToeplitz,
                 c: BlockToeplitz, d: BlockToeplitz) -> float:
    """
    max |(Ã-B̃+ - Ã+B̃-) - (C̃-D̃+ - C̃+D̃-)|, que es el máximo de
    |M(i, j) - M(i-1, j-1)| sobre i, j >= 1 para M = AB - CD.
    """
    check_same_shape(a, b, c, d)
    ab, cd = wing_gap(a, b), wing_gap(c, d)
    left = np.hstack([ab.left(), -cd.left()])
    right = np.vstack([ab.right(), cd.right()])
    return max_abs(left @ right)


def product_difference(a: BlockToeplitz, b: BlockToeplitz,
                       c: BlockToeplitz, d: BlockToeplitz) -> BlockGrid:
    """AB - CD reconstruida desde D(AB) - D(CD), en O(n^2 d^3)"""
    n, size = check_same_shape(a, b, c, d)
    first = product_displacement(a, b)
    second = product_displacement(c, d)
    edges = DisplacementFactors(
        BlockColumn(first.y.entries - second.y.entries),
        BlockColumn(first.yprime.entries - second.yprime.entries),
    ).to_displacement()
    left = np.hstack([first.gap.left(), -second.gap.left()])
    right = np.vstack([first.gap.right(), second.gap.right()])
    return reconstruct(edges + unflatten(left @ right, n, size))


def difference_residual(a: BlockToeplitz, b: BlockToeplitz,
                        c: BlockToeplitz, d: BlockToeplitz) -> float:
    """max |AB - CD|"""
    return max_abs(product_difference(a, b, c, d).blocks)


def difference_is_toeplitz(a: BlockToeplitz, b: BlockToeplitz,
                           c: BlockToeplitz, d: BlockToeplitz,
                           tol: Tolerance = Tolerance()) -> bool:
    residual = gap_residual(a, b, c, d)
    threshold = tol.eps * product_scale((a, b), (c, d))
    logger.debug(f"Wing gap residual {residual:.3e} (threshold {threshold:.3e})")
    return residual <= threshold


def product_is_toeplitz(a: BlockToeplitz, b: BlockToeplitz, tol: Tolerance = Tolerance()) -> bool:
    zero = BlockToeplitz.zeros(a.n, a.d)
    return difference_is_toeplitz(a, b, zero, zero, tol)


def products_equal(a: BlockToeplitz, b: BlockToeplitz,
                   c: BlockToeplitz, d: BlockToeplitz,
                   tol: Tolerance = Tolerance()) -> bool:
    """Igualdad entrada a entrada: max |AB - CD| <= eps * product_scale"""
    residual = difference_residual(a, b, c, d)
    threshold = tol.eps * product_scale((a, b), (c, d))
    logger.debug(f"AB - CD residual {residual:.3e} (threshold {threshold:.3e})")
    return residual <= threshold


def commutator_is_toeplitz(a: BlockToeplitz, b: BlockToeplitz, tol: Tolerance = Tolerance()) -> bool:
    return difference_is_toeplitz(a, b, b, a, tol)


def commute(a: BlockToeplitz, b: BlockToeplitz, tol: Tolerance = Tolerance()) -> bool:
    return products_equal(a, b, b, a, tol)
