"""
Normalidad de matrices block Toeplitz con entradas diagonales.

El perfect shuffle (índice de bloque i, posición diagonal k) -> (k, i)
convierte A en diag(A'_0, ..., A'_{d-1}), cada A'_k un Toeplitz escalar
n x n. A es normal si y solo si cada rebanada lo es, y un Toeplitz
escalar es normal si y solo si, con |λ| = 1:

    circulante:  a_{-j} = λ a_{n-j}        (a = λ b̂)
    conjugado:   a_{-j} = λ conj(a_j)      (a = λ conj(b))

La rama conjugada se implementa sin la inversión de índices: la forma
con b̂ invertido no coincide con el oráculo del conmutador para n >= 3
(ver reversed_conjugate_identity_holds y su test).
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger

from structures.blocks import BlockToeplitz, Tolerance, frozen_array, max_abs
from structures.errors import NotDiagonalError, ShapeMismatchError


@dataclass(frozen=True)
class ScalarToeplitz:
    """Toeplitz n x n con símbolos a_{-(n-1)} .. a_{n-1} (forma (2n-1,))"""
    symbols: np.ndarray

    def __post_init__(self):
        arr = frozen_array(self.symbols, 1, "ScalarToeplitz symbols")
        if arr.shape[0] % 2 == 0:
            raise ShapeMismatchError(f"ScalarToeplitz needs 2n-1 symbols, got {arr.shape[0]}")
        object.__setattr__(self, 'symbols', arr)

    @property
    def n(self) -> int:
        return (self.symbols.shape[0] + 1) // 2

    def symbol(self, k: int) -> complex:
        return complex(self.symbols[k + self.n - 1])

    @property
    def a(self) -> np.ndarray:
        """(0, a_{-1}, ..., a_{1-n})"""
        return np.concatenate([[0], self.symbols[:self.n - 1][::-1]])

    @property
    def b(self) -> np.ndarray:
        """(0, a_1, ..., a_{n-1})"""
        return np.concatenate([[0], self.symbols[self.n:]])

    @property
    def a_hat(self) -> np.ndarray:
        return _reverse_tail(self.a)

    @property
    def b_hat(self) -> np.ndarray:
        return _reverse_tail(self.b)

    def to_dense(self) -> np.ndarray:
        n = self.n
        index = np.arange(n)[None, :] - np.arange(n)[:, None] + n - 1
        return self.symbols[index]


def _reverse_tail(v: np.ndarray) -> np.ndarray:
    return np.concatenate([v[:1], v[1:][::-1]])


@dataclass(frozen=True)
class DiagonalBlockToeplitz:
    """Block Toeplitz con símbolos diagonales; symbols tiene forma (2n-1, d)"""
    symbols: np.ndarray

    def __post_init__(self):
        arr = frozen_array(self.symbols, 2, "DiagonalBlockToeplitz symbols")
        if arr.shape[0] % 2 == 0 or arr.shape[1] < 1:
            raise ShapeMismatchError(f"DiagonalBlockToeplitz needs (2n-1, d) symbols, got {arr.shape}")
        object.__setattr__(self, 'symbols', arr)

    @property
    def n(self) -> int:
        return (self.symbols.shape[0] + 1) // 2

    @property
    def d(self) -> int:
        return self.symbols.shape[1]

    def to_block_toeplitz(self) -> BlockToeplitz:
        blocks = np.zeros(self.symbols.shape + (self.d,), dtype=np.complex128)
        slot = np.arange(self.d)
        blocks[:, slot, slot] = self.symbols
        return BlockToeplitz(blocks)

    @classmethod
    def from_block_toeplitz(cls, t: BlockToeplitz, tol: Tolerance = Tolerance()) -> 'DiagonalBlockToeplitz':
        diagonals = np.diagonal(t.symbols, axis1=1, axis2=2)
        off = t.symbols - diagonals[:, :, None] * np.eye(t.d)
        if not tol.vanishes(off, t.symbols):
            raise NotDiagonalError(f"symbols have off-diagonal entries up to {max_abs(off):.3e}")
        return cls(diagonals)


class Classification(str, Enum):
    CIRCULANT = 'circulant-type'
    CONJUGATE = 'conjugate-type'
    BOTH = 'both'
    NOT_NORMAL = 'not-normal'


@dataclass(frozen=True)
class SliceVerdict:
    slice_index: int
    classification: Classification
    lam: Optional[complex] = None
    # λ de la rama conjugada cuando ambas ramas se cumplen con λ distintos
    conjugate_lam: Optional[complex] = None

    @property
    def normal(self) -> bool:
        return self.classification != Classification.NOT_NORMAL


@dataclass(frozen=True)
class NormalityVerdict:
    slices: Tuple[SliceVerdict, ...]

    @property
    def overall(self) -> bool:
        return all(s.normal for s in self.slices)

    @property
    def lambdas(self) -> List[Optional[complex]]:
        return [s.lam for s in self.slices]


def shuffle(t: DiagonalBlockToeplitz) -> List[ScalarToeplitz]:
    """Rebanada k: Toeplitz escalar con a_{m,k} = (T_m)[k, k]"""
    return [ScalarToeplitz(t.symbols[:, k]) for k in range(t.d)]


def unshuffle(slices: List[ScalarToeplitz]) -> DiagonalBlockToeplitz:
    if not slices:
        raise ShapeMismatchError("unshuffle needs at least one slice")
    sizes = {s.n for s in slices}
    if len(sizes) != 1:
        raise ShapeMismatchError(f"slices disagree in n: {sorted(sizes)}")
    return DiagonalBlockToeplitz(np.stack([s.symbols for s in slices], axis=1))


def _branch_lambda(target: np.ndarray, reference: np.ndarray, tol: Tolerance) -> Tuple[Optional[complex], float]:
    """
    Busca λ unimodular con target = λ reference, pivotando en el primer
    j >= 1 con |reference_j| > tol. Devuelve (λ, residuo) o (None, residuo).
    """
    threshold = tol.threshold(target, reference)
    pivots = np.flatnonzero(np.abs(reference[1:]) > threshold)
    if pivots.size == 0:
        residual = max_abs(target)
        return (1.0 + 0j if residual <= threshold else None), residual

    j = pivots[0] + 1
    if abs(reference[j]) < 1e3 * threshold:
        logger.warning(f"Lambda pivot |{abs(reference[j]):.3e}| at j={j} is close to the tolerance")
    lam = complex(target[j] / reference[j])
    residual = max_abs(target - lam * reference)
    if residual > threshold or abs(abs(lam) - 1.0) > tol.eps:
        return None, residual
    return lam, residual


def circulant_identity(t: ScalarToeplitz, tol: Tolerance = Tolerance()) -> Optional[complex]:
    """λ con a = λ b̂, o None"""
    return _branch_lambda(t.a, t.b_hat, tol)[0]


def conjugate_identity(t: ScalarToeplitz, tol: Tolerance = Tolerance()) -> Optional[complex]:
    """λ con a = λ conj(b), o None"""
    return _branch_lambda(t.a, t.b.conj(), tol)[0]


def reversed_conjugate_identity_holds(t: ScalarToeplitz, tol: Tolerance = Tolerance()) -> bool:
    """Forma a = λ conj(b̂) (inversión y luego conjugación); no caracteriza normalidad"""
    return _branch_lambda(t.a, t.b_hat.conj(), tol)[0] is not None


def scalar_normal_classify(t: ScalarToeplitz, tol: Tolerance = Tolerance(), slice_index: int = 0) -> SliceVerdict:
    if max_abs(t.a, t.b) <= tol.threshold(t.a, t.b):
        return SliceVerdict(slice_index, Classification.BOTH, 1.0 + 0j)

    circulant = circulant_identity(t, tol)
    conjugate = conjugate_identity(t, tol)
    if circulant is not None and conjugate is not None:
        verdict = SliceVerdict(slice_index, Classification.BOTH, circulant, conjugate)
    elif circulant is not None:
        verdict = SliceVerdict(slice_index, Classification.CIRCULANT, circulant)
    elif conjugate is not None:
        verdict = SliceVerdict(slice_index, Classification.CONJUGATE, conjugate)
    else:
        verdict = SliceVerdict(slice_index, Classification.NOT_NORMAL)

    logger.debug(f"Slice {slice_index}: {verdict.classification.value} (lambda={verdict.lam})")
    return verdict


def block_normal_classify(t: DiagonalBlockToeplitz, tol: Tolerance = Tolerance()) -> NormalityVerdict:
    return NormalityVerdict(tuple(
        scalar_normal_classify(s, tol, k) for k, s in enumerate(shuffle(t))
    ))


def slice_normal_residual(t: ScalarToeplitz, verdict: SliceVerdict) -> float:
    """Desviación máxima de la identidad de la rama reportada"""
    if verdict.classification == Classification.NOT_NORMAL:
        return float('nan')
    if verdict.classification == Classification.CONJUGATE:
        return max_abs(t.a - verdict.lam * t.b.conj())
    return max_abs(t.a - verdict.lam * t.b_hat)


def normal_oracle(m: np.ndarray, tol: Tolerance = Tolerance()) -> bool:
    """max |MM* - M*M| <= eps * scale(M)^2"""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeMismatchError(f"normal_oracle needs a square matrix, got {m.shape}")
    adj = m.conj().T
    return max_abs(m @ adj - adj @ m) <= tol.eps * tol.scale(m) ** 2
