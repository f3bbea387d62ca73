"""
Oráculos densos de fuerza bruta para cada predicado estructurado.

Son deliberadamente ingenuos (bucles explícitos, matrices S y P
materializadas) y no reutilizan las rutas de structures/.
"""

import numpy as np

from config import Config
from structures.blocks import BlockGrid, BlockToeplitz, Tolerance
from structures.errors import ShapeMismatchError, SizeLimitError
from structures.normality import DiagonalBlockToeplitz

DENSE_ND_CAP = Config().dense_nd_cap


def _check_cap(n: int, d: int, cap: int):
    if n * d > cap:
        raise SizeLimitError(f"dense oracle limited to nd <= {cap}, got n={n}, d={d}")


def dense_shift_matrix(n: int, d: int) -> np.ndarray:
    """Identidades d x d en la primera subdiagonal de bloques"""
    s = np.zeros((n * d, n * d), dtype=np.complex128)
    for i in range(1, n):
        for k in range(d):
            s[i * d + k, (i - 1) * d + k] = 1.0
    return s


def perfect_shuffle_matrix(n: int, d: int) -> np.ndarray:
    """P con P[k*n + i, i*d + k] = 1"""
    p = np.zeros((n * d, n * d))
    for i in range(n):
        for k in range(d):
            p[k * n + i, i * d + k] = 1.0
    return p


def dense_expand(t: BlockToeplitz, cap: int = DENSE_ND_CAP) -> np.ndarray:
    n, d = t.n, t.d
    _check_cap(n, d, cap)
    m = np.zeros((n * d, n * d), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            m[i * d:(i + 1) * d, j * d:(j + 1) * d] = t.symbol(j - i)
    return m


def dense_displacement(m: np.ndarray, n: int, d: int) -> np.ndarray:
    """M - S M S* con S materializada"""
    s = dense_shift_matrix(n, d)
    return m - s @ m @ s.conj().T


def naive_block_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Producto por triple bucle"""
    rows, inner = a.shape
    inner2, cols = b.shape
    if inner != inner2:
        raise ShapeMismatchError(f"cannot multiply {a.shape} by {b.shape}")
    out = np.zeros((rows, cols), dtype=np.complex128)
    for i in range(rows):
        for j in range(cols):
            total = 0j
            for k in range(inner):
                total += a[i, k] * b[k, j]
            out[i, j] = total
    return out


def _dense_diagonal_scan(m: np.ndarray, n: int, d: int, threshold: float) -> bool:
    """Cada bloque coincide con su vecino anterior en la diagonal: |M(i, j) - M(i-1, j-1)| <= threshold"""
    for offset in range(1 - n, n):
        i, j = max(0, -offset) + 1, max(0, offset) + 1
        while i < n and j < n:
            block = m[i * d:(i + 1) * d, j * d:(j + 1) * d]
            previous = m[(i - 1) * d:i * d, (j - 1) * d:j * d]
            if np.max(np.abs(block - previous)) > threshold:
                return False
            i, j = i + 1, j + 1
    return True


def diagonal_scan_is_toeplitz(g: BlockGrid, tol: Tolerance = Tolerance()) -> bool:
    n, d = g.n, g.d
    m = np.zeros((n * d, n * d), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            m[i * d:(i + 1) * d, j * d:(j + 1) * d] = g.blocks[i, j]
    return _dense_diagonal_scan(m, n, d, tol.threshold(m))


def _dense_product_threshold(eps: float, *pairs) -> float:
    """eps * max(1, max|A| max|B|, ...) sobre las matrices densas"""
    scale = 1.0
    for left, right in pairs:
        scale = max(scale, float(np.max(np.abs(left))) * float(np.max(np.abs(right))))
    return eps * scale


def dense_product_check(a: BlockToeplitz, b: BlockToeplitz,
                        c: BlockToeplitz, d: BlockToeplitz,
                        mode: str = 'toeplitz', tol: Tolerance = Tolerance(),
                        cap: int = DENSE_ND_CAP) -> bool:
    """Forma AB - CD densamente; mode='toeplitz' escanea diagonales, mode='equal' compara con cero"""
    shapes = {(t.n, t.d) for t in (a, b, c, d)}
    if len(shapes) != 1:
        raise ShapeMismatchError(f"operands disagree in (n, d): {sorted(shapes)}")
    if mode not in ('toeplitz', 'equal'):
        raise ValueError(f"unknown mode {mode!r}")

    n, size = a.n, a.d
    da, db, dc, dd = (dense_expand(t, cap) for t in (a, b, c, d))
    difference = da @ db - dc @ dd
    threshold = _dense_product_threshold(tol.eps, (da, db), (dc, dd))
    if mode == 'equal':
        return float(np.max(np.abs(difference))) <= threshold
    return _dense_diagonal_scan(difference, n, size, threshold)


def dense_shuffle_conjugate(t: DiagonalBlockToeplitz, cap: int = DENSE_ND_CAP) -> np.ndarray:
    """P A P^T con P la permutación perfect shuffle explícita"""
    n, d = t.n, t.d
    _check_cap(n, d, cap)
    m = np.zeros((n * d, n * d), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            for k in range(d):
                m[i * d + k, j * d + k] = t.symbols[j - i + n - 1, k]
    p = perfect_shuffle_matrix(n, d)
    return p @ m @ p.T
