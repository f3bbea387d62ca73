"""
Formato de archivo JSON (UTF-8) para matrices:

    {"kind": "dense" | "block-toeplitz" | "diagonal-block-toeplitz",
     "n": int >= 1, "d": int >= 1, "payload": ...}

Los complejos son pares [re, im]. La forma canónica ordena las claves de
símbolos numéricamente y escribe floats con precisión de ida y vuelta.
"""

import json
import math
from functools import cached_property
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, StrictInt, ValidationError, model_validator

from config import Config
from structures.blocks import BlockGrid, BlockToeplitz, Tolerance, expand, max_abs
from structures.displacement import to_block_toeplitz
from structures.errors import MatrixFileError, NotToeplitzError, SizeLimitError
from structures.normality import DiagonalBlockToeplitz

STRUCTURED_ND_CAP = Config().structured_nd_cap


def _decode_complex(value: Any, path: str) -> complex:
    if (not isinstance(value, list) or len(value) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)):
        raise MatrixFileError("expected a [re, im] pair of numbers", path)
    if not all(math.isfinite(x) for x in value):
        raise MatrixFileError("non-finite number", path)
    return complex(value[0], value[1])


def _decode_array(value: Any, shape: tuple, path: str) -> np.ndarray:
    """Recorre listas anidadas con la forma dada; las hojas son pares [re, im]"""
    if not shape:
        return np.complex128(_decode_complex(value, path))
    if not isinstance(value, list) or len(value) != shape[0]:
        raise MatrixFileError(f"expected a list of length {shape[0]}", path)
    return np.array([_decode_array(item, shape[1:], f"{path}[{i}]") for i, item in enumerate(value)],
                    dtype=np.complex128).reshape(shape)


def _decode_symbols(value: Any, n: int, tail: tuple) -> np.ndarray:
    if not isinstance(value, dict):
        raise MatrixFileError("expected an object keyed by symbol index", "payload")
    expected = [str(k) for k in range(1 - n, n)]
    missing = [k for k in expected if k not in value]
    if missing:
        raise MatrixFileError(f"missing symbol key {missing[0]!r}", "payload")
    unexpected = sorted(set(value) - set(expected))
    if unexpected:
        raise MatrixFileError(f"unexpected symbol key {unexpected[0]!r}", "payload")
    return np.stack([_decode_array(value[k], tail, f'payload["{k}"]') for k in expected])


def _encode(values: np.ndarray) -> Any:
    if values.ndim == 0:
        z = complex(values)
        return [float(z.real), float(z.imag)]
    return [_encode(v) for v in values]


class MatrixFile(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)

    kind: Literal['dense', 'block-toeplitz', 'diagonal-block-toeplitz']
    n: StrictInt = Field(ge=1)
    d: StrictInt = Field(ge=1)
    payload: Any

    @model_validator(mode='after')
    def _check_payload(self) -> 'MatrixFile':
        self._decode()
        return self

    def _decode(self) -> np.ndarray:
        n, d = self.n, self.d
        if self.kind == 'dense':
            return _decode_array(self.payload, (n, n, d, d), 'payload')
        if self.kind == 'block-toeplitz':
            return _decode_symbols(self.payload, n, (d, d))
        return _decode_symbols(self.payload, n, (d,))

    @cached_property
    def array(self) -> np.ndarray:
        """(n, n, d, d) para dense, (2n-1, d, d) o (2n-1, d) para los símbolos"""
        return self._decode()

    @classmethod
    def from_grid(cls, g: BlockGrid) -> 'MatrixFile':
        return cls(kind='dense', n=g.n, d=g.d, payload=_encode(g.blocks))

    @classmethod
    def from_block_toeplitz(cls, t: BlockToeplitz) -> 'MatrixFile':
        payload = {str(k): _encode(t.symbol(k)) for k in range(1 - t.n, t.n)}
        return cls(kind='block-toeplitz', n=t.n, d=t.d, payload=payload)

    @classmethod
    def from_diagonal(cls, t: DiagonalBlockToeplitz) -> 'MatrixFile':
        payload = {str(k): _encode(t.symbols[k + t.n - 1]) for k in range(1 - t.n, t.n)}
        return cls(kind='diagonal-block-toeplitz', n=t.n, d=t.d, payload=payload)

    def to_grid(self) -> BlockGrid:
        if self.kind == 'dense':
            return BlockGrid(self.array)
        return expand(self.to_block_toeplitz())

    def to_block_toeplitz(self, tol: Tolerance = Tolerance()) -> BlockToeplitz:
        if self.kind == 'block-toeplitz':
            return BlockToeplitz(self.array)
        if self.kind == 'diagonal-block-toeplitz':
            return DiagonalBlockToeplitz(self.array).to_block_toeplitz()
        t = to_block_toeplitz(BlockGrid(self.array), tol)
        if t is None:
            raise NotToeplitzError("dense operand is not block Toeplitz; the criteria need block Toeplitz operands")
        return t

    def to_diagonal(self, tol: Tolerance = Tolerance()) -> DiagonalBlockToeplitz:
        if self.kind == 'diagonal-block-toeplitz':
            return DiagonalBlockToeplitz(self.array)
        return DiagonalBlockToeplitz.from_block_toeplitz(self.to_block_toeplitz(tol), tol)

    def scale(self) -> float:
        return max(1.0, max_abs(self.array))


def parse(text: str, cap: int = STRUCTURED_ND_CAP) -> MatrixFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise MatrixFileError(e.msg, f"line {e.lineno} column {e.colno}") from e
    if not isinstance(doc, dict):
        raise MatrixFileError("top level must be an object", "$")

    n, d = doc.get('n'), doc.get('d')
    if isinstance(n, int) and isinstance(d, int) and n * d > cap:
        raise SizeLimitError(f"n*d = {n * d} exceeds the limit of {cap}")

    try:
        return MatrixFile.model_validate(doc)
    except ValidationError as e:
        error = e.errors()[0]
        cause = error.get('ctx', {}).get('error')
        if isinstance(cause, MatrixFileError):
            raise cause from e
        loc = ''.join(f"[{part}]" if isinstance(part, int) else f".{part}" for part in error['loc'])
        raise MatrixFileError(error['msg'], loc.lstrip('.') or '$') from e


def serialize(matrix: MatrixFile) -> str:
    """Forma canónica: una línea por símbolo (o por fila de bloques)"""
    lines = [
        '{',
        f'  "kind": {json.dumps(matrix.kind)},',
        f'  "n": {matrix.n},',
        f'  "d": {matrix.d},',
    ]
    if matrix.kind == 'dense':
        items = [f'    {json.dumps(row)}' for row in _encode(matrix.array)]
        lines += ['  "payload": [', ',\n'.join(items), '  ]']
    else:
        n = matrix.n
        items = [f'    "{k}": {json.dumps(_encode(matrix.array[k + n - 1]))}' for k in range(1 - n, n)]
        lines += ['  "payload": {', ',\n'.join(items), '  }']
    lines.append('}')
    return '\n'.join(lines) + '\n'


def load(path: str, cap: int = STRUCTURED_ND_CAP) -> MatrixFile:
    with open(path, 'r', encoding='utf-8') as f:
        return parse(f.read(), cap)


def save(matrix: MatrixFile, path: str):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(serialize(matrix))
