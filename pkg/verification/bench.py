"""
Benchmark: criterio estructurado (alas) contra producto denso + escaneo de
diagonales, sobre el mismo cuádruple con alas coincidentes.
"""

import time
from dataclasses import dataclass

import numpy as np
import pandas as pd
from loguru import logger

from structures.blocks import Tolerance
from structures.errors import SizeLimitError
from structures.products import difference_is_toeplitz
from verification.generators import gap_matched_quadruple
from verification.oracle import DENSE_ND_CAP, dense_product_check


@dataclass(frozen=True)
class BenchResult:
    n: int
    d: int
    timings: pd.DataFrame  # una fila por repetición

    @property
    def structured_median_ns(self) -> int:
        return int(self.timings['structured_ns'].median())

    @property
    def dense_median_ns(self) -> int:
        return int(self.timings['dense_ns'].median())

    @property
    def speedup(self) -> float:
        return self.dense_median_ns / max(self.structured_median_ns, 1)

    @property
    def verdicts_agree(self) -> bool:
        return bool((self.timings['structured'] == self.timings['dense']).all())


def bench(n: int, d: int, reps: int, seed: int = 0,
          tol: Tolerance = Tolerance(), cap: int = DENSE_ND_CAP) -> BenchResult:
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    if n * d > cap:
        raise SizeLimitError(f"dense arm limited to nd <= {cap}, got n={n}, d={d}")

    a, b, c, dd = gap_matched_quadruple(np.random.default_rng(seed), n, d)
    rows = []
    for rep in range(reps):
        start = time.perf_counter_ns()
        structured = difference_is_toeplitz(a, b, c, dd, tol)
        middle = time.perf_counter_ns()
        dense = dense_product_check(a, b, c, dd, 'toeplitz', tol, cap)
        end = time.perf_counter_ns()
        rows.append({
            'rep': rep,
            'structured_ns': middle - start,
            'dense_ns': end - middle,
            'structured': structured,
            'dense': dense,
        })

    result = BenchResult(n, d, pd.DataFrame(rows).set_index('rep'))
    logger.info(f"Bench n={n} d={d} reps={reps}: structured {result.structured_median_ns / 1e6:.3f} ms, "
                f"dense {result.dense_median_ns / 1e6:.3f} ms, speedup {result.speedup:.1f}x")
    return result
