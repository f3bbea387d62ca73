from typing import Optional

from pydantic import BaseModel, Field

from structures.blocks import Tolerance


class Config(BaseModel):
    # Comparisons
    tolerance: float = Field(default=1e-9, ge=0.0)  # relativa a max(1, |entrada| máxima)

    # Size caps (n*d)
    structured_nd_cap: int = Field(default=8192, ge=1)  # criterios estructurados
    dense_nd_cap: int = Field(default=512, ge=1)  # oráculo denso y bench

    # Benchmark
    bench_reps: int = Field(default=5, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)

    # Logging
    log_level: str = 'WARNING'
    log_file: Optional[str] = None

    def tol(self) -> Tolerance:
        """Tolerancia para la librería"""
        return Tolerance(self.tolerance)
