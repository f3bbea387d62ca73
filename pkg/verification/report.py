from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from structures.normality import NormalityVerdict


def _pair(z: Optional[complex]) -> Optional[Tuple[float, float]]:
    return None if z is None else (float(z.real), float(z.imag))


class SliceReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    slice: int
    classification: str
    lam: Optional[Tuple[float, float]] = Field(default=None, alias='lambda')


class Report(BaseModel):
    """Resultado de un subcomando; timings en nanosegundos"""
    model_config = ConfigDict(populate_by_name=True)

    command: List[str]
    verdict: bool
    residual: Optional[float] = None
    threshold: Optional[float] = None
    slices: List[SliceReport] = Field(default_factory=list)
    lambdas: List[Optional[Tuple[float, float]]] = Field(default_factory=list, alias='lambda')
    oracle: Optional[bool] = None
    speedup: Optional[float] = None
    timings: Dict[str, int] = Field(default_factory=dict)

    @classmethod
    def from_normality(cls, command: List[str], verdict: NormalityVerdict, **kwargs) -> 'Report':
        slices = [
            SliceReport(slice=s.slice_index, classification=s.classification.value, lam=_pair(s.lam))
            for s in verdict.slices
        ]
        return cls(command=command, verdict=verdict.overall, slices=slices,
                   lambdas=[_pair(s.lam) for s in verdict.slices], **kwargs)

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True)

    def render(self) -> str:
        """Reporte legible"""
        lines = [
            f"📋 {' '.join(self.command)}",
            f"{'✅' if self.verdict else '❌'} verdict: {str(self.verdict).lower()}",
        ]
        if self.residual is not None:
            limit = '' if self.threshold is None else f" (threshold {self.threshold:.3e})"
            lines.append(f"📐 residual: {self.residual:.3e}{limit}")
        for s in self.slices:
            lam = '' if s.lam is None else f", lambda = {complex(*s.lam):.6g}"
            lines.append(f"   slice {s.slice}: {s.classification}{lam}")
        if self.oracle is not None:
            lines.append(f"🔍 oracle: {'agrees' if self.oracle == self.verdict else 'DISAGREES'} ({str(self.oracle).lower()})")
        if self.speedup is not None:
            lines.append(f"⚡ speedup: {self.speedup:.1f}x")
        for name, ns in self.timings.items():
            lines.append(f"⏱️  {name}: {ns / 1e6:.3f} ms")
        return '\n'.join(lines)
