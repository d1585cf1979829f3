from typing import Any, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from .spaces import SCHEMA_VERSION, SpaceSpec


class SymbolRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    symbol: str
    space: Optional[SpaceSpec] = None


class SpaceRequest(SymbolRequest):
    space: SpaceSpec


class EssentialSpectrumRequest(SpaceRequest):
    annulus: bool = False


class FredholmRequest(SpaceRequest):
    # complex literal in the symbol syntax, e.g. "0.5-0.25i"
    lam: str = Field(alias="lambda")

    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class PeakScanRequest(SpaceRequest):
    xi: str = "1"
    kmax: int = Field(default=1024, ge=8, le=8192)


class Envelope(BaseModel):
    schema_version: int = SCHEMA_VERSION
    kind: str
    result: Any


class PeakScanRow(BaseModel):
    k: int
    norm: float


class PeakScanResult(BaseModel):
    rows: List[PeakScanRow]


class HealthResponse(BaseModel):
    status: Literal["ok"] = "ok"
    schema_version: int = SCHEMA_VERSION
    max_parallel: int
