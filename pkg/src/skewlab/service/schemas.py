from typing import List, Optional

from pydantic import BaseModel, Field


class SpectrumRequest(BaseModel):
    N: int
    p: int
    k: float


class SpectrumResponse(BaseModel):
    N: int
    p: int
    k: float
    eps: List[float]
    zero_modes: int


class HamiltonianCheckRequest(BaseModel):
    t: List[float] = Field(..., min_length=1, description="hopping amplitudes t(1)..t(N-1)")
    N: Optional[int] = None
    oracle: bool = False
    allow_large: bool = False


class HamiltonianCheckResponse(BaseModel):
    N: int
    quasi: List[float]
    min_excitation: float
    closed_form_max_deviation: float
    oracle: Optional[dict] = None
    notice: Optional[str] = None
    text: str


class ZerosRequest(BaseModel):
    m: int = Field(..., ge=1, le=25)


class ZerosResponse(BaseModel):
    ordinates: List[float]
    bracket_widths: List[float]
    method: str
    tol: float


class ScanResponse(BaseModel):
    primes: List[int]
    delta: float
    n_peaks: int
    m_requested: int
    m: int
    scale: float
    rms: float
    residuals: List[float]
    peaks: List[float]
    zeros: List[float]
    sweep_digests: dict
    files: List[str]
    cache_hits: int
    cache_misses: int


class ErrorResponse(BaseModel):
    detail: str
    kind: str


class HealthResponse(BaseModel):
    status: str
    version: str
