"""
Pydantic schemas for input documents and command reports.
"""
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field, model_validator


# Command configuration
class RunConfig(BaseModel):
    """Options of one command-line invocation."""
    command: str
    input: List[Path] = []
    game: Optional[str] = None
    size: int = 1
    family: Optional[str] = None
    parameters: Dict[str, float] = {}
    mesh: List[float] = []
    iterations: Optional[int] = None
    k: float = 1.0
    tolerance: Optional[float] = None
    output: Optional[Path] = None
    pretty: bool = False
    deterministic: bool = False

    @model_validator(mode="after")
    def check_source(self) -> "RunConfig":
        if self.command in ("solve", "fp"):
            if bool(self.input) == bool(self.game):
                raise ValueError("Give exactly one of --input or --game")
            if len(self.input) > 1:
                raise ValueError("--input may be given once")
        if self.command == "wasserstein" and len(self.input) != 2:
            raise ValueError(f"wasserstein needs --input twice, got {len(self.input)}")
        return self


# Input documents
class ProblemDocument(BaseModel):
    """On-disk form of a finite decision problem."""
    theta: List[Union[int, float, str]]
    actions: List[Union[int, float, str]]
    observations: List[Union[int, float, str]]
    loss: List[List[Any]]
    kernel: Optional[List[List[Any]]] = Field(
        default=None, description="Omit for a single observation (no data)"
    )


class MeasureDocument(BaseModel):
    """On-disk form of a discrete measure on the line."""
    support: List[float]
    weights: List[float]


# Report schemas
class ReportBase(BaseModel):
    timestamp: Optional[datetime] = None


class SolveReport(ReportBase):
    value: float
    procedure: List[List[float]]
    prior: List[float]
    gap: float
    certified: bool
    theta: List[Any]
    actions: List[Any]
    observations: List[Any]
    certificate_failures: List[str] = []


class FictitiousPlayReport(ReportBase):
    iterations: int
    lower_bound: float
    upper_bound: float
    width: float
    prior: List[float]
    procedure: List[List[float]]


class PriorSummary(BaseModel):
    support: List[Any]
    weights: List[float]


class ApproximationEntry(BaseModel):
    mesh: float
    value: float
    interval: List[float]
    maximin_value: float
    net_size: int
    prior: PriorSummary


class ApproximationReport(ReportBase):
    family: str
    parameters: Dict[str, float] = {}
    lipschitz_k: float
    known_value: Optional[float] = None
    results: List[ApproximationEntry]


class WassersteinReport(ReportBase):
    k: float
    distance: float
    coupling: List[List[float]]
    line_oracle: Optional[float] = None
    oracle_agrees: Optional[bool] = None


class CheckResult(BaseModel):
    name: str
    group: str
    passed: bool
    detail: str


class VerificationReport(ReportBase):
    passed: bool
    total: int
    failed: int
    checks: List[CheckResult]


class ErrorResponse(BaseModel):
    """Error payload written to stderr by the command line."""
    error: str
    detail: str
    timestamp: Optional[datetime] = None
