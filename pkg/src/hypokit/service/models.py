"""Pydantic request/response models for the analysis service."""

from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, field_validator

from ..errors import MatrixFormatError
from ..linalg import DEFAULT_TOL, Tolerances
from ..matrixio import matrix_from_dict, matrix_to_dict

Entry = float | tuple[float, float] | list[float]


class MatrixModel(BaseModel):
    """Wire form of a matrix: row-major entries, bare reals or [re, im] pairs."""

    rows: int
    cols: int
    entries: list[Entry]

    @field_validator("entries")
    @classmethod
    def _pairs_have_two(cls, v):
        for e in v:
            if isinstance(e, (list, tuple)) and len(e) != 2:
                raise ValueError("complex entries must be [re, im] pairs")
        return v

    def to_array(self) -> np.ndarray:
        return matrix_from_dict(self.model_dump())

    @classmethod
    def from_array(cls, a: np.ndarray) -> "MatrixModel":
        return cls(**matrix_to_dict(a))


class ToleranceOverrides(BaseModel):
    rank_rel_tol: float | None = None
    psd_rel_tol: float | None = None
    norm_plateau_tol: float | None = None
    cluster_tol: float | None = None

    def resolve(self) -> Tolerances:
        base = DEFAULT_TOL
        return Tolerances(
            rank_rel_tol=self.rank_rel_tol or base.rank_rel_tol,
            psd_rel_tol=self.psd_rel_tol or base.psd_rel_tol,
            norm_plateau_tol=self.norm_plateau_tol or base.norm_plateau_tol,
            cluster_tol=self.cluster_tol or base.cluster_tol,
        )


class AnalyzeRequest(BaseModel):
    matrix: MatrixModel
    discrete: bool = False
    m_max: int | None = None
    tolerances: ToleranceOverrides | None = None


class DecayRequest(BaseModel):
    matrix: MatrixModel
    t_grid: list[float] | None = None
    tolerances: ToleranceOverrides | None = None


class SweepRequest(BaseModel):
    matrix: MatrixModel
    tau: float = Field(gt=0)
    k_max: int = Field(ge=0)
    t_points: int = Field(default=200, ge=2)
    tolerances: ToleranceOverrides | None = None


class CayleyRequest(BaseModel):
    matrix: MatrixModel
    taus: list[float]
    matrix_id: str = "matrix"
    tolerances: ToleranceOverrides | None = None


class TransformRequest(BaseModel):
    matrix: MatrixModel
    epsilon: float = Field(default=0.0, ge=0)
    discrete: bool = False
    tolerances: ToleranceOverrides | None = None


class HilbertRequest(BaseModel):
    m: int = Field(ge=0, le=8)


class VerifyRequest(BaseModel):
    seed: int = 2024
    count: int = Field(default=50, ge=1)
    only: Literal["cayley", "plateau", "peano", "hilbert"] | None = None


class ErrorBody(BaseModel):
    code: str
    message: str
    category: str


class ErrorResponse(BaseModel):
    schema_: str = Field(default="hypokit/1", alias="schema")
    error: ErrorBody

    model_config = {"populate_by_name": True}


def parse_matrix_model(model: MatrixModel) -> np.ndarray:
    try:
        return model.to_array()
    except MatrixFormatError:
        raise
