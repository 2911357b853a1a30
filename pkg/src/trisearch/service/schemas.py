"""Pydantic request/response models for the HTTP service.

Hit fields mirror the CLI's JSON-lines records exactly (same names, same
order); optional fields are dropped from responses when unset so baseline
answers keep the same shape as the CLI's unscored records.
"""

from typing import Literal, Optional

from pydantic import BaseModel, Field


class WorkspaceCreate(BaseModel):
    name: str = Field(..., min_length=1, max_length=64, pattern=r"^[A-Za-z0-9_.-]+$")
    format: Literal["triples", "table"] = "triples"
    content: str
    label_separator: Optional[str] = None


class WorkspaceInfo(BaseModel):
    name: str
    objects: int
    attributes: int
    conditions: int
    incidences: Optional[int] = None
    concepts: int
    postings: int
    baseline_ready: bool
    label_separator: Optional[str] = None


class SearchRequest(BaseModel):
    query: str
    theta: int = Field(0, ge=0)
    k: Optional[int] = Field(None, ge=1)
    mode: Literal["contains", "exact"] = "contains"
    theta_scope: Literal["total", "per_dimension"] = "total"
    engine: Literal["ours", "baseline"] = "ours"
    label_separator: Optional[str] = None


class SearchHit(BaseModel):
    rank: Optional[int] = None
    concept: int
    score: Optional[float] = None
    extent: list[str]
    intent: list[str]
    modus: list[str]
    overlap: Optional[list[int]] = None
    missing: Optional[int] = None


class SearchResponse(BaseModel):
    workspace: str
    engine: str
    total: int
    hits: list[SearchHit]


class ConceptEntry(BaseModel):
    concept: int
    extent: list[str]
    intent: list[str]
    modus: list[str]


class ConceptPage(BaseModel):
    workspace: str
    total: int
    offset: int
    items: list[ConceptEntry]


class HealthInfo(BaseModel):
    status: str
    workspaces: list[str]
