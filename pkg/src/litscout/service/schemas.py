"""Request/response models for the HTTP API.

Every ranked payload carries its provenance string so a client can always
show where a list came from.
"""
from __future__ import annotations

from pydantic import BaseModel, Field


class Hit(BaseModel):
    id: str
    score: float
    rank: int
    title: str = ""
    authors: list[str] = Field(default_factory=list)
    pub_date: str = ""
    journal: str = ""
    refereed: bool = False


class ListOut(BaseModel):
    items: list[Hit]
    provenance: str
    total: int


class FacetValue(BaseModel):
    value: str
    count: int


class SearchResponse(BaseModel):
    query: str
    sort: str
    results: ListOut
    facets: dict[str, list[FacetValue]]
    session: str


class SlotOut(BaseModel):
    algorithm: str
    doc_id: str | None = None
    score: float | None = None
    reason: str | None = None
    title: str | None = None


class DocumentOut(BaseModel):
    id: str
    title: str
    abstract: str
    body: str | None = None
    authors: list[str]
    pub_date: str
    journal: str
    refereed: bool
    keywords: list[str]
    entities: list[str]
    references: list[str]
    citation_count: int
    reads_90d: int


class DocResponse(BaseModel):
    document: DocumentOut
    buttons: dict[str, ListOut]
    panel: list[SlotOut] | None = None
    panel_unavailable: str | None = None
    session: str


class ExploreResponse(BaseModel):
    mode: str
    query: str
    results: ListOut
    session: str


class SaveListRequest(BaseModel):
    ids: list[str] | None = None
    query: str | None = None
    sort: str = "recent"


class ListSavedResponse(BaseModel):
    name: str
    results: ListOut
    session: str


class ListNamesResponse(BaseModel):
    names: list[str]
    session: str


class OpResponse(BaseModel):
    source: str
    op: str
    results: ListOut
    session: str


class LabeledListOut(BaseModel):
    label: str
    results: ListOut
    reason: str | None = None


class DigestResponse(BaseModel):
    user: str
    lists: list[LabeledListOut]
    session: str


class PaneResponse(BaseModel):
    lists: list[LabeledListOut]
    session: str


class TermCount(BaseModel):
    term: str
    count: int


class CompleteResponse(BaseModel):
    prefix: str
    terms: list[TermCount]


class ViewResponse(BaseModel):
    viewed: str
    recent: list[str]
    session: str


class ProfileSetResponse(BaseModel):
    user: str
    session: str


class ReloadResponse(BaseModel):
    documents: int
    events: int
    model_loaded: bool


class ErrorBody(BaseModel):
    code: str
    message: str


class ErrorResponse(BaseModel):
    error: ErrorBody
