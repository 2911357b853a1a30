"""FastAPI application exposing workspaces of mined concepts.

A workspace couples a concept set with its inverted index (and, when built
from raw data, the source context). Creation mines and indexes up front;
afterwards the structures are immutable, so concurrent searches need no
locking. The derivation-based engine is built lazily on the first baseline
query, since its dyadic views are expensive.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, HTTPException

from ..baseline import BaselineEngine, baseline_query, build_baseline
from ..context import TriadicContext, build_context, parse_table_text, parse_triples_text
from ..errors import DataFormatError
from ..index import InvertedIndex, build_index, load_index
from ..miner import ConceptSet, context_from_concepts, mine_concepts, read_store
from ..query import concept_record, hit_record, parse_query, search
from .schemas import (
    ConceptEntry,
    ConceptPage,
    HealthInfo,
    SearchHit,
    SearchRequest,
    SearchResponse,
    WorkspaceCreate,
    WorkspaceInfo,
)


class Workspace:
    """Immutable search artifacts for one dataset."""

    def __init__(
        self,
        name: str,
        concepts: ConceptSet,
        index: InvertedIndex,
        context: TriadicContext | None = None,
        label_separator: str | None = None,
    ):
        self.name = name
        self.concepts = concepts
        self.index = index
        self.context = context
        self.label_separator = label_separator
        self._baseline: BaselineEngine | None = None
        self._baseline_lock = threading.Lock()

    def baseline(self) -> BaselineEngine:
        with self._baseline_lock:
            if self._baseline is None:
                ctx = self.context or context_from_concepts(self.concepts)
                self._baseline = build_baseline(ctx, self.concepts)
        return self._baseline

    def info(self) -> WorkspaceInfo:
        n1, n2, n3 = (len(d) for d in self.concepts.dictionaries)
        return WorkspaceInfo(
            name=self.name,
            objects=n1,
            attributes=n2,
            conditions=n3,
            incidences=len(self.context.triples) if self.context else None,
            concepts=len(self.concepts),
            postings=self.index.posting_total(),
            baseline_ready=self._baseline is not None,
            label_separator=self.label_separator,
        )


def workspace_from_content(
    name: str, fmt: str, content: str, label_separator: str | None = None
) -> Workspace:
    """Mine and index raw dataset content into a fresh workspace."""
    if fmt == "triples":
        ctx = build_context(parse_triples_text(content, source=f"workspace {name}"))
    else:
        ctx = parse_table_text(content, source=f"workspace {name}")
    concepts = mine_concepts(ctx)
    return Workspace(name, concepts, build_index(concepts), ctx, label_separator)


def workspace_from_store(
    name: str, store_path, index_path=None, label_separator: str | None = None
) -> Workspace:
    """Load a workspace from a concept store (and optional index file)."""
    concepts = read_store(store_path)
    if index_path:
        index = load_index(index_path)
        if index.concept_count != len(concepts):
            raise DataFormatError(
                f"index covers {index.concept_count} concepts, store has {len(concepts)}"
            )
        index.concepts = concepts
    else:
        index = build_index(concepts)
    return Workspace(name, concepts, index, None, label_separator)


class WorkspaceRegistry:
    def __init__(self):
        self._lock = threading.Lock()
        self._spaces: dict[str, Workspace] = {}

    def add(self, workspace: Workspace) -> None:
        with self._lock:
            if workspace.name in self._spaces:
                raise KeyError(workspace.name)
            self._spaces[workspace.name] = workspace

    def get(self, name: str) -> Workspace:
        try:
            return self._spaces[name]
        except KeyError:
            raise HTTPException(status_code=404, detail=f"no workspace named {name!r}") from None

    def remove(self, name: str) -> None:
        with self._lock:
            if name not in self._spaces:
                raise HTTPException(status_code=404, detail=f"no workspace named {name!r}")
            del self._spaces[name]

    def names(self) -> list[str]:
        return sorted(self._spaces)

    def all(self) -> list[Workspace]:
        return [self._spaces[name] for name in self.names()]


def create_app(preload: list[Workspace] | None = None) -> FastAPI:
    app = FastAPI(
        title="trisearch",
        description="Partial and complete triple matching over mined triadic concepts.",
        version="0.1.0",
    )
    registry = WorkspaceRegistry()
    for workspace in preload or []:
        registry.add(workspace)
    app.state.registry = registry

    @app.get("/health", response_model=HealthInfo)
    def health() -> HealthInfo:
        return HealthInfo(status="ok", workspaces=registry.names())

    @app.get("/workspaces", response_model=list[WorkspaceInfo])
    def list_workspaces() -> list[WorkspaceInfo]:
        return [w.info() for w in registry.all()]

    @app.post("/workspaces", response_model=WorkspaceInfo, status_code=201)
    def create_workspace(request: WorkspaceCreate) -> WorkspaceInfo:
        try:
            workspace = workspace_from_content(
                request.name, request.format, request.content, request.label_separator
            )
        except DataFormatError as err:
            raise HTTPException(status_code=400, detail=str(err)) from None
        try:
            registry.add(workspace)
        except KeyError:
            raise HTTPException(
                status_code=409, detail=f"workspace {request.name!r} already exists"
            ) from None
        return workspace.info()

    @app.get("/workspaces/{name}", response_model=WorkspaceInfo)
    def workspace_info(name: str) -> WorkspaceInfo:
        return registry.get(name).info()

    @app.delete("/workspaces/{name}", status_code=204)
    def delete_workspace(name: str) -> None:
        registry.remove(name)

    @app.post(
        "/workspaces/{name}/search",
        response_model=SearchResponse,
        response_model_exclude_none=True,
    )
    def search_workspace(name: str, request: SearchRequest) -> SearchResponse:
        workspace = registry.get(name)
        concepts = workspace.concepts
        separator = request.label_separator or workspace.label_separator
        try:
            q = parse_query(
                request.query,
                concepts.dictionaries,
                theta=request.theta,
                mode=request.mode,
                k=request.k,
                label_separator=separator,
                theta_scope=request.theta_scope,
            )
        except DataFormatError as err:
            raise HTTPException(status_code=400, detail=str(err)) from None
        if request.engine == "baseline":
            answers = baseline_query(workspace.baseline(), q)
            hits = [SearchHit(**concept_record(c, concepts)) for c in answers]
        else:
            ranked = search(workspace.index, concepts, q)
            hits = [
                SearchHit(**hit_record(h, rank, concepts))
                for rank, h in enumerate(ranked, 1)
            ]
        return SearchResponse(
            workspace=name, engine=request.engine, total=len(hits), hits=hits
        )

    @app.get("/workspaces/{name}/concepts", response_model=ConceptPage)
    def list_concepts(name: str, offset: int = 0, limit: int = 100) -> ConceptPage:
        workspace = registry.get(name)
        concepts = workspace.concepts
        if offset < 0 or limit < 1:
            raise HTTPException(status_code=400, detail="offset must be >= 0 and limit >= 1")
        window = concepts.concepts[offset : offset + limit]
        items = [ConceptEntry(**concept_record(c, concepts)) for c in window]
        return ConceptPage(workspace=name, total=len(concepts), offset=offset, items=items)

    return app
