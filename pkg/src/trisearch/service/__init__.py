"""HTTP service wrapping the search engine.

Workspaces hold an immutable concept set plus its inverted index; queries
from any number of clients run against them without locking. See
:mod:`trisearch.service.app` for the endpoints.
"""

from .app import create_app, workspace_from_store

__all__ = ["create_app", "workspace_from_store"]
