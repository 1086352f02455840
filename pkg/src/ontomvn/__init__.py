"""Package management, versioning, testing and documentation for ontology artifacts."""

from __future__ import annotations

__version__ = "0.1.0"
