"""tracerank: traceability-link recovery with specificity-based reranking."""

__version__ = "0.1.0"
