"""icsq: a scenario language, semantic checker, and finite-dimensional quantum
engine for configuration-relative outcome claims."""

__version__ = "0.1.0"
