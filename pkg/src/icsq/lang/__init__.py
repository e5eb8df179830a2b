from .ast import (
    BridgeDecl,
    BridgeMapEntry,
    ConfigBuiltinBody,
    ConfigDecl,
    EffectEntry,
    EffectTableBody,
    MatrixBody,
    Scenario,
    Span,
    StatementDecl,
    StatementNode,
    StructureBuiltinBody,
    StructureDecl,
    SubjectRef,
    SystemDecl,
    VectorBody,
)
from .diagnostics import Diagnostic, render_diagnostics, severity_for
from .parser import ParseError, ParseResult, parse
from .serializer import serialize

__all__ = [
    "BridgeDecl",
    "BridgeMapEntry",
    "ConfigBuiltinBody",
    "ConfigDecl",
    "Diagnostic",
    "EffectEntry",
    "EffectTableBody",
    "MatrixBody",
    "ParseError",
    "ParseResult",
    "Scenario",
    "Span",
    "StatementDecl",
    "StatementNode",
    "StructureBuiltinBody",
    "StructureDecl",
    "SubjectRef",
    "SystemDecl",
    "VectorBody",
    "parse",
    "render_diagnostics",
    "serialize",
    "severity_for",
]
