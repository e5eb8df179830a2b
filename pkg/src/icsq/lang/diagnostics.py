"""Typed verdicts from the semantic checker, plus text/JSON rendering.

Codes are a stable API; messages may evolve. W-prefixed codes are warnings,
E-prefixed codes are errors.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from .ast import Span

# code -> short name; severity is determined by the prefix.
CODES = {
    "E001": "IllTypedIntrinsic",
    "E002": "InadmissibleComposition",
    "E003": "EpistemicBridge",
    "E004": "InvalidBridge",
    "E005": "UndefinedJointDistribution",
    "E006": "UnresolvedReference",
    "E007": "DimensionMismatch",
    "W001": "RedundantBridge",
}


def severity_for(code: str) -> str:
    return "warning" if code.startswith("W") else "error"


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    span: Span
    statement: str  # id of the enclosing statement or declaration

    @property
    def severity(self) -> str:
        return severity_for(self.code)

    def sort_key(self):
        return (self.span.line, self.span.col, self.code)


_RESET = "\x1b[0m"
_COLORS = {"error": "\x1b[31m", "warning": "\x1b[33m"}


def _use_color() -> bool:
    return os.environ.get("ICSQ_COLOR", "0") == "1"


def _caret_line(diag: Diagnostic, source_lines: list) -> list:
    if not (1 <= diag.span.line <= len(source_lines)):
        return []
    text = source_lines[diag.span.line - 1]
    width = max(1, min(diag.span.length, max(len(text) - diag.span.col + 1, 1)))
    prefix = " " * (diag.span.col - 1)
    return [f"  | {text}", f"  | {prefix}{'^' * width}"]


def render_diagnostics(diagnostics, format: str = "text", source: str = None) -> str:
    """Render a diagnostic list. The JSON form follows the fixed schema
    {"diagnostics": [{code, severity, message, span, statement}, ...]} with
    stable key order; the text form shows caret markers when the source text
    is provided."""
    diagnostics = list(diagnostics)
    if format == "json":
        payload = {
            "diagnostics": [
                {
                    "code": d.code,
                    "severity": d.severity,
                    "message": d.message,
                    "span": {"line": d.span.line, "col": d.span.col, "len": d.span.length},
                    "statement": d.statement,
                }
                for d in diagnostics
            ]
        }
        return json.dumps(payload, separators=(",", ":"))
    if format != "text":
        raise ValueError(f"unknown diagnostics format {format!r}")
    color = _use_color()
    source_lines = source.splitlines() if source is not None else None
    lines = []
    for diag in diagnostics:
        head = f"{diag.severity}[{diag.code}]"
        if color:
            head = f"{_COLORS[diag.severity]}{head}{_RESET}"
        where = f"line {diag.span.line}, col {diag.span.col}"
        subject = f" in '{diag.statement}'" if diag.statement else ""
        lines.append(f"{head}: {diag.message}{subject} ({where})")
        if source_lines is not None:
            lines.extend(_caret_line(diag, source_lines))
    return "\n".join(lines) + ("\n" if lines else "")
