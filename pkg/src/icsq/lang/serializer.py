"""Canonical text form for scenario ASTs.

Floats are written with repr (shortest round-trip form), so serializing and
reparsing reproduces the exact numeric payload.
"""

from __future__ import annotations

from .ast import (
    ConfigBuiltinBody,
    EffectTableBody,
    MatrixBody,
    Scenario,
    StatementNode,
    StructureBuiltinBody,
    VectorBody,
)


def _num(x: float) -> str:
    return repr(float(x))


def _amp(c: complex) -> str:
    re, im = float(c.real), float(c.imag)
    if im == 0.0:
        return _num(re)
    if re == 0.0:
        return f"{_num(im)}i"
    if im < 0.0:
        return f"{_num(re)} - {_num(-im)}i"
    return f"{_num(re)} + {_num(im)}i"


def _rows(rows) -> str:
    return " ; ".join(", ".join(_amp(a) for a in row) for row in rows)


def _outcome(outcome) -> str:
    if isinstance(outcome, tuple):
        return "(" + ", ".join(_outcome(o) for o in outcome) + ")"
    return str(outcome)


def _claim(node: StatementNode, indent: str) -> str:
    if node.kind in ("yields", "intrinsic-yields"):
        inner = str(node.subject)
        if node.config is not None:
            inner += f", {node.config}"
        return f"{indent}yields({inner}) = {_outcome(node.outcome)}"
    if node.kind == "joint-request":
        return f"{indent}joint({node.subject}, {node.config}, {node.config2})"
    lines = [f"{indent}compose {{"]
    for child in node.children:
        lines.append(_claim(child, indent + "  "))
    closing = f"{indent}}}"
    if node.bridge is not None:
        closing += f" using {node.bridge}"
    lines.append(closing)
    return "\n".join(lines)


def serialize(scenario: Scenario) -> str:
    lines = []
    for system in scenario.systems:
        decl = f"system {system.id} dim {system.dim}"
        if system.factors is not None:
            decl += f" = {system.factors[0]} x {system.factors[1]}"
        lines.append(decl)
    for structure in scenario.structures:
        head = f"structure {structure.id} over {structure.over}"
        body = structure.body
        if isinstance(body, StructureBuiltinBody):
            lines.append(f"{head} builtin {body.name}")
        elif isinstance(body, VectorBody):
            lines.append(f"{head} {{ {_rows([body.amplitudes])} }}")
        elif isinstance(body, MatrixBody):
            lines.append(f"{head} {{ {_rows(body.rows)} }}")
    for config in scenario.configurations:
        head = f"config {config.id} over {config.over}"
        body = config.body
        if isinstance(body, ConfigBuiltinBody):
            args = ", ".join(_num(a) for a in body.args)
            lines.append(f"{head} builtin {body.name}({args})")
        elif isinstance(body, EffectTableBody):
            lines.append(f"{head} {{")
            for effect in body.effects:
                lines.append(f"  {effect.label}: [ {_rows(effect.rows)} ]")
            lines.append("}")
    for bridge in scenario.bridges:
        lines.append(f"bridge {bridge.id} {bridge.kind} via {bridge.config} {{")
        for entry in bridge.maps:
            source = ", ".join(entry.source)
            lines.append(f"  ({source}) -> {_outcome(entry.target)}")
        lines.append("}")
    for statement in scenario.statements:
        lines.append(f"statement {statement.id} {{")
        lines.append(_claim(statement.node, "  "))
        lines.append("}")
    return "\n".join(lines) + ("\n" if lines else "")
