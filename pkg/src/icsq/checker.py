"""Semantic checker for scenarios: admissibility and composition rules.

Two rules govern outcome claims. A claim must name the configuration it is
conditioned on; the bare form `yields(system) = outcome` is rejected as
ill-typed (E001), not merely false. A composite claim may combine outcomes
from different configurations only when those configurations are mutually
compatible (all effects commute, after lifting onto a shared composite
space), or when the statement names a declared physical bridging
configuration under which the outcomes are jointly readable (otherwise E002;
E003 for merely epistemic bridges). Joint-distribution requests over
incompatible configurations are refused as undefined (E005).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import quantum
from .elaborate import (
    Environment,
    InternalLimit,
    ResolvedSubject,
    elaborate,
    embed_into_root,
    resolve_subject,
)
from .lang.ast import Scenario, StatementNode
from .lang.diagnostics import Diagnostic

__all__ = [
    "CheckReport",
    "InternalLimit",
    "check",
    "check_composition",
    "check_joint_request",
    "validate_bridge",
]


@dataclass(frozen=True)
class CheckReport:
    diagnostics: tuple
    admissible_statements: tuple


def check(scenario: Scenario) -> CheckReport:
    """Check every statement; diagnostics come back in source order and a
    statement is admissible exactly when it produced no error."""
    env = elaborate(scenario)
    diagnostics = list(env.diagnostics)
    admissible = []
    for statement in scenario.statements:
        node_diags = _check_node(statement.node, statement.id, env)
        diagnostics.extend(node_diags)
        if not any(d.severity == "error" for d in node_diags):
            admissible.append(statement.id)
    diagnostics.sort(key=Diagnostic.sort_key)
    return CheckReport(tuple(diagnostics), tuple(admissible))


def check_composition(node: StatementNode, scenario: Scenario, statement_id: str = "") -> list:
    """Composition rule for one composite node against a scenario."""
    return _check_composition(node, statement_id, elaborate(scenario))


def check_joint_request(node: StatementNode, scenario: Scenario, statement_id: str = "") -> list:
    return _check_joint(node, statement_id, elaborate(scenario))


def validate_bridge(bridge, node: StatementNode, scenario: Scenario, statement_id: str = "") -> list:
    return _validate_bridge(bridge, node, statement_id, elaborate(scenario))


# ---------------------------------------------------------------------------


def _diag(code: str, message: str, node, statement_id: str) -> Diagnostic:
    return Diagnostic(code, message, node.span, statement_id)


def _check_node(node: StatementNode, statement_id: str, env: Environment) -> list:
    if node.kind == "intrinsic-yields":
        return [
            _diag(
                "E001",
                f"claim 'yields({node.subject})' is ill-typed: an outcome can only be "
                "predicated of a system together with an explicit configuration",
                node,
                statement_id,
            )
        ]
    if node.kind == "yields":
        return _check_yields(node, statement_id, env)
    if node.kind == "joint-request":
        return _check_joint(node, statement_id, env)
    # composite: judge children first; composition is only judged when every
    # child is individually admissible.
    child_diags = []
    for child in node.children:
        child_diags.extend(_check_node(child, statement_id, env))
    if any(d.severity == "error" for d in child_diags):
        return child_diags
    return child_diags + _check_composition(node, statement_id, env)


def _resolve_config(name: str, node, statement_id: str, env: Environment):
    """Returns (ConfigEntry, None) or (None, diagnostic)."""
    entry = env.configs.get(name)
    if entry is None:
        return None, _diag(
            "E006", f"reference to undeclared configuration {name!r}", node, statement_id
        )
    if entry.value is None:
        return None, _diag(
            "E006",
            f"configuration {name!r} cannot be used because its declaration is invalid",
            node,
            statement_id,
        )
    return entry, None


def _check_yields(node: StatementNode, statement_id: str, env: Environment) -> list:
    subject, reason = resolve_subject(node.subject, env)
    if subject is None:
        return [_diag("E006", reason, node, statement_id)]
    entry, problem = _resolve_config(node.config, node, statement_id, env)
    if problem is not None:
        return [problem]
    if entry.over != subject.system:
        return [
            _diag(
                "E007",
                f"configuration {node.config!r} is over system {entry.over!r} but the "
                f"claim subject '{node.subject}' is of system {subject.system!r}",
                node,
                statement_id,
            )
        ]
    if node.outcome not in entry.value.labels:
        return [
            _diag(
                "E006",
                f"configuration {node.config!r} has no outcome {node.outcome!r}",
                node,
                statement_id,
            )
        ]
    return []


def _check_joint(node: StatementNode, statement_id: str, env: Environment) -> list:
    subject, reason = resolve_subject(node.subject, env)
    if subject is None:
        return [_diag("E006", reason, node, statement_id)]
    diags = []
    entries = []
    for name in (node.config, node.config2):
        entry, problem = _resolve_config(name, node, statement_id, env)
        if problem is not None:
            diags.append(problem)
            continue
        if entry.over != subject.system:
            diags.append(
                _diag(
                    "E007",
                    f"configuration {name!r} is over system {entry.over!r} but the "
                    f"joint request names subject '{node.subject}' of system {subject.system!r}",
                    node,
                    statement_id,
                )
            )
            continue
        entries.append(entry)
    if diags:
        return diags
    if quantum.compatible(entries[0].value, entries[1].value):
        return []
    return [
        _diag(
            "E005",
            f"no joint distribution is defined over incompatible configurations "
            f"{node.config!r} and {node.config2!r}: requesting one is a category error, "
            "not a request for unknown data",
            node,
            statement_id,
        )
    ]


@dataclass(frozen=True)
class _LeafClaim:
    subject: ResolvedSubject
    config: object  # Configuration
    config_id: str


def _leaf_claims(node: StatementNode, statement_id: str, env: Environment) -> list:
    """Flatten a composite into the (subject, configuration) pairs that must
    be mutually compatible. A nested composite carrying a valid physical
    bridge is represented by its bridge configuration instead of its leaves,
    since its outcomes have been re-typed under that configuration."""
    leaves = []
    for child in node.children:
        if child.kind == "yields":
            subject, _ = resolve_subject(child.subject, env)
            entry = env.configs[child.config]
            leaves.append(_LeafClaim(subject, entry.value, child.config))
        elif child.kind == "joint-request":
            subject, _ = resolve_subject(child.subject, env)
            for name in (child.config, child.config2):
                leaves.append(_LeafClaim(subject, env.configs[name].value, name))
        elif child.kind == "composite":
            bridge = env.bridges.get(child.bridge) if child.bridge else None
            inner = _leaf_claims(child, statement_id, env)
            if (
                bridge is not None
                and bridge.kind == "physical"
                and not _validate_bridge(bridge, child, statement_id, env)
            ):
                entry = env.configs.get(bridge.config)
                root = _common_root(inner)
                if entry is not None and entry.value is not None and root is not None:
                    leaves.append(
                        _LeafClaim(
                            ResolvedSubject(root, entry.over, None, entry.value.dim),
                            entry.value,
                            bridge.config,
                        )
                    )
                    continue
            leaves.extend(inner)
    return leaves


def _common_root(leaves: list):
    roots = {leaf.subject.root for leaf in leaves}
    return roots.pop() if len(roots) == 1 else None


def _incompatible_pairs(leaves: list, env: Environment) -> list:
    """All pairs of leaf claims whose configurations fail to commute after
    lifting onto their shared root space. Claims rooted in different systems
    touch disjoint spaces and are compatible by construction."""
    lifted = {}

    def lift(leaf: _LeafClaim):
        key = (leaf.config_id, leaf.subject.root, leaf.subject.factor_index)
        if key not in lifted:
            root = env.systems[leaf.subject.root]
            lifted[key] = embed_into_root(leaf.config, root, leaf.subject.factor_index)
        return lifted[key]

    bad = []
    for i, a in enumerate(leaves):
        for b in leaves[i + 1:]:
            if a.subject.root != b.subject.root:
                continue
            if not quantum.compatible(lift(a), lift(b)):
                bad.append((a, b))
    return bad


def _check_composition(node: StatementNode, statement_id: str, env: Environment) -> list:
    leaves = _leaf_claims(node, statement_id, env)
    conflicts = _incompatible_pairs(leaves, env)
    bridge = None
    bridge_problem = None
    if node.bridge is not None:
        bridge = env.bridges.get(node.bridge)
        if bridge is None:
            bridge_problem = _diag(
                "E006", f"reference to undeclared bridge {node.bridge!r}", node, statement_id
            )
    if not conflicts:
        diags = [bridge_problem] if bridge_problem else []
        if bridge is not None:
            diags.append(
                _diag(
                    "W001",
                    f"bridge {node.bridge!r} is redundant: the composed configurations "
                    "are already compatible",
                    node,
                    statement_id,
                )
            )
        return diags
    if bridge_problem is not None:
        return [bridge_problem]
    if bridge is None:
        a, b = conflicts[0]
        return [
            _diag(
                "E002",
                f"composite combines outcomes from incompatible configurations "
                f"{a.config_id!r} and {b.config_id!r} with no bridging interaction; "
                "name one with 'using'",
                node,
                statement_id,
            )
        ]
    if bridge.kind == "epistemic":
        return [
            _diag(
                "E003",
                f"bridge {node.bridge!r} is epistemic; outcomes from incompatible "
                "configurations can only be compared under a physical bridging "
                "interaction",
                node,
                statement_id,
            )
        ]
    return _validate_bridge(bridge, node, statement_id, env)


def _validate_bridge(bridge, node: StatementNode, statement_id: str, env: Environment) -> list:
    def bad(reason: str) -> list:
        return [
            _diag("E004", f"bridge {bridge.id!r} is invalid: {reason}", node, statement_id)
        ]

    entry = env.configs.get(bridge.config)
    if entry is None or entry.value is None:
        return bad(f"its configuration {bridge.config!r} is undeclared or invalid")
    if any(child.kind != "yields" for child in node.children):
        return bad("every bridged claim must be a plain outcome claim")
    subjects = []
    for child in node.children:
        resolved, _ = resolve_subject(child.subject, env)
        subjects.append(resolved)
    roots = {s.root for s in subjects}
    if len(roots) != 1 or entry.over not in roots:
        return bad(
            f"wrong system: configuration {bridge.config!r} is over {entry.over!r}, "
            "which does not contain every bridged subject"
        )
    referenced = tuple(child.outcome for child in node.children)
    if any(not isinstance(label, str) for label in referenced):
        return bad("bridged outcome tuples must use plain labels")
    target = None
    for map_entry in bridge.maps:
        if map_entry.source == referenced:
            target = map_entry.target
            break
    if target is None:
        shown = ", ".join(str(label) for label in referenced)
        return bad(f"missing mapping for the referenced outcome tuple ({shown})")
    if target not in entry.value.labels:
        return bad(
            f"unknown label: mapping target {target!r} is not an outcome of {bridge.config!r}"
        )
    return []
