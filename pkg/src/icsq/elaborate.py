"""Turns parsed declarations into engine objects.

Declaration problems are reported as diagnostics (E006 for unresolved or
unknown names, E007 for dimension and shape violations); a declaration that
fails stays in the table with no value so later references can be flagged
without cascading. Systems larger than the engine's dimension cap abort with
InternalLimit since no meaningful verdict exists beyond it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import quantum
from .lang.ast import (
    ConfigBuiltinBody,
    EffectTableBody,
    MatrixBody,
    Scenario,
    StructureBuiltinBody,
    SubjectRef,
    VectorBody,
)
from .lang.diagnostics import Diagnostic


class InternalLimit(Exception):
    """A scenario exceeds engine limits (dimension cap)."""


@dataclass(frozen=True)
class SystemInfo:
    id: str
    dim: int
    factors: tuple = None  # ((name, dim), (name, dim)) for composites


@dataclass(frozen=True)
class StructureEntry:
    id: str
    over: str
    value: object = None  # QuantumStructure when the declaration is valid


@dataclass(frozen=True)
class ConfigEntry:
    id: str
    over: str
    value: object = None  # Configuration when the declaration is valid


@dataclass(frozen=True)
class ResolvedSubject:
    """Where a claim subject lives: the root system plus an optional factor."""

    root: str  # system id of the space the claim belongs to
    system: str  # system id giving the subject's type and dimension
    factor_index: int = None  # position within the root's factors, if any
    dim: int = 0


@dataclass
class Environment:
    systems: dict = field(default_factory=dict)
    structures: dict = field(default_factory=dict)
    configs: dict = field(default_factory=dict)
    bridges: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)

    def report(self, code: str, message: str, span, owner: str) -> None:
        self.diagnostics.append(Diagnostic(code, message, span, owner))


STRUCTURE_BUILTINS = {
    "up_z": (2, quantum.up_z),
    "down_z": (2, quantum.down_z),
    "plus_x": (2, quantum.plus_x),
    "minus_x": (2, quantum.minus_x),
    "singlet": (4, quantum.singlet),
    "bell_phi_plus": (4, quantum.bell_phi_plus),
}


def _builtin_spin_axis(name: str, dim: int, args):
    if dim != 2:
        raise ValueError(f"spin_axis needs a 2-dimensional system, got dim {dim}")
    if len(args) not in (1, 2):
        raise ValueError("spin_axis takes a polar angle and an optional azimuthal angle")
    phi = args[1] if len(args) == 2 else 0.0
    return quantum.spin_axis(args[0], phi, id=name)


def _builtin_spin_pair(name: str, dim: int, args):
    if dim != 4:
        raise ValueError(f"spin_pair needs a 4-dimensional system, got dim {dim}")
    if len(args) != 2:
        raise ValueError("spin_pair takes two polar angles")
    joint = quantum.tensor_config(quantum.spin_axis(args[0]), quantum.spin_axis(args[1]))
    return quantum.Configuration(id=name, dim=4, kind=joint.kind, effects=joint.effects)


def _builtin_no_args(factory, required_dim=None):
    def build(name: str, dim: int, args):
        if args:
            raise ValueError("this builtin takes no arguments")
        if required_dim is not None and dim != required_dim:
            raise ValueError(f"builtin needs a {required_dim}-dimensional system, got dim {dim}")
        return factory(name, dim)

    return build


CONFIG_BUILTINS = {
    "spin_axis": _builtin_spin_axis,
    "spin_pair": _builtin_spin_pair,
    "computational": _builtin_no_args(
        lambda name, dim: quantum.computational_config(dim, id=name)
    ),
    "interference": _builtin_no_args(
        lambda name, dim: quantum.superposition_config(("bright", "dark"), id=name), 2
    ),
    "which_path": _builtin_no_args(
        lambda name, dim: quantum.computational_config(2, ("slit_a", "slit_b"), id=name), 2
    ),
    "bell_basis": _builtin_no_args(lambda name, dim: quantum.bell_basis_config(id=name), 4),
}


def _build_configuration(name: str, dim: int, effects) -> quantum.Configuration:
    """Build from raw effects, classifying as projective when the stricter
    invariants hold and as a POVM otherwise."""
    povm = quantum.Configuration(id=name, dim=dim, kind="povm", effects=tuple(effects))
    try:
        return quantum.Configuration(id=name, dim=dim, kind="projective", effects=povm.effects)
    except quantum.InvalidConfiguration:
        return povm


def elaborate(scenario: Scenario) -> Environment:
    env = Environment()
    _elaborate_systems(scenario, env)
    _elaborate_structures(scenario, env)
    _elaborate_configs(scenario, env)
    _elaborate_bridges(scenario, env)
    return env


def _elaborate_systems(scenario: Scenario, env: Environment) -> None:
    declared = {decl.id: decl for decl in scenario.systems}
    for decl in scenario.systems:
        if decl.dim > quantum.DIM_CAP:
            raise InternalLimit(
                f"system {decl.id!r} has dim {decl.dim}, beyond the engine cap of {quantum.DIM_CAP}"
            )
        if decl.dim < 1:
            env.report("E007", f"system {decl.id!r} must have a positive dimension", decl.span, decl.id)
            continue
        factors = None
        if decl.factors is not None:
            resolved = []
            ok = True
            for part in decl.factors:
                ref = declared.get(part)
                if ref is None or part == decl.id:
                    env.report(
                        "E006",
                        f"system {decl.id!r} references undeclared factor system {part!r}",
                        decl.span,
                        decl.id,
                    )
                    ok = False
                else:
                    resolved.append((part, ref.dim))
            if not ok:
                continue
            product = int(np.prod([d for _, d in resolved]))
            if product != decl.dim:
                env.report(
                    "E007",
                    f"system {decl.id!r} has dim {decl.dim} but its factors multiply to {product}",
                    decl.span,
                    decl.id,
                )
                continue
            factors = tuple(resolved)
        env.systems[decl.id] = SystemInfo(decl.id, decl.dim, factors)


def _elaborate_structures(scenario: Scenario, env: Environment) -> None:
    for decl in scenario.structures:
        system = env.systems.get(decl.over)
        if system is None:
            env.report(
                "E006", f"structure {decl.id!r} is over undeclared system {decl.over!r}",
                decl.span, decl.id,
            )
            continue
        entry = StructureEntry(decl.id, decl.over)
        body = decl.body
        try:
            if isinstance(body, StructureBuiltinBody):
                known = STRUCTURE_BUILTINS.get(body.name)
                if known is None:
                    env.report(
                        "E006", f"unknown builtin structure {body.name!r}", decl.span, decl.id
                    )
                    env.structures[decl.id] = entry
                    continue
                expected_dim, factory = known
                if expected_dim != system.dim:
                    raise quantum.DimensionMismatch(
                        f"builtin {body.name!r} has dim {expected_dim}, system {decl.over!r} has dim {system.dim}"
                    )
                value = factory()
            elif isinstance(body, VectorBody):
                if len(body.amplitudes) != system.dim:
                    raise quantum.DimensionMismatch(
                        f"{len(body.amplitudes)} amplitudes for a dim-{system.dim} system"
                    )
                value = quantum.QuantumStructure.pure(np.array(body.amplitudes, dtype=np.complex128))
            else:
                rows = body.rows
                if len(rows) != system.dim or any(len(r) != system.dim for r in rows):
                    raise quantum.DimensionMismatch(
                        f"matrix body must be {system.dim}x{system.dim}"
                    )
                value = quantum.QuantumStructure.mixed(np.array(rows, dtype=np.complex128))
            env.structures[decl.id] = StructureEntry(decl.id, decl.over, value)
        except quantum.QuantumError as exc:
            env.report("E007", f"structure {decl.id!r} is invalid: {exc}", decl.span, decl.id)
            env.structures[decl.id] = entry


def _elaborate_configs(scenario: Scenario, env: Environment) -> None:
    for decl in scenario.configurations:
        system = env.systems.get(decl.over)
        if system is None:
            env.report(
                "E006", f"config {decl.id!r} is over undeclared system {decl.over!r}",
                decl.span, decl.id,
            )
            continue
        entry = ConfigEntry(decl.id, decl.over)
        body = decl.body
        try:
            if isinstance(body, ConfigBuiltinBody):
                builder = CONFIG_BUILTINS.get(body.name)
                if builder is None:
                    env.report(
                        "E006", f"unknown builtin config {body.name!r}", decl.span, decl.id
                    )
                    env.configs[decl.id] = entry
                    continue
                try:
                    value = builder(decl.id, system.dim, body.args)
                except ValueError as exc:
                    env.report("E007", f"config {decl.id!r} is invalid: {exc}", decl.span, decl.id)
                    env.configs[decl.id] = entry
                    continue
            else:
                effects = []
                for effect in body.effects:
                    rows = effect.rows
                    if len(rows) != system.dim or any(len(r) != system.dim for r in rows):
                        raise quantum.DimensionMismatch(
                            f"effect {effect.label!r} must be {system.dim}x{system.dim}"
                        )
                    effects.append((effect.label, np.array(rows, dtype=np.complex128)))
                value = _build_configuration(decl.id, system.dim, effects)
            env.configs[decl.id] = ConfigEntry(decl.id, decl.over, value)
        except quantum.QuantumError as exc:
            env.report("E007", f"config {decl.id!r} is invalid: {exc}", decl.span, decl.id)
            env.configs[decl.id] = entry


def _elaborate_bridges(scenario: Scenario, env: Environment) -> None:
    for decl in scenario.bridges:
        if decl.config not in env.configs:
            env.report(
                "E006",
                f"bridge {decl.id!r} routes through undeclared configuration {decl.config!r}",
                decl.span,
                decl.id,
            )
        env.bridges[decl.id] = decl


def resolve_subject(subject: SubjectRef, env: Environment):
    """Resolve a claim subject to its root system and optional factor slot.
    Returns (ResolvedSubject, None) or (None, reason)."""
    root = env.systems.get(subject.system)
    if root is None:
        return None, f"unknown system {subject.system!r}"
    if subject.part is None:
        return ResolvedSubject(root.id, root.id, None, root.dim), None
    if root.factors is None:
        return None, f"system {subject.system!r} has no factor {subject.part!r}"
    matches = [i for i, (name, _) in enumerate(root.factors) if name == subject.part]
    if not matches:
        return None, f"system {subject.system!r} has no factor {subject.part!r}"
    if len(matches) > 1:
        return None, (
            f"factor {subject.part!r} is ambiguous in system {subject.system!r}"
        )
    index = matches[0]
    name, dim = root.factors[index]
    return ResolvedSubject(root.id, name, index, dim), None


def embed_into_root(config, root: SystemInfo, factor_index) -> "quantum.Configuration":
    """Lift a configuration onto the root system's space, identity-padding
    the factors it does not touch."""
    if factor_index is None:
        return config
    dims = [dim for _, dim in root.factors]
    return quantum.embed_config(config, dims, factor_index)


def resolve_pair(env: Environment, structure_id: str, config_id: str):
    """A declared structure together with a configuration acting on its
    space. A configuration over one factor of the structure's composite
    system is lifted, so querying it yields the composite-state marginal."""
    entry = env.structures.get(structure_id)
    if entry is None or entry.value is None:
        raise KeyError(f"unknown or invalid structure {structure_id!r}")
    centry = env.configs.get(config_id)
    if centry is None or centry.value is None:
        raise KeyError(f"unknown or invalid configuration {config_id!r}")
    if centry.over == entry.over:
        return entry.value, centry.value
    system = env.systems[entry.over]
    if system.factors is not None:
        matches = [i for i, (name, _) in enumerate(system.factors) if name == centry.over]
        if len(matches) == 1:
            return entry.value, embed_into_root(centry.value, system, matches[0])
        if len(matches) > 1:
            raise quantum.DimensionMismatch(
                f"configuration {config_id!r} is over {centry.over!r}, which appears "
                f"more than once in {entry.over!r}"
            )
    raise quantum.DimensionMismatch(
        f"configuration {config_id!r} (over {centry.over!r}) does not apply to "
        f"structure {structure_id!r} (over {entry.over!r})"
    )


def evaluate_probabilities(env: Environment, structure_id: str, config_id: str):
    structure, config = resolve_pair(env, structure_id, config_id)
    return quantum.born_probabilities(structure, config)
