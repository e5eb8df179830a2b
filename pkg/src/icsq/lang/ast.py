"""Abstract syntax for scenario files.

Every node carries a source span; spans are excluded from equality so that
parse(serialize(scenario)) compares structurally equal to the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

Outcome = Union[str, tuple]


@dataclass(frozen=True)
class Span:
    line: int = field(compare=False, default=1)  # 1-based
    col: int = field(compare=False, default=1)  # 1-based
    length: int = field(compare=False, default=0)
    offset: int = field(compare=False, default=0)

    def __str__(self) -> str:
        return f"line {self.line}, col {self.col}"


NO_SPAN = Span()


@dataclass(frozen=True)
class SystemDecl:
    id: str
    dim: int
    factors: Optional[tuple]  # (left_system_id, right_system_id) for composites
    span: Span = NO_SPAN


@dataclass(frozen=True)
class StructureBuiltinBody:
    name: str


@dataclass(frozen=True)
class VectorBody:
    amplitudes: tuple  # of complex


@dataclass(frozen=True)
class MatrixBody:
    rows: tuple  # of tuples of complex


@dataclass(frozen=True)
class StructureDecl:
    id: str
    over: str
    body: Union[StructureBuiltinBody, VectorBody, MatrixBody]
    span: Span = NO_SPAN


@dataclass(frozen=True)
class ConfigBuiltinBody:
    name: str
    args: tuple  # of float


@dataclass(frozen=True)
class EffectEntry:
    label: str
    rows: tuple  # of tuples of complex
    span: Span = NO_SPAN


@dataclass(frozen=True)
class EffectTableBody:
    effects: tuple  # of EffectEntry


@dataclass(frozen=True)
class ConfigDecl:
    id: str
    over: str
    body: Union[ConfigBuiltinBody, EffectTableBody]
    span: Span = NO_SPAN


@dataclass(frozen=True)
class BridgeMapEntry:
    source: tuple  # of outcome labels, one per composite child
    target: Outcome
    span: Span = NO_SPAN


@dataclass(frozen=True)
class BridgeDecl:
    id: str
    kind: str  # "physical" | "epistemic"
    config: str
    maps: tuple  # of BridgeMapEntry
    span: Span = NO_SPAN


@dataclass(frozen=True)
class SubjectRef:
    """A claim subject: a system, or one named factor of a composite."""

    system: str
    part: Optional[str] = None
    span: Span = NO_SPAN

    def __str__(self) -> str:
        return self.system if self.part is None else f"{self.system}.{self.part}"


@dataclass(frozen=True)
class StatementNode:
    """One claim. kind is one of yields | intrinsic-yields | composite |
    joint-request; intrinsic-yields is the configuration-free form, kept
    parseable so the checker can reject it semantically."""

    kind: str
    subject: Optional[SubjectRef] = None
    config: Optional[str] = None
    config2: Optional[str] = None  # second configuration of a joint request
    outcome: Optional[Outcome] = None
    children: tuple = ()
    bridge: Optional[str] = None
    span: Span = NO_SPAN


@dataclass(frozen=True)
class StatementDecl:
    id: str
    node: StatementNode
    span: Span = NO_SPAN


@dataclass(frozen=True)
class Scenario:
    systems: tuple = ()
    structures: tuple = ()
    configurations: tuple = ()
    bridges: tuple = ()
    statements: tuple = ()
