"""Kochen-Specker ray/context instances and 0/1 non-contextual colorability.

A valid coloring assigns every ray 0 or 1 such that each context (a complete
orthogonal basis) contains exactly one 1 and no two orthogonal rays anywhere
in the instance are both 1. The search is deterministic backtracking with
unit propagation: rays are branched in ascending index order, value 1 before
0, so nodes_explored is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

import numpy as np

ORTH_TOL = 1e-9

BUILTIN_FILES = {
    "cabello-18": "cabello18.ks",
    "peres-33": "peres33.ks",
}


@dataclass(frozen=True, eq=False)
class KSInstance:
    dim: int
    rays: tuple  # of unit vectors (np.ndarray, complex)
    contexts: tuple  # of index tuples, each naming dim mutually orthogonal rays


@dataclass(frozen=True)
class Coloring:
    assignment: dict  # ray index -> 0 | 1


@dataclass(frozen=True)
class InstanceProblem:
    kind: str  # "dimension" | "ray-norm" | "context-size" | "bad-index" | "not-orthogonal"
    message: str
    rays: tuple = ()
    context: int = None


@dataclass(frozen=True)
class ColoringResult:
    colorable: bool
    witness: Coloring = None
    nodes_explored: int = 0


def make_instance(dim: int, rays, contexts) -> KSInstance:
    frozen_rays = []
    for ray in rays:
        arr = np.asarray(ray, dtype=np.complex128)
        arr = arr.copy()
        arr.flags.writeable = False
        frozen_rays.append(arr)
    return KSInstance(dim=dim, rays=tuple(frozen_rays), contexts=tuple(tuple(c) for c in contexts))


def verify_instance(instance: KSInstance) -> list:
    """Structural checks; returns one problem per violation."""
    problems = []
    if instance.dim < 3:
        problems.append(
            InstanceProblem("dimension", f"dim must be at least 3, got {instance.dim}")
        )
    for i, ray in enumerate(instance.rays):
        if ray.shape != (instance.dim,):
            problems.append(
                InstanceProblem("ray-norm", f"ray {i} has {ray.shape[0]} components", rays=(i,))
            )
            continue
        norm = float(np.linalg.norm(ray))
        if abs(norm - 1.0) > ORTH_TOL:
            problems.append(
                InstanceProblem("ray-norm", f"ray {i} has norm {norm}, expected 1", rays=(i,))
            )
    n = len(instance.rays)
    for c, context in enumerate(instance.contexts):
        if len(context) != instance.dim:
            problems.append(
                InstanceProblem(
                    "context-size",
                    f"context {c} has {len(context)} members, expected {instance.dim}",
                    context=c,
                )
            )
        bad_index = [i for i in context if not (0 <= i < n)]
        if bad_index:
            problems.append(
                InstanceProblem(
                    "bad-index", f"context {c} names missing rays {bad_index}", context=c
                )
            )
            continue
        for pos, i in enumerate(context):
            for j in context[pos + 1:]:
                overlap = abs(complex(np.vdot(instance.rays[i], instance.rays[j])))
                if overlap > ORTH_TOL:
                    problems.append(
                        InstanceProblem(
                            "not-orthogonal",
                            f"rays {i} and {j} in context {c} are not orthogonal "
                            f"(|<i|j>| = {overlap:.3e})",
                            rays=(i, j),
                            context=c,
                        )
                    )
    return problems


def orthogonality_pairs(instance: KSInstance) -> set:
    """All ray index pairs (i, j), i < j, whose vectors are orthogonal."""
    pairs = set()
    n = len(instance.rays)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(complex(np.vdot(instance.rays[i], instance.rays[j]))) <= ORTH_TOL:
                pairs.add((i, j))
    return pairs


def verify_coloring(instance: KSInstance, coloring: Coloring) -> bool:
    """Direct check of both constraints, independent of the search."""
    assignment = coloring.assignment
    if any(i not in assignment or assignment[i] not in (0, 1) for i in range(len(instance.rays))):
        return False
    for context in instance.contexts:
        if sum(assignment[i] for i in context) != 1:
            return False
    for i, j in orthogonality_pairs(instance):
        if assignment[i] == 1 and assignment[j] == 1:
            return False
    return True


def color(instance: KSInstance) -> ColoringResult:
    """Backtracking search for a valid 0/1 assignment."""
    n = len(instance.rays)
    neighbors = [set() for _ in range(n)]
    for i, j in orthogonality_pairs(instance):
        neighbors[i].add(j)
        neighbors[j].add(i)
    member_of = [[] for _ in range(n)]
    for c, context in enumerate(instance.contexts):
        for i in context:
            member_of[i].append(c)

    assignment = [-1] * n
    nodes = 0

    def propagate(trail: list, queue: list) -> bool:
        """Assign queued (ray, value) pairs and their consequences; returns
        False on contradiction. trail records rays assigned here."""
        while queue:
            ray, value = queue.pop()
            if assignment[ray] != -1:
                if assignment[ray] != value:
                    return False
                continue
            assignment[ray] = value
            trail.append(ray)
            if value == 1:
                for other in neighbors[ray]:
                    if assignment[other] == 1:
                        return False
                    if assignment[other] == -1:
                        queue.append((other, 0))
            for c in member_of[ray]:
                context = instance.contexts[c]
                ones = sum(1 for i in context if assignment[i] == 1)
                unknown = [i for i in context if assignment[i] == -1]
                if ones > 1:
                    return False
                if ones == 1:
                    for i in unknown:
                        queue.append((i, 0))
                elif not unknown:
                    return False  # all zeros in a complete context
                elif len(unknown) == 1:
                    queue.append((unknown[0], 1))
        return True

    def undo(trail: list) -> None:
        for ray in trail:
            assignment[ray] = -1

    def search() -> bool:
        nonlocal nodes
        ray = next((i for i in range(n) if assignment[i] == -1), None)
        if ray is None:
            return True
        for value in (1, 0):
            nodes += 1
            trail: list = []
            if propagate(trail, [(ray, value)]) and search():
                return True
            undo(trail)
        return False

    if search():
        witness = Coloring({i: assignment[i] for i in range(n)})
        return ColoringResult(colorable=True, witness=witness, nodes_explored=nodes)
    return ColoringResult(colorable=False, witness=None, nodes_explored=nodes)


# ---------------------------------------------------------------------------
# Instance file format:
#   dim N
#   ray <idx> <c1> ... <cN>      components as decimals, complex as re,im
#   context <i1> ... <iN>


def parse_instance(text: str) -> KSInstance:
    dim = None
    rays = {}
    contexts = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        try:
            if kind == "dim":
                if dim is not None:
                    raise ValueError("duplicate dim line")
                dim = int(parts[1])
            elif kind == "ray":
                if dim is None:
                    raise ValueError("ray before dim")
                idx = int(parts[1])
                comps = [_parse_component(p) for p in parts[2:]]
                if len(comps) != dim:
                    raise ValueError(f"ray {idx} has {len(comps)} components, expected {dim}")
                if idx in rays:
                    raise ValueError(f"duplicate ray index {idx}")
                rays[idx] = comps
            elif kind == "context":
                if dim is None:
                    raise ValueError("context before dim")
                members = [int(p) for p in parts[1:]]
                contexts.append(tuple(members))
            else:
                raise ValueError(f"unknown directive {kind!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if dim is None:
        raise ValueError("missing dim line")
    if sorted(rays) != list(range(len(rays))):
        raise ValueError("ray indices must be contiguous from 0")
    ordered = [rays[i] for i in range(len(rays))]
    for context in contexts:
        for i in context:
            if not (0 <= i < len(ordered)):
                raise ValueError(f"context references missing ray {i}")
    return make_instance(dim, ordered, contexts)


def _parse_component(text: str) -> complex:
    if "," in text:
        re_part, im_part = text.split(",", 1)
        return complex(float(re_part), float(im_part))
    return complex(float(text), 0.0)


def format_instance(instance: KSInstance) -> str:
    lines = [f"dim {instance.dim}"]
    for idx, ray in enumerate(instance.rays):
        comps = []
        for c in ray:
            if c.imag == 0.0:
                comps.append(repr(float(c.real)))
            else:
                comps.append(f"{float(c.real)!r},{float(c.imag)!r}")
        lines.append(f"ray {idx} " + " ".join(comps))
    for context in instance.contexts:
        lines.append("context " + " ".join(str(i) for i in context))
    return "\n".join(lines) + "\n"


def load_file(path: str) -> KSInstance:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_instance(handle.read())


def builtin_instances() -> dict:
    """The bundled instances, keyed by name."""
    out = {}
    for name, filename in BUILTIN_FILES.items():
        data = resources.files("icsq").joinpath(f"data/ks/{filename}").read_text("utf-8")
        out[name] = parse_instance(data)
    return out


def load_builtin(name: str) -> KSInstance:
    if name not in BUILTIN_FILES:
        raise KeyError(f"no builtin instance named {name!r}")
    return builtin_instances()[name]
