"""Finite-dimensional quantum states, measurement configurations, and the
configuration-relative Born probability map.

Everything here is a pure function of its inputs: states and configurations
are immutable once validated, and sampling draws from an explicitly seeded
generator, so values can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

# Numerical tolerances, chosen for double precision at dim <= 64.
TOL_NORM = 1e-9
TOL_HERM = 1e-9
TOL_PSD = -1e-9  # eigenvalue floor for positive semidefiniteness
TOL_ZERO = 1e-12
DIM_CAP = 64

# Outcome labels are bare identifiers or tuples of labels (for joint
# configurations built with tensor_config).
Label = Union[str, tuple]


class QuantumError(Exception):
    """Base class for engine errors."""


class DimensionMismatch(QuantumError):
    pass


class InvalidStructure(QuantumError):
    pass


class InvalidConfiguration(QuantumError):
    pass


class ZeroProbabilityOutcome(QuantumError):
    pass


class NonProjectiveUpdate(QuantumError):
    pass


def _as_complex(value, shape: tuple[int, ...], what: str, err) -> np.ndarray:
    arr = np.asarray(value, dtype=np.complex128)
    if arr.shape != shape:
        raise err(f"{what}: expected shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise err(f"{what}: entries must be finite")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


def _check_dim(dim: int, err) -> None:
    if not isinstance(dim, int) or dim < 1:
        raise err(f"dimension must be a positive integer, got {dim!r}")
    if dim > DIM_CAP:
        raise err(f"dimension {dim} exceeds the supported cap of {DIM_CAP}")


def _is_hermitian(m: np.ndarray) -> bool:
    return float(np.max(np.abs(m - m.conj().T))) <= TOL_HERM


def _min_eigenvalue(m: np.ndarray) -> float:
    herm = (m + m.conj().T) / 2
    return float(np.linalg.eigvalsh(herm)[0])


@dataclass(frozen=True, eq=False)
class QuantumStructure:
    """A pure state vector or density matrix over a finite dimension."""

    dim: int
    body: np.ndarray  # shape (dim,) for pure states, (dim, dim) for mixed

    def __post_init__(self):
        _check_dim(self.dim, InvalidStructure)
        if self.body.ndim == 1:
            vec = _as_complex(self.body, (self.dim,), "state vector", InvalidStructure)
            norm = float(np.linalg.norm(vec))
            if abs(norm - 1.0) > TOL_NORM:
                raise InvalidStructure(f"state vector norm is {norm}, expected 1")
            object.__setattr__(self, "body", vec)
        elif self.body.ndim == 2:
            rho = _as_complex(self.body, (self.dim, self.dim), "density matrix", InvalidStructure)
            if not _is_hermitian(rho):
                raise InvalidStructure("density matrix is not Hermitian")
            if _min_eigenvalue(rho) < TOL_PSD:
                raise InvalidStructure("density matrix is not positive semidefinite")
            trace = complex(np.trace(rho))
            if abs(trace - 1.0) > TOL_NORM:
                raise InvalidStructure(f"density matrix trace is {trace}, expected 1")
            object.__setattr__(self, "body", rho)
        else:
            raise InvalidStructure(f"state body must be a vector or matrix, got ndim={self.body.ndim}")

    @classmethod
    def pure(cls, amplitudes) -> "QuantumStructure":
        arr = np.asarray(amplitudes, dtype=np.complex128)
        return cls(dim=arr.shape[0] if arr.ndim == 1 else -1, body=arr)

    @classmethod
    def mixed(cls, matrix) -> "QuantumStructure":
        arr = np.asarray(matrix, dtype=np.complex128)
        return cls(dim=arr.shape[0] if arr.ndim == 2 else -1, body=arr)

    @property
    def is_pure(self) -> bool:
        return self.body.ndim == 1

    def density(self) -> np.ndarray:
        """The density-matrix form, regardless of how the state is stored."""
        if self.is_pure:
            return np.outer(self.body, self.body.conj())
        return self.body


@dataclass(frozen=True, eq=False)
class Configuration:
    """A named, labeled set of outcome effects summing to the identity."""

    id: str
    dim: int
    kind: str  # "projective" | "povm"
    effects: tuple  # ordered ((label, ndarray), ...)

    def __post_init__(self):
        _check_dim(self.dim, InvalidConfiguration)
        if self.kind not in ("projective", "povm"):
            raise InvalidConfiguration(f"unknown configuration kind {self.kind!r}")
        if not self.effects:
            raise InvalidConfiguration("configuration has no effects")
        seen: set = set()
        frozen = []
        total = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for label, op in self.effects:
            if label in seen:
                raise InvalidConfiguration(f"duplicate outcome label {label!r}")
            seen.add(label)
            mat = _as_complex(op, (self.dim, self.dim), f"effect {label!r}", InvalidConfiguration)
            if not _is_hermitian(mat):
                raise InvalidConfiguration(f"effect {label!r} is not Hermitian")
            if _min_eigenvalue(mat) < TOL_PSD:
                raise InvalidConfiguration(f"effect {label!r} is not positive semidefinite")
            frozen.append((label, mat))
            total = total + mat
        if float(np.max(np.abs(total - np.eye(self.dim)))) > TOL_HERM:
            raise InvalidConfiguration("effects do not sum to the identity")
        if self.kind == "projective":
            for label, mat in frozen:
                if float(np.max(np.abs(mat @ mat - mat))) > TOL_HERM:
                    raise InvalidConfiguration(f"effect {label!r} is not idempotent")
            for i, (la, ma) in enumerate(frozen):
                for lb, mb in frozen[i + 1:]:
                    if float(np.max(np.abs(ma @ mb))) > TOL_HERM:
                        raise InvalidConfiguration(f"effects {la!r} and {lb!r} are not orthogonal")
        object.__setattr__(self, "effects", tuple(frozen))

    @property
    def labels(self) -> tuple:
        return tuple(label for label, _ in self.effects)

    def effect(self, label: Label) -> np.ndarray:
        for lab, mat in self.effects:
            if lab == label:
                return mat
        raise KeyError(label)


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probabilities per outcome label, in configuration declaration order."""

    entries: dict

    def __post_init__(self):
        total = 0.0
        for label, p in self.entries.items():
            if not (0.0 <= p <= 1.0):
                raise InvalidStructure(f"probability for {label!r} is {p}, outside [0, 1]")
            total += p
        if abs(total - 1.0) > TOL_NORM:
            raise InvalidStructure(f"probabilities sum to {total}, expected 1")

    def __getitem__(self, label: Label) -> float:
        return self.entries[label]

    def items(self):
        return self.entries.items()


@dataclass(frozen=True)
class RepeatabilityReport:
    max_abs_deviation: float
    passed: bool


def born_probabilities(structure: QuantumStructure, config: Configuration) -> OutcomeDistribution:
    """The probability map: trace(E_i rho) per outcome, clamped to [0, 1]."""
    if structure.dim != config.dim:
        raise DimensionMismatch(
            f"structure dim {structure.dim} != configuration dim {config.dim}"
        )
    rho = structure.density()
    entries = {}
    for label, effect in config.effects:
        p = float(np.real(np.trace(effect @ rho)))
        entries[label] = min(1.0, max(0.0, p))
    return OutcomeDistribution(entries)


def update(structure: QuantumStructure, config: Configuration, outcome: Label) -> QuantumStructure:
    """Post-outcome bookkeeping update E rho E / tr(E rho E), projective only."""
    if config.kind != "projective":
        raise NonProjectiveUpdate(f"configuration {config.id!r} is not projective")
    prob = born_probabilities(structure, config)
    if outcome not in prob.entries:
        raise InvalidConfiguration(f"configuration {config.id!r} has no outcome {outcome!r}")
    if prob[outcome] <= TOL_ZERO:
        raise ZeroProbabilityOutcome(
            f"outcome {outcome!r} has probability {prob[outcome]} under {config.id!r}"
        )
    effect = config.effect(outcome)
    if structure.is_pure:
        vec = effect @ structure.body
        return QuantumStructure.pure(vec / np.linalg.norm(vec))
    mat = effect @ structure.body @ effect
    return QuantumStructure.mixed(mat / np.real(np.trace(mat)))


def tensor(a: QuantumStructure, b: QuantumStructure) -> QuantumStructure:
    """Composite of two states; dimensions multiply."""
    _check_dim(a.dim * b.dim, InvalidStructure)
    if a.is_pure and b.is_pure:
        return QuantumStructure.pure(np.kron(a.body, b.body))
    return QuantumStructure.mixed(np.kron(a.density(), b.density()))


def tensor_config(a: Configuration, b: Configuration) -> Configuration:
    """Joint configuration: paired labels, Kronecker-product effects."""
    _check_dim(a.dim * b.dim, InvalidConfiguration)
    effects = []
    for la, ea in a.effects:
        for lb, eb in b.effects:
            effects.append(((la, lb), np.kron(ea, eb)))
    kind = "projective" if a.kind == "projective" and b.kind == "projective" else "povm"
    return Configuration(
        id=f"({a.id} x {b.id})", dim=a.dim * b.dim, kind=kind, effects=tuple(effects)
    )


def embed_config(config: Configuration, factor_dims, position: int) -> Configuration:
    """Lift a configuration onto one tensor factor of a composite space,
    identity-padding the other factors. Labels are unchanged."""
    if config.dim != factor_dims[position]:
        raise DimensionMismatch(
            f"configuration dim {config.dim} != factor dim {factor_dims[position]}"
        )
    left = int(np.prod(factor_dims[:position], dtype=np.int64)) if position > 0 else 1
    right = (
        int(np.prod(factor_dims[position + 1:], dtype=np.int64))
        if position + 1 < len(factor_dims)
        else 1
    )
    total = left * config.dim * right
    _check_dim(total, InvalidConfiguration)
    effects = []
    for label, op in config.effects:
        padded = np.kron(np.kron(np.eye(left), op), np.eye(right))
        effects.append((label, padded))
    return Configuration(id=config.id, dim=total, kind=config.kind, effects=tuple(effects))


def compatible(c1: Configuration, c2: Configuration) -> bool:
    """True iff every effect of c1 commutes with every effect of c2."""
    if c1.dim != c2.dim:
        raise DimensionMismatch(f"configuration dims differ: {c1.dim} != {c2.dim}")
    for _, ea in c1.effects:
        for _, eb in c2.effects:
            if float(np.max(np.abs(ea @ eb - eb @ ea))) > TOL_HERM:
                return False
    return True


def sample(structure: QuantumStructure, config: Configuration, seed: int, n: int) -> dict:
    """Outcome counts for n seeded draws. Deterministic given the seed;
    ties broken by label declaration order via inverse-CDF sampling."""
    if n < 0:
        raise ValueError(f"sample size must be non-negative, got {n}")
    dist = born_probabilities(structure, config)
    labels = list(dist.entries.keys())
    counts = {label: 0 for label in labels}
    if n == 0:
        return counts
    cumulative = np.cumsum([dist.entries[label] for label in labels])
    cumulative[-1] = max(cumulative[-1], 1.0)
    rng = np.random.default_rng(seed)
    draws = rng.random(n)
    indices = np.searchsorted(cumulative, draws, side="right")
    for idx, hits in zip(*np.unique(indices, return_counts=True)):
        counts[labels[int(idx)]] = int(hits)
    return counts


def repeatability_check(
    structure: QuantumStructure, config: Configuration, seed: int, n: int, tol: float
) -> RepeatabilityReport:
    """Compare seeded frequencies against the probability map: outcomes are
    objective exactly when repetition reproduces them within tolerance."""
    if n < 1:
        raise ValueError(f"repeatability check needs n >= 1, got {n}")
    dist = born_probabilities(structure, config)
    counts = sample(structure, config, seed, n)
    deviation = max(abs(counts[label] / n - p) for label, p in dist.items())
    return RepeatabilityReport(max_abs_deviation=deviation, passed=deviation < tol)


# ---------------------------------------------------------------------------
# Builders for the standard states and configurations used by scenarios.

_SQRT_HALF = 1.0 / math.sqrt(2.0)


def basis_state(dim: int, index: int) -> QuantumStructure:
    vec = np.zeros(dim, dtype=np.complex128)
    vec[index] = 1.0
    return QuantumStructure.pure(vec)


def up_z() -> QuantumStructure:
    return basis_state(2, 0)


def down_z() -> QuantumStructure:
    return basis_state(2, 1)


def plus_x() -> QuantumStructure:
    return QuantumStructure.pure([_SQRT_HALF, _SQRT_HALF])


def minus_x() -> QuantumStructure:
    return QuantumStructure.pure([_SQRT_HALF, -_SQRT_HALF])


def singlet() -> QuantumStructure:
    """(|01> - |10>) / sqrt(2): perfectly anticorrelated at equal settings."""
    return QuantumStructure.pure([0.0, _SQRT_HALF, -_SQRT_HALF, 0.0])


def bell_phi_plus() -> QuantumStructure:
    """(|00> + |11>) / sqrt(2)."""
    return QuantumStructure.pure([_SQRT_HALF, 0.0, 0.0, _SQRT_HALF])


def spin_axis(theta: float, phi: float = 0.0, id: str = "") -> Configuration:
    """Projective spin-1/2 pair along the Bloch axis (theta, phi),
    labeled up/down."""
    up = np.array(
        [math.cos(theta / 2.0), math.sin(theta / 2.0) * complex(math.cos(phi), math.sin(phi))],
        dtype=np.complex128,
    )
    e_up = np.outer(up, up.conj())
    e_down = np.eye(2) - e_up
    name = id or f"spin_axis({theta!r}, {phi!r})"
    return Configuration(
        id=name, dim=2, kind="projective", effects=(("up", e_up), ("down", e_down))
    )


def computational_config(dim: int, labels=None, id: str = "") -> Configuration:
    """Standard-basis projective configuration; labels default to e0..e{d-1}."""
    if labels is None:
        labels = tuple(f"e{i}" for i in range(dim))
    if len(labels) != dim:
        raise InvalidConfiguration(f"expected {dim} labels, got {len(labels)}")
    effects = []
    for i, label in enumerate(labels):
        mat = np.zeros((dim, dim), dtype=np.complex128)
        mat[i, i] = 1.0
        effects.append((label, mat))
    return Configuration(
        id=id or f"computational({dim})", dim=dim, kind="projective", effects=tuple(effects)
    )


def superposition_config(labels=("bright", "dark"), id: str = "") -> Configuration:
    """The +/- basis on a qubit; bright/dark interference detection."""
    plus = np.full((2, 2), 0.5, dtype=np.complex128)
    minus = np.eye(2) - plus
    return Configuration(
        id=id or "superposition", dim=2, kind="projective",
        effects=((labels[0], plus), (labels[1], minus)),
    )


def bell_basis_config(id: str = "") -> Configuration:
    """The four Bell projectors on a two-qubit space."""
    states = {
        "phi_plus": [_SQRT_HALF, 0.0, 0.0, _SQRT_HALF],
        "phi_minus": [_SQRT_HALF, 0.0, 0.0, -_SQRT_HALF],
        "psi_plus": [0.0, _SQRT_HALF, _SQRT_HALF, 0.0],
        "psi_minus": [0.0, _SQRT_HALF, -_SQRT_HALF, 0.0],
    }
    effects = []
    for label, amps in states.items():
        vec = np.asarray(amps, dtype=np.complex128)
        effects.append((label, np.outer(vec, vec.conj())))
    return Configuration(id=id or "bell_basis", dim=4, kind="projective", effects=tuple(effects))
