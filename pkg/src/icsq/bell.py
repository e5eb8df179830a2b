"""Singlet correlations, CHSH evaluation, deterministic local-strategy
enumeration, and joint-distribution existence for 2-setting/2-outcome
bipartite experiments.

The Born engine is authoritative: every correlation here is computed by
measuring the singlet state with a joint configuration, never from a closed
form. Closed-form expressions appear only in tests, as independent oracles.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import quantum

FEASIBILITY_TOL = 1e-9

SETTING_PAIRS = ((0, 0), (0, 1), (1, 0), (1, 1))
PM = (1, -1)


class MalformedTable(Exception):
    """A correlation table violating normalization or no-signalling."""


@dataclass(frozen=True)
class AngleSettings:
    alice: tuple  # (a, a_prime) in radians
    bob: tuple  # (b, b_prime) in radians

    def __post_init__(self):
        for angle in (*self.alice, *self.bob):
            if not math.isfinite(angle):
                raise ValueError(f"angles must be finite, got {angle!r}")


@dataclass(frozen=True)
class LHVStrategy:
    """Deterministic +-1 outputs per local setting: the enumerable embodiment
    of pre-assigned outcome values."""

    alice_values: tuple  # (output at setting 0, output at setting 1)
    bob_values: tuple

    def __post_init__(self):
        for v in (*self.alice_values, *self.bob_values):
            if v not in (1, -1):
                raise ValueError(f"strategy outputs must be +1 or -1, got {v!r}")


@dataclass(frozen=True)
class CorrelationTable:
    """Joint +-1 outcome distributions for the four setting pairs, keyed
    (x, y) -> {(a, b): probability}."""

    joints: dict

    def __post_init__(self):
        for pair in SETTING_PAIRS:
            if pair not in self.joints:
                raise MalformedTable(f"missing setting pair {pair}")
            joint = self.joints[pair]
            total = 0.0
            for a, b in itertools.product(PM, PM):
                p = joint.get((a, b), 0.0)
                if p < -FEASIBILITY_TOL:
                    raise MalformedTable(f"negative probability {p} at {pair}")
                total += p
            if abs(total - 1.0) > FEASIBILITY_TOL:
                raise MalformedTable(f"joint at {pair} sums to {total}, expected 1")
        for x in (0, 1):
            for a in PM:
                m0 = sum(self.joints[(x, 0)].get((a, b), 0.0) for b in PM)
                m1 = sum(self.joints[(x, 1)].get((a, b), 0.0) for b in PM)
                if abs(m0 - m1) > FEASIBILITY_TOL:
                    raise MalformedTable(
                        f"no-signalling violated: Alice marginal at setting {x} differs "
                        f"across Bob's settings by {abs(m0 - m1)}"
                    )
        for y in (0, 1):
            for b in PM:
                m0 = sum(self.joints[(0, y)].get((a, b), 0.0) for a in PM)
                m1 = sum(self.joints[(1, y)].get((a, b), 0.0) for a in PM)
                if abs(m0 - m1) > FEASIBILITY_TOL:
                    raise MalformedTable(
                        f"no-signalling violated: Bob marginal at setting {y} differs "
                        f"across Alice's settings by {abs(m0 - m1)}"
                    )

    def correlator(self, x: int, y: int) -> float:
        joint = self.joints[(x, y)]
        return sum(a * b * joint.get((a, b), 0.0) for a, b in itertools.product(PM, PM))


@dataclass(frozen=True)
class LHVMaxResult:
    max: float
    witness: LHVStrategy


@dataclass(frozen=True)
class FeasibilityResult:
    exists: bool
    witness: dict = None  # assignment (a0, a1, b0, b1) -> weight, when feasible


def singlet_joint(alpha: float, beta: float) -> dict:
    """Joint outcome distribution of the singlet under spin measurements at
    the two polar angles, keyed by (alice outcome, bob outcome)."""
    config = quantum.tensor_config(
        quantum.spin_axis(alpha, id="alice"), quantum.spin_axis(beta, id="bob")
    )
    dist = quantum.born_probabilities(quantum.singlet(), config)
    return dict(dist.items())


def correlation(alpha: float, beta: float) -> float:
    """Expectation of the +-1 outcome product: P(same) - P(different)."""
    joint = singlet_joint(alpha, beta)
    same = joint[("up", "up")] + joint[("down", "down")]
    return same - (1.0 - same)


def chsh_value(settings: AngleSettings) -> float:
    """S = E(a,b) - E(a,b') + E(a',b) + E(a',b')."""
    a, ap = settings.alice
    b, bp = settings.bob
    return correlation(a, b) - correlation(a, bp) + correlation(ap, b) + correlation(ap, bp)


def strategy_chsh(strategy: LHVStrategy) -> float:
    """The same CHSH combination evaluated on deterministic local outputs."""
    va, vb = strategy.alice_values, strategy.bob_values
    return va[0] * vb[0] - va[0] * vb[1] + va[1] * vb[0] + va[1] * vb[1]


def all_strategies() -> list:
    return [
        LHVStrategy((a0, a1), (b0, b1))
        for a0, a1, b0, b1 in itertools.product(PM, PM, PM, PM)
    ]


def lhv_max_chsh() -> LHVMaxResult:
    """Exhaustive maximum of |S| over the 16 deterministic strategies."""
    best = None
    best_value = -math.inf
    for strategy in all_strategies():
        value = abs(strategy_chsh(strategy))
        if value > best_value:
            best_value = value
            best = strategy
    return LHVMaxResult(max=best_value, witness=best)


def table_from_strategy(strategy: LHVStrategy) -> CorrelationTable:
    joints = {}
    for x, y in SETTING_PAIRS:
        outcome = (strategy.alice_values[x], strategy.bob_values[y])
        joints[(x, y)] = {
            (a, b): (1.0 if (a, b) == outcome else 0.0) for a, b in itertools.product(PM, PM)
        }
    return CorrelationTable(joints)


def table_from_singlet(settings: AngleSettings) -> CorrelationTable:
    angles = {0: settings.alice[0], 1: settings.alice[1]}
    bangles = {0: settings.bob[0], 1: settings.bob[1]}
    signs = {"up": 1, "down": -1}
    joints = {}
    for x, y in SETTING_PAIRS:
        quantum_joint = singlet_joint(angles[x], bangles[y])
        joints[(x, y)] = {
            (signs[la], signs[lb]): p for (la, lb), p in quantum_joint.items()
        }
    return CorrelationTable(joints)


# ---------------------------------------------------------------------------
# Joint-distribution existence over the 16 deterministic global assignments.

ASSIGNMENTS = tuple(itertools.product(PM, PM, PM, PM))  # (a0, a1, b0, b1)


def _constraint_system(table: CorrelationTable):
    rows = []
    rhs = []
    for x, y in SETTING_PAIRS:
        joint = table.joints[(x, y)]
        for a, b in itertools.product(PM, PM):
            rows.append(
                [1.0 if (lam[x] == a and lam[2 + y] == b) else 0.0 for lam in ASSIGNMENTS]
            )
            rhs.append(joint.get((a, b), 0.0))
    return np.array(rows), np.array(rhs)


def _phase_one_simplex(A: np.ndarray, b: np.ndarray, tol: float):
    """Minimize the total artificial infeasibility of {Aq = b, q >= 0} with
    Bland's rule (guaranteed termination). Returns (optimum, q)."""
    m, n = A.shape
    b = b.copy()
    A = A.copy()
    negative = b < 0
    A[negative] *= -1.0
    b[negative] *= -1.0
    tableau = np.hstack([A, np.eye(m), b.reshape(-1, 1)])
    basis = list(range(n, n + m))
    # Reduced-cost row for minimizing the artificial sum.
    objective = np.zeros(n + m + 1)
    objective[:n] = -A.sum(axis=0)
    objective[-1] = -b.sum()
    pivot_eps = 1e-11
    while True:
        entering = -1
        for j in range(n + m):
            if objective[j] < -pivot_eps:
                entering = j
                break
        if entering < 0:
            break
        ratios = []
        for i in range(m):
            coeff = tableau[i, entering]
            if coeff > pivot_eps:
                ratios.append((tableau[i, -1] / coeff, basis[i], i))
        if not ratios:
            break  # unbounded cannot happen in phase one; bail defensively
        ratios.sort(key=lambda r: (r[0], r[1]))
        row = ratios[0][2]
        pivot = tableau[row, entering]
        tableau[row] /= pivot
        for i in range(m):
            if i != row and abs(tableau[i, entering]) > 1e-15:
                tableau[i] -= tableau[i, entering] * tableau[row]
        objective = objective - objective[entering] * tableau[row]
        basis[row] = entering
    optimum = -objective[-1]
    q = np.zeros(n)
    for i, var in enumerate(basis):
        if var < n:
            q[var] = tableau[i, -1]
    return optimum, np.clip(q, 0.0, None)


def joint_distribution_exists(table: CorrelationTable) -> FeasibilityResult:
    """Decide whether one probability distribution over the 16 deterministic
    global assignments reproduces all four measured joints, by exact linear
    feasibility at tolerance FEASIBILITY_TOL. Returns the distribution as a
    witness when it exists."""
    A, b = _constraint_system(table)
    optimum, q = _phase_one_simplex(A, b, FEASIBILITY_TOL)
    if optimum > FEASIBILITY_TOL:
        return FeasibilityResult(exists=False)
    witness = {ASSIGNMENTS[i]: float(q[i]) for i in range(len(ASSIGNMENTS))}
    return FeasibilityResult(exists=True, witness=witness)
