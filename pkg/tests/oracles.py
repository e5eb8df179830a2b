"""Independent reference computations used to pin expected test values.

Everything here is deliberately written with plain Python lists and explicit
loops, with no imports from the package under test, so the two sides of every
comparison stay independent.
"""

import cmath
import itertools
import math


def identity(n):
    return [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]


def outer(u, v):
    return [[a * b.conjugate() for b in v] for a in u]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def kron(a, b):
    na, nb = len(a), len(b)
    out = [[0j] * (na * nb) for _ in range(na * nb)]
    for i in range(na):
        for j in range(na):
            for k in range(nb):
                for l in range(nb):
                    out[i * nb + k][j * nb + l] = a[i][j] * b[k][l]
    return out


def trace_product(effect, rho):
    n = len(effect)
    total = 0j
    for i in range(n):
        for j in range(n):
            total += effect[i][j] * rho[j][i]
    return total.real


def born_oracle(state_vector, labeled_effects):
    rho = outer(state_vector, state_vector)
    return {label: trace_product(effect, rho) for label, effect in labeled_effects}


def project_oracle(state_vector, effect):
    """Apply a projector to a pure state and renormalize."""
    out = [sum(effect[i][j] * state_vector[j] for j in range(len(state_vector)))
           for i in range(len(effect))]
    norm = math.sqrt(sum(abs(c) ** 2 for c in out))
    return [c / norm for c in out]


def partial_trace_second(rho, dim_first, dim_second):
    """Trace out the second tensor factor of a density matrix."""
    out = [[0j] * dim_first for _ in range(dim_first)]
    for i in range(dim_first):
        for j in range(dim_first):
            for k in range(dim_second):
                out[i][j] += rho[i * dim_second + k][j * dim_second + k]
    return out


def spin_effects(theta, phi=0.0):
    up = [math.cos(theta / 2.0), cmath.exp(1j * phi) * math.sin(theta / 2.0)]
    e_up = outer(up, up)
    return [("up", e_up), ("down", mat_sub(identity(2), e_up))]


def spin_up_state(theta, phi=0.0):
    return [math.cos(theta / 2.0), cmath.exp(1j * phi) * math.sin(theta / 2.0)]


def bloch_dot(theta1, phi1, theta2, phi2):
    return (
        math.sin(theta1) * math.sin(theta2) * math.cos(phi1 - phi2)
        + math.cos(theta1) * math.cos(theta2)
    )


def bloch_up_probability(theta1, phi1, theta2, phi2):
    """Closed form cos^2(angle/2) between two Bloch directions."""
    return (1.0 + bloch_dot(theta1, phi1, theta2, phi2)) / 2.0


def singlet_vector():
    w = 1.0 / math.sqrt(2.0)
    return [0.0, w, -w, 0.0]


def singlet_same_outcome_probability(alpha, beta):
    """Half sin-squared of half the setting difference: the weight on each
    equal-outcome pair for the singlet."""
    return 0.5 * math.sin((alpha - beta) / 2.0) ** 2


SETTING_PAIRS = ((0, 0), (0, 1), (1, 0), (1, 1))


def chsh_battery(correlators):
    """Max |sum of +-E_xy| over the sign patterns with an odd number of
    minuses: the full CHSH-type inequality family for the 2x2x2 case."""
    worst = 0.0
    for signs in itertools.product((1, -1), repeat=4):
        if signs.count(-1) % 2 == 1:
            value = sum(s * correlators[pair] for s, pair in zip(signs, SETTING_PAIRS))
            worst = max(worst, abs(value))
    return worst


def table_correlators(table):
    out = {}
    for pair in SETTING_PAIRS:
        joint = table.joints[pair]
        out[pair] = sum(a * b * p for (a, b), p in joint.items())
    return out


def reconstruct_table_from_witness(witness):
    """Joint distributions implied by a distribution over the 16 global
    deterministic assignments (a0, a1, b0, b1)."""
    joints = {pair: {} for pair in SETTING_PAIRS}
    for (x, y) in SETTING_PAIRS:
        for assignment, weight in witness.items():
            key = (assignment[x], assignment[2 + y])
            joints[(x, y)][key] = joints[(x, y)].get(key, 0.0) + weight
    return joints


def ks_dot(u, v):
    return sum(a.conjugate() * b for a, b in zip(u, v))


def ks_verify_coloring(rays, contexts, assignment):
    """Direct check: one 1 per context, no orthogonal pair both 1."""
    for context in contexts:
        if sum(assignment[i] for i in context) != 1:
            return False
    n = len(rays)
    for i in range(n):
        for j in range(i + 1, n):
            if assignment[i] == 1 and assignment[j] == 1:
                if abs(ks_dot(rays[i], rays[j])) <= 1e-9:
                    return False
    return True


def ks_parity_obstruction(contexts, n_rays):
    """True when every ray sits in exactly two contexts while the context
    count is odd: any one-per-context assignment would need an odd total of
    1s counted with multiplicity, but double counting forces an even one."""
    appearances = [0] * n_rays
    for context in contexts:
        for i in context:
            appearances[i] += 1
    return all(count == 2 for count in appearances) and len(contexts) % 2 == 1
