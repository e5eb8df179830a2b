#!/usr/bin/env python3
"""Regenerates the bundled case-study scenario files and their expected
probability tables.

Run from the repository root:

    python3 tools/generate_casebook.py

The expected tables are computed here with a small standalone complex-matrix
oracle (plain lists, explicit trace sums) so the golden data never depends on
the engine under test and no number is hand-typed.
"""

import cmath
import json
import math
import os

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "icsq", "data", "cases")

W = 1.0 / math.sqrt(2.0)
PI = math.pi


# --- minimal complex matrix oracle -----------------------------------------


def outer(u, v):
    return [[a * b.conjugate() for b in v] for a in u]


def identity(n):
    return [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]


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


def born(state_vector, effects):
    """probabilities via explicit trace(E rho) sums."""
    rho = outer(state_vector, state_vector)
    probs = {}
    for label, effect in effects:
        total = 0j
        n = len(effect)
        for i in range(n):
            for j in range(n):
                total += effect[i][j] * rho[j][i]
        probs[label] = total.real
    return probs


def spin_pair_effects(theta, phi=0.0):
    up = [math.cos(theta / 2.0), cmath.exp(1j * phi) * math.sin(theta / 2.0)]
    e_up = outer(up, up)
    return [("up", e_up), ("down", mat_sub(identity(2), e_up))]


def joint_effects(left, right):
    out = []
    for la, ea in left:
        for lb, eb in right:
            out.append((f"({la}, {lb})", kron(ea, eb)))
    return out


def lifted(effects, left_dim, right_dim):
    out = []
    for label, effect in effects:
        mat = effect
        if left_dim > 1:
            mat = kron(identity(left_dim), mat)
        if right_dim > 1:
            mat = kron(mat, identity(right_dim))
        out.append((label, mat))
    return out


def basis_effects(labels):
    n = len(labels)
    out = []
    for i, label in enumerate(labels):
        mat = [[0.0] * n for _ in range(n)]
        mat[i][i] = 1.0
        out.append((label, mat))
    return out


def bell_effects():
    states = {
        "phi_plus": [W, 0.0, 0.0, W],
        "phi_minus": [W, 0.0, 0.0, -W],
        "psi_plus": [0.0, W, W, 0.0],
        "psi_minus": [0.0, W, -W, 0.0],
    }
    return [(label, outer(vec, vec)) for label, vec in states.items()]


PLUS_MINUS = [
    ("bright", [[0.5, 0.5], [0.5, 0.5]]),
    ("dark", [[0.5, -0.5], [-0.5, 0.5]]),
]


# --- amplitude formatting for scenario files --------------------------------


def fmt(value):
    c = complex(value)
    if c.imag == 0.0:
        return repr(c.real)
    if c.real == 0.0:
        return f"{c.imag!r}i"
    if c.imag < 0.0:
        return f"{c.real!r} - {-c.imag!r}i"
    return f"{c.real!r} + {c.imag!r}i"


def fmt_row(row):
    return ", ".join(fmt(v) for v in row)


def fmt_matrix(mat):
    return " ; ".join(fmt_row(row) for row in mat)


# --- case studies ------------------------------------------------------------


def phase_amplitudes(k):
    """(|0> + e^{i k pi/4} |1>) / sqrt(2) on the path qubit."""
    z = cmath.exp(1j * (k * PI / 4.0))
    return [complex(W), z * W]


def marked_amplitudes(k):
    """(|0, m0> + e^{i k pi/4} |1, m1>) / sqrt(2): marker correlated to path."""
    z = cmath.exp(1j * (k * PI / 4.0))
    return [complex(W), 0j, 0j, z * W]


def stern_gerlach_case():
    source = f"""# Stern-Gerlach: outcome claims are conditioned on the measuring arrangement.
system particle dim 2
structure prep over particle builtin up_z
config z_axis over particle builtin spin_axis(0.0)
config x_axis over particle builtin spin_axis({repr(PI / 2)})
config tilted over particle builtin spin_axis({repr(PI / 3)})

# "the particle has spin-up", with no configuration: rejected as ill-typed
statement intrinsic_spin {{ yields(particle) = up }}

# the licensed, configuration-relative form
statement z_relative {{ yields(particle, z_axis) = up }}

# combining outcomes from non-commuting arrangements needs a bridge
statement cross_axis {{
  compose {{
    yields(particle, z_axis) = up
    yields(particle, x_axis) = down
  }}
}}
"""
    expected_codes = {"intrinsic_spin": ["E001"], "z_relative": [], "cross_axis": ["E002"]}
    up = [1.0, 0.0]
    expected = [
        ("prep", "z_axis", born(up, spin_pair_effects(0.0))),
        ("prep", "x_axis", born(up, spin_pair_effects(PI / 2))),
        ("prep", "tilted", born(up, spin_pair_effects(PI / 3))),
    ]
    return source, expected_codes, expected


def double_slit_case():
    lines = [
        "# Two-path interferometer: open geometry shows fringes, a which-path",
        "# marker removes them; the two detection arrangements do not commute.",
        "system path dim 2",
        "system marker dim 2",
        "system marked dim 4 = path x marker",
    ]
    for k in range(8):
        lines.append(f"structure path_{k} over path {{ {fmt_row(phase_amplitudes(k))} }}")
    for k in range(8):
        lines.append(f"structure marked_{k} over marked {{ {fmt_row(marked_amplitudes(k))} }}")
    lines.append("config open_screen over path builtin interference()")
    lines.append("config slit_detector over path builtin which_path()")
    open_marked = [(label, kron(mat, identity(2))) for label, mat in PLUS_MINUS]
    lines.append("config open_marked over marked {")
    for label, mat in open_marked:
        lines.append(f"  {label}: [ {fmt_matrix(mat)} ]")
    lines.append("}")
    lines.append("")
    lines.append("statement intrinsic_path { yields(path) = slit_a }")
    lines.append("statement fringe { yields(path, open_screen) = bright }")
    lines.append("statement path_and_fringe {")
    lines.append("  compose {")
    lines.append("    yields(path, slit_detector) = slit_a")
    lines.append("    yields(path, open_screen) = bright")
    lines.append("  }")
    lines.append("}")
    source = "\n".join(lines) + "\n"
    expected_codes = {
        "intrinsic_path": ["E001"],
        "fringe": [],
        "path_and_fringe": ["E002"],
    }
    expected = []
    for k in range(8):
        expected.append((f"path_{k}", "open_screen", born(phase_amplitudes(k), PLUS_MINUS)))
    for k in range(8):
        expected.append((f"marked_{k}", "open_marked", born(marked_amplitudes(k), open_marked)))
    return source, expected_codes, expected


def singlet_bell_case():
    source = f"""# An entangled pair: one shared structure, two wings, angle-settable arrangements.
system left dim 2
system right dim 2
system pair dim 4 = left x right
structure shared over pair builtin singlet
config alice_0 over left builtin spin_axis(0.0)
config alice_90 over left builtin spin_axis({repr(PI / 2)})
config bob_45 over right builtin spin_axis({repr(PI / 4)})
config both_0 over pair builtin spin_pair(0.0, 0.0)
config both_45 over pair builtin spin_pair(0.0, {repr(PI / 4)})

# outcomes on different wings touch disjoint factors: no bridge needed
statement cross_wing {{
  compose {{
    yields(pair.left, alice_0) = up
    yields(pair.right, bob_45) = down
  }}
}}

# a joint distribution over two non-commuting settings of one wing is undefined
statement same_wing_joint {{ joint(left, alice_0, alice_90) }}

# the same request over one setting twice is harmless
statement equal_joint {{ joint(left, alice_0, alice_0) }}
"""
    expected_codes = {"cross_wing": [], "same_wing_joint": ["E005"], "equal_joint": []}
    singlet = [0.0, W, -W, 0.0]
    expected = [
        ("shared", "both_0", born(singlet, joint_effects(spin_pair_effects(0.0), spin_pair_effects(0.0)))),
        ("shared", "both_45", born(singlet, joint_effects(spin_pair_effects(0.0), spin_pair_effects(PI / 4)))),
    ]
    return source, expected_codes, expected


def wigner_friend_case():
    source = """# A sealed lab: the friend's record-basis outcome and Wigner's
# superposition-basis outcome admit no common account without a physical
# bridge (opening the door); deducing from the state is not a bridge.
system particle dim 2
system record dim 2
system lab dim 4 = particle x record
structure sealed_lab over lab builtin bell_phi_plus
config friend_readout over record {
  saw_up: [ 1.0, 0.0 ; 0.0, 0.0 ]
  saw_down: [ 0.0, 0.0 ; 0.0, 1.0 ]
}
config wigner_basis over lab builtin bell_basis()
config door over lab builtin computational()
bridge open_door physical via door {
  (saw_up, phi_plus) -> e0
  (saw_down, phi_plus) -> e3
}
bridge deduce_from_state epistemic via door {
  (saw_up, phi_plus) -> e0
  (saw_down, phi_plus) -> e3
}

statement unbridged_account {
  compose {
    yields(lab.record, friend_readout) = saw_up
    yields(lab, wigner_basis) = phi_plus
  }
}

statement deduced_account {
  compose {
    yields(lab.record, friend_readout) = saw_up
    yields(lab, wigner_basis) = phi_plus
  } using deduce_from_state
}

statement door_account {
  compose {
    yields(lab.record, friend_readout) = saw_up
    yields(lab, wigner_basis) = phi_plus
  } using open_door
}
"""
    expected_codes = {
        "unbridged_account": ["E002"],
        "deduced_account": ["E003"],
        "door_account": [],
    }
    sealed = [W, 0.0, 0.0, W]
    friend = [
        ("saw_up", [[1.0, 0.0], [0.0, 0.0]]),
        ("saw_down", [[0.0, 0.0], [0.0, 1.0]]),
    ]
    expected = [
        ("sealed_lab", "wigner_basis", born(sealed, bell_effects())),
        ("sealed_lab", "friend_readout", born(sealed, lifted(friend, 2, 1))),
        ("sealed_lab", "door", born(sealed, basis_effects(["e0", "e1", "e2", "e3"]))),
    ]
    return source, expected_codes, expected


REPEATABILITY_PAIRS = [
    ("stern_gerlach", "prep", "z_axis"),
    ("stern_gerlach", "prep", "x_axis"),
    ("stern_gerlach", "prep", "tilted"),
    ("double_slit", "path_1", "open_screen"),
    ("double_slit", "path_2", "open_screen"),
    ("double_slit", "path_3", "open_screen"),
    ("double_slit", "marked_2", "open_marked"),
    ("singlet_bell", "shared", "both_0"),
    ("singlet_bell", "shared", "both_45"),
    ("wigner_friend", "sealed_lab", "wigner_basis"),
    ("wigner_friend", "sealed_lab", "door"),
]


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    cases = {
        "stern_gerlach": stern_gerlach_case(),
        "double_slit": double_slit_case(),
        "singlet_bell": singlet_bell_case(),
        "wigner_friend": wigner_friend_case(),
    }
    manifest = {}
    for name, (source, expected_codes, expected) in cases.items():
        path = os.path.join(OUT_DIR, f"{name}.icsq")
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(source)
        manifest[name] = {
            "expected_codes": expected_codes,
            "expected_probabilities": [
                {"structure": s, "config": c, "probabilities": probs}
                for s, c, probs in expected
            ],
        }
        print(f"wrote {path}")
    manifest["repeatability_pairs"] = [list(p) for p in REPEATABILITY_PAIRS]
    json_path = os.path.join(OUT_DIR, "expected.json")
    with open(json_path, "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")
    print(f"wrote {json_path}")


if __name__ == "__main__":
    main()
