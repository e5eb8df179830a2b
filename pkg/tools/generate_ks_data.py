#!/usr/bin/env python3
"""Regenerates the bundled Kochen-Specker instance files.

Run from the repository root:

    python3 tools/generate_ks_data.py

The 18-ray, 9-context dim-4 instance uses the classic vector table in which
every ray appears in exactly two contexts (so a one-per-context assignment
would need an even number of 1s counted with multiplicity, against 9 contexts
requiring an odd number). The 33-ray dim-3 instance takes all directions with
components from {0, +-1, +-sqrt(2)} in the four squared-norm patterns
{0,0,1}, {0,1,1}, {0,1,2}, {1,1,2}, with every complete orthogonal triad as a
context.
"""

import itertools
import math
import os

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "icsq", "data", "ks")

CABELLO_CONTEXT_VECTORS = [
    [(0, 0, 0, 1), (0, 0, 1, 0), (1, 1, 0, 0), (1, -1, 0, 0)],
    [(0, 0, 0, 1), (0, 1, 0, 0), (1, 0, 1, 0), (1, 0, -1, 0)],
    [(1, -1, 1, -1), (1, -1, -1, 1), (1, 1, 0, 0), (0, 0, 1, 1)],
    [(1, -1, 1, -1), (1, 1, 1, 1), (1, 0, -1, 0), (0, 1, 0, -1)],
    [(0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 1), (1, 0, 0, -1)],
    [(1, -1, -1, 1), (1, 1, 1, 1), (1, 0, 0, -1), (0, 1, -1, 0)],
    [(1, 1, -1, 1), (1, 1, 1, -1), (1, -1, 0, 0), (0, 0, 1, 1)],
    [(1, 1, -1, 1), (-1, 1, 1, 1), (1, 0, 1, 0), (0, 1, 0, -1)],
    [(1, 1, 1, -1), (-1, 1, 1, 1), (1, 0, 0, 1), (0, 1, -1, 0)],
]


def normalize(vec):
    norm = math.sqrt(sum(c * c for c in vec))
    return tuple(c / norm for c in vec)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def build_cabello():
    rays = []
    index = {}
    contexts = []
    for quad in CABELLO_CONTEXT_VECTORS:
        members = []
        for vec in quad:
            if vec not in index:
                index[vec] = len(rays)
                rays.append(normalize(vec))
            members.append(index[vec])
        contexts.append(tuple(members))
    assert len(rays) == 18, len(rays)
    assert len(contexts) == 9
    appearances = [0] * len(rays)
    for context in contexts:
        assert len(set(context)) == 4
        for i in context:
            appearances[i] += 1
        for i, j in itertools.combinations(context, 2):
            assert abs(dot(rays[i], rays[j])) < 1e-12, (i, j)
    assert all(count == 2 for count in appearances), appearances
    return 4, rays, contexts


def build_peres():
    root2 = math.sqrt(2.0)
    raw = set()
    for pattern in [(0, 0, 1), (0, 1, 1), (0, 1, root2), (1, 1, root2)]:
        for perm in set(itertools.permutations(pattern)):
            nonzero = [i for i, c in enumerate(perm) if c != 0]
            for signs in itertools.product((1.0, -1.0), repeat=len(nonzero)):
                vec = list(perm)
                for pos, sign in zip(nonzero, signs):
                    vec[pos] *= sign
                # canonical sign: first nonzero component positive
                first = next(c for c in vec if c != 0)
                if first < 0:
                    vec = [-c for c in vec]
                raw.add(tuple(vec))
    rays = sorted(normalize(v) for v in raw)
    assert len(rays) == 33, len(rays)
    contexts = []
    for i, j, k in itertools.combinations(range(len(rays)), 3):
        if (
            abs(dot(rays[i], rays[j])) < 1e-9
            and abs(dot(rays[i], rays[k])) < 1e-9
            and abs(dot(rays[j], rays[k])) < 1e-9
        ):
            contexts.append((i, j, k))
    return 3, rays, contexts


def write_instance(filename, dim, rays, contexts, title):
    path = os.path.join(OUT_DIR, filename)
    lines = [f"# {title}", f"dim {dim}"]
    for idx, ray in enumerate(rays):
        lines.append(f"ray {idx} " + " ".join(repr(c) for c in ray))
    for context in contexts:
        lines.append("context " + " ".join(str(i) for i in context))
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")
    print(f"wrote {path}: {len(rays)} rays, {len(contexts)} contexts")


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    dim, rays, contexts = build_cabello()
    write_instance("cabello18.ks", dim, rays, contexts, "18 rays, 9 contexts, dim 4")
    dim, rays, contexts = build_peres()
    write_instance("peres33.ks", dim, rays, contexts, f"33 rays, dim 3, all complete orthogonal triads")


if __name__ == "__main__":
    main()
