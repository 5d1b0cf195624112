"""Seeded random ordered simplicial complexes."""

from __future__ import annotations

import random
from itertools import combinations

from .catalog import simplicial_complex
from .strata import Stratum, StratifiedComplex, VertexId


def random_complex(
    rng: random.Random,
    max_vertices: int = 6,
    max_dim: int = 3,
    partial_order: float = 0.25,
    duplicates: float = 0.2,
    name: str = "random",
) -> StratifiedComplex:
    """Down-closure of a few random facets of dimension at most ``max_dim``.

    With probability ``partial_order`` the vertex order only relates vertices
    that share a stratum; with probability ``duplicates`` one maximal
    stratum gets a twin over the same vertices.
    """
    n = rng.randint(1, max_vertices)
    vs = [f"D{i}" for i in range(n)]
    facets = [[v] for v in vs]
    for _ in range(rng.randint(1, 4)):
        k = rng.randint(1, min(max_dim + 1, n))
        facets.append(rng.sample(vs, k))
    c = simplicial_complex(name, vs, facets)
    strata = list(c.strata)
    if rng.random() < duplicates:
        tops = [s for s in strata if not c.upper_covers(s.id) and s.codim >= 2]
        if tops:
            s = rng.choice(tops)
            strata.append(Stratum(s.id + "'", s.vertices, s.faces, s.label + "'"))
    vertices = c.vertices
    if rng.random() < partial_order:
        share = {(a, b) for s in strata for a, b in combinations(s.vertices, 2)}
        vertices = [VertexId(v, None, tuple(w for w in vs[i + 1:] if (v, w) in share)) for i, v in enumerate(vs)]
    return StratifiedComplex(name, vertices, strata)


def random_complexes(seed: int, cases: int, **kw) -> list[StratifiedComplex]:
    rng = random.Random(seed)
    return [random_complex(rng, name=f"random-{seed}-{i}", **kw) for i in range(cases)]
