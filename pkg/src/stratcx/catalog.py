"""Small named complexes used throughout the tests, the CLI and the docs."""

from __future__ import annotations

from itertools import combinations
from typing import Mapping, Sequence

from .strata import Stratum, StratifiedComplex, VertexId


def simplicial_complex(
    name: str,
    vertices: Sequence[str],
    facets: Sequence[Sequence[str]],
    labels: Mapping[str, str] | None = None,
    base: str | tuple[str, int] = "k",
    sep: str = "",
) -> StratifiedComplex:
    """The down-closure of ``facets`` with one stratum per vertex set.

    ``vertices`` is listed in increasing order.  A stratum id is the
    concatenation of its vertex ids; labels default to the id.
    """
    rank = {v: i for i, v in enumerate(vertices)}
    sets: set[tuple[str, ...]] = {(v,) for v in vertices}
    for f in facets:
        f = tuple(sorted(f, key=rank.__getitem__))
        for k in range(1, len(f) + 1):
            sets.update(combinations(f, k))
    ident = {vs: sep.join(vs) for vs in sets}
    if len(set(ident.values())) != len(ident):
        raise ValueError("stratum ids collide; pass a separator")
    labels = labels or {}
    strata = []
    for vs, sid in ident.items():
        faces = tuple(ident[vs[:j] + vs[j + 1:]] for j in range(len(vs))) if len(vs) > 1 else ()
        strata.append(Stratum(sid, vs, faces, labels.get(sid, sid)))
    vx = [VertexId(v, i) for i, v in enumerate(vertices)]
    return StratifiedComplex(name, vx, strata, base)


def point_complex() -> StratifiedComplex:
    return simplicial_complex("point", ["D0"], [["D0"]], {"D0": "X0"})


def edge_complex() -> StratifiedComplex:
    return simplicial_complex("edge", ["D0", "D1"], [["D0", "D1"]], {"D0": "a", "D1": "b", "D0D1": "e"})


def triangle_complex() -> StratifiedComplex:
    """Three divisors meeting pairwise, no triple point: a 3-cycle."""
    labels = {"D0": "a", "D1": "b", "D2": "c", "D0D1": "ab", "D1D2": "bc", "D0D2": "ca"}
    return simplicial_complex("triangle", ["D0", "D1", "D2"], [["D0", "D1"], ["D1", "D2"], ["D0", "D2"]], labels)


def filled_triangle() -> StratifiedComplex:
    return simplicial_complex("filled-triangle", ["D0", "D1", "D2"], [["D0", "D1", "D2"]])


def cycle_complex(n: int) -> StratifiedComplex:
    """n divisors arranged in a cycle; for n = 2 the two divisors meet twice."""
    if n < 2:
        raise ValueError("a cycle needs at least two components")
    vs = [f"D{i}" for i in range(n)]
    if n == 2:
        return bigon()
    facets = [[vs[i], vs[(i + 1) % n]] for i in range(n)]
    return simplicial_complex(f"cycle-{n}", vs, facets, sep="")


def bigon() -> StratifiedComplex:
    """Two divisors meeting in two points: two strata share a vertex set."""
    vx = [VertexId("D0", 0), VertexId("D1", 1)]
    strata = [
        Stratum("D0", ("D0",), (), "a"),
        Stratum("D1", ("D1",), (), "b"),
        Stratum("p", ("D0", "D1"), ("D1", "D0"), "pt"),
        Stratum("q", ("D0", "D1"), ("D1", "D0"), "pt"),
    ]
    return StratifiedComplex("bigon", vx, strata)


def simplex_boundary(d: int) -> StratifiedComplex:
    """d+2 divisors with every proper intersection nonempty: a d-sphere."""
    vs = [f"D{i}" for i in range(d + 2)]
    facets = list(combinations(vs, d + 1))
    return simplicial_complex(f"sphere-{d}", vs, facets)


def simplex(d: int) -> StratifiedComplex:
    vs = [f"D{i}" for i in range(d + 1)]
    return simplicial_complex(f"simplex-{d}", vs, [vs])


def tetrahedron_boundary() -> StratifiedComplex:
    return simplex_boundary(2)


def square_cone() -> StratifiedComplex:
    """Four divisors meeting cyclically around one point (a non-simplicial
    cone over a square).  Only barycentric subdivision accepts it."""
    vs = ["D0", "D1", "D2", "D3"]
    vx = [VertexId(v, i) for i, v in enumerate(vs)]
    strata = [Stratum(v, (v,), (), v.lower()) for v in vs]
    edges = []
    for i in range(4):
        a, b = sorted((vs[i], vs[(i + 1) % 4]))
        sid = a + b
        edges.append(sid)
        strata.append(Stratum(sid, (a, b), (b, a), sid.lower()))
    strata.append(Stratum("P", tuple(vs), (), "p", covers=tuple(sorted(edges)), grade=3))
    return StratifiedComplex("square-cone", vx, strata)


NAMED = {
    "point": point_complex,
    "edge": edge_complex,
    "triangle": triangle_complex,
    "filled-triangle": filled_triangle,
    "bigon": bigon,
    "tetrahedron-boundary": tetrahedron_boundary,
    "square-cone": square_cone,
}
