"""Cone complexes with a lattice on every cone.

Each cone ``σ`` carries its own lattice ``N_σ = Z^dim``, its rays as
primitive columns (listed in the vertex order of the stratum), and for every
codimension-one face ``τ`` an injective integer matrix ``N_τ -> N_σ`` with
saturated image.  There is no ambient lattice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Mapping, Sequence

from .homology import determinant, identity_matrix, invariant_factors, matmul, smith_normal_form, transpose
from .strata import StratifiedComplex, ValidationReport, complete_flag, validate_complex
from .subdivide import SubdivisionResult, star_subdivide

Vector = tuple[int, ...]


@dataclass(frozen=True)
class LatticeCone:
    """``rays[i]`` is the ray of the i-th vertex, in coordinates of ``N_σ``.
    ``face_embeddings[f]`` is a ``dim x dim(f)`` matrix (rows of ints)."""

    id: str
    dim: int
    rays: tuple[Vector, ...]
    face_embeddings: Mapping[str, tuple[Vector, ...]] = field(default_factory=dict)

    @property
    def simplicial(self) -> bool:
        return len(self.rays) == self.dim

    def ray_matrix(self) -> list[list[int]]:
        """``dim x (#rays)``, rays as columns."""
        return transpose(self.rays, self.dim) if self.rays else [[] for _ in range(self.dim)]


@dataclass
class LatticeConeComplex:
    complex: StratifiedComplex
    cones: dict[str, LatticeCone]
    ambient: dict[str, list[list[int]]] | None = None

    def __getitem__(self, sid: str) -> LatticeCone:
        return self.cones[sid]

    def maximal_cones(self) -> list[str]:
        return [s for s in self.complex.ids if not self.complex.upper_covers(s)]

    def ray_of(self, sid: str, vertex: str) -> Vector:
        return self.cones[sid].rays[self.complex[sid].vertices.index(vertex)]

    def embedding(self, low: str, high: str) -> list[list[int]]:
        """``N_low -> N_high`` composed along a complete flag."""
        if not self.complex.le(low, high):
            raise ValueError(f"{low!r} is not a face of {high!r}")
        flag = complete_flag(self.complex, low, high)
        m = identity_matrix(self.cones[low].dim)
        for a, b in zip(flag, flag[1:]):
            e = [list(r) for r in self.cones[b].face_embeddings[a]]
            m = matmul(e, m, inner=self.cones[a].dim)
        return m

    def local_coordinates(self, sid: str, v: Sequence[int]) -> list[int]:
        """Coordinates in ``N_sid`` of a vector given in the ambient lattice
        the complex was built from."""
        if self.ambient is None:
            raise ValueError("complex has no ambient lattice")
        return solve_integer(self.ambient[sid], v)

    def global_vector(self, sid: str, v: Sequence[int]) -> Vector:
        if self.ambient is None:
            raise ValueError("complex has no ambient lattice")
        B = self.ambient[sid]
        return tuple(sum(B[i][k] * v[k] for k in range(len(v))) for i in range(len(B)))

    @classmethod
    def from_global_rays(cls, c: StratifiedComplex, rays: Mapping[str, Sequence[int]]) -> "LatticeConeComplex":
        """Lattices are the saturations of the spans of each cone's rays in
        one ambient ``Z^n``; only the resulting per-cone data is kept."""
        basis: dict[str, list[list[int]]] = {}
        cones: dict[str, LatticeCone] = {}
        for s in sorted(c.strata, key=lambda t: (t.codim, t.id)):
            cols = [list(map(int, rays[v])) for v in s.vertices]
            B = saturation_basis(transpose(cols, len(cols[0])), len(cols))
            basis[s.id] = B
            coords = tuple(tuple(solve_integer(B, col)) for col in cols)
            embs = {}
            for f in s.lower_covers:
                embs[f] = tuple(tuple(r) for r in transpose([solve_integer(B, bcol) for bcol in transpose(basis[f])], len(B[0])))
            cones[s.id] = LatticeCone(s.id, len(B[0]), coords, embs)
        return cls(c, cones, basis)


# -- exact helpers -------------------------------------------------------------

def saturation_basis(A: list[list[int]], ncols: int) -> list[list[int]]:
    """Columns of the result (an ``m x rank`` matrix) form a basis of the
    saturation of the column span of ``A``."""
    f = smith_normal_form(A, ncols)
    k = f.rank
    return [row[:k] for row in f.U_inv]


def solve_rational(B: list[list[int]], v: Sequence[int]) -> list[Fraction] | None:
    """The unique ``x`` with ``B x = v`` for ``B`` of full column rank, or
    ``None`` if there is none."""
    m = len(B)
    n = len(B[0]) if m else 0
    M = [[Fraction(x) for x in B[i]] + [Fraction(v[i])] for i in range(m)]
    piv_cols, r = [], 0
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                k = M[i][c]
                M[i] = [a - k * b for a, b in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    if any(M[i][n] != 0 for i in range(r, m)):
        return None
    if len(piv_cols) != n:
        raise ValueError("matrix does not have full column rank")
    return [M[i][n] for i in range(n)]


def solve_integer(B: list[list[int]], v: Sequence[int]) -> list[int]:
    x = solve_rational(B, v)
    if x is None or any(t.denominator != 1 for t in x):
        raise ValueError(f"{list(v)} is not in the lattice spanned by the basis")
    return [int(t) for t in x]


def primitive(v: Sequence[int]) -> Vector:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        raise ValueError("zero vector has no primitive rescaling")
    return tuple(int(x) // g for x in v)


def is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g == 1


# -- invariants ----------------------------------------------------------------

def multiplicity(cone: LatticeCone) -> int:
    """Index of the sublattice generated by the rays."""
    if not cone.simplicial:
        raise ValueError(f"cone {cone.id!r} is not simplicial")
    if cone.dim == 0:
        return 1
    return abs(determinant(cone.ray_matrix()))


def multiplicity_by_smith(cone: LatticeCone) -> int:
    """Product of invariant factors; agrees with :func:`multiplicity`."""
    out = 1
    for f in invariant_factors(cone.ray_matrix(), len(cone.rays)):
        out *= f
    return out


def is_smooth(cc: LatticeConeComplex) -> tuple[bool, str | None]:
    """Smooth iff every cone has multiplicity one; the witness is the first
    cone (by codimension, then id) that does not."""
    for s in sorted(cc.complex.strata, key=lambda t: (t.codim, t.id)):
        cone = cc.cones[s.id]
        if not cone.simplicial:
            raise ValueError(f"cone {s.id!r} is not simplicial")
        if multiplicity(cone) != 1:
            return False, s.id
    return True, None


def barycenter(cone: LatticeCone) -> Vector:
    return primitive([sum(col) for col in zip(*cone.rays)])


def validate_lattice(cc: LatticeConeComplex) -> ValidationReport:
    rep = ValidationReport(checks=["lattice: dims, primitive rays, embeddings carry rays"])
    c = cc.complex
    for s in c.strata:
        cone = cc.cones.get(s.id)
        if cone is None:
            rep.add("missing cone", [s.id])
            continue
        if len(cone.rays) != len(s.vertices):
            rep.add("ray count", [s.id], f"{len(cone.rays)} rays for {len(s.vertices)} vertices")
            continue
        if any(len(r) != cone.dim for r in cone.rays):
            rep.add("ray dimension", [s.id])
            continue
        if s.simplicial and cone.dim != s.codim:
            rep.add("cone dimension", [s.id], f"dim {cone.dim} for codimension {s.codim}")
        for r in cone.rays:
            if not is_primitive(r):
                rep.add("ray not primitive", [s.id], str(r))
        if cone.rays and len(invariant_factors(cone.ray_matrix(), len(cone.rays))) != cone.dim:
            rep.add("rays not full rank", [s.id])
        for f in s.lower_covers:
            e = cone.face_embeddings.get(f)
            if e is None:
                rep.add("missing face embedding", [s.id, f])
                continue
            fd = cc.cones[f].dim
            if len(e) != cone.dim or any(len(r) != fd for r in e):
                rep.add("embedding shape", [s.id, f])
                continue
            fac = invariant_factors([list(r) for r in e], fd)
            if len(fac) != fd or any(x != 1 for x in fac):
                rep.add("embedding not saturated", [s.id, f])
            for v in c[f].vertices:
                img = tuple(sum(e[i][k] * cc.ray_of(f, v)[k] for k in range(fd)) for i in range(cone.dim))
                if img != cc.ray_of(s.id, v):
                    rep.add("embedding does not carry rays", [s.id, f, v])
    return rep


# -- star subdivision at a lattice point ---------------------------------------

def _barycentric_coordinates(cone: LatticeCone, v: Sequence[int]) -> list[Fraction]:
    x = solve_rational(cone.ray_matrix(), v)
    if x is None:
        raise ValueError(f"{list(v)} is not in the span of cone {cone.id!r}")
    return x


def star_at_vector(
    cc: LatticeConeComplex, center: str, v: Sequence[int], new_vertex: str = "E"
) -> tuple[LatticeConeComplex, SubdivisionResult]:
    """Star subdivision of ``center`` at the primitive interior point ``v``
    (coordinates in ``N_center``)."""
    cone = cc.cones[center]
    if len(v) != cone.dim:
        raise ValueError(f"vector has {len(v)} coordinates, cone {center!r} has dimension {cone.dim}")
    if not is_primitive(v):
        raise ValueError(f"{list(v)} is not primitive")
    lam = _barycentric_coordinates(cone, v)
    if any(x <= 0 for x in lam):
        raise ValueError(f"{list(v)} is not in the interior of cone {center!r}")
    r = star_subdivide(cc.complex, center, new_vertex)
    base, derived = r.base, r.derived
    E = r.new_vertex
    # ray of each vertex in N_up, looked up by vertex id so reordering is harmless
    ray = {(s, u): cc.ray_of(s, u) for s in base.ids for u in base[s].vertices}
    img_v = {up: tuple(row[0] for row in matmul(cc.embedding(center, up), [[x] for x in v])) for up in base.above(center)}
    basis: dict[str, list[list[int]]] = {}
    ambient: dict[str, list[list[int]]] = {}
    cones: dict[str, LatticeCone] = {}
    order = sorted(derived.strata, key=lambda t: (t.codim, t.id))
    for s in order:
        p = r.correspondence[s.id]
        if p.kind != "exceptional":
            old = cc.cones[s.id]
            rays = tuple(ray[(s.id, u)] for u in s.vertices)
            cones[s.id] = LatticeCone(s.id, old.dim, rays, dict(old.face_embeddings))
            if cc.ambient is not None:
                ambient[s.id] = cc.ambient[s.id]
            continue
        up = p.base
        cols = [list(ray[(up, u)]) if u != E else list(img_v[up]) for u in s.vertices]
        B = saturation_basis(transpose(cols, len(cols[0])), len(cols))
        basis[s.id] = B
        coords = tuple(tuple(solve_integer(B, col)) for col in cols)
        embs = {}
        for f in s.lower_covers:
            pf = r.correspondence[f]
            if pf.kind == "exceptional":
                F = matmul(cc.embedding(pf.base, up), basis[f], inner=len(basis[f]))
            else:
                F = cc.embedding(f, up)
            embs[f] = tuple(tuple(row) for row in transpose([solve_integer(B, col) for col in transpose(F, len(F[0]))], len(B[0])))
        cones[s.id] = LatticeCone(s.id, len(B[0]), coords, embs)
        if cc.ambient is not None:
            ambient[s.id] = matmul(cc.ambient[up], B, inner=len(B))
    return LatticeConeComplex(derived, cones, ambient if cc.ambient is not None else None), r


# -- resolution ----------------------------------------------------------------

def parallelepiped_points(cone: LatticeCone) -> list[tuple[Vector, tuple[Fraction, ...]]]:
    """Nonzero lattice points ``sum λ_i r_i`` with ``0 <= λ_i < 1``."""
    R = cone.ray_matrix()
    f = smith_normal_form(R, len(cone.rays))
    mods = [x for x in f.invariant_factors]
    out = []
    for cls in product(*(range(m) for m in mods)):
        if not any(cls):
            continue
        x = [row[0] for row in matmul(f.U_inv, [[c] for c in cls] + [[0]] * (cone.dim - len(cls)), inner=cone.dim)]
        lam = [t - (t.numerator // t.denominator) for t in _barycentric_coordinates(cone, x)]
        pt = tuple(int(sum(l * r[i] for l, r in zip(lam, cone.rays))) for i in range(cone.dim))
        out.append((pt, tuple(lam)))
    return out


def resolution_point(cone: LatticeCone) -> tuple[Vector, tuple[Fraction, ...]]:
    """Least coordinate sum, ties broken lexicographically on coordinates."""
    pts = parallelepiped_points(cone)
    if not pts:
        raise ValueError(f"cone {cone.id!r} is smooth")
    return min(pts, key=lambda t: (sum(t[1]), t[1]))


@dataclass(frozen=True)
class ResolutionStep:
    cone: str
    face: str
    point: Vector
    new_vertex: str
    max_multiplicity_before: int
    max_multiplicity_after: int
    multiplicities_before: tuple[int, ...]
    multiplicities_after: tuple[int, ...]


def maximal_multiplicities(cc: LatticeConeComplex) -> tuple[int, ...]:
    return tuple(sorted((multiplicity(cc.cones[s]) for s in cc.maximal_cones()), reverse=True))


def toric_resolve(cc: LatticeConeComplex, max_steps: int = 10_000, prefix: str = "E") -> tuple[LatticeConeComplex, list[ResolutionStep]]:
    """Star subdivisions at parallelepiped points of a worst cone until
    smooth.  Each step replaces cones of multiplicity ``m`` by cones of
    multiplicity ``λ_i m < m``, so the sorted multiset of multiplicities of
    maximal cones decreases and the loop terminates."""
    if not cc.complex.is_simplicial:
        raise ValueError("resolution needs a simplicial complex; subdivide barycentrically first")
    steps: list[ResolutionStep] = []
    taken = set(cc.complex.vertex_ids) | set(cc.complex.ids)
    while True:
        mults = {s: multiplicity(cc.cones[s]) for s in cc.maximal_cones()}
        worst = max(mults.values(), default=1)
        if worst == 1:
            return cc, steps
        if len(steps) >= max_steps:
            raise RuntimeError("resolution did not finish within the step limit")
        sid = min(s for s, m in mults.items() if m == worst)
        cone = cc.cones[sid]
        pt, lam = resolution_point(cone)
        verts = cc.complex[sid].vertices
        support = frozenset(v for v, l in zip(verts, lam) if l > 0)
        face = cc.complex.face_with_vertices(sid, support)
        y = solve_integer(cc.embedding(face, sid), pt)
        k = len(steps) + 1
        name = f"{prefix}{k}"
        while name in taken:
            name += "'"
        taken.add(name)
        before = tuple(sorted(mults.values(), reverse=True))
        cc, _ = star_at_vector(cc, face, y, name)
        after = maximal_multiplicities(cc)
        steps.append(ResolutionStep(sid, face, tuple(y), name, worst, after[0] if after else 1, before, after))


def single_cone_complex(rays: Sequence[Sequence[int]], name: str = "cone") -> LatticeConeComplex:
    """One simplicial cone with the given rays (as vectors in ``Z^n``)."""
    from .catalog import simplicial_complex

    n = len(rays)
    vs = [f"D{i}" for i in range(n)]
    c = simplicial_complex(name, vs, [vs], sep="")
    return LatticeConeComplex.from_global_rays(c, {v: r for v, r in zip(vs, rays)})


def check_complex(cc: LatticeConeComplex) -> ValidationReport:
    rep = validate_complex(cc.complex)
    rep.extend(validate_lattice(cc))
    return rep
