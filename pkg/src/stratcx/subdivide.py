"""Barycentric, star and blowup subdivisions with their comparison maps.

Every constructor returns a :class:`SubdivisionResult`.  Its ``maps``
attribute builds (once) the chain complexes of base and derived complex and
the maps the homotopy equivalences are made of:

* barycentric: ``phi: Č(derived) -> Sd(base)`` with ``phi o λ = Sd(f)``;
* star and blowup: ``Č(μ) = λ o Sd(μ) o sd``, its closed form, a section
  ``gamma`` with ``Č(μ) o gamma = id`` and a homotopy
  ``d h + h d = id - gamma o Č(μ)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping

from .builders import (
    BOUNDED,
    BuiltComplex,
    build_cech,
    build_last_vertex,
    build_sd,
    build_sd_pushforward,
    build_subdivision_map,
    map_from_rule,
    sd_indexing,
)
from .chain import (
    ChainHomotopy,
    ChainMap,
    compose_chain_maps,
    identity_map,
    is_identity,
    maps_equal,
    verify_chain_map,
    verify_complex,
    verify_homotopy,
)
from .freecat import ArrowTable, invert_iso, node
from .strata import (
    EXCEPTIONAL,
    IN_LAST_DIVISOR,
    ExtendedStratum,
    PosetMap,
    Stratum,
    StratifiedComplex,
    ValidationReport,
    VertexId,
    star_link,
    validate_complex,
)

STRICT = "strict"


@dataclass(frozen=True)
class Provenance:
    """Where a derived stratum comes from.

    ``kind`` is ``strict`` (``base`` is the stratum it is the strict transform
    of), ``chain`` (barycentric; ``chain`` lists the base strata) or
    ``exceptional`` (``base`` is its image, ``subset`` the divisors of the
    center it lies on, ``component`` the component index over the image).
    """

    kind: str
    base: str
    subset: tuple[str, ...] = ()
    component: int = 0
    chain: tuple[str, ...] = ()


@dataclass(frozen=True)
class IntersectionProfile:
    """How a smooth center ``Z`` inside the closed stratum of ``center`` meets
    the strata above it.

    ``mode`` is ``proper`` (``Z`` strictly inside the stratum; ``counts``
    gives the number of components of ``Z`` on each stratum of the star,
    default one), ``stratum`` (``Z`` is the whole stratum) or ``none`` (``Z``
    lies in no stratum).
    """

    center: str
    mode: str = "proper"
    counts: Mapping[str, int] = field(default_factory=dict)
    label: str = "Z"

    def count(self, sid: str) -> int:
        return self.counts.get(sid, 1)


@dataclass
class SubdivisionResult:
    kind: str
    base: StratifiedComplex
    derived: StratifiedComplex
    pushforward: PosetMap
    correspondence: dict[str, Provenance]
    iso_tags: frozenset[tuple[str, str]]
    derived_isos: frozenset[tuple[str, str]] = frozenset()
    center: str | None = None
    center_vertices: tuple[str, ...] = ()
    new_vertex: str | None = None
    sec: dict[tuple[str, str], str] = field(default_factory=dict)
    wedge: dict[str, str] = field(default_factory=dict)
    profile: IntersectionProfile | None = None

    @property
    def last_center_vertex(self) -> str | None:
        return self.center_vertices[-1] if self.center_vertices else None

    def is_exceptional(self, sid: str) -> bool:
        return self.correspondence[sid].kind == EXCEPTIONAL

    def arrow_table(self) -> ArrowTable:
        isos = [(node(self.derived, a), node(self.base, b)) for a, b in self.iso_tags]
        isos += [(node(self.derived, a), node(self.derived, b)) for a, b in self.derived_isos]
        return ArrowTable.from_complexes([self.base, self.derived], [self.pushforward], isos)

    def base_label_of(self, label: str) -> str:
        """The base label a derived label is identified with by an iso tag."""
        return self._label_push.get(label, label)

    @cached_property
    def _label_push(self) -> dict[str, str]:
        return {self.derived.label(a): self.base.label(b) for a, b in self.iso_tags}

    @cached_property
    def maps(self) -> "SubdivisionMaps":
        return SubdivisionMaps(self)


# -- barycentric ------------------------------------------------------------

def _chain_id(ch: Iterable[str]) -> str:
    return "<".join(ch)


def barycentric(c: StratifiedComplex, name: str | None = None) -> SubdivisionResult:
    """Vertices are the strata of ``c``; strata are the chains of ``c``."""
    rep = validate_complex(c)
    graded = [v for v in rep.violations if v.kind in ("covers not graded", "missing grade", "missing covers")]
    if graded:
        raise ValueError("input poset is not graded: " + "; ".join(map(str, graded)))
    name = name or f"{c.name}~bary"
    chains = [ch for chains in sd_indexing(c, BOUNDED, None).values() for ch in chains]
    ids = {ch: _chain_id(ch) for ch in chains}
    if len(set(ids.values())) != len(ids):
        raise ValueError("stratum ids collide when joined with '<'")
    vertices = [VertexId(s, None, c.upper_covers(s)) for s in c.ids]
    strata = []
    corr: dict[str, Provenance] = {}
    assign: dict[str, str] = {}
    for ch in chains:
        sid = ids[ch]
        faces = tuple(ids[type(ch)(ch[:j] + ch[j + 1:])] for j in range(len(ch))) if len(ch) > 1 else ()
        strata.append(Stratum(sid, tuple(ch), faces, c.label(ch[-1])))
        corr[sid] = Provenance("chain", ch[-1], chain=tuple(ch))
        assign[sid] = ch[-1]
    derived = StratifiedComplex(name, vertices, strata, c.base)
    push = PosetMap(derived, c, assign)
    return SubdivisionResult("barycentric", c, derived, push, corr, frozenset(assign.items()))


def simplicialize(c: StratifiedComplex) -> SubdivisionResult:
    """Barycentric subdivision, which is always simplicial."""
    return barycentric(c)


# -- ordering conventions ---------------------------------------------------

def _center_last_ok(c: StratifiedComplex, star: Iterable[str], center: frozenset[str]) -> bool:
    for t in star:
        seen_center = False
        for v in c[t].vertices:
            if v in center:
                seen_center = True
            elif seen_center:
                return False
    return True


def with_vertices_last(c: StratifiedComplex, center: Iterable[str]) -> StratifiedComplex:
    """Reorder so the given divisors come after all others (keeping the
    relative order inside each group).  Faces are re-indexed to match."""
    center = frozenset(center)
    total = c.order.is_total()
    ranked = sorted(c.vertex_ids, key=lambda v: (v in center, c.order.rank[v]))
    if total:
        vertices = [VertexId(v, i) for i, v in enumerate(ranked)]
    else:
        succ: dict[str, set[str]] = {v: set() for v in c.vertex_ids}
        for u in c.vertex_ids:
            for w in c.vertex_ids:
                if (u in center) == (w in center):
                    if c.order.less(u, w):
                        succ[u].add(w)
                elif w in center:
                    succ[u].add(w)
        vertices = [VertexId(v, None, tuple(sorted(succ[v]))) for v in c.vertex_ids]
    rank = {v: i for i, v in enumerate(ranked)}
    strata = []
    for s in c.strata:
        vs = tuple(sorted(s.vertices, key=rank.__getitem__))
        faces = tuple(s.faces[s.vertices.index(v)] for v in vs) if s.faces else ()
        strata.append(Stratum(s.id, vs, faces, s.label, s.flags, s.covers, s.grade))
    return StratifiedComplex(c.name, vertices, strata, c.base)


def _fresh_name(taken: set[str], want: str) -> str:
    name = want
    while name in taken:
        name += "'"
    return name


def _derived_vertices(base: StratifiedComplex, keep: Iterable[str], new: str, neighbours: set[str]) -> list[VertexId]:
    keep = set(keep)
    if base.order.is_total():
        rank = base.order.rank
        out = [VertexId(v.id, rank[v.id]) for v in base.vertices if v.id in keep]
        out.append(VertexId(new, len(rank)))
        return out
    out = []
    for v in base.vertices:
        if v.id not in keep:
            continue
        prec = tuple(w for w in v.precedes if w in keep)
        if v.id in neighbours:
            prec += (new,)
        out.append(VertexId(v.id, v.order_key, prec))
    out.append(VertexId(new, None))
    return out


# -- labels and ids shared by star and blowup -----------------------------

class _Exceptional:
    """Naming and labeling of exceptional strata over one center."""

    def __init__(self, base: StratifiedComplex, center: str, new: str, zlabel: str | None):
        self.base = base
        self.center = center
        self.new = new
        self.V0 = base[center].vertices
        self.b = self.V0[-1]
        self.star = base.above(center)
        self.zlabel = zlabel

    def rho(self, S: Iterable[str], up: str) -> str | None:
        A = [v for v in self.base[up].vertices if v not in self.V0]
        verts = frozenset(A) | frozenset(S)
        return self.base.face_with_vertices(up, verts) if verts else None

    @cached_property
    def _ambiguous(self) -> set[str]:
        seen: dict[str, int] = {}
        for up in self.star:
            A = frozenset(self.base[up].vertices) - frozenset(self.V0)
            for t in self.base.below(up):
                if t in self.star:
                    continue
                if frozenset(self.base[t].vertices) | frozenset(self.V0) == frozenset(self.base[up].vertices):
                    seen[t] = seen.get(t, 0) + 1
            del A
        return {t for t, k in seen.items() if k > 1}

    def ident(self, S: Iterable[str], up: str, comp: int = 0, many: bool = False) -> str:
        r = self.rho(S, up)
        if r is None:
            sid = self.new
        else:
            sid = f"{r}*{self.new}"
            if r in self._ambiguous:
                sid += f"@{up}"
        return sid + (f"#{comp}" if many else "")

    def label(self, S: Iterable[str], up: str, comp: int = 0, many: bool = False, birational_sections: bool = True) -> str:
        """Label of the iso-class {T, T + b} with T = S - b.  Classes meeting a
        birational section carry the label of the image; others are fresh."""
        T = tuple(v for v in S if v != self.b)
        missing = len(self.V0) - len(T)
        if birational_sections and missing <= 2:
            return self.base.label(up)
        prefix = self.base.label(up) if birational_sections else (self.zlabel or "Z")
        return f"{prefix}~{self.ident(T, up, comp, many)}"


# -- star subdivision ---------------------------------------------------------

def star_subdivide(c: StratifiedComplex, center: str, new_vertex: str = "E", name: str | None = None) -> SubdivisionResult:
    """Replace the star of ``center`` by joins of a new ray with its link."""
    if center not in c:
        raise KeyError(f"unknown stratum {center!r}")
    if not c.is_simplicial:
        raise ValueError("star subdivision needs a simplicial complex")
    rep = validate_complex(c)
    if not rep.ok:
        raise ValueError("invalid complex: " + "; ".join(str(v) for v in rep.violations[:3]))
    star, closed, link = star_link(c, center)
    V0 = frozenset(c[center].vertices)
    base = c if _center_last_ok(c, star, V0) else with_vertices_last(c, V0)
    E = _fresh_name({v.id for v in base.vertices} | set(base.ids), new_vertex)
    X = _Exceptional(base, center, E, None)
    b = X.b

    strata: list[Stratum] = []
    corr: dict[str, Provenance] = {}
    assign: dict[str, str] = {}
    iso: set[tuple[str, str]] = set()
    for s in base.strata:
        if s.id in star:
            continue
        flags = frozenset({IN_LAST_DIVISOR}) if b in s.vertices else frozenset()
        strata.append(Stratum(s.id, s.vertices, s.faces, s.label, flags))
        corr[s.id] = Provenance(STRICT, s.id)
        assign[s.id] = s.id
        iso.add((s.id, s.id))

    joins: list[tuple[str | None, str]] = [(None, center)]
    for up in sorted(star):
        vu = frozenset(base[up].vertices)
        for t in sorted(base.below(up)):
            if t not in star and frozenset(base[t].vertices) | V0 == vu:
                joins.append((t, up))

    def join_id(rho: str | None, up: str) -> str:
        S = () if rho is None else tuple(v for v in base[rho].vertices if v in V0)
        return X.ident(S, up)

    sec: dict[tuple[str, str], str] = {}
    wedge: dict[str, str] = {}
    dual: set[tuple[str, str]] = set()
    for rho, up in joins:
        rv = base[rho].vertices if rho is not None else ()
        S = tuple(v for v in rv if v in V0)
        sid = join_id(rho, up)
        faces: list[str] = []
        if rho is not None:
            for j, u in enumerate(rv):
                r2 = base[rho].faces[j] if len(rv) > 1 else None
                up2 = up if u in V0 else base.face_with_vertices(up, frozenset(base[up].vertices) - {u})
                faces.append(join_id(r2, up2))
            faces.append(rho)
        flags = {EXCEPTIONAL} | ({IN_LAST_DIVISOR} if b in S else set())
        strata.append(Stratum(sid, tuple(rv) + (E,), tuple(faces), X.label(S, up), frozenset(flags)))
        corr[sid] = Provenance(EXCEPTIONAL, up, S)
        assign[sid] = up
        missing = [v for v in X.V0 if v not in S]
        if len(missing) == 1:
            sec[(up, missing[0])] = sid
            iso.add((sid, up))
        elif b in missing:
            partner = X.ident(S + (b,), up)
            wedge[sid] = partner
            dual.add((partner, sid))

    keep = [v.id for v in base.vertices if v.id in base.vertex_stratum and base.vertex_stratum[v.id] not in star]
    neighbours = {v for s in strata if E in s.vertices for v in s.vertices if v != E}
    vertices = _derived_vertices(base, keep, E, neighbours)
    derived = StratifiedComplex(name or f"{c.name}*{center}", vertices, strata, c.base)
    push = PosetMap(derived, base, assign)
    return SubdivisionResult(
        "star", base, derived, push, corr, frozenset(iso), frozenset(dual),
        center, X.V0, E, sec, wedge,
    )


# -- blowup ---------------------------------------------------------------------

def blowup_subdivide(
    c: StratifiedComplex,
    center: str,
    profile: IntersectionProfile | None = None,
    new_vertex: str = "E",
    name: str | None = None,
) -> SubdivisionResult:
    """Blow up a smooth center ``Z`` lying in the closed stratum ``center``.

    With ``mode="proper"`` every base stratum keeps its strict transform and
    the exceptional strata are indexed by (divisors of the center they lie
    on, stratum of the star, component of ``Z`` there).  ``mode="stratum"``
    enumerates the same way with the center's divisors never all present and
    the star removed, which is the star subdivision.  ``mode="none"`` returns
    an isomorphic copy.
    """
    if center not in c:
        raise KeyError(f"unknown stratum {center!r}")
    profile = profile or IntersectionProfile(center)
    if profile.center != center:
        raise ValueError(f"profile is for {profile.center!r}, not {center!r}")
    if profile.mode not in ("proper", "stratum", "none"):
        raise ValueError(f"unknown profile mode {profile.mode!r}")
    if not c.is_simplicial:
        raise ValueError("blowup needs a simplicial complex")
    rep = validate_complex(c)
    if not rep.ok:
        raise ValueError("invalid complex: " + "; ".join(str(v) for v in rep.violations[:3]))
    if profile.mode == "none":
        return _trivial_blowup(c, center, profile, name)

    star, _, _ = star_link(c, center)
    for sid, k in profile.counts.items():
        if sid not in star:
            raise ValueError(f"profile names {sid!r}, which is not in the star of {center!r}")
        if k < 0:
            raise ValueError(f"negative component count on {sid!r}")
    proper = profile.mode == "proper"
    counts = {u: (profile.count(u) if proper else 1) for u in star}
    if counts[center] != 1:
        raise ValueError("the center must meet its own stratum in exactly one component")
    for up in star:
        if counts[up] == 0:
            continue
        for low in c.below(up):
            if low in star and counts[low] == 0:
                raise ValueError(f"inconsistent profile: {up!r} meets Z but {low!r} does not")
            if low in star and low != up and counts[low] > 1:
                raise ValueError(
                    f"ambiguous profile: {low!r} has {counts[low]} components and {up!r} lies above it; "
                    "the incidence of components is not determined"
                )

    V0 = frozenset(c[center].vertices)
    base = c if _center_last_ok(c, star, V0) else with_vertices_last(c, V0)
    E = _fresh_name({v.id for v in base.vertices} | set(base.ids), new_vertex)
    X = _Exceptional(base, center, E, profile.label)
    b = X.b
    sections = not proper

    strata: list[Stratum] = []
    corr: dict[str, Provenance] = {}
    assign: dict[str, str] = {}
    iso: set[tuple[str, str]] = set()
    for s in base.strata:
        if not proper and s.id in star:
            continue
        flags = frozenset({IN_LAST_DIVISOR}) if b in s.vertices else frozenset()
        strata.append(Stratum(s.id, s.vertices, s.faces, s.label, flags))
        corr[s.id] = Provenance(STRICT, s.id)
        assign[s.id] = s.id
        iso.add((s.id, s.id))

    sec: dict[tuple[str, str], str] = {}
    wedge: dict[str, str] = {}
    dual: set[tuple[str, str]] = set()
    top = len(X.V0) if proper else len(X.V0) - 1
    for up in sorted(star):
        many = counts[up] > 1
        A = tuple(v for v in base[up].vertices if v not in V0)
        for comp in range(counts[up]):
            for size in range(0, top + 1):
                for S in combinations(X.V0, size):
                    verts = base.sort_vertices(A + S) + (E,)
                    sid = X.ident(S, up, comp, many)
                    faces = []
                    if len(verts) > 1:
                        for u in verts[:-1]:
                            if u in V0:
                                S2, up2 = tuple(v for v in S if v != u), up
                            else:
                                S2, up2 = S, base.face_with_vertices(up, frozenset(base[up].vertices) - {u})
                            faces.append(X.ident(S2, up2, 0 if counts[up2] == 1 else comp, counts[up2] > 1))
                        faces.append(X.rho(S, up))
                    flags = {EXCEPTIONAL} | ({IN_LAST_DIVISOR} if b in S else set())
                    strata.append(Stratum(sid, verts, tuple(faces), X.label(S, up, comp, many, sections), frozenset(flags)))
                    corr[sid] = Provenance(EXCEPTIONAL, up, S, comp)
                    assign[sid] = up
                    missing = [v for v in X.V0 if v not in S]
                    if sections and len(missing) == 1:
                        sec[(up, missing[0])] = sid
                        iso.add((sid, up))
                    elif b in missing and (proper or len(missing) >= 2):
                        partner = X.ident(S + (b,), up, comp, many)
                        wedge[sid] = partner
                        dual.add((partner, sid))

    if proper:
        keep = [v.id for v in base.vertices]
    else:
        keep = [v.id for v in base.vertices if base.vertex_stratum.get(v.id) not in star]
    neighbours = {v for s in strata if E in s.vertices for v in s.vertices if v != E}
    vertices = _derived_vertices(base, keep, E, neighbours)
    derived = StratifiedComplex(name or f"{c.name}^{center}", vertices, strata, c.base)
    push = PosetMap(derived, base, assign)
    return SubdivisionResult(
        "blowup" if proper else "star", base, derived, push, corr, frozenset(iso), frozenset(dual),
        center, X.V0, E, sec, wedge, profile,
    )


def _trivial_blowup(c: StratifiedComplex, center: str, profile: IntersectionProfile, name: str | None) -> SubdivisionResult:
    derived = StratifiedComplex(name or f"{c.name}^{center}", c.vertices, c.strata, c.base)
    assign = {s: s for s in c.ids}
    corr = {s: Provenance(STRICT, s) for s in c.ids}
    return SubdivisionResult(
        "blowup", c, derived, PosetMap(derived, c, assign), corr, frozenset(assign.items()),
        center=center, center_vertices=c[center].vertices, profile=profile,
    )


def normalized(r: SubdivisionResult) -> tuple:
    """Everything a subdivision produced, with the derived complex's name
    removed, for structural comparison."""
    d = r.derived.canonical()
    return (
        d[1:],
        r.base.canonical(),
        tuple(sorted(r.pushforward.assignment.items())),
        tuple(sorted(r.correspondence.items())),
        tuple(sorted(r.iso_tags)),
        tuple(sorted(r.derived_isos)),
        tuple(sorted(r.sec.items())),
        tuple(sorted(r.wedge.items())),
        r.center_vertices,
        r.new_vertex,
    )


# -- comparison maps ----------------------------------------------------------

class SubdivisionMaps:
    """Chain complexes and maps of one subdivision, built lazily and shared so
    that composites are well defined."""

    def __init__(self, r: SubdivisionResult):
        self.r = r

    @cached_property
    def table(self) -> ArrowTable:
        return self.r.arrow_table()

    @cached_property
    def sd_base(self) -> BuiltComplex:
        return build_sd(self.r.base)

    @cached_property
    def sd_derived(self) -> BuiltComplex:
        return build_sd(self.r.derived)

    @cached_property
    def cech_base(self) -> BuiltComplex:
        return build_cech(self.r.base)

    @cached_property
    def cech_derived(self) -> BuiltComplex:
        return build_cech(self.r.derived)

    @cached_property
    def sd_push(self) -> ChainMap:
        """``Sd(f): Sd(derived) -> Sd(base)``."""
        return build_sd_pushforward(self.r.pushforward, self.sd_derived, self.sd_base)

    @cached_property
    def lam_derived(self) -> ChainMap:
        return build_last_vertex(self.r.derived, self.sd_derived, self.cech_derived)

    @cached_property
    def lam_base(self) -> ChainMap:
        return build_last_vertex(self.r.base, self.sd_base, self.cech_base)

    @cached_property
    def sdmap_derived(self) -> ChainMap:
        return build_subdivision_map(self.r.derived, self.cech_derived, self.sd_derived)

    # barycentric
    @cached_property
    def phi(self) -> ChainMap:
        """``Č(derived) -> Sd(base)``: a chain, read as a derived stratum, goes to
        itself through the iso to its last entry."""
        if self.r.kind != "barycentric":
            raise ValueError("phi is defined for barycentric subdivisions")
        chain_of = {sid: p.chain for sid, p in self.r.correspondence.items()}
        from .strata import Chain

        comps = map_from_rule(self.cech_derived, self.sd_base, lambda k: [(Chain(chain_of[k[0]]), 1)])
        return ChainMap(self.cech_derived.complex, self.sd_base.complex, comps)

    @cached_property
    def phi_inverse(self) -> ChainMap:
        comps = {n: invert_iso(m, self.table) for n, m in self.phi.components.items()}
        return ChainMap(self.sd_base.complex, self.cech_derived.complex, comps)

    # star and blowup
    @cached_property
    def cech_push(self) -> ChainMap:
        """``Č(μ) = λ o Sd(μ) o sd``."""
        return compose_chain_maps(self.lam_base, compose_chain_maps(self.sd_push, self.sdmap_derived))

    @cached_property
    def cech_push_closed(self) -> ChainMap:
        """The three-case closed form of ``Č(μ)``."""
        r, base = self.r, self.r.base
        b = r.last_center_vertex
        E = r.new_vertex

        def rule(k: ExtendedStratum):
            sid = k[0]
            p = r.correspondence[sid]
            if p.kind != EXCEPTIONAL:
                return [(ExtendedStratum(p.base, base[p.base].vertices), 1)]
            verts = [v for v in r.derived[sid].vertices if v != E]
            if b in verts:
                return []
            face = base.face_with_vertices(p.base, frozenset(verts) | {b})
            return [(ExtendedStratum(face, base[face].vertices), 1)]

        comps = map_from_rule(self.cech_derived, self.cech_base, rule)
        return ChainMap(self.cech_derived.complex, self.cech_base.complex, comps)

    @cached_property
    def gamma(self) -> ChainMap:
        """Strict transforms go back through the inverse iso; a stratum of the
        star goes to ``sum over k of (-1)^(n+k) sec(τ, k)``, k running over the
        positions of the center's divisors."""
        r, base = self.r, self.r.base
        center = set(r.center_vertices)
        strict = {p.base: sid for sid, p in r.correspondence.items() if p.kind == STRICT}
        dv = r.derived

        def rule(k: ExtendedStratum):
            sid = k[0]
            if sid in strict:
                t = strict[sid]
                return [(ExtendedStratum(t, dv[t].vertices), 1)]
            verts = base[sid].vertices
            n = len(verts) - 1
            out = []
            for pos, v in enumerate(verts):
                if v in center:
                    t = r.sec[(sid, v)]
                    out.append((ExtendedStratum(t, dv[t].vertices), -1 if (n + pos) % 2 else 1))
            return out

        comps = map_from_rule(self.cech_base, self.cech_derived, rule)
        return ChainMap(self.cech_base.complex, self.cech_derived.complex, comps)

    @cached_property
    def homotopy(self) -> ChainHomotopy:
        """``(-1)^n ε`` on exceptional strata off the last center divisor that
        have a partner one dimension up; zero elsewhere."""
        r, dv = self.r, self.r.derived

        def rule(k: ExtendedStratum):
            sid = k[0]
            t = r.wedge.get(sid)
            if t is None:
                return []
            n = len(k[1]) - 1
            return [(ExtendedStratum(t, dv[t].vertices), -1 if n % 2 else 1)]

        comps = map_from_rule(self.cech_derived, self.cech_derived, rule, shift=1)
        g = compose_chain_maps(self.gamma, self.cech_push)
        return ChainHomotopy(identity_map(self.cech_derived.complex), g, comps)


def verify_barycentric(r: SubdivisionResult) -> ValidationReport:
    m = r.maps
    rep = ValidationReport()
    rep.extend(validate_complex(r.derived))
    for b, nm in ((m.cech_derived, "Č(derived)"), (m.sd_base, "Sd(base)"), (m.sd_derived, "Sd(derived)")):
        rep.extend(verify_complex(b.complex, nm))
    rep.extend(verify_chain_map(m.phi, "phi"))
    rep.extend(verify_chain_map(m.sd_push, "Sd(f)"))
    rep.extend(verify_chain_map(m.lam_derived, "λ(derived)"))
    rep.extend(_check_arrows(m, [("phi", m.phi), ("Sd(f)", m.sd_push)]))
    try:
        inv = m.phi_inverse
        rep.extend(is_identity(compose_chain_maps(inv, m.phi), "phi^-1 phi"))
        rep.extend(is_identity(compose_chain_maps(m.phi, inv), "phi phi^-1"))
    except ValueError as e:
        rep.add("phi not invertible", [r.derived.name], str(e))
    rep.extend(maps_equal(compose_chain_maps(m.phi, m.lam_derived), m.sd_push, "phi o λ = Sd(f)"))
    return rep


def _check_arrows(m: SubdivisionMaps, maps: list[tuple[str, ChainMap]]) -> ValidationReport:
    rep = ValidationReport()
    for nm, f in maps:
        for n, comp in f.components.items():
            rep.extend(m.table.check(comp, f"{nm}[{n}]"))
    return rep


def verify_star(r: SubdivisionResult) -> ValidationReport:
    """Every identity of a star subdivision or blowup: closed form, section,
    homotopy, and the arrows used."""
    m = r.maps
    rep = ValidationReport()
    rep.extend(validate_complex(r.derived))
    for b, nm in ((m.cech_base, "Č(base)"), (m.cech_derived, "Č(derived)"), (m.sd_base, "Sd(base)"), (m.sd_derived, "Sd(derived)")):
        rep.extend(verify_complex(b.complex, nm))
    rep.extend(verify_chain_map(m.sd_push, "Sd(μ)"))
    rep.extend(verify_chain_map(m.cech_push, "Č(μ)"))
    rep.extend(maps_equal(m.cech_push, m.cech_push_closed, "Č(μ) closed form"))
    rep.extend(verify_chain_map(m.gamma, "gamma"))
    rep.extend(is_identity(compose_chain_maps(m.cech_push, m.gamma), "Č(μ) o gamma"))
    rep.extend(verify_homotopy(m.homotopy, "id - gamma Č(μ)"))
    rep.extend(_check_arrows(m, [("Sd(μ)", m.sd_push), ("Č(μ)", m.cech_push), ("gamma", m.gamma)]))
    for n, comp in m.homotopy.components.items():
        rep.extend(m.table.check(comp, f"h[{n}]"))
    if r.profile is not None and r.profile.mode == "none":
        try:
            inv = {n: invert_iso(f, m.table) for n, f in m.cech_push.components.items()}
            back = ChainMap(m.cech_base.complex, m.cech_derived.complex, inv)
            rep.extend(is_identity(compose_chain_maps(back, m.cech_push), "Č(μ)^-1 Č(μ)"))
        except ValueError as e:
            rep.add("Č(μ) not invertible", [r.derived.name], str(e))
    return rep


def star_cech_pushforward(r: SubdivisionResult) -> tuple[ChainMap, ValidationReport]:
    m = r.maps
    return m.cech_push, maps_equal(m.cech_push, m.cech_push_closed, "Č(μ) closed form")


def star_inverse_and_homotopy(r: SubdivisionResult) -> tuple[ChainMap, ChainHomotopy]:
    if r.kind != "star":
        raise ValueError("expected a star subdivision")
    return r.maps.gamma, r.maps.homotopy


def blowup_inverse_and_homotopy(r: SubdivisionResult) -> tuple[ChainMap, ChainHomotopy]:
    if r.kind != "blowup" or r.profile is None or r.profile.mode != "proper":
        raise ValueError("expected a blowup along a center properly inside a stratum")
    return r.maps.gamma, r.maps.homotopy


def barycentric_comparison(r: SubdivisionResult) -> tuple[ChainMap, ValidationReport]:
    if r.kind != "barycentric":
        raise ValueError("expected a barycentric subdivision")
    return r.maps.phi, verify_barycentric(r)

