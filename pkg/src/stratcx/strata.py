"""Stratum posets of snc and toroidal degenerations.

A :class:`StratifiedComplex` records the boundary divisors (vertices) of a
degeneration, an ordering on them, and the strata: connected components of
intersections of divisors.  Strata carry opaque ids because one intersection
may have several components.  ``a <= b`` means that ``a`` is an iterated face
of ``b``, i.e. the closed stratum of ``b`` lies inside that of ``a``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

EXCEPTIONAL = "exceptional"
IN_LAST_DIVISOR = "in_last_divisor"
KNOWN_FLAGS = frozenset({EXCEPTIONAL, IN_LAST_DIVISOR})


@dataclass(frozen=True)
class VertexId:
    """A boundary divisor.

    ``order_key`` places the vertex in a global linear order; ``precedes``
    lists vertices that must come after this one.  Either may be used, and
    both together generate a partial order.
    """

    id: str
    order_key: int | None = None
    precedes: tuple[str, ...] = ()


@dataclass(frozen=True)
class Stratum:
    """One stratum.

    For simplicial strata ``faces[j]`` is the face obtained by dropping the
    j-th vertex.  Non-simplicial strata (accepted only as input to barycentric
    subdivision) give ``covers`` and ``grade`` instead.
    """

    id: str
    vertices: tuple[str, ...]
    faces: tuple[str, ...] = ()
    label: str = ""
    flags: frozenset[str] = frozenset()
    covers: tuple[str, ...] | None = None
    grade: int | None = None

    @property
    def codim(self) -> int:
        return self.grade if self.grade is not None else len(self.vertices)

    @property
    def simplicial(self) -> bool:
        return self.covers is None

    @property
    def lower_covers(self) -> tuple[str, ...]:
        if self.covers is not None:
            return self.covers
        return tuple(dict.fromkeys(self.faces))


@dataclass(frozen=True)
class Violation:
    kind: str
    ids: tuple[str, ...]
    detail: str = ""

    def __str__(self) -> str:
        where = ", ".join(self.ids)
        return f"{self.kind} [{where}]" + (f": {self.detail}" if self.detail else "")


@dataclass
class ValidationReport:
    """Outcome of a check: the names of checks run and every violation found."""

    checks: list[str] = field(default_factory=list)
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def add(self, kind: str, ids: Iterable[str] = (), detail: str = "") -> None:
        self.violations.append(Violation(kind, tuple(str(i) for i in ids), detail))

    def extend(self, other: "ValidationReport") -> "ValidationReport":
        self.checks.extend(other.checks)
        self.violations.extend(other.violations)
        return self

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


class VertexOrder:
    """The partial order generated by integer keys and explicit edges."""

    def __init__(self, vertices: Sequence[VertexId]):
        self.ids = tuple(v.id for v in vertices)
        known = set(self.ids)
        succ: dict[str, set[str]] = {v: set() for v in self.ids}
        groups: dict[int, list[str]] = {}
        for v in vertices:
            if v.order_key is not None:
                groups.setdefault(v.order_key, []).append(v.id)
        levels = [groups[k] for k in sorted(groups)]
        # equal keys leave the two vertices incomparable
        for lo, hi in zip(levels, levels[1:]):
            for a in lo:
                succ[a].update(hi)
        self.unknown: list[tuple[str, str]] = []
        for v in vertices:
            for w in v.precedes:
                if w in known:
                    succ[v.id].add(w)
                else:
                    self.unknown.append((v.id, w))
        self._succ = succ
        self._keys = {v.id: v.order_key for v in vertices}
        self.rank, self.cycle = self._linear_extension()

    def _linear_extension(self) -> tuple[dict[str, int], list[str]]:
        indeg = {v: 0 for v in self.ids}
        for a in self.ids:
            for b in self._succ[a]:
                indeg[b] += 1

        def prio(v: str) -> tuple:
            k = self._keys[v]
            return (k is None, k if k is not None else 0, v)

        heap = [(prio(v), v) for v in self.ids if indeg[v] == 0]
        heapq.heapify(heap)
        rank: dict[str, int] = {}
        while heap:
            _, v = heapq.heappop(heap)
            rank[v] = len(rank)
            for w in self._succ[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    heapq.heappush(heap, (prio(w), w))
        cycle = sorted(v for v in self.ids if v not in rank)
        for v in cycle:
            rank[v] = len(rank)
        return rank, cycle

    @cached_property
    def _closure(self) -> dict[str, frozenset[str]]:
        out: dict[str, frozenset[str]] = {}
        for v in sorted(self.ids, key=lambda x: -self.rank[x]):
            reach: set[str] = set()
            stack = list(self._succ[v])
            while stack:
                w = stack.pop()
                if w in reach:
                    continue
                reach.add(w)
                if w in out:
                    reach |= out[w]
                else:
                    stack.extend(self._succ[w])
            out[v] = frozenset(reach)
        return out

    def less(self, u: str, w: str) -> bool:
        return w in self._closure.get(u, frozenset())

    def comparable(self, u: str, w: str) -> bool:
        return u == w or self.less(u, w) or self.less(w, u)

    @property
    def acyclic(self) -> bool:
        return not self.cycle

    def sort(self, vs: Iterable[str]) -> tuple[str, ...]:
        return tuple(sorted(vs, key=lambda v: (self.rank.get(v, 1 << 30), v)))

    def is_total(self) -> bool:
        chain = sorted(self.ids, key=self.rank.__getitem__)
        return all(self.less(a, b) for a, b in zip(chain, chain[1:]))


class Chain(tuple):
    """A weakly increasing sequence of stratum ids."""

    __slots__ = ()

    @property
    def entries(self) -> tuple[str, ...]:
        return tuple(self)

    @property
    def degenerate(self) -> bool:
        return any(a == b for a, b in zip(self, self[1:]))

    @property
    def degree(self) -> int:
        return len(self) - 1

    def __repr__(self) -> str:
        return "Chain(" + " <= ".join(self) + ")"


class ExtendedStratum(tuple):
    """A stratum together with a weakly increasing word onto its vertices."""

    __slots__ = ()

    def __new__(cls, base: str, word: Sequence[str]):
        return super().__new__(cls, (base, tuple(word)))

    @property
    def base(self) -> str:
        return self[0]

    @property
    def word(self) -> tuple[str, ...]:
        return self[1]

    @property
    def degenerate(self) -> bool:
        w = self[1]
        return any(a == b for a, b in zip(w, w[1:]))

    @property
    def degree(self) -> int:
        return len(self[1]) - 1

    def __reduce__(self):
        return (ExtendedStratum, (self[0], self[1]))

    def __repr__(self) -> str:
        return f"[{','.join(self[1])}]_{self[0]}"


class StratifiedComplex:
    """The poset of strata with vertex data, faces, ordering and labels.

    Instances are treated as immutable; derived data is cached on first use.
    Construction never raises on inconsistent data, use
    :func:`validate_complex` for that.
    """

    def __init__(
        self,
        name: str,
        vertices: Sequence[VertexId],
        strata: Iterable[Stratum],
        base: str | tuple[str, int] = "k",
    ):
        self.name = name
        self.base = base
        self.vertices = tuple(vertices)
        self.strata = tuple(sorted(strata, key=lambda s: s.id))
        self._by_id: dict[str, Stratum] = {}
        for s in self.strata:
            self._by_id.setdefault(s.id, s)
        self.order = VertexOrder(self.vertices)

    # -- lookup ----------------------------------------------------------
    def __getitem__(self, sid: str) -> Stratum:
        return self._by_id[sid]

    def __contains__(self, sid: object) -> bool:
        return sid in self._by_id

    def __len__(self) -> int:
        return len(self.strata)

    def __repr__(self) -> str:
        return f"StratifiedComplex({self.name!r}, {len(self.vertices)} vertices, {len(self.strata)} strata)"

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.strata)

    @cached_property
    def vertex_ids(self) -> tuple[str, ...]:
        return self.order.sort(v.id for v in self.vertices)

    def codim(self, sid: str) -> int:
        return self._by_id[sid].codim

    def label(self, sid: str) -> str:
        return self._by_id[sid].label

    @cached_property
    def max_codim(self) -> int:
        return max((s.codim for s in self.strata), default=0)

    @cached_property
    def is_simplicial(self) -> bool:
        return all(s.simplicial for s in self.strata)

    def of_codim(self, k: int) -> list[str]:
        return [s.id for s in self.strata if s.codim == k]

    @cached_property
    def vertex_stratum(self) -> dict[str, str]:
        """The codim-1 stratum carried by each divisor."""
        out: dict[str, str] = {}
        for s in self.strata:
            if s.codim == 1 and len(s.vertices) == 1:
                out.setdefault(s.vertices[0], s.id)
        return out

    # -- order -----------------------------------------------------------
    @cached_property
    def _below(self) -> dict[str, frozenset[str]]:
        memo: dict[str, frozenset[str]] = {}
        for s in sorted(self.strata, key=lambda t: (t.codim, t.id)):
            self._down(s.id, memo, set())
        return memo

    def _down(self, sid: str, memo: dict, active: set) -> frozenset[str]:
        if sid in memo:
            return memo[sid]
        if sid in active or sid not in self._by_id:
            return frozenset()
        active.add(sid)
        acc = {sid}
        for c in self._by_id[sid].lower_covers:
            acc |= self._down(c, memo, active)
        active.discard(sid)
        memo[sid] = frozenset(acc)
        return memo[sid]

    @cached_property
    def _above(self) -> dict[str, frozenset[str]]:
        up: dict[str, set[str]] = {s.id: set() for s in self.strata}
        for t, down in self._below.items():
            for s in down:
                up[s].add(t)
        return {k: frozenset(v) for k, v in up.items()}

    @cached_property
    def _upper_covers(self) -> dict[str, tuple[str, ...]]:
        up: dict[str, set[str]] = {s.id: set() for s in self.strata}
        for s in self.strata:
            for c in s.lower_covers:
                if c in up:
                    up[c].add(s.id)
        return {k: tuple(sorted(v)) for k, v in up.items()}

    def le(self, a: str, b: str) -> bool:
        """``a <= b``: ``a`` is an iterated face of ``b``."""
        return a in self._below.get(b, ())

    def below(self, sid: str) -> frozenset[str]:
        return self._below[sid]

    def above(self, sid: str) -> frozenset[str]:
        return self._above[sid]

    def lower_covers(self, sid: str) -> tuple[str, ...]:
        return self._by_id[sid].lower_covers

    def upper_covers(self, sid: str) -> tuple[str, ...]:
        return self._upper_covers[sid]

    @cached_property
    def _sorted_above(self) -> dict[str, tuple[str, ...]]:
        return {k: tuple(sorted(v)) for k, v in self._above.items()}

    def sorted_above(self, sid: str) -> tuple[str, ...]:
        return self._sorted_above[sid]

    # -- simplicial coordinates -------------------------------------------
    @cached_property
    def _face_index(self) -> dict[str, dict[frozenset[str], str]]:
        out: dict[str, dict[frozenset[str], str]] = {}
        for s in self.strata:
            idx: dict[frozenset[str], str] = {}
            for t in sorted(self._below[s.id]):
                idx.setdefault(frozenset(self._by_id[t].vertices), t)
            out[s.id] = idx
        return out

    def face_with_vertices(self, sid: str, verts: Iterable[str]) -> str:
        """The face of ``sid`` spanned by ``verts`` (written ``[verts]_sid``)."""
        key = verts if isinstance(verts, frozenset) else frozenset(verts)
        try:
            return self._face_index[sid][key]
        except KeyError:
            raise KeyError(f"{sid} has no face with vertices {sorted(key)}") from None

    def max_vertex(self, sid: str) -> str:
        return self._by_id[sid].vertices[-1]

    def sort_vertices(self, vs: Iterable[str]) -> tuple[str, ...]:
        return self.order.sort(vs)

    # -- canonical form ---------------------------------------------------
    def canonical(self) -> tuple:
        verts = tuple(sorted((v.id, v.order_key, tuple(sorted(v.precedes))) for v in self.vertices))
        strata = tuple(
            (s.id, s.vertices, s.faces, s.label, tuple(sorted(s.flags)), s.covers, s.grade)
            for s in self.strata
        )
        return (self.name, self.base, verts, strata)

    def relabel(self, name: str) -> "StratifiedComplex":
        return StratifiedComplex(name, self.vertices, self.strata, self.base)


# -- validation -------------------------------------------------------------

def validate_complex(c: StratifiedComplex) -> ValidationReport:
    """Check every structural invariant and report offending ids."""
    rep = ValidationReport(checks=["ids", "order", "vertices", "faces", "grading", "simplicial identities"])
    seen: set[str] = set()
    for v in c.vertices:
        if v.id in seen:
            rep.add("duplicate vertex id", [v.id])
        seen.add(v.id)
    seen = set()
    for s in c.strata:
        if s.id in seen:
            rep.add("duplicate stratum id", [s.id])
        seen.add(s.id)
    for a, b in c.order.unknown:
        rep.add("unknown vertex in order", [a, b])
    if c.order.cycle:
        rep.add("cyclic vertex order", c.order.cycle)

    vids = {v.id for v in c.vertices}
    for s in c.strata:
        bad = [v for v in s.vertices if v not in vids]
        if bad:
            rep.add("unknown vertex", [s.id, *bad])
            continue
        if len(set(s.vertices)) != len(s.vertices):
            rep.add("repeated vertex", [s.id])
            continue
        for f in s.flags:
            if f not in KNOWN_FLAGS:
                rep.add("unknown flag", [s.id, f])
        if not s.vertices:
            rep.add("empty vertex list", [s.id])
            continue
        for u, w in zip(s.vertices, s.vertices[1:]):
            if not c.order.less(u, w):
                kind = "order not linear on vertices" if not c.order.comparable(u, w) else "vertices not increasing"
                rep.add(kind, [s.id, u, w])
        for u, w in combinations(s.vertices, 2):
            if not c.order.comparable(u, w):
                rep.add("order not linear on vertices", [s.id, u, w])
                break
        if s.simplicial:
            _check_simplicial_stratum(c, s, rep)
        else:
            _check_general_stratum(c, s, rep)

    # one codim-1 stratum per divisor
    count: dict[str, int] = {}
    for s in c.strata:
        if s.codim == 1 and len(s.vertices) == 1:
            count[s.vertices[0]] = count.get(s.vertices[0], 0) + 1
    for v in vids:
        if count.get(v, 0) != 1:
            rep.add("divisor must carry exactly one codim-1 stratum", [v], f"found {count.get(v, 0)}")
    return rep


def _check_simplicial_stratum(c: StratifiedComplex, s: Stratum, rep: ValidationReport) -> None:
    n1 = len(s.vertices)
    want = n1 if n1 >= 2 else 0
    if len(s.faces) != want:
        rep.add("wrong number of faces", [s.id], f"expected {want}, got {len(s.faces)}")
        return
    for j, f in enumerate(s.faces):
        if f not in c:
            rep.add("unknown face", [s.id, f], f"face {j}")
            continue
        expect = s.vertices[:j] + s.vertices[j + 1:]
        if c[f].vertices != expect:
            rep.add("face vertex mismatch", [s.id, f], f"face {j} should have vertices {list(expect)}")
    if n1 >= 3 and all(f in c and c[f].simplicial and len(c[f].faces) == n1 - 1 for f in s.faces):
        for i in range(n1):
            for j in range(i + 1, n1):
                a = c[s.faces[j]].faces[i]
                b = c[s.faces[i]].faces[j - 1]
                if a != b:
                    rep.add("simplicial identity fails", [s.id, a, b], f"d{i} d{j} != d{j - 1} d{i}")


def _check_general_stratum(c: StratifiedComplex, s: Stratum, rep: ValidationReport) -> None:
    if s.grade is None or s.grade < 1:
        rep.add("missing grade", [s.id])
        return
    for t in s.covers or ():
        if t not in c:
            rep.add("unknown cover", [s.id, t])
        elif c[t].codim != s.codim - 1:
            rep.add("covers not graded", [s.id, t])
    if s.codim == 1:
        if len(s.vertices) != 1:
            rep.add("codim-1 stratum must have one vertex", [s.id])
        return
    if not s.covers:
        rep.add("missing covers", [s.id])
        return
    ones = {c[t].vertices[0] for t in c.below(s.id) if t in c and c[t].codim == 1 and len(c[t].vertices) == 1}
    if ones != set(s.vertices):
        rep.add("vertices disagree with codim-1 strata below", [s.id])


# -- chains -------------------------------------------------------------------

def enumerate_chains(c: StratifiedComplex, n: int, mode: str = "nondegenerate") -> list[Chain]:
    """All n-chains (n+1 entries), lexicographic on stratum ids."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if mode not in ("nondegenerate", "extended"):
        raise ValueError(f"unknown mode {mode!r}")
    strict = mode == "nondegenerate"
    out: list[Chain] = []

    def grow(prefix: list[str]) -> None:
        if len(prefix) == n + 1:
            out.append(Chain(prefix))
            return
        for t in c.sorted_above(prefix[-1]):
            if strict and t == prefix[-1]:
                continue
            prefix.append(t)
            grow(prefix)
            prefix.pop()

    for s in c.ids:
        grow([s])
    return out


def iter_chains_upto(c: StratifiedComplex, top: int, mode: str) -> dict[int, list[Chain]]:
    return {n: enumerate_chains(c, n, mode) for n in range(top + 1)}


def face_of_chain(ch: Sequence[str], j: int) -> Chain:
    if not 0 <= j < len(ch):
        raise IndexError(f"face index {j} out of range for chain of length {len(ch)}")
    return Chain(tuple(ch[:j]) + tuple(ch[j + 1:]))


def degeneracy_of_chain(ch: Sequence[str], i: int) -> Chain:
    if not 0 <= i < len(ch):
        raise IndexError(f"degeneracy index {i} out of range for chain of length {len(ch)}")
    return Chain(tuple(ch[: i + 1]) + tuple(ch[i:]))


# -- stars and flags --------------------------------------------------------

def star_link(c: StratifiedComplex, sid: str) -> tuple[frozenset[str], frozenset[str], frozenset[str]]:
    if sid not in c:
        raise KeyError(f"unknown stratum {sid!r}")
    star = c.above(sid)
    closed: set[str] = set()
    for t in star:
        closed |= c.below(t)
    return star, frozenset(closed), frozenset(closed - star)


def complete_flag(c: StratifiedComplex, s0: str, s1: str) -> list[str]:
    """A flag s0 < ... < s1 with codim steps of one, smallest id at each step."""
    for s in (s0, s1):
        if s not in c:
            raise KeyError(f"unknown stratum {s!r}")
    if not c.le(s0, s1):
        raise ValueError(f"{s0} is not <= {s1}")
    flag = [s0]
    while flag[-1] != s1:
        nxt = [t for t in c.upper_covers(flag[-1]) if c.le(t, s1)]
        flag.append(min(nxt))
    return flag


# -- poset maps ---------------------------------------------------------------

@dataclass(frozen=True)
class PosetMap:
    """The pushforward of strata along a morphism of models."""

    source: StratifiedComplex
    target: StratifiedComplex
    assignment: Mapping[str, str]

    def __call__(self, sid: str) -> str:
        return self.assignment[sid]


def identity_poset_map(c: StratifiedComplex) -> PosetMap:
    return PosetMap(c, c, {s: s for s in c.ids})


def compose_poset_maps(f: PosetMap, g: PosetMap) -> PosetMap:
    """``f o g``: first ``g`` then ``f``."""
    if g.target is not f.source:
        raise ValueError("poset maps are not composable")
    return PosetMap(g.source, f.target, {s: f.assignment[t] for s, t in g.assignment.items()})


def validate_poset_map(f: PosetMap, g: PosetMap | None = None, expected: PosetMap | None = None) -> ValidationReport:
    """Monotonicity of ``f`` (and of ``g`` and ``f o g``), plus an optional
    comparison of ``f o g`` with a map computed another way."""
    rep = ValidationReport(checks=["total", "monotone"])
    _check_monotone(f, rep, "f")
    if g is not None:
        if g.target is not f.source:
            rep.add("mismatched complexes", [g.target.name, f.source.name])
            return rep
        _check_monotone(g, rep, "g")
        comp = compose_poset_maps(f, g)
        _check_monotone(comp, rep, "f o g")
        if expected is not None:
            rep.checks.append("composite")
            if expected.source is not comp.source or expected.target is not comp.target:
                rep.add("mismatched complexes", [expected.source.name, expected.target.name])
            else:
                for s in comp.source.ids:
                    if comp.assignment.get(s) != expected.assignment.get(s):
                        rep.add("composite differs", [s], f"{comp.assignment.get(s)} != {expected.assignment.get(s)}")
    return rep


def _check_monotone(f: PosetMap, rep: ValidationReport, tag: str) -> None:
    src, tgt = f.source, f.target
    for s in src.ids:
        if s not in f.assignment:
            rep.add("map not total", [s], tag)
        elif f.assignment[s] not in tgt:
            rep.add("image not a stratum", [s, f.assignment[s]], tag)
    for s in src.ids:
        for t in src.upper_covers(s):
            a, b = f.assignment.get(s), f.assignment.get(t)
            if a in tgt and b in tgt and not tgt.le(a, b):
                rep.add("not monotone", [s, t], f"{tag}: {a} !<= {b}")


def iter_pairs(c: StratifiedComplex) -> Iterator[tuple[str, str]]:
    """All pairs ``a <= b``."""
    for b in c.ids:
        for a in sorted(c.below(b)):
            yield a, b
