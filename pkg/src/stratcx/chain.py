"""Chain complexes of free objects, chain maps, homotopies, and their checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from .freecat import ZERO_OBJECT, FreeMorphism, FreeObject, compose, differing_entries
from .strata import ValidationReport


@dataclass
class ChainComplex:
    """Terms in degrees ``0..top`` with ``d[n]: term n -> term n-1``.

    ``truncation_bound`` marks a complex that continues past its last stored
    degree; identities are then only asserted up to that bound.
    """

    terms: dict[int, FreeObject]
    differentials: dict[int, FreeMorphism] = field(default_factory=dict)
    truncation_bound: int | None = None

    def term(self, n: int) -> FreeObject:
        return self.terms.get(n, ZERO_OBJECT)

    def d(self, n: int) -> FreeMorphism:
        if n in self.differentials:
            return self.differentials[n]
        return FreeMorphism.zero(self.term(n), self.term(n - 1))

    @property
    def top(self) -> int:
        return max(self.terms, default=-1)

    def degrees(self) -> range:
        return range(0, self.top + 1)

    def ranks(self) -> list[int]:
        return [len(self.term(n)) for n in self.degrees()]


@dataclass
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    components: dict[int, FreeMorphism]

    def __getitem__(self, n: int) -> FreeMorphism:
        if n in self.components:
            return self.components[n]
        return FreeMorphism.zero(self.source.term(n), self.target.term(n))

    def degrees(self) -> range:
        return range(0, min(self.source.top, self.target.top) + 1)


@dataclass
class ChainHomotopy:
    """``components[n]: source term n -> target term n+1`` with
    ``d h + h d = f - g``."""

    f: ChainMap
    g: ChainMap
    components: dict[int, FreeMorphism]

    def __getitem__(self, n: int) -> FreeMorphism:
        if n in self.components:
            return self.components[n]
        return FreeMorphism.zero(self.f.source.term(n), self.f.target.term(n + 1))


def _upper(c: ChainComplex) -> int:
    return c.top if c.truncation_bound is None else min(c.top, c.truncation_bound)


def verify_complex(c: ChainComplex, name: str = "complex") -> ValidationReport:
    rep = ValidationReport(checks=[f"{name}: d^2 = 0"])
    for n in range(2, _upper(c) + 1):
        dd = compose(c.d(n - 1), c.d(n))
        if not dd.is_zero():
            i, j, v = dd.entries()[0]
            rep.add("d^2 != 0", [name, str(n)], f"entry ({i},{j}) = {v}")
    for n, m in c.differentials.items():
        if m.source != c.term(n) or m.target != c.term(n - 1):
            rep.add("differential shape", [name, str(n)])
    return rep


def verify_chain_map(f: ChainMap, name: str = "map") -> ValidationReport:
    rep = ValidationReport(checks=[f"{name}: f d = d f"])
    top = min(_upper(f.source), _upper(f.target))
    for n in range(0, top + 1):
        fn = f[n]
        if fn.source != f.source.term(n) or fn.target != f.target.term(n):
            rep.add("component shape", [name, str(n)])
            continue
        if n == 0:
            continue
        lhs = compose(f[n - 1], f.source.d(n))
        rhs = compose(f.target.d(n), fn)
        if lhs.cols != rhs.cols:
            i, j, a, b = differing_entries(lhs, rhs, 1)[0]
            rep.add("not a chain map", [name, str(n)], f"entry ({i},{j}): {a} != {b}")
    return rep


def verify_homotopy(h: ChainHomotopy, name: str = "homotopy") -> ValidationReport:
    """Check ``d h + h d = f - g`` in every degree whose terms are available."""
    rep = ValidationReport(checks=[f"{name}: d h + h d = f - g"])
    src, tgt = h.f.source, h.f.target
    top = min(_upper(src), _upper(tgt) - 1 if tgt.truncation_bound is not None else _upper(tgt))
    for n in range(0, top + 1):
        lhs = compose(tgt.d(n + 1), h[n])
        if n >= 1:
            lhs = lhs + compose(h[n - 1], src.d(n))
        rhs = h.f[n] - h.g[n]
        if lhs.cols != rhs.cols:
            i, j, a, b = differing_entries(lhs, rhs, 1)[0]
            rep.add("homotopy relation fails", [name, str(n)], f"entry ({i},{j}): {a} != {b}")
    return rep


def identity_map(c: ChainComplex) -> ChainMap:
    return ChainMap(c, c, {n: FreeMorphism.identity(c.term(n)) for n in c.degrees()})


def zero_map(a: ChainComplex, b: ChainComplex) -> ChainMap:
    return ChainMap(a, b, {})


def compose_chain_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    """``f o g``."""
    if g.target is not f.source:
        raise ValueError("chain maps are not composable")
    degs = range(0, min(g.source.top, f.target.top) + 1)
    return ChainMap(g.source, f.target, {n: compose(f[n], g[n]) for n in degs})


def _check_parallel(f: ChainMap, g: ChainMap) -> None:
    if f.source is not g.source or f.target is not g.target:
        raise ValueError("chain maps have different endpoints")


def add_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    _check_parallel(f, g)
    degs = set(f.components) | set(g.components)
    return ChainMap(f.source, f.target, {n: f[n] + g[n] for n in degs})


def subtract_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    _check_parallel(f, g)
    degs = set(f.components) | set(g.components)
    return ChainMap(f.source, f.target, {n: f[n] - g[n] for n in degs})


def maps_equal(f: ChainMap, g: ChainMap, name: str = "maps") -> ValidationReport:
    rep = ValidationReport(checks=[f"{name}: equal"])
    if f.source is not g.source or f.target is not g.target:
        rep.add("different endpoints", [name])
        return rep
    top = min(_upper(f.source), _upper(f.target))
    for n in range(0, top + 1):
        a, b = f[n], g[n]
        if a.cols != b.cols:
            i, j, x, y = differing_entries(a, b, 1)[0]
            rep.add("maps differ", [name, str(n)], f"entry ({i},{j}): {x} != {y}")
    return rep


def is_identity(f: ChainMap, name: str = "map") -> ValidationReport:
    if f.source is not f.target:
        rep = ValidationReport(checks=[f"{name}: identity"])
        rep.add("not an endomorphism", [name])
        return rep
    return maps_equal(f, identity_map(f.source), name)
