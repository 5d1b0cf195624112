"""Matrices over a thin category of strata.

Objects of the additive category are formal direct sums of nodes, a node
being one stratum of one complex together with its class label.  Between two
nodes there is at most one generating arrow, so a morphism is simply an
integer matrix whose nonzero entries sit at reachable (source, target) pairs.
Composition is matrix multiplication.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .strata import PosetMap, StratifiedComplex, ValidationReport

ClassLabel = str


class Node(NamedTuple):
    complex: str
    stratum: str
    label: ClassLabel

    def __str__(self) -> str:
        return f"{self.complex}:{self.stratum}"


def node(c: StratifiedComplex, sid: str) -> Node:
    return Node(c.name, sid, c.label(sid))


@dataclass(frozen=True)
class FreeObject:
    """A formal direct sum; the order of summands fixes matrix indexing."""

    summands: tuple[Node, ...] = ()

    def __len__(self) -> int:
        return len(self.summands)

    def __iter__(self) -> Iterator[Node]:
        return iter(self.summands)


ZERO_OBJECT = FreeObject(())


class FreeMorphism:
    """A sparse integer matrix between two free objects.

    ``cols[j][i] = c`` stands for ``c`` times the generator from source summand
    ``j`` to target summand ``i``.  Zero entries are never stored.
    """

    __slots__ = ("source", "target", "cols")

    def __init__(self, source: FreeObject, target: FreeObject, cols: Mapping[int, Mapping[int, int]] | None = None):
        self.source = source
        self.target = target
        clean: dict[int, dict[int, int]] = {}
        for j, col in (cols or {}).items():
            kept = {i: v for i, v in col.items() if v}
            if kept:
                clean[j] = kept
        self.cols = clean

    @classmethod
    def from_entries(cls, source: FreeObject, target: FreeObject, entries: Iterable[tuple[int, int, int]]) -> "FreeMorphism":
        cols: dict[int, dict[int, int]] = {}
        for i, j, v in entries:
            col = cols.setdefault(j, {})
            col[i] = col.get(i, 0) + v
        return cls(source, target, cols)

    @classmethod
    def zero(cls, source: FreeObject, target: FreeObject) -> "FreeMorphism":
        return cls(source, target, {})

    @classmethod
    def identity(cls, obj: FreeObject) -> "FreeMorphism":
        return cls(obj, obj, {j: {j: 1} for j in range(len(obj))})

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.target), len(self.source))

    def entries(self) -> list[tuple[int, int, int]]:
        """Canonical form: ``(row, column, coefficient)`` sorted by row then column."""
        return sorted((i, j, v) for j, col in self.cols.items() for i, v in col.items())

    def entry(self, i: int, j: int) -> int:
        return self.cols.get(j, {}).get(i, 0)

    def is_zero(self) -> bool:
        return not self.cols

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols.values())

    def to_dense(self) -> list[list[int]]:
        m = [[0] * len(self.source) for _ in range(len(self.target))]
        for j, col in self.cols.items():
            for i, v in col.items():
                m[i][j] = v
        return m

    def _same_shape(self, other: "FreeMorphism") -> None:
        if self.source != other.source or self.target != other.target:
            raise ValueError("morphisms have different source or target")

    def __add__(self, other: "FreeMorphism") -> "FreeMorphism":
        self._same_shape(other)
        cols = {j: dict(c) for j, c in self.cols.items()}
        for j, col in other.cols.items():
            acc = cols.setdefault(j, {})
            for i, v in col.items():
                acc[i] = acc.get(i, 0) + v
        return FreeMorphism(self.source, self.target, cols)

    def __neg__(self) -> "FreeMorphism":
        return self.scale(-1)

    def __sub__(self, other: "FreeMorphism") -> "FreeMorphism":
        return self + (-other)

    def scale(self, k: int) -> "FreeMorphism":
        return FreeMorphism(self.source, self.target, {j: {i: k * v for i, v in c.items()} for j, c in self.cols.items()})

    def __matmul__(self, other: "FreeMorphism") -> "FreeMorphism":
        return compose(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FreeMorphism):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.cols == other.cols

    def __hash__(self):
        return hash((self.source, self.target, tuple(self.entries())))

    def __repr__(self) -> str:
        return f"FreeMorphism({len(self.target)}x{len(self.source)}, nnz={self.nnz()})"


def compose(f: FreeMorphism, g: FreeMorphism) -> FreeMorphism:
    """``f o g``: apply ``g`` first."""
    if g.target != f.source:
        raise ValueError("cannot compose: target of g differs from source of f")
    fcols = f.cols
    out: dict[int, dict[int, int]] = {}
    for j, gcol in g.cols.items():
        acc: dict[int, int] = {}
        for k, a in gcol.items():
            fk = fcols.get(k)
            if fk:
                for i, b in fk.items():
                    acc[i] = acc.get(i, 0) + a * b
        if acc:
            out[j] = acc
    return FreeMorphism(g.source, f.target, out)


def is_equal(f: FreeMorphism, g: FreeMorphism) -> bool:
    if f.shape != g.shape:
        raise ValueError(f"shape mismatch {f.shape} vs {g.shape}")
    if f.source != g.source or f.target != g.target:
        raise ValueError("morphisms have different source or target")
    return f.cols == g.cols


def differing_entries(f: FreeMorphism, g: FreeMorphism, limit: int = 5) -> list[tuple[int, int, int, int]]:
    """Up to ``limit`` entries ``(row, col, f, g)`` where the two differ."""
    out = []
    for j in sorted(set(f.cols) | set(g.cols)):
        a, b = f.cols.get(j, {}), g.cols.get(j, {})
        for i in sorted(set(a) | set(b)):
            if a.get(i, 0) != b.get(i, 0):
                out.append((i, j, a.get(i, 0), b.get(i, 0)))
                if len(out) >= limit:
                    return out
    return out


class ArrowTable:
    """Nodes and primitive arrows; reachability is the thin hom relation.

    Arrow kinds: ``inclusion`` (F of a stratum to F of a face), ``vertical``
    (pushforward along a model morphism) and ``iso`` (an invertible arrow,
    recorded in both directions).
    """

    def __init__(self, nodes: Iterable[Node] = (), arrows: Iterable[tuple[Node, Node, str]] = ()):
        self.nodes: set[Node] = set(nodes)
        self._succ: dict[Node, set[Node]] = {}
        self._iso: dict[Node, set[Node]] = {}
        self.arrows: set[tuple[Node, Node, str]] = set()
        for a, b, kind in arrows:
            self.add_arrow(a, b, kind)
        self._reach: dict[Node, frozenset[Node]] = {}

    def add_arrow(self, a: Node, b: Node, kind: str) -> None:
        if kind not in ("inclusion", "vertical", "iso"):
            raise ValueError(f"unknown arrow kind {kind!r}")
        if kind == "iso" and a.label != b.label:
            raise ValueError(f"iso arrow between different labels: {a} ({a.label}) and {b} ({b.label})")
        self.nodes.update((a, b))
        self.arrows.add((a, b, kind))
        self._succ.setdefault(a, set()).add(b)
        if kind == "iso":
            self.arrows.add((b, a, kind))
            self._succ.setdefault(b, set()).add(a)
            self._iso.setdefault(a, set()).add(b)
            self._iso.setdefault(b, set()).add(a)
        self._reach = {}

    @classmethod
    def from_complexes(
        cls,
        complexes: Sequence[StratifiedComplex],
        maps: Sequence[PosetMap] = (),
        isos: Iterable[tuple[Node, Node]] = (),
    ) -> "ArrowTable":
        t = cls()
        for c in complexes:
            for s in c.strata:
                a = node(c, s.id)
                t.nodes.add(a)
                for f in s.lower_covers:
                    if f in c:
                        t.add_arrow(a, node(c, f), "inclusion")
        for f in maps:
            for s, u in f.assignment.items():
                t.add_arrow(node(f.source, s), node(f.target, u), "vertical")
        for a, b in isos:
            t.add_arrow(a, b, "iso")
        return t

    def _closure(self, a: Node, succ: Mapping[Node, set[Node]]) -> frozenset[Node]:
        seen = {a}
        todo = deque([a])
        while todo:
            x = todo.popleft()
            for y in succ.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return frozenset(seen)

    def reachable(self, a: Node, b: Node) -> bool:
        if a == b:
            return True
        r = self._reach.get(a)
        if r is None:
            r = self._reach[a] = self._closure(a, self._succ)
        return b in r

    def is_iso(self, a: Node, b: Node) -> bool:
        return a == b or b in self._closure(a, self._iso)

    def check(self, f: FreeMorphism, what: str = "morphism") -> ValidationReport:
        rep = ValidationReport(checks=[f"{what}: arrows reachable"])
        src, tgt = f.source.summands, f.target.summands
        for j, col in f.cols.items():
            for i in col:
                if not self.reachable(src[j], tgt[i]):
                    rep.add("unreachable generator", [str(src[j]), str(tgt[i])], what)
        return rep


def invert_iso(f: FreeMorphism, table: ArrowTable | None = None) -> FreeMorphism:
    """Two-sided inverse of a signed permutation matrix of iso generators."""
    if len(f.source) != len(f.target):
        raise ValueError("not invertible: source and target sizes differ")
    rows_seen: set[int] = set()
    inv: dict[int, dict[int, int]] = {}
    for j in range(len(f.source)):
        col = f.cols.get(j, {})
        if len(col) != 1:
            raise ValueError(f"not invertible: column {j} has {len(col)} entries")
        (i, v), = col.items()
        if v not in (1, -1) or i in rows_seen:
            raise ValueError(f"not invertible at entry ({i}, {j})")
        rows_seen.add(i)
        a, b = f.source.summands[j], f.target.summands[i]
        if table is not None and not table.is_iso(a, b):
            raise ValueError(f"generator {a} -> {b} is not an isomorphism")
        if table is None and a.label != b.label:
            raise ValueError(f"generator {a} -> {b} joins different labels")
        inv[i] = {j: v}
    return FreeMorphism(f.target, f.source, inv)


class K0Class:
    """A finitely supported integer combination of class labels."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Mapping[ClassLabel, int] | None = None):
        self.coefficients = {k: v for k, v in (coefficients or {}).items() if v}

    @classmethod
    def of(cls, *labels: ClassLabel) -> "K0Class":
        acc: dict[ClassLabel, int] = {}
        for x in labels:
            acc[x] = acc.get(x, 0) + 1
        return cls(acc)

    def __add__(self, other: "K0Class") -> "K0Class":
        acc = dict(self.coefficients)
        for k, v in other.coefficients.items():
            acc[k] = acc.get(k, 0) + v
        return K0Class(acc)

    def __neg__(self) -> "K0Class":
        return K0Class({k: -v for k, v in self.coefficients.items()})

    def __sub__(self, other: "K0Class") -> "K0Class":
        return self + (-other)

    def __mul__(self, k: int) -> "K0Class":
        return K0Class({a: k * v for a, v in self.coefficients.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, K0Class):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self):
        return hash(frozenset(self.coefficients.items()))

    def __bool__(self) -> bool:
        return bool(self.coefficients)

    def format(self, key=None) -> str:
        if not self.coefficients:
            return "0"
        parts = []
        for lab in sorted(self.coefficients, key=key or (lambda x: x)):
            v = self.coefficients[lab]
            sign = "+" if v > 0 else "-"
            mag = "" if abs(v) == 1 else str(abs(v))
            parts.append(f"{sign}{mag}[{lab}]")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"K0Class({self.format()})"


def k0_class_of_object(o: FreeObject) -> K0Class:
    return K0Class.of(*(n.label for n in o.summands))
