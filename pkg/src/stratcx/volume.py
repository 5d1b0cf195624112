"""Classes in the free abelian group on class labels."""

from __future__ import annotations

from typing import Iterable

from .builders import BuiltComplex
from .chain import ChainComplex
from .freecat import K0Class, k0_class_of_object
from .strata import StratifiedComplex
from .subdivide import SubdivisionResult


def motivic_volume_formula(c: StratifiedComplex) -> K0Class:
    """``sum over strata of (-1)^(codim + 1) [label]``."""
    acc: dict[str, int] = {}
    for s in c.strata:
        sign = 1 if s.codim % 2 else -1
        acc[s.label] = acc.get(s.label, 0) + sign
    return K0Class(acc)


def k0_class_of_complex(b: BuiltComplex | ChainComplex, top: int | None = None) -> K0Class:
    """Alternating sum of the classes of the terms.

    For a truncated (extended) complex pass ``top``; the default uses every
    stored degree.
    """
    cx = b.complex if isinstance(b, BuiltComplex) else b
    last = cx.top if top is None else top
    out = K0Class()
    for n in range(0, last + 1):
        t = k0_class_of_object(cx.term(n))
        out = out + t if n % 2 == 0 else out - t
    return out


def volume_order(c: StratifiedComplex):
    """Sort key for printing: labels of lower codimension first."""
    first: dict[str, int] = {}
    for s in c.strata:
        first[s.label] = min(first.get(s.label, s.codim), s.codim)
    return lambda lab: (first.get(lab, 1 << 30), lab)


def format_volume(c: StratifiedComplex, k: K0Class | None = None) -> str:
    k = motivic_volume_formula(c) if k is None else k
    return k.format(volume_order(c))


class LabelQuotient:
    """Identifications of labels, kept as a union-find.

    A class's representative is the label named with ``into`` when it was
    merged, otherwise its least label.
    """

    def __init__(self, merges: Iterable[Iterable[str]] = ()):
        self._parent: dict[str, str] = {}
        self._chosen: dict[str, str] = {}
        for group in merges:
            self.merge(*group)

    def _find(self, x: str) -> str:
        p = self._parent.setdefault(x, x)
        if p != x:
            p = self._parent[x] = self._find(p)
        return p

    def merge(self, *labels: str, into: str | None = None) -> None:
        labels = list(labels) + ([into] if into is not None else [])
        if not labels:
            return
        roots = {self._find(x) for x in labels}
        chosen = {self._chosen[r] for r in roots if r in self._chosen}
        if into is not None:
            chosen.discard(into)
            if chosen:
                raise ValueError(f"labels already identified with {sorted(chosen)[0]!r}, cannot merge into {into!r}")
        elif len(chosen) > 1:
            raise ValueError(f"cannot merge classes represented by {sorted(chosen)}")
        root = min(roots)
        for r in roots:
            self._parent[r] = root
        pick = into if into is not None else (chosen.pop() if chosen else None)
        for r in roots:
            self._chosen.pop(r, None)
        if pick is not None:
            self._chosen[root] = pick

    def representative(self, label: str) -> str:
        if label not in self._parent:
            return label
        root = self._find(label)
        if root in self._chosen:
            return self._chosen[root]
        members = [x for x in self._parent if self._find(x) == root]
        return min(members)

    def same(self, a: str, b: str) -> bool:
        return self.representative(a) == self.representative(b)

    def classes(self) -> list[list[str]]:
        groups: dict[str, list[str]] = {}
        for x in self._parent:
            groups.setdefault(self.representative(x), []).append(x)
        return [sorted(g) for _, g in sorted(groups.items()) if len(g) > 1]


def apply_quotient(k: K0Class, q: LabelQuotient) -> K0Class:
    acc: dict[str, int] = {}
    for lab, v in k.coefficients.items():
        r = q.representative(lab)
        acc[r] = acc.get(r, 0) + v
    return K0Class(acc)


def is_trivial_class(k: K0Class, point_label: str, quotient: LabelQuotient | None = None) -> bool:
    """True iff the class equals ``1 [point]`` (after the quotient)."""
    if quotient is not None:
        k = apply_quotient(k, quotient)
        point_label = quotient.representative(point_label)
    return k == K0Class.of(point_label)


def pushforward_labels(k: K0Class, r: SubdivisionResult) -> K0Class:
    """Replace each derived label by its iso-tagged base label."""
    acc: dict[str, int] = {}
    for lab, v in k.coefficients.items():
        b = r.base_label_of(lab)
        acc[b] = acc.get(b, 0) + v
    return K0Class(acc)
