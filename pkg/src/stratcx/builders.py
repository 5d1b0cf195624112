"""The subdivision and Čech complexes of a stratified complex and the
canonical maps between them.

``Sd`` has one summand per chain of strata, carrying the class of the last
entry.  ``Č`` has one summand per stratum, in degree ``codim - 1``.  Their
extended versions (``mode="extended"``) also include degenerate chains and
weakly increasing vertex words; those are materialized up to a degree bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Callable, Hashable, Sequence

from .chain import ChainComplex, ChainHomotopy, ChainMap, compose_chain_maps, identity_map
from .freecat import FreeMorphism, FreeObject, Node
from .strata import (
    Chain,
    ExtendedStratum,
    PosetMap,
    StratifiedComplex,
    validate_complex,
)

BOUNDED = "bounded"
EXTENDED = "extended"


@dataclass
class BuiltComplex:
    """A chain complex together with the chain or word labeling each summand."""

    complex: ChainComplex
    indexing: dict[int, list]
    source: StratifiedComplex
    kind: str
    mode: str
    position: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self.position:
            for n, keys in self.indexing.items():
                for i, k in enumerate(keys):
                    self.position[k] = i

    @property
    def extended(self) -> bool:
        return self.mode == EXTENDED

    @property
    def bound(self) -> int | None:
        return self.complex.truncation_bound

    def term(self, n: int) -> FreeObject:
        return self.complex.term(n)

    def ranks(self) -> list[int]:
        return self.complex.ranks()

    def keys(self, n: int) -> list:
        return self.indexing.get(n, [])


def default_bound(c: StratifiedComplex) -> int:
    return c.max_codim + 2


@lru_cache(maxsize=None)
def signed_permutations(k: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """All permutations of ``range(k)`` with their signs."""
    out = []
    for p in permutations(range(k)):
        inv = sum(1 for a in range(k) for b in range(a + 1, k) if p[a] > p[b])
        out.append((p, -1 if inv % 2 else 1))
    return tuple(out)


def signed_orderings(letters: Sequence[str]) -> list[tuple[tuple[str, ...], int]]:
    """``sum over g of sign(g) * (letters[g(0)], ..., letters[g(k)])`` collected
    by the resulting sequence.

    Equal letters make each sequence's coefficient vanish: the permutations
    giving one sequence form a coset of a stabilizer that contains a
    transposition.
    """
    if len(set(letters)) != len(letters):
        return []
    return [(tuple(letters[i] for i in p), s) for p, s in signed_permutations(len(letters))]


def _require_ordered_simplicial(c: StratifiedComplex) -> None:
    if not c.is_simplicial:
        raise ValueError("Čech-level constructions need a simplicial complex")
    rep = validate_complex(c)
    if not rep.ok:
        raise ValueError("invalid complex: " + "; ".join(str(v) for v in rep.violations[:3]))


def _mode_bound(c: StratifiedComplex, mode: str, bound: int | None) -> int | None:
    if mode == BOUNDED:
        return None
    if mode != EXTENDED:
        raise ValueError(f"unknown mode {mode!r}")
    return default_bound(c) if bound is None else bound


def _node_of(c: StratifiedComplex) -> Callable[[str], Node]:
    cache: dict[str, Node] = {}
    name = c.name

    def get(sid: str) -> Node:
        n = cache.get(sid)
        if n is None:
            n = cache[sid] = Node(name, sid, c.label(sid))
        return n

    return get


def _assemble(
    c: StratifiedComplex,
    kind: str,
    mode: str,
    indexing: dict[int, list],
    carrier: Callable[[Hashable], str],
    faces: Callable[[Hashable], list[tuple[Hashable, int]]],
    bound: int | None,
) -> BuiltComplex:
    nd = _node_of(c)
    terms = {n: FreeObject(tuple(nd(carrier(k)) for k in keys)) for n, keys in indexing.items()}
    pos: dict = {}
    for keys in indexing.values():
        for i, k in enumerate(keys):
            pos[k] = i
    diffs: dict[int, FreeMorphism] = {}
    for n in range(1, max(indexing, default=0) + 1):
        cols: dict[int, dict[int, int]] = {}
        for j, k in enumerate(indexing[n]):
            col: dict[int, int] = {}
            for y, sgn in faces(k):
                i = pos[y]
                col[i] = col.get(i, 0) + sgn
            cols[j] = col
        diffs[n] = FreeMorphism(terms[n], terms[n - 1], cols)
    return BuiltComplex(ChainComplex(terms, diffs, bound), indexing, c, kind, mode, pos)


# -- subdivision complex ---------------------------------------------------

def sd_indexing(c: StratifiedComplex, mode: str, top: int | None) -> dict[int, list[Chain]]:
    strict = mode == BOUNDED
    level = [Chain((s,)) for s in c.ids]
    out: dict[int, list[Chain]] = {}
    n = 0
    while level and (top is None or n <= top):
        out[n] = level
        nxt = []
        for ch in level:
            last = ch[-1]
            for t in c.sorted_above(last):
                if strict and t == last:
                    continue
                nxt.append(Chain(ch + (t,)))
        level = nxt
        n += 1
    return out


def _chain_faces(ch: Chain) -> list[tuple[Chain, int]]:
    return [(Chain(ch[:j] + ch[j + 1:]), -1 if j % 2 else 1) for j in range(len(ch))]


def build_sd(c: StratifiedComplex, mode: str = BOUNDED, bound: int | None = None) -> BuiltComplex:
    """``Sd`` (nondegenerate chains) or ``Sd+`` (all chains up to ``bound``)."""
    bound = _mode_bound(c, mode, bound)
    idx = sd_indexing(c, mode, bound)
    return _assemble(c, "sd", mode, idx, lambda ch: ch[-1], _chain_faces, bound)


# -- Čech complex ----------------------------------------------------------

def _compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    """Ordered ways to write ``total`` as ``parts`` positive integers."""
    if parts == 1:
        return [(total,)] if total >= 1 else []
    out = []
    for first in range(1, total - parts + 2):
        out.extend((first,) + rest for rest in _compositions(total - first, parts - 1))
    return out


def cech_indexing(c: StratifiedComplex, mode: str, top: int | None) -> dict[int, list[ExtendedStratum]]:
    out: dict[int, list[ExtendedStratum]] = {}
    if mode == BOUNDED:
        for s in c.strata:
            out.setdefault(s.codim - 1, []).append(ExtendedStratum(s.id, s.vertices))
        for n in range(0, max(out, default=-1) + 1):
            out.setdefault(n, [])
            out[n].sort()
        return out
    assert top is not None
    for n in range(0, top + 1):
        keys = []
        for s in c.strata:
            k = len(s.vertices)
            for comp in _compositions(n + 1, k):
                word = tuple(v for v, m in zip(s.vertices, comp) for _ in range(m))
                keys.append(ExtendedStratum(s.id, word))
        keys.sort()
        out[n] = keys
    return out


def cech_face(c: StratifiedComplex, key: ExtendedStratum, j: int) -> ExtendedStratum:
    """Delete letter ``j``; the base shrinks when the letter was unique."""
    base, word = key
    rest = word[:j] + word[j + 1:]
    letter = word[j]
    if (j > 0 and word[j - 1] == letter) or (j + 1 < len(word) and word[j + 1] == letter):
        return ExtendedStratum(base, rest)
    s = c[base]
    return ExtendedStratum(s.faces[s.vertices.index(letter)], rest)


def build_cech(c: StratifiedComplex, mode: str = BOUNDED, bound: int | None = None) -> BuiltComplex:
    """``Č`` (strata by codim) or ``Č+`` (extended strata up to ``bound``)."""
    _require_ordered_simplicial(c)
    bound = _mode_bound(c, mode, bound)
    idx = cech_indexing(c, mode, bound)

    def faces(k: ExtendedStratum) -> list[tuple[ExtendedStratum, int]]:
        return [(cech_face(c, k, j), -1 if j % 2 else 1) for j in range(len(k[1]))]

    return _assemble(c, "cech", mode, idx, lambda k: k[0], faces, bound)


# -- maps between built complexes --------------------------------------------

def map_from_rule(
    src: BuiltComplex,
    tgt: BuiltComplex,
    rule: Callable[[Hashable], list[tuple[Hashable, int]]],
    shift: int = 0,
) -> dict[int, FreeMorphism]:
    """Components ``src_n -> tgt_{n+shift}`` from a per-summand rule.

    Images whose key is not a summand of ``tgt`` (degenerate keys in a
    bounded target) are dropped, which is the projection onto it.
    """
    comps: dict[int, FreeMorphism] = {}
    pos = tgt.position
    for n, keys in src.indexing.items():
        m = n + shift
        if m not in tgt.indexing:
            continue
        cols: dict[int, dict[int, int]] = {}
        for j, k in enumerate(keys):
            col: dict[int, int] = {}
            for y, v in rule(k):
                i = pos.get(y)
                if i is not None:
                    col[i] = col.get(i, 0) + v
            cols[j] = col
        comps[n] = FreeMorphism(src.term(n), tgt.term(m), cols)
    return comps


def _runs(seq: Sequence) -> list[tuple[int, int]]:
    """``(start, length)`` of each maximal run of equal entries."""
    out = []
    i = 0
    while i < len(seq):
        j = i
        while j + 1 < len(seq) and seq[j + 1] == seq[i]:
            j += 1
        out.append((i, j - i + 1))
        i = j + 1
    return out


def _word(key) -> Sequence:
    return key[1] if isinstance(key, ExtendedStratum) else key


def _duplicate(key, i: int):
    if isinstance(key, ExtendedStratum):
        w = key[1]
        return ExtendedStratum(key[0], w[: i + 1] + w[i:])
    return Chain(key[: i + 1] + key[i:])


def degenerate_contraction_rule(key) -> list[tuple[Hashable, int]]:
    """Contracting homotopy of the degenerate part.

    Let the first repeated run start at position ``a``.  If the run has even
    length the key goes to ``(-1)^a`` times the key with that entry doubled,
    otherwise to zero.  This pairs each even run with the next odd one, and
    the faces of the doubled key other than the key itself all have an odd
    first run, so no further correction terms arise.
    """
    for start, length in _runs(_word(key)):
        if length >= 2:
            if length % 2 == 0:
                return [(_duplicate(key, start), -1 if start % 2 else 1)]
            return []
    return []


@dataclass
class Splitting:
    """``Sd+ = Sd (+) degenerate part``: inclusion, projection and a homotopy
    ``d H + H d = id - incl o proj`` on the extended complex."""

    bounded: BuiltComplex
    extended: BuiltComplex
    inclusion: ChainMap
    projection: ChainMap
    homotopy: ChainHomotopy


def degeneracy_splitting(b: BuiltComplex, bounded: BuiltComplex | None = None) -> Splitting:
    if b.mode != EXTENDED:
        raise ValueError("degeneracy splitting needs an extended complex")
    if bounded is None:
        bounded = build_sd(b.source) if b.kind == "sd" else build_cech(b.source)
    ident = lambda k: [(k, 1)]  # noqa: E731
    incl = ChainMap(bounded.complex, b.complex, map_from_rule(bounded, b, ident))
    proj = ChainMap(b.complex, bounded.complex, map_from_rule(b, bounded, ident))
    comps = map_from_rule(b, b, degenerate_contraction_rule, shift=1)
    ip = compose_chain_maps(incl, proj)
    h = ChainHomotopy(identity_map(b.complex), ip, comps)
    return Splitting(bounded, b, incl, proj, h)


# -- last vertex map -----------------------------------------------------------

def last_vertex_image(c: StratifiedComplex, ch: Sequence[str]) -> ExtendedStratum:
    """``(s0 <= ... <= sn) -> [max s0, ..., max sn]`` based at the face of ``sn``
    spanned by those maxima."""
    word = tuple(c.max_vertex(s) for s in ch)
    return ExtendedStratum(c.face_with_vertices(ch[-1], frozenset(word)), word)


def build_last_vertex(
    c: StratifiedComplex,
    sd: BuiltComplex | None = None,
    cech: BuiltComplex | None = None,
    mode: str = BOUNDED,
    bound: int | None = None,
) -> ChainMap:
    """``λ: Sd -> Č`` (or ``λ+: Sd+ -> Č+``).  The bounded map drops images
    with a repeated maximum, i.e. it is the projection of ``λ+``."""
    _require_ordered_simplicial(c)
    sd = sd or build_sd(c, mode, bound)
    cech = cech or build_cech(c, mode, bound)
    comps = map_from_rule(sd, cech, lambda ch: [(last_vertex_image(c, ch), 1)])
    return ChainMap(sd.complex, cech.complex, comps)


# -- subdivision map -----------------------------------------------------------

def subdivision_terms(c: StratifiedComplex, key: ExtendedStratum) -> list[tuple[Chain, int]]:
    """``sum over g of sign(g) ([p_g0] <= [p_g0, p_g1] <= ...)``, faces taken in
    the base stratum."""
    base, word = key
    out = []
    for seq, sgn in signed_orderings(word):
        entries = tuple(c.face_with_vertices(base, frozenset(seq[: k + 1])) for k in range(len(seq)))
        out.append((Chain(entries), sgn))
    return out


def build_subdivision_map(
    c: StratifiedComplex,
    cech: BuiltComplex | None = None,
    sd: BuiltComplex | None = None,
    mode: str = BOUNDED,
    bound: int | None = None,
) -> ChainMap:
    """``sd: Č -> Sd`` (or ``sd+: Č+ -> Sd+``)."""
    _require_ordered_simplicial(c)
    sd = sd or build_sd(c, mode, bound)
    cech = cech or build_cech(c, mode, bound)
    comps = map_from_rule(cech, sd, lambda k: subdivision_terms(c, k))
    return ChainMap(cech.complex, sd.complex, comps)


# -- comparison homotopy -------------------------------------------------------

def comparison_terms(c: StratifiedComplex, ch: Sequence[str]) -> list[tuple[int, Chain, int]]:
    """Terms ``(i, chain, coefficient)`` of ``h`` on one chain.

    For each ``i`` the first ``i+1`` maxima are permuted by ``g`` and the
    resulting flag of faces of the last entry is spliced in front of
    ``ch[i:]`` with sign ``(-1)^i sign(g)``.
    """
    top = ch[-1]
    word = [c.max_vertex(s) for s in ch]
    out = []
    for i in range(len(ch)):
        if i and word[i] == word[i - 1]:
            break  # every later prefix repeats a letter, see signed_orderings
        tail = tuple(ch[i:])
        for seq, sgn in signed_orderings(word[: i + 1]):
            head = tuple(c.face_with_vertices(top, frozenset(seq[: k + 1])) for k in range(i + 1))
            out.append((i, Chain(head + tail), sgn if i % 2 == 0 else -sgn))
    return out


@dataclass
class Comparison:
    """The data comparing ``Sd`` and ``Č`` of one ordered simplicial complex."""

    source: StratifiedComplex
    sd: BuiltComplex
    cech: BuiltComplex
    sd_ext: BuiltComplex
    cech_ext: BuiltComplex
    lam: ChainMap
    sdmap: ChainMap
    lam_ext: ChainMap
    sdmap_ext: ChainMap
    homotopy: ChainHomotopy


def build_comparison_homotopy(
    c: StratifiedComplex,
    sd_ext: BuiltComplex | None = None,
    cech_ext: BuiltComplex | None = None,
    bound: int | None = None,
) -> ChainHomotopy:
    """``h`` on ``Sd+`` with ``d h + h d = id - sd+ o λ+``."""
    _require_ordered_simplicial(c)
    sd_ext = sd_ext or build_sd(c, EXTENDED, bound)
    cech_ext = cech_ext or build_cech(c, EXTENDED, sd_ext.bound)
    lam = build_last_vertex(c, sd_ext, cech_ext)
    sdm = build_subdivision_map(c, cech_ext, sd_ext)
    comps = map_from_rule(sd_ext, sd_ext, lambda ch: [(y, v) for _, y, v in comparison_terms(c, ch)], shift=1)
    return ChainHomotopy(identity_map(sd_ext.complex), compose_chain_maps(sdm, lam), comps)


def build_comparison(c: StratifiedComplex, bound: int | None = None) -> Comparison:
    """Every object and map of the Sd/Č comparison, built once and shared."""
    _require_ordered_simplicial(c)
    sd, cech = build_sd(c), build_cech(c)
    sdx = build_sd(c, EXTENDED, bound)
    cx = build_cech(c, EXTENDED, sdx.bound)
    lam = build_last_vertex(c, sd, cech)
    sdm = build_subdivision_map(c, cech, sd)
    lamx = build_last_vertex(c, sdx, cx)
    sdmx = build_subdivision_map(c, cx, sdx)
    comps = map_from_rule(sdx, sdx, lambda ch: [(y, v) for _, y, v in comparison_terms(c, ch)], shift=1)
    h = ChainHomotopy(identity_map(sdx.complex), compose_chain_maps(sdmx, lamx), comps)
    return Comparison(c, sd, cech, sdx, cx, lam, sdm, lamx, sdmx, h)


PARTS = ("A", "B", "C", "D", "UD", "LD", "LT", "UT")


def _part_of_dh(i: int, j: int, n: int) -> str:
    """Classify the term ``d_j`` of the ``i``-th summand of ``h`` on an
    ``n``-chain."""
    if i == 0 and j == 0:
        return "A"
    if i == n and j == n + 1:
        return "B"
    if i > j:
        return "C"
    if j >= i + 2:
        return "D"
    if j == i + 1:
        return "UD"
    return "LD"


def comparison_parts(c: StratifiedComplex, sd_ext: BuiltComplex) -> dict[int, dict[str, FreeMorphism]]:
    """``d h + h d`` on ``Sd+_n`` split by the index pair of each term.

    ``d h`` contributes parts A, B, C, D, UD, LD according to ``(i, j)``;
    ``h d`` contributes LT (``i >= j``) and UT (``j > i``).
    """
    bound = sd_ext.bound if sd_ext.bound is not None else sd_ext.complex.top
    pos = sd_ext.position
    cache: dict[Chain, list[tuple[int, Chain, int]]] = {}

    def h_terms(ch: Chain) -> list[tuple[int, Chain, int]]:
        t = cache.get(ch)
        if t is None:
            t = cache[ch] = comparison_terms(c, ch)
        return t

    out: dict[int, dict[str, FreeMorphism]] = {}
    for n in range(0, bound):
        keys = sd_ext.keys(n)
        obj = sd_ext.term(n)
        cols: dict[str, dict[int, dict[int, int]]] = {p: {} for p in PARTS}
        for col_idx, ch in enumerate(keys):
            for i, y, v in h_terms(ch):
                for j in range(len(y)):
                    z = Chain(y[:j] + y[j + 1:])
                    part = _part_of_dh(i, j, n)
                    col = cols[part].setdefault(col_idx, {})
                    r = pos[z]
                    col[r] = col.get(r, 0) + (v if j % 2 == 0 else -v)
            for j in range(len(ch) if n >= 1 else 0):
                z = Chain(ch[:j] + ch[j + 1:])
                sj = -1 if j % 2 else 1
                for i, y, v in h_terms(z):
                    part = "LT" if i >= j else "UT"
                    col = cols[part].setdefault(col_idx, {})
                    r = pos[y]
                    col[r] = col.get(r, 0) + sj * v
        out[n] = {p: FreeMorphism(obj, obj, cols[p]) for p in PARTS}
    return out


# -- pushforward ----------------------------------------------------------------

def build_sd_pushforward(
    f: PosetMap,
    src: BuiltComplex | None = None,
    tgt: BuiltComplex | None = None,
    mode: str = BOUNDED,
    bound: int | None = None,
) -> ChainMap:
    """``Sd(f)``: a chain goes to its image chain through the vertical arrow on
    the last entry; degenerate images vanish in the bounded version."""
    src = src or build_sd(f.source, mode, bound)
    tgt = tgt or build_sd(f.target, mode, bound if bound is not None else src.bound)
    a = f.assignment
    comps = map_from_rule(src, tgt, lambda ch: [(Chain(tuple(a[s] for s in ch)), 1)])
    return ChainMap(src.complex, tgt.complex, comps)
