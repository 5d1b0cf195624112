"""Integer realizations of built complexes and their homology.

A realization assigns a free abelian group ``Z^rank`` to every class label
and an integer matrix to every covering inclusion of strata.  Generator
arrows of a built complex are replaced by composites along complete flags,
so the realization must be path independent; :func:`path_independence`
checks that exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .builders import BuiltComplex
from .strata import StratifiedComplex, ValidationReport

IntMatrix = tuple[tuple[int, ...], ...]


# -- integer linear algebra -------------------------------------------------

def identity_matrix(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], inner: int | None = None) -> list[list[int]]:
    """``a b``.  ``inner`` gives the shared dimension when a factor has no rows."""
    k = inner if inner is not None else (len(b) if b else (len(a[0]) if a else 0))
    m = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * m
        for t in range(k):
            x = row[t]
            if x:
                bt = b[t]
                for j in range(m):
                    if bt[j]:
                        acc[j] += x * bt[j]
        out.append(acc)
    return out


def transpose(a: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    return [[row[j] for row in a] for j in range(n)]


@dataclass
class SmithForm:
    """``U m V = S`` with ``U``, ``V`` unimodular and ``S`` diagonal with a
    divisibility chain.  ``U_inv`` is the inverse of ``U``."""

    U: list[list[int]]
    S: list[list[int]]
    V: list[list[int]]
    U_inv: list[list[int]]
    invariant_factors: list[int]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def smith_normal_form(m: Sequence[Sequence[int]], ncols: int | None = None, transforms: bool = True) -> SmithForm:
    """Smith normal form over the integers with exact arithmetic.

    ``ncols`` is needed only when ``m`` has no rows.  With
    ``transforms=False`` the unimodular factors are not tracked (they come
    back empty), which is much faster for large matrices.
    """
    rows = len(m)
    cols = ncols if ncols is not None else (len(m[0]) if rows else 0)
    A = [list(map(int, r)) for r in m]
    U = identity_matrix(rows) if transforms else []
    Ui = identity_matrix(rows) if transforms else []
    V = identity_matrix(cols) if transforms else []

    def swap_rows(i: int, j: int) -> None:
        if i == j:
            return
        A[i], A[j] = A[j], A[i]
        if transforms:
            U[i], U[j] = U[j], U[i]
            for r in Ui:
                r[i], r[j] = r[j], r[i]

    def swap_cols(i: int, j: int) -> None:
        if i == j:
            return
        for r in A:
            r[i], r[j] = r[j], r[i]
        if transforms:
            for r in V:
                r[i], r[j] = r[j], r[i]

    def add_row(src: int, dst: int, k: int) -> None:
        # row dst += k * row src
        if not k:
            return
        a, b = A[src], A[dst]
        for j in range(cols):
            if a[j]:
                b[j] += k * a[j]
        if transforms:
            us, ud = U[src], U[dst]
            for j in range(rows):
                if us[j]:
                    ud[j] += k * us[j]
            for r in Ui:
                if r[dst]:
                    r[src] -= k * r[dst]

    def add_col(src: int, dst: int, k: int) -> None:
        if not k:
            return
        for r in A:
            if r[src]:
                r[dst] += k * r[src]
        if transforms:
            for r in V:
                if r[src]:
                    r[dst] += k * r[src]

    def negate_row(i: int) -> None:
        A[i] = [-x for x in A[i]]
        if transforms:
            U[i] = [-x for x in U[i]]
            for r in Ui:
                r[i] = -r[i]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            r = A[i]
            for j in range(t, cols):
                x = r[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if A[i][t]:
                    q = A[i][t] // p
                    add_row(t, i, -q)
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if A[t][j]:
                    q = A[t][j] // p
                    add_col(t, j, -q)
                    if A[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t, rows):
                    if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                        best = (abs(A[i][t]), i, "r")
                for j in range(t, cols):
                    if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                        best = (abs(A[t][j]), j, "c")
                _, k, kind = best
                if kind == "r":
                    swap_rows(t, k)
                else:
                    swap_cols(t, k)
                continue
            p = A[t][t]
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if A[t][t] < 0:
            negate_row(t)
        t += 1
    factors = [A[i][i] for i in range(min(rows, cols)) if A[i][i]]
    return SmithForm(U, A, V, Ui, factors)


def invariant_factors(m: Sequence[Sequence[int]], ncols: int | None = None) -> list[int]:
    return smith_normal_form(m, ncols, transforms=False).invariant_factors


def integer_rank(m: Sequence[Sequence[int]], ncols: int | None = None) -> int:
    return len(invariant_factors(m, ncols))


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    A = [list(map(int, r)) for r in m]
    if any(len(r) != n for r in A):
        raise ValueError("determinant of a non-square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1


# -- realizations -----------------------------------------------------------

@dataclass
class AbelianRealization:
    """Ranks per class label and a matrix per covering inclusion.

    ``matrices[(x, y)]`` has shape ``rank(label y) x rank(label x)`` and
    realizes the arrow from stratum ``x`` to its codimension-one face ``y``.
    ``default`` (if set) is used for covering arrows without an explicit
    matrix: ``"constant"`` means the all-ones identity for equal ranks.
    """

    ranks: dict[str, int]
    matrices: dict[tuple[str, str], IntMatrix] = field(default_factory=dict)
    default: str | None = None

    def rank(self, label: str) -> int:
        if label not in self.ranks:
            raise KeyError(f"realization has no rank for label {label!r}")
        return self.ranks[label]


def constant_realization(c: StratifiedComplex) -> AbelianRealization:
    """Every label gets ``Z`` and every arrow the identity: simplicial
    homology of the dual complex."""
    return AbelianRealization({c.label(s): 1 for s in c.ids}, default="constant")


def zero_realization(c: StratifiedComplex) -> AbelianRealization:
    return AbelianRealization({c.label(s): 0 for s in c.ids}, default="constant")


class RealizationError(ValueError):
    def __init__(self, message: str, report: ValidationReport | None = None):
        super().__init__(message)
        self.report = report


def _as_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def _cover_matrix(c: StratifiedComplex, r: AbelianRealization, x: str, y: str) -> IntMatrix:
    rx, ry = r.rank(c.label(x)), r.rank(c.label(y))
    m = r.matrices.get((x, y))
    if m is None:
        if r.default == "constant" and rx == ry:
            return _as_matrix(identity_matrix(rx))
        raise RealizationError(f"no matrix for covering arrow {x}->{y}")
    if len(m) != ry or any(len(row) != rx for row in m):
        raise RealizationError(f"matrix for {x}->{y} should be {ry}x{rx}")
    return m


class _Composer:
    """All composites along complete flags, memoized per pair."""

    def __init__(self, c: StratifiedComplex, r: AbelianRealization):
        self.c, self.r = c, r
        self.memo: dict[tuple[str, str], dict[IntMatrix, tuple[str, ...]]] = {}

    def composites(self, x: str, y: str) -> dict[IntMatrix, tuple[str, ...]]:
        """Distinct composites ``x -> y``, each with one witness flag."""
        key = (x, y)
        if key in self.memo:
            return self.memo[key]
        c = self.c
        if x == y:
            out = {_as_matrix(identity_matrix(self.r.rank(c.label(x)))): (x,)}
        else:
            out = {}
            for z in c.lower_covers(x):
                if not c.le(y, z):
                    continue
                first = _cover_matrix(c, self.r, x, z)
                for rest, flag in self.composites(z, y).items():
                    m = _as_matrix(matmul(rest, first, inner=len(first)))
                    out.setdefault(m, (x,) + flag)
        self.memo[key] = out
        return out


def path_independence(c: StratifiedComplex, r: AbelianRealization) -> ValidationReport:
    """Compare composites along every pair of complete flags between every
    pair of comparable strata."""
    rep = ValidationReport(checks=["realization: path independence"])
    comp = _Composer(c, r)
    try:
        for x in c.ids:
            for y in sorted(c.below(x)):
                found = comp.composites(x, y)
                if len(found) > 1:
                    flags = list(found.values())[:2]
                    rep.add(
                        "path dependence",
                        [x, y],
                        "flags " + " | ".join(">".join(f) for f in flags) + " give different matrices",
                    )
    except (RealizationError, KeyError) as e:
        rep.add("realization error", [], str(e))
    return rep


@dataclass
class IntegerChainComplex:
    """``differentials[n]`` is a ``ranks[n-1] x ranks[n]`` integer matrix."""

    ranks: list[int]
    differentials: dict[int, list[list[int]]]

    def d(self, n: int) -> list[list[int]]:
        if n in self.differentials:
            return self.differentials[n]
        rows = self.ranks[n - 1] if 0 < n <= len(self.ranks) else 0
        cols = self.ranks[n] if 0 <= n < len(self.ranks) else 0
        return [[0] * cols for _ in range(rows)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * r for n, r in enumerate(self.ranks))


def verify_integer_complex(c: IntegerChainComplex) -> ValidationReport:
    rep = ValidationReport(checks=["integer complex: d^2 = 0"])
    for n in range(2, len(c.ranks)):
        dd = matmul(c.d(n - 1), c.d(n), inner=c.ranks[n - 1])
        if any(any(row) for row in dd):
            rep.add("d^2 != 0", [str(n)])
    return rep


def realize(b: BuiltComplex, r: AbelianRealization, check: bool = True) -> IntegerChainComplex:
    """Replace generators by composed realization matrices."""
    c = b.source
    if check:
        rep = path_independence(c, r)
        if not rep.ok:
            raise RealizationError(str(rep.violations[0]), rep)
    comp = _Composer(c, r)
    cx = b.complex
    offsets: dict[int, list[int]] = {}
    ranks: list[int] = []
    for n in cx.degrees():
        offs, total = [], 0
        for nd in cx.term(n).summands:
            offs.append(total)
            total += r.rank(nd.label)
        offsets[n] = offs
        ranks.append(total)
    diffs: dict[int, list[list[int]]] = {}
    for n in range(1, len(ranks)):
        M = [[0] * ranks[n] for _ in range(ranks[n - 1])]
        src, tgt = cx.term(n).summands, cx.term(n - 1).summands
        for j, col in cx.d(n).cols.items():
            x = src[j].stratum
            for i, v in col.items():
                y = tgt[i].stratum
                found = comp.composites(x, y)
                block = next(iter(found))
                oi, oj = offsets[n - 1][i], offsets[n][j]
                for a, row in enumerate(block):
                    for bcol, e in enumerate(row):
                        if e:
                            M[oi + a][oj + bcol] += v * e
        diffs[n] = M
    out = IntegerChainComplex(ranks, diffs)
    if check:
        rep = verify_integer_complex(out)
        if not rep.ok:
            raise RealizationError("realized complex has d^2 != 0", rep)
    return out


# -- homology -----------------------------------------------------------------

@dataclass(frozen=True)
class HomologyGroup:
    degree: int
    betti: int
    torsion: tuple[int, ...] = ()

    def __str__(self) -> str:
        parts = []
        if self.betti:
            parts.append("Z" if self.betti == 1 else f"Z^{self.betti}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def homology_groups(c: IntegerChainComplex) -> list[HomologyGroup]:
    """``H_n = ker d_n / im d_{n+1}`` for every stored degree.

    Homology in the top stored degree assumes the complex stops there.
    """
    factors = {}
    for n in range(1, len(c.ranks)):
        factors[n] = invariant_factors(c.d(n), ncols=c.ranks[n])
    out = []
    for n, r in enumerate(c.ranks):
        rk_out = len(factors.get(n, []))
        inc = factors.get(n + 1, [])
        betti = r - rk_out - len(inc)
        out.append(HomologyGroup(n, betti, tuple(f for f in inc if f > 1)))
    return out


def betti_numbers(c: IntegerChainComplex) -> list[int]:
    return [h.betti for h in homology_groups(c)]


def constant_homology(b: BuiltComplex) -> list[HomologyGroup]:
    return homology_groups(realize(b, constant_realization(b.source)))


def realization_from_mapping(ranks: Mapping[str, int], matrices: Mapping[str, Sequence[Sequence[int]]], default: str | None = None) -> AbelianRealization:
    """Build from ``{"x->y": rows}`` keys as used in documents."""
    mats = {}
    for key, rows in matrices.items():
        if "->" not in key:
            raise ValueError(f"arrow key {key!r} is not of the form 'src->dst'")
        x, y = (s.strip() for s in key.split("->", 1))
        mats[(x, y)] = _as_matrix(rows)
    return AbelianRealization(dict(ranks), mats, default)
