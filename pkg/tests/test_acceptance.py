"""Acceptance criteria 1-8, one test each.  Every test records a single
pass/fail line that is printed again in the terminal summary."""

import functools
import random
import time

from conftest import record

from stratcx import catalog
from stratcx.builders import build_cech
from stratcx.freecat import K0Class
from stratcx.generate import random_complexes
from stratcx.homology import constant_homology, determinant
from stratcx.lattice import is_primitive, is_smooth, single_cone_complex, toric_resolve, validate_lattice
from stratcx.subdivide import (
    IntersectionProfile,
    barycentric,
    blowup_subdivide,
    normalized,
    star_subdivide,
    verify_barycentric,
    verify_star,
)
from stratcx.verify import check_k0, comparison_report, trimmed
from stratcx.volume import LabelQuotient, apply_quotient, is_trivial_class

CATALOG = [
    catalog.point_complex(),
    catalog.edge_complex(),
    catalog.triangle_complex(),
    catalog.filled_triangle(),
    catalog.bigon(),
    catalog.tetrahedron_boundary(),
    catalog.simplex(3),
]


@functools.lru_cache(None)
def _complexes():
    return tuple(CATALOG + random_complexes(2024, 25))


def test_criterion_1_cech_comparison():
    complexes = random_complexes(1, 200)
    start = time.perf_counter()
    failures = []
    for c in complexes:
        rep = comparison_report(c)
        if not rep.ok:
            failures.append((c.name, str(rep.violations[0])))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed <= 60
    record(1, ok, f"{len(complexes)} random complexes, {len(failures)} failing, {elapsed:.1f}s")
    assert not failures, failures[:3]
    assert elapsed <= 60


def test_criterion_2_star_subdivision():
    failures, count = [], 0
    for c in _complexes():
        for s in c.ids:
            count += 1
            rep = verify_star(star_subdivide(c, s))
            if not rep.ok:
                failures.append((c.name, s, str(rep.violations[0])))
    record(2, not failures, f"{count} star subdivisions, {len(failures)} failing")
    assert not failures, failures[:3]


def test_criterion_3_barycentric():
    failures, count = [], 0
    for c in _complexes() + (catalog.square_cone(),):
        count += 1
        rep = verify_barycentric(barycentric(c))
        if not rep.ok:
            failures.append((c.name, str(rep.violations[0])))
    record(3, not failures, f"{count} barycentric subdivisions, {len(failures)} failing")
    assert not failures, failures[:3]


def test_criterion_4_blowup():
    failures, count = [], 0
    for c in _complexes():
        for s in c.ids:
            count += 1
            rep = verify_star(blowup_subdivide(c, s))
            if not rep.ok:
                failures.append((c.name, s, "proper", str(rep.violations[0])))
            if normalized(blowup_subdivide(c, s, IntersectionProfile(s, "stratum"))) != normalized(star_subdivide(c, s)):
                failures.append((c.name, s, "stratum", "differs from star"))
            rep = verify_star(blowup_subdivide(c, s, IntersectionProfile(s, "none")))
            if not rep.ok:
                failures.append((c.name, s, "none", str(rep.violations[0])))
    record(4, not failures, f"{count} centers x 3 profiles, {len(failures)} failing")
    assert not failures, failures[:3]


def test_criterion_5_k0_invariance():
    failures = []
    for c in _complexes():
        rep = check_k0(c)
        if not rep.ok:
            failures.append((c.name, str(rep.violations[0])))
    record(5, not failures, f"{len(_complexes())} complexes with all their subdivisions, {len(failures)} failing")
    assert not failures, failures[:3]


def _homology_signature(c):
    return [(h.betti, h.torsion) for h in trimmed(constant_homology(build_cech(c)))]


def _one_round(c):
    """Barycentric once, then a star and a blowup at the first stratum of
    every codimension."""
    yield barycentric(c)
    for k in range(1, c.max_codim + 1):
        s = sorted(c.of_codim(k))[0]
        yield star_subdivide(c, s)
        yield blowup_subdivide(c, s)


def test_criterion_6_dual_complex_homology():
    cases = [(catalog.cycle_complex(n), [(1, ()), (1, ())]) for n in range(3, 9)]
    for d in (1, 2, 3):
        cases.append((catalog.simplex_boundary(d), [(1, ())] + [(0, ())] * (d - 1) + [(1, ())]))
    failures = []
    for c, expected in cases:
        got = _homology_signature(c)
        if got != expected:
            failures.append((c.name, "base", got))
        for r in _one_round(c):
            got = _homology_signature(r.derived)
            if got != expected:
                failures.append((c.name, r.kind, r.center, got))
    record(6, not failures, f"{len(cases)} complexes, {len(failures)} mismatches")
    assert not failures, failures[:3]


def test_criterion_7_obstruction():
    k = 2 * K0Class.of("Z") - K0Class.of("Q")
    nontrivial = all(not is_trivial_class(k, p) for p in ("pt", "Z", "Q", "X"))
    q = LabelQuotient()
    q.merge("Q", "Z", into="pt")
    merged = apply_quotient(k, q)
    ok = nontrivial and merged == K0Class.of("pt") and is_trivial_class(k, "pt", q)
    record(7, ok, f"2[Z]-[Q] non-trivial: {nontrivial}; merged: {merged}")
    assert ok


def _random_cone(rng, d):
    while True:
        cols = [tuple(rng.randint(-4, 4) for _ in range(d)) for _ in range(d)]
        if not all(is_primitive(c) for c in cols):
            continue
        m = abs(determinant([list(r) for r in zip(*cols)]))
        if 1 <= m <= 20:
            return cols


def test_criterion_8_toric_resolution():
    rng = random.Random(8)
    start = time.perf_counter()
    steps, failures = [], []
    for i in range(100):
        cc = single_cone_complex(_random_cone(rng, 2 if i % 2 else 3))
        out, st = toric_resolve(cc)
        steps.append(len(st))
        if not is_smooth(out)[0] or not validate_lattice(out).ok:
            failures.append(i)
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed <= 30
    record(8, ok, f"100 cones, steps min/mean/max {min(steps)}/{sum(steps) / len(steps):.2f}/{max(steps)}, {elapsed:.1f}s")
    assert not failures
    assert elapsed <= 30
