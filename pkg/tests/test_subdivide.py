import random

import pytest
from hypothesis import given, settings, strategies as st

from stratcx import catalog
from stratcx.freecat import FreeMorphism
from stratcx.generate import random_complex
from stratcx.strata import validate_complex, validate_poset_map
from stratcx.subdivide import (
    IntersectionProfile,
    barycentric,
    barycentric_comparison,
    blowup_inverse_and_homotopy,
    blowup_subdivide,
    normalized,
    simplicialize,
    star_cech_pushforward,
    star_inverse_and_homotopy,
    star_subdivide,
    verify_barycentric,
    verify_star,
    with_vertices_last,
)
from stratcx.verify import check_homology, check_subdivisions
from stratcx.volume import k0_class_of_complex, motivic_volume_formula, pushforward_labels


def _vertex_sets(c, rename=None):
    rename = rename or {}
    return sorted(tuple(sorted(rename.get(v, v) for v in c[s].vertices)) for s in c.ids)


def _stellar_oracle(c, center):
    """Vertex sets after starring at ``center``, computed on plain sets."""
    sets = {frozenset(c[s].vertices) for s in c.ids}
    sig = frozenset(c[center].vertices)
    star = {t for t in sets if sig <= t}
    keep = sets - star
    out = set(keep) | {frozenset({"E"})}
    for t in star:
        for r in sets:
            if r <= t and not sig <= r:
                out.add(r | {"E"})
    return sorted(tuple(sorted(s)) for s in out)


def _no_twins(c):
    return len({frozenset(c[s].vertices) for s in c.ids}) == len(c)


def test_star_on_edge_gives_a_path():
    r = star_subdivide(catalog.edge_complex(), "D0D1")
    d = r.derived
    assert validate_complex(d).ok
    assert _vertex_sets(d) == [("D0",), ("D0", "E"), ("D1",), ("D1", "E"), ("E",)]
    assert {s: r.pushforward(s) for s in d.ids} == {"D0": "D0", "D1": "D1", "E": "D0D1", "D0*E": "D0D1", "D1*E": "D0D1"}
    assert {d.label(s) for s in ("E", "D0*E", "D1*E")} == {"e"}
    assert validate_poset_map(r.pushforward).ok


def test_star_on_filled_triangle_cone():
    r = star_subdivide(catalog.filled_triangle(), "D0D1D2")
    assert len(r.derived) == 13
    assert sorted(r.derived[s].vertices for s in r.derived.of_codim(3)) == [
        ("D0", "D1", "E"),
        ("D0", "D2", "E"),
        ("D1", "D2", "E"),
    ]


@pytest.mark.parametrize("make", [catalog.edge_complex, catalog.filled_triangle, catalog.tetrahedron_boundary, lambda: catalog.simplex(3)])
def test_star_matches_set_oracle(make):
    c = make()
    for s in c.ids:
        r = star_subdivide(c, s)
        assert _vertex_sets(r.derived) == _stellar_oracle(c, s), s


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_star_matches_set_oracle_random(seed):
    c = random_complex(random.Random(seed), duplicates=0.0)
    if not _no_twins(c):
        return
    s = random.Random(seed).choice(c.ids)
    assert _vertex_sets(star_subdivide(c, s).derived) == _stellar_oracle(c, s)


def test_barycentric_of_edge_and_cycle():
    r = barycentric(catalog.edge_complex())
    assert sorted(r.derived.ids) == ["D0", "D0<D0D1", "D0D1", "D1", "D1<D0D1"]
    assert r.pushforward("D1<D0D1") == "D0D1"
    r = barycentric(catalog.triangle_complex())
    assert [len(r.derived.of_codim(k)) for k in (1, 2)] == [6, 6]
    phi, rep = barycentric_comparison(r)
    assert rep.ok


def test_barycentric_of_non_simplicial_input():
    r = simplicialize(catalog.square_cone())
    assert r.derived.is_simplicial
    assert validate_complex(r.derived).ok
    assert verify_barycentric(r).ok
    # one new divisor per stratum of the input
    assert len(r.derived.of_codim(1)) == 9


def test_blowup_of_edge_at_divisor():
    c = catalog.edge_complex()
    r = blowup_subdivide(c, "D0")
    d = r.derived
    assert _vertex_sets(d) == [("D0",), ("D0", "D1"), ("D0", "D1", "E"), ("D0", "E"), ("D1",), ("D1", "E"), ("E",)]
    # strict transforms are isomorphic to their images
    assert r.iso_tags == {("D0", "D0"), ("D0D1", "D0D1"), ("D1", "D1")}
    assert d.label("E") == d.label("D0*E") != c.label("D0")
    gamma, h = blowup_inverse_and_homotopy(r)
    assert verify_star(r).ok


def test_blowup_with_two_components():
    c = catalog.edge_complex()
    r = blowup_subdivide(c, "D0", IntersectionProfile("D0", "proper", {"D0D1": 2}))
    assert {"D1*E#0", "D1*E#1", "D0D1*E#0", "D0D1*E#1"} <= set(r.derived.ids)
    assert verify_star(r).ok
    k = pushforward_labels(k0_class_of_complex(r.maps.cech_derived), r)
    assert k == motivic_volume_formula(c)


def test_profile_modes():
    c = catalog.filled_triangle()
    for s in c.ids:
        assert normalized(blowup_subdivide(c, s, IntersectionProfile(s, "stratum"))) == normalized(star_subdivide(c, s))
        triv = blowup_subdivide(c, s, IntersectionProfile(s, "none"))
        assert _vertex_sets(triv.derived) == _vertex_sets(c)
        assert verify_star(triv).ok


@pytest.mark.parametrize(
    "profile, message",
    [
        (IntersectionProfile("D0", "proper", {"D0": 2}), "exactly one component"),
        (IntersectionProfile("D0", "proper", {"D0D1": -1}), "negative"),
        (IntersectionProfile("D1"), "profile is for"),
        (IntersectionProfile("D0", "weird"), "unknown profile mode"),
        (IntersectionProfile("D0", "proper", {"D1": 1}), "not in the star"),
    ],
)
def test_bad_profiles(profile, message):
    with pytest.raises(ValueError, match=message):
        blowup_subdivide(catalog.edge_complex(), "D0", profile)


def test_inconsistent_and_ambiguous_profiles():
    c = catalog.filled_triangle()
    with pytest.raises(ValueError, match="inconsistent"):
        blowup_subdivide(c, "D0", IntersectionProfile("D0", "proper", {"D0D1": 0}))
    with pytest.raises(ValueError, match="ambiguous"):
        blowup_subdivide(c, "D0", IntersectionProfile("D0", "proper", {"D0D1": 2}))


def test_bad_centers():
    with pytest.raises(KeyError):
        star_subdivide(catalog.edge_complex(), "zz")
    with pytest.raises(ValueError):
        star_subdivide(catalog.square_cone(), "D0")
    with pytest.raises(ValueError):
        star_inverse_and_homotopy(barycentric(catalog.edge_complex()))
    with pytest.raises(ValueError):
        barycentric_comparison(star_subdivide(catalog.edge_complex(), "D0"))


def test_reordering_puts_center_last():
    c = catalog.filled_triangle()
    d = with_vertices_last(c, ["D0", "D1"])
    assert d.name == c.name
    assert validate_complex(d).ok
    top = d["D0D1D2"].vertices
    assert top[-2:] == ("D0", "D1")
    r = blowup_subdivide(c, "D0D1")
    assert verify_star(r).ok


def test_closed_form_of_cech_pushforward(simplicial):
    for s in simplicial.ids:
        _, rep = star_cech_pushforward(star_subdivide(simplicial, s))
        assert rep.ok, (s, rep.violations[:2])


def test_full_subdivision_checks_on_catalog(simplicial):
    assert check_subdivisions(simplicial).ok
    assert check_homology(simplicial).ok


def test_partial_order_complex():
    c = random_complex(random.Random(3), partial_order=1.0, duplicates=0.0)
    assert validate_complex(c).ok
    assert check_subdivisions(c).ok


def test_mutated_gamma_is_caught():
    r = star_subdivide(catalog.filled_triangle(), "D0D1D2")
    m = r.maps
    g = m.gamma
    i, j, v = g[2].entries()[0]
    cols = {jj: dict(col) for jj, col in g[2].cols.items()}
    cols[j][i] = -v
    g.components[2] = FreeMorphism(g[2].source, g[2].target, cols)
    assert not verify_star(r).ok


def test_barycentric_comparison_ranks_on_edge():
    r = barycentric(catalog.edge_complex())
    phi, rep = barycentric_comparison(r)
    assert rep.ok
    assert [len(phi[n].source) for n in (0, 1)] == [3, 2]
    assert [len(phi[n].target) for n in (0, 1)] == [3, 2]


def test_blowup_inside_the_edge_point():
    c = catalog.edge_complex()
    r = blowup_subdivide(c, "D0D1")
    d = r.derived
    assert set(d.vertex_ids) == {"D0", "D1", "E"}
    assert "D0D1" in d.ids and r.correspondence["D0D1"].kind == "strict"
    exceptional_edges = [s for s in d.of_codim(2) if "E" in d[s].vertices]
    assert len(exceptional_edges) == 2
    assert all(d[s].vertices[-1] == "E" for s in d.ids if "E" in d[s].vertices)
    assert verify_star(r).ok
