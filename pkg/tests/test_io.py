import json
from pathlib import Path

import pytest

from stratcx import catalog
from stratcx.io import (
    DocumentError,
    complex_from_dict,
    complex_to_dict,
    dumps,
    load_complex,
    parse_complex,
    profile_from_dict,
    quotient_from_dict,
    realization_from_dict,
    realization_to_dict,
)
from stratcx.lattice import check_complex, multiplicity
from stratcx.strata import validate_complex
from stratcx.subdivide import blowup_subdivide, star_subdivide

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.mark.parametrize("path", sorted(p.name for p in DATA.glob("*.json") if not p.name.endswith(("profile.json", "quotient.json", "realization.json"))))
def test_data_documents_load_and_validate(path):
    c, lat = load_complex(str(DATA / path))
    assert validate_complex(c).ok
    if lat is not None:
        assert check_complex(lat).ok


@pytest.mark.parametrize("make", [catalog.edge_complex, catalog.triangle_complex, catalog.filled_triangle, catalog.bigon, catalog.square_cone, catalog.tetrahedron_boundary])
def test_round_trip(make):
    c = make()
    doc = complex_to_dict(c)
    c2, _ = complex_from_dict(json.loads(dumps(doc)))
    assert c2.canonical() == c.canonical()
    assert complex_to_dict(c2) == doc


def test_round_trip_of_subdivisions():
    for r in (star_subdivide(catalog.filled_triangle(), "D0D1"), blowup_subdivide(catalog.bigon(), "p")):
        c2, _ = complex_from_dict(complex_to_dict(r.derived))
        assert c2.canonical() == r.derived.canonical()


def test_round_trip_with_lattice():
    c, lat = load_complex(str(DATA / "cone-3d.json"))
    c2, lat2 = complex_from_dict(complex_to_dict(c, lat))
    assert multiplicity(lat2["D0D1D2"]) == multiplicity(lat["D0D1D2"]) == 3


def test_catalog_prefix():
    c, _ = load_complex("catalog:edge")
    assert c.name == "edge"
    with pytest.raises(DocumentError, match="unknown catalog"):
        load_complex("catalog:nope")


@pytest.mark.parametrize(
    "text, where",
    [
        ('{"vertices": [}', "<string>:1:15"),
        ('[]', "<string>"),
        ('{"vertices": 3}', "<string>.vertices"),
        ('{"vertices": [{"id": "D0"}]}', "<string>.vertices[0].order"),
        ('{"vertices": [{"id": "D0", "order": 0}], "strata": [{"id": "x", "vertices": []}]}', "<string>.strata[0].vertices"),
        ('{"vertices": [{"id": "D0", "order": 0}], "strata": [{"id": "x", "vertices": ["D0"], "flags": ["zz"]}]}', "<string>.strata[0].flags[0]"),
        ('{"vertices": [{"id": "D0", "order": 0}, {"id": "D1", "order": 1}], "strata": [{"id": "x", "vertices": ["D0", "D1", "D2"]}]}', "<string>.strata[0].faces"),
        ('{"vertices": [{"id": "D0", "order": 0}], "base": "R"}', "<string>.base"),
    ],
)
def test_errors_are_located(text, where):
    with pytest.raises(DocumentError) as e:
        parse_complex(text)
    assert e.value.where == where


def test_missing_file():
    with pytest.raises(DocumentError):
        load_complex("/nonexistent/file.json")


def test_partial_order_document():
    doc = {
        "vertices": [{"id": "D0", "order": ["D1"]}, {"id": "D1", "order": {"level": 0, "precedes": []}}],
        "strata": [{"id": "x", "vertices": ["D0", "D1"]}],
    }
    c, _ = complex_from_dict(doc)
    assert validate_complex(c).ok
    assert c["x"].faces == ("D1", "D0")


def test_auxiliary_documents():
    r = realization_from_dict(json.loads((DATA / "edge-realization.json").read_text()))
    assert r.ranks == {"a": 2, "b": 1, "e": 1}
    assert realization_from_dict(realization_to_dict(r)) == r
    p = profile_from_dict(json.loads((DATA / "edge-profile.json").read_text()))
    assert p.center == "D0D1" and p.count("D0D1") == 1
    q = quotient_from_dict(json.loads((DATA / "quartic-quotient.json").read_text()))
    assert q.representative("Q") == "pt"
    with pytest.raises(DocumentError):
        profile_from_dict({"center": "x", "mode": "sideways"})
    with pytest.raises(DocumentError):
        realization_from_dict({"ranks": {"a": "two"}})
    with pytest.raises(DocumentError):
        quotient_from_dict({"into": {"p": ["a"], "q": ["a"]}})
