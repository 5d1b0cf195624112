import pytest

from stratcx.chain import (
    ChainComplex,
    ChainHomotopy,
    ChainMap,
    add_maps,
    compose_chain_maps,
    identity_map,
    is_identity,
    maps_equal,
    subtract_maps,
    verify_chain_map,
    verify_complex,
    verify_homotopy,
    zero_map,
)
from stratcx.freecat import FreeMorphism, FreeObject, Node


def _obj(name, n):
    return FreeObject(tuple(Node("c", f"{name}{i}", "x") for i in range(n)))


def _interval():
    """Z^2 <- Z with d = (-1, 1): the cellular complex of a segment."""
    c0, c1 = _obj("v", 2), _obj("e", 1)
    d1 = FreeMorphism(c1, c0, {0: {0: -1, 1: 1}})
    return ChainComplex({0: c0, 1: c1}, {1: d1})


def _disk():
    """Boundary of a triangle plus its interior."""
    c0, c1, c2 = _obj("v", 3), _obj("e", 3), _obj("f", 1)
    # edges 01, 12, 02
    d1 = FreeMorphism(c1, c0, {0: {0: -1, 1: 1}, 1: {1: -1, 2: 1}, 2: {0: -1, 2: 1}})
    d2 = FreeMorphism(c2, c1, {0: {0: 1, 1: 1, 2: -1}})
    return ChainComplex({0: c0, 1: c1, 2: c2}, {1: d1, 2: d2})


def test_d_squared():
    assert verify_complex(_disk()).ok
    bad = _disk()
    bad.differentials[2] = FreeMorphism(bad.term(2), bad.term(1), {0: {0: 1, 1: 1, 2: 1}})
    assert "d^2 != 0" in verify_complex(bad).kinds()


def test_missing_differential_is_zero():
    c = _interval()
    assert c.d(5).is_zero()
    assert c.ranks() == [2, 1]


def test_chain_map_check():
    c = _disk()
    assert verify_chain_map(identity_map(c)).ok
    swap = identity_map(c)
    swap.components[0] = FreeMorphism(c.term(0), c.term(0), {0: {1: 1}, 1: {0: 1}, 2: {2: 1}})
    assert "not a chain map" in verify_chain_map(swap).kinds()


def test_contraction_of_interval():
    """id and the map collapsing onto vertex 0 are homotopic."""
    c = _interval()
    collapse = ChainMap(c, c, {0: FreeMorphism(c.term(0), c.term(0), {0: {0: 1}, 1: {0: 1}})})
    h = ChainHomotopy(identity_map(c), collapse, {0: FreeMorphism(c.term(0), c.term(1), {1: {0: 1}})})
    assert verify_chain_map(collapse).ok
    assert verify_homotopy(h).ok
    wrong = ChainHomotopy(identity_map(c), collapse, {0: FreeMorphism(c.term(0), c.term(1), {1: {0: -1}})})
    assert "homotopy relation fails" in verify_homotopy(wrong).kinds()


def test_map_arithmetic():
    c = _disk()
    i = identity_map(c)
    assert is_identity(compose_chain_maps(i, i)).ok
    z = subtract_maps(i, i)
    assert maps_equal(z, zero_map(c, c)).ok
    assert maps_equal(add_maps(z, i), i).ok
    assert "maps differ" in maps_equal(i, zero_map(c, c)).kinds()
    with pytest.raises(ValueError):
        compose_chain_maps(identity_map(_interval()), i)
