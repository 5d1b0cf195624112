import pytest
from hypothesis import given, strategies as st

from stratcx import catalog
from stratcx.freecat import (
    ArrowTable,
    FreeMorphism,
    FreeObject,
    K0Class,
    Node,
    compose,
    invert_iso,
    k0_class_of_object,
    node,
)
from stratcx.strata import PosetMap


def _obj(n, label="x"):
    return FreeObject(tuple(Node("c", f"s{i}", label) for i in range(n)))


def _dense_mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


@st.composite
def matrices(draw, rows, cols):
    return [[draw(st.integers(-3, 3)) for _ in range(cols)] for _ in range(rows)]


def _morph(src, tgt, m):
    return FreeMorphism.from_entries(src, tgt, [(i, j, m[i][j]) for i in range(len(m)) for j in range(len(m[0]))])


@given(st.data())
def test_composition_is_matrix_multiplication(data):
    a, b, c = (data.draw(st.integers(1, 4)) for _ in range(3))
    oa, ob, oc = _obj(a), _obj(b), _obj(c)
    g = data.draw(matrices(b, a))
    f = data.draw(matrices(c, b))
    got = compose(_morph(ob, oc, f), _morph(oa, ob, g))
    assert got.to_dense() == _dense_mul(f, g)


@given(st.data())
def test_composition_associative_and_unital(data):
    dims = [data.draw(st.integers(1, 3)) for _ in range(4)]
    objs = [_obj(n) for n in dims]
    f, g, h = (_morph(objs[i], objs[i + 1], data.draw(matrices(dims[i + 1], dims[i]))) for i in range(3))
    assert (h @ g) @ f == h @ (g @ f)
    assert FreeMorphism.identity(objs[1]) @ f == f
    assert f - f == FreeMorphism.zero(objs[0], objs[1])


def test_zero_entries_are_dropped():
    o = _obj(2)
    f = FreeMorphism(o, o, {0: {0: 0, 1: 2}, 1: {}})
    assert f.entries() == [(1, 0, 2)] and f.nnz() == 1
    assert (f + (-f)).is_zero()


def test_shape_mismatch_raises():
    with pytest.raises(ValueError):
        FreeMorphism.identity(_obj(2)) @ FreeMorphism.identity(_obj(3))
    with pytest.raises(ValueError):
        FreeMorphism.identity(_obj(2)) + FreeMorphism.identity(_obj(3))


def test_arrow_table_reachability():
    c = catalog.filled_triangle()
    t = ArrowTable.from_complexes([c])
    top, vert = node(c, "D0D1D2"), node(c, "D2")
    assert t.reachable(top, vert)
    assert not t.reachable(vert, top)
    assert not t.reachable(node(c, "D0"), node(c, "D1"))


def test_arrow_table_vertical_and_iso():
    a = catalog.edge_complex()
    b = a.relabel("edge2")
    f = PosetMap(a, b, {s: s for s in a.ids})
    t = ArrowTable.from_complexes([a, b], [f])
    assert t.reachable(node(a, "D0D1"), node(b, "D0"))
    assert not t.is_iso(node(a, "D0"), node(b, "D0"))
    t.add_arrow(node(a, "D0"), node(b, "D0"), "iso")
    assert t.is_iso(node(b, "D0"), node(a, "D0"))
    with pytest.raises(ValueError):
        t.add_arrow(node(a, "D0"), node(b, "D1"), "iso")
    with pytest.raises(ValueError):
        t.add_arrow(node(a, "D0"), node(b, "D1"), "weird")


def test_arrow_table_check_flags_unreachable_entries():
    c = catalog.edge_complex()
    t = ArrowTable.from_complexes([c])
    src = FreeObject((node(c, "D0"),))
    tgt = FreeObject((node(c, "D0D1"),))
    rep = t.check(FreeMorphism(src, tgt, {0: {0: 1}}))
    assert "unreachable generator" in rep.kinds()
    assert t.check(FreeMorphism(tgt, src, {0: {0: 1}})).ok


def test_invert_iso():
    o = _obj(3)
    f = FreeMorphism(o, o, {0: {1: -1}, 1: {2: 1}, 2: {0: 1}})
    g = invert_iso(f)
    assert g @ f == FreeMorphism.identity(o)
    assert f @ g == FreeMorphism.identity(o)
    with pytest.raises(ValueError):
        invert_iso(FreeMorphism(o, o, {0: {0: 2}, 1: {1: 1}, 2: {2: 1}}))
    with pytest.raises(ValueError):
        invert_iso(FreeMorphism(o, o, {0: {0: 1}, 1: {0: 1}, 2: {2: 1}}))
    mixed = FreeObject((Node("c", "a", "x"), Node("c", "b", "y")))
    with pytest.raises(ValueError):
        invert_iso(FreeMorphism(mixed, mixed, {0: {1: 1}, 1: {0: 1}}))


def test_k0_class_algebra_and_format():
    k = 2 * K0Class.of("Z") - K0Class.of("Q")
    assert k.coefficients == {"Z": 2, "Q": -1}
    assert str(k) == "-[Q] +2[Z]"
    assert not (k - k)
    assert str(K0Class()) == "0"
    assert k0_class_of_object(_obj(3)) == 3 * K0Class.of("x")
