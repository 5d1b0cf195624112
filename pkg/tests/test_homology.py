import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from stratcx import catalog
from stratcx.builders import build_cech, build_sd
from stratcx.generate import random_complex
from stratcx.homology import (
    AbelianRealization,
    HomologyGroup,
    IntegerChainComplex,
    RealizationError,
    constant_homology,
    constant_realization,
    determinant,
    homology_groups,
    identity_matrix,
    integer_rank,
    invariant_factors,
    matmul,
    path_independence,
    realization_from_mapping,
    realize,
    smith_normal_form,
    zero_realization,
)
from stratcx.verify import trimmed


def _sympy_factors(m, rows, cols):
    if not rows or not cols:
        return []
    s = sympy_snf(Matrix(rows, cols, [x for r in m for x in r]), domain=ZZ)
    return [abs(int(s[i, i])) for i in range(min(rows, cols)) if s[i, i] != 0]


@st.composite
def int_matrices(draw):
    r, c = draw(st.integers(0, 5)), draw(st.integers(0, 5))
    m = [[draw(st.integers(-6, 6)) for _ in range(c)] for _ in range(r)]
    return m, r, c


@settings(max_examples=200, deadline=None)
@given(int_matrices())
def test_smith_form_against_sympy(data):
    m, r, c = data
    f = smith_normal_form(m, c)
    assert f.invariant_factors == _sympy_factors(m, r, c)
    assert matmul(matmul(f.U, m, inner=r), f.V, inner=c) == f.S
    assert matmul(f.U, f.U_inv, inner=r) == identity_matrix(r)
    if r:
        assert abs(determinant(f.U)) == 1
    if c:
        assert abs(determinant(f.V)) == 1
    assert smith_normal_form(m, c, transforms=False).invariant_factors == f.invariant_factors


def test_smith_form_examples():
    assert invariant_factors([[2, 0], [0, 3]]) == [1, 6]
    assert invariant_factors([[2, 4], [6, 8]]) == [2, 4]
    assert invariant_factors([[0, 0], [0, 0]]) == []
    assert integer_rank([[1, 2], [2, 4]]) == 1
    assert invariant_factors([], ncols=3) == []


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_determinant_against_sympy(m):
    assert determinant(m) == int(Matrix(m).det())


def test_determinant_rejects_non_square():
    with pytest.raises(ValueError):
        determinant([[1, 2]])


def _sig(groups):
    return [str(h) for h in trimmed(groups)]


@pytest.mark.parametrize(
    "make, expected",
    [
        (catalog.point_complex, ["Z"]),
        (catalog.edge_complex, ["Z"]),
        (catalog.triangle_complex, ["Z", "Z"]),
        (catalog.filled_triangle, ["Z"]),
        (catalog.bigon, ["Z", "Z"]),
        (catalog.tetrahedron_boundary, ["Z", "0", "Z"]),
        (lambda: catalog.simplex_boundary(3), ["Z", "0", "0", "Z"]),
        (lambda: catalog.cycle_complex(6), ["Z", "Z"]),
    ],
)
def test_constant_homology_of_catalog(make, expected):
    c = make()
    assert _sig(constant_homology(build_cech(c))) == expected
    assert _sig(constant_homology(build_sd(c))) == expected


def test_square_cone_is_contractible():
    assert _sig(constant_homology(build_sd(catalog.square_cone()))) == ["Z"]


def test_torsion_from_projective_plane_cells():
    # one cell in each degree, with the 2-cell attached twice around the 1-cell
    c = IntegerChainComplex([1, 1, 1], {1: [[0]], 2: [[2]]})
    assert [str(h) for h in homology_groups(c)] == ["Z", "Z/2", "0"]
    assert c.euler_characteristic() == 1


def test_group_formatting():
    assert str(HomologyGroup(0, 2)) == "Z^2"
    assert str(HomologyGroup(1, 1, (2, 3))) == "Z + Z/2 + Z/3"
    assert str(HomologyGroup(1, 0)) == "0"


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_euler_characteristic_and_model_independence(seed):
    c = random_complex(random.Random(seed))
    for b in (build_cech(c), build_sd(c)):
        groups = constant_homology(b)
        ranks = b.ranks()
        assert sum((-1) ** h.degree * h.betti for h in groups) == sum((-1) ** n * r for n, r in enumerate(ranks))
    assert trimmed(constant_homology(build_cech(c))) == trimmed(constant_homology(build_sd(c)))


def test_zero_realization():
    c = catalog.triangle_complex()
    assert all(h.betti == 0 for h in homology_groups(realize(build_cech(c), zero_realization(c))))


def test_rank_two_realization_doubles_homology():
    c = catalog.triangle_complex()
    ranks = {c.label(s): 2 for s in c.ids}
    r = AbelianRealization(ranks, default="constant")
    assert [h.betti for h in trimmed(homology_groups(realize(build_cech(c), r)))] == [2, 2]


def test_twisted_realization_on_a_cycle():
    # a sign flip on one arrow around the 3-cycle gives a local system with
    # monodromy -1: H0 = Z/2 coker, H1 = 0
    c = catalog.triangle_complex()
    r = realization_from_mapping({c.label(s): 1 for s in c.ids}, {"D0D2->D2": [[-1]]}, default="constant")
    assert path_independence(c, r).ok
    assert [str(h) for h in homology_groups(realize(build_cech(c), r))] == ["Z/2", "0"]


def test_path_dependence_is_reported_with_flags():
    c = catalog.filled_triangle()
    r = realization_from_mapping({c.label(s): 1 for s in c.ids}, {"D0D1->D0": [[-1]]}, default="constant")
    rep = path_independence(c, r)
    assert "path dependence" in rep.kinds()
    v = next(v for v in rep.violations if v.ids == ("D0D1D2", "D0"))
    assert "D0D1D2>D0D1>D0" in v.detail and "D0D1D2>D0D2>D0" in v.detail
    with pytest.raises(RealizationError):
        realize(build_cech(c), r)


def test_realization_errors():
    c = catalog.edge_complex()
    r = AbelianRealization({c.label(s): 1 for s in c.ids})
    assert "realization error" in path_independence(c, r).kinds()
    r = realization_from_mapping({c.label(s): 1 for s in c.ids}, {"D0D1->D0": [[1, 1]]}, default="constant")
    assert "realization error" in path_independence(c, r).kinds()
    with pytest.raises(ValueError):
        realization_from_mapping({}, {"D0D1": [[1]]})
    with pytest.raises(KeyError):
        AbelianRealization({}).rank("x")


def test_constant_realization_shape():
    c = catalog.edge_complex()
    r = constant_realization(c)
    z = realize(build_cech(c), r)
    assert z.ranks == [2, 1]
    assert z.d(1) == [[-1], [1]]


def test_smith_form_trivial_cases():
    f = smith_normal_form(identity_matrix(3))
    assert f.S == identity_matrix(3)
    z = smith_normal_form([[0, 0], [0, 0], [0, 0]])
    assert z.S == [[0, 0], [0, 0], [0, 0]] and z.rank == 0


def _random_unimodular(rng, n):
    m = identity_matrix(n)
    for _ in range(8):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        k = rng.randint(-3, 3)
        m[i] = [a + k * b for a, b in zip(m[i], m[j])]
    return m


@settings(max_examples=80, deadline=None)
@given(int_matrices(), st.integers(0, 10**6))
def test_smith_form_is_invariant_under_unimodular_multiplication(data, seed):
    m, r, c = data
    rng = random.Random(seed)
    P, Q = _random_unimodular(rng, r), _random_unimodular(rng, c)
    pm = matmul(matmul(P, m, inner=r), Q, inner=c) if r and c else m
    assert invariant_factors(pm, c) == invariant_factors(m, c)


def test_path_dependence_on_the_square_poset():
    c = catalog.square_cone()
    ranks = {c.label(s): 1 for s in c.ids}
    top = next(s for s in c.ids if c.codim(s) == 3)
    edge = sorted(c.lower_covers(top))[0]
    r = realization_from_mapping(ranks, {f"{top}->{edge}": [[-1]]}, default="constant")
    rep = path_independence(c, r)
    assert "path dependence" in rep.kinds()
    assert path_independence(c, constant_realization(c)).ok
