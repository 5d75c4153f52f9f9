from fractions import Fraction

import pytest

from symprel.linalg import LinalgError, Mat, full_subspace, span, unit_vector
from symprel.relations import (
    TOWBER_KINDS,
    Relation,
    adjoint,
    compose,
    conjugate,
    converse,
    corners,
    direct_sum,
    endrel_morphism,
    flags,
    graph,
    identity_relation,
    image_of_subspace,
    relation,
    towber_block,
    transpose,
    zero_relation,
)
from symprel.testkit import Rng, random_invertible


def e(i, n):
    return unit_vector(i, n)


def test_graph_examples():
    zero_map = graph(Mat.zeros(1, 1))
    assert zero_map.space == span([[1, 0]], 2)
    assert identity_relation(2).dim == 2
    m = Mat.from_rows([[1, 2], [3, 4]])
    cosur, coinj, is_map = flags(graph(m))
    assert cosur and coinj and is_map


def test_unit_laws():
    r = relation(2, 3, [((1, 0), (1, 2, 0)), ((0, 1), (0, 0, 1))])
    assert compose(identity_relation(3), r) == r
    assert compose(r, identity_relation(2)) == r


def test_paper_halo_composition_identities():
    # R = {(0, y)}: composing with the converse in one order fills the
    # target square, in the other collapses to zero.
    x_dim, y_dim = 2, 2
    r = relation(x_dim, y_dim, [((0, 0), (1, 0)), ((0, 0), (0, 1))])
    assert compose(r, converse(r)).space == full_subspace(2 * y_dim)
    assert compose(converse(r), r).dim == 0


def test_graph_composition():
    g = Mat.from_rows([[1, 1], [0, 1]])
    f = Mat.from_rows([[2, 0], [1, 3]])
    assert compose(graph(g), graph(f)) == graph(g @ f)


def test_converse_involution_and_inverse_graph():
    m = Mat.from_rows([[1, 2], [1, 3]])
    r = graph(m)
    assert converse(converse(r)) == r
    from symprel.linalg import inverse

    assert converse(r) == graph(inverse(m))


def test_transpose_of_graph_matches_bilinear_identity():
    rng = Rng(17)
    bx = random_invertible(3, rng)
    by = random_invertible(3, rng)
    m = Mat.from_rows([[rng.int_between(-2, 2) for _ in range(3)]
                       for _ in range(3)])
    t = transpose(graph(m), bx, by)
    cosur, coinj, _ = flags(t)
    assert cosur and coinj
    from symprel.relations import as_matrix

    tm = as_matrix(t)
    # B_X(R^t y, x) = B_Y(y, R x) on all basis pairs
    for i in range(3):
        for j in range(3):
            y = e(i, 3)
            x = e(j, 3)
            lhs = _bilinear(bx, tm.matvec(y), x)
            rhs = _bilinear(by, y, m.matvec(x))
            assert lhs == rhs


def _bilinear(b, u, v):
    acc = Fraction(0)
    for a, w in zip(u, b.matvec(v)):
        acc += a * w
    return acc


def test_transpose_is_adjoint_conjugated():
    rng = Rng(23)
    bx = random_invertible(2, rng)
    by = random_invertible(3, rng)
    r = relation(2, 3, [((1, 0), (1, 1, 0)), ((1, 1), (0, 0, 2))])
    adj = adjoint(r)
    # transpose = B-conjugated adjoint: (y, x) in R^t iff (By y, Bx x) in R*
    t = transpose(r, bx, by)
    for v in t.space.vectors():
        y, x = v[:3], v[3:]
        alpha = by.transpose().matvec(y)
        beta = bx.transpose().matvec(x)
        from symprel.linalg import contains

        assert contains(adj.space, tuple(alpha) + tuple(beta))
    assert t.dim == adj.dim


def test_transpose_rejects_degenerate_forms():
    r = identity_relation(2)
    with pytest.raises(LinalgError):
        transpose(r, Mat.zeros(2, 2), Mat.identity(2))


def test_corners_examples():
    y_only = relation(2, 2, [((0, 0), (1, 0)), ((0, 0), (0, 1))])
    d, rg, k, h = corners(y_only)
    assert d.is_zero() and rg == full_subspace(2)
    assert k.is_zero() and h == full_subspace(2)
    m = Mat.from_rows([[1, 0], [1, 1]])
    d, rg, k, h = corners(graph(m))
    assert d == full_subspace(2) and h.is_zero()
    tau2 = towber_block("tau", 2)
    d, rg, k, h = corners(tau2)
    assert d == span([e(0, 2)], 2)
    assert rg == span([e(1, 2)], 2)
    assert k.is_zero() and h.is_zero()


def test_direct_sum():
    assert direct_sum(identity_relation(1), identity_relation(2)) \
        == identity_relation(3)
    r = towber_block("tau_plus", 2)
    q = towber_block("plus_tau", 1)
    s = direct_sum(r, q)
    assert s.dim == r.dim + q.dim
    d, rg, k, h = corners(s)
    assert d.dim == corners(r)[0].dim + corners(q)[0].dim
    assert h.dim == corners(r)[3].dim + corners(q)[3].dim


def test_towber_block_examples():
    assert towber_block("tau_plus", 1) == relation(1, 1, [((1,), (0,))])
    assert towber_block("tau", 1) == zero_relation(1, 1)
    assert towber_block("plus_tau_plus", 1).space == full_subspace(2)
    assert towber_block("plus_tau_plus", 3).dim == 4
    with pytest.raises(LinalgError):
        towber_block("tau", 0)
    with pytest.raises(LinalgError):
        towber_block("sigma", 1)


def test_towber_block_structure():
    n = 3
    nilpotent = towber_block("tau_plus", n)
    cosur, coinj, is_map = flags(nilpotent)
    assert is_map
    # the converse of the nilpotent graph is the halo chain, up to relabeling
    from symprel.relations import endrel_isomorphic

    assert endrel_isomorphic(converse(nilpotent), towber_block("plus_tau", n))


def test_conjugate_and_morphism():
    r = towber_block("tau_plus", 2)
    assert conjugate(Mat.identity(2), r) == r
    rng = Rng(3)
    s = random_invertible(2, rng)
    conj = conjugate(s, r)
    assert [x.dim for x in corners(conj)] == [x.dim for x in corners(r)]
    assert endrel_morphism(s, r, conj)
    # for graphs, morphism by invertible s means matrix conjugacy
    from symprel.linalg import inverse

    m = Mat.from_rows([[1, 1], [0, 2]])
    q_mat = s @ m @ inverse(s)
    assert endrel_morphism(s, graph(m), graph(q_mat))
    assert conjugate(s, graph(m)) == graph(q_mat)


def test_image_of_subspace():
    r = towber_block("tau", 3)
    img = image_of_subspace(r, span([e(0, 3), e(1, 3)], 3))
    assert img == span([e(1, 3), e(2, 3)], 3)
    assert image_of_subspace(r, span([e(2, 3)], 3)).is_zero()
