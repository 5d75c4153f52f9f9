from fractions import Fraction

import pytest

from symprel.linalg import Mat, full_subspace, intersect, span, sum_spaces, unit_vector
from symprel.symplectic import (
    Reduction,
    SympMap,
    SympSpace,
    SymplecticError,
    classify,
    darboux_basis,
    dsum,
    dual_completion,
    extend_lagrangian_basis,
    is_lagrangian,
    is_symplectic_map,
    lagrangian_complement,
    map_lagrangian_splitting,
    minus,
    omega,
    orthogonal,
    reduce_space,
    reduce_subspace,
    restrict_form,
    sp_rank,
    standard_space,
    to_chart,
    witt_artin,
)
from symprel.testkit import Rng, random_form, random_subspace, random_symplectic_map


def e(i, n):
    return unit_vector(i, n)


def test_standard_space_forms():
    assert standard_space(1).form == Mat.from_rows([[0, 1], [-1, 0]])
    assert standard_space(0).dim == 0
    v2 = standard_space(2)
    assert v2.form.entries[0][2] == 1 and v2.form.entries[2][0] == -1
    assert v2.form.entries[0][1] == 0


def test_minus_and_dsum():
    v = standard_space(1)
    assert minus(v).form == Mat.from_rows([[0, -1], [1, 0]])
    assert minus(minus(v)) == v
    assert dsum(v, standard_space(2)).dim == 6


def test_orthogonal_examples():
    v = standard_space(2)
    w = span([e(0, 4)], 4)
    assert orthogonal(v, w) == span([e(0, 4), e(1, 4), e(3, 4)], 4)
    assert orthogonal(v, full_subspace(4)).is_zero()
    block = span([e(0, 4), e(2, 4)], 4)
    assert orthogonal(v, orthogonal(v, block)) == block


def test_classify_examples():
    v = standard_space(2)
    assert classify(v, span([e(0, 4)], 4)) == "isotropic"
    assert sp_rank(v, span([e(0, 4)], 4)) == 0
    assert classify(v, span([e(0, 4), e(1, 4)], 4)) == "lagrangian"
    coiso = span([e(0, 4), e(1, 4), e(2, 4)], 4)
    assert classify(v, coiso) == "coisotropic"
    assert sp_rank(v, coiso) == 2
    assert classify(v, span([e(0, 4), e(2, 4)], 4)) == "symplectic"


def test_darboux_standard_space_is_standard_basis():
    for n in (1, 2, 3):
        v = standard_space(n)
        basis = darboux_basis(v)
        assert basis.vectors == tuple(e(i, 2 * n) for i in range(2 * n))


def test_darboux_scaled_form():
    sp = SympSpace(2, Mat.from_rows([[0, 2], [-2, 0]]))
    basis = darboux_basis(sp)
    assert basis.vectors == ((Fraction(1), Fraction(0)),
                             (Fraction(0), Fraction(1, 2)))
    assert omega(sp, basis.vectors[0], basis.vectors[1]) == 1


def test_darboux_random_forms_satisfy_pairings():
    rng = Rng(77)
    for _ in range(10):
        sp = random_form(6, rng)
        darboux_basis(sp)  # SympBasis constructor checks all pairings


def test_lagrangian_complement_examples():
    v = standard_space(2)
    lag = span([e(0, 4), e(1, 4)], 4)
    assert lagrangian_complement(v, lag) == span([e(2, 4), e(3, 4)], 4)
    v1 = standard_space(1)
    diag = span([[1, 1]], 2)
    comp = lagrangian_complement(v1, diag)
    assert is_lagrangian(v1, comp)
    assert sum_spaces(diag, comp) == full_subspace(2)
    assert lagrangian_complement(standard_space(0), span([], 0)).dim == 0


def test_lagrangian_complement_rejects_non_lagrangian():
    with pytest.raises(SymplecticError):
        lagrangian_complement(standard_space(1), span([e(0, 2), e(1, 2)], 2))


def test_dual_completion_unique_and_scaling():
    v = standard_space(2)
    l1 = span([e(0, 4), e(1, 4)], 4)
    l2 = span([e(2, 4), e(3, 4)], 4)
    ps = dual_completion(v, l1.vectors(), l2)
    assert ps == (e(2, 4), e(3, 4))
    scaled = dual_completion(v, [(2, 0, 0, 0), (0, 2, 0, 0)], l2)
    assert scaled == (tuple(Fraction(x, 2) for x in e(2, 4)),
                      tuple(Fraction(x, 2) for x in e(3, 4)))


def test_dual_completion_random_splitting():
    rng = Rng(5)
    for _ in range(10):
        sp = random_form(4, rng)
        basis = darboux_basis(sp)
        l1 = span(basis.vectors[:2], 4)
        l2 = span(basis.vectors[2:], 4)
        ps = dual_completion(sp, l1.vectors(), l2)
        for i, q in enumerate(l1.vectors()):
            for j, p in enumerate(ps):
                assert omega(sp, q, p) == (1 if i == j else 0)


def test_map_lagrangian_splitting_identity_and_swap():
    v = standard_space(1)
    q_line = span([e(0, 2)], 2)
    p_line = span([e(1, 2)], 2)
    ident = map_lagrangian_splitting(v, (q_line, p_line), v, (q_line, p_line))
    assert ident.matrix == Mat.identity(2)
    swap = map_lagrangian_splitting(v, (q_line, p_line), v, (p_line, q_line))
    assert is_symplectic_map(swap)
    assert swap.apply(e(0, 2)) == e(1, 2)
    assert swap.apply_subspace(q_line) == p_line
    assert swap.apply_subspace(p_line) == q_line


def test_is_symplectic_map_examples():
    v = standard_space(1)
    assert is_symplectic_map(SympMap(v, v, Mat.identity(2)))
    good = SympMap(v, v, Mat.from_rows([[2, 0], [0, Fraction(1, 2)]]))
    assert is_symplectic_map(good)
    bad = SympMap(v, v, Mat.from_rows([[2, 0], [0, 2]]))
    assert not is_symplectic_map(bad)


def test_symplectic_direct_sum_of_maps():
    # a blockwise map along an orthogonal symplectic splitting is symplectic
    # exactly when the blocks are
    v = standard_space(2)
    rng = Rng(8)
    s1 = random_symplectic_map(standard_space(1), rng, 3).matrix
    s2 = random_symplectic_map(standard_space(1), rng, 3).matrix

    def assemble(b1, b2):
        # coordinates (q1, q2, p1, p2): block one uses slots (0, 2), block two (1, 3)
        m = [[Fraction(0)] * 4 for _ in range(4)]
        for a, b in ((0, 0), (0, 1), (1, 0), (1, 1)):
            m[[0, 2][a]][[0, 2][b]] = b1.entries[a][b]
            m[[1, 3][a]][[1, 3][b]] = b2.entries[a][b]
        return SympMap(v, v, Mat.from_rows(m))

    assert is_symplectic_map(assemble(s1, s2))
    bad = Mat.from_rows([[2, 0], [0, 2]])
    assert not is_symplectic_map(assemble(s1, bad))


def test_witt_artin_examples():
    v = standard_space(2)
    line = span([e(0, 4)], 4)
    wa = witt_artin(v, line)
    assert wa.e.is_zero()
    assert wa.k == line
    assert wa.f.dim == 2
    full = witt_artin(v, full_subspace(4))
    assert full.f.is_zero() and full.k.is_zero() and full.e == full_subspace(4)
    lag = span([e(0, 4), e(1, 4)], 4)
    wl = witt_artin(v, lag)
    assert wl.e.is_zero() and wl.f.is_zero() and wl.k == lag


def test_reduce_by_full_space_is_identity():
    v = standard_space(2)
    red = reduce_space(v, full_subspace(4))
    assert red.reduced == v
    assert red.rho == Mat.identity(4)


def test_reduce_by_lagrangian_is_zero():
    v = standard_space(2)
    lag = span([e(0, 4), e(1, 4)], 4)
    red = reduce_space(v, lag)
    assert red.reduced.dim == 0


def test_reduce_coisotropic_example():
    v = standard_space(2)
    c = span([e(0, 4), e(1, 4), e(2, 4)], 4)
    red = reduce_space(v, c)
    assert red.reduced.dim == 2
    image = reduce_subspace(v, c, span([e(0, 4), e(1, 4)], 4))
    assert is_lagrangian(red.reduced, image)


def test_reduction_form_well_defined():
    from symprel.linalg import kernel as null_space

    rng = Rng(31)
    for _ in range(20):
        sp = random_form(6, rng)
        w = random_subspace(6, rng.int_between(1, 6), rng)
        red = reduce_space(sp, w)
        # [omega]([u],[v]) = omega(u, v) on the basis of w
        for i, u in enumerate(w.vectors()):
            for j, v in enumerate(w.vectors()):
                lhs = omega(red.reduced, red.rho.col(i), red.rho.col(j))
                assert lhs == omega(sp, u, v)
        # kernel of rho, lifted back to w, is exactly the radical
        radical = intersect(w, orthogonal(sp, w))
        lifted = span([_combo(w, c) for c in null_space(red.rho).vectors()], 6)
        assert lifted == radical


def _combo(sub, coeffs):
    n = sub.ambient_dim
    out = [Fraction(0)] * n
    for c, v in zip(coeffs, sub.vectors()):
        for t in range(n):
            out[t] += c * v[t]
    return tuple(out)
