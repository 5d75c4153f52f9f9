import pytest

from symprel.canonical import (
    Equivalent,
    Inequivalent,
    Undecided,
    as_map,
    block_normal_form,
    canonical_relation,
    coiso_pair_of,
    compose_canonical,
    decide_equivalence,
    equivalence_by_parts,
    factorize,
    from_symplectomorphism,
    induced_phi,
    intersection_profile,
    is_canonical,
    is_equivalence,
    reassemble_blocks,
    reduction_relation,
)
from symprel.linalg import Mat, complement, full_subspace, inverse, span, unit_vector
from symprel.relations import compose, converse, dom, flags, graph, ran
from symprel.symplectic import (
    SympMap,
    SymplecticError,
    identity_map,
    is_symplectic_map,
    orthogonal,
    standard_space,
)
from symprel.testkit import (
    Rng,
    brute_compose_oracle,
    random_canonical_relation,
    random_symplectic_map,
)


def e(i, n):
    return unit_vector(i, n)


def lambda_lambda(v, lag):
    """All pairs (v, w) with both members in the lagrangian."""
    dim = v.dim
    gens = [tuple(x) + tuple([0] * dim) for x in lag.vectors()]
    gens += [tuple([0] * dim) + tuple(x) for x in lag.vectors()]
    return canonical_relation(v, v, span(gens, 2 * dim))


def test_is_canonical_examples():
    v = standard_space(1)
    assert is_canonical(v, graph(Mat.identity(2)).space)
    lag = span([e(0, 2)], 2)
    ll = lambda_lambda(v, lag)
    assert is_canonical(v, ll.rel.space)
    assert not is_canonical(v, graph(Mat.from_rows([[2, 0], [0, 2]])).space)
    # wrong dimension is not lagrangian
    assert not is_canonical(v, span([e(0, 4)], 4))


def test_from_symplectomorphism_and_as_map():
    v = standard_space(2)
    s = random_symplectic_map(v, Rng(4), 5)
    l = from_symplectomorphism(s)
    cosur, coinj, _ = flags(l.rel)
    assert cosur and coinj
    back = as_map(l)
    assert back.matrix == s.matrix
    bad = SympMap(v, v, Mat.from_rows([[2, 0, 0, 0], [0, 2, 0, 0],
                                       [0, 0, 2, 0], [0, 0, 0, 2]]))
    with pytest.raises(SymplecticError):
        from_symplectomorphism(bad)


def test_compose_canonical():
    v = standard_space(1)
    ident = from_symplectomorphism(identity_map(v))
    lag = span([e(0, 2)], 2)
    ll = lambda_lambda(v, lag)
    assert compose_canonical(ll, ident).rel == ll.rel
    assert compose_canonical(ident, ll).rel == ll.rel
    # (Lambda x Lambda) o (Lambda x Lambda) = Lambda x Lambda, by the oracle too
    square = compose_canonical(ll, ll)
    assert square.rel == ll.rel
    assert brute_compose_oracle(ll.rel, ll.rel) == square.rel
    s1 = random_symplectic_map(v, Rng(6), 3)
    s2 = random_symplectic_map(v, Rng(7), 3)
    lhs = compose_canonical(from_symplectomorphism(s2), from_symplectomorphism(s1))
    assert lhs.rel == graph(s2.matrix @ s1.matrix)


def test_reduction_relation_examples():
    v = standard_space(2)
    full = full_subspace(4)
    red_full = reduction_relation(v, full)
    assert red_full.target.dim == 4
    cosur, coinj, _ = flags(red_full.rel)
    assert cosur and coinj
    lag = span([e(0, 4), e(1, 4)], 4)
    red_lag = reduction_relation(v, lag)
    assert red_lag.target.dim == 0
    assert dom(red_lag.rel) == lag
    c = span([e(0, 4), e(1, 4), e(2, 4)], 4)
    red = reduction_relation(v, c)
    cosur, coinj, _ = flags(red.rel)
    assert not cosur                      # domain is only C
    assert ran(red.rel) == full_subspace(red.target.dim)   # surjective
    assert coinj
    with pytest.raises(SymplecticError):
        reduction_relation(v, span([e(0, 4)], 4))  # isotropic, not coisotropic


def test_factorize_graph():
    v = standard_space(2)
    s = random_symplectic_map(v, Rng(9), 5)
    fact = factorize(from_symplectomorphism(s))
    assert fact.a == full_subspace(4)
    assert fact.b == full_subspace(4)
    assert fact.induced.matrix == s.matrix


def test_factorize_lambda_lambda():
    v = standard_space(1)
    lag = span([e(0, 2)], 2)
    fact = factorize(lambda_lambda(v, lag))
    assert fact.a == lag and fact.b == lag
    assert fact.reduced_a.dim == 0


def test_factorize_round_trip_with_prescribed_data():
    rng = Rng(10)
    for n in ((1, 0, 0, 1, 1), (0, 1, 1, 0, 0), (0, 0, 1, 1, 1)):
        draw = random_canonical_relation(n, rng)
        fact = factorize(draw.relation)      # recomposition verified inside
        assert fact.a == dom(draw.relation.rel)
        assert fact.b == ran(draw.relation.rel)


def test_induced_phi_examples():
    v = standard_space(2)
    s = random_symplectic_map(v, Rng(12), 4)
    l = from_symplectomorphism(s)
    phi = induced_phi(l, full_subspace(4), full_subspace(4))
    assert phi.matrix == s.matrix
    v1 = standard_space(1)
    lag = span([e(0, 2)], 2)
    ll = lambda_lambda(v1, lag)
    zero = span([], 2)
    phi0 = induced_phi(ll, zero, zero)
    assert phi0.matrix.rows == 0 and phi0.matrix.cols == 0
    with pytest.raises(SymplecticError):
        induced_phi(ll, lag, zero)  # not a complement of the radical


def test_induced_phi_membership_biconditional():
    rng = Rng(14)
    draw = random_canonical_relation((0, 1, 1, 1, 1), rng)
    l = draw.relation
    space = l.source
    a = dom(l.rel)
    b = ran(l.rel)
    a1 = complement(orthogonal(space, a), a)
    b1 = complement(orthogonal(space, b), b)
    phi = induced_phi(l, a1, b1)
    assert is_symplectic_map(phi)
    from symprel.linalg import contains

    for idx, v in enumerate(a1.vectors()):
        w_coords = phi.matrix.col(idx)
        w = [sum((c * bv[t] for c, bv in zip(w_coords, b1.vectors())), 0)
             for t in range(space.dim)]
        assert contains(l.rel.space, tuple(v) + tuple(w))


def test_equivalence_checkers_trivial_cases():
    v = standard_space(1)
    lag = span([e(0, 2)], 2)
    ll = lambda_lambda(v, lag)
    ident = identity_map(v)
    assert is_equivalence(ident, ll, ll)
    graph_rel = from_symplectomorphism(identity_map(v))
    assert not is_equivalence(ident, graph_rel, ll)
    a1 = complement(orthogonal(v, lag), lag)
    assert equivalence_by_parts(ident, ll, ll, a1, a1)


def test_decide_equivalence_trivial_and_mismatch():
    v = standard_space(1)
    ident_rel = from_symplectomorphism(identity_map(v))
    verdict = decide_equivalence(ident_rel, ident_rel)
    assert isinstance(verdict, Equivalent)
    assert verdict.map.matrix == Mat.identity(2)
    lag = span([e(0, 2)], 2)
    ll = lambda_lambda(v, lag)
    verdict2 = decide_equivalence(ident_rel, ll)
    assert isinstance(verdict2, Inequivalent)
    assert verdict2.invariant == "canonical_invariants"


def test_decide_equivalence_solved_case_seeded():
    rng = Rng(16)
    from symprel.selftest import conjugated_copy

    seed = random_canonical_relation((1, 0, 0, 1, 1), rng)
    a, _ = conjugated_copy(seed.relation, rng)
    b, _ = conjugated_copy(seed.relation, rng)
    verdict = decide_equivalence(a, b)
    assert isinstance(verdict, Equivalent)
    assert is_equivalence(verdict.map, a, b)


def test_decide_equivalence_g_h_zero_cases():
    v = standard_space(1)
    rng = Rng(18)
    # similar graphs with equal invariant factors but not decided: Undecided
    s = random_symplectic_map(v, rng, 3)
    l = from_symplectomorphism(s)
    conj = random_symplectic_map(v, rng, 3)
    twisted = from_symplectomorphism(
        SympMap(v, v, conj.matrix @ s.matrix @ inverse(conj.matrix)))
    verdict = decide_equivalence(l, twisted)
    assert isinstance(verdict, (Equivalent, Undecided))
    if isinstance(verdict, Undecided):
        assert verdict.problem.phi.matrix.rows == 2
        assert verdict.problem.towber is not None
    # different characteristic polynomial: Inequivalent by similarity class
    double = SympMap(v, v, Mat.from_rows([[2, 0], ["0", "1/2"]]))
    verdict2 = decide_equivalence(l, from_symplectomorphism(double))
    if isinstance(verdict2, Inequivalent):
        assert verdict2.invariant in ("intersection_profile",
                                      "induced_map_similarity")


def test_profile_distinguishes_same_invariant_relations():
    from symprel.selftest import _profile_mismatch_pair

    rng = Rng(20)
    l_a, l_b = _profile_mismatch_pair(rng)
    assert coiso_pair_of(l_a).space.dim == coiso_pair_of(l_b).space.dim
    from symprel.coiso import canonical_invariants

    assert canonical_invariants(coiso_pair_of(l_a)) \
        == canonical_invariants(coiso_pair_of(l_b))
    assert intersection_profile(l_a) != intersection_profile(l_b)
    verdict = decide_equivalence(l_a, l_b)
    assert isinstance(verdict, Inequivalent)
    assert verdict.invariant == "intersection_profile"


def test_block_normal_form_pure_cases():
    v = standard_space(1)
    lag = span([e(0, 2)], 2)
    ll = lambda_lambda(v, lag)
    bnf = block_normal_form(ll)
    assert bnf.lambda_rows.rows == 2
    assert bnf.delta_rows.rows == 0 and bnf.l0_rows.rows == 0
    assert not bnf.phi0_is_normal_form
    s = random_symplectic_map(standard_space(2), Rng(22), 4)
    bnf2 = block_normal_form(from_symplectomorphism(s))
    assert bnf2.lambda_rows.rows == 0 and bnf2.delta_rows.rows == 0
    assert bnf2.l0_rows.rows == 4
    assert bnf2.phi0 == s.matrix


def test_block_normal_form_round_trip():
    rng = Rng(24)
    for n in ((1, 1, 1, 0, 0), (0, 0, 1, 1, 1), (1, 0, 1, 1, 1)):
        draw = random_canonical_relation(n, rng)
        bnf = block_normal_form(draw.relation)
        assert reassemble_blocks(bnf, draw.relation.source.dim) \
            == draw.relation.rel.space


def test_transpose_equals_converse_for_canonical():
    from symprel.relations import transpose

    rng = Rng(26)
    draw = random_canonical_relation((0, 1, 0, 1, 1), rng)
    l = draw.relation
    assert transpose(l.rel, l.source.form, l.target.form) == converse(l.rel)
