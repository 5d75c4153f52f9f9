"""Seeded property battery shared by the CLI selftest and the test suite.

Each check function takes an Rng and a draw count, raises AssertionError on
the first violated property, and returns the number of instances it
exercised.  The acceptance suite runs these at the full advertised sizes;
the CLI runs them at reduced sizes for a quick end-to-end health check.
"""

from __future__ import annotations

from .canonical import (
    CanonicalRelation,
    Equivalent,
    Inequivalent,
    block_normal_form,
    canonical_relation,
    compose_canonical,
    decide_equivalence,
    equivalence_by_parts,
    factorize,
    from_symplectomorphism,
    is_equivalence,
    reassemble_blocks,
)
from .coiso import (
    M_INVERSE,
    M_MATRIX,
    build_equivalence,
    canonical_invariants,
    elementary_invariants,
    k_to_n,
    n_to_k,
    normal_form_pair,
    pairs_equivalent,
    validate_k,
)
from .linalg import Mat, complement, full_subspace, intersect, span, sum_spaces
from .poly import companion, invariant_factors_of_map
from .relations import (
    compose,
    converse,
    corners,
    direct_sum,
    dom,
    hal,
    identity_relation,
    ker,
    ran,
    relation,
    towber_signature,
    transpose,
)
from .symplectic import (
    darboux_basis,
    dual_completion,
    extend_lagrangian_basis,
    identity_map,
    is_lagrangian,
    is_symplectic_subspace,
    lagrangian_complement,
    omega,
    orthogonal,
    restrict_form,
    to_chart,
    witt_artin,
)
from .testkit import (
    Rng,
    brute_compose_oracle,
    random_canonical_relation,
    random_coisotropic_pair,
    random_form,
    random_relation_sum,
    random_signature_blocks,
    random_subspace,
    random_symplectic_map,
)


def _random_invariants(rng: Rng, max_k4: int, need_mu_match: bool = False):
    """Random elementary invariant vector with total at most max_k4."""
    total = rng.int_between(1, max_k4)
    n = [0, 0, 0, 0, 0]
    for _ in range(total):
        n[rng.below(5)] += 1
    if need_mu_match:
        pool = n[3] + n[4]
        n[3] = pool // 2
        n[4] = pool // 2
        n[2] += pool % 2
    return tuple(n)


def conjugated_copy(l: CanonicalRelation, rng: Rng, steps: int | None = None):
    """Image of a canonical relation under a random symplectic map."""
    space = l.source
    if steps is None:
        steps = space.dim + 1
    s = random_symplectic_map(space, rng, steps)
    big = [tuple(s.apply(v[: space.dim])) + tuple(s.apply(v[space.dim:]))
           for v in l.rel.space.vectors()]
    return canonical_relation(space, space, span(big, 2 * space.dim)), s


def check_symplectic_basis(rng: Rng, count: int) -> int:
    """Darboux bases, lagrangian complements and dual completions."""
    for _ in range(count):
        half = rng.int_between(1, 5)
        space = random_form(2 * half, rng)
        basis = darboux_basis(space)  # constructor verifies the pairings
        lag = span(basis.vectors[:half], space.dim)
        assert is_lagrangian(space, lag)
        comp = lagrangian_complement(space, lag)
        assert is_lagrangian(space, comp)
        assert intersect(lag, comp).is_zero()
        assert sum_spaces(lag, comp) == full_subspace(space.dim)
        ext = extend_lagrangian_basis(space, lag)
        assert span(ext.vectors[:half], space.dim) == lag
        qs = lag.vectors()
        ps = dual_completion(space, qs, comp)
        for i, q in enumerate(qs):
            for j, p in enumerate(ps):
                assert omega(space, q, p) == (1 if i == j else 0)
        assert span(ps, space.dim) == comp
    return count


def check_orthogonality(rng: Rng, count: int) -> int:
    """dim complementarity, involutivity, and the sum/intersection swap."""
    for _ in range(count):
        half = rng.int_between(1, 5)
        space = random_form(2 * half, rng)
        w = random_subspace(space.dim, rng.int_between(0, space.dim), rng)
        wo = orthogonal(space, w)
        assert w.dim + wo.dim == space.dim
        assert orthogonal(space, wo) == w
        e = random_subspace(space.dim, rng.int_between(0, space.dim), rng)
        f = random_subspace(space.dim, rng.int_between(0, space.dim), rng)
        lhs = orthogonal(space, intersect(e, f))
        rhs = sum_spaces(orthogonal(space, e), orthogonal(space, f))
        assert lhs == rhs
    return count


def check_witt_artin(rng: Rng, count: int) -> int:
    """The structural predicates of the Witt-Artin decomposition."""
    for _ in range(count):
        half = rng.int_between(1, 5)
        space = random_form(2 * half, rng)
        w = random_subspace(space.dim, rng.int_between(0, space.dim), rng)
        wa = witt_artin(space, w)
        assert is_symplectic_subspace(space, wa.e)
        assert is_symplectic_subspace(space, wa.f)
        assert all(omega(space, x, y) == 0
                   for x in wa.e.vectors() for y in wa.f.vectors())
        ef = sum_spaces(wa.e, wa.f)
        g0 = orthogonal(space, ef)
        assert intersect(ef, g0).is_zero()
        assert sum_spaces(ef, g0) == full_subspace(space.dim)
        chart_space = restrict_form(space, g0)
        k_chart = to_chart(g0, wa.k)
        assert is_lagrangian(chart_space, k_chart)
        kp_chart = to_chart(g0, wa.kprime)
        assert is_lagrangian(chart_space, kp_chart)
        assert intersect(k_chart, kp_chart).is_zero()
        assert wa.k == intersect(w, orthogonal(space, w))
    return count


def check_relation_laws(rng: Rng, count: int) -> int:
    """Associativity, units, converse laws, and the brute-force oracle."""
    for _ in range(count):
        dims = [rng.int_between(0, 4) for _ in range(4)]
        rels = []
        for a, b in zip(dims, dims[1:]):
            d = rng.int_between(0, a + b)
            rels.append(relation(
                a, b,
                [([rng.int_between(-2, 2) for _ in range(a)],
                  [rng.int_between(-2, 2) for _ in range(b)]) for _ in range(d)]))
        r, q, p = rels
        assert compose(p, compose(q, r)) == compose(compose(p, q), r)
        assert compose(identity_relation(dims[1]), r) == r
        assert compose(r, identity_relation(dims[0])) == r
        assert converse(converse(r)) == r
        assert converse(compose(q, r)) == compose(converse(r), converse(q))
        assert compose(q, r) == brute_compose_oracle(q, r)
        d_, rg, k_, h_ = corners(r)
        assert dom(converse(r)) == rg and ran(converse(r)) == d_
        assert ker(converse(r)) == h_ and hal(converse(r)) == k_
    return count


def check_towber(rng: Rng, count: int, max_total: int = 8) -> int:
    """Signature recovery through random conjugation, plus additivity."""
    for _ in range(count):
        blocks, factors = random_signature_blocks(rng, max_total)
        draw = random_relation_sum(blocks, factors, rng)
        sig = towber_signature(draw.relation)
        assert sig == draw.signature, (sig, draw.signature)
        blocks2, factors2 = random_signature_blocks(rng, 4)
        draw2 = random_relation_sum(blocks2, factors2, rng)
        sig2 = towber_signature(draw2.relation)
        sig_sum = towber_signature(direct_sum(draw.relation, draw2.relation))
        for kind in ("tau", "tau_plus", "plus_tau", "plus_tau_plus"):
            merged = sig.multiplicities(kind)
            for key, mult in sig2.multiplicities(kind).items():
                merged[key] = merged.get(key, 0) + mult
            assert sig_sum.multiplicities(kind) == merged
        parts = sig.nonsingular_part + sig2.nonsingular_part
        if parts:
            expected = invariant_factors_of_map(
                _block_diag_companions(parts))
            assert sig_sum.nonsingular_part == expected
        else:
            assert sig_sum.nonsingular_part == ()
    return count


def _block_diag_companions(polys) -> Mat:
    from .linalg import block_diag

    return block_diag([companion(p) for p in polys])


def check_canonical_structure(rng: Rng, count: int) -> int:
    """Lagrangian composition, transpose = converse, exact factorization."""
    for _ in range(count):
        n = _random_invariants(rng, 4, need_mu_match=True)
        draw = random_canonical_relation(n, rng)
        l = draw.relation
        space = l.source
        assert ker(l.rel) == orthogonal(space, dom(l.rel))
        assert hal(l.rel) == orthogonal(space, ran(l.rel))
        assert transpose(l.rel, space.form, space.form) == converse(l.rel)
        fact = factorize(l)  # verifies coisotropy + exact recomposition
        assert fact.reduced_a.dim == fact.reduced_b.dim
        ident = from_symplectomorphism(identity_map(space))
        assert compose_canonical(l, ident).rel == l.rel
        assert compose_canonical(ident, l).rel == l.rel
        compose_canonical(l, l)  # constructor asserts the result is lagrangian
    return count


def check_pair_theorem(rng: Rng, count: int, max_k4: int = 5) -> int:
    """Conjugation invariance and verified equivalence to the normal form."""
    assert M_MATRIX @ M_INVERSE == Mat.identity(5)
    for _ in range(count):
        n = _random_invariants(rng, max_k4)
        draw = random_coisotropic_pair(n, rng)
        assert elementary_invariants(draw.pair) == n
        assert canonical_invariants(draw.pair) == n_to_k(n)
        model = normal_form_pair(n)
        assert pairs_equivalent(draw.pair, model)
        s = build_equivalence(draw.pair, model)  # verifies its postconditions
        assert s.apply_subspace(draw.pair.a) == model.a
        assert s.apply_subspace(draw.pair.b) == model.b
    return count


def check_realizability(max_k4: int = 4) -> int:
    """validate_k(k) holds exactly when a pair with invariants k exists.

    Exhaustive over a box that strictly contains every realizable tuple for
    the given k4 range; realizability of valid tuples is witnessed by
    constructing the normal-form pair and recomputing its invariants.
    """
    checked = 0
    for k4 in range(max_k4 + 1):
        bound = 2 * k4 + 1
        for k1 in range(bound + 1):
            for k2 in range(bound + 1):
                for k3 in range(bound + 1):
                    for k5 in range(bound + 1):
                        k = (k1, k2, k3, k4, k5)
                        n = tuple(int(sum(int(c) * x for c, x in zip(row, k)))
                                  for row in M_INVERSE.entries)
                        assert validate_k(k) == all(x >= 0 for x in n)
                        if validate_k(k):
                            pair = normal_form_pair(n)
                            assert canonical_invariants(pair) == k
                        checked += 1
    return checked


def check_equivalence_by_parts(rng: Rng, count: int) -> int:
    """The two equivalence checkers agree on random (S, L, L-hat) triples."""
    for step in range(count):
        n = _random_invariants(rng, 3, need_mu_match=True)
        draw = random_canonical_relation(n, rng)
        l = draw.relation
        space = l.source
        s = random_symplectic_map(space, rng, rng.int_between(0, 4))
        if step % 2 == 0:
            l_hat, _ = conjugated_copy(l, rng)
        else:
            l_hat = random_canonical_relation(n, rng).relation
        a = dom(l.rel)
        b = ran(l.rel)
        a1 = complement(orthogonal(space, a), a)
        b1 = complement(orthogonal(space, b), b)
        direct = is_equivalence(s, l, l_hat)
        by_parts = equivalence_by_parts(s, l, l_hat, a1, b1)
        assert direct == by_parts, (direct, by_parts)
    return count


def check_solved_case(rng: Rng, count: int) -> int:
    """decide_equivalence recovers a verified map on sigma-free twins."""
    for _ in range(count):
        base_n = _random_invariants(rng, 3)
        t = (base_n[2] + base_n[3] + base_n[4] + 1) // 2
        n = (base_n[0], base_n[1], 0, t, t)
        seed_draw = random_canonical_relation(n, rng)
        twin_a, _ = conjugated_copy(seed_draw.relation, rng)
        twin_b, _ = conjugated_copy(seed_draw.relation, rng)
        verdict = decide_equivalence(twin_a, twin_b)
        assert isinstance(verdict, Equivalent), verdict
        assert is_equivalence(verdict.map, twin_a, twin_b)
    return count


def _profile_mismatch_pair(rng: Rng):
    """Two relations over one coisotropic pair separated only by the profile.

    Both have n = (0, 0, 0, 1, 1); one induced map carries the halo line
    onto the kernel line, the other onto its complement.
    """
    from .linalg import F0, F1

    straight = Mat.identity(2)
    rotate = Mat.from_rows([[F0, -F1], [F1, F0]], 2)
    l_a = random_canonical_relation((0, 0, 0, 1, 1), rng, phi=straight).relation
    l_b = random_canonical_relation((0, 0, 0, 1, 1), rng, phi=rotate).relation
    return l_a, l_b


def check_inequivalence_witnesses(rng: Rng, count: int, extra_conj: int = 10) -> int:
    """Inequivalent verdicts carry witnesses stable under conjugation."""
    for step in range(count):
        if step % 2 == 0:
            l_a = random_canonical_relation((1, 0, 0, 1, 1), rng).relation
            l_b = random_canonical_relation((0, 1, 0, 1, 1), rng).relation
            expected = "canonical_invariants"
        else:
            l_a, l_b = _profile_mismatch_pair(rng)
            expected = "intersection_profile"
        verdict = decide_equivalence(l_a, l_b)
        assert isinstance(verdict, Inequivalent), verdict
        assert verdict.invariant == expected, verdict.invariant
        for _ in range(extra_conj):
            la, _ = conjugated_copy(l_a, rng)
            lb, _ = conjugated_copy(l_b, rng)
            again = decide_equivalence(la, lb)
            assert isinstance(again, Inequivalent)
            assert again.invariant == expected
    return count


def check_block_normal_form(rng: Rng, count: int) -> int:
    """Reassembling the emitted blocks reproduces the relation exactly."""
    for _ in range(count):
        n = _random_invariants(rng, 4, need_mu_match=True)
        draw = random_canonical_relation(n, rng)
        bnf = block_normal_form(draw.relation)  # verifies the round-trip
        assert reassemble_blocks(bnf, draw.relation.source.dim) \
            == draw.relation.rel.space
    return count


SUITES = (
    ("symplectic_basis", check_symplectic_basis),
    ("orthogonality", check_orthogonality),
    ("witt_artin", check_witt_artin),
    ("relation_laws", check_relation_laws),
    ("towber", check_towber),
    ("canonical_structure", check_canonical_structure),
    ("pair_theorem", check_pair_theorem),
    ("equivalence_by_parts", check_equivalence_by_parts),
    ("solved_case", check_solved_case),
    ("inequivalence_witnesses", check_inequivalence_witnesses),
    ("block_normal_form", check_block_normal_form),
)

SIZES = {"small": 6, "medium": 20}


def run_selftest(seed: int, size: str = "small") -> dict:
    """Run the battery; returns a JSON-ready report with per-suite results."""
    if size not in SIZES:
        raise ValueError(f"unknown size: {size!r}")
    count = SIZES[size]
    suites = []
    all_ok = True
    for index, (name, fn) in enumerate(SUITES):
        rng = Rng((seed << 8) + index)
        try:
            instances = fn(rng, count)
            suites.append({"name": name, "ok": True, "instances": instances})
        except AssertionError as exc:
            suites.append({"name": name, "ok": False, "error": str(exc)})
            all_ok = False
    try:
        instances = check_realizability(2 if size == "small" else 3)
        suites.append({"name": "realizability", "ok": True,
                       "instances": instances})
    except AssertionError as exc:
        suites.append({"name": "realizability", "ok": False, "error": str(exc)})
        all_ok = False
    return {"seed": seed, "size": size, "ok": all_ok, "suites": suites}
