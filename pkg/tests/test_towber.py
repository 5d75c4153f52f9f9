"""Signature extraction against ground truth and the sympy-based oracle."""

import pytest

from symprel.linalg import Mat
from symprel.poly import companion, poly
from symprel.relations import (
    Relation,
    conjugate,
    direct_sum,
    endrel_isomorphic,
    graph,
    towber_block,
    towber_signature,
    zero_relation,
)
from symprel.testkit import Rng, random_invertible, random_relation_sum

from test_poly import sympy_invariant_factors


def test_single_blocks_recovered():
    for kind, field in (("tau", "tau_plain"), ("tau_plus", "tau_plus"),
                        ("plus_tau", "plus_tau"),
                        ("plus_tau_plus", "plus_tau_plus")):
        for n in (1, 2, 3):
            sig = towber_signature(towber_block(kind, n))
            assert getattr(sig, field) == ((n, 1),), (kind, n, sig)
            for other in ("tau_plain", "tau_plus", "plus_tau", "plus_tau_plus"):
                if other != field:
                    assert getattr(sig, other) == ()
            assert sig.nonsingular_part == ()


def test_spec_example_mixture():
    r = direct_sum(towber_block("tau_plus", 2), towber_block("tau", 1))
    sig = towber_signature(r)
    assert sig.tau_plus == ((2, 1),)
    assert sig.tau_plain == ((1, 1),)
    assert sig.plus_tau == () and sig.plus_tau_plus == ()
    assert sig.nonsingular_part == ()
    # unchanged under conjugation by a random invertible map
    rng = Rng(41)
    s = random_invertible(3, rng)
    assert towber_signature(conjugate(s, r)) == sig


def test_graph_diag_2_3():
    sig = towber_signature(graph(Mat.from_rows([[2, 0], [0, 3]])))
    assert sig.nonsingular_part == (poly([6, -5, 1]),)
    assert sig.tau_plain == () and sig.tau_plus == ()
    assert sig.plus_tau == () and sig.plus_tau_plus == ()


def test_zero_relation_is_tau_1():
    assert towber_signature(zero_relation(1, 1)) == \
        towber_signature(towber_block("tau", 1))


def test_full_square_is_plus_tau_plus_1():
    full = direct_sum(towber_block("plus_tau_plus", 1), zero_relation(0, 0))
    sig = towber_signature(full)
    assert sig.plus_tau_plus == ((1, 1),)


def test_nonsingular_part_against_oracle():
    rng = Rng(55)
    for _ in range(8):
        n = rng.int_between(1, 3)
        while True:
            t = Mat.from_rows([[rng.int_between(-2, 2) for _ in range(n)]
                               for _ in range(n)])
            from symprel.linalg import rank

            if rank(t) == n:
                break
        sig = towber_signature(graph(t))
        assert sig.nonsingular_part == sympy_invariant_factors(t)


def test_hard_mixture_with_ambiguous_corner_profile():
    # tau_plus(1) + plus_tau(1) and tau(1) + plus_tau_plus(1) share all four
    # corner dimension sequences; the signatures must still separate them.
    a = direct_sum(towber_block("tau_plus", 1), towber_block("plus_tau", 1))
    b = direct_sum(towber_block("tau", 1), towber_block("plus_tau_plus", 1))
    assert not endrel_isomorphic(a, b)
    sig_a = towber_signature(a)
    sig_b = towber_signature(b)
    assert sig_a.tau_plus == ((1, 1),) and sig_a.plus_tau == ((1, 1),)
    assert sig_b.tau_plain == ((1, 1),) and sig_b.plus_tau_plus == ((1, 1),)


def test_completeness_on_seeded_sums():
    rng = Rng(2718)
    from symprel.testkit import random_signature_blocks

    for _ in range(30):
        blocks, factors = random_signature_blocks(rng, 6)
        draw = random_relation_sum(blocks, factors, rng)
        assert towber_signature(draw.relation) == draw.signature
        blocks2, factors2 = random_signature_blocks(rng, 6)
        draw2 = random_relation_sum(blocks2, factors2, rng)
        same = draw.signature == draw2.signature
        assert endrel_isomorphic(draw.relation, draw2.relation) == same


def test_dimension_accounting():
    sig = towber_signature(direct_sum(towber_block("plus_tau_plus", 2),
                                      graph(Mat.from_rows([[2]]))))
    assert sig.source_dim() == 3
    assert sig.relation_dim() == 4
