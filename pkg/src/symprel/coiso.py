"""Classification of coisotropic pairs by complete invariants and normal forms.

An ordered pair (A, B) of coisotropic subspaces is determined up to a
symplectic map by five dimension counts: the canonical invariants
k = (dim(A^w cap B^w), dim A^w, dim B^w, dim V / 2, dim(A^w cap B)).
Equivalently, by the elementary invariants n = M^{-1} k: the half-dimensions
of the five elementary blocks (lambda, delta, sigma, mu_B, mu_A) of an
elementary decomposition.  This module computes both invariant tuples, tests
realizability, constructs the nine-subspace elementary decomposition, builds
model normal forms, and assembles an explicit verified equivalence map
between any two pairs with matching invariants.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import (
    Mat,
    Subspace,
    block_diag,
    complement,
    coords_in_basis,
    full_subspace,
    intersect,
    inverse,
    span,
    sum_spaces,
    unit_vector,
    zero_subspace,
)
from .symplectic import (
    SympMap,
    SympSpace,
    SymplecticError,
    darboux_basis,
    dsum,
    dual_completion,
    from_chart,
    is_coisotropic,
    is_lagrangian,
    is_symplectic_map,
    is_symplectic_subspace,
    lagrangian_complement,
    map_lagrangian_splitting,
    orthogonal,
    restrict_form,
    standard_space,
    to_chart,
)

# k = M n and n = M^{-1} k, the fixed unimodular translation between the
# canonical and elementary invariant tuples.
M_MATRIX = Mat.from_rows([
    [1, 0, 0, 0, 0],
    [1, 1, 0, 1, 0],
    [1, 1, 0, 0, 1],
    [1, 1, 1, 1, 1],
    [1, 0, 0, 1, 0],
])

M_INVERSE = Mat.from_rows([
    [1, 0, 0, 0, 0],
    [0, 1, 0, 0, -1],
    [1, 0, -1, 1, -1],
    [-1, 0, 0, 0, 1],
    [-1, -1, 1, 0, 1],
])

ELEMENTARY_TYPES = ("lambda", "delta", "sigma", "mu_B", "mu_A")


class InvariantError(ValueError):
    """Raised for invariant tuples violating the realizability inequalities."""


@dataclass(frozen=True)
class CoisoPair:
    """Ordered pair of coisotropic subspaces of one symplectic space."""

    space: SympSpace
    a: Subspace
    b: Subspace

    def __post_init__(self):
        for sub in (self.a, self.b):
            if sub.ambient_dim != self.space.dim:
                raise SymplecticError("pair members must live in the ambient space")
            if not is_coisotropic(self.space, sub):
                raise SymplecticError("pair members must be coisotropic")


def canonical_invariants(pair: CoisoPair) -> tuple[int, int, int, int, int]:
    """The five complete dimension invariants of a pair."""
    v, a, b = pair.space, pair.a, pair.b
    aw = orthogonal(v, a)
    bw = orthogonal(v, b)
    return (intersect(aw, bw).dim, aw.dim, bw.dim, v.dim // 2,
            intersect(aw, b).dim)


def validate_k(k) -> bool:
    """The five inequalities that exactly cut out realizable k-tuples."""
    k1, k2, k3, k4, k5 = k
    return (0 <= k1 <= k5 <= k2) and (k1 + k2 <= k3 + k5 <= k1 + k4)


def n_to_k(n) -> tuple[int, int, int, int, int]:
    if any(x < 0 for x in n):
        raise InvariantError("elementary invariants must be nonnegative")
    return tuple(int(sum(int(c) * x for c, x in zip(row, n)))
                 for row in M_MATRIX.entries)


def k_to_n(k) -> tuple[int, int, int, int, int]:
    if not validate_k(k):
        raise InvariantError(f"invalid canonical invariants: {tuple(k)}")
    return tuple(int(sum(int(c) * x for c, x in zip(row, k)))
                 for row in M_INVERSE.entries)


def elementary_invariants(pair_or_k) -> tuple[int, int, int, int, int]:
    """Half-dimensions of the five elementary blocks, from a pair or a k-tuple."""
    if isinstance(pair_or_k, CoisoPair):
        return k_to_n(canonical_invariants(pair_or_k))
    return k_to_n(tuple(pair_or_k))


def linalg_invariants(k) -> tuple[int, int, int, int]:
    """(dim V, dim A, dim B, dim A cap B) from the first four invariants."""
    k1, k2, k3, k4, _ = k
    dim_v = 2 * k4
    return (dim_v, dim_v - k2, dim_v - k3, dim_v - k2 - k3 + k1)


def k_from_linalg(dims, k5: int) -> tuple[int, int, int, int, int]:
    """Inverse of linalg_invariants, given the symplectic fifth invariant."""
    dim_v, dim_a, dim_b, dim_ab = dims
    if dim_v % 2 != 0:
        raise InvariantError("ambient dimension must be even")
    k2 = dim_v - dim_a
    k3 = dim_v - dim_b
    k1 = dim_ab - dim_v + k2 + k3
    return (k1, k2, k3, dim_v // 2, k5)


@dataclass(frozen=True)
class ElementaryDecomposition:
    """The nine-subspace refinement of the ambient space adapted to a pair.

    V = (I + J) (+) (E1 + E2) (+) F (+) (G1 + G2) (+) (H1 + H2), blocks
    pairwise orthogonal and symplectic, each parenthesized pair a lagrangian
    splitting; A and B reassemble from fixed sublists of the nine pieces.
    """

    i: Subspace
    j: Subspace
    e1: Subspace
    e2: Subspace
    f: Subspace
    g1: Subspace
    g2: Subspace
    h1: Subspace
    h2: Subspace

    def blocks(self) -> tuple[Subspace, Subspace, Subspace, Subspace, Subspace]:
        """(D, E, F, G, H) in the fixed type order."""
        return (sum_spaces(self.i, self.j), sum_spaces(self.e1, self.e2), self.f,
                sum_spaces(self.g1, self.g2), sum_spaces(self.h1, self.h2))

    def half_dims(self) -> tuple[int, int, int, int, int]:
        return tuple(blk.dim // 2 for blk in self.blocks())

    def k_subspace(self) -> Subspace:
        return sum_spaces(sum_spaces(self.i, self.g1), self.h1)

    def kprime_subspace(self) -> Subspace:
        return sum_spaces(sum_spaces(self.j, self.g2), self.h2)


def elementary_decomposition(pair: CoisoPair) -> ElementaryDecomposition:
    """Deterministic construction of the nine-subspace decomposition.

    Follows the refinement of the Witt-Artin decomposition along
    W = A^w + B^w: split A^w and B^w against I, pick F inside A cap B, then
    split the lagrangian complement K' of K by the dual basis of a K-basis
    adapted to (I, G1, H1).  All invariants are verified before returning.
    """
    v, a, b = pair.space, pair.a, pair.b
    aw = orthogonal(v, a)
    bw = orthogonal(v, b)
    i = intersect(aw, bw)
    awb = intersect(aw, b)
    bwa = intersect(bw, a)
    g1 = complement(i, awb)
    e1 = complement(awb, aw)
    h1 = complement(i, bwa)
    e2 = complement(bwa, bw)
    k = sum_spaces(awb, bwa)
    ab = intersect(a, b)
    f = complement(k, ab)
    e = sum_spaces(e1, e2)
    g0 = orthogonal(v, sum_spaces(e, f))
    g0_space = restrict_form(v, g0)
    k_chart = to_chart(g0, k)
    kprime_chart = lagrangian_complement(g0_space, k_chart)
    q_rows = [tuple(x) for x in
              i.vectors() + g1.vectors() + h1.vectors()]
    q_chart = [coords_in_basis(g0.basis, q) for q in q_rows]
    p_chart = dual_completion(g0_space, q_chart, kprime_chart)
    p_rows = [g0.basis.transpose().matvec(p) for p in p_chart]
    j = span(p_rows[: i.dim], v.dim)
    g2 = span(p_rows[i.dim: i.dim + g1.dim], v.dim)
    h2 = span(p_rows[i.dim + g1.dim:], v.dim)
    dec = ElementaryDecomposition(i, j, e1, e2, f, g1, g2, h1, h2)
    _verify_decomposition(pair, dec)
    return dec


def _verify_decomposition(pair: CoisoPair, dec: ElementaryDecomposition):
    v = pair.space
    blocks = dec.blocks()
    total = zero_subspace(v.dim)
    for blk in blocks:
        total = sum_spaces(total, blk)
    if total != full_subspace(v.dim):
        raise AssertionError("blocks do not span the ambient space")
    if sum(blk.dim for blk in blocks) != v.dim:
        raise AssertionError("block dimensions do not add up")
    for idx, blk in enumerate(blocks):
        if not is_symplectic_subspace(v, blk):
            raise AssertionError(f"block {idx} is not symplectic")
        for other in blocks[idx + 1:]:
            if any(_omega_pairs(v, blk, other)):
                raise AssertionError("blocks are not omega-orthogonal")
    splittings = [(dec.i, dec.j, blocks[0]), (dec.e1, dec.e2, blocks[1]),
                  (dec.g1, dec.g2, blocks[3]), (dec.h1, dec.h2, blocks[4])]
    for lag1, lag2, blk in splittings:
        chart_space = restrict_form(v, blk)
        c1, c2 = to_chart(blk, lag1), to_chart(blk, lag2)
        if not (is_lagrangian(chart_space, c1) and is_lagrangian(chart_space, c2)):
            raise AssertionError("pair is not a lagrangian splitting of its block")
        if not intersect(c1, c2).is_zero() or c1.dim + c2.dim != blk.dim:
            raise AssertionError("lagrangian pair is not transverse")
    a_parts = [dec.i, dec.e1, dec.g1, dec.f, dec.h1, dec.h2]
    b_parts = [dec.i, dec.e2, dec.h1, dec.f, dec.g1, dec.g2]
    for parts, target in ((a_parts, pair.a), (b_parts, pair.b)):
        acc = zero_subspace(v.dim)
        for p in parts:
            acc = sum_spaces(acc, p)
        if acc != target:
            raise AssertionError("pair does not reassemble from the blocks")
    kprime = dec.kprime_subspace()
    if intersect(pair.b, kprime) != dec.g2 or intersect(pair.a, kprime) != dec.h2:
        raise AssertionError("K' splitting is not adapted to the pair")
    if dec.half_dims() != elementary_invariants(pair):
        raise AssertionError("block half-dimensions disagree with the invariants")


def _omega_pairs(v: SympSpace, s1: Subspace, s2: Subspace):
    from .symplectic import omega
    for x in s1.vectors():
        for y in s2.vectors():
            if omega(v, x, y) != 0:
                yield (x, y)


def normal_form_pair(n) -> CoisoPair:
    """Model pair in the direct sum of five standard spaces.

    Block i carries the elementary type number i; inside block i the first
    n_i coordinates are the q side and the last n_i the p side.
    """
    n = tuple(int(x) for x in n)
    if any(x < 0 for x in n):
        raise InvariantError("elementary invariants must be nonnegative")
    space = standard_space(0)
    for ni in n:
        space = dsum(space, standard_space(ni))
    dim = space.dim
    offsets = []
    off = 0
    for ni in n:
        offsets.append(off)
        off += 2 * ni
    n1, n2, n3, n4, n5 = n
    a_coords = []
    b_coords = []
    a_coords += [offsets[0] + t for t in range(n1)]                 # lambda: q
    b_coords += [offsets[0] + t for t in range(n1)]
    a_coords += [offsets[1] + t for t in range(n2)]                 # delta: q vs p
    b_coords += [offsets[1] + n2 + t for t in range(n2)]
    a_coords += [offsets[2] + t for t in range(2 * n3)]             # sigma: full
    b_coords += [offsets[2] + t for t in range(2 * n3)]
    a_coords += [offsets[3] + t for t in range(n4)]                 # mu_B: q vs full
    b_coords += [offsets[3] + t for t in range(2 * n4)]
    a_coords += [offsets[4] + t for t in range(2 * n5)]             # mu_A: full vs q
    b_coords += [offsets[4] + t for t in range(n5)]
    a = span([unit_vector(c, dim) for c in a_coords], dim)
    b = span([unit_vector(c, dim) for c in b_coords], dim)
    pair = CoisoPair(space, a, b)
    if elementary_invariants(pair) != n:
        raise AssertionError("normal form does not realize its invariants")
    return pair


def pairs_equivalent(pair: CoisoPair, pair_hat: CoisoPair) -> bool:
    """Pairs are equivalent exactly when their canonical invariants agree."""
    return canonical_invariants(pair) == canonical_invariants(pair_hat)


def build_equivalence(pair: CoisoPair, pair_hat: CoisoPair) -> SympMap:
    """Explicit symplectic map S with S(A) = A-hat and S(B) = B-hat.

    Assembled blockwise along the elementary decompositions: lagrangian
    splittings are matched through their dual bases, the sigma blocks
    through Darboux bases.  All claimed postconditions are re-verified.
    """
    if not pairs_equivalent(pair, pair_hat):
        raise SymplecticError("pairs with different invariants are inequivalent")
    dec = elementary_decomposition(pair)
    dec_hat = elementary_decomposition(pair_hat)
    s = _assemble_block_map(pair.space, dec, pair_hat.space, dec_hat, None)
    if not is_symplectic_map(s):
        raise AssertionError("assembled equivalence is not symplectic")
    if s.apply_subspace(pair.a) != pair_hat.a or s.apply_subspace(pair.b) != pair_hat.b:
        raise AssertionError("assembled equivalence does not map the pair")
    return s


def _splitting_map(v, blk, lag1, lag2, v_hat, blk_hat, lag1_hat, lag2_hat) -> Mat:
    """Chart matrix carrying one lagrangian splitting of a block to another."""
    chart = restrict_form(v, blk)
    chart_hat = restrict_form(v_hat, blk_hat)
    m = map_lagrangian_splitting(
        chart, (to_chart(blk, lag1), to_chart(blk, lag2)),
        chart_hat, (to_chart(blk_hat, lag1_hat), to_chart(blk_hat, lag2_hat)))
    return m.matrix


def _darboux_matching(v, blk, v_hat, blk_hat) -> Mat:
    """Chart matrix sending the Darboux basis of one block to the other's."""
    chart = restrict_form(v, blk)
    chart_hat = restrict_form(v_hat, blk_hat)
    if chart.dim == 0:
        return Mat(0, 0, ())
    basis = Mat.from_rows(darboux_basis(chart).vectors, chart.dim).transpose()
    basis_hat = Mat.from_rows(darboux_basis(chart_hat).vectors,
                              chart_hat.dim).transpose()
    return basis_hat @ inverse(basis)


def _assemble_block_map(v: SympSpace, dec: ElementaryDecomposition,
                        v_hat: SympSpace, dec_hat: ElementaryDecomposition,
                        gh_override: tuple[Mat, Mat] | None) -> SympMap:
    """Glue five chart maps along the block bases into one map on V.

    gh_override, when given, supplies the chart matrices for the G and H
    blocks (used by the canonical-relation classifier); otherwise both are
    matched through their lagrangian splittings.
    """
    d, e, f, g, h = dec.blocks()
    d_hat, e_hat, f_hat, g_hat, h_hat = dec_hat.blocks()
    s1 = _splitting_map(v, d, dec.i, dec.j, v_hat, d_hat, dec_hat.i, dec_hat.j)
    s2 = _splitting_map(v, e, dec.e1, dec.e2, v_hat, e_hat, dec_hat.e1, dec_hat.e2)
    s3 = _darboux_matching(v, f, v_hat, f_hat)
    if gh_override is None:
        s4 = _splitting_map(v, g, dec.g1, dec.g2, v_hat, g_hat, dec_hat.g1, dec_hat.g2)
        s5 = _splitting_map(v, h, dec.h1, dec.h2, v_hat, h_hat, dec_hat.h1, dec_hat.h2)
    else:
        s4, s5 = gh_override
    basis_cols = Mat.from_rows(
        d.vectors() + e.vectors() + f.vectors() + g.vectors() + h.vectors(),
        v.dim).transpose() if v.dim else Mat(0, 0, ())
    basis_cols_hat = Mat.from_rows(
        d_hat.vectors() + e_hat.vectors() + f_hat.vectors()
        + g_hat.vectors() + h_hat.vectors(),
        v_hat.dim).transpose() if v_hat.dim else Mat(0, 0, ())
    blocks = block_diag([s1, s2, s3, s4, s5])
    mat = basis_cols_hat @ blocks @ inverse(basis_cols) if v.dim else Mat(0, 0, ())
    return SympMap(v, v_hat, mat)


def is_elementary_type(pair: CoisoPair) -> str | None:
    """Tag of the single nonzero elementary block, if there is exactly one.

    The zero-dimensional pair reports sigma (A = B = V holds literally);
    mixtures report None.
    """
    n = elementary_invariants(pair)
    nonzero = [idx for idx, x in enumerate(n) if x]
    if not nonzero:
        return "sigma" if pair.space.dim == 0 else None
    if len(nonzero) == 1:
        return ELEMENTARY_TYPES[nonzero[0]]
    return None
