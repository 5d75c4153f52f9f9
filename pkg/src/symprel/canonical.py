"""Linear canonical relations: structure, factorization and classification.

A linear canonical relation from X to Y is a lagrangian subspace of
X (+) Y^-; graphs of symplectic maps are exactly the everywhere-defined
single-valued ones.  The module provides the composition calculus, reduction
relations, the domain/range factorization through reduced spaces, the two
mutually-equivalent equivalence checkers, the partial equivalence decision
procedure (with an explicit verified map in the solved case and an honest
Undecided verdict where the problem is open), and the three-block normal
form presentation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coiso import (
    CoisoPair,
    ElementaryDecomposition,
    _assemble_block_map,
    build_equivalence,
    canonical_invariants,
    elementary_decomposition,
    k_to_n,
)
from .linalg import (
    F0,
    LinalgError,
    Mat,
    Subspace,
    Vector,
    block_diag,
    contains,
    coords_in_basis,
    intersect,
    inverse,
    span,
    sum_spaces,
    vec,
    zero_vector,
)
from .relations import (
    Relation,
    TowberSignature,
    compose,
    converse,
    dom,
    graph,
    hal,
    image_of_subspace,
    image_of_vector,
    ker,
    ran,
    relation,
    towber_signature,
)
from .symplectic import (
    Reduction,
    SympMap,
    SympSpace,
    SymplecticError,
    dsum,
    identity_map,
    is_coisotropic,
    is_lagrangian,
    is_symplectic_map,
    is_symplectic_subspace,
    minus,
    omega,
    orthogonal,
    reduce_space,
    restrict_form,
    sp_rank,
    to_chart,
)


@dataclass(frozen=True)
class CanonicalRelation:
    """Linear relation between symplectic spaces carrying the lagrangian
    certificate for the difference form on source (+) target^-."""

    source: SympSpace
    target: SympSpace
    rel: Relation

    def __post_init__(self):
        if (self.rel.source_dim, self.rel.target_dim) != (self.source.dim,
                                                          self.target.dim):
            raise SymplecticError("relation dimensions must match the spaces")
        if not is_canonical(self.source, self.rel.space, self.target):
            raise SymplecticError("subspace is not lagrangian for the difference form")


def is_canonical(source: SympSpace, w: Subspace,
                 target: SympSpace | None = None) -> bool:
    """Lagrangian test in source (+) target^- (target defaults to source)."""
    if target is None:
        target = source
    graph_space = dsum(source, minus(target))
    if w.ambient_dim != graph_space.dim:
        return False
    return is_lagrangian(graph_space, w)


def canonical_relation(source: SympSpace, target: SympSpace,
                       space: Subspace) -> CanonicalRelation:
    return CanonicalRelation(source, target,
                             Relation(source.dim, target.dim, space))


def from_symplectomorphism(s: SympMap) -> CanonicalRelation:
    """Graph of a symplectic map; always canonical."""
    if not is_symplectic_map(s):
        raise SymplecticError("map is not symplectic")
    return CanonicalRelation(s.source, s.target, graph(s.matrix))


def as_map(l: CanonicalRelation) -> SympMap:
    """Recover the symplectic map when the relation is a graph."""
    from .relations import as_matrix

    s = SympMap(l.source, l.target, as_matrix(l.rel))
    if not is_symplectic_map(s):
        raise AssertionError("graph of a canonical relation must be symplectic")
    return s


def compose_canonical(l2: CanonicalRelation, l1: CanonicalRelation) -> CanonicalRelation:
    """l2 o l1; the result is again lagrangian, which the constructor asserts."""
    if l1.target != l2.source:
        raise SymplecticError("canonical relations are not composable")
    composed = compose(l2.rel, l1.rel)
    return CanonicalRelation(l1.source, l2.target, composed)


def reduction_relation(space: SympSpace, c: Subspace) -> CanonicalRelation:
    """The reduction of the ambient space by a coisotropic, as a relation."""
    if not is_coisotropic(space, c):
        raise SymplecticError("subspace is not coisotropic")
    red = reduce_space(space, c)
    pairs = [(w, red.rho.col(j)) for j, w in enumerate(c.vectors())]
    rel = relation(space.dim, red.reduced.dim, pairs)
    return CanonicalRelation(space, red.reduced, rel)


def domain(l: CanonicalRelation) -> Subspace:
    return dom(l.rel)


def codomain(l: CanonicalRelation) -> Subspace:
    return ran(l.rel)


def coiso_pair_of(l: CanonicalRelation) -> CoisoPair:
    """(domain, range) as a coisotropic pair (endo relations only)."""
    if l.source != l.target:
        raise SymplecticError("the coisotropic pair needs source = target")
    return CoisoPair(l.source, dom(l.rel), ran(l.rel))


@dataclass(frozen=True)
class Factorization:
    """Reduction / symplectomorphism / coreduction factorization data.

    a and b are the (coisotropic) domain and range; induced is the
    symplectomorphism between their reduced spaces, in the deterministic
    reduction coordinates of rho_a and rho_b.
    """

    a: Subspace
    b: Subspace
    reduced_a: SympSpace
    reduced_b: SympSpace
    induced: SympMap
    rho_a: Reduction
    rho_b: Reduction


def _reduction_coords_for(red: Reduction, v) -> Vector:
    radical = intersect(red.sub, orthogonal(red.source, red.sub))
    basis = Mat.from_rows(radical.vectors() + tuple(red.lift.entries),
                          red.source.dim)
    return coords_in_basis(basis, v)[radical.dim:]


def factorize(l: CanonicalRelation) -> Factorization:
    """Factor l through its reduced domain and range, verifying every claim."""
    a = dom(l.rel)
    b = ran(l.rel)
    if not is_coisotropic(l.source, a) or not is_coisotropic(l.target, b):
        raise AssertionError("domain and range of a canonical relation are coisotropic")
    if ker(l.rel) != orthogonal(l.source, a) or hal(l.rel) != orthogonal(l.target, b):
        raise AssertionError("kernel/halo must be the orthogonals of domain/range")
    red_a = reduce_space(l.source, a)
    red_b = reduce_space(l.target, b)
    if red_a.reduced.dim != red_b.reduced.dim:
        raise AssertionError("reduced domain and range dimensions must agree")
    cols = []
    for e in red_a.lift.entries:
        y = image_of_vector(l.rel, e)
        cols.append(_reduction_coords_for(red_b, y))
    mat = Mat.from_rows(cols, red_b.reduced.dim).transpose() if cols else \
        Mat(red_b.reduced.dim, 0, ())
    induced = SympMap(red_a.reduced, red_b.reduced, mat)
    if not is_symplectic_map(induced):
        raise AssertionError("induced quotient map must be symplectic")
    fact = Factorization(a, b, red_a.reduced, red_b.reduced, induced, red_a, red_b)
    _verify_recomposition(l, fact)
    return fact


def _verify_recomposition(l: CanonicalRelation, fact: Factorization):
    r_a = reduction_relation(l.source, fact.a)
    r_b = reduction_relation(l.target, fact.b)
    middle = compose(graph(fact.induced.matrix), r_a.rel)
    total = compose(converse(r_b.rel), middle)
    if total != l.rel:
        raise AssertionError("recomposition through the reductions failed")


def _validate_complements(space: SympSpace, coiso: Subspace, part: Subspace) -> None:
    rad = orthogonal(space, coiso)
    if not intersect(rad, part).is_zero() or sum_spaces(rad, part) != coiso:
        raise SymplecticError("subspace is not a complement of the radical")
    if not is_symplectic_subspace(space, part):
        raise SymplecticError("complement must be symplectic")


def _partner_component(l: CanonicalRelation, bw: Subspace, b1: Subspace, v) -> Vector:
    """The b1-component of some partner of v, i.e. phi(v) for the splitting."""
    y = image_of_vector(l.rel, v)
    if y is None:
        raise LinalgError("vector is outside the domain")
    basis = Mat.from_rows(bw.vectors() + b1.vectors(), l.target.dim)
    coords = coords_in_basis(basis, y)[bw.dim:]
    out = [F0] * l.target.dim
    for c, w in zip(coords, b1.vectors()):
        for t in range(l.target.dim):
            out[t] += c * w[t]
    return tuple(out)


def _induced_matrix(l: CanonicalRelation, a1_rows, bw: Subspace,
                    b1_rows) -> Mat:
    """Matrix of the induced map w.r.t. explicit adapted bases.

    Column j holds the coordinates, in the rows of b1_rows, of the
    b1-component of a partner of a1_rows[j].
    """
    b1 = span(b1_rows, l.target.dim)
    basis = Mat.from_rows(tuple(bw.vectors()) + tuple(b1_rows), l.target.dim)
    cols = []
    for a in a1_rows:
        y = image_of_vector(l.rel, a)
        cols.append(coords_in_basis(basis, y)[bw.dim:])
    width = len(b1_rows)
    return Mat.from_rows(cols, width).transpose() if cols else Mat(width, 0, ())


def induced_phi(l: CanonicalRelation, a1: Subspace, b1: Subspace) -> SympMap:
    """The symplectic map a1 -> b1 cut out by l and the chosen complements."""
    _validate_complements(l.source, dom(l.rel), a1)
    _validate_complements(l.target, ran(l.rel), b1)
    bw = orthogonal(l.target, ran(l.rel))
    mat = _induced_matrix(l, a1.vectors(), bw, b1.vectors())
    out = SympMap(restrict_form(l.source, a1), restrict_form(l.target, b1), mat)
    if not is_symplectic_map(out):
        raise AssertionError("induced partial map must be symplectic")
    return out


def is_equivalence(s: SympMap, l: CanonicalRelation, l_hat: CanonicalRelation) -> bool:
    """Direct check: s x s carries l onto l_hat (endo relations)."""
    if l.source != l.target or l_hat.source != l_hat.target:
        raise SymplecticError("equivalence is defined for endo relations")
    if s.source != l.source or s.target != l_hat.source:
        return False
    if not is_symplectic_map(s):
        return False
    big = block_diag([s.matrix, s.matrix])
    image = span([big.matvec(v) for v in l.rel.space.vectors()], 2 * s.target.dim)
    return image == l_hat.rel.space


def equivalence_by_parts(s: SympMap, l: CanonicalRelation, l_hat: CanonicalRelation,
                         a1: Subspace, b1: Subspace) -> bool:
    """Check the two-part criterion: radicals match and the induced maps
    intertwine (via membership of the transported graph pairs)."""
    if l.source != l.target or l_hat.source != l_hat.target:
        raise SymplecticError("equivalence is defined for endo relations")
    if s.source != l.source or s.target != l_hat.source:
        return False
    if not is_symplectic_map(s):
        return False
    _validate_complements(l.source, dom(l.rel), a1)
    _validate_complements(l.target, ran(l.rel), b1)
    aw = orthogonal(l.source, dom(l.rel))
    bw = orthogonal(l.target, ran(l.rel))
    aw_hat = orthogonal(l_hat.source, dom(l_hat.rel))
    bw_hat = orthogonal(l_hat.target, ran(l_hat.rel))
    if s.apply_subspace(aw) != aw_hat or s.apply_subspace(bw) != bw_hat:
        return False
    for v in a1.vectors():
        w = _partner_component(l, bw, b1, v)
        pair = tuple(s.apply(v)) + tuple(s.apply(w))
        if not contains(l_hat.rel.space, pair):
            return False
    return True


# ---------------------------------------------------------------------------
# Partial classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Equivalent:
    map: SympMap


@dataclass(frozen=True)
class Inequivalent:
    """Carries a conjugation-invariant witness separating the two relations."""

    invariant: str
    left: object
    right: object


@dataclass(frozen=True)
class ReducedProblem:
    """The open residue of the classification, in explicit matrix form.

    phi / phi_hat are the induced maps on the adapted bases of F (+) H and
    F (+) G; blocks are their four corner matrices (F->F, H->F, F->G, H->G).
    The Towber signatures of the underlying plain relations ride along as
    extra structure; no classification claim is made from them.
    """

    f: Subspace
    g: Subspace
    h: Subspace
    f_hat: Subspace
    g_hat: Subspace
    h_hat: Subspace
    phi: SympMap
    phi_hat: SympMap
    blocks: tuple[Mat, Mat, Mat, Mat]
    blocks_hat: tuple[Mat, Mat, Mat, Mat]
    towber: TowberSignature
    towber_hat: TowberSignature

    def __post_init__(self):
        if not is_symplectic_map(self.phi) or not is_symplectic_map(self.phi_hat):
            raise AssertionError("reduced-problem maps must be symplectic")
        if self.g.dim != self.h.dim or self.g_hat.dim != self.h_hat.dim:
            raise AssertionError("G and H blocks must have equal dimension")


@dataclass(frozen=True)
class Undecided:
    problem: ReducedProblem


Verdict = Equivalent | Inequivalent | Undecided


def _canonical_subspaces(space: SympSpace, a: Subspace, b: Subspace):
    aw = orthogonal(space, a)
    bw = orthogonal(space, b)
    awb = intersect(aw, b)
    bwa = intersect(bw, a)
    return (intersect(aw, bw), awb, bwa, aw, bw, intersect(a, b), a)


def intersection_profile(l: CanonicalRelation) -> tuple:
    """Conjugation-invariant table of dimensions and ranks.

    For every pair (X, Y) of subspaces canonically built from (dom, ran),
    record the dimension of l(X) cap Y and of the converse image
    l^r(X) cap Y, plus the symplectic rank of every image l(X).  An
    equivalence transports every entry, so any mismatch is a sound
    inequivalence witness.
    """
    if l.source != l.target:
        raise SymplecticError("profiles are defined for endo relations")
    space = l.source
    subs = _canonical_subspaces(space, dom(l.rel), ran(l.rel))
    table = []
    for rel in (l.rel, converse(l.rel)):
        for x in subs:
            img = image_of_subspace(rel, x)
            row = [img.dim - intersect(img, orthogonal(space, img)).dim]
            for y in subs:
                row.append(intersect(img, y).dim)
            table.append(tuple(row))
    return tuple(table)


def _adapted_phi_data(l: CanonicalRelation, dec: ElementaryDecomposition):
    """Induced map and corner blocks on the adapted (F | H) -> (F | G) bases."""
    space = l.source
    bw = orthogonal(space, ran(l.rel))
    f, g, h = dec.f, dec.blocks()[3], dec.blocks()[4]
    a1_rows = tuple(f.vectors()) + tuple(h.vectors())
    b1_rows = tuple(f.vectors()) + tuple(g.vectors())
    mat = _induced_matrix(l, a1_rows, bw, b1_rows)
    fdim, gdim = f.dim, g.dim
    m1 = Mat.from_rows([row[:fdim] for row in mat.entries[:fdim]], fdim)
    m2 = Mat.from_rows([row[fdim:] for row in mat.entries[:fdim]], h.dim)
    m3 = Mat.from_rows([row[:fdim] for row in mat.entries[fdim:]], fdim)
    m4 = Mat.from_rows([row[fdim:] for row in mat.entries[fdim:]], h.dim)
    src = _adapted_space(space, a1_rows)
    dst = _adapted_space(space, b1_rows)
    phi = SympMap(src, dst, mat)
    return phi, (m1, m2, m3, m4)


def _adapted_space(space: SympSpace, rows) -> SympSpace:
    gram = Mat.from_rows([[omega(space, u, v) for v in rows] for u in rows],
                         len(rows)) if rows else Mat(0, 0, ())
    return SympSpace(len(rows), gram)


def decide_equivalence(l: CanonicalRelation, l_hat: CanonicalRelation):
    """Equivalent / Inequivalent / Undecided, with evidence in each case.

    Equivalent verdicts carry a map verified by is_equivalence; Inequivalent
    verdicts carry a conjugation-invariant witness; Undecided verdicts carry
    the reduced problem that remains open.
    """
    if l.source != l.target or l_hat.source != l_hat.target:
        raise SymplecticError("classification applies to endo relations")
    if l.source.dim != l_hat.source.dim:
        return Inequivalent("ambient_dimension", l.source.dim, l_hat.source.dim)
    if l.source == l_hat.source and l.rel == l_hat.rel:
        return Equivalent(identity_map(l.source))
    pair = coiso_pair_of(l)
    pair_hat = coiso_pair_of(l_hat)
    k = canonical_invariants(pair)
    k_hat = canonical_invariants(pair_hat)
    if k != k_hat:
        return Inequivalent("canonical_invariants", k, k_hat)
    prof = intersection_profile(l)
    prof_hat = intersection_profile(l_hat)
    if prof != prof_hat:
        return Inequivalent("intersection_profile", prof, prof_hat)
    n = k_to_n(k)
    dec = elementary_decomposition(pair)
    dec_hat = elementary_decomposition(pair_hat)
    phi, blocks = _adapted_phi_data(l, dec)
    phi_hat, blocks_hat = _adapted_phi_data(l_hat, dec_hat)
    if n[2] == 0:
        s = _solve_no_sigma_case(l, l_hat, dec, dec_hat, phi, phi_hat)
        if not is_equivalence(s, l, l_hat):
            raise AssertionError("constructed map failed the equivalence check")
        return Equivalent(s)
    if n[3] == 0:
        from .poly import invariant_factors_of_map

        inv = invariant_factors_of_map(blocks[0])
        inv_hat = invariant_factors_of_map(blocks_hat[0])
        if inv != inv_hat:
            return Inequivalent("induced_map_similarity", inv, inv_hat)
    problem = ReducedProblem(
        dec.f, dec.blocks()[3], dec.blocks()[4],
        dec_hat.f, dec_hat.blocks()[3], dec_hat.blocks()[4],
        phi, phi_hat, blocks, blocks_hat,
        towber_signature(l.rel), towber_signature(l_hat.rel))
    return Undecided(problem)


def _solve_no_sigma_case(l, l_hat, dec: ElementaryDecomposition,
                         dec_hat: ElementaryDecomposition,
                         phi: SympMap, phi_hat: SympMap) -> SympMap:
    """Construct the equivalence when the sigma block is absent.

    With F = 0 the induced map runs H -> G, and an equivalence must carry
    the lagrangian pair (H1, phi^{-1}(G1)) of H onto its hatted twin; such
    a block map exists because the matched intersection profile makes the
    two pairs equivalent as coisotropic pairs.  The G block is then forced
    to be phi_hat o S_H o phi^{-1}.
    """
    space, space_hat = l.source, l_hat.source
    g, h = dec.blocks()[3], dec.blocks()[4]
    g_hat, h_hat = dec_hat.blocks()[3], dec_hat.blocks()[4]
    h_chart = restrict_form(space, h)
    h_hat_chart = restrict_form(space_hat, h_hat)
    g1_chart = to_chart(g, dec.g1)
    g1_hat_chart = to_chart(g_hat, dec_hat.g1)
    phi_inv = inverse(phi.matrix) if phi.matrix.rows else Mat(0, 0, ())
    phi_hat_inv = inverse(phi_hat.matrix) if phi_hat.matrix.rows else Mat(0, 0, ())
    lg = span([phi_inv.matvec(v) for v in g1_chart.vectors()], h.dim)
    lg_hat = span([phi_hat_inv.matvec(v) for v in g1_hat_chart.vectors()],
                  h_hat.dim)
    pair_h = CoisoPair(h_chart, to_chart(h, dec.h1), lg)
    pair_h_hat = CoisoPair(h_hat_chart, to_chart(h_hat, dec_hat.h1), lg_hat)
    s5 = build_equivalence(pair_h, pair_h_hat).matrix
    s4 = phi_hat.matrix @ s5 @ phi_inv if h.dim else Mat(0, 0, ())
    return _assemble_block_map(space, dec, space_hat, dec_hat, (s4, s5))


# ---------------------------------------------------------------------------
# Block normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockNormalForm:
    """Three-block presentation of a canonical relation.

    Rows are (v | w) pairs in ambient coordinates: the lambda block lists
    (i, 0), (0, i) over the common lagrangian; the delta block pairs the
    transverse lagrangians; the final block groups its columns as
    (G1 | F | H | 0) over (0 | phi F | phi H | H1).  phi0 is the raw exact
    matrix of the induced map; it is not a normal form (none is known).
    """

    dec: ElementaryDecomposition
    lambda_rows: Mat
    delta_rows: Mat
    l0_rows: Mat
    phi0: Mat
    phi0_is_normal_form: bool

    def all_rows(self) -> tuple:
        return (self.lambda_rows.entries + self.delta_rows.entries
                + self.l0_rows.entries)


def block_normal_form(l: CanonicalRelation) -> BlockNormalForm:
    if l.source != l.target:
        raise SymplecticError("the block form applies to endo relations")
    space = l.source
    dim = space.dim
    dec = elementary_decomposition(coiso_pair_of(l))
    bw = orthogonal(space, ran(l.rel))
    g = dec.blocks()[3]
    b1_rows = tuple(dec.f.vectors()) + tuple(g.vectors())
    lam = []
    for v in dec.i.vectors():
        lam.append(tuple(v) + zero_vector(dim))
    for v in dec.i.vectors():
        lam.append(zero_vector(dim) + tuple(v))
    delta = []
    for v in dec.e1.vectors():
        delta.append(tuple(v) + zero_vector(dim))
    for v in dec.e2.vectors():
        delta.append(zero_vector(dim) + tuple(v))
    l0 = []
    for v in dec.g1.vectors():
        l0.append(tuple(v) + zero_vector(dim))
    for v in dec.f.vectors():
        l0.append(tuple(v) + _partner_in_rows(l, bw, b1_rows, v))
    for v in dec.blocks()[4].vectors():
        l0.append(tuple(v) + _partner_in_rows(l, bw, b1_rows, v))
    for v in dec.h1.vectors():
        l0.append(zero_vector(dim) + tuple(v))
    h = dec.blocks()[4]
    a1_rows = tuple(dec.f.vectors()) + tuple(h.vectors())
    phi0 = _induced_matrix(l, a1_rows, bw, b1_rows)
    bnf = BlockNormalForm(
        dec,
        Mat.from_rows(lam, 2 * dim),
        Mat.from_rows(delta, 2 * dim),
        Mat.from_rows(l0, 2 * dim),
        phi0, False)
    if reassemble_blocks(bnf, dim) != l.rel.space:
        raise AssertionError("block rows do not reassemble the relation")
    return bnf


def _partner_in_rows(l: CanonicalRelation, bw: Subspace, b1_rows, v) -> tuple:
    basis = Mat.from_rows(tuple(bw.vectors()) + tuple(b1_rows), l.target.dim)
    y = image_of_vector(l.rel, v)
    coords = coords_in_basis(basis, y)[bw.dim:]
    out = [F0] * l.target.dim
    for c, w in zip(coords, b1_rows):
        for t in range(l.target.dim):
            out[t] += c * w[t]
    return tuple(out)


def reassemble_blocks(bnf: BlockNormalForm, dim: int) -> Subspace:
    """Span of all emitted rows; equals the original relation subspace."""
    return span(bnf.all_rows(), 2 * dim)
