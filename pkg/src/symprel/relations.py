"""The category of linear relations and its complete endo-invariants.

A linear relation from X to Y is a subspace of X (+) Y; graphs of linear
maps are the special case that is everywhere defined and single valued.
Besides the composition algebra (compose / converse / transpose / adjoint /
corners / direct sums) this module computes, for relations with equal source
and target, the complete conjugation invariants: the multiset of the four
indecomposable chain types at each dimension together with the similarity
class of the nonsingular core.  The extraction works purely through
dimension sequences of iterated compositions, so it never has to pick bases
for the singular part.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import (
    F0,
    LinalgError,
    Mat,
    Subspace,
    Vector,
    eliminate_block,
    block_diag,
    complement,
    contains_space,
    coords_in_basis,
    direct_sum_subspace,
    full_subspace,
    intersect,
    kernel,
    project_coords,
    rank,
    solve,
    span,
    sum_spaces,
    unit_vector,
    vec,
    zero_subspace,
    zero_vector,
)
from .poly import Poly, invariant_factors_of_map, pdeg


@dataclass(frozen=True)
class Relation:
    """Linear relation: a subspace of source (+) target, blocks in that order."""

    source_dim: int
    target_dim: int
    space: Subspace

    def __post_init__(self):
        if self.space.ambient_dim != self.source_dim + self.target_dim:
            raise LinalgError("relation ambient must be source + target")

    @property
    def dim(self) -> int:
        return self.space.dim

    def members(self) -> tuple[tuple[Vector, Vector], ...]:
        """Basis of the relation as (source part, target part) pairs."""
        return tuple((v[: self.source_dim], v[self.source_dim:])
                     for v in self.space.vectors())


def relation(source_dim: int, target_dim: int, pairs) -> Relation:
    """Relation spanned by (x, y) pairs."""
    gens = [tuple(vec(x)) + tuple(vec(y)) for x, y in pairs]
    return Relation(source_dim, target_dim, span(gens, source_dim + target_dim))


def graph(m: Mat) -> Relation:
    """Graph of the linear map with matrix m (columns index the source)."""
    pairs = [(unit_vector(i, m.cols), m.col(i)) for i in range(m.cols)]
    return relation(m.cols, m.rows, pairs)


def identity_relation(n: int) -> Relation:
    return graph(Mat.identity(n))


def zero_relation(source_dim: int, target_dim: int) -> Relation:
    return Relation(source_dim, target_dim, zero_subspace(source_dim + target_dim))


def compose(q: Relation, r: Relation) -> Relation:
    """q o r = {(x, z) : exists y with (x, y) in r and (y, z) in q}.

    Implements the intersect-with-partial-diagonal-then-project recipe in
    one elimination: stack the members of r as (y | x | 0) and of q as
    (-y' | 0 | z); the echelon rows with vanishing middle block are exactly
    the matched pairs.
    """
    if r.target_dim != q.source_dim:
        raise LinalgError("relations are not composable")
    nx, ny, nz = r.source_dim, r.target_dim, q.target_dim
    rows = [list(y) + list(x) + [F0] * nz for x, y in r.members()]
    rows += [[-c for c in y] + [F0] * nx + list(z) for y, z in q.members()]
    gens = eliminate_block(rows, ny + nx + nz, ny)
    return Relation(nx, nz, span(gens, nx + nz))


def converse(r: Relation) -> Relation:
    gens = [y + x for x, y in r.members()]
    return Relation(r.target_dim, r.source_dim,
                    span(gens, r.source_dim + r.target_dim))


def adjoint(r: Relation) -> Relation:
    """Adjoint in the dual spaces: pairs (alpha, beta) with alpha(y) = beta(x)
    for every (x, y) in r, coordinates in the dual bases."""
    rows = [tuple(y) + tuple(-c for c in x) for x, y in r.members()]
    m = Mat.from_rows(rows, r.source_dim + r.target_dim) if rows else \
        Mat(0, r.source_dim + r.target_dim, ())
    return Relation(r.target_dim, r.source_dim, kernel(m))


def transpose(r: Relation, b_x: Mat, b_y: Mat) -> Relation:
    """Transpose w.r.t. nondegenerate bilinear forms on source and target.

    (y, x) is in the transpose iff B_Y(y, w) = B_X(x, z) for all (z, w) in r.
    """
    if rank(b_x) != r.source_dim or rank(b_y) != r.target_dim:
        raise LinalgError("bilinear forms must be nondegenerate")
    rows = []
    for z, w in r.members():
        lhs = b_y.matvec(w)          # y . (B_Y w)
        rhs = b_x.matvec(z)          # x . (B_X z)
        rows.append(tuple(lhs) + tuple(-c for c in rhs))
    m = Mat.from_rows(rows, r.source_dim + r.target_dim) if rows else \
        Mat(0, r.source_dim + r.target_dim, ())
    return Relation(r.target_dim, r.source_dim, kernel(m))


def dom(r: Relation) -> Subspace:
    return project_coords(r.space, range(r.source_dim), r.source_dim)


def ran(r: Relation) -> Subspace:
    return project_coords(r.space, range(r.source_dim, r.source_dim + r.target_dim),
                          r.target_dim)


def ker(r: Relation) -> Subspace:
    zero_target = direct_sum_subspace(full_subspace(r.source_dim),
                                      zero_subspace(r.target_dim))
    meet = intersect(r.space, zero_target)
    return project_coords(meet, range(r.source_dim), r.source_dim)


def hal(r: Relation) -> Subspace:
    zero_source = direct_sum_subspace(zero_subspace(r.source_dim),
                                      full_subspace(r.target_dim))
    meet = intersect(r.space, zero_source)
    return project_coords(meet, range(r.source_dim, r.source_dim + r.target_dim),
                          r.target_dim)


def corners(r: Relation) -> tuple[Subspace, Subspace, Subspace, Subspace]:
    """(domain, range, kernel, halo)."""
    return dom(r), ran(r), ker(r), hal(r)


def flags(r: Relation) -> tuple[bool, bool, bool]:
    """(cosurjective, coinjective, is_map)."""
    cosur = dom(r) == full_subspace(r.source_dim)
    coinj = hal(r).is_zero()
    return cosur, coinj, cosur and coinj


def is_surjective(r: Relation) -> bool:
    return ran(r) == full_subspace(r.target_dim)


def as_matrix(r: Relation) -> Mat:
    """Matrix of a relation that is a map (cosurjective and coinjective)."""
    cosur, coinj, _ = flags(r)
    if not (cosur and coinj):
        raise LinalgError("relation is not the graph of a map")
    cols = []
    for i in range(r.source_dim):
        y = image_of_vector(r, unit_vector(i, r.source_dim))
        cols.append(y)
    return Mat.from_rows(cols, r.target_dim).transpose() if cols else \
        Mat(r.target_dim, 0, ())


def image_of_vector(r: Relation, x) -> Vector | None:
    """Some y with (x, y) in r; unique modulo the halo.  None if x not in dom."""
    x = vec(x)
    src_rows = Mat.from_rows([v[: r.source_dim] for v in r.space.vectors()],
                             r.source_dim) if r.dim else Mat(0, r.source_dim, ())
    combo = solve(src_rows.transpose(), x)
    if combo is None:
        return None
    y = [F0] * r.target_dim
    for c, v in zip(combo, r.space.vectors()):
        for t in range(r.target_dim):
            y[t] += c * v[r.source_dim + t]
    return tuple(y)


def image_of_subspace(r: Relation, x: Subspace) -> Subspace:
    """r(X) = {y : exists x in X with (x, y) in r}.

    Single elimination: y is in the image exactly when (0, y) lies in the
    span of r together with X x 0.
    """
    if x.ambient_dim != r.source_dim:
        raise LinalgError("ambient dimension mismatch")
    n = r.source_dim + r.target_dim
    rows = [list(v) for v in r.space.vectors()]
    rows += [list(v) + [F0] * r.target_dim for v in x.vectors()]
    gens = eliminate_block(rows, n, r.source_dim)
    return span(gens, r.target_dim)


def direct_sum(r: Relation, q: Relation) -> Relation:
    """External direct sum, re-sorted into (src1, src2 | tgt1, tgt2) blocks."""
    ns = r.source_dim + q.source_dim
    nt = r.target_dim + q.target_dim
    gens = []
    for x, y in r.members():
        gens.append(tuple(x) + zero_vector(q.source_dim)
                    + tuple(y) + zero_vector(q.target_dim))
    for x, y in q.members():
        gens.append(zero_vector(r.source_dim) + tuple(x)
                    + zero_vector(r.target_dim) + tuple(y))
    return Relation(ns, nt, span(gens, ns + nt))


TOWBER_KINDS = ("tau", "tau_plus", "plus_tau", "plus_tau_plus")


def towber_block(kind: str, n: int) -> Relation:
    """The four indecomposable chain relations on the n-dimensional model space.

    tau(n)           span (e1,e2)..(e_{n-1},e_n)            dim n-1
    tau_plus(n)      .. plus (e_n, 0)  (nilpotent graph)    dim n
    plus_tau(n)      (0,e1) plus the chain                  dim n
    plus_tau_plus(n) full chain with both ends open         dim n+1
    """
    if n < 1:
        raise LinalgError("towber blocks need n >= 1")
    if kind not in TOWBER_KINDS:
        raise LinalgError(f"unknown towber kind: {kind!r}")
    pairs = []
    if kind in ("plus_tau", "plus_tau_plus"):
        pairs.append((zero_vector(n), unit_vector(0, n)))
    for i in range(n - 1):
        pairs.append((unit_vector(i, n), unit_vector(i + 1, n)))
    if kind in ("tau_plus", "plus_tau_plus"):
        pairs.append((unit_vector(n - 1, n), zero_vector(n)))
    return relation(n, n, pairs)


def conjugate(s: Mat, r: Relation) -> Relation:
    """Image of an endo-relation under s acting on both components."""
    if r.source_dim != r.target_dim or s.cols != r.source_dim:
        raise LinalgError("conjugation needs an endo-relation and matching map")
    big = block_diag([s, s])
    gens = [big.matvec(v) for v in r.space.vectors()]
    return Relation(s.rows, s.rows, span(gens, 2 * s.rows))


def endrel_morphism(s: Mat, r: Relation, q: Relation) -> bool:
    """Whether s defines a morphism r -> q of endo-relations."""
    if r.source_dim != r.target_dim or q.source_dim != q.target_dim:
        raise LinalgError("endo-relations required")
    if s.cols != r.source_dim or s.rows != q.source_dim:
        raise LinalgError("map shape mismatch")
    return contains_space(q.space, conjugate(s, r).space)


@dataclass(frozen=True)
class TowberSignature:
    """Complete conjugation invariants of an endo-relation.

    The four maps send a block dimension to its multiplicity (absent means
    zero); nonsingular_part lists the invariant factor polynomials of the
    regular core, monic and each dividing the next, none divisible by x.
    """

    tau_plain: tuple[tuple[int, int], ...]
    tau_plus: tuple[tuple[int, int], ...]
    plus_tau: tuple[tuple[int, int], ...]
    plus_tau_plus: tuple[tuple[int, int], ...]
    nonsingular_part: tuple[Poly, ...]

    def multiplicities(self, kind: str) -> dict[int, int]:
        return dict(getattr(self, {"tau": "tau_plain", "tau_plus": "tau_plus",
                                   "plus_tau": "plus_tau",
                                   "plus_tau_plus": "plus_tau_plus"}[kind]))

    def source_dim(self) -> int:
        total = sum(n * m for table in (self.tau_plain, self.tau_plus,
                                        self.plus_tau, self.plus_tau_plus)
                    for n, m in table)
        return total + sum(pdeg(p) for p in self.nonsingular_part)

    def relation_dim(self) -> int:
        shift = {"tau_plain": -1, "tau_plus": 0, "plus_tau": 0, "plus_tau_plus": 1}
        total = 0
        for name, delta in shift.items():
            total += sum((n + delta) * m for n, m in getattr(self, name))
        return total + sum(pdeg(p) for p in self.nonsingular_part)


def _table(counts: dict[int, int]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((n, m) for n, m in counts.items() if m))


def _second_differences(values: list[int]) -> dict[int, int]:
    """Multiplicities m_n from f_j = sum_n m_n * min(j, n); f is stabilized."""
    out: dict[int, int] = {}
    top = len(values) - 1
    for n in range(1, top + 1):
        nxt = values[n + 1] if n + 1 <= top else values[top]
        m = 2 * values[n] - values[n - 1] - nxt
        if m:
            out[n] = m
    return out


def towber_signature(r: Relation) -> TowberSignature:
    """Complete invariants, extracted from exact rank data of iterated powers.

    For each composition power the dimensions of kernel, halo, domain and
    range decompose additively over indecomposable blocks, with saturating
    min(j, n) profiles; second differences recover the per-dimension counts.
    The two-ended chains are separated from the one-ended ones by the extra
    sequence dim(ker(R^j) cap hal(R^N)), which only they contribute to.  The
    nonsingular core is the induced map on (dom cap ran)/(ker + hal) of the
    stabilized power, reported by its similarity invariants.
    """
    if r.source_dim != r.target_dim:
        raise LinalgError("towber signature needs an endo-relation")
    m = r.source_dim
    powers = [identity_relation(m)]
    for _ in range(m):
        powers.append(compose(r, powers[-1]))
    kerd = [ker(p).dim for p in powers]
    hald = [hal(p).dim for p in powers]
    codom = [m - dom(p).dim for p in powers]
    codran = [m - ran(p).dim for p in powers]
    stable_hal = hal(powers[m])
    both = [intersect(ker(p), stable_hal).dim for p in powers]

    d_counts = _second_differences(both)                      # plus_tau_plus
    ad = _second_differences(kerd)                            # tau_plus + ptp
    bd = _second_differences(hald)                            # plus_tau + ptp
    ac = _second_differences(codran)                          # tau_plus + tau
    bc = _second_differences(codom)                           # plus_tau + tau

    sizes = set(d_counts) | set(ad) | set(bd) | set(ac) | set(bc)
    a_counts, b_counts, c_counts = {}, {}, {}
    for n in sizes:
        d_n = d_counts.get(n, 0)
        a_n = ad.get(n, 0) - d_n
        b_n = bd.get(n, 0) - d_n
        c_n = ac.get(n, 0) - a_n
        if bc.get(n, 0) - b_n != c_n:
            raise AssertionError("inconsistent multiplicity extraction")
        if min(a_n, b_n, c_n, d_n) < 0:
            raise AssertionError("negative multiplicity extracted")
        if a_n:
            a_counts[n] = a_n
        if b_n:
            b_counts[n] = b_n
        if c_n:
            c_counts[n] = c_n

    factors = _regular_core_invariants(r, powers[m])
    sig = TowberSignature(_table(c_counts), _table(a_counts), _table(b_counts),
                          _table(d_counts), factors)
    if sig.source_dim() != m or sig.relation_dim() != r.dim:
        raise AssertionError("signature dimension accounting failed")
    return sig


def _regular_core_invariants(r: Relation, stable: Relation) -> tuple[Poly, ...]:
    """Invariant factors of the induced map on the regular core."""
    m = r.source_dim
    core = intersect(dom(stable), ran(stable))
    junk = intersect(sum_spaces(ker(stable), hal(stable)), core)
    rep = complement(junk, core)
    if rep.dim == 0:
        return ()
    basis = Mat.from_rows(junk.vectors() + rep.vectors(), m)
    cols = []
    for w in rep.vectors():
        y = _related_vector_in(r, w, core)
        cols.append(coords_in_basis(basis, y)[junk.dim:])
    t = Mat.from_rows(cols, rep.dim).transpose()
    factors = invariant_factors_of_map(t)
    for f in factors:
        if f and f[0] == 0:
            raise AssertionError("regular core turned out singular")
    return factors


def _related_vector_in(r: Relation, x: Vector, target: Subspace) -> Vector:
    """Some y in target with (x, y) in r (exists for core vectors)."""
    b = r.space.basis
    d = r.dim
    t = target.dim
    rows = []
    for i in range(r.source_dim):
        rows.append(tuple(b.entries[k][i] for k in range(d)) + zero_vector(t))
    for j in range(r.target_dim):
        rows.append(tuple(b.entries[k][r.source_dim + j] for k in range(d))
                    + tuple(-v[j] for v in target.vectors()))
    rhs = tuple(x) + zero_vector(r.target_dim)
    sol = solve(Mat.from_rows(rows, d + t) if rows else Mat(0, d + t, ()), rhs)
    if sol is None:
        raise LinalgError("vector has no partner in the target subspace")
    coeffs = sol[d:]
    y = [F0] * r.target_dim
    for c, v in zip(coeffs, target.vectors()):
        for j in range(r.target_dim):
            y[j] += c * v[j]
    return tuple(y)


def endrel_isomorphic(r: Relation, q: Relation) -> bool:
    """Complete-invariant comparison of two endo-relations."""
    if r.source_dim != q.source_dim:
        return False
    return towber_signature(r) == towber_signature(q)
