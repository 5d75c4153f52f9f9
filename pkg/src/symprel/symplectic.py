"""Symplectic structure on exact rational vector spaces.

Covers the constructions everything downstream leans on: orthogonals and the
subspace trichotomy, deterministic Darboux bases, lagrangian splittings with
dual bases, symplectic maps between splittings, reduction by a subspace, and
the Witt-Artin decomposition.  All "choose a vector / choose a complement"
steps are resolved by the deterministic greedy rule of ``linalg.complement``
so that every output is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import (
    F0,
    F1,
    LinalgError,
    Mat,
    Subspace,
    Vector,
    block_diag,
    complement,
    contains,
    contains_space,
    coords_in_basis,
    full_subspace,
    hcat,
    intersect,
    inverse,
    kernel,
    rank,
    span,
    sum_spaces,
    vec,
    vec_scale,
    zero_subspace,
)


class SymplecticError(ValueError):
    """Raised when a symplectic precondition fails."""


@dataclass(frozen=True)
class SympSpace:
    """Even-dimensional rational space with a nondegenerate antisymmetric form."""

    dim: int
    form: Mat

    def __post_init__(self):
        if self.form.rows != self.dim or self.form.cols != self.dim:
            raise SymplecticError("form must be a dim x dim matrix")
        if self.dim % 2 != 0:
            raise SymplecticError("symplectic spaces have even dimension")
        if self.form.transpose() != -self.form:
            raise SymplecticError("form must be antisymmetric")
        if rank(self.form) != self.dim:
            raise SymplecticError("form must be nondegenerate")

def omega(space: SympSpace, u, v):
    """Evaluate the form: omega(u, v) = u^T F v."""
    fv = space.form.matvec(vec(v))
    acc = F0
    for a, b in zip(vec(u), fv):
        if a and b:
            acc += a * b
    return acc


def standard_space(n: int) -> SympSpace:
    """Q^(2n) with the block form [[0, I], [-I, 0]]."""
    if n < 0:
        raise SymplecticError("n must be nonnegative")
    rows = []
    for i in range(2 * n):
        row = [F0] * (2 * n)
        if i < n:
            row[n + i] = F1
        else:
            row[i - n] = -F1
        rows.append(tuple(row))
    return SympSpace(2 * n, Mat(2 * n, 2 * n, tuple(rows)))


def minus(space: SympSpace) -> SympSpace:
    return SympSpace(space.dim, -space.form)


def dsum(v1: SympSpace, v2: SympSpace) -> SympSpace:
    return SympSpace(v1.dim + v2.dim, block_diag([v1.form, v2.form]))


def orthogonal(space: SympSpace, w: Subspace) -> Subspace:
    """The set of vectors pairing to zero with all of w."""
    if w.ambient_dim != space.dim:
        raise SymplecticError("ambient dimension mismatch")
    if w.is_zero():
        return full_subspace(space.dim)
    return kernel(w.basis @ space.form.transpose())


def sp_rank(space: SympSpace, w: Subspace) -> int:
    """dim W minus the dimension of the kernel of the restricted form."""
    return w.dim - intersect(w, orthogonal(space, w)).dim


def classify(space: SympSpace, w: Subspace) -> str:
    """One of lagrangian / symplectic / isotropic / coisotropic / generic."""
    if w.ambient_dim != space.dim:
        raise SymplecticError("ambient dimension mismatch")
    wo = orthogonal(space, w)
    if w == wo:
        return "lagrangian"
    if intersect(w, wo).is_zero():
        return "symplectic"
    if contains_space(wo, w):
        return "isotropic"
    if contains_space(w, wo):
        return "coisotropic"
    return "generic"


def is_isotropic(space: SympSpace, w: Subspace) -> bool:
    return classify(space, w) in ("isotropic", "lagrangian") or w.is_zero()


def is_coisotropic(space: SympSpace, w: Subspace) -> bool:
    return contains_space(w, orthogonal(space, w))


def is_lagrangian(space: SympSpace, w: Subspace) -> bool:
    return w == orthogonal(space, w)


def is_symplectic_subspace(space: SympSpace, w: Subspace) -> bool:
    return intersect(w, orthogonal(space, w)).is_zero()


@dataclass(frozen=True)
class SympBasis:
    """Ordered basis (q_1..q_n, p_1..p_n) with the standard pairings."""

    space: SympSpace
    vectors: tuple[Vector, ...]

    def __post_init__(self):
        n2 = self.space.dim
        if len(self.vectors) != n2:
            raise SymplecticError("a symplectic basis needs dim vectors")
        n = n2 // 2
        for i in range(n):
            for j in range(n):
                qi, qj = self.vectors[i], self.vectors[j]
                pi, pj = self.vectors[n + i], self.vectors[n + j]
                if omega(self.space, qi, pj) != (F1 if i == j else F0):
                    raise SymplecticError("q/p pairing violated")
                if omega(self.space, qi, qj) != 0 or omega(self.space, pi, pj) != 0:
                    raise SymplecticError("q/q or p/p pairing violated")
        if rank(Mat.from_rows(self.vectors, n2) if n2 else Mat(0, 0, ())) != n2:
            raise SymplecticError("symplectic basis must be a basis")

    @property
    def n(self) -> int:
        return self.space.dim // 2

    def q_vectors(self) -> tuple[Vector, ...]:
        return self.vectors[: self.n]

    def p_vectors(self) -> tuple[Vector, ...]:
        return self.vectors[self.n:]


@dataclass(frozen=True)
class SympMap:
    """Linear map between symplectic spaces, stored as a plain matrix.

    Construction checks shapes only; is_symplectic_map is the predicate that
    verifies invertibility and exact form compatibility.  Every constructor
    in this package asserts it before handing a map out.
    """

    source: SympSpace
    target: SympSpace
    matrix: Mat

    def __post_init__(self):
        if self.matrix.rows != self.target.dim or self.matrix.cols != self.source.dim:
            raise SymplecticError("matrix shape must be target dim x source dim")

    def apply(self, v) -> Vector:
        return self.matrix.matvec(vec(v))

    def apply_subspace(self, s: Subspace) -> Subspace:
        return span([self.matrix.matvec(v) for v in s.vectors()], self.target.dim)


def identity_map(space: SympSpace) -> SympMap:
    return SympMap(space, space, Mat.identity(space.dim))


def is_symplectic_map(s: SympMap) -> bool:
    """Exact check of S^T F_target S = F_source plus invertibility."""
    if s.source.dim != s.target.dim:
        return False
    if rank(s.matrix) != s.source.dim:
        return False
    return s.matrix.transpose() @ s.target.form @ s.matrix == s.source.form


def symp_compose(s2: SympMap, s1: SympMap) -> SympMap:
    if s1.target != s2.source:
        raise SymplecticError("maps are not composable")
    return SympMap(s1.source, s2.target, s2.matrix @ s1.matrix)


def symp_inverse(s: SympMap) -> SympMap:
    return SympMap(s.target, s.source, inverse(s.matrix))


def _symp_reduce(space: SympSpace, v: Vector,
                 pairs: list[tuple[Vector, Vector]]) -> Vector:
    """Project v onto the orthogonal complement of the span of chosen pairs."""
    for q, p in pairs:
        a = omega(space, v, p)
        b = omega(space, v, q)
        if a != 0:
            v = tuple(x - a * y for x, y in zip(v, q))
        if b != 0:
            v = tuple(x + b * y for x, y in zip(v, p))
    return v


def darboux_basis(space: SympSpace) -> SympBasis:
    """Deterministic symplectic Gram-Schmidt over standard coordinate vectors.

    At each step the first standard vector with nonzero residue (after
    reduction against the pairs found so far) becomes the next q, and the
    first standard vector with nonzero residual pairing becomes its p,
    normalized so the pairing is 1.
    """
    n2 = space.dim
    pairs: list[tuple[Vector, Vector]] = []
    for _ in range(n2 // 2):
        q = None
        for i in range(n2):
            cand = _symp_reduce(space, tuple(F1 if j == i else F0 for j in range(n2)), pairs)
            if not all(x == 0 for x in cand):
                q = cand
                break
        if q is None:
            raise SymplecticError("form is degenerate")  # unreachable on valid input
        p = None
        for i in range(n2):
            cand = _symp_reduce(space, tuple(F1 if j == i else F0 for j in range(n2)), pairs)
            c = omega(space, q, cand)
            if c != 0:
                p = vec_scale(1 / c, cand)
                break
        if p is None:
            raise SymplecticError("form is degenerate")  # unreachable on valid input
        pairs.append((q, p))
    qs = tuple(q for q, _ in pairs)
    ps = tuple(p for _, p in pairs)
    return SympBasis(space, qs + ps)


def lagrangian_complement(space: SympSpace, lag: Subspace) -> Subspace:
    """Deterministic lagrangian complement of a lagrangian subspace."""
    return span(extend_lagrangian_basis(space, lag).p_vectors(), space.dim)


def extend_lagrangian_basis(space: SympSpace, lag: Subspace) -> SympBasis:
    """Symplectic basis whose first n vectors are the canonical basis of lag.

    Follows the iterative construction of a symplectic basis with the q side
    prescribed: each p_i is taken from the deterministic basis of the space
    of vectors pairing trivially with every other chosen vector.
    """
    if not is_lagrangian(space, lag):
        raise SymplecticError("subspace is not lagrangian")
    qs = list(lag.vectors())
    n = len(qs)
    n2 = space.dim
    ps: list[Vector] = []
    for i in range(n):
        conditions = [space.form.matvec(qs[j]) for j in range(n) if j != i]
        conditions += [space.form.matvec(p) for p in ps]
        if conditions:
            candidates = kernel(Mat.from_rows(conditions, n2))
        else:
            candidates = full_subspace(n2)
        p = None
        for cand in candidates.vectors():
            c = omega(space, qs[i], cand)
            if c != 0:
                p = vec_scale(1 / c, cand)
                break
        if p is None:
            raise SymplecticError("failed to extend lagrangian basis")  # unreachable
        ps.append(p)
    return SympBasis(space, tuple(qs) + tuple(ps))


def dual_completion(space: SympSpace, q_basis, lag2: Subspace) -> tuple[Vector, ...]:
    """The unique basis p of lag2 with omega(q_i, p_j) = delta_ij."""
    qs = [vec(q) for q in q_basis]
    lag1 = span(qs, space.dim)
    if lag1.dim != len(qs):
        raise SymplecticError("q_basis must be linearly independent")
    if not is_lagrangian(space, lag1) or not is_lagrangian(space, lag2):
        raise SymplecticError("inputs must be lagrangian")
    if not intersect(lag1, lag2).is_zero() or lag1.dim + lag2.dim != space.dim:
        raise SymplecticError("inputs are not a lagrangian splitting")
    n = len(qs)
    b2 = lag2.basis
    pairing = Mat.from_rows(
        [[omega(space, q, w) for w in b2.entries] for q in qs], n) if n else Mat(0, 0, ())
    inv = inverse(pairing) if n else pairing
    ps = []
    for j in range(n):
        coeffs = inv.col(j)
        p = tuple(sum((c * w[t] for c, w in zip(coeffs, b2.entries)), F0)
                  for t in range(space.dim))
        ps.append(p)
    return tuple(ps)


def map_lagrangian_splitting(space: SympSpace, splitting: tuple[Subspace, Subspace],
                             space_hat: SympSpace,
                             splitting_hat: tuple[Subspace, Subspace]) -> SympMap:
    """Symplectic map carrying one lagrangian splitting onto another.

    Built from the canonical basis of the first lagrangian and its dual
    completion on both sides; identical inputs yield the identity map.
    """
    if space.dim != space_hat.dim:
        raise SymplecticError("dimension mismatch")
    l1, l2 = splitting
    h1, h2 = splitting_hat
    qs = l1.vectors()
    ps = dual_completion(space, qs, l2)
    qhs = h1.vectors()
    phs = dual_completion(space_hat, qhs, h2)
    b = Mat.from_rows(qs + ps, space.dim).transpose() if space.dim else Mat(0, 0, ())
    bh = Mat.from_rows(qhs + phs, space_hat.dim).transpose() if space.dim else Mat(0, 0, ())
    mat = bh @ inverse(b) if space.dim else Mat(0, 0, ())
    out = SympMap(space, space_hat, mat)
    if not is_symplectic_map(out):
        raise AssertionError("splitting map failed the symplectic check")
    return out


def restrict_form(space: SympSpace, sub: Subspace) -> SympSpace:
    """Chart of a symplectic subspace: the Gram matrix on its canonical basis."""
    vs = sub.vectors()
    gram = Mat.from_rows([[omega(space, u, v) for v in vs] for u in vs],
                         sub.dim) if sub.dim else Mat(0, 0, ())
    return SympSpace(sub.dim, gram)


def to_chart(carrier: Subspace, sub: Subspace) -> Subspace:
    """Coordinates of sub (contained in carrier) w.r.t. carrier's basis."""
    gens = [coords_in_basis(carrier.basis, v) for v in sub.vectors()]
    return span(gens, carrier.dim)


def from_chart(carrier: Subspace, sub: Subspace) -> Subspace:
    """Inclusion of a chart subspace back into the ambient space."""
    gens = []
    for c in sub.vectors():
        gens.append(tuple(
            sum((ci * row[t] for ci, row in zip(c, carrier.basis.entries)), F0)
            for t in range(carrier.ambient_dim)))
    return span(gens, carrier.ambient_dim)


@dataclass(frozen=True)
class WittArtin:
    """V = E (+) F (+) (E+F)^omega with K lagrangian there and K' its mate."""

    w: Subspace
    e: Subspace
    f: Subspace
    k: Subspace
    kprime: Subspace


def witt_artin(space: SympSpace, w: Subspace) -> WittArtin:
    """Witt-Artin decomposition of the ambient space along w."""
    if w.ambient_dim != space.dim:
        raise SymplecticError("ambient dimension mismatch")
    wo = orthogonal(space, w)
    k = intersect(w, wo)
    e = complement(k, w)
    f = complement(k, wo)
    ef = sum_spaces(e, f)
    g0 = orthogonal(space, ef)
    g0_space = restrict_form(space, g0)
    k_chart = to_chart(g0, k)
    kprime = from_chart(g0, lagrangian_complement(g0_space, k_chart))
    return WittArtin(w, e, f, k, kprime)


@dataclass(frozen=True)
class Reduction:
    """Reduction of the ambient space by sub, with explicit coordinates.

    The reduced space sub/(sub cap sub^omega) is coordinatized by the
    deterministic complement of the radical inside sub; ``lift`` holds that
    complement's basis (rows), and ``rho`` is the matrix of the reduction
    map on the canonical basis of sub.
    """

    source: SympSpace
    sub: Subspace
    reduced: SympSpace
    rho: Mat
    lift: Mat


def reduce_space(space: SympSpace, w: Subspace) -> Reduction:
    wo = orthogonal(space, w)
    radical = intersect(w, wo)
    rep = complement(radical, w)
    reduced = restrict_form(space, rep)
    rho = Mat.from_rows([_reduction_coords(space, radical, rep, v) for v in w.vectors()],
                        rep.dim).transpose() if w.dim else Mat(rep.dim, 0, ())
    return Reduction(space, w, reduced, rho, rep.basis)


def _reduction_coords(space: SympSpace, radical: Subspace, rep: Subspace, v) -> Vector:
    """Coordinates of the rep-component of v w.r.t. rep's basis."""
    basis = Mat.from_rows(radical.vectors() + rep.vectors(), space.dim)
    return coords_in_basis(basis, v)[radical.dim:]


def reduce_by(red: Reduction, l: Subspace) -> Subspace:
    """Image of l cap sub under the reduction map, in reduced coordinates."""
    space = red.source
    radical = intersect(red.sub, orthogonal(space, red.sub))
    rep = Subspace(space.dim, red.lift)
    meet = intersect(l, red.sub)
    gens = [_reduction_coords(space, radical, rep, v) for v in meet.vectors()]
    return span(gens, red.reduced.dim)


def reduce_subspace(space: SympSpace, c: Subspace, l: Subspace) -> Subspace:
    """Image of l cap c under the reduction map of the coisotropic c."""
    if not is_coisotropic(space, c):
        raise SymplecticError("subspace is not coisotropic")
    return reduce_by(reduce_space(space, c), l)
