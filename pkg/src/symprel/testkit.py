"""Seeded deterministic generators and independent brute-force oracles.

The generator state is a splitmix64 stream (documented constants below), so
identical seeds give identical instances on every platform.  Generators
record the ground truth they were built from; the oracles are written
independently of the code paths they check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .canonical import CanonicalRelation, canonical_relation, is_canonical
from .coiso import CoisoPair, normal_form_pair
from .linalg import (
    F0,
    F1,
    LinalgError,
    Mat,
    Subspace,
    Vector,
    rank,
    span,
    vec,
    zero_vector,
)
from .relations import Relation, TowberSignature, direct_sum, graph, towber_block
from .symplectic import SympMap, SympSpace, is_symplectic_map, omega, orthogonal
from .poly import Poly, companion, pmul

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class Rng:
    """splitmix64 stream; outputs reduced to small ranges by remainder."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        return self.next_u64() % n

    def int_between(self, lo: int, hi: int) -> int:
        """Uniform-ish integer in [lo, hi]."""
        return lo + self.below(hi - lo + 1)

    def fraction(self, max_num: int = 3, max_den: int = 2) -> Fraction:
        num = self.int_between(-max_num, max_num)
        den = self.int_between(1, max_den)
        return Fraction(num, den)

    def nonzero_fraction(self, max_num: int = 3, max_den: int = 2) -> Fraction:
        while True:
            x = self.fraction(max_num, max_den)
            if x != 0:
                return x

    def split(self) -> "Rng":
        """Independent child stream; advances this stream once."""
        return Rng(self.next_u64() ^ _GAMMA)


def random_vector(dim: int, rng: Rng, max_num: int = 2) -> Vector:
    return tuple(Fraction(rng.int_between(-max_num, max_num)) for _ in range(dim))


def random_nonzero_vector(dim: int, rng: Rng, max_num: int = 2) -> Vector:
    while True:
        v = random_vector(dim, rng, max_num)
        if any(x != 0 for x in v):
            return v


def random_subspace(ambient: int, count: int, rng: Rng) -> Subspace:
    return span([random_vector(ambient, rng) for _ in range(count)], ambient)


def random_invertible(dim: int, rng: Rng, steps: int | None = None) -> Mat:
    """Product of elementary row operations; always exactly invertible.

    Coefficients are small integers with one rational row scaling, which
    keeps downstream arithmetic exact but compact.
    """
    m = [list(row) for row in Mat.identity(dim).entries]
    if steps is None:
        steps = dim + 3
    for _ in range(steps if dim > 1 else 0):
        i = rng.below(dim)
        j = rng.below(dim)
        if i == j:
            continue
        c = Fraction([-2, -1, 1, 2][rng.below(4)])
        m[i] = [a + c * b for a, b in zip(m[i], m[j])]
    if dim:
        i = rng.below(dim)
        c = rng.nonzero_fraction(2, 2)
        m[i] = [a * c for a in m[i]]
    return Mat(dim, dim, tuple(tuple(r) for r in m))


def random_form(dim: int, rng: Rng) -> SympSpace:
    """Random nondegenerate antisymmetric form, congruent to the standard one."""
    from .symplectic import standard_space

    std = standard_space(dim // 2)
    b = random_invertible(dim, rng)
    return SympSpace(dim, b.transpose() @ std.form @ b)


def transvection(space: SympSpace, u: Vector, c: Fraction) -> Mat:
    """v -> v + c omega(v, u) u, exactly symplectic for every u and c."""
    n = space.dim
    fu = space.form.matvec(u)
    rows = []
    for i in range(n):
        row = [F1 if i == j else F0 for j in range(n)]
        # column j of the correction is c * u_i * (form u)_j
        for j in range(n):
            row[j] += c * u[i] * fu[j]
        rows.append(tuple(row))
    return Mat(n, n, tuple(rows))


def random_symplectic_map(space: SympSpace, rng: Rng, steps: int) -> SympMap:
    """Product of random symplectic transvections; verified before return.

    Directions are sparse integer vectors and most coefficients are integers
    (every fourth may be a half), which keeps entry growth mild while still
    exercising non-integral rationals.
    """
    m = Mat.identity(space.dim)
    for step in range(steps):
        if space.dim == 0:
            break
        u = _sparse_direction(space.dim, rng)
        c = rng.nonzero_fraction(2, 2 if step % 4 == 0 else 1)
        m = transvection(space, u, c) @ m
    out = SympMap(space, space, m)
    if not is_symplectic_map(out):
        raise AssertionError("transvection product failed the symplectic check")
    return out


def _sparse_direction(dim: int, rng: Rng) -> Vector:
    """Integer direction with at most two nonzero slots."""
    v = [F0] * dim
    v[rng.below(dim)] = Fraction(rng.int_between(1, 2))
    if dim > 1 and rng.below(2) == 0:
        v[rng.below(dim)] = Fraction(rng.int_between(-2, 2))
    while all(x == 0 for x in v):
        v[rng.below(dim)] = F1
    return tuple(v)


@dataclass(frozen=True)
class PairDraw:
    """A conjugated normal-form pair with its generating invariants."""

    pair: CoisoPair
    invariants: tuple[int, int, int, int, int]
    conjugator: SympMap


def random_coisotropic_pair(n, rng: Rng, steps: int | None = None) -> PairDraw:
    n = tuple(int(x) for x in n)
    model = normal_form_pair(n)
    if steps is None:
        steps = model.space.dim + 2
    s = random_symplectic_map(model.space, rng, steps)
    pair = CoisoPair(model.space, s.apply_subspace(model.a),
                     s.apply_subspace(model.b))
    return PairDraw(pair, n, s)


@dataclass(frozen=True)
class CanonicalDraw:
    """A conjugated canonical relation with its seed data.

    The relation starts as ker x 0 + 0 x hal + graph(phi) over the model
    normal-form pair, then gets conjugated; invariants and phi0 are the
    ground truth of the construction.
    """

    relation: CanonicalRelation
    invariants: tuple[int, int, int, int, int]
    phi0: Mat
    conjugator: SympMap


def random_canonical_relation(n, rng: Rng, steps: int | None = None,
                              phi: Mat | None = None) -> CanonicalDraw:
    n = tuple(int(x) for x in n)
    if n[3] != n[4]:
        raise LinalgError("canonical relations need matching mu blocks")
    model = normal_form_pair(n)
    space = model.space
    dim = space.dim
    n1, n2, n3, n4, n5 = n
    offsets = []
    off = 0
    for ni in n:
        offsets.append(off)
        off += 2 * ni
    a1_coords = [offsets[2] + t for t in range(2 * n3)] \
        + [offsets[4] + t for t in range(2 * n5)]
    b1_coords = [offsets[2] + t for t in range(2 * n3)] \
        + [offsets[3] + t for t in range(2 * n4)]
    sub_dim = len(a1_coords)
    sub_space = _coordinate_chart_space(space, a1_coords)
    if _coordinate_chart_space(space, b1_coords) != sub_space:
        raise AssertionError("model charts of the symplectic parts disagree")
    if phi is None:
        phi_small = random_symplectic_map(sub_space, rng, sub_dim + 2).matrix
    else:
        if not is_symplectic_map(SympMap(sub_space, sub_space, phi)):
            raise LinalgError("supplied induced map is not symplectic")
        phi_small = phi
    aw = orthogonal(space, model.a)
    bw = orthogonal(space, model.b)
    gens = []
    for v in aw.vectors():
        gens.append(tuple(v) + zero_vector(dim))
    for v in bw.vectors():
        gens.append(zero_vector(dim) + tuple(v))
    for col in range(sub_dim):
        x = [F0] * dim
        x[a1_coords[col]] = F1
        y = [F0] * dim
        for row in range(sub_dim):
            y[b1_coords[row]] = phi_small.entries[row][col]
        gens.append(tuple(x) + tuple(y))
    base = canonical_relation(space, space, span(gens, 2 * dim))
    if steps is None:
        steps = dim + 2
    s = random_symplectic_map(space, rng, steps)
    big = [tuple(s.apply(v[:dim])) + tuple(s.apply(v[dim:]))
           for v in base.rel.space.vectors()]
    conj = canonical_relation(space, space, span(big, 2 * dim))
    return CanonicalDraw(conj, n, phi_small, s)


def _coordinate_chart_space(space: SympSpace, coords) -> SympSpace:
    rows = [[space.form.entries[i][j] for j in coords] for i in coords]
    return SympSpace(len(coords), Mat.from_rows(rows, len(coords))
                     if coords else Mat(0, 0, ()))


@dataclass(frozen=True)
class RelationDraw:
    """A conjugated direct sum of model blocks with its generating signature."""

    relation: Relation
    signature: TowberSignature
    conjugator: Mat


def random_relation_sum(blocks, factors, rng: Rng) -> RelationDraw:
    """Direct sum of towber blocks plus companion graphs, conjugated.

    blocks: iterable of (kind, n) pairs; factors: invariant factor chain
    (ascending-coefficient polynomials, monic, nonzero constant term, each
    dividing the next) for the nonsingular part.
    """
    from .relations import TowberSignature as Sig
    from .relations import zero_relation

    total = zero_relation(0, 0)
    counts = {"tau": {}, "tau_plus": {}, "plus_tau": {}, "plus_tau_plus": {}}
    for kind, n in blocks:
        total = direct_sum(total, towber_block(kind, n))
        counts[kind][n] = counts[kind].get(n, 0) + 1
    for f in factors:
        total = direct_sum(total, graph(companion(f)))
    dim = total.source_dim
    s = random_invertible(dim, rng)
    from .relations import conjugate

    conj = conjugate(s, total)
    sig = Sig(
        tuple(sorted(counts["tau"].items())),
        tuple(sorted(counts["tau_plus"].items())),
        tuple(sorted(counts["plus_tau"].items())),
        tuple(sorted(counts["plus_tau_plus"].items())),
        tuple(factors))
    return RelationDraw(conj, sig, s)


def random_signature_blocks(rng: Rng, max_total: int = 8):
    """Random block multiset plus invariant factors with bounded total dim."""
    blocks = []
    budget = rng.int_between(1, max_total)
    kinds = ("tau", "tau_plus", "plus_tau", "plus_tau_plus")
    n_blocks = rng.int_between(0, 3)
    for _ in range(n_blocks):
        if budget <= 0:
            break
        n = rng.int_between(1, min(3, budget))
        blocks.append((kinds[rng.below(4)], n))
        budget -= n
    factors: list[Poly] = []
    if budget > 0 and rng.below(3) > 0:
        d1 = rng.int_between(1, min(2, budget))
        f1 = _random_nonsingular_poly(rng, d1)
        factors.append(f1)
        budget -= d1
        if budget > d1 and rng.below(2) == 0:
            # second factor is a multiple of the first: keep the chain valid
            g = _random_nonsingular_poly(rng, rng.int_between(1, budget - d1))
            factors.append(pmul(f1, g))
    if not blocks and not factors:
        blocks.append(("tau_plus", max(1, budget)))
    return blocks, tuple(factors)


def _random_nonsingular_poly(rng: Rng, deg: int) -> Poly:
    """Monic polynomial of the given degree with nonzero constant term."""
    while True:
        coeffs = [Fraction(rng.int_between(-2, 2)) for _ in range(deg)] + [F1]
        if coeffs[0] != 0:
            return tuple(coeffs)


def brute_compose_oracle(q: Relation, r: Relation) -> Relation:
    """Composition by direct existential elimination, no shared routing.

    Assembles the matching system over basis coefficients of r and q and
    eliminates it with a self-contained Gaussian pass; only the final
    canonicalization shares code with the library.
    """
    if r.target_dim != q.source_dim:
        raise LinalgError("relations are not composable")
    if r.source_dim + r.target_dim > 12 or q.source_dim + q.target_dim > 12:
        raise LinalgError("oracle is limited to small dimensions")
    r_pairs = r.members()
    q_pairs = q.members()
    nr, nq = len(r_pairs), len(q_pairs)
    ny = r.target_dim
    # rows: for each middle coordinate, sum_i a_i y_i = sum_j b_j y'_j
    system = []
    for t in range(ny):
        row = [r_pairs[i][1][t] for i in range(nr)]
        row += [-q_pairs[j][0][t] for j in range(nq)]
        system.append(row)
    null_basis = _plain_nullspace(system, nr + nq)
    gens = []
    for sol in null_basis:
        x = [F0] * r.source_dim
        z = [F0] * q.target_dim
        for i in range(nr):
            for t in range(r.source_dim):
                x[t] += sol[i] * r_pairs[i][0][t]
        for j in range(nq):
            for t in range(q.target_dim):
                z[t] += sol[nr + j] * q_pairs[j][1][t]
        gens.append(tuple(x) + tuple(z))
    return Relation(r.source_dim, q.target_dim,
                    span(gens, r.source_dim + q.target_dim))


def _plain_nullspace(rows: list[list[Fraction]], width: int) -> list[list[Fraction]]:
    """Self-contained Gaussian elimination nullspace (oracle use only)."""
    m = [row[:] for row in rows]
    pivots = []
    r = 0
    for c in range(width):
        pr = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(width) if c not in pivots]
    out = []
    for c in free:
        v = [F0] * width
        v[c] = F1
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][c]
        out.append(v)
    return out
