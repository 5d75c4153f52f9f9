"""Exact dense linear algebra over arbitrary-precision rationals.

Everything in this package is built on top of the three value types defined
here: rational scalars (``fractions.Fraction``), immutable row-major matrices
(``Mat``) and canonically represented subspaces (``Subspace``).  All values
are immutable and all operations are pure functions, so results are safe to
share between threads and identical inputs always produce identical outputs.

A ``Subspace`` stores the reduced row echelon basis of its row span with zero
rows dropped, which makes set equality of subspaces coincide with ``==`` on
the stored representation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Scalar = Fraction

F0 = Fraction(0)
F1 = Fraction(1)

Vector = tuple[Fraction, ...]


class LinalgError(ValueError):
    """Raised on dimension mismatches and violated preconditions."""


def frac(x) -> Fraction:
    """Coerce ints/strings/Fractions to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise LinalgError("floating point values are not accepted")
    return Fraction(x)


def vec(entries: Iterable) -> Vector:
    return tuple(frac(x) for x in entries)


def unit_vector(i: int, n: int) -> Vector:
    return tuple(F1 if j == i else F0 for j in range(n))


def zero_vector(n: int) -> Vector:
    return (F0,) * n


def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c: Fraction, v: Vector) -> Vector:
    return tuple(c * a for a in v)


def is_zero_vector(v: Vector) -> bool:
    return all(a == 0 for a in v)


@dataclass(frozen=True)
class Mat:
    """Immutable row-major matrix of exact rationals."""

    rows: int
    cols: int
    entries: tuple[Vector, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows:
            raise LinalgError("row count mismatch")
        for row in self.entries:
            if len(row) != self.cols:
                raise LinalgError("column count mismatch")

    @staticmethod
    def from_rows(rows: Sequence[Sequence], cols: int | None = None) -> "Mat":
        grid = tuple(vec(r) for r in rows)
        if cols is None:
            if not grid:
                raise LinalgError("cannot infer width of an empty matrix")
            cols = len(grid[0])
        return Mat(len(grid), cols, grid)

    @staticmethod
    def zeros(rows: int, cols: int) -> "Mat":
        return Mat(rows, cols, tuple(zero_vector(cols) for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "Mat":
        return Mat(n, n, tuple(unit_vector(i, n) for i in range(n)))

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "Mat":
        return Mat(self.cols, self.rows,
                   tuple(self.col(j) for j in range(self.cols)))

    @property
    def T(self) -> "Mat":
        return self.transpose()

    def __add__(self, other: "Mat") -> "Mat":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise LinalgError("shape mismatch in addition")
        return Mat(self.rows, self.cols,
                   tuple(vec_add(a, b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def __neg__(self) -> "Mat":
        return Mat(self.rows, self.cols,
                   tuple(vec_scale(-F1, r) for r in self.entries))

    def scale(self, c) -> "Mat":
        c = frac(c)
        return Mat(self.rows, self.cols,
                   tuple(vec_scale(c, r) for r in self.entries))

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise LinalgError("shape mismatch in product")
        cols = [other.col(j) for j in range(other.cols)]
        grid = tuple(
            tuple(sum((a * b for a, b in zip(row, col)), F0) for col in cols)
            for row in self.entries)
        return Mat(self.rows, other.cols, grid)

    def matvec(self, v: Vector) -> Vector:
        if len(v) != self.cols:
            raise LinalgError("shape mismatch in matrix-vector product")
        out = []
        for row in self.entries:
            acc = F0
            for a, b in zip(row, v):
                if a and b:
                    acc += a * b
            out.append(acc)
        return tuple(out)

    def is_zero(self) -> bool:
        return all(is_zero_vector(r) for r in self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(str(x) for x in r) for r in self.entries) + "]"


def hcat(a: Mat, b: Mat) -> Mat:
    if a.rows != b.rows:
        raise LinalgError("row mismatch in horizontal concatenation")
    return Mat(a.rows, a.cols + b.cols,
               tuple(ra + rb for ra, rb in zip(a.entries, b.entries)))


def vcat(a: Mat, b: Mat) -> Mat:
    if a.cols != b.cols:
        raise LinalgError("column mismatch in vertical concatenation")
    return Mat(a.rows + b.rows, a.cols, a.entries + b.entries)


def block_diag(blocks: Sequence[Mat]) -> Mat:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    grid = []
    r_off = c_off = 0
    for b in blocks:
        for row in b.entries:
            grid.append(zero_vector(c_off) + row + zero_vector(cols - c_off - b.cols))
        r_off += b.rows
        c_off += b.cols
    return Mat(rows, cols, tuple(grid))


def _int_normalize(row) -> list[int]:
    """Clear denominators and divide by the content; exact integer row."""
    den = 1
    for x in row:
        d = x.denominator
        if d != 1:
            den = den * d // gcd(den, d)
    ints = [x.numerator * (den // x.denominator) for x in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _rref_rows(rows: list[list[Fraction]], cols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form via fraction-free integer elimination.

    Rows are scaled to coprime integers, eliminated by cross-multiplication
    with a gcd reduction after every combination (which keeps the entries
    small), and divided by their pivots only at the very end.
    """
    nrows = len(rows)
    work = [_int_normalize(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, nrows):
            if work[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        p = work[r][c]
        for i in range(nrows):
            f = work[i][c]
            if i == r or not f:
                continue
            base = work[i]
            new = [a * p - b * f for a, b in zip(base, work[r])]
            g = 0
            for v in new:
                g = gcd(g, v)
            if g > 1:
                new = [v // g for v in new]
            work[i] = new
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    out: list[list[Fraction]] = []
    for idx, c in enumerate(pivots):
        p = work[idx][c]
        out.append([Fraction(v, p) for v in work[idx]])
    zero = [F0] * cols
    while len(out) < nrows:
        out.append(list(zero))
    return out, pivots


def rref(m: Mat) -> Mat:
    """Unique reduced row echelon form of m (same shape, zero rows kept)."""
    rows = [list(r) for r in m.entries]
    rows, _ = _rref_rows(rows, m.cols)
    return Mat(m.rows, m.cols, tuple(tuple(r) for r in rows))


def rank(m: Mat) -> int:
    rows = [list(r) for r in m.entries]
    _, pivots = _rref_rows(rows, m.cols)
    return len(pivots)


def inverse(m: Mat) -> Mat:
    """Exact inverse; raises LinalgError when m is singular."""
    if not m.is_square():
        raise LinalgError("inverse of a non-square matrix")
    n = m.rows
    aug = [list(r) + list(unit_vector(i, n)) for i, r in enumerate(m.entries)]
    aug, pivots = _rref_rows(aug, 2 * n)
    if len(pivots) != n or pivots != list(range(n)):
        raise LinalgError("matrix is singular")
    return Mat(n, n, tuple(tuple(r[n:]) for r in aug))


def solve(m: Mat, b: Vector) -> Vector | None:
    """One exact solution of m x = b (free variables set to 0), or None."""
    if len(b) != m.rows:
        raise LinalgError("shape mismatch in solve")
    aug = [list(r) + [x] for r, x in zip(m.entries, b)]
    aug, pivots = _rref_rows(aug, m.cols + 1)
    if m.cols in pivots:
        return None
    x = [F0] * m.cols
    for r, c in enumerate(pivots):
        x[c] = aug[r][m.cols]
    return tuple(x)


def solve_matrix(m: Mat, b: Mat) -> Mat | None:
    """Solve m X = b columnwise; None if any column is inconsistent."""
    cols = []
    for j in range(b.cols):
        x = solve(m, b.col(j))
        if x is None:
            return None
        cols.append(x)
    return Mat(b.cols, m.cols, tuple(cols)).transpose()


@dataclass(frozen=True)
class Subspace:
    """Linear subspace in canonical (RREF, pivot-sorted, no zero rows) form.

    Two Subspace values describe the same set of vectors exactly when they
    compare equal, so canonical outputs of all higher-level constructions
    are deterministic.
    """

    ambient_dim: int
    basis: Mat

    def __post_init__(self):
        if self.basis.cols != self.ambient_dim:
            raise LinalgError("basis width must equal ambient dimension")
        if not (0 <= self.basis.rows <= self.ambient_dim):
            raise LinalgError("basis row count out of range")

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> tuple[Vector, ...]:
        return self.basis.entries

    def is_zero(self) -> bool:
        return self.dim == 0


def span(vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
    """Subspace spanned by the given vectors, in canonical form."""
    rows = [list(vec(v)) for v in vectors]
    for r in rows:
        if len(r) != ambient_dim:
            raise LinalgError("vector length must equal ambient dimension")
    rows, pivots = _rref_rows(rows, ambient_dim)
    grid = tuple(tuple(r) for r in rows[: len(pivots)])
    return Subspace(ambient_dim, Mat(len(pivots), ambient_dim, grid))


def zero_subspace(ambient_dim: int) -> Subspace:
    return Subspace(ambient_dim, Mat(0, ambient_dim, ()))


def full_subspace(ambient_dim: int) -> Subspace:
    return Subspace(ambient_dim, Mat.identity(ambient_dim))


def kernel(m: Mat) -> Subspace:
    """Null space {x : m x = 0} of m, canonically represented."""
    rows = [list(r) for r in m.entries]
    rows, pivots = _rref_rows(rows, m.cols)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    gens = []
    for c in free:
        v = [F0] * m.cols
        v[c] = F1
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][c]
        gens.append(v)
    return span(gens, m.cols)


def _check_same_ambient(s1: Subspace, s2: Subspace):
    if s1.ambient_dim != s2.ambient_dim:
        raise LinalgError("ambient dimension mismatch")


def sum_spaces(s1: Subspace, s2: Subspace) -> Subspace:
    _check_same_ambient(s1, s2)
    return span(s1.vectors() + s2.vectors(), s1.ambient_dim)


def eliminate_block(rows: list, cols: int, cut: int) -> list:
    """Row-reduce and return the tails (columns past cut) of the rows whose
    leading entry lies beyond cut, i.e. a basis of rowspace cap (0 (+) tail)."""
    reduced, pivots = _rref_rows(rows, cols)
    return [row[cut:] for row, piv in zip(reduced, pivots) if piv >= cut]


def intersect(s1: Subspace, s2: Subspace) -> Subspace:
    """Exact intersection via the Zassenhaus double-block elimination."""
    _check_same_ambient(s1, s2)
    n = s1.ambient_dim
    if s1.is_zero() or s2.is_zero():
        return zero_subspace(n)
    rows = [list(v) + list(v) for v in s1.vectors()]
    rows += [list(v) + [F0] * n for v in s2.vectors()]
    return span(eliminate_block(rows, 2 * n, n), n)


def contains(s: Subspace, v: Sequence) -> bool:
    """Membership test against the canonical basis (no elimination needed)."""
    w = list(vec(v))
    if len(w) != s.ambient_dim:
        raise LinalgError("vector length must equal ambient dimension")
    for row in s.basis.entries:
        pivot = next(j for j, x in enumerate(row) if x != 0)
        if w[pivot] != 0:
            c = w[pivot]
            w = [a - c * b for a, b in zip(w, row)]
    return all(x == 0 for x in w)


def contains_space(outer: Subspace, inner: Subspace) -> bool:
    return all(contains(outer, v) for v in inner.vectors())


def complement(inner: Subspace, outer: Subspace) -> Subspace:
    """Deterministic complement C with inner (+) C = outer.

    Greedy completion: walk the canonical basis of outer in order and keep
    every vector that enlarges the span accumulated so far on top of inner.
    When outer is the full space the candidates are exactly the standard
    coordinate vectors in index order.
    """
    _check_same_ambient(inner, outer)
    if not contains_space(outer, inner):
        raise LinalgError("inner is not contained in outer")
    acc = inner
    chosen: list[Vector] = []
    for row in outer.vectors():
        if not contains(acc, row):
            chosen.append(row)
            acc = span(acc.vectors() + (row,), inner.ambient_dim)
    return span(chosen, inner.ambient_dim)


def apply_to_subspace(m: Mat, s: Subspace) -> Subspace:
    """Image of s under the linear map m (rows of s hit by m)."""
    if m.cols != s.ambient_dim:
        raise LinalgError("map width must equal ambient dimension")
    return span([m.matvec(v) for v in s.vectors()], m.rows)


def project_coords(s: Subspace, coords: Sequence[int], ambient: int) -> Subspace:
    """Image of s under the coordinate projection onto the listed positions."""
    gens = [tuple(v[c] for c in coords) for v in s.vectors()]
    return span(gens, ambient)


def embed_coords(s: Subspace, positions: Sequence[int], ambient: int) -> Subspace:
    """Inclusion of s into a larger space along the listed coordinate slots."""
    gens = []
    for v in s.vectors():
        w = [F0] * ambient
        for x, p in zip(v, positions):
            w[p] = x
        gens.append(w)
    return span(gens, ambient)


def direct_sum_subspace(s1: Subspace, s2: Subspace) -> Subspace:
    """s1 x s2 inside the concatenated ambient space."""
    n1, n2 = s1.ambient_dim, s2.ambient_dim
    gens = [v + zero_vector(n2) for v in s1.vectors()]
    gens += [zero_vector(n1) + v for v in s2.vectors()]
    return span(gens, n1 + n2)


def coords_in_basis(basis: Mat, v: Sequence) -> Vector:
    """Coordinates of v with respect to the rows of basis; raises if outside."""
    x = solve(basis.transpose(), vec(v))
    if x is None:
        raise LinalgError("vector is not in the span of the basis")
    return x
