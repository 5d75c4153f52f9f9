"""Exact univariate polynomials over the rationals.

Polynomials are tuples of Fractions in ascending degree with no trailing
zeros; the zero polynomial is the empty tuple.  The module provides the
Euclidean arithmetic needed to drive a Smith normal form over Q[x], which is
how similarity invariants (invariant factors of xI - T) are computed.
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import F0, F1, LinalgError, Mat, frac

Poly = tuple[Fraction, ...]

PZERO: Poly = ()
PONE: Poly = (F1,)
PX: Poly = (F0, F1)


def poly(coeffs) -> Poly:
    """Normalize a coefficient sequence (ascending) into a Poly."""
    cs = [frac(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def pdeg(p: Poly) -> int:
    return len(p) - 1


def padd(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return poly([(p[i] if i < len(p) else F0) + (q[i] if i < len(q) else F0)
                 for i in range(n)])


def pneg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def psub(p: Poly, q: Poly) -> Poly:
    return padd(p, pneg(q))


def pmul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return PZERO
    out = [F0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly(out)


def pscale(c: Fraction, p: Poly) -> Poly:
    return poly([c * a for a in p])


def pdivmod(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    """Euclidean division p = quot * q + rem with deg rem < deg q."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    dq = pdeg(q)
    lead = q[-1]
    quot = [F0] * max(0, len(p) - dq)
    while len(rem) - 1 >= dq and rem:
        c = rem[-1] / lead
        k = len(rem) - 1 - dq
        quot[k] = c
        for i, b in enumerate(q):
            rem[k + i] -= c * b
        while rem and rem[-1] == 0:
            rem.pop()
    return poly(quot), poly(rem)


def pmonic(p: Poly) -> Poly:
    if not p:
        return PZERO
    return pscale(1 / p[-1], p)


def pgcd(p: Poly, q: Poly) -> Poly:
    while q:
        _, r = pdivmod(p, q)
        p, q = q, r
    return pmonic(p)


def pdivides(p: Poly, q: Poly) -> bool:
    """Whether p divides q exactly (zero divides only zero)."""
    if not p:
        return not q
    return not pdivmod(q, p)[1]


def peval(p: Poly, x) -> Fraction:
    x = frac(x)
    acc = F0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_str(p: Poly, var: str = "x") -> str:
    if not p:
        return "0"
    terms = []
    for i, c in enumerate(p):
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append(f"{c}*{var}" if c != 1 else var)
        else:
            terms.append(f"{c}*{var}^{i}" if c != 1 else f"{var}^{i}")
    return " + ".join(terms)


def smith_invariant_factors(grid: list[list[Poly]]) -> list[Poly]:
    """Monic diagonal of the Smith normal form of a polynomial matrix.

    Standard pivot strategy: repeatedly move a minimal-degree nonzero entry
    into the pivot slot, clear its row and column by Euclidean division, and
    fold in any entry the pivot does not divide.  Returns all diagonal
    entries (units included) in divisibility order.
    """
    work = [row[:] for row in grid]
    nrows = len(work)
    ncols = len(work[0]) if nrows else 0
    diag: list[Poly] = []
    k = 0
    while k < min(nrows, ncols):
        pos = None
        best = -1
        for i in range(k, nrows):
            for j in range(k, ncols):
                if work[i][j]:
                    d = pdeg(work[i][j])
                    if pos is None or d < best:
                        pos, best = (i, j), d
        if pos is None:
            break
        while True:
            i0, j0 = pos
            if i0 != k:
                work[k], work[i0] = work[i0], work[k]
            if j0 != k:
                for row in work:
                    row[k], row[j0] = row[j0], row[k]
            dirty = False
            for i in range(k + 1, nrows):
                if work[i][k]:
                    q, r = pdivmod(work[i][k], work[k][k])
                    work[i] = [psub(a, pmul(q, b)) for a, b in zip(work[i], work[k])]
                    if r:
                        dirty = True
            for j in range(k + 1, ncols):
                if work[k][j]:
                    q, r = pdivmod(work[k][j], work[k][k])
                    for row in work:
                        row[j] = psub(row[j], pmul(q, row[k]))
                    if r:
                        dirty = True
            if dirty:
                pos = _min_entry(work, k, nrows, ncols)
                continue
            offender = None
            for i in range(k + 1, nrows):
                for j in range(k + 1, ncols):
                    if work[i][j] and not pdivides(work[k][k], work[i][j]):
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            work[k] = [padd(a, b) for a, b in zip(work[k], work[offender])]
            pos = _min_entry(work, k, nrows, ncols)
        diag.append(pmonic(work[k][k]))
        k += 1
    while len(diag) < min(nrows, ncols):
        diag.append(PZERO)
    return diag


def _min_entry(work, k, nrows, ncols):
    pos = None
    best = -1
    for i in range(k, nrows):
        for j in range(k, ncols):
            if work[i][j]:
                d = pdeg(work[i][j])
                if pos is None or d < best:
                    pos, best = (i, j), d
    return pos


def invariant_factors_of_map(t: Mat) -> tuple[Poly, ...]:
    """Nonunit invariant factors of xI - t, in divisibility order.

    These determine t up to GL-conjugacy (rational canonical form).
    """
    if not t.is_square():
        raise LinalgError("similarity invariants need a square matrix")
    n = t.rows
    grid = [[poly([-t.entries[i][j]] if i != j else [-t.entries[i][j], F1])
             for j in range(n)] for i in range(n)]
    diag = smith_invariant_factors(grid)
    factors = [d for d in diag if pdeg(d) >= 1]
    for a, b in zip(factors, factors[1:]):
        if not pdivides(a, b):
            raise AssertionError("invariant factor chain violates divisibility")
    return tuple(factors)


def companion(p: Poly) -> Mat:
    """Companion matrix of a monic polynomial."""
    p = pmonic(p)
    n = pdeg(p)
    if n < 1:
        raise LinalgError("companion matrix needs degree >= 1")
    rows = []
    for i in range(n):
        row = [F0] * n
        if i > 0:
            row[i - 1] = F1
        row[n - 1] = -p[i]
        rows.append(tuple(row))
    return Mat(n, n, tuple(rows))
