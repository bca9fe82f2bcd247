"""Exact integer linear algebra: Smith normal form and solution counts mod m."""

from dataclasses import dataclass
from math import gcd


@dataclass(frozen=True)
class SnfResult:
    """U * A * V = D where D is diagonal with the invariant factors on it."""

    U: list
    D: list
    V: list
    factors: tuple

    @property
    def rank(self):
        return sum(1 for d in self.factors if d != 0)


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _copy(A):
    return [[int(x) for x in row] for row in A]


def _snf(A, nrows, ncols, track):
    """In-place diagonalisation of the list-of-lists matrix A.

    Returns (U, V) when ``track`` is set, otherwise (None, None).
    """
    U = _identity(nrows) if track else None
    V = _identity(ncols) if track else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if track:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row[dst] += q * row[src]
        if q == 0:
            return
        rs, rd = A[src], A[dst]
        for c in range(ncols):
            if rs[c]:
                rd[c] += q * rs[c]
        if track:
            us, ud = U[src], U[dst]
            for c in range(nrows):
                if us[c]:
                    ud[c] += q * us[c]

    def add_col(src, dst, q):
        if q == 0:
            return
        for row in A:
            if row[src]:
                row[dst] += q * row[src]
        if track:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        if track:
            U[i] = [-x for x in U[i]]

    t = 0
    while t < min(nrows, ncols):
        # pick the smallest nonzero entry in the remaining block as pivot
        best = None
        for i in range(t, nrows):
            row = A[i]
            for j in range(t, ncols):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, nrows):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // p))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, ncols):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // p))
                    if A[t][j]:
                        done = False
            if done:
                # pivot must divide everything left in the block
                bad = None
                for i in range(t + 1, nrows):
                    row = A[i]
                    for j in range(t + 1, ncols):
                        if row[j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(bad, t, 1)
                continue
            # move the smallest remaining entry of row/column t into the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, nrows):
                v = A[i][t]
                if v and abs(v) < best[0]:
                    best = (abs(v), i, t)
            for j in range(t + 1, ncols):
                v = A[t][j]
                if v and abs(v) < best[0]:
                    best = (abs(v), t, j)
            swap_rows(t, best[1])
            swap_cols(t, best[2])
        if A[t][t] < 0:
            negate_row(t)
        t += 1
    return U, V


def smith_normal_form(A):
    """Smith normal form of an integer matrix with unimodular transforms."""
    A = _copy(A)
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    U, V = _snf(A, nrows, ncols, True)
    factors = tuple(A[i][i] for i in range(min(nrows, ncols)))
    return SnfResult(U=U, D=A, V=V, factors=factors)


def invariant_factors(A):
    """Just the diagonal of the Smith form; cheaper than smith_normal_form."""
    A = _copy(A)
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    _snf(A, nrows, ncols, False)
    return tuple(A[i][i] for i in range(min(nrows, ncols)))


def count_solutions_mod(A, b, m, nvars):
    """Number of x in (Z_m)^nvars with A x = b (mod m)."""
    m = int(m)
    if m == 1:
        return 1
    rows = [[int(x) % m for x in row] for row in A]
    if b is None:
        b = [0] * len(rows)
    b = [int(x) % m for x in b]
    # drop zero rows; an inhomogeneous zero row is inconsistent
    kept, kept_b = [], []
    for row, bi in zip(rows, b):
        if any(row):
            kept.append(row)
            kept_b.append(bi)
        elif bi:
            return 0
    if not kept:
        return m ** nvars
    if nvars == 0:
        return 1 if not any(kept_b) else 0
    if not any(kept_b):
        total = m ** (nvars - min(len(kept), nvars))
        for d in invariant_factors(kept):
            total *= gcd(d, m)
        return total
    snf = smith_normal_form(kept)
    # U A V y = U b with x = V y
    c = [sum(u * bi for u, bi in zip(urow, kept_b)) for urow in snf.U]
    total = 1
    r = len(snf.factors)
    for i in range(len(kept)):
        d = snf.factors[i] if i < r else 0
        g = gcd(d, m)
        if c[i] % g:
            return 0
        if i < nvars:
            total *= g
    return total * m ** max(0, nvars - len(kept))
