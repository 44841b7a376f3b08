"""Exact Gaussian elimination over any of the scalar fields.

Matrices are lists of rows; entries are Fractions, Cyclo or RatFunc values.
Pivoting always takes the first nonzero entry, so every result is
deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import SingularMatrix


def _f(x):
    return Fraction(x) if isinstance(x, int) else x


def rref(rows):
    """Reduced row echelon form. Returns (rows, pivot_columns)."""
    m = [[_f(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(matrix, ncols=None, zero=Fraction(0), one=Fraction(1)):
    """Basis of {x : matrix @ x = 0}; each free variable set to 1 in turn."""
    if not matrix:
        if ncols is None:
            raise ValueError("ncols needed for an empty matrix")
        return [[one if i == j else zero for i in range(ncols)] for j in range(ncols)]
    ncols = len(matrix[0])
    red, pivots = rref(matrix)
    if red:
        zero = red[0][0] - red[0][0]
        one = zero + 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def transpose(m):
    return [list(col) for col in zip(*m)]


def matmul(a, b):
    """Row-sparse product: only nonzero entries of a and b are multiplied."""
    if not a or not b:
        return [[] for _ in a]
    ncols = len(b[0])
    zero = b[0][0] - b[0][0] if ncols else 0
    b_nz = [[(j, y) for j, y in enumerate(r) if y] for r in b]
    out = []
    for row in a:
        acc = [zero] * ncols
        for k, x in enumerate(row):
            if x:
                for j, y in b_nz[k]:
                    acc[j] = acc[j] + x * y
        out.append(acc)
    return out


def _dot(u, v):
    acc = 0
    for x, y in zip(u, v):
        if x and y:
            acc = acc + x * y
    return acc


def matvec(a, v):
    return [_dot(row, v) for row in a]


def identity(n, one=Fraction(1), zero=Fraction(0)):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def det(a):
    n = len(a)
    m = [[_f(x) for x in r] for r in a]
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return m[0][0] - m[0][0] if n else Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d = d * m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def inverse(a):
    n = len(a)
    if any(len(r) != n for r in a):
        raise SingularMatrix("matrix is not square")
    one = _f(a[0][0]) * 0 + 1 if n else Fraction(1)
    zero = one - one
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(a)]
    red, pivots = rref(aug)
    if len(pivots) < n or pivots[n - 1] >= n:
        raise SingularMatrix("matrix is singular", determinant=det(a))
    return [r[n:] for r in red]


def solve(a, b):
    """One solution x of a @ x = b, or None when inconsistent."""
    if not a:
        return []
    ncols = len(a[0])
    aug = [list(r) + [bi] for r, bi in zip(a, b)]
    red, pivots = rref(aug)
    if pivots and pivots[-1] == ncols:
        return None
    zero = _f(b[0]) * 0 if b else Fraction(0)
    x = [zero] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return x


def in_span(vectors, v) -> bool:
    if not any(v):
        return True
    if not vectors:
        return False
    return solve(transpose(vectors), list(v)) is not None


def independent_subset(vectors):
    """Indices of a maximal independent subset, greedily in input order."""
    if not vectors:
        return []
    red, pivots = rref(transpose(vectors))
    return pivots


# ---------------------------------------------------------------------------
# sparse integer echelon form for Q-subspaces (used by the closure fixpoint)


def _clear(vec: dict) -> dict:
    """Scale a sparse Fraction/int vector to a primitive integer vector."""
    den = 1
    for x in vec.values():
        if isinstance(x, Fraction):
            den = den * x.denominator // gcd(den, x.denominator)
    out = {k: int(x * den) for k, x in vec.items() if x}
    g = 0
    for x in out.values():
        g = gcd(g, x)
    if g > 1:
        out = {k: x // g for k, x in out.items()}
    return out


class QEchelon:
    """Incrementally maintained echelon basis of a Q-subspace of Q^N.

    Rows are sparse primitive integer vectors keyed by their pivot (the
    smallest index carrying a nonzero entry); the pivot entry is positive.
    """

    def __init__(self):
        self.rows: dict[int, dict] = {}

    def __len__(self):
        return len(self.rows)

    def _reduce(self, v: dict) -> dict:
        rows = self.rows
        v = dict(v)
        done = {}
        while v:
            p = min(v)
            row = rows.get(p)
            if row is None:
                done[p] = v.pop(p)
                # everything left is > p; keep reducing it but p stays
                continue
            a, b = row[p], v[p]
            g = gcd(a, b)
            a, b = a // g, b // g
            # v <- a*v - b*row kills index p
            if a != 1:
                v = {k: a * x for k, x in v.items()}
                done = {k: a * x for k, x in done.items()}
            for k, x in row.items():
                nv = v.get(k, 0) - b * x
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
        return done

    def reduce(self, vec: dict) -> dict:
        return self._reduce(_clear(vec))

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def insert(self, vec: dict) -> bool:
        """Add vec to the span; True when the dimension grew."""
        r = self.reduce(vec)
        if not r:
            return False
        r = _clear(r)
        p = min(r)
        if r[p] < 0:
            r = {k: -x for k, x in r.items()}
        self.rows[p] = r
        return True
