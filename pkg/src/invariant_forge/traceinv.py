"""Trace invariants of matrix tuples: cycle-indexed trace products and the
alternating trace polynomial that detects bases of M_n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import linalg
from .errors import ArityMismatch, BudgetExceeded


@dataclass(frozen=True)
class CycleInvariantSpec:
    """A permutation of {1..t} by its cycles, e.g. ((1, 2), (3,))."""

    t: int
    cycles: tuple

    def __post_init__(self):
        flat = sorted(i for c in self.cycles for i in c)
        if flat != list(range(1, self.t + 1)):
            raise ArityMismatch(f"cycles {self.cycles} do not partition 1..{self.t}")

    @classmethod
    def parse(cls, text: str, t: int | None = None):
        """'(1 2)(3)' or '(1,2)(3)'."""
        cycles = []
        for chunk in text.replace(",", " ").split(")"):
            chunk = chunk.strip().lstrip("(")
            if chunk:
                cycles.append(tuple(int(x) for x in chunk.split()))
        if t is None:
            t = sum(len(c) for c in cycles)
        return cls(t, tuple(cycles))


def trace(M):
    acc = 0
    for i in range(len(M)):
        acc = acc + M[i][i]
    return acc


def _word(mats):
    P = mats[0]
    for X in mats[1:]:
        P = linalg.matmul(P, X)
    return P


def procesi_T(spec: CycleInvariantSpec, matrices):
    if len(matrices) != spec.t:
        raise ArityMismatch(f"expected {spec.t} matrices, got {len(matrices)}")
    val = 1
    for cyc in spec.cycles:
        val = val * trace(_word([matrices[i - 1] for i in cyc]))
    return val


def _sign(perm):
    perm = list(perm)
    s = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            s = -s
    return s


def formanek_f(matrices, force: bool = False):
    """sum over sigma of sign(sigma) tr(M_s1) tr(M_s2 M_s3 M_s4) ... (blocks 1, 3, ..., 2n-1)."""
    N = len(matrices)
    n = len(matrices[0]) if matrices else 0
    if N != n * n or n == 0:
        raise ArityMismatch(f"need n^2 matrices of size n x n, got {N} of size {n}")
    if n >= 4 and not force:
        raise BudgetExceeded(f"{N}! terms; pass force=True to evaluate anyway")
    blocks, start = [], 0
    for k in range(n):
        blocks.append((start, start + 2 * k + 1))
        start += 2 * k + 1
    # trace of each ordered word of the needed lengths, memoized by index tuple
    cache = {}

    def tr_word(idx):
        v = cache.get(idx)
        if v is None:
            v = trace(_word([matrices[i] for i in idx]))
            cache[idx] = v
        return v

    total = 0
    for perm in itertools.permutations(range(N)):
        term = 1
        for a, b in blocks:
            term = term * tr_word(perm[a:b])
            if not term:
                break
        if term:
            total = total + (term if _sign(perm) > 0 else -term)
    return total


def monomial_family(X, Y):
    """[X^i Y^j for i, j in 0..n-1], ordered (i, j) lexicographically."""
    n = len(X)
    one = X[0][0] * 0 + 1
    I = linalg.identity(n, one, one - one)
    Xp = [I]
    Yp = [I]
    for _ in range(n - 1):
        Xp.append(linalg.matmul(Xp[-1], X))
        Yp.append(linalg.matmul(Yp[-1], Y))
    return [linalg.matmul(Xp[i], Yp[j]) for i in range(n) for j in range(n)]


def formanek_D(X, Y, force: bool = False):
    if len(X) != len(Y) or any(len(r) != len(X) for r in X) or any(len(r) != len(Y) for r in Y):
        raise ArityMismatch("X and Y must be square of the same size")
    return formanek_f(monomial_family(X, Y), force=force)
