"""GKdim bookkeeping for quotient spaces G_q / K_q^{S,L}.

A closed subgroup L of the torus T^m is described by its annihilator lattice
Lambda in Z^m (the characters trivial on L).  The character group of L is
then Z^m / Lambda, whose free rank k is what enters 2 l(w^S) + k.  All of it
reduces to a Smith normal form U A V = D.

>>> lattice_rank(TorusSubgroup(2, ((1, -1),))).k
1
>>> gkdim_quotient("A", 2, {1}).value
5
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .weyl import WeylFamily, longest_coset_rep, weyl_group

Matrix = list[list[int]]


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


@dataclass(frozen=True)
class SmithForm:
    """U A V = D with U, V unimodular and d_1 | d_2 | ... on the diagonal."""

    U: Matrix
    D: Matrix
    V: Matrix
    V_inv: Matrix

    @property
    def invariant_factors(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0)) if self.D[i][i]]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def smith_normal_form(rows: Sequence[Sequence[int]], ncols: int) -> SmithForm:
    """Smith normal form of an r x ncols integer matrix with both transforms.

    >>> snf = smith_normal_form([[2, 4], [6, 8]], 2)
    >>> snf.invariant_factors
    [2, 4]
    """
    A = [list(map(int, r)) for r in rows]
    if any(len(r) != ncols for r in A):
        raise ValueError("ragged lattice rows")
    r = len(A)
    U, V, Vi = _identity(r), _identity(ncols), _identity(ncols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (A, V):
            for row in M:
                row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(src, dst, c):  # row dst += c * row src
        A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, c):  # col dst += c * col src
        for M in (A, V):
            for row in M:
                row[dst] += c * row[src]
        Vi[src] = [x - c * y for x, y in zip(Vi[src], Vi[dst])]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while t < min(r, ncols):
        nonzero = [(abs(A[i][j]), i, j) for i in range(t, r) for j in range(t, ncols) if A[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        done = False
        while not done:
            done = True
            for i in range(t + 1, r):
                q = A[i][t] // A[t][t]
                if q:
                    add_row(t, i, -q)
                if A[i][t]:
                    swap_rows(t, i)
                    done = False
            for j in range(t + 1, ncols):
                q = A[t][j] // A[t][t]
                if q:
                    add_col(t, j, -q)
                if A[t][j]:
                    swap_cols(t, j)
                    done = False
            if done:
                # divisibility: fold in any entry not divisible by the pivot
                for i in range(t + 1, r):
                    if any(A[i][j] % A[t][t] for j in range(t + 1, ncols)):
                        add_row(i, t, 1)
                        done = False
                        break
        if A[t][t] < 0:
            negate_row(t)
        t += 1
    return SmithForm(U, A, V, Vi)


@dataclass(frozen=True)
class TorusSubgroup:
    """L in T^m through its annihilator lattice (generator rows in Z^m)."""

    m: int
    rows: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("ambient dimension must be nonnegative")
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        if any(len(r) != self.m for r in rows):
            raise ValueError(f"lattice rows must have length {self.m}")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def full(cls, m: int) -> "TorusSubgroup":
        return cls(m, ())

    @property
    def k(self) -> int:
        return lattice_rank(self).k


def parse_lattice(text: str, m: int | None = None) -> TorusSubgroup:
    """Rows of integers separated by semicolons, e.g. "1 0; 0 2"."""
    rows = [tuple(int(x) for x in chunk.replace(",", " ").split()) for chunk in text.split(";") if chunk.strip()]
    if m is None:
        if not rows:
            raise ValueError("ambient dimension needed for an empty lattice")
        m = len(rows[0])
    return TorusSubgroup(m, tuple(rows))


@dataclass(frozen=True)
class LatticeRank:
    k: int
    invariant_factors: tuple[int, ...]
    torsion: tuple[int, ...]
    smith: SmithForm


def lattice_rank(L: TorusSubgroup) -> LatticeRank:
    """k = m - rank(Lambda), with the Smith data and torsion of Z^m / Lambda."""
    snf = smith_normal_form(L.rows, L.m)
    inv = tuple(snf.invariant_factors)
    return LatticeRank(L.m - len(inv), inv, tuple(d for d in inv if d > 1), snf)


@dataclass(frozen=True)
class TorusEmbedding:
    """t in T^k -> (t^B[0], ..., t^B[m-1]) and monomials h_j with h_j(B) = e_j."""

    B: tuple[tuple[int, ...], ...]  # m x k
    h: tuple[tuple[int, ...], ...]  # k x m
    torsion: tuple[int, ...]

    @property
    def torsion_free(self) -> bool:
        return not self.torsion


def torus_embedding(L: TorusSubgroup) -> TorusEmbedding:
    """Basis of the free part of Z^m / Lambda, as the map Z^m -> Z^k and its section.

    >>> torus_embedding(TorusSubgroup(2, ((1, -1),))).B
    ((1,), (1,))
    """
    info = lattice_rank(L)
    snf, rank = info.smith, len(info.invariant_factors)
    cols = [[snf.V[i][j] for i in range(L.m)] for j in range(rank, L.m)]
    hs = [list(snf.V_inv[j]) for j in range(rank, L.m)]
    for col, h in zip(cols, hs):
        lead = next((x for x in col if x), 0)
        if lead < 0:
            col[:] = [-x for x in col]
            h[:] = [-x for x in h]
    B = tuple(tuple(col[i] for col in cols) for i in range(L.m))
    return TorusEmbedding(B, tuple(tuple(h) for h in hs), info.torsion)


# --------------------------------------------------------------------------- #
# quotient GKdim
# --------------------------------------------------------------------------- #


def standard_subset(family: str, n: int, m: int) -> frozenset[int]:
    """S_(n-m+1): {1..n-m} in type A, {m+1..n} in type C."""
    if not 1 <= m <= n:
        raise ValueError(f"m must lie in 1..{n}")
    if family == "A":
        return frozenset(range(1, n - m + 1))
    if family == "C":
        return frozenset(range(m + 1, n + 1))
    raise ValueError("standard quotient families exist for types A and C only")


def homogeneous_dim(family: str, n: int, m: int) -> int:
    """dim SU(n+1)/SU(n+1-m) or dim SP(2n)/SP(2n-2m)."""
    G = WeylFamily(family, n).manifold_dim
    r = n - m
    if family == "A":
        return G - (r * r + 2 * r)
    return G - (2 * r * r + r)


@dataclass(frozen=True)
class QuotientReport:
    family: str
    n: int
    S: tuple[int, ...]
    coset_length: int
    k: int
    torsion: tuple[int, ...]
    proven: bool

    @property
    def value(self) -> int:
        return 2 * self.coset_length + self.k


def gkdim_quotient(family: str, n: int, S: Iterable[int], L: TorusSubgroup | str | None = None) -> QuotientReport:
    """2 l(w^S) + k for G_q / K_q^{S,L}; L defaults to the full torus T^(n - |S|)."""
    fam = WeylFamily(family, n)
    S = tuple(sorted(set(S)))
    if any(not 1 <= i <= n for i in S):
        raise ValueError(f"S must be a subset of 1..{n}")
    m = n - len(S)
    if L is None:
        L = TorusSubgroup.full(m)
    elif isinstance(L, str):
        L = parse_lattice(L, m)
    if L.m != m:
        raise ValueError(f"L must live in a torus of dimension n - |S| = {m}, got {L.m}")
    length = len(longest_coset_rep(weyl_group(fam.family, n), S))
    info = lattice_rank(L)
    proven = fam.family in ("A", "C") and m >= 1 and frozenset(S) == standard_subset(fam.family, n, m)
    return QuotientReport(fam.family, n, S, length, info.k, info.torsion, proven)
