"""Witnesses for the lower bound: paths r_w(k), the ~ relation, the
alpha_d independence family and the ladder element g_0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .growth import Backend, stable_family_rank
from .oper import Coeff, Operator, Signature, alpha, alpha_star, chi_word, pi_word
from .scalars import ScalarExpr
from .weyl import WeylFamily, longest_parts, parts_decompose, weyl_group


class PathError(RuntimeError):
    """No or several fixed-vector columns; the lemma guarantees exactly one."""


class IndeterminateError(ValueError):
    pass


# --------------------------------------------------------------------------- #
# r_w(k)
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class PathHit:
    family: str
    n: int
    i: int
    word: tuple[int, ...]
    k: int
    j: int
    C: ScalarExpr
    clauses: tuple[bool, bool, bool]

    @property
    def ok(self) -> bool:
        return all(self.clauses)


def _vacuum_image(x: Operator) -> dict:
    sig = x.signature
    return x.apply(((0,) * sig.laurent, (0,) * sig.fock))


def _vacuum_scalar(x: Operator) -> ScalarExpr | None:
    """C when x(e_0 (x) ... (x) e_0) = C e_0 (x) ... with C != 0, else None."""
    img = _vacuum_image(x)
    sig = x.signature
    vac = ((0,) * sig.laurent, (0,) * sig.fock)
    if set(img) == {vac}:
        return img[vac]
    return None


def suffix_start(family: str, n: int, word: Sequence[int]) -> int:
    """The i with word = w_(i+1) ... w_n for the parts of the longest element."""
    parts = longest_parts(weyl_group(family, n)).parts
    word = tuple(word)
    for i in range(n + 1):
        if tuple(itertools.chain.from_iterable(p.letters for p in parts[i:])) == word:
            return i
    raise ValueError(f"{word} is not a suffix product of parts of the longest element")


def find_rw(family: str, n: int, word: Sequence[int], k: int, i: int | None = None) -> PathHit:
    """The unique column j with pi_w(u^k_j) fixing the vacuum up to C != 0.

    ``i`` defaults to the suffix position of ``word`` among the parts of the
    longest element; it only sets the row range used by the clause checks.

    >>> hit = find_rw("A", 1, [1], 1)
    >>> hit.j, hit.C
    (2, -q)
    """
    fam = WeylFamily(family, n)
    word = tuple(word)
    if i is None:
        i = suffix_start(family, n, word)
    M = pi_word(family, n, word)
    N = fam.corep_dim
    if not 1 <= k <= N:
        raise ValueError(f"row {k} out of range 1..{N}")
    hits = []
    for j in range(1, N + 1):
        C = _vacuum_scalar(M.entry(k, j))
        if C is not None:
            hits.append((j, C))
    if len(hits) != 1:
        raise PathError(f"{family}_{n} word {word} row {k}: {len(hits)} fixed-vacuum columns")
    j, C = hits[0]
    rows = [r for r in range(fam.lower_index(i), fam.upper_index(i) + 1) if r != k]
    c1 = all(not _vacuum_image(M.entry(r, j)) for r in rows)
    star = M.entry(k, j).adjoint()
    img = _vacuum_image(star)
    vac = ((), (0,) * M.signature.fock)
    c2 = set(img) == {vac} and img[vac] == C
    c3 = all(not _vacuum_image(M.entry(r, j).adjoint()) for r in rows)
    return PathHit(family, n, i, word, k, j, C, (c1, c2, c3))


def rw_table(family: str, n: int) -> list[PathHit]:
    """find_rw for every suffix product of parts and every admissible row."""
    fam = WeylFamily(family, n)
    parts = longest_parts(weyl_group(family, n)).parts
    out = []
    for i in range(n):
        word = tuple(itertools.chain.from_iterable(p.letters for p in parts[i:]))
        if not word:
            continue
        for k in range(fam.lower_index(i), fam.upper_index(i) + 1):
            out.append(find_rw(family, n, word, k, i))
    return out


# --------------------------------------------------------------------------- #
# the ~ relation
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class SimWitness:
    C: ScalarExpr
    exponents: tuple[int, ...]

    def __post_init__(self):
        if self.C.is_zero():
            raise ValueError("witness constant must be nonzero")


def number_power(sig: Signature, exponents: Sequence[int]) -> Operator:
    """1 (x) ... (x) q^(m_1 N) (x) ... (x) q^(m_l N) on the given signature."""
    exponents = tuple(exponents)
    if len(exponents) != sig.fock:
        raise ValueError("one exponent per Fock factor")
    g = Coeff(sig.fock, {(0, tuple((m, frozenset()) for m in exponents)): 1})
    return Operator(sig, {((0,) * sig.laurent, (0,) * sig.fock, (0,) * sig.fock): g})


def _ratio(x: ScalarExpr, y: ScalarExpr) -> tuple[int, object] | None:
    """(a, c) with x = c q^a y when that holds for the leading terms."""
    if x.is_zero() or y.is_zero():
        return None
    ax, atx, cx = x.sorted_terms()[0]
    ay, aty, cy = y.sorted_terms()[0]
    if atx != aty:
        return None
    return ax - ay, cx / cy


def _window_columns(x: Operator, radius: int) -> dict:
    sig = x.signature
    lz = (0,) * sig.laurent
    return {pin: x.apply((lz, pin)) for pin in itertools.product(range(radius + 1), repeat=sig.fock)}


def default_radius(fock: int, cells: int = 4096, cap: int = 6) -> int:
    """Largest radius r <= cap with (r+1)^fock <= cells (at least 1)."""
    r = 1
    while r < cap and (r + 2) ** fock <= cells:
        r += 1
    return r


def sim_check(T: Operator, Tp: Operator, radius: int | None = None, bound: int = 3) -> SimWitness | None:
    """Find C and m with T = C T' (1 (x) q^(m_1 N) (x) ...), entries of m <= bound.

    On each input e_p the two columns must agree up to C q^(m.p).  Exponents
    are read off pairs of inputs differing in one Fock coordinate; factors
    with no such pair are searched over 0..bound.  The candidate is then
    checked on every window column.  Laurent factors are translation
    invariant, so Laurent index 0 suffices.

    >>> from qgkdim.oper import beta
    >>> sim_check(beta() * alpha(), alpha())
    SimWitness(C=q^-1, exponents=(1,))
    """
    if T.signature != Tp.signature:
        raise ValueError("signatures differ")
    sig = T.signature
    if radius is None:
        radius = default_radius(sig.fock)
    t_cols, p_cols = _window_columns(T, radius), _window_columns(Tp, radius)
    if not any(p_cols.values()):
        raise IndeterminateError("T' vanishes on the window")
    ratios = {}
    for pin, col in p_cols.items():
        if set(col) != set(t_cols[pin]):
            return None
        if col:
            key = min(col)
            r = _ratio(t_cols[pin][key], col[key])
            if r is None:
                return None
            ratios[pin] = r
    solved: list[set[int] | None] = [None] * sig.fock
    for pin, (a, _) in ratios.items():
        for f in range(sig.fock):
            nxt = pin[:f] + (pin[f] + 1,) + pin[f + 1 :]
            if nxt in ratios:
                step = ratios[nxt][0] - a
                solved[f] = (solved[f] or set()) | {step}
    choices = []
    for f in range(sig.fock):
        if solved[f] is None:
            choices.append(range(bound + 1))
        elif len(solved[f]) == 1 and 0 <= next(iter(solved[f])) <= bound:
            choices.append(tuple(solved[f]))
        else:
            return None
    for ms in itertools.product(*choices):
        cand = Tp * number_power(sig, ms) if sig.fock else Tp
        c_cols = _window_columns(cand, radius)
        pin0 = next(p for p in c_cols if c_cols[p])
        key = min(c_cols[pin0])
        r = _ratio(t_cols[pin0][key], c_cols[pin0][key])
        if r is None:
            continue
        C = ScalarExpr.qpow(r[0], r[1])
        if all(t_cols[p][key2] == C * v for p, col in c_cols.items() for key2, v in col.items()):
            return SimWitness(C, tuple(ms))
    return None


# --------------------------------------------------------------------------- #
# independence of alpha_d^i (alpha_d*)^(i+k)
# --------------------------------------------------------------------------- #


def alpha_family(d: int, j: int, k: int) -> list[Operator]:
    if d < 1 or j < 0 or k < 0:
        raise ValueError("need d >= 1 and j, k >= 0")
    return [alpha(d) ** i * alpha_star(d) ** (i + k) for i in range(j + 1)]


def alpha_family_rank(d: int, j: int, k: int, radius: int | None = None, backend: Backend = Backend()) -> int:
    """Rank of {alpha_d^i (alpha_d*)^(i+k) : 0 <= i <= j}; the expected value is j + 1."""
    ops = alpha_family(d, j, k)
    if radius is None:
        radius = 2 * j + k + 4
    rank, stable = stable_family_rank(ops, radius, backend)
    if not stable:
        raise RuntimeError(f"alpha family rank unstable at radius {radius}")
    return rank


@dataclass(frozen=True)
class VandermondeCertificate:
    degrees: tuple[int, ...]
    determinant: ScalarExpr
    factorized: bool

    @property
    def ok(self) -> bool:
        return self.factorized and not self.determinant.is_zero() and list(self.degrees) == sorted(set(self.degrees))


def _diagonal_poly(x: Operator, d: int) -> dict[int, ScalarExpr] | None:
    """Coefficients c_t(q) with x = sum_t c_t (q^(2dN))^t, or None when x is not of this form."""
    terms = x.terms
    key = ((), (0,), (0,))
    if set(terms) != {key}:
        return None
    out: dict[int, ScalarExpr] = {}
    for (v, ((u, roots),)), r in terms[key].terms.items():
        if roots or u % (2 * d):
            return None
        t = u // (2 * d)
        out[t] = out.get(t, ScalarExpr.zero()) + ScalarExpr.qpow(v, r)
    return {t: c for t, c in out.items() if c}


def vandermonde_certificate(d: int, j: int, k: int) -> VandermondeCertificate:
    """Exact independence proof for the alpha family.

    D_i = alpha_d^i (alpha_d*)^i is a polynomial of degree exactly i in
    x = q^(2dN), so D_0..D_j are triangular in the monomials x^t; they are
    independent as functions on the nodes x_p = q^(2dp), p = 0..j, because the
    Vandermonde determinant prod_(p<r) (q^(2dr) - q^(2dp)) is nonzero.
    Finally T_i = D_i (alpha_d*)^k and (alpha_d*)^k is injective.
    """
    degrees = []
    factorized = True
    for i in range(j + 1):
        D = alpha(d) ** i * alpha_star(d) ** i
        poly = _diagonal_poly(D, d)
        if poly is None:
            factorized = False
            degrees.append(-1)
            continue
        degrees.append(max(poly, default=-1))
        if k and D * alpha_star(d) ** k != alpha(d) ** i * alpha_star(d) ** (i + k):
            factorized = False
    det = ScalarExpr.one()
    for p, r in itertools.combinations(range(j + 1), 2):
        det = det * (ScalarExpr.qpow(2 * d * r) - ScalarExpr.qpow(2 * d * p))
    return VandermondeCertificate(tuple(degrees), det, factorized)


# --------------------------------------------------------------------------- #
# the ladder element g_0
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class LadderResult:
    row: int
    column: int
    element: Operator
    witness: SimWitness | None

    @property
    def ok(self) -> bool:
        return self.witness is not None


def ladder_target(sig: Signature) -> Operator:
    """S* on the first Laurent factor, identity everywhere else."""
    z = [0] * sig.laurent
    z[0] = 1
    shift = Operator.laurent_shift(z)
    return shift.tensor(Operator.identity(Signature(0, sig.fock, sig.fock_d)))


def ladder_witness(
    family: str, n: int, word: Sequence[int], radius: int | None = None, bound: int = 3, entry: tuple[int, int] | None = None
) -> LadderResult:
    """Build g_0 = chi_w(u^N_j) and test g_0 ~ S* (x) 1 (x) ... (x) 1.

    The column j is the path endpoint r_w(N).  For types A and C this is
    N - l(w_n); in type D the last part moves through one extra index
    because s_n shifts two positions, and j = N - l(w_n) - 1.
    ``entry`` overrides the (row, column) pair, which is how the negative
    control is run.
    """
    word = tuple(word)
    fam = WeylFamily(family, n)
    N = fam.corep_dim
    if entry is None:
        last = parts_decompose(weyl_group(family, n), word).part(n)
        if not last:
            raise ValueError("the n-th part of the word is empty")
        entry = (N, find_rw(family, n, word, N, i=0).j)
    M = chi_word(family, n, word)
    g0 = M.entry(*entry)
    if not g0:
        return LadderResult(*entry, g0, None)
    target = ladder_target(g0.signature)
    return LadderResult(entry[0], entry[1], g0, sim_check(g0, target, radius, bound))


def ladder_column_formula(family: str, n: int, word: Sequence[int]) -> int:
    """Closed form of the ladder column, N - l(w_n) (minus one more in type D)."""
    last = parts_decompose(weyl_group(family, n), tuple(word)).part(n)
    N = WeylFamily(family, n).corep_dim
    return N - len(last) - (1 if family == "D" and n in last else 0)
