"""Property suites run by ``qgkdim verify``.

Each suite returns a list of :class:`Check` records.  ``smoke`` keeps every
suite to a few seconds; ``desk`` runs the full desk-scale grids.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

from .growth import Backend, GeneratorSet, WindowPolicy, degree_detect, gkdim_report, span_growth, stable_family_rank
from .oper import (
    Window,
    all_entries,
    alpha,
    alpha_star,
    beta,
    chi_word,
    factored_entry,
    flip_sign,
    unitarity_defect,
)
from .quotient import gkdim_quotient, homogeneous_dim, standard_subset
from .weyl import MIN_RANK, WeylFamily, is_reduced, longest_element, longest_parts, weyl_group
from .witness import (
    alpha_family_rank,
    find_rw,
    ladder_witness,
    rw_table,
    sim_check,
    vandermonde_certificate,
)

SUITES = ("weyl", "oper", "growth", "witness", "quotient")
LEVELS = ("smoke", "desk")


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    detail: str
    seconds: float

    def to_json(self) -> dict:
        return asdict(self)


def _run(suite: str, name: str, fn: Callable[[], tuple[bool, str]]) -> Check:
    t = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crashing check is a failing check
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return Check(suite, name, bool(ok), detail, round(time.perf_counter() - t, 3))


# --------------------------------------------------------------------------- #
# reusable check bodies (also used by the acceptance tests)
# --------------------------------------------------------------------------- #

LENGTH_RANKS = {"A": (1, 2, 3, 4), "C": (2, 3), "D": (2, 3, 4)}
UNITARITY_CASES = (("A", 1), ("A", 2), ("A", 3), ("C", 2), ("D", 3))


def length_table(ranks=LENGTH_RANKS) -> list[tuple[str, int, int, int, int, int]]:
    """(family, n, enumerated l, formula l, 2l+n, manifold dim)."""
    rows = []
    for family, ns in ranks.items():
        for n in ns:
            fam = WeylFamily(family, n)
            length = len(longest_element(weyl_group(family, n)))
            rows.append((family, n, length, fam.longest_length_formula, 2 * length + n, fam.manifold_dim))
    return rows


def longest_chi(family: str, n: int):
    return chi_word(family, n, longest_parts(weyl_group(family, n)).letters)


def unitarity_pair(family: str, n: int, window: Window = Window(6, 14, 6)) -> tuple[float, float]:
    """(defect of chi_omega, defect after flipping the sign of one nonzero entry)."""
    M = longest_chi(family, n)
    i, j, _ = next(M.nonzero_entries())
    return unitarity_defect(M, window), unitarity_defect(flip_sign(M, i, j), window)


def reduced_words(family: str, n: int, max_len: int) -> list[tuple[int, ...]]:
    group = weyl_group(family, n)
    out = []
    for length in range(1, max_len + 1):
        for word in itertools.product(range(1, n + 1), repeat=length):
            if all(a != b for a, b in zip(word, word[1:])) and is_reduced(group, word):
                out.append(word)
    return out


def factorization_mismatches(family: str, n: int, word) -> int:
    M = chi_word(family, n, word)
    bad = 0
    for i in range(1, M.size + 1):
        for j in range(1, M.size + 1):
            if M.entry(i, j) != factored_entry(family, n, word, i, j):
                bad += 1
    return bad


def laurent_generators() -> GeneratorSet:
    from .oper import Operator

    return GeneratorSet.build([Operator.laurent_shift((1,)), Operator.laurent_shift((-1,))], name="laurent")


def pqt_generators() -> GeneratorSet:
    return GeneratorSet.build([alpha(), alpha_star(), beta()], name="pqt")


def alpha_d_generators(d: int) -> GeneratorSet:
    return GeneratorSet.build([alpha(d), alpha_star(d), beta(d)], name=f"alpha-{d}")


def chi_generators(family: str, n: int, word) -> GeneratorSet:
    return GeneratorSet.build(all_entries(chi_word(family, n, word)), name=f"chi-{family}{n}")


def lower_family_rank(m: int, radius: int | None = None, backend: Backend = Backend()) -> tuple[int, bool]:
    """Rank of {(alpha*)^a alpha^b : a + b <= m}."""
    ops = [alpha_star() ** a * alpha() ** b for a in range(m + 1) for b in range(m + 1 - a)]
    return stable_family_rank(ops, radius if radius is not None else 2 * m + 2, backend)


# --------------------------------------------------------------------------- #
# suites
# --------------------------------------------------------------------------- #


def suite_weyl(level: str) -> list[Check]:
    out = []

    def lengths():
        rows = length_table()
        bad = [r for r in rows if r[2] != r[3] or r[4] != r[5]]
        return not bad, f"{len(rows)} ranks, mismatches {bad}"

    def orders():
        top = 3 if level == "smoke" else 4
        bad = []
        for fam in "ACD":
            for n in range(MIN_RANK[fam], top + 1):
                g = weyl_group(fam, n)
                if g.order() != WeylFamily(fam, n).order_formula:
                    bad.append((fam, n))
        return not bad, f"mismatches {bad}"

    def parts():
        bad = []
        for fam in "ACD":
            for n in range(MIN_RANK[fam], 4 if level == "smoke" else 5):
                g = weyl_group(fam, n)
                w0 = longest_element(g)
                P = longest_parts(g)
                if g.element(P.letters) != g.element(w0.letters) or not is_reduced(g, P.letters):
                    bad.append((fam, n))
        return not bad, f"mismatches {bad}"

    out.append(_run("weyl", "longest lengths and 2l+n = dim G", lengths))
    out.append(_run("weyl", "group orders", orders))
    out.append(_run("weyl", "parts decomposition of the longest element", parts))
    return out


def suite_oper(level: str) -> list[Check]:
    cases = (("A", 1), ("A", 2), ("C", 2)) if level == "smoke" else UNITARITY_CASES
    out = []
    for family, n in cases:

        def body(family=family, n=n):
            good, bad = unitarity_pair(family, n)
            return good <= 1e-10 and bad > 1e-2, f"defect {good:.3g}, flipped control {bad:.3g}"

        out.append(_run("oper", f"unitarity {family}{n}", body))

    def factorization():
        ranks = [("A", 1), ("A", 2), ("C", 2)] if level == "smoke" else [("A", 1), ("A", 2), ("A", 3), ("C", 2), ("C", 3), ("D", 3)]
        max_len = 3 if level == "smoke" else 4
        total = bad = 0
        for family, n in ranks:
            for w in reduced_words(family, n, max_len):
                total += 1
                bad += factorization_mismatches(family, n, w) > 0
        return bad == 0, f"{total} words, {bad} with mismatching entries"

    out.append(_run("oper", "chi_w(u^i_j) = chi_e(u^i_i) (x) pi_w(u^i_j)", factorization))
    return out


def suite_growth(level: str, backend: Backend = Backend()) -> list[Check]:
    out = []

    def laurent():
        s = span_growth(laurent_generators(), 20, backend=backend)
        ok = s.dims == [2 * m + 1 for m in range(1, 21)] and degree_detect(s).degree == 1
        return ok, f"d(20) = {s.dims[-1]}"

    def pqt():
        m_max = 6 if level == "smoke" else 12
        s = span_growth(pqt_generators(), m_max, WindowPolicy(fock_cap=6), backend)
        ok = s.all_stable and all(d <= (m + 1) ** 2 for m, d in zip(range(1, m_max + 1), s.dims))
        deg = degree_detect(s).degree
        return ok and deg == 2, f"d = {s.dims}, degree {deg}"

    def lower():
        m_max = 4 if level == "smoke" else 8
        bad = [m for m in range(1, m_max + 1) if lower_family_rank(m, backend=backend) != ((m + 1) * (m + 2) // 2, True)]
        return not bad, f"m <= {m_max}, failures {bad}"

    def su2():
        m_max = 6 if level == "smoke" else 10
        s = span_growth(chi_generators("A", 1, (1,)), m_max, WindowPolicy(fock_cap=6), backend)
        deg = degree_detect(s).degree
        return s.all_stable and deg == 3, f"d = {s.dims}, degree {deg}"

    def agreement():
        numeric = Backend("numeric", q0=Fraction(1, 2))
        exact = Backend("multipoint")
        bad = []
        for name, gens in (("pqt", pqt_generators()), ("su2", chi_generators("A", 1, (1,)))):
            a = span_growth(gens, 6, WindowPolicy(fock_cap=6), numeric).dims
            b = span_growth(gens, 6, WindowPolicy(fock_cap=6), exact).dims
            if a != b:
                bad.append(name)
        return not bad, f"disagreements {bad}"

    out.append(_run("growth", "Laurent d(m) = 2m+1", laurent))
    out.append(_run("growth", "P_q(T) d(m) <= (m+1)^2, degree 2", pqt))
    out.append(_run("growth", "lower family rank (m+1)(m+2)/2", lower))
    out.append(_run("growth", "SU_q(2) degree 3", su2))
    out.append(_run("growth", "numeric and exact backends agree", agreement))

    def report():
        bad = [(f, n) for f in "ACD" for n in range(MIN_RANK[f], 7) if not gkdim_report(f, n).match]
        return not bad, f"mismatches {bad}"

    out.append(_run("growth", "gkdim_report matches manifold dimension", report))
    return out


def suite_witness(level: str) -> list[Check]:
    out = []

    def rw():
        cases = [("A", 1), ("A", 2), ("C", 2)] if level == "smoke" else [("A", 1), ("A", 2), ("A", 3), ("C", 2), ("D", 3)]
        total = bad = 0
        for family, n in cases:
            for hit in rw_table(family, n):
                total += 1
                bad += not hit.ok
        ex = find_rw("A", 1, (1,), 1), find_rw("A", 1, (1,), 2)
        ok = bad == 0 and (ex[0].j, str(ex[0].C), ex[1].j, str(ex[1].C)) == (2, "-q", 1, "1")
        return ok, f"{total} rows, {bad} failing clauses"

    def sim():
        a = sim_check(beta() * alpha(), alpha())
        b = sim_check(alpha(), alpha())
        c = sim_check(alpha(), beta())
        ok = a is not None and str(a.C) == "q^-1" and a.exponents == (1,) and b is not None and b.exponents == (0,) and c is None
        return ok, f"{a}, {b}, {c}"

    def alpha_grid():
        js = range(3) if level == "smoke" else range(7)
        ks = range(2) if level == "smoke" else range(4)
        bad = []
        for d in (1, 2):
            for j in js:
                for k in ks:
                    if alpha_family_rank(d, j, k) != j + 1 or not vandermonde_certificate(d, j, k).ok:
                        bad.append((d, j, k))
        return not bad, f"failures {bad}"

    def ladders():
        cases = [("A", 1), ("A", 2)] if level == "smoke" else [("A", 1), ("A", 2), ("A", 3), ("C", 2), ("C", 3), ("D", 3), ("D", 4)]
        bad = []
        for family, n in cases:
            w = longest_parts(weyl_group(family, n)).letters
            if not ladder_witness(family, n, w).ok or ladder_witness(family, n, w, entry=(1, 1)).ok:
                bad.append((family, n))
        return not bad, f"failures {bad}"

    out.append(_run("witness", "r_w(k) unique with clauses (1)-(3)", rw))
    out.append(_run("witness", "sim_check examples", sim))
    out.append(_run("witness", "alpha_d family independence", alpha_grid))
    out.append(_run("witness", "ladder element g_0 ~ S* (x) 1", ladders))
    return out


def suite_quotient(level: str) -> list[Check]:
    def examples():
        got = (
            gkdim_quotient("A", 2, {1}).value,
            gkdim_quotient("C", 2, {2}).value,
            gkdim_quotient("A", 2, set()).value,
        )
        return got == (5, 7, 8), f"values {got}"

    def families():
        bad = []
        for family in "AC":
            for n in range(MIN_RANK[family], 5):
                for m in range(1, n + 1):
                    rep = gkdim_quotient(family, n, standard_subset(family, n, m))
                    if rep.value != homogeneous_dim(family, n, m) or not rep.proven:
                        bad.append((family, n, m))
        return not bad, f"mismatches {bad}"

    return [
        _run("quotient", "quotient values 5, 7, 8", examples),
        _run("quotient", "2l(w^S)+k = dim G - dim K", families),
    ]


def run_suite(suite: str, level: str = "smoke", backend: Backend = Backend()) -> list[Check]:
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    table = {
        "weyl": suite_weyl,
        "oper": suite_oper,
        "growth": lambda lv: suite_growth(lv, backend),
        "witness": suite_witness,
        "quotient": suite_quotient,
    }
    names = SUITES if suite == "all" else (suite,)
    if any(name not in table for name in names):
        raise ValueError(f"unknown suite {suite!r}")
    out = []
    for name in names:
        out.extend(table[name](level))
    return out
