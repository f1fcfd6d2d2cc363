from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from qgkdim.oper import Coeff, Operator, Signature, alpha, beta, chi_word
from qgkdim.scalars import ScalarExpr
from qgkdim.weyl import longest_parts, weyl_group
from qgkdim.witness import (
    IndeterminateError,
    SimWitness,
    alpha_family,
    alpha_family_rank,
    default_radius,
    find_rw,
    ladder_column_formula,
    ladder_target,
    ladder_witness,
    number_power,
    rw_table,
    sim_check,
    suffix_start,
    vandermonde_certificate,
)

q = ScalarExpr.qpow


def omega(family, n):
    return longest_parts(weyl_group(family, n)).letters


# r_w(k) --------------------------------------------------------------------------


def test_find_rw_su2():
    hit = find_rw("A", 1, [1], 1)
    assert (hit.j, hit.C) == (2, q(1, -1)) and hit.ok
    hit = find_rw("A", 1, [1], 2)
    assert (hit.j, hit.C) == (1, ScalarExpr.one())


def test_find_rw_against_dense_vacuum_search():
    # [DERIVED] brute force over j on dense kron matrices at q = 1/2
    M = oracles.dense_pi_word("A", 2, (2, 1))
    (j, C), = oracles.vacuum_columns(M, 1)
    hit = find_rw("A", 2, (2, 1), 1)
    assert hit.j == j and float(hit.C.eval(Fraction(1, 2))) == pytest.approx(C)


@pytest.mark.parametrize("family,n", [("A", 1), ("A", 2), ("A", 3), ("C", 2), ("D", 3)])
def test_rw_table_matches_dense_oracle(family, n):
    table = rw_table(family, n)
    assert table and all(h.ok for h in table)
    for h in table:
        hits = oracles.vacuum_columns(oracles.dense_pi_word(family, n, h.word), h.k)
        assert len(hits) == 1
        assert hits[0][0] == h.j
        assert hits[0][1] == pytest.approx(float(h.C.eval(Fraction(1, 2))))


def test_rw_table_sizes():
    # one row per admissible k for every nonempty suffix; in types C and D the
    # full word (i = 0) has the empty range n+1..n
    assert len(rw_table("A", 3)) == 1 + 2 + 3
    assert len(rw_table("C", 2)) == 2
    assert len(rw_table("D", 3)) == 2 + 4


def test_find_rw_errors():
    with pytest.raises(ValueError):
        suffix_start("A", 2, (2,))
    with pytest.raises(ValueError):
        find_rw("A", 1, [1], 3)


def test_suffix_start():
    assert suffix_start("A", 3, (3, 2, 1)) == 2
    assert suffix_start("A", 3, omega("A", 3)) == 0


# ~ relation ---------------------------------------------------------------------


def test_sim_examples():
    assert sim_check(beta() * alpha(), alpha()) == SimWitness(q(-1), (1,))
    assert sim_check(alpha(), alpha()) == SimWitness(ScalarExpr.one(), (0,))
    assert sim_check(alpha(), beta()) is None


def test_sim_errors():
    with pytest.raises(IndeterminateError):
        sim_check(alpha(), Operator.zero(Signature(0, 1)))
    with pytest.raises(ValueError):
        sim_check(alpha(), Operator.laurent_shift((1,)))
    with pytest.raises(ValueError):
        SimWitness(ScalarExpr.zero(), ())
    with pytest.raises(ValueError):
        number_power(Signature(0, 2), (1,))


def test_default_radius():
    assert default_radius(1) == 6
    assert default_radius(6) == 3
    assert default_radius(20) == 1


@st.composite
def monomials(draw):
    """c q^v (S*)^a q^(uN) S^c on each of two Fock factors, Laurent shift in front."""
    sig = Signature(1, 2)
    a = tuple(draw(st.integers(0, 2)) for _ in range(2))
    c = tuple(draw(st.integers(0, 2)) for _ in range(2))
    u = tuple(draw(st.integers(0, 2)) for _ in range(2))
    g = Coeff(2, {(draw(st.integers(-2, 2)), tuple((x, frozenset()) for x in u)): draw(st.sampled_from([1, -2, Fraction(1, 3)]))})
    return Operator(sig, {((draw(st.integers(-1, 1)),), a, c): g})


def twist(T: Operator, ms, r=1, v=0) -> Operator:
    return (T * number_power(T.signature, ms)).scale(r, v)


@given(monomials())
def test_sim_reflexive(T):
    assert sim_check(T, T, radius=4) == SimWitness(ScalarExpr.one(), (0, 0))


@given(
    monomials(),
    st.tuples(st.integers(0, 1), st.integers(0, 1)),
    st.tuples(st.integers(0, 2), st.integers(0, 2)),
    st.integers(-2, 2),
)
def test_sim_transitive(T, m1, m2, v):
    T2 = twist(T, m2, 2, v)  # T2 ~ T with m2
    T1 = twist(T2, m1, -1)  # T1 ~ T2 with m1
    w12 = sim_check(T1, T2, radius=4)
    w23 = sim_check(T2, T, radius=4)
    w13 = sim_check(T1, T, radius=4)
    assert w12 is not None and w23 is not None and w13 is not None
    assert w12.exponents == m1 and w23.exponents == m2
    assert w13.exponents == tuple(x + y for x, y in zip(m1, m2))
    assert w13.C == w12.C * w23.C


@given(monomials(), st.tuples(st.integers(4, 6), st.integers(0, 1)))
def test_sim_respects_bound(T, ms):
    assert sim_check(twist(T, ms), T, radius=4, bound=3) is None


# alpha family -------------------------------------------------------------------


@pytest.mark.parametrize("d,j,k,rank", [(1, 2, 0, 3), (2, 3, 1, 4), (1, 0, 0, 1)])
def test_alpha_family_examples(d, j, k, rank):
    assert alpha_family_rank(d, j, k) == rank


def test_alpha_family_against_dense_oracle():
    for d in (1, 2):
        for j in (1, 4, 6):
            for k in (0, 3):
                assert alpha_family_rank(d, j, k) == oracles.alpha_family_dense_rank(d, j, k, 2 * j + k + 4)


def test_alpha_family_small_window_is_flagged():
    with pytest.raises(RuntimeError):
        alpha_family_rank(1, 6, 0, radius=1)


def test_alpha_family_validation():
    with pytest.raises(ValueError):
        alpha_family(0, 1, 1)
    assert alpha_family(1, 0, 0)[0] == Operator.identity(Signature(0, 1))


def test_vandermonde_certificate():
    cert = vandermonde_certificate(2, 3, 1)
    assert cert.ok and cert.degrees == (0, 1, 2, 3)
    # [closed form] prod_(p<r) (q^(2dr) - q^(2dp)), here d = 1, j = 1: q^2 - 1
    assert vandermonde_certificate(1, 1, 0).determinant == q(2) - ScalarExpr.one()


# ladder element ----------------------------------------------------------------


def test_ladder_su2():
    res = ladder_witness("A", 1, [1])
    assert (res.row, res.column) == (2, 1)
    assert res.element == Operator.laurent_shift((1,)).tensor(beta())
    assert res.ok and res.witness.exponents == (1,)


@pytest.mark.parametrize("family,n", [("A", 2), ("A", 3), ("C", 2), ("D", 3)])
def test_ladder_on_longest_words(family, n):
    word = omega(family, n)
    res = ladder_witness(family, n, word)
    assert res.ok
    assert res.column == ladder_column_formula(family, n, word)


def test_ladder_column_in_type_d_is_one_lower():
    word = omega("D", 3)
    last = longest_parts(weyl_group("D", 3)).part(3)
    assert ladder_column_formula("D", 3, word) == 6 - len(last) - 1


def test_ladder_negative_control():
    res = ladder_witness("A", 2, omega("A", 2), entry=(1, 1))
    assert not res.ok


def test_ladder_needs_last_part():
    with pytest.raises(ValueError):
        ladder_witness("A", 2, (1,))


def test_ladder_target_shape():
    t = ladder_target(chi_word("A", 1, [1]).signature)
    assert t == Operator.laurent_shift((1,)).tensor(Operator.identity(Signature(0, 1)))
