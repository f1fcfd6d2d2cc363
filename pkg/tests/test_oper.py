import json
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from qgkdim.oper import (
    Coeff,
    Operator,
    Signature,
    SignatureError,
    Window,
    all_entries,
    alpha,
    alpha_star,
    beta,
    chi_e,
    chi_word,
    convolve,
    factored_entry,
    flip_sign,
    fock_shift,
    identity_matrix,
    op_adjoint,
    op_apply,
    op_compose,
    pi_simple,
    pi_word,
    psi_corep,
    unitarity_defect,
    unitarity_residuals,
)
from qgkdim.scalars import ScalarExpr

q = ScalarExpr.qpow
HALF = Fraction(1, 2)
ONE_FOCK = Signature(0, 1)


def vec(x: Operator, p: int, z=()):
    return op_apply(x, (z, (p,)))


def evaluate_column(col: dict, q0=HALF) -> dict:
    return {k: float(v.eval(q0)) for k, v in col.items()}


# random operators ------------------------------------------------------------

ATOMS = [alpha(), alpha_star(), beta(), fock_shift(1, 0), fock_shift(0, 1), Operator.identity(ONE_FOCK)]


@st.composite
def fock_words(draw):
    out = Operator.identity(ONE_FOCK)
    for idx in draw(st.lists(st.integers(0, len(ATOMS) - 1), max_size=3)):
        out = out * ATOMS[idx]
    return out


@st.composite
def operators(draw):
    """Sums of up to two scaled tensor words on signature (1, 2)."""
    total = None
    for _ in range(draw(st.integers(1, 2))):
        term = Operator.laurent_shift((draw(st.integers(-2, 2)),))
        term = term.tensor(draw(fock_words())).tensor(draw(fock_words()))
        term = term.scale(draw(st.sampled_from([1, -1, 2, Fraction(1, 3)])), draw(st.integers(-2, 2)))
        total = term if total is None else total + term
    return total


def compose_columns(x: Operator, y: Operator, index):
    out: dict = {}
    for key, c in op_apply(y, index).items():
        for key2, c2 in op_apply(x, key).items():
            out[key2] = out.get(key2, ScalarExpr.zero()) + c * c2
    return {k: v for k, v in out.items() if v}


# examples ----------------------------------------------------------------------


def test_alpha_kills_vacuum():
    assert vec(alpha(), 0) == {}


def test_beta_diagonal():
    for p in range(5):
        assert vec(beta(), p) == {((), (p,)): q(p)}


def test_laurent_shift_lowers():
    S = Operator.laurent_shift((-1,))
    assert op_apply(S, ((3,), ())) == {((2,), ()): ScalarExpr.one()}


def test_q_commutation():
    assert (beta() * alpha()).scale(1, 1) == alpha() * beta()


def test_alpha_commutator():
    b2 = beta() * beta()
    assert alpha() * alpha_star() - alpha_star() * alpha() == b2 - b2.scale(1, 2)


def test_unit_relation():
    # alpha* alpha + beta^2 = 1
    assert alpha_star() * alpha() + beta() * beta() == Operator.identity(ONE_FOCK)


def test_identity_composition():
    x = alpha() * beta() + alpha_star()
    one = Operator.identity(ONE_FOCK)
    assert op_compose(one, x) == x == op_compose(x, one)


def test_adjoint_of_alpha_normal_form():
    (key, g), = alpha_star().terms.items()
    assert key == ((), (1,), (0,))
    assert g == Coeff.root(1, 0, 1, 1)
    assert op_adjoint(alpha()) == alpha_star()


def test_adjoint_of_laurent_shift():
    assert Operator.laurent_shift((-1,)).adjoint() == Operator.laurent_shift((1,))


def test_signature_mismatch():
    with pytest.raises(SignatureError):
        alpha() * Operator.laurent_shift((1,))
    with pytest.raises(SignatureError):
        op_apply(alpha(), ((), (0, 0)))
    with pytest.raises(ValueError):
        op_apply(alpha(), ((), (-1,)))


def test_psi_entries():
    M = psi_corep(1)
    assert vec(M.entry(1, 1), 3) == {((), (2,)): ScalarExpr.atom(3)}
    assert vec(M.entry(1, 2), 3) == {((), (3,)): q(4, -1)}
    assert vec(M.entry(2, 1), 3) == {((), (3,)): q(3)}
    assert vec(M.entry(2, 2), 3) == {((), (4,)): ScalarExpr.atom(4)}
    with pytest.raises(ValueError):
        psi_corep(0)


def test_psi_d2_unitary():
    assert unitarity_defect(psi_corep(2), Window(6, 14, 6)) <= 1e-12


def test_psi_unitary_and_negative_control():
    M = psi_corep(1)
    assert unitarity_defect(M, Window(6, 14, 6)) <= 1e-12
    assert unitarity_defect(flip_sign(M, 1, 2), Window(6, 14, 6)) > 0.1
    assert unitarity_residuals(M) == []


def test_pi_simple_examples():
    assert pi_simple("A", 1, 1) == psi_corep(1)
    M = pi_simple("A", 2, 1)
    assert M.entry(3, 3) == Operator.identity(ONE_FOCK)
    assert not M.entry(1, 3)
    C = pi_simple("C", 2, 2)
    assert vec(C.entry(2, 3), 2) == {((), (2,)): q(6, -1)}
    with pytest.raises(ValueError):
        pi_simple("A", 2, 3)


def test_chi_e_examples():
    A2 = chi_e("A", 2)
    assert A2.entry(1, 1) == Operator.laurent_shift((-1, -1))
    assert A2.entry(2, 2) == Operator.laurent_shift((0, 1))
    assert A2.entry(3, 3) == Operator.laurent_shift((1, 0))
    C2 = chi_e("C", 2)
    assert C2.entry(4, 4) == Operator.laurent_shift((1, 0))
    assert C2.entry(1, 1) == Operator.laurent_shift((-1, 0))


def test_convolve_identity_prefix():
    B = psi_corep(1)
    I = identity_matrix(2, Signature(0, 0))
    assert convolve(I, B) == B
    with pytest.raises(ValueError):
        convolve(identity_matrix(3, Signature(0, 0)), B)


def test_convolve_two_blocks():
    M = convolve(psi_corep(1), psi_corep(1))
    a, off = alpha(), psi_corep(1).entry(1, 2)
    assert M.entry(1, 1) == a.tensor(a) + off.tensor(beta())


def test_chi_word_examples():
    assert chi_word("A", 2, []) == chi_e("A", 2)
    M = chi_word("A", 1, [1])
    assert M.entry(2, 1) == Operator.laurent_shift((1,)).tensor(beta())
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        bad = chi_word("A", 1, [1, 1])
    assert not bad.reduced and caught


def test_factored_entry_matches_chi_word():
    M = chi_word("C", 2, [1, 2])
    for i in range(1, 5):
        for j in range(1, 5):
            assert M.entry(i, j) == factored_entry("C", 2, [1, 2], i, j)


def test_dump_and_json():
    text = alpha().dump()
    assert text.startswith("term: z=[] a=[0] c=[1] coeff=")
    data = json.loads(psi_corep(1).dumps())
    assert data["size"] == 2 and data["signature"]["fock"] == 1
    assert data["entries"][0][0] == [text]


def test_all_entries_closes_under_adjoint():
    ents = all_entries(psi_corep(1))
    for x in ents:
        assert x.adjoint() in ents


def test_window_validation():
    with pytest.raises(ValueError):
        Window(2, 14, 6)


def test_unitarity_requires_fock():
    with pytest.raises(ValueError):
        unitarity_defect(chi_e("A", 1))


@pytest.mark.parametrize("family,n,word", [("A", 2, (1, 2, 1)), ("C", 2, (2, 1)), ("D", 3, (3, 2))])
def test_pi_word_against_dense_oracle(family, n, word):
    # [DERIVED] dense kron construction from the doublet table
    K, q0 = 4, 0.5
    M = pi_word(family, n, word)
    D = oracles.dense_pi_word(family, n, word, K=K, q=q0)
    ell = len(word)
    for i in range(1, M.size + 1):
        for j in range(1, M.size + 1):
            X = D[i - 1][j - 1]
            for pin in np.ndindex(*(2,) * ell):  # inputs far from the truncation edge
                col = evaluate_column(op_apply(M.entry(i, j), ((), pin)))
                flat_in = np.ravel_multi_index(pin, (K,) * ell)
                dense = X[:, flat_in]
                ours = np.zeros_like(dense)
                for (_, pout), v in col.items():
                    ours[np.ravel_multi_index(pout, (K,) * ell)] = v
                assert np.allclose(ours, dense, atol=1e-14)


@pytest.mark.parametrize("family,n", [("A", 2), ("C", 2)])
def test_longest_chi_is_unitary(family, n):
    from qgkdim.weyl import longest_parts, weyl_group

    M = chi_word(family, n, longest_parts(weyl_group(family, n)).letters)
    assert unitarity_defect(M, Window(6, 14, 6)) <= 1e-10


# properties --------------------------------------------------------------------


@settings(max_examples=200)
@given(operators())
def test_adjoint_involution(x):
    assert x.adjoint().adjoint() == x


@settings(max_examples=200)
@given(operators(), operators(), operators())
def test_associativity(x, y, z):
    assert (x * y) * z == x * (y * z)


@given(operators(), operators())
def test_adjoint_antihomomorphism(x, y):
    assert (x * y).adjoint() == y.adjoint() * x.adjoint()


@given(operators(), operators(), st.tuples(st.integers(-2, 2), st.integers(0, 4), st.integers(0, 4)))
def test_column_consistency(x, y, idx):
    index = ((idx[0],), (idx[1], idx[2]))
    assert op_apply(x * y, index) == compose_columns(x, y, index)


@given(operators(), operators())
def test_distributive(x, y):
    z = alpha().tensor(beta())
    z = Operator.laurent_shift((1,)).tensor(z)
    assert (x + y) * z == x * z + y * z


@given(operators())
def test_adjoint_is_transpose_on_window(x):
    # <x e_a, e_b> = <e_a, x* e_b> for real scalars
    lz = (0,)
    for a in [(0, 0), (1, 2), (3, 1)]:
        col = op_apply(x, (lz, a))
        for (lout, pout), v in col.items():
            back = op_apply(x.adjoint(), (lout, pout))
            assert back.get((lz, a)) == v
