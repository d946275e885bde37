import pytest
from hypothesis import given, settings

from ncourant import NCError, alphabet, jordan, kronecker, mu, sn_bracket, standard_double, tensor, two_loops
from ncourant.bisymplectic import canonical_omega
from ncourant.courant import build_standard
from ncourant.polyvec import (
    GeneratorBracket,
    assoc_bracket,
    canonical_P,
    check_double_poisson,
    ddp_defect,
    evaluate,
    zero_bracket,
)

import oracle as O
from strategies import elements

SJ = standard_double(jordan())
K2 = standard_double(kronecker(2))
A = alphabet(SJ)
P = alphabet(SJ, "poly")
a, ah, ast, ahs = (A.letter(n) for n in ("a", "a^", "a*", "a^*"))
e1 = A.e(1)
ee = tensor(e1, e1)


def test_schouten_examples():
    assert sn_bracket(P.letter("D(a)"), P.letter("a")) == tensor(P.e(1), P.e(1))
    assert sn_bracket(P.letter("D(a)"), P.letter("D(a^)")) == 0
    KP = alphabet(K2, "poly")
    # <<D(a), a b*>> = (e2 (x) e1) b* by Leibniz
    val = sn_bracket(KP.letter("D(a)"), KP.word("a", "b*"))
    assert val == tensor(KP.e(2), KP.letter("b*"))


def test_mu_letter_table():
    br = mu(canonical_P(SJ))
    assert br(a, ast) == -ee
    assert br(ast, a) == ee
    assert br(a, a) == 0
    assert br(ah, ahs) == ee
    assert br(ahs, ah) == ee


def test_mu_agrees_with_canonical_bracket():
    bs = canonical_omega(SJ)
    br = mu(canonical_P(SJ))
    for x in SJ.arrow_names:
        for y in SJ.arrow_names:
            assert br(A.letter(x), A.letter(y)) == bs.bracket(A.letter(x), A.letter(y))


def test_mu_rejects_wrong_degree():
    with pytest.raises(NCError) as exc:
        mu(P.letter("D(a)"))
    assert exc.value.code == "invalid-polyvector-degree"


def test_assoc_examples():
    br = canonical_omega(SJ).bracket
    assert assoc_bracket(br, a, ast) == -e1
    assert assoc_bracket(br, e1, a * ast) == 0
    S = build_standard(jordan()).S
    assert assoc_bracket(br, S, ahs) == ast


def test_double_poisson_suites():
    assert check_double_poisson(canonical_omega(SJ).bracket, 2, 2).passed
    assert check_double_poisson(zero_bracket(SJ, 2), 2, 2).passed


def test_sign_flipped_mu_fails_skew():
    br = canonical_omega(SJ).bracket
    table = dict(br.table)
    ia, ias = A.letter_id("a"), A.letter_id("a*")
    table[(ias, ia)] = {k: -v for k, v in table[(ias, ia)].items()}
    bad = GeneratorBracket(A, 2, table, name="flipped", complete=False)
    rep = check_double_poisson(bad, 2, 2, suites=("skew",))
    assert not rep.passed
    assert rep.counterexamples


def test_skew_completion_detects_inconsistency():
    ia, ias = A.letter_id("a"), A.letter_id("a*")
    k = (A.trivial(0), A.trivial(0))
    with pytest.raises(NCError):
        GeneratorBracket(A, 2, {(ia, ias): {k: 1}, (ias, ia): {k: 1}})


def test_canonical_P_is_differential_double_poisson():
    for q in (SJ, K2, standard_double(two_loops())):
        assert ddp_defect(canonical_P(q)) == 0


def test_evaluate_polyvector_on_paths():
    Da = P.letter("D(a)")
    assert evaluate(Da, a * a) == tensor(e1, a) + tensor(a, e1)


@settings(max_examples=60)
@given(elements(SJ, max_len=3, max_terms=2), elements(SJ, max_len=3, max_terms=2))
def test_bracket_matches_oracle(x, y):
    br = canonical_omega(SJ).bracket
    L = O.Letters(SJ)
    table = {(A.names[c], A.names[d]): {tuple(O._word(A, k) for k in ks): v for ks, v in t.items()}
             for (c, d), t in br.table.items()}
    assert O.from_tensor(br(x, y)) == O.bracket(L, table, 2, O.from_element(x), O.from_element(y))


@settings(max_examples=60)
@given(elements(K2, max_len=3, max_terms=1), elements(K2, max_len=3, max_terms=1))
def test_skew_symmetry(x, y):
    br = canonical_omega(K2).bracket
    (gx,), (gy,) = x.grades(), y.grades()
    sign = -1 if ((gx[0] - 2) * (gy[0] - 2)) % 2 else 1
    assert br(x, y) == -(br(y, x).flip().scale(sign))
