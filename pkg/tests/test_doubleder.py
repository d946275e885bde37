import pytest
from hypothesis import given, settings

from ncourant import NCError, Tensor, alphabet, jordan, kronecker, standard_double, tensor, univ_d
from ncourant.bisymplectic import canonical_omega
from ncourant.courant import build_standard
from ncourant.doubleder import (
    DoubleDer,
    coord_der,
    contract,
    contract_tensor,
    from_polyvec,
    lie,
    reduced_contract,
    reduced_lie,
)

import oracle as O
from strategies import elements

SJ = standard_double(jordan())
K2 = standard_double(kronecker(2))
A = alphabet(SJ)
F = alphabet(SJ, "form")
a, ah, ast = A.letter("a"), A.letter("a^"), A.letter("a*")
e1 = A.e(1)
da, dast = F.letter("d(a)"), F.letter("d(a*)")


def test_coord_der_examples():
    Da = coord_der(SJ, "a")
    assert Da(a) == tensor(e1, e1)
    assert Da(ah) == 0
    assert Da(e1) == 0
    KA = alphabet(K2)
    Db = coord_der(K2, "b")
    assert Db(KA.letter("b")) == tensor(KA.e(2), KA.e(1))


def test_apply_examples():
    assert coord_der(SJ, "a")(a * a) == tensor(e1, a) + tensor(a, e1)
    assert coord_der(SJ, "a^")(ast * ah) == tensor(ast, e1)
    assert coord_der(SJ, "a")(A.one()) == 0


def test_value_typing_is_checked():
    with pytest.raises(NCError):
        DoubleDer(SJ, 0, {"a": tensor(ah, e1)})


def test_contract_examples():
    Da = coord_der(SJ, "a")
    assert contract(Da, da) == tensor(F.e(1), F.e(1))
    assert contract(Da, a * a) == 0
    assert contract(Da, da * dast) == tensor(F.e(1), dast)
    assert reduced_contract(Da, da * dast) == dast
    assert reduced_contract(Da, a) == 0


def test_standard_contraction_and_lie():
    cd = build_standard(jordan())
    bs = cd.bisympl
    assert reduced_contract(cd.Q, bs.omega) == univ_d(cd.S)
    assert reduced_lie(cd.Q, bs.omega) == 0


def test_lie_on_functions():
    Q = build_standard(jordan()).Q
    for name in SJ.arrow_names:
        x = A.letter(name)
        assert lie(Q, x) == Q(x).as_kind("form")


@given(elements(SJ, max_len=3, max_weight=3, max_terms=1), elements(SJ, max_len=3, max_weight=3, max_terms=1),
       elements(SJ, "poly", max_len=3, degree=1, max_terms=1))
def test_apply_leibniz(x, y, pv):
    (th,) = from_polyvec(pv)
    (gx,) = x.grades()
    sign = -1 if (th.weight * gx[0]) % 2 else 1
    assert th(x * y) == th(x).act(0, "right", y) + th(y).act(0, "left", x).scale(sign)


@given(elements(K2, max_len=3, max_terms=2), elements(K2, "poly", max_len=3, degree=1, max_terms=1))
def test_apply_matches_oracle(x, pv):
    (th,) = from_polyvec(pv)
    L = O.Letters(K2)
    vals = {n: O.from_tensor(t) for n, t in th.values.items()}
    assert O.from_tensor(th(x)) == O.apply_der(L, vals, th.weight, O.from_element(x))


@given(elements(K2, "form", max_len=4, max_degree=3), elements(K2, "poly", max_len=3, degree=1, max_terms=1))
def test_contract_matches_oracle(alpha, pv):
    (th,) = from_polyvec(pv)
    L = O.Letters(K2, "form")
    vals = {n: O.from_tensor(t) for n, t in th.values.items()}
    assert O.from_tensor(contract(th, alpha)) == O.contract(L, vals, th.weight, O.from_element(alpha))


@given(elements(SJ, "form", max_len=3, max_degree=2, max_terms=1),
       elements(SJ, "form", max_len=3, max_degree=2, max_terms=1),
       elements(SJ, "poly", max_len=3, degree=1, max_terms=1))
def test_contract_leibniz(alpha, beta, pv):
    (ga,) = alpha.grades()
    (gt,) = pv.grades()
    sign = -1 if (ga[0] * gt[0] + ga[1]) % 2 else 1
    lhs = contract(pv, alpha * beta)
    rhs = contract(pv, alpha).act(0, "right", beta) + contract(pv, beta).act(0, "left", alpha).scale(sign)
    assert lhs == rhs


@settings(max_examples=150)
@given(elements(SJ, "poly", max_len=3, degree=1, max_terms=2),
       elements(SJ, "form", max_len=4, max_weight=4, max_degree=3))
def test_reduced_cartan(theta, alpha):
    assert reduced_lie(theta, alpha) == univ_d(reduced_contract(theta, alpha)) + reduced_contract(theta, univ_d(alpha))


@settings(max_examples=150)
@given(elements(SJ, "poly", max_len=2, degree=1, max_terms=1),
       elements(SJ, "poly", max_len=2, degree=1, max_terms=1),
       elements(SJ, "form", max_len=4, max_degree=3))
def test_contractions_graded_anticommute(theta, delta, alpha):
    (g1,), (g2,) = theta.grades(), delta.grades()
    sign = -1 if (g1[0] * g2[0]) % 2 else 1
    lhs = contract_tensor(theta, contract(delta, alpha))
    rhs = contract_tensor(delta, contract(theta, alpha))
    assert lhs + rhs.scale(sign) == 0


def test_plain_anticommutation_needs_the_weight_sign():
    # two weight -1 coordinate derivations: the bare sum does not vanish
    P = alphabet(SJ, "poly")
    th, de = P.letter("D(a^)"), P.letter("D(a^*)")
    alpha = F.letter("d(a^)") * F.letter("d(a^*)")
    x = contract_tensor(th, contract(de, alpha))
    y = contract_tensor(de, contract(th, alpha))
    assert x != 0 and x - y == 0 and x + y != 0


def test_polyvector_letters_act_as_coordinate_derivations():
    bs = canonical_omega(K2)
    P = alphabet(K2, "poly")
    for name in K2.arrow_names:
        assert reduced_contract(P.letter(f"D({name})"), bs.omega) == reduced_contract(coord_der(K2, name), bs.omega)
    assert Tensor.zero(A, 2) == 0
