import pytest
from hypothesis import given, settings

from ncourant import NCError, alphabet, dr_d, dr_normalize, form_mul, jordan, kronecker, lambda_inject
from ncourant import standard_double, two_loops, univ_d
from ncourant.bisymplectic import canonical_omega
from ncourant.courant import build_standard
from ncourant.forms import euler_contract, euler_lie

import oracle as O
from strategies import elements

SJ = standard_double(jordan())
K2 = standard_double(kronecker(2))
A = alphabet(SJ)
F = alphabet(SJ, "form")
a, ast = A.letter("a"), A.letter("a*")
da, dast = F.letter("d(a)"), F.letter("d(a*)")


def test_d_examples():
    assert univ_d(A.e(1)) == 0
    KA = alphabet(kronecker(2))
    KF = alphabet(kronecker(2), "form")
    # Kronecker arrows do not compose, so use the loops quiver for d(ab)
    TL = two_loops()
    x, y = alphabet(TL).letter("x"), alphabet(TL).letter("y")
    TF = alphabet(TL, "form")
    assert univ_d(x * y) == TF.letter("d(x)") * y + x * TF.letter("d(y)")
    assert univ_d(KA.letter("a")) == KF.letter("d(a)")
    assert univ_d(a * da) == da * da


def test_form_mul_examples():
    w = form_mul(da, dast)
    assert list(w.terms) == [(F.letter_id("d(a)"), F.letter_id("d(a*)"))]
    assert form_mul(da, F.one()) == da
    b = form_mul(form_mul(da, a), dast)
    assert b == F.word("d(a)", "a", "d(a*)")


def test_dr_normalize_examples():
    ah, ast_ = A.letter("a^"), A.letter("a*")
    assert not dr_normalize(ah * ast_ - ast_ * ah)
    KF = alphabet(kronecker(2), "form")
    assert not dr_normalize(KF.letter("d(a)"))
    assert dr_normalize(F.e(1)).rep == F.e(1)
    assert not dr_d(F.e(1))


def test_lambda_examples():
    TL = two_loops()
    TF = alphabet(TL, "form")
    amb = standard_double(TL)
    AA = alphabet(amb)
    assert lambda_inject(TF.letter("d(x)")) == AA.letter("x^")
    phi = TF.word("y", "d(x)", "x", "d(y)", "y", "d(x)", "x")
    assert lambda_inject(phi) == AA.word("y", "x^", "x", "y^", "y", "x^", "x")
    assert lambda_inject(TF.e(1)) == AA.e(1)


def test_lambda_rejects_positive_weight():
    with pytest.raises(NCError) as exc:
        lambda_inject(da)
    assert exc.value.code == "invalid-context"


def test_lambda_commutes_with_d():
    cd = build_standard(two_loops())
    q = cd.quiver
    TF = alphabet(two_loops(), "form")
    for name in ("x", "y"):
        phi = TF.letter(name)
        assert lambda_inject(univ_d(phi), ambient=q) == cd.Q(lambda_inject(phi, ambient=q)).mult()


def test_euler_exactness_of_omega():
    for q in (SJ, K2, standard_double(two_loops())):
        bs = canonical_omega(q)
        assert dr_d(euler_contract(bs.omega)).rep == dr_normalize(bs.omega.scale(2)).rep
        # and the Cartan formula for the Euler field: L_E = d i_E + i_E d
        assert euler_lie(bs.omega) == univ_d(euler_contract(bs.omega)) + euler_contract(univ_d(bs.omega))


@settings(max_examples=150)
@given(elements(SJ, "form", max_len=4, max_weight=4, max_degree=3))
def test_d_squared_zero(x):
    assert univ_d(univ_d(x)) == 0


@settings(max_examples=150)
@given(elements(SJ, "form", max_len=4, max_weight=4, max_degree=2))
def test_dr_d_squared_zero(x):
    assert not dr_d(dr_d(dr_normalize(x)))


@given(elements(K2, "form", max_len=4, max_degree=3))
def test_d_matches_oracle(x):
    L = O.Letters(K2, "form")
    assert O.from_element(univ_d(x)) == O.d(L, O.from_element(x))


@given(elements(K2, "form", max_len=3, max_terms=1))
def test_non_loops_vanish(x):
    ((k, _),) = x.terms.items()
    alph = x.alphabet
    if alph.head(k) != alph.tail(k):
        assert not dr_normalize(x)


@given(elements(SJ, "form", max_len=3, max_degree=2), elements(SJ, "form", max_len=3, max_degree=2),
       elements(SJ, "form", max_len=2, max_degree=2))
def test_form_mul_associative(x, y, z):
    assert form_mul(form_mul(x, y), z) == form_mul(x, form_mul(y, z))


@given(elements(SJ, "form", max_len=3, max_degree=2, max_terms=1),
       elements(SJ, "form", max_len=3, max_degree=2, max_terms=1))
def test_dr_cyclic_symmetry(x, y):
    (gx,), (gy,) = x.grades(), y.grades()
    sign = -1 if (gx[0] * gy[0] + gx[1] * gy[1]) % 2 else 1
    assert dr_normalize(form_mul(x, y)).rep == dr_normalize(form_mul(y, x)).rep.scale(sign)
