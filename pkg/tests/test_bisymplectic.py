import pytest

from ncourant import GradedQuiver, NCError, alphabet, double, jordan, kronecker, standard_double, tensor, two_loops
from ncourant import univ_d
from ncourant.bisymplectic import (
    EndTable,
    adjoint_membership,
    basis_element,
    basis_map_1,
    basis_map_2,
    canonical_omega,
    casimir_check,
    check_bisymplectic,
    check_conservation,
    check_hamiltonian_exchange,
    check_pairing_agreement,
    check_weight_relations,
    e1e1_basis,
    flat_sharp_check,
    hamiltonian,
    pairing,
    pairing_sign,
    psi,
    psi_on_basis,
)
from ncourant.courant import build_standard

SJ = standard_double(jordan())
K2 = standard_double(kronecker(2))
TL = standard_double(two_loops())
DOUBLES = [SJ, K2, TL, double(kronecker(2), 2)]
A = alphabet(SJ)
F = alphabet(SJ, "form")
e1 = A.e(1)


def test_canonical_omega_standard_jordan():
    bs = canonical_omega(SJ)
    expected = F.word("d(a)", "d(a*)") + F.word("d(a^)", "d(a^*)")
    assert bs.omega == expected


def test_canonical_omega_empty_and_closed():
    empty = double(GradedQuiver([1], []), 2)
    bs = canonical_omega(empty)
    assert bs.omega == 0
    for q in DOUBLES:
        assert univ_d(canonical_omega(q).omega) == 0


def test_canonical_omega_needs_double():
    with pytest.raises(NCError) as exc:
        canonical_omega(jordan())
    assert exc.value.code == "invalid-quiver"


def test_hamiltonian_examples():
    bs = canonical_omega(SJ)
    h = hamiltonian(bs, A.letter("a"))
    assert set(h.values) == {"a*"}
    assert not hamiltonian(bs, e1).values
    cd = build_standard(jordan())
    assert hamiltonian(bs, cd.S) == cd.Q


def test_hamiltonian_property_on_words():
    for q in DOUBLES[:2]:
        assert check_bisymplectic(canonical_omega(q), 2).passed


def test_pairing_values():
    bs = canonical_omega(SJ)
    ee = tensor(e1, e1)
    assert pairing(bs, "a^", "a^*") == ee
    assert pairing(bs, "a^*", "a^") == ee
    assert pairing(bs, "a^", "a^") == 0
    # the sign-by-epsilon variant makes the pairing antisymmetric
    assert pairing(bs, "a^*", "a^", convention="epsilon") == -ee


def test_pairing_rejects_wrong_weight():
    bs = canonical_omega(SJ)
    with pytest.raises(NCError) as exc:
        pairing(bs, "a", "a*")
    assert exc.value.code == "invalid-arrow-weight"


def test_pairing_agreement_and_flat_sharp():
    for q in DOUBLES:
        bs = canonical_omega(q)
        assert check_pairing_agreement(bs).passed
        assert flat_sharp_check(bs).passed


def test_epsilon_pairing_disagrees_with_bracket():
    bs = canonical_omega(SJ)
    assert not check_pairing_agreement(bs, "epsilon").passed
    assert not flat_sharp_check(bs, "epsilon").passed


def test_graded_pairing_sign_on_weight_one_arrows():
    for q in DOUBLES:
        bs = canonical_omega(q)
        for name in bs.weight1_arrows():
            assert pairing_sign(q, name) == 1


def test_casimir():
    assert casimir_check(jordan()).passed
    assert casimir_check(GradedQuiver([1, 2], [])).passed
    for q in DOUBLES:
        assert casimir_check(q).passed


def test_weight_relations_and_conservation():
    for q in DOUBLES[:3]:
        bs = canonical_omega(q)
        assert check_weight_relations(bs).passed
        assert check_conservation(bs).passed
        assert check_hamiltonian_exchange(bs).passed


def test_conservation_needs_graded_sign():
    assert not check_conservation(canonical_omega(K2), literal=True).passed


def test_basis_maps():
    m1 = basis_map_1(SJ, e1, e1, e1, "a^", "a^")
    m2 = basis_map_2(SJ, e1, e1, e1, "a^", "a^")
    ah, ahs = A.letter("a^"), A.letter("a^*")
    assert m1 == EndTable(SJ, {"a^": tensor(ah, e1)})
    assert m2 == EndTable(SJ, {"a^*": tensor(e1, ahs)})


def test_basis_element_rejects_non_composable():
    KA = alphabet(K2)
    with pytest.raises(NCError) as exc:
        basis_map_1(K2, KA.e(1), KA.e(1), KA.e(1), "a^", "a^")
    assert exc.value.code == "non-composable"


def test_psi_on_basis_jordan():
    bs = canonical_omega(SJ)
    f = psi_on_basis(bs, e1, e1, e1, "a^", "a^")
    ah, ahs = A.letter("a^"), A.letter("a^*")
    # <<a^* a^, a^>> and <<a^* a^, a^*>>, expanded by hand from the letter table
    assert f("a^") == -tensor(ah, e1)
    assert f("a^*") == tensor(e1, ahs)
    assert f == basis_map_2(SJ, e1, e1, e1, "a^", "a^") - basis_map_1(SJ, e1, e1, e1, "a^", "a^")


def test_psi_of_zero():
    bs = canonical_omega(SJ)
    assert psi(bs, A.zero()) == EndTable(SJ, {})


def test_adjoint_membership():
    bs = canonical_omega(SJ)
    assert adjoint_membership(EndTable(SJ, {}), bs).passed
    assert not adjoint_membership(basis_map_1(SJ, e1, e1, e1, "a^", "a^"), bs).passed
    for r, qq, p, a, b in e1e1_basis(SJ, 2):
        f = psi_on_basis(bs, r, qq, p, a, b)
        assert adjoint_membership(f, bs).passed
        assert f == basis_map_2(SJ, r, qq, p, a, b) - basis_map_1(SJ, r, qq, p, a, b)


def test_epsilon_combination_differs_from_psi():
    bs = canonical_omega(SJ)
    r, qq, p, a, b = e1, e1, e1, "a^", "a^*"
    eps = basis_element(SJ, r, qq, p, a, b)
    assert eps != psi_on_basis(bs, r, qq, p, a, b)
    assert not adjoint_membership(eps, bs).passed
