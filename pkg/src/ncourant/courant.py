"""Derived double Courant brackets from a cubic Hamiltonian.

Given the canonical bracket ``<<-,->>`` of a weight-2 double and a
cubic element ``S``, the anchor and the double Dorfman bracket are

    rho(e)(b) = <<{S, e}, b>>,    [[e1, e2]] = <<{S, e1}, e2>>

with ``{-,-} = m <<-,->>``.  The Courant bimodule ``E`` is spanned by
paths of weight 1; ``B`` is the path algebra of the weight-0 arrows.

Since ``{S, e}`` has weight 2 and the bracket weight -2, every Leibniz
sign involving ``{S, e}`` is trivial, and the checks below are written
without them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import AlgElem, Element, Tensor, alphabet, cyclic_project
from .bisymplectic import BiSympl, canonical_omega, hamiltonian
from .doubleder import DoubleDer, reduced_contract
from .errors import NCError
from .forms import as_form, dr_d, lambda_inject, univ_d
from .polyvec import monomial_keys, sn_bracket
from .quiver import hat_name, standard_double
from .report import CheckReport


@dataclass
class CourantData:
    bisympl: BiSympl
    S: AlgElem
    base: object = None
    notes: list = field(default_factory=list)
    _ham: dict = field(default_factory=dict, repr=False)

    @property
    def quiver(self):
        return self.bisympl.quiver

    @property
    def bracket(self):
        return self.bisympl.bracket

    @property
    def alg(self):
        return self.bisympl.alg

    @property
    def Q(self) -> DoubleDer:
        """``Q = <<S, ->>``, the Hamiltonian derivation of ``S``."""
        return hamiltonian(self.bisympl, self.S)

    def ham(self, x: Element) -> Element:
        """``{S, x}``, memoized on single words."""
        if len(x.terms) == 1:
            (k, c), = x.terms.items()
            h = self._ham.get(k)
            if h is None:
                h = self._ham[k] = self.bracket.assoc(self.S, x.alphabet.element({k: 1}))
            return h.scale(c)
        return self.bracket.assoc(self.S, x)

    def ham_tensor(self, t: Tensor) -> Tensor:
        return self.bracket.assoc_on_tensor(self.S, t)


def courant_data(bs: BiSympl, S: Element, base=None) -> CourantData:
    S = S.as_kind("alg") if S.alphabet.kind != "alg" else S
    if S and S.grades() != {(3, 0)}:
        raise NCError("invalid-input", "the Hamiltonian must be homogeneous of weight 3")
    if bs.N != 2:
        raise NCError("invalid-quiver", "Courant data needs a weight-2 double")
    return CourantData(bs, S, base)


def standard_hamiltonian(q, base) -> AlgElem:
    """``S_0 = sum_a a* a^`` over the arrows of the weight-0 quiver."""
    alg = alphabet(q, "alg")
    S = alg.zero()
    for a in base.arrow_names:
        S = S + alg.word(q.star(a), hat_name(a))
    return S


def build_standard(qz) -> CourantData:
    """Hat-extend, double at weight 2, and take ``S_0 = sum a* a^``."""
    for a in qz.arrows:
        if a.weight != 0:
            raise NCError("invalid-quiver", f"arrow {a.name!r} has nonzero weight")
    q = qz.cached("standard-double", lambda: standard_double(qz))
    bs = canonical_omega(q)
    cd = CourantData(bs, standard_hamiltonian(q, qz), qz)
    rep = check_standard(cd)
    if not rep.passed:
        raise NCError("internal", "standard Courant data fails its defining identities")
    cd.notes.append("E is spanned by weight-1 paths: hat arrows and their duals")
    return cd


def check_standard(cd: CourantData) -> CheckReport:
    """``iota_Q omega = dS``, ``<<Q, Q>>_SN = 0`` and ``<<S, S>>_omega = 0``."""
    rep = CheckReport("standard")
    bs = cd.bisympl
    Q = cd.Q
    rep.check_equal(["iota_Q omega", cd.S], reduced_contract(Q, bs.omega), univ_d(cd.S))
    Qp = Q.to_polyvec()
    rep.check_equal(["<<Q, Q>>"], sn_bracket(Qp, Qp), Tensor.zero(alphabet(cd.quiver, "poly"), 2))
    rep.check_equal(["<<S, S>>", cd.S], cd.bracket(cd.S, cd.S), Tensor.zero(cd.alg, 2))
    rep.check_equal(["{S, S}", cd.S], cd.bracket.assoc(cd.S, cd.S), 0)
    return rep


def _require_weight(x: Element, w: int, what: str):
    if x and x.grades() != {(w, 0)}:
        raise NCError("invalid-input", f"{what} must have weight {w}")


def derived_anchor(cd: CourantData, e: Element, b: Element) -> Tensor:
    """``rho(e)(b) = <<{S, e}, b>>`` for ``e`` of weight 1 and ``b`` in ``B``."""
    _require_weight(e, 1, "e")
    _require_weight(b, 0, "b")
    return cd.bracket(cd.ham(e), b)


def derived_dorfman(cd: CourantData, e1: Element, e2: Element) -> Tensor:
    """``[[e1, e2]] = <<{S, e1}, e2>>``, a tensor in ``E (x) B + B (x) E``."""
    _require_weight(e1, 1, "e1")
    _require_weight(e2, 1, "e2")
    return cd.bracket(cd.ham(e1), e2)


# ---------------------------------------------------------------------------
# extensions to tensors


def _left(cd, e: Element, t: Tensor) -> Tensor:
    """``[[e, u (x) v]]_L = [[e, u]] (x) v``."""
    return cd.bracket.left_ext(cd.ham(e), t)


def right_ext(br, x: Element, t: Tensor) -> Tensor:
    """``<<x, u (x) v>>_R = (-1)^(|u| |x|_N) u (x) <<x, v>>``."""
    alph = t.alphabet
    out: dict = {}
    for kx, cx in x.terms.items():
        sx = br.shift(kx) & 1
        for (u, v), c in t.terms.items():
            s = sx and alph.tdeg(alph.grade(u)) & 1
            for k, w in br.pair(kx, v).items():
                key = (u,) + k
                val = out.get(key, 0) + (-w if s else w) * c * cx
                if val:
                    out[key] = val
                else:
                    out.pop(key, None)
    return Tensor(alph, 3, out)


def first_left_ext(br, t: Tensor, y: Element) -> Tensor:
    """``<<u (x) v, y>>_L = (-1)^(|y|_N |u|_N) <<u, y>> (x)_1 v``.

    ``v`` is placed between the two slots of ``<<u, y>>`` with its
    Koszul sign.  With these conventions the graded double Jacobi
    identity reads ``<<a,<<b,c>>>>_L = (-1)^(|c|_N (|a|+|b|)) <<<<a,b>>,c>>_L
    + (-1)^(|a|_N |b|_N) <<b,<<a,c>>>>_R``.
    """
    alph = t.alphabet
    out = Tensor.zero(alph, 3)
    for ky, cy in y.terms.items():
        sy = br.shift(ky) & 1
        yk = alph.element({ky: cy})
        for (u, v), c in t.terms.items():
            s = sy and br.shift(u) & 1
            val = br(alph.element({u: -c if s else c}), yk)
            out = out + val.insert(1, alph.element({v: 1}), "right")
    return out


# ---------------------------------------------------------------------------
# the pre-Courant axioms and Jacobi


def weight_one_monomials(q, max_len: int = 2) -> list[AlgElem]:
    alg = alphabet(q, "alg")
    return [alg.element({k: 1}) for k in monomial_keys(alg, 1, max_len) if alg.grade(k)[0] == 1]


def weight_zero_monomials(q, max_len: int = 2) -> list[AlgElem]:
    alg = alphabet(q, "alg")
    return [alg.element({k: 1}) for k in monomial_keys(alg, 0, max_len) if alg.grade(k)[0] == 0]


def check_courant(cd: CourantData, generators=None, coefficients=None, max_len: int = 2,
                  suites=("a", "b", "c", "d", "jacobi")) -> CheckReport:
    """Leibniz (a, b), symmetrization (c), pairing invariance (d) and double Jacobi.

    ``generators`` default to the weight-1 paths of length <= ``max_len``
    and ``coefficients`` to the weight-0 paths of length <= ``max_len``.
    Axiom (c) is checked contracted against the pairing:
    ``rho(e1)(<e2, e3>) = <e1, [[e2, e3]] + [[e3, e2]]^sigma>_L``.
    """
    q = cd.quiver
    gens = generators if generators is not None else weight_one_monomials(q, max_len)
    coeffs = coefficients if coefficients is not None else weight_zero_monomials(q, max_len)
    br = cd.bracket
    report = CheckReport("courant")
    report.notes.append(f"{len(gens)} generators, {len(coeffs)} coefficients")

    if "a" in suites:
        rep = CheckReport("courant:a")
        for e1 in gens:
            for b in coeffs:
                for e2 in gens:
                    be2 = b * e2
                    if not be2:
                        continue
                    lhs = derived_dorfman(cd, e1, be2)
                    rhs = derived_anchor(cd, e1, b) * e2 + b * derived_dorfman(cd, e1, e2)
                    rep.check_equal([e1, b, e2], lhs, rhs)
        report.merge(rep)
    if "b" in suites:
        rep = CheckReport("courant:b")
        for e1 in gens:
            for b in coeffs:
                for e2 in gens:
                    e2b = e2 * b
                    if not e2b:
                        continue
                    lhs = derived_dorfman(cd, e1, e2b)
                    rhs = e2 * derived_anchor(cd, e1, b) + derived_dorfman(cd, e1, e2) * b
                    rep.check_equal([e1, e2, b], lhs, rhs)
        report.merge(rep)
    if "c" in suites:
        rep = CheckReport("courant:c")
        for e1 in gens:
            for e2 in gens:
                for e3 in gens:
                    lhs = _left(cd, e1, br(e2, e3))
                    sym = derived_dorfman(cd, e2, e3) + derived_dorfman(cd, e3, e2).flip()
                    rhs = br.left_ext(e1, sym)
                    rep.check_equal([e1, e2, e3], lhs, rhs)
        report.merge(rep)
    if "d" in suites:
        rep = CheckReport("courant:d")
        for e1 in gens:
            for e2 in gens:
                for e3 in gens:
                    lhs = _left(cd, e1, br(e2, e3))
                    first = first_left_ext(br, derived_dorfman(cd, e1, e2), e3)
                    if _parity(e3, br) and (_weight(cd.ham(e1)) + _weight(e2)) & 1:
                        first = -first
                    rhs = first + right_ext(br, e2, derived_dorfman(cd, e1, e3))
                    rep.check_equal([e1, e2, e3], lhs, rhs)
        report.merge(rep)
    if "jacobi" in suites:
        rep = CheckReport("courant:jacobi")
        for e1 in gens:
            for e2 in gens:
                for e3 in gens:
                    lhs = _left(cd, e1, derived_dorfman(cd, e2, e3))
                    rhs = right_ext(br, cd.ham(e2), derived_dorfman(cd, e1, e3)) + dorfman_first_left(
                        cd, derived_dorfman(cd, e1, e2), e3
                    )
                    rep.check_equal([e1, e2, e3], lhs, rhs)
        report.merge(rep)
    return report


def dorfman_first_left(cd: CourantData, t: Tensor, e3: Element) -> Tensor:
    """``[[T, e3]]_L = <<{S, T}, e3>>_L``, with ``{S, -}`` acting slotwise on ``T``."""
    return first_left_ext(cd.bracket, cd.ham_tensor(t), e3)


def _weight(x: Element) -> int:
    return x.weight if x else 0


def _parity(x: Element, br) -> int:
    """Parity of ``|x|_N`` for a homogeneous ``x``."""
    return (_weight(x) + br.N) & 1


# ---------------------------------------------------------------------------
# twisted double Lie-Rinehart algebras


def _is_base(alph, key) -> bool:
    return alph.grade(key) == (0, 0)


def check_twisted_dlr(n_bracket, anchor, twist_gens, generators, coefficients, name: str = "dlr") -> CheckReport:
    """Axioms (a)-(e) of a twisted double Lie-Rinehart algebra on the given generators.

    ``n_bracket(x, y)`` returns a pair tensor; ``anchor(x)`` returns the
    degree-1 polyvector of a double derivation of ``B`` (zero outside
    ``N``).  Values of the bracket must lie in ``N (x) B + B (x) N``
    plus ``Nbar (x) Nbar`` where ``Nbar`` is spanned by ``twist_gens``.
    """
    report = CheckReport(name)
    twist = set(twist_gens or ())

    def anchor_tensor(t: Tensor) -> Tensor:
        alph = t.alphabet
        poly = alphabet(alph.quiver, "poly")
        out = Tensor.zero(poly, 2)
        for (u, v), c in t.terms.items():
            ru = anchor(alph.element({u: c}))
            if ru:
                out = out + Tensor(poly, 2, {(k, v): w for k, w in ru.as_kind("poly").terms.items()})
            rv = anchor(alph.element({v: c}))
            if rv:
                out = out + Tensor(poly, 2, {(u, k): w for k, w in rv.as_kind("poly").terms.items()})
        return out

    def in_twist(alph, key) -> bool:
        if key[0] < 0:
            return False
        names = [alph.names[i] for i in key]
        hits = [n for n in names if n in twist]
        return len(hits) == 1 and all(n in twist or alph.grade((alph.letter_id(n),)) == (0, 0) for n in names)

    shape = CheckReport(f"{name}:shape")
    rep_a = CheckReport(f"{name}:a")
    rep_b = CheckReport(f"{name}:b")
    rep_c = CheckReport(f"{name}:c")
    rep_d = CheckReport(f"{name}:d")
    rep_e = CheckReport(f"{name}:e")
    for n1 in generators:
        for n2 in generators:
            t = n_bracket(n1, n2)
            alph = t.alphabet
            ok = all(
                _is_base(alph, u) or _is_base(alph, v) or (in_twist(alph, u) and in_twist(alph, v))
                for (u, v) in t.terms
            )
            shape.record(ok, [n1, n2], t, "N(x)B + B(x)N + Nbar(x)Nbar")
            rep_a.check_equal([n1, n2], t, -n_bracket(n2, n1).flip())
            for b in coefficients:
                bn2 = b * n2
                if bn2:
                    rhs = b * t + anchor_value(anchor, n1, b) * n2
                    rep_b.check_equal([n1, b, n2], n_bracket(n1, bn2), rhs)
                n2b = n2 * b
                if n2b:
                    rhs = t * b + n2 * anchor_value(anchor, n1, b)
                    rep_c.check_equal([n1, n2, b], n_bracket(n1, n2b), rhs)
            ra, rb = anchor(n1), anchor(n2)
            lhs = anchor_tensor(t)
            rhs = sn_bracket(ra, rb) if ra and rb else Tensor.zero(alphabet(n1.quiver, "poly"), 2)
            rep_e.check_equal([n1, n2], lhs, rhs)
    for n1 in generators:
        for n2 in generators:
            for n3 in generators:
                rep_d.check_equal([n1, n2, n3], dlr_jacobi(n_bracket, n1, n2, n3), 0)
    for r in (shape, rep_a, rep_b, rep_c, rep_d, rep_e):
        report.merge(r)
    return report


def anchor_value(anchor, n: Element, b: Element) -> Tensor:
    """Evaluate ``anchor(n)`` on ``b`` through the Schouten-Nijenhuis bracket."""
    pv = anchor(n)
    alg = b.alphabet
    if not pv:
        return Tensor.zero(alg, 2)
    return sn_bracket(pv, b).as_kind("alg") if alg.kind == "alg" else sn_bracket(pv, b)


def dlr_jacobi(n_bracket, n1, n2, n3) -> Tensor:
    """``<<n1,<<n2,n3>>>>_L + s_(123) <<n2,<<n3,n1>>>>_L + s_(132) <<n3,<<n1,n2>>>>_L`` without signs."""
    from .algebra import cycle_perm

    def inner(x, y, z):
        t = n_bracket(y, z)
        alph = t.alphabet
        out = Tensor.zero(alph, 3)
        for (u, v), c in t.terms.items():
            val = n_bracket(x, alph.element({u: c}))
            out = out + Tensor(alph, 3, {k + (v,): w for k, w in val.terms.items()})
        return out

    return (
        inner(n1, n2, n3)
        + inner(n2, n3, n1).permute(cycle_perm(3, 1, 2, 3))
        + inner(n3, n1, n2).permute(cycle_perm(3, 1, 3, 2))
    )


def a2_anchor(bs: BiSympl):
    """``a -> X_a = <<a, ->>|_B`` as a polyvector; zero off weight 2."""
    q = bs.quiver
    base_arrows = [a.name for a in q.arrows if a.weight == 0]
    alg = bs.alg

    def anchor(x: Element):
        x = x.as_kind("alg") if x.alphabet.kind != "alg" else x
        out = {}
        for g, part in x.homogeneous_parts().items():
            if g[0] != 2:
                continue
            vals = {}
            for c in base_arrows:
                t = bs.bracket(part, alg.letter(c))
                if t:
                    vals[c] = t
            if vals:
                pv = DoubleDer(q, 0, vals).to_polyvec()
                for k, v in pv.terms.items():
                    out[k] = out.get(k, 0) + v
        return alphabet(q, "poly").element({k: v for k, v in out.items() if v})

    return anchor


def check_a2_dlr(bs: BiSympl, max_len: int = 3) -> CheckReport:
    """``A^2`` with the restricted bracket, anchor ``X`` and twisting bimodule ``E_1``."""
    q = bs.quiver
    alg = bs.alg
    gens = [alg.element({k: 1}) for k in monomial_keys(alg, 2, max_len) if alg.grade(k)[0] == 2]
    coeffs = weight_zero_monomials(q, 1)
    return check_twisted_dlr(bs.bracket, a2_anchor(bs), bs.weight1_arrows(), gens, coeffs, name="dlr:A2")


def check_dder_dlr(base, max_len: int = 1) -> CheckReport:
    """Double derivations of ``B`` with the Schouten-Nijenhuis bracket and the identity anchor."""
    poly = alphabet(base, "poly")
    gens = [poly.element({k: 1}) for k in monomial_keys(poly, 1, max_len + 2) if poly.grade(k) == (0, 1)]
    alg = alphabet(base, "alg")
    coeffs = [alg.element({k: 1}) for k in monomial_keys(alg, 0, max_len)]

    def anchor(x):
        x = x.as_kind("poly") if x.alphabet.kind != "poly" else x
        return x._new({k: c for k, c in x.terms.items() if x.alphabet.grade(k)[1] == 1})

    def br(x, y):
        return sn_bracket(x, y)

    return check_twisted_dlr(br, anchor, (), gens, [c.as_kind("poly") for c in coeffs], name="dlr:dder")


# ---------------------------------------------------------------------------
# twists by 3-forms


def twist(cd: CourantData, phi: Element) -> CourantData:
    """``S_phi = S_0 + lambda(phi)`` for a 3-form ``phi`` over ``B``.

    The returned data carries a ``CheckReport`` in ``twist_report``
    recording whether ``d_DR [phi] = 0``, whether the master equation
    ``[{S_phi, S_phi}] = 0`` holds, and whether the two verdicts agree.
    """
    if cd.base is None:
        raise NCError("invalid-context", "twists need standard Courant data")
    phi = as_form(phi)
    if phi.quiver != cd.base:
        raise NCError("incompatible-quiver", "the 3-form must live over the base quiver")
    if phi and any(g[1] != 3 for g in phi.grades()):
        raise NCError("invalid-form-degree", "twists need a 3-form")
    lam = lambda_inject(phi, ambient=cd.quiver)
    out = CourantData(cd.bisympl, cd.S + lam, cd.base)
    closed = not dr_d(phi)
    master = not master_defect(out)
    rep = CheckReport("twist")
    rep.record(closed == master, [phi], f"closed={closed}", f"master={master}")
    rep.notes.append(f"d_DR[phi] = 0: {closed}")
    rep.notes.append(f"master equation: {master}")
    out.twist_report = rep
    out.closed = closed
    out.master = master
    return out


def master_defect(cd: CourantData) -> AlgElem:
    """``{S, S}`` modulo graded commutators."""
    return cyclic_project(cd.bracket.assoc(cd.S, cd.S))


def check_master(cd: CourantData) -> CheckReport:
    rep = CheckReport("master")
    rep.check_equal([cd.S], master_defect(cd), 0)
    return rep


def check_lambda(cd: CourantData) -> CheckReport:
    """``lambda(d phi) = m Q_0(lambda(phi))`` on arrows and ``<<a^, b^>> = 0``."""
    rep = CheckReport("lambda")
    base = cd.base
    q = cd.quiver
    form = alphabet(base, "form")
    alg = cd.alg
    Q = cd.Q
    for a in base.arrow_names:
        phi = form.letter(a)
        lhs = lambda_inject(univ_d(phi), ambient=q)
        rhs = Q(lambda_inject(phi, ambient=q)).mult()
        rep.check_equal([phi], lhs, rhs)
    hats = [hat_name(a) for a in base.arrow_names]
    for x in hats:
        for y in hats:
            rep.check_equal([alg.letter(x), alg.letter(y)], cd.bracket(alg.letter(x), alg.letter(y)), 0)
    return rep
