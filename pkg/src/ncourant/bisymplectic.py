"""The canonical bi-symplectic form of a doubled quiver and what it induces.

``omega = sum_a da da*`` over the original arrows.  Its double Poisson
bracket is ``mu(P)`` for ``P = sum_a D(a) D(a*)``; with the sign
conventions of :mod:`ncourant.polyvec` the Hamiltonian derivation
``H_x = <<x, ->>_omega`` then satisfies ``iota_{H_x} omega = dx``.

On a weight-2 double the bracket restricted to weight-1 arrows is a
symmetric pairing on ``E_1``, the span of those arrows.  For weight-1
arrows ``<x, x*> = e_h(x*) (x) e_t(x*)`` and every other pair pairs to 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import AlgElem, Element, Tensor, alphabet, cycle_perm
from .doubleder import DoubleDer, coord_der, reduced_contract
from .errors import NCError
from .forms import univ_d
from .polyvec import (
    DoubleBracket,
    GeneratorBracket,
    MuBracket,
    canonical_P,
    check_double_poisson,
    monomial_keys,
    schouten,
)
from .report import CheckReport

SIGMA_123 = cycle_perm(3, 1, 2, 3)
SIGMA_132 = cycle_perm(3, 1, 3, 2)


@dataclass
class BiSympl:
    quiver: object
    N: int
    omega: Element
    bracket: MuBracket
    P: Element
    _hams: dict = field(default_factory=dict, repr=False)

    @property
    def alg(self):
        return alphabet(self.quiver, "alg")

    def weight1_arrows(self) -> list[str]:
        return [a.name for a in self.quiver.arrows if a.weight == 1]


def canonical_omega(q, verify: bool = True) -> BiSympl:
    """Build ``omega``, ``P`` and the bracket; check ``d omega = 0`` and ``iota_{H_x} omega = dx``."""
    if not q.is_doubled:
        raise NCError("invalid-quiver", "the canonical form needs a doubled quiver")

    def build():
        form = alphabet(q, "form")
        omega = form.zero()
        for a in q.originals:
            omega = omega + form.word(f"d({a})", f"d({q.star(a)})")
        P = canonical_P(q) if q.arrows else alphabet(q, "poly").zero()
        N = q.double_weight or 0
        bs = BiSympl(q, N, omega, MuBracket(P) if q.arrows else _empty_mu(q, N), P)
        if verify:
            if univ_d(omega):
                raise NCError("internal", "omega is not closed")
            for a in q.arrow_names:
                x = bs.alg.letter(a)
                if reduced_contract(hamiltonian(bs, x), omega) != univ_d(x):
                    raise NCError("internal", f"Hamiltonian property fails on {a!r}")
        return bs

    return q.cached(("canonical-omega", verify), build)


def _empty_mu(q, N):
    br = GeneratorBracket(alphabet(q, "alg"), -N, {}, name="mu")
    br.P = alphabet(q, "poly").zero()
    return br


def hamiltonian(bs: BiSympl, x: Element) -> DoubleDer:
    """``H_x = <<x, ->>_omega`` as a double derivation of weight ``|x| - N``."""
    x = x.as_kind("alg") if x.alphabet.kind != "alg" else x
    if not x.is_homogeneous():
        raise NCError("invalid-input", "hamiltonian needs a homogeneous element")
    q = bs.quiver
    if not x:
        return DoubleDer(q, 0)
    key = tuple(sorted(x.terms.items()))
    h = bs._hams.get(key)
    if h is None:
        vals = {}
        for a in q.arrow_names:
            t = bs.bracket(x, bs.alg.letter(a))
            if t:
                vals[a] = t
        h = bs._hams[key] = DoubleDer(q, x.weight + bs.bracket.N, vals)
    return h


def hamiltonian_polyvec(bs: BiSympl, x: Element):
    return hamiltonian(bs, x).to_polyvec()


# ---------------------------------------------------------------------------
# weight-1 pairing


def _require_weight2(bs: BiSympl):
    if bs.N != 2:
        raise NCError("invalid-quiver", "the weight-1 pairing needs a weight-2 double")


def _weight1(q, name: str):
    a = q.arrow(name)
    if a.weight != 1:
        raise NCError("invalid-arrow-weight", f"arrow {name!r} has weight {a.weight}, not 1")
    return a


def pairing_sign(q, name: str) -> int:
    """Coefficient of ``<x, x*>``: 1 on originals, ``-(-1)^(|x||x*|)`` on their duals."""
    if q.is_original(name):
        return 1
    a, b = q.arrow(name), q.arrow(q.star(name))
    return 1 if (a.weight * b.weight) & 1 else -1


def epsilon_sign(q, name: str) -> int:
    return q.epsilon(name)


def _pairing_table(q, sign) -> dict:
    alg = alphabet(q, "alg")
    table = {}
    for a in q.arrows:
        if a.weight != 1:
            continue
        s = q.star(a.name)
        b = q.arrow(s)
        unit = (alg.trivial(q.vertex_index(b.head)), alg.trivial(q.vertex_index(b.tail)))
        table[(q.arrow_index(a.name), q.arrow_index(s))] = {unit: sign(q, a.name)}
    return table


def pairing_bracket(bs: BiSympl, convention: str = "graded") -> DoubleBracket:
    """The pairing as a bracket on weight-1 letters, extended outer-bilinearly.

    ``convention="epsilon"`` uses ``<x, x*> = epsilon(x)`` instead of the
    graded sign; it is provided to compare against and is not symmetric.
    """
    _require_weight2(bs)
    sign = {"graded": pairing_sign, "epsilon": epsilon_sign}[convention]
    q = bs.quiver
    return q.cached(
        ("pairing", convention),
        lambda: GeneratorBracket(bs.alg, -2, _pairing_table(q, sign), name=f"pairing-{convention}", complete=False),
    )


def pairing(bs: BiSympl, p: str, q_: str, convention: str = "graded") -> Tensor:
    _require_weight2(bs)
    q = bs.quiver
    _weight1(q, p)
    _weight1(q, q_)
    pb = pairing_bracket(bs, convention)
    return pb(bs.alg.letter(p), bs.alg.letter(q_))


def pairing_left(pb: DoubleBracket, e: Element, t: Tensor) -> Tensor:
    """``<e, x (x) y>_L = <e, x> (x) y``; terms whose first slot lies in ``B`` vanish."""
    return pb.left_ext(e, t)


def check_pairing_agreement(bs: BiSympl, convention: str = "graded") -> CheckReport:
    """``<<p, q>>_omega = <p, q>`` and symmetry on all pairs of weight-1 arrows."""
    rep = CheckReport(f"pairing-agreement:{convention}")
    q = bs.quiver
    L = bs.alg.letter
    names = bs.weight1_arrows()
    for p in names:
        for r in names:
            pr = pairing(bs, p, r, convention)
            rep.check_equal([L(p), L(r)], bs.bracket(L(p), L(r)), pr)
            rep.check_equal([L(p), L(r)], pr, pairing(bs, r, p, convention).flip())
    rep.notes.append(f"{len(names)} weight-1 arrows on {len(q.vertices)} vertices")
    return rep


# ---------------------------------------------------------------------------
# flat / sharp


def flat(bs: BiSympl, p: str, convention: str = "graded") -> dict:
    """``p -> <p, ->`` as coordinates on the dual basis ``{name: coeff}``."""
    out = {}
    for r in bs.weight1_arrows():
        t = pairing(bs, p, r, convention)
        for _, c in t.terms.items():
            out[r] = out.get(r, 0) + c
    return {k: v for k, v in out.items() if v}


def sharp(bs: BiSympl, r: str) -> dict:
    """The arrow dual to the coordinate functional of ``r``, read off from ``iota_{D(r)} omega``."""
    alpha = reduced_contract(coord_der(bs.quiver, r), bs.omega)
    form = alpha.alphabet
    out = {}
    for k, c in alpha.terms.items():
        if len(k) != 1 or form.is_arrow(k[0]):
            raise NCError("internal", "contraction with a coordinate is not a single differential")
        out[form.names[k[0] - form.n_arrows]] = c
    return out


def _compose(m1, m2) -> dict:
    out = {}
    for k, c in m1.items():
        for k2, c2 in m2(k).items():
            out[k2] = out.get(k2, 0) + c * c2
    return {k: v for k, v in out.items() if v}


def flat_sharp_check(bs: BiSympl, convention: str = "graded") -> CheckReport:
    """On the weight-1 basis, ``sharp . flat`` and ``flat . sharp`` are identities."""
    _require_weight2(bs)
    rep = CheckReport(f"flat-sharp:{convention}")
    for p in bs.weight1_arrows():
        back = _compose(flat(bs, p, convention), lambda r: sharp(bs, r))
        rep.check_equal([p], _basis_text(back), _basis_text({p: 1}))
        forth = _compose(sharp(bs, p), lambda r: flat(bs, r, convention))
        rep.check_equal([f"~{p}"], _basis_text(forth), _basis_text({p: 1}))
    return rep


def _basis_text(m: dict) -> str:
    return " + ".join(f"{c}*{k}" for k, c in sorted(m.items())) or "0"


# ---------------------------------------------------------------------------
# Casimir


def casimir_check(q) -> CheckReport:
    """``eval(sum_a a (x) D(a))(b) = b`` for every arrow ``b``."""
    rep = CheckReport("casimir")
    alg = alphabet(q, "alg")
    for b in q.arrow_names:
        x = alg.letter(b)
        total = alg.zero()
        for a in q.arrow_names:
            val = coord_der(q, a)(x)
            la = alg.letter(a)
            for (u, v), c in val.terms.items():
                total = total + alg.element({u: c}) * la * alg.element({v: 1})
        rep.check_equal([x], total, x)
    return rep


# ---------------------------------------------------------------------------
# weight relations, conservation, Hamiltonian exchange


def check_weight_relations(bs: BiSympl, weight_bound: int = 2, max_len: int = 3) -> CheckReport:
    """Every term of ``<<x, y>>`` has weight ``|x| + |y| - N`` with both slots non-negative."""
    rep = CheckReport("weight-relations")
    alg = bs.alg
    keys = monomial_keys(alg, weight_bound, max_len)
    for kx in keys:
        for ky in keys:
            expect = alg.grade(kx)[0] + alg.grade(ky)[0] - bs.N
            t = bs.bracket.pair(kx, ky)
            ok = all(alg.grade(u)[0] + alg.grade(v)[0] == expect for (u, v) in t)
            if expect < 0:
                ok = ok and not t
            rep.record(ok, [alg.element({kx: 1}), alg.element({ky: 1})], Tensor(alg, 2, t), f"weight {expect}")
    return rep


def conservation_rhs(bs: BiSympl, a: Element, e1: str, e2: str, literal: bool = False) -> Tensor:
    """``s_(132) <e2, D_a(e1)>_L + s_(123) <e1, D_a(e2)°>_L``.

    The signs come from the graded Jacobi identity and skew-symmetry;
    with ``literal=True`` the second term is subtracted instead.
    """
    pb = pairing_bracket(bs)
    L = bs.alg.letter
    d1 = bs.bracket(a, L(e1))
    d2 = bs.bracket(a, L(e2))
    t1 = pairing_left(pb, L(e2), d1).permute(SIGMA_132)
    t2 = pairing_left(pb, L(e1), d2.flip()).permute(SIGMA_123)
    return t1 - t2 if literal else t1 + t2


def check_conservation(bs: BiSympl, weight_bound_len: int = 3, literal: bool = False) -> CheckReport:
    """``X_a(<e1, e2>) = ...`` for weight-2 monomials ``a`` and weight-1 arrows."""
    _require_weight2(bs)
    rep = CheckReport("conservation" + (":literal" if literal else ""))
    alg = bs.alg
    names = bs.weight1_arrows()
    keys = [k for k in monomial_keys(alg, 2, weight_bound_len) if alg.grade(k)[0] == 2]
    for k in keys:
        a = alg.element({k: 1})
        for e1 in names:
            for e2 in names:
                lhs = bs.bracket.left_ext(a, pairing(bs, e1, e2))
                rhs = conservation_rhs(bs, a, e1, e2, literal)
                rep.check_equal([a, alg.letter(e1), alg.letter(e2)], lhs, rhs)
    return rep


def check_hamiltonian_exchange(bs: BiSympl, names=None) -> CheckReport:
    """``<<H_a, H_b>>_SN = H_{<<a, b>>}`` on pairs of arrows, slot by slot.

    Both sides are compared as polyvectors: ``H`` of a tensor ``u (x) v``
    is taken as ``H_u (x) v + u (x) H_v`` in the degree-1 slots.
    """
    rep = CheckReport("hamiltonian-exchange")
    q = bs.quiver
    alg = bs.alg
    sn = schouten(q)
    poly = sn.alphabet
    names = names or q.arrow_names
    for a in names:
        for b in names:
            ha = hamiltonian_polyvec(bs, alg.letter(a))
            hb = hamiltonian_polyvec(bs, alg.letter(b))
            lhs = sn(ha, hb)
            rhs = Tensor.zero(poly, 2)
            for (u, v), c in bs.bracket(alg.letter(a), alg.letter(b)).terms.items():
                hu = hamiltonian_polyvec(bs, alg.element({u: 1})) if u[0] >= 0 else None
                hv = hamiltonian_polyvec(bs, alg.element({v: 1})) if v[0] >= 0 else None
                if hu:
                    rhs = rhs + Tensor(poly, 2, {(ku, v): c * cu for ku, cu in hu.terms.items()})
                if hv:
                    rhs = rhs + Tensor(poly, 2, {(u, kv): c * cv for kv, cv in hv.terms.items()})
            rep.check_equal([alg.letter(a), alg.letter(b)], lhs, rhs)
    return rep


def check_bisymplectic(bs: BiSympl, weight_bound: int = 2) -> CheckReport:
    """Closedness, the Hamiltonian property, and the double Poisson suite on small words."""
    rep = CheckReport("bisymplectic")
    alg = bs.alg
    closed = CheckReport("closed")
    closed.check_equal([bs.omega], univ_d(bs.omega), 0)
    rep.merge(closed)
    ham = CheckReport("hamiltonian")
    for k in monomial_keys(alg, weight_bound, 2):
        x = alg.element({k: 1})
        ham.check_equal([x], reduced_contract(hamiltonian(bs, x), bs.omega), univ_d(x))
    rep.merge(ham)
    rep.merge(check_double_poisson(bs.bracket, weight_bound, 2))
    rep.merge(check_weight_relations(bs, weight_bound, 2))
    if bs.N == 2 and bs.weight1_arrows():
        rep.merge(check_pairing_agreement(bs))
        rep.merge(flat_sharp_check(bs))
    rep.merge(casimir_check(bs.quiver))
    return rep


# ---------------------------------------------------------------------------
# endomorphisms of E_1 and the adjoint condition


@dataclass
class EndTable:
    """A bimodule map ``E_1 -> E_1 (x) B + B (x) E_1`` stored by its arrow values."""

    quiver: object
    values: dict

    def __call__(self, name: str) -> Tensor:
        alg = alphabet(self.quiver, "alg")
        return self.values.get(name, Tensor.zero(alg, 2))

    def parts(self, name: str) -> tuple[Tensor, Tensor]:
        """Split a value into its ``E_1 (x) B`` and ``B (x) E_1`` components."""
        t = self(name)
        alg = t.alphabet
        left = {k: c for k, c in t.terms.items() if alg.grade(k[0])[0] == 1}
        right = {k: c for k, c in t.terms.items() if alg.grade(k[0])[0] != 1}
        return Tensor(alg, 2, left), Tensor(alg, 2, right)

    def __add__(self, other: "EndTable") -> "EndTable":
        vals = dict(self.values)
        for k, t in other.values.items():
            vals[k] = vals[k] + t if k in vals else t
        return EndTable(self.quiver, {k: t for k, t in vals.items() if t})

    def scale(self, c) -> "EndTable":
        return EndTable(self.quiver, {k: t.scale(c) for k, t in self.values.items() if c})

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        if not isinstance(other, EndTable):
            return NotImplemented
        keys = set(self.values) | set(other.values)
        return all(self(k) == other(k) for k in keys)

    def __repr__(self):
        from .frontend import render

        inner = ", ".join(f"{k}: {render(t)}" for k, t in sorted(self.values.items()))
        return f"EndTable({{{inner}}})"


def _path(alg, p) -> AlgElem:
    if isinstance(p, Element):
        return p
    if not p:
        raise NCError("invalid-input", "empty path; pass an idempotent element for a trivial path")
    return alg.word(*p) if isinstance(p, (list, tuple)) else alg.letter(p)


def _basis_check(q, r, qq, p, a, b):
    alg = alphabet(q, "alg")
    for name in (a, b):
        _weight1(q, name)
    r, qq, p = (_path(alg, x) for x in (r, qq, p))
    word = r * alg.letter(q.star(a)) * qq * alg.letter(b) * p
    if not word or len(word.terms) != 1:
        raise NCError("non-composable", "r a* q b p does not compose to a path")
    for x in (r, qq, p):
        if len(x.terms) != 1 or x.weight != 0:
            raise NCError("invalid-input", "r, q, p must be single weight-0 paths")
    return alg, r, qq, p, word


def basis_map_1(q, r, qq, p, a, b) -> EndTable:
    """``[r a* q b p]_1``: ``a -> (q b p) (x) r``, zero on the other arrows."""
    alg, r, qq, p, _ = _basis_check(q, r, qq, p, a, b)
    return EndTable(q, {a: _tens(qq * alg.letter(b) * p, r)})


def basis_map_2(q, r, qq, p, a, b) -> EndTable:
    """``[r a* q b p]_2``: ``b* -> p (x) (r a* q)``, zero on the other arrows."""
    alg, r, qq, p, _ = _basis_check(q, r, qq, p, a, b)
    return EndTable(q, {q.star(b): _tens(p, r * alg.letter(q.star(a)) * qq)})


def _tens(x: Element, y: Element) -> Tensor:
    from .algebra import tensor

    return tensor(x, y)


def basis_element(q, r, qq, p, a, b, sign=epsilon_sign) -> EndTable:
    """``s(b) [r a* q b p]_2 - s(a) [r a* q b p]_1`` for a sign function ``s``."""
    return basis_map_2(q, r, qq, p, a, b).scale(sign(q, b)) - basis_map_1(q, r, qq, p, a, b).scale(sign(q, a))


def psi_on_basis(bs: BiSympl, r, qq, p, a, b) -> EndTable:
    """``D_w(c) = <<w, c>>_omega`` on weight-1 arrows ``c``, for ``w = r a* q b p``."""
    _require_weight2(bs)
    _, _, _, _, word = _basis_check(bs.quiver, r, qq, p, a, b)
    return psi(bs, word)


def psi(bs: BiSympl, w: Element) -> EndTable:
    vals = {}
    for c in bs.weight1_arrows():
        t = bs.bracket(w, bs.alg.letter(c))
        if t:
            vals[c] = t
    return EndTable(bs.quiver, vals)


def adjoint_membership(f: EndTable, bs: BiSympl, convention: str = "graded") -> CheckReport:
    """``<a, f(b)>_L = -s_(132) <b, f(a)°>_L`` on all pairs of weight-1 arrows."""
    _require_weight2(bs)
    rep = CheckReport(f"adjoint:{convention}")
    q = bs.quiver
    alg = bs.alg
    for name, t in f.values.items():
        _weight1(q, name)
        for k in t.terms:
            if sum(alg.grade(s)[0] for s in k) != 1:
                raise NCError("invalid-input", f"value on {name!r} is not in E_1 (x) B + B (x) E_1")
    pb = pairing_bracket(bs, convention)
    names = bs.weight1_arrows()
    for a in names:
        for b in names:
            lhs = pairing_left(pb, alg.letter(a), f(b))
            rhs = -pairing_left(pb, alg.letter(b), f(a).flip()).permute(SIGMA_132)
            rep.check_equal([alg.letter(a), alg.letter(b)], lhs, rhs)
    return rep


def e1e1_basis(q, max_len: int = 2) -> list:
    """Tuples ``(r, q, p, a, b)`` with ``r a* q b p`` a path, each weight-0 piece of length <= ``max_len``.

    Pieces are returned as single-term path elements (idempotents allowed).
    """
    alg = alphabet(q, "alg")
    zero_paths = [alg.e(v) for v in q.vertices]
    for k in monomial_keys(alg, 0, max_len):
        if alg.grade(k)[0] == 0:
            zero_paths.append(alg.element({k: 1}))
    names = [a.name for a in q.arrows if a.weight == 1]
    out = []
    for a in names:
        for b in names:
            for r in zero_paths:
                for qq in zero_paths:
                    for p in zero_paths:
                        w = r * alg.letter(q.star(a)) * qq * alg.letter(b) * p
                        if w:
                            out.append((r, qq, p, a, b))
    return out
