"""Double brackets: generator tables, Schouten-Nijenhuis, and mu(P).

A double bracket here is bilinear on words of one alphabet and a graded
double derivation in its second argument.  Brackets are evaluated on
basis words and memoized; the bilinear extension is done by
:meth:`DoubleBracket.__call__`.

Conventions (``N`` is the bracket weight, ``|x|_N = |x| + N``)::

    <<x, yz>> = <<x, y>> z + (-1)^(|x|_N |y|) y <<x, z>>
    <<x, y>>  = -(-1)^(|x|_N |y|_N) <<y, x>>°

where ``|.|`` is the weight in the path algebra and the total degree
(weight + polyvector degree) on polyvectors.
"""

from __future__ import annotations

from itertools import product as _cartesian

from .algebra import Alphabet, Element, PolyVec, Tensor, alphabet, cycle_perm, cyclic_project
from .errors import NCError
from .report import CheckReport


def _acc(out, key, val):
    v = out.get(key, 0) + val
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def flip_terms(alph: Alphabet, terms: dict) -> dict:
    grade, koszul = alph.grade, alph.koszul
    out: dict = {}
    for (u, v), c in terms.items():
        _acc(out, (v, u), -c if koszul(grade(u), grade(v)) else c)
    return out


class DoubleBracket:
    """Base class: subclasses provide :meth:`pair` on basis words."""

    def __init__(self, alph: Alphabet, N: int, name: str = "bracket"):
        self.alphabet = alph
        self.N = N
        self.name = name
        self._pairs: dict = {}

    @property
    def quiver(self):
        return self.alphabet.quiver

    def shift(self, key) -> int:
        alph = self.alphabet
        return alph.tdeg(alph.grade(key)) + self.N

    def compute_pair(self, kx, ky) -> dict:
        raise NotImplementedError

    def pair(self, kx, ky) -> dict:
        r = self._pairs.get((kx, ky))
        if r is None:
            if kx[0] < 0 or ky[0] < 0:
                r = {}
            else:
                r = self.compute_pair(kx, ky)
            self._pairs[(kx, ky)] = r
        return r

    def _coerce(self, x: Element) -> Element:
        if x.alphabet != self.alphabet:
            if x.alphabet.quiver != self.alphabet.quiver:
                raise NCError("incompatible-quiver", "element and bracket live on different quivers")
            return x.as_kind(self.alphabet.kind)
        return x

    def __call__(self, x: Element, y: Element) -> Tensor:
        x, y = self._coerce(x), self._coerce(y)
        out: dict = {}
        for kx, cx in x.terms.items():
            for ky, cy in y.terms.items():
                c = cx * cy
                for ks, v in self.pair(kx, ky).items():
                    _acc(out, ks, v * c)
        return Tensor(self.alphabet, 2, out)

    def assoc(self, x: Element, y: Element) -> Element:
        """The associated bracket ``{x, y} = m <<x, y>>``."""
        return self(x, y).mult()

    def left_ext(self, x: Element, t: Tensor) -> Tensor:
        """``<<x, t>>_L``: bracket into the first slot of ``t``."""
        x = self._coerce(x)
        out: dict = {}
        for kx, cx in x.terms.items():
            for ks, c in t.terms.items():
                for (u, v), w in self.pair(kx, ks[0]).items():
                    _acc(out, (u, v) + ks[1:], w * c * cx)
        return Tensor(self.alphabet, t.arity + 1, out)

    def assoc_on_tensor(self, x: Element, t: Tensor) -> Tensor:
        """``{x, u (x) v} = {x, u} (x) v + (-1)^(|x|_N |u|) u (x) {x, v}``."""
        x = self._coerce(x)
        alph = self.alphabet
        out: dict = {}
        for kx, cx in x.terms.items():
            sx = self.shift(kx) & 1
            for ks, c in t.terms.items():
                s = 0
                for j, k in enumerate(ks):
                    m = Tensor(alph, 2, self.pair(kx, k)).mult()
                    for nk, w in m.terms.items():
                        _acc(out, ks[:j] + (nk,) + ks[j + 1:], (-w if s else w) * c * cx)
                    if sx:
                        s ^= alph.tdeg(alph.grade(k)) & 1
        return Tensor(alph, t.arity, out)


class LeibnizBracket(DoubleBracket):
    """Bracket determined by its values ``<<x, letter>>`` via the Leibniz rule."""

    def letter_value(self, kx, lid) -> dict:
        raise NotImplementedError

    def compute_pair(self, kx, ky) -> dict:
        alph = self.alphabet
        sx = self.shift(kx) & 1
        concat = alph.concat
        out: dict = {}
        for j, lid in enumerate(ky):
            t = self.letter_value(kx, lid)
            if not t:
                continue
            pre, post = ky[:j], ky[j + 1:]
            s = (alph.tdeg(alph.grade(pre)) & 1) if (sx and pre) else 0
            for (u, v), c in t.items():
                nu = concat(pre, u) if pre else u
                if nu is None:
                    continue
                nv = concat(v, post) if post else v
                if nv is None:
                    continue
                _acc(out, (nu, nv), -c if s else c)
        return out


class GeneratorBracket(LeibnizBracket):
    """Double bracket given by a table of values on pairs of letters.

    The table is completed by skew-symmetry and extended to words by
    the Leibniz rule in the second argument (first argument letters) and
    skew-symmetry (longer first arguments).
    """

    def __init__(self, alph: Alphabet, N: int, table: dict, name: str = "bracket",
                 complete: bool = True):
        super().__init__(alph, N, name)
        full: dict = {}
        for (c, d), t in table.items():
            terms = t.terms if isinstance(t, Tensor) else dict(t)
            if terms:
                full[(c, d)] = terms
        for (c, d), terms in list(full.items()) if complete else ():
            sign = -1 if (self.shift((c,)) * self.shift((d,))) & 1 == 0 else 1
            other = {k: v * sign for k, v in flip_terms(alph, terms).items()}
            if (d, c) in full:
                if full[(d, c)] != other:
                    raise NCError("invalid-input", "generator table is not skew-symmetric")
            else:
                full[(d, c)] = other
        self.table = full
        self._letters: dict = {}

    def letter_value(self, kx, lid) -> dict:
        if len(kx) == 1:
            return self.table.get((kx[0], lid), {})
        key = (kx, lid)
        r = self._letters.get(key)
        if r is None:
            back = self.pair((lid,), kx)
            if (self.shift(kx) * self.shift((lid,))) & 1:
                r = flip_terms(self.alphabet, back)
            else:
                r = {k: -v for k, v in flip_terms(self.alphabet, back).items()}
            self._letters[key] = r
        return r


class FunctionBracket(DoubleBracket):
    """Bracket defined by an arbitrary function on basis words (used for mutations)."""

    def __init__(self, alph, N, fn, name="bracket"):
        super().__init__(alph, N, name)
        self.fn = fn

    def compute_pair(self, kx, ky):
        return dict(self.fn(kx, ky))


def zero_bracket(q, N: int = 0, kind: str = "alg") -> DoubleBracket:
    return GeneratorBracket(alphabet(q, kind), N, {}, name="zero")


def schouten(q) -> GeneratorBracket:
    """The double Schouten-Nijenhuis bracket on polyvectors, weight -1."""

    def build():
        alph = alphabet(q, "poly")
        table = {}
        for i, a in enumerate(q.arrows):
            h = alph.trivial(q.vertex_index(a.head))
            t = alph.trivial(q.vertex_index(a.tail))
            table[(alph.raise_letter(i), i)] = {(h, t): 1}
        return GeneratorBracket(alph, -1, table, name="schouten-nijenhuis")

    return q.cached("schouten", build)


def sn_bracket(x: Element, y: Element) -> Tensor:
    x = x.as_kind("poly")
    y = y.as_kind("poly")
    return schouten(x.quiver)(x, y)


def evaluate(pv: Element, b: Element) -> Tensor:
    """Value of a degree-1 polyvector on a path: ``<<pv, b>>`` for the SN bracket."""
    return sn_bracket(pv, b).as_kind("alg")


def sn_assoc(x: Element, y: Element) -> PolyVec:
    """``{x, y} = m <<x, y>>`` for the SN bracket."""
    return sn_bracket(x, y).mult()


class MuBracket(GeneratorBracket):
    """The double bracket induced by a degree-2 polyvector ``P``.

    On a pair of letters ``<<c, d>>_P = <<{P, c}, d>>`` with both brackets
    Schouten-Nijenhuis, ``{P, c}`` being the Hamiltonian polyvector of
    ``c``.  Longer words are reached by the Leibniz rule in the second
    argument and skew-symmetry in the first, as for any double bracket.
    The letter table is *not* completed by skew-symmetry, so the skew
    check on letters is a genuine test of ``P``.
    """

    def __init__(self, P: PolyVec, name: str = "mu"):
        if not isinstance(P, Element) or P.alphabet.kind != "poly":
            raise NCError("invalid-input", "mu expects a polyvector")
        gs = P.grades()
        if any(g[1] != 2 for g in gs):
            raise NCError("invalid-polyvector-degree", "mu needs a polyvector of degree 2")
        weights = {g[0] for g in gs}
        if len(weights) > 1:
            raise NCError("invalid-input", "mu needs a homogeneous polyvector")
        N = weights.pop() if weights else 0
        q = P.quiver
        sn = schouten(q)
        alg = alphabet(q, "alg")
        concat = sn.alphabet.concat
        table = {}
        for c in range(alg.n_arrows):
            ham: dict = {}
            for kp, cp in P.terms.items():
                for (u, v), w in sn.pair(kp, (c,)).items():
                    k = concat(u, v)
                    if k is not None:
                        _acc(ham, k, w * cp)
            for d in range(alg.n_arrows):
                out: dict = {}
                for kh, ch in ham.items():
                    for ks, w in sn.pair(kh, (d,)).items():
                        _acc(out, ks, w * ch)
                if out:
                    table[(c, d)] = out
        super().__init__(alg, N, table, name=name, complete=False)
        self.P = P


def mu(P: PolyVec) -> MuBracket:
    return MuBracket(P)


def assoc_bracket(db: DoubleBracket, x: Element, y) -> Element | Tensor:
    """``{x, y}``; on tensors it acts slotwise with the Leibniz sign."""
    if isinstance(y, Tensor):
        return db.assoc_on_tensor(x, y)
    return db.assoc(x, y)


# ---------------------------------------------------------------------------
# enumeration helpers


def monomial_keys(alph: Alphabet, weight_bound: int, max_len: int | None = None,
                  min_weight: int | None = None) -> list:
    """Nontrivial words with weight in ``[min_weight, weight_bound]``, length <= ``max_len``.

    Words are grown letter by letter; since polyvector letters can carry
    negative weight, a length bound is always applied.
    """
    if max_len is None:
        max_len = weight_bound + 1
    n = len(alph.names)
    out = []
    frontier = [(lid,) for lid in range(n)]
    length = 1
    while frontier and length <= max_len:
        nxt = []
        for k in frontier:
            w = alph.grade(k)[0]
            if w <= weight_bound and (min_weight is None or w >= min_weight):
                out.append(k)
            if length < max_len:
                for lid in range(n):
                    if alph.tails[k[-1]] == alph.heads[lid]:
                        nxt.append(k + (lid,))
        frontier = nxt
        length += 1
    out.sort(key=alph.sort_key)
    if alph.kind != "poly":
        out = [k for k in out if alph.grade(k)[0] <= weight_bound]
    return out


def _tensor_terms_eq(a: dict, b: dict) -> bool:
    return a == b


# ---------------------------------------------------------------------------
# axiom checks


def _jacobi_terms(db: DoubleBracket, ka, kb, kc) -> dict:
    """Left side of the graded double Jacobi identity on basis words."""
    alph = db.alphabet
    tdeg, grade = alph.tdeg, alph.grade
    total: dict = {}

    def inner(k1, k2, k3):
        out: dict = {}
        for (u, v), c in db.pair(k2, k3).items():
            for (p, r), w in db.pair(k1, u).items():
                _acc(out, (p, r, v), c * w)
        return Tensor(alph, 3, out)

    da, db_, dc = (tdeg(grade(k)) for k in (ka, kb, kc))
    sa, sc = db.shift(ka), db.shift(kc)
    t1 = inner(ka, kb, kc)
    t2 = inner(kb, kc, ka).permute(cycle_perm(3, 1, 2, 3))
    if (sa * (db_ + dc)) & 1:
        t2 = -t2
    t3 = inner(kc, ka, kb).permute(cycle_perm(3, 1, 3, 2))
    if (sc * (da + db_)) & 1:
        t3 = -t3
    for t in (t1, t2, t3):
        for ks, c in t.terms.items():
            _acc(total, ks, c)
    return total


def jacobi_defect(db: DoubleBracket, a: Element, b: Element, c: Element) -> Tensor:
    out: dict = {}
    for ka, ca in db._coerce(a).terms.items():
        for kb, cb in db._coerce(b).terms.items():
            for kc, cc in db._coerce(c).terms.items():
                if ka[0] < 0 or kb[0] < 0 or kc[0] < 0:
                    continue
                for ks, v in _jacobi_terms(db, ka, kb, kc).items():
                    _acc(out, ks, v * ca * cb * cc)
    return Tensor(db.alphabet, 3, out)


def check_leibniz(db: DoubleBracket, keys: list, report: CheckReport | None = None) -> CheckReport:
    alph = db.alphabet
    rep = report or CheckReport(f"{db.name}:leibniz")
    for kx in keys:
        x = alph.element({kx: 1})
        sx = db.shift(kx) & 1
        for ky, kz in _cartesian(keys, keys):
            yz = alph.concat(ky, kz)
            if yz is None:
                continue
            y, z = alph.element({ky: 1}), alph.element({kz: 1})
            lhs = Tensor(alph, 2, db.pair(kx, yz))
            rhs = db(x, y) * z
            t = y * db(x, z)
            if sx and alph.tdeg(alph.grade(ky)) & 1:
                t = -t
            rhs = rhs + t
            rep.check_equal([x, y, z], lhs, rhs)
    return rep


def check_skew(db: DoubleBracket, keys: list, report: CheckReport | None = None) -> CheckReport:
    alph = db.alphabet
    rep = report or CheckReport(f"{db.name}:skew")
    for kx, ky in _cartesian(keys, keys):
        lhs = db.pair(kx, ky)
        back = flip_terms(alph, db.pair(ky, kx))
        sign = 1 if (db.shift(kx) * db.shift(ky)) & 1 else -1
        rhs = {k: v * sign for k, v in back.items() if v}
        rep.check_equal(
            [alph.element({kx: 1}), alph.element({ky: 1})],
            Tensor(alph, 2, lhs),
            Tensor(alph, 2, rhs),
        )
    return rep


def check_jacobi(db: DoubleBracket, keys: list, report: CheckReport | None = None) -> CheckReport:
    alph = db.alphabet
    rep = report or CheckReport(f"{db.name}:jacobi")
    zero = Tensor(alph, 3, {})
    for ka, kb, kc in _cartesian(keys, keys, keys):
        t = _jacobi_terms(db, ka, kb, kc)
        rep.check_equal(
            [alph.element({k: 1}) for k in (ka, kb, kc)], Tensor(alph, 3, t), zero
        )
    return rep


def check_mixed(db: DoubleBracket, keys: list, report: CheckReport | None = None) -> CheckReport:
    """``{a, <<b, c>>} - <<{a, b}, c>> - <<b, {a, c}>> = 0`` with the Leibniz sign."""
    alph = db.alphabet
    rep = report or CheckReport(f"{db.name}:mixed")
    for ka, kb, kc in _cartesian(keys, keys, keys):
        a, b, c = (alph.element({k: 1}) for k in (ka, kb, kc))
        lhs = db.assoc_on_tensor(a, db(b, c))
        rhs = db(db.assoc(a, b), c) + db(b, db.assoc(a, c))
        rep.check_equal([a, b, c], lhs, rhs)
    return rep


def check_loday(db: DoubleBracket, keys: list, report: CheckReport | None = None) -> CheckReport:
    """``{a,{b,c}} = {{a,b},c} + (-1)^(|a|_N |b|_N) {b,{a,c}}``."""
    alph = db.alphabet
    rep = report or CheckReport(f"{db.name}:loday")
    for ka, kb, kc in _cartesian(keys, keys, keys):
        a, b, c = (alph.element({k: 1}) for k in (ka, kb, kc))
        lhs = db.assoc(a, db.assoc(b, c))
        last = db.assoc(b, db.assoc(a, c))
        if (db.shift(ka) * db.shift(kb)) & 1:
            last = -last
        rhs = db.assoc(db.assoc(a, b), c) + last
        rep.check_equal([a, b, c], lhs, rhs)
    return rep


SUITES = {
    "leibniz": check_leibniz,
    "skew": check_skew,
    "jacobi": check_jacobi,
    "mixed": check_mixed,
    "loday": check_loday,
}


def check_double_poisson(
    db: DoubleBracket,
    weight_bound: int = 3,
    max_len: int | None = None,
    suites=("leibniz", "skew", "jacobi"),
    keys: list | None = None,
) -> CheckReport:
    """Leibniz, skew-symmetry and double Jacobi on all basis words up to the bound.

    Letters are always included, whatever their weight.
    """
    alph = db.alphabet
    if keys is None:
        keys = monomial_keys(alph, weight_bound, max_len)
        letters = [(i,) for i in range(len(alph.names))]
        keys = sorted(set(keys) | set(letters), key=alph.sort_key)
    report = CheckReport(f"double-poisson:{db.name}")
    for s in suites:
        report.merge(SUITES[s](db, keys))
    report.notes.append(f"{len(keys)} basis words, weight bound {weight_bound}")
    return report


def ddp_defect(P: PolyVec) -> PolyVec:
    """``{P, P}`` modulo graded commutators; zero for a differential double Poisson ``P``."""
    return cyclic_project(sn_assoc(P, P))


def canonical_P(q) -> PolyVec:
    """``sum D(a) D(a*)`` over the original arrows of a doubled quiver."""
    if not q.is_doubled:
        raise NCError("invalid-quiver", "quiver is not doubled")
    alph = alphabet(q, "poly")
    out = alph.zero()
    for a in q.originals:
        out = out + alph.word(f"D({a})", f"D({q.star(a)})")
    return out
