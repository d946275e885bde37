"""Double derivations, contraction and Lie derivative operators on forms."""

from __future__ import annotations

from fractions import Fraction

from .algebra import Element, FormElem, PolyVec, Tensor, alphabet
from .errors import NCError
from .forms import as_form, d_tensor


def _acc(out, key, val):
    v = out.get(key, 0) + val
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def _sandwich(alph, left, terms, right, coeff, out):
    """Add ``coeff * left . (u (x) v) . right`` for each term of ``terms``."""
    concat = alph.concat
    for (u, v), c in terms.items():
        nu = concat(left, u) if left else u
        if nu is None:
            continue
        nv = concat(v, right) if right else v
        if nv is None:
            continue
        _acc(out, (nu, nv), c * coeff)


class DoubleDer:
    """A homogeneous double derivation stored by its values on arrows.

    ``values`` maps arrow names to pair tensors in the path algebra.
    Evaluation on paths is the graded Leibniz rule for the outer
    bimodule structure: ``T(xy) = T(x) y + (-1)^(|T||x|) x T(y)``.
    """

    def __init__(self, quiver, weight: int, values: dict | None = None):
        self.quiver = quiver
        self.weight = weight
        alg = alphabet(quiver, "alg")
        self._alg = alg
        vals = {}
        for name, t in (values or {}).items():
            a = quiver.arrow(name)
            if not t:
                continue
            if t.alphabet.kind != "alg":
                t = t.as_kind("alg")
            h, tl = quiver.vertex_index(a.head), quiver.vertex_index(a.tail)
            for (u, v) in t.terms:
                if alg.head(u) != h or alg.tail(v) != tl:
                    raise NCError("invalid-input", f"value on {name!r} is not typed by the arrow")
                if alg.grade(u)[0] + alg.grade(v)[0] != a.weight + weight:
                    raise NCError("invalid-input", f"value on {name!r} has the wrong weight")
            vals[name] = t
        self.values = vals
        self._by_id = {quiver.arrow_index(n): t for n, t in vals.items()}
        self._form_cache = {}

    def __repr__(self):
        from .frontend import render

        inner = ", ".join(f"{n}: {render(t)}" for n, t in sorted(self.values.items()))
        return f"DoubleDer(weight={self.weight}, {{{inner}}})"

    def __eq__(self, other):
        return (
            isinstance(other, DoubleDer)
            and self.quiver == other.quiver
            and self.values == other.values
            and (self.weight == other.weight or not self.values)
        )

    def __add__(self, other: "DoubleDer") -> "DoubleDer":
        if self.weight != other.weight and self.values and other.values:
            raise NCError("invalid-input", "adding double derivations of different weight")
        vals = dict(self.values)
        for n, t in other.values.items():
            vals[n] = vals[n] + t if n in vals else t
        w = self.weight if self.values else other.weight
        return DoubleDer(self.quiver, w, vals)

    def scale(self, c) -> "DoubleDer":
        return DoubleDer(self.quiver, self.weight, {n: t.scale(c) for n, t in self.values.items()})

    def arrow_value(self, name: str) -> Tensor:
        self.quiver.arrow(name)
        return self.values.get(name, Tensor.zero(self._alg, 2))

    def _values_in(self, alph):
        key = alph.kind
        cached = self._form_cache.get(key)
        if cached is None:
            cached = {i: t.as_kind(key).terms for i, t in self._by_id.items()}
            self._form_cache[key] = cached
        return cached

    def apply(self, x: Element) -> Tensor:
        """Evaluate on a path-algebra element."""
        if not isinstance(x, Element):
            raise NCError("invalid-input", "double derivations act on path-algebra elements")
        alph = x.alphabet
        if alph.kind != "alg":
            x = x.as_kind("alg")
            alph = x.alphabet
        vals = self._values_in(alph)
        theta = self.weight
        grade = alph.grade
        out: dict = {}
        for k, c in x.terms.items():
            if k[0] < 0:
                continue
            for j, lid in enumerate(k):
                t = vals.get(lid)
                if not t:
                    continue
                pre = k[:j]
                s = (theta * grade(pre)[0]) & 1 if pre else 0
                _sandwich(alph, pre, t, k[j + 1:], -c if s else c, out)
        return Tensor(alph, 2, out)

    __call__ = apply

    def to_polyvec(self) -> PolyVec:
        """The degree-1 polyvector ``sum +-v D(c) u`` whose evaluation is this derivation.

        The sign of each word is read off from evaluating it, so the
        result agrees with :func:`from_polyvec` whatever the grading.
        """
        from .polyvec import evaluate

        q = self.quiver
        poly = alphabet(q, "poly")
        alg = self._alg
        out: dict = {}
        for name, t in self.values.items():
            c = q.arrow_index(name)
            dc = (poly.raise_letter(c),)
            for (u, v), k in t.terms.items():
                word = poly.concat(poly.concat(v, dc), u)
                probe = evaluate(poly.element({word: 1}), alg.element({(c,): 1}))
                _acc(out, word, k * probe.terms[(u, v)])
        return poly.element(out)


def coord_der(q, name: str) -> DoubleDer:
    """``D(a)``: ``a -> e_h(a) (x) e_t(a)``, zero on the other arrows."""
    a = q.arrow(name)
    alg = alphabet(q, "alg")
    t = Tensor(alg, 2, {(alg.trivial(q.vertex_index(a.head)), alg.trivial(q.vertex_index(a.tail))): 1})
    return DoubleDer(q, -a.weight, {name: t})


def from_polyvec(pv: PolyVec) -> list[DoubleDer]:
    """Split a degree-1 polyvector into homogeneous double derivations."""
    from .polyvec import evaluate

    q = pv.quiver
    out = []
    for g, part in sorted(pv.homogeneous_parts().items()):
        if g[1] != 1:
            raise NCError("invalid-polyvector-degree", "double derivations have degree 1")
        vals = {}
        for a in q.arrows:
            v = evaluate(part, alphabet(q, "alg").letter(a.name))
            if v:
                vals[a.name] = v
        out.append(DoubleDer(q, g[0], vals))
    return out


def _as_ders(theta) -> list[DoubleDer]:
    if isinstance(theta, DoubleDer):
        return [theta]
    if isinstance(theta, PolyVec):
        return from_polyvec(theta)
    raise NCError("invalid-input", f"not a double derivation: {type(theta).__name__}")


def _contract_one(theta: DoubleDer, alpha: FormElem) -> dict:
    alph = alpha.alphabet
    n = alph.n_arrows
    vals = theta._values_in(alph)
    w = theta.weight
    grade = alph.grade
    out: dict = {}
    for k, c in alpha.terms.items():
        if k[0] < 0:
            continue
        for j, lid in enumerate(k):
            if lid < n:
                continue
            t = vals.get(lid - n)
            if not t:
                continue
            pre = k[:j]
            if pre:
                g = grade(pre)
                s = (w * g[0] + g[1]) & 1
            else:
                s = 0
            _sandwich(alph, pre, t, k[j + 1:], -c if s else c, out)
    return out


def contract(theta, alpha: Element) -> Tensor:
    """``i_T``: bidegree ``(|T|, -1)`` double derivation of forms with ``i_T(d a) = T(a)``."""
    alpha = as_form(alpha)
    alph = alpha.alphabet
    out: dict = {}
    for th in _as_ders(theta):
        for k, c in _contract_one(th, alpha).items():
            _acc(out, k, c)
    return Tensor(alph, 2, out)


def reduced_contract(theta, alpha: Element) -> FormElem:
    """``iota_T = °(i_T)``."""
    return contract(theta, alpha).circ()


def _lie_one(theta: DoubleDer, alpha: FormElem) -> Tensor:
    alph = alpha.alphabet
    n = alph.n_arrows
    vals = theta._values_in(alph)
    w = theta.weight
    grade = alph.grade
    out: dict = {}
    dvals = {}
    for lid, t in vals.items():
        dvals[lid] = d_tensor(Tensor(alph, 2, t)).terms
    for k, c in alpha.terms.items():
        if k[0] < 0:
            continue
        for j, lid in enumerate(k):
            t = vals.get(lid) if lid < n else dvals.get(lid - n)
            if not t:
                continue
            pre = k[:j]
            s = (w * grade(pre)[0]) & 1 if pre else 0
            _sandwich(alph, pre, t, k[j + 1:], -c if s else c, out)
    return Tensor(alph, 2, out)


def lie(theta, alpha: Element) -> Tensor:
    """``L_T``: bidegree ``(|T|, 0)``, ``L_T(a) = T(a)``, ``L_T(d a) = d T(a)``."""
    alpha = as_form(alpha)
    out = Tensor.zero(alpha.alphabet, 2)
    for th in _as_ders(theta):
        out = out + _lie_one(th, alpha)
    return out


def reduced_lie(theta, alpha: Element) -> FormElem:
    return lie(theta, alpha).circ()


def contract_tensor(theta, t: Tensor) -> Tensor:
    """Slotwise extension of ``i_T`` to tensors of forms, raising the arity by one.

    Slot ``j`` is contracted after ``i_T`` has moved past slots ``0..j-1``,
    which contributes ``(-1)^((|T|, -1).bideg)`` per slot.
    """
    alph = t.alphabet
    if alph.kind != "form":
        t = t.as_kind("form")
        alph = t.alphabet
    grade = alph.grade
    out: dict = {}
    for th in _as_ders(theta):
        w = th.weight
        for ks, c in t.terms.items():
            s = 0
            for j, k in enumerate(ks):
                single = alph.element({k: 1})
                for (u, v), cc in _contract_one(th, single).items():
                    _acc(out, ks[:j] + (u, v) + ks[j + 1:], -cc * c if s else cc * c)
                g = grade(k)
                s ^= (w * g[0] + g[1]) & 1
    return Tensor(alph, t.arity + 1, out)


def euler_der(q) -> DoubleDer:
    """Weight-0 double derivation ``a -> |a| a (x) e_t(a)`` (a lift of the Euler field)."""
    alg = alphabet(q, "alg")
    vals = {}
    for a in q.arrows:
        if a.weight:
            t = Tensor(alg, 2, {((q.arrow_index(a.name),), alg.trivial(q.vertex_index(a.tail))): Fraction(a.weight)})
            vals[a.name] = t
    return DoubleDer(q, 0, vals)
