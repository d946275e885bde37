"""Non-commutative differential forms and the Karoubi-de Rham quotient.

A form word is a word in the ``form`` alphabet: arrows and d-letters,
e.g. ``(a, d(b), c)`` is ``a*d(b)*c``.  Path segments between d-letters
are kept expanded letter by letter, which makes cyclic rotation trivial.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    AlgElem,
    Element,
    FormElem,
    Tensor,
    alphabet,
    cyclic_project,
    mul,
)
from .errors import NCError
from .quiver import hat_name


def forms(q) -> "object":
    """The form alphabet of a quiver."""
    return alphabet(q, "form")


def as_form(x: Element) -> FormElem:
    if isinstance(x, FormElem):
        return x
    if isinstance(x, AlgElem):
        return x.as_kind("form")
    raise NCError("invalid-input", f"expected a path or form, got {type(x).__name__}")


def _d_terms(alph, key, coeff, out):
    n = alph.n_arrows
    if key[0] < 0:
        return
    odd = 0
    for j, lid in enumerate(key):
        if lid < n:
            nk = key[:j] + (lid + n,) + key[j + 1:]
            v = out.get(nk, 0) + (-coeff if odd else coeff)
            if v:
                out[nk] = v
            else:
                out.pop(nk, None)
        else:
            odd ^= 1


def univ_d(x: Element) -> FormElem:
    """The universal differential, a bidegree (0, 1) derivation with d(e_i) = 0."""
    x = as_form(x)
    alph = x.alphabet
    out: dict = {}
    for k, c in x.terms.items():
        _d_terms(alph, k, c, out)
    return alph.element(out)


def d_tensor(t: Tensor) -> Tensor:
    """``d`` on tensors of forms: ``d(u (x) v) = du (x) v + (-1)^||u|| u (x) dv``."""
    alph = t.alphabet
    if alph.kind != "form":
        t = t.as_kind("form")
        alph = t.alphabet
    out: dict = {}
    for ks, c in t.terms.items():
        odd = 0
        for j, k in enumerate(ks):
            sub: dict = {}
            _d_terms(alph, k, -c if odd else c, sub)
            for nk, v in sub.items():
                nks = ks[:j] + (nk,) + ks[j + 1:]
                w = out.get(nks, 0) + v
                if w:
                    out[nks] = w
                else:
                    out.pop(nks, None)
            odd ^= alph.grade(k)[1] & 1
    return Tensor(alph, t.arity, out)


def form_mul(alpha: Element, beta: Element) -> FormElem:
    return mul(as_form(alpha), as_form(beta))


def form_degree_parts(alpha: FormElem) -> dict:
    parts: dict = {}
    for g, p in alpha.homogeneous_parts().items():
        parts[g[1]] = parts.get(g[1], 0) + p
    return parts


@dataclass(frozen=True)
class DRClass:
    """A Karoubi-de Rham class held by its cyclic normal form."""

    rep: FormElem

    def __bool__(self):
        return bool(self.rep)

    def __add__(self, other: "DRClass") -> "DRClass":
        return DRClass(cyclic_project(self.rep + other.rep))

    def __neg__(self):
        return DRClass(-self.rep)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "DRClass":
        return DRClass(self.rep.scale(c))


def dr_normalize(alpha: Element) -> DRClass:
    """Rotate every word to its minimal signed rotation; non-loops vanish."""
    return DRClass(cyclic_project(as_form(alpha)))


def dr_d(c) -> DRClass:
    rep = c.rep if isinstance(c, DRClass) else as_form(c)
    return dr_normalize(univ_d(rep))


def euler_contract(alpha: Element) -> FormElem:
    """Contraction with the Euler derivation: ``d(a) -> |a| a``, sign ``(-1)^||prefix||``."""
    alpha = as_form(alpha)
    alph = alpha.alphabet
    n = alph.n_arrows
    out: dict = {}
    for k, c in alpha.terms.items():
        if k[0] < 0:
            continue
        odd = 0
        for j, lid in enumerate(k):
            if lid >= n:
                w = alph.weights[lid]
                if w:
                    nk = k[:j] + (lid - n,) + k[j + 1:]
                    v = out.get(nk, 0) + (-c if odd else c) * w
                    if v:
                        out[nk] = v
                    else:
                        out.pop(nk, None)
                odd ^= 1
    return alph.element(out)


def euler_lie(alpha: Element) -> FormElem:
    """Lie derivative along the Euler derivation: multiplication by the weight."""
    alpha = as_form(alpha)
    g = alpha.alphabet.grade
    return alpha._new({k: c * g(k)[0] for k, c in alpha.terms.items() if g(k)[0]})


def lambda_inject(phi: Element, ambient=None) -> AlgElem:
    """Substitute ``d(a) -> a^`` turning a form over a weight-0 quiver into a path.

    ``ambient`` defaults to the standard double of ``phi``'s quiver; any
    quiver containing ``a`` (weight 0) and ``a^`` (weight 1, same ends)
    for every arrow used is accepted.
    """
    from .quiver import standard_double

    phi = as_form(phi)
    src = phi.alphabet
    q = src.quiver
    for a in q.arrows:
        if a.weight != 0:
            raise NCError("invalid-context", "lambda needs a form over a weight-0 quiver")
    if ambient is None:
        ambient = q.cached("standard-double", lambda: standard_double(q))
    tgt = alphabet(ambient, "alg")
    n = src.n_arrows
    letter_map = []
    for a in q.arrows:
        if not ambient.has_arrow(a.name) or not ambient.has_arrow(hat_name(a.name)):
            raise NCError("invalid-context", f"ambient quiver lacks {a.name!r} or its hat")
        plain, hat = ambient.arrow(a.name), ambient.arrow(hat_name(a.name))
        if plain.weight != 0 or hat.weight != 1 or (hat.tail, hat.head) != (a.tail, a.head):
            raise NCError("invalid-context", "ambient quiver is not of standard shape")
        letter_map.append(ambient.arrow_index(a.name))
    hats = [ambient.arrow_index(hat_name(a.name)) for a in q.arrows]
    vmap = [ambient.vertex_index(v) for v in q.vertices]
    out: dict = {}
    for k, c in phi.terms.items():
        if k[0] < 0:
            nk = (~vmap[~k[0]],)
        else:
            nk = tuple(letter_map[lid] if lid < n else hats[lid - n] for lid in k)
        out[nk] = out.get(nk, 0) + c
    return tgt.element(out)
