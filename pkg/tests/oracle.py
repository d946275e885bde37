"""Naive reference implementation used to produce expected values.

Words are tuples of letter names, leftmost letter first; a trivial path
is the one-letter word ``("e<v>",)``.  Elements are dicts word -> Fraction
and tensors are dicts of word tuples -> Fraction.  Nothing here calls into
the package's arithmetic; only the quiver data is read from it.
"""

from __future__ import annotations

from fractions import Fraction


class Letters:
    def __init__(self, q, kind="alg"):
        self.info = {}
        for v in q.vertices:
            self.info[f"e{v}"] = (v, v, 0, 0)
        for a in q.arrows:
            self.info[a.name] = (a.tail, a.head, a.weight, 0)
            if kind == "form":
                self.info[f"d({a.name})"] = (a.tail, a.head, a.weight, 1)
        self.kind = kind

    def is_trivial(self, w):
        return len(w) == 1 and w[0].startswith("e") and w[0][1:].isdigit()

    def head(self, w):
        return self.info[w[0]][1]

    def tail(self, w):
        return self.info[w[-1]][0]

    def weight(self, w):
        return 0 if self.is_trivial(w) else sum(self.info[x][2] for x in w)

    def degree(self, w):
        return 0 if self.is_trivial(w) else sum(self.info[x][3] for x in w)

    def tdeg(self, w):
        return self.weight(w) + self.degree(w)

    def concat(self, u, v):
        if self.tail(u) != self.head(v):
            return None
        if self.is_trivial(u):
            return v
        if self.is_trivial(v):
            return u
        return u + v


def acc(out, k, c):
    v = out.get(k, 0) + c
    if v:
        out[k] = v
    else:
        out.pop(k, None)


def mul(L, x, y):
    out = {}
    for u, c in x.items():
        for v, d in y.items():
            w = L.concat(u, v)
            if w is not None:
                acc(out, w, c * d)
    return out


def flip(L, t):
    """``(u, v) -> (-1)^{|u||v|} (v, u)`` with total degrees."""
    out = {}
    for (u, v), c in t.items():
        s = -1 if (L.tdeg(u) * L.tdeg(v)) % 2 else 1
        acc(out, (v, u), s * c)
    return out


def circ(L, t):
    out = {}
    for (u, v), c in t.items():
        w = L.concat(v, u)
        if w is not None:
            acc(out, w, c * (-1 if (L.tdeg(u) * L.tdeg(v)) % 2 else 1))
    return out


def d(L, x):
    """Universal differential on form words; ``d(e) = 0``."""
    out = {}
    for w, c in x.items():
        if L.is_trivial(w):
            continue
        for i, letter in enumerate(w):
            if letter.startswith("d("):
                continue
            s = -1 if L.degree(w[:i]) % 2 else 1
            acc(out, w[:i] + (f"d({letter})",) + w[i + 1:], s * c)
    return out


def sandwich(L, pre, t, post, c, out):
    for (u, v), k in t.items():
        left = L.concat(pre, u) if pre else u
        right = L.concat(v, post) if post else v
        if left is None or right is None:
            continue
        acc(out, (left, right), c * k)


def apply_der(L, values, weight, x):
    """Outer double derivation with ``values[arrow]`` a 2-tensor."""
    out = {}
    for w, c in x.items():
        if L.is_trivial(w):
            continue
        for i, letter in enumerate(w):
            t = values.get(letter)
            if not t:
                continue
            s = -1 if (weight * L.weight(w[:i])) % 2 else 1
            sandwich(L, w[:i], t, w[i + 1:], s * c, out)
    return out


def contract(L, values, weight, alpha):
    """``i_T`` on form words: replaces one ``d(a)`` by ``T(a)``."""
    out = {}
    for w, c in alpha.items():
        if L.is_trivial(w):
            continue
        for i, letter in enumerate(w):
            if not letter.startswith("d("):
                continue
            t = values.get(letter[2:-1])
            if not t:
                continue
            pre = w[:i]
            s = -1 if (weight * L.weight(pre) + L.degree(pre)) % 2 else 1
            sandwich(L, pre, t, w[i + 1:], s * c, out)
    return out


def bracket(L, table, N, x, y):
    """Double bracket from its values on letter pairs.

    Leibniz in the second slot, graded skew-symmetry for the first:
    ``<<x, y>> = -(-1)^{|x|_N |y|_N} flip <<y, x>>`` with ``|x|_N = |x| - N``.
    """
    out = {}
    for wx, cx in x.items():
        for wy, cy in y.items():
            for k, c in _bw(L, table, N, wx, wy).items():
                acc(out, k, c * cx * cy)
    return out


def _bw(L, table, N, wx, wy):
    if L.is_trivial(wx) or L.is_trivial(wy):
        return {}
    if len(wy) > 1:
        out = {}
        shift = L.weight(wx) - N
        for i, letter in enumerate(wy):
            t = _bw(L, table, N, wx, (letter,))
            s = -1 if (shift * L.weight(wy[:i])) % 2 else 1
            sandwich(L, wy[:i], t, wy[i + 1:], s, out)
        return out
    if len(wx) == 1:
        return dict(table.get((wx[0], wy[0]), {}))
    rev = _bw(L, table, N, wy, wx)
    s = -1 if ((L.weight(wx) - N) * (L.weight(wy) - N)) % 2 else 1
    return {k: -s * c for k, c in flip(L, rev).items()}


def from_element(x):
    """Package element -> oracle dict."""
    alph = x.alphabet
    out = {}
    for k, c in x.terms.items():
        out[_word(alph, k)] = Fraction(c)
    return out


def from_tensor(t):
    alph = t.alphabet
    return {tuple(_word(alph, k) for k in ks): Fraction(c) for ks, c in t.terms.items()}


def _word(alph, k):
    if k[0] < 0:
        return (f"e{alph.quiver.vertices[~k[0]]}",)
    return tuple(alph.names[i] for i in k)


def e(v):
    return (f"e{v}",)
