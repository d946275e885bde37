"""Sparse exact arithmetic on graded path algebras and their tensor powers.

Every algebra in the package is a path algebra over some *alphabet*:

* ``alg``  -- the arrows of the quiver, bidegree ``(|a|, 0)``;
* ``form`` -- arrows plus letters ``d(a)`` with the same endpoints,
  bidegree ``(|a|, 1)``;
* ``poly`` -- arrows plus letters ``D(a)`` standing for the coordinate
  double derivation of ``a``.  ``D(a)`` runs from ``h(a)`` to ``t(a)``,
  has weight ``-|a|`` and polyvector degree 1.

A basis word is stored as a tuple of letter ids, leftmost letter first
(paths compose right to left, so ``(a2, a1)`` is ``a2*a1``).  The
trivial path at the vertex with index ``i`` is the one-tuple ``(~i,)``.
Arrow letter ids coincide across alphabets, so algebra words are also
valid form and polyvector words.

Signs: forms and paths use the bigraded rule
``(-1)^(|u||v| + ||u|| ||v||)``; polyvectors use the total degree
``weight + degree``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as _cartesian
from typing import Iterable, Iterator

from .errors import NCError
from .quiver import GradedQuiver

KINDS = ("alg", "form", "poly")

Key = tuple


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient {c!r}")


class Alphabet:
    """Letters of one of the three word algebras built on a quiver."""

    def __init__(self, quiver: GradedQuiver, kind: str):
        if kind not in KINDS:
            raise NCError("invalid-input", f"unknown alphabet kind {kind!r}")
        self.quiver = quiver
        self.kind = kind
        vidx = quiver.vertex_index
        names, tails, heads, weights, degrees, base = [], [], [], [], [], []
        for i, a in enumerate(quiver.arrows):
            names.append(a.name)
            tails.append(vidx(a.tail))
            heads.append(vidx(a.head))
            weights.append(a.weight)
            degrees.append(0)
            base.append(i)
        if kind == "form":
            for i, a in enumerate(quiver.arrows):
                names.append(f"d({a.name})")
                tails.append(vidx(a.tail))
                heads.append(vidx(a.head))
                weights.append(a.weight)
                degrees.append(1)
                base.append(i)
        elif kind == "poly":
            for i, a in enumerate(quiver.arrows):
                names.append(f"D({a.name})")
                tails.append(vidx(a.head))
                heads.append(vidx(a.tail))
                weights.append(-a.weight)
                degrees.append(1)
                base.append(i)
        self.names = names
        self.tails = tails
        self.heads = heads
        self.weights = weights
        self.degrees = degrees
        self.base = base
        self.n_arrows = len(quiver.arrows)
        self.n_vertices = len(quiver.vertices)
        self._ids = {n: i for i, n in enumerate(names)}
        self._grades: dict = {}

    def __eq__(self, other):
        return (
            isinstance(other, Alphabet)
            and self.kind == other.kind
            and (self.quiver is other.quiver or self.quiver == other.quiver)
        )

    def __hash__(self):
        return hash((self.kind, self.quiver))

    def __repr__(self):
        return f"Alphabet({self.kind}, {self.quiver!r})"

    # -- letters ------------------------------------------------------------

    def letter_id(self, name: str) -> int:
        try:
            return self._ids[name]
        except KeyError:
            raise NCError("unknown-arrow", f"unknown letter {name!r}") from None

    def is_arrow(self, lid: int) -> bool:
        return lid < self.n_arrows

    def raise_letter(self, arrow_id: int) -> int:
        """Id of the ``d``/``D`` letter over the given arrow."""
        if self.kind == "alg":
            raise NCError("invalid-input", "path algebra has no d-letters")
        return arrow_id + self.n_arrows

    # -- words --------------------------------------------------------------

    def trivial(self, vi: int) -> Key:
        return (~vi,)

    def head(self, key: Key) -> int:
        k = key[0]
        return ~k if k < 0 else self.heads[k]

    def tail(self, key: Key) -> int:
        k = key[-1]
        return ~k if k < 0 else self.tails[k]

    def concat(self, k1: Key, k2: Key):
        """Product of two words, or ``None`` when they do not compose."""
        if self.tail(k1) != self.head(k2):
            return None
        if k1[0] < 0:
            return k2
        if k2[0] < 0:
            return k1
        return k1 + k2

    def word_key(self, letters: Iterable[int]) -> Key:
        letters = tuple(letters)
        for left, right in zip(letters, letters[1:]):
            if self.tails[left] != self.heads[right]:
                return None
        return letters

    def grade(self, key: Key) -> tuple[int, int]:
        g = self._grades.get(key)
        if g is None:
            if key[0] < 0:
                g = (0, 0)
            else:
                w = f = 0
                for lid in key:
                    w += self.weights[lid]
                    f += self.degrees[lid]
                g = (w, f)
            self._grades[key] = g
        return g

    def tdeg(self, g) -> int:
        """Degree entering bracket signs: weight, or weight+degree for polyvectors."""
        return g[0] + g[1] if self.kind == "poly" else g[0]

    def koszul(self, g1, g2) -> int:
        """Parity of the Koszul exponent for swapping homogeneous pieces."""
        if self.kind == "poly":
            return ((g1[0] + g1[1]) * (g2[0] + g2[1])) & 1
        return (g1[0] * g2[0] + g1[1] * g2[1]) & 1

    def sort_key(self, key: Key):
        if key[0] < 0:
            return (0, (~key[0],))
        return (len(key), key)

    # -- constructors -------------------------------------------------------

    def element(self, terms=None) -> "Element":
        return _ELEMENT_CLASS[self.kind](self, terms)

    def zero(self) -> "Element":
        return self.element()

    def one(self) -> "Element":
        return self.element({self.trivial(i): 1 for i in range(self.n_vertices)})

    def e(self, vertex) -> "Element":
        return self.element({self.trivial(self.quiver.vertex_index(vertex)): 1})

    def letter(self, name: str) -> "Element":
        return self.element({(self.letter_id(name),): 1})

    def word(self, *names: str) -> "Element":
        """Product of named letters, left to right (zero if not composable)."""
        key = self.word_key(self.letter_id(n) for n in names)
        if key is None:
            return self.zero()
        if not key:
            return self.one()
        return self.element({key: 1})

    def tensor(self, *elems: "Element") -> "Tensor":
        return tensor(*elems) if elems else Tensor(self, 0, {})


def alphabet(q: GradedQuiver, kind: str = "alg") -> Alphabet:
    return q.cached(("alphabet", kind), lambda: Alphabet(q, kind))


# ---------------------------------------------------------------------------
# elements


class Element:
    """Finite rational combination of words of one alphabet."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alph: Alphabet, terms=None):
        self.alphabet = alph
        clean = {}
        if terms:
            for k, c in terms.items():
                c = _frac(c)
                if c:
                    clean[tuple(k)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, alph, terms):
        obj = cls.__new__(cls)
        obj.alphabet = alph
        obj.terms = terms
        return obj

    def _new(self, terms):
        return type(self)._raw(self.alphabet, terms)

    @property
    def quiver(self) -> GradedQuiver:
        return self.alphabet.quiver

    def _check(self, other: "Element"):
        if self.alphabet != other.alphabet:
            if self.alphabet.quiver != other.alphabet.quiver:
                raise NCError("incompatible-quiver", "elements live on different quivers")
            raise NCError("invalid-input", "elements of different kinds")

    def _coerce(self, other: "Element"):
        """Lift path-algebra elements into the other's alphabet when the quivers agree."""
        if self.alphabet != other.alphabet and self.alphabet.quiver == other.alphabet.quiver:
            if self.alphabet.kind == "alg":
                return self.as_kind(other.alphabet.kind), other
            if other.alphabet.kind == "alg":
                return self, other.as_kind(self.alphabet.kind)
        return self, other

    # -- linear structure ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, Element):
            return NotImplemented
        self, other = self._coerce(other)
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Element":
        c = _frac(c)
        if not c:
            return self._new({})
        return self._new({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Element):
            return mul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, Element):
            return NotImplemented
        return self.alphabet == other.alphabet and self.terms == other.terms

    def __hash__(self):
        return hash((self.alphabet.kind, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self) -> list:
        """Terms in canonical order."""
        sk = self.alphabet.sort_key
        return sorted(self.terms.items(), key=lambda kv: sk(kv[0]))

    def __iter__(self) -> Iterator:
        return iter(self.items())

    def __repr__(self):
        from .frontend import render

        return f"{type(self).__name__}({render(self)!r})"

    # -- gradings -----------------------------------------------------------

    def grades(self) -> set:
        g = self.alphabet.grade
        return {g(k) for k in self.terms}

    def grade(self):
        """Bidegree of a homogeneous nonzero element."""
        gs = self.grades()
        if len(gs) != 1:
            raise NCError("invalid-input", "element is not homogeneous")
        return next(iter(gs))

    @property
    def weight(self) -> int:
        return self.grade()[0]

    def homogeneous_parts(self) -> dict:
        parts: dict = {}
        g = self.alphabet.grade
        for k, c in self.terms.items():
            parts.setdefault(g(k), {})[k] = c
        return {gr: self._new(t) for gr, t in parts.items()}

    def is_homogeneous(self) -> bool:
        return len(self.grades()) <= 1

    def monomials(self) -> list["Element"]:
        return [self._new({k: Fraction(1)}) for k, _ in self.items()]

    def as_kind(self, kind: str) -> "Element":
        """Reinterpret a word over arrows only in another alphabet."""
        target = alphabet(self.quiver, kind)
        if target == self.alphabet:
            return self
        n = self.alphabet.n_arrows
        for k in self.terms:
            if k[0] >= 0 and any(lid >= n for lid in k):
                raise NCError("invalid-input", "element has non-arrow letters")
        return target.element(self.terms)


class AlgElem(Element):
    __slots__ = ()


class FormElem(Element):
    __slots__ = ()


class PolyVec(Element):
    __slots__ = ()


_ELEMENT_CLASS = {"alg": AlgElem, "form": FormElem, "poly": PolyVec}


def mul(x: Element, y: Element) -> Element:
    """Concatenation product, bilinearly extended."""
    x, y = x._coerce(y)
    x._check(y)
    alph = x.alphabet
    concat = alph.concat
    out: dict = {}
    for k1, c1 in x.terms.items():
        for k2, c2 in y.terms.items():
            k = concat(k1, k2)
            if k is None:
                continue
            v = out.get(k, 0) + c1 * c2
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return x._new(out)


def product(elems: Iterable[Element], alph: Alphabet) -> Element:
    out = alph.one()
    for e in elems:
        out = mul(out, e)
    return out


# ---------------------------------------------------------------------------
# tensors


class Tensor:
    """Finite rational combination of n-tuples of words of one alphabet.

    ``x * t`` and ``t * x`` with ``x`` an :class:`Element` are the outer
    actions; the other bimodule structures are reached through
    :meth:`act`.
    """

    __slots__ = ("alphabet", "arity", "terms")

    def __init__(self, alph: Alphabet, arity: int, terms=None):
        self.alphabet = alph
        self.arity = arity
        clean = {}
        if terms:
            for ks, c in terms.items():
                c = _frac(c)
                if c:
                    if len(ks) != arity:
                        raise NCError("invalid-input", "tensor term of wrong arity")
                    clean[tuple(ks)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, alph, arity, terms):
        obj = cls.__new__(cls)
        obj.alphabet = alph
        obj.arity = arity
        obj.terms = terms
        return obj

    def _new(self, terms, arity=None):
        return Tensor._raw(self.alphabet, self.arity if arity is None else arity, terms)

    @classmethod
    def zero(cls, alph: Alphabet, arity: int = 2) -> "Tensor":
        return cls._raw(alph, arity, {})

    # -- linear structure ---------------------------------------------------

    def _check(self, other: "Tensor"):
        if self.alphabet != other.alphabet:
            raise NCError("incompatible-quiver", "tensors over different alphabets")
        if self.arity != other.arity and self.terms and other.terms:
            raise NCError("invalid-input", "tensors of different arity")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, Tensor):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        arity = self.arity if self.terms else other.arity
        return self._new(out, arity)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return self + (-other)

    def scale(self, c) -> "Tensor":
        c = _frac(c)
        if not c:
            return self._new({})
        return self._new({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Element):
            return self.act(0, "right", other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Element):
            return self.act(0, "left", other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, Tensor):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return (
            self.alphabet == other.alphabet
            and self.arity == other.arity
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self) -> list:
        sk = self.alphabet.sort_key
        return sorted(self.terms.items(), key=lambda kv: tuple(sk(k) for k in kv[0]))

    def __repr__(self):
        from .frontend import render

        return f"Tensor({render(self)!r})"

    def slot_grades(self, ks) -> list:
        g = self.alphabet.grade
        return [g(k) for k in ks]

    def as_kind(self, kind: str) -> "Tensor":
        target = alphabet(self.alphabet.quiver, kind)
        if target == self.alphabet:
            return self
        return Tensor(target, self.arity, self.terms)

    # -- bimodule structures ------------------------------------------------

    def act(self, i: int, side: str, b: Element) -> "Tensor":
        """The ``i``-jump action ``b *_i t`` (left) or ``t *_i b`` (right).

        The left action multiplies slot ``i`` from the left; the right
        action multiplies slot ``n-1-i`` from the right.  ``b`` picks up
        the Koszul sign of the slots it jumps over, so ``i = 0`` is the
        outer structure and ``i = 1`` on pairs the inner one.
        """
        n = self.arity
        if not 0 <= i < n:
            raise NCError("invalid-input", f"jump index {i} out of range for arity {n}")
        if side not in ("left", "right"):
            raise NCError("invalid-input", f"unknown side {side!r}")
        alph = self.alphabet
        if b.alphabet != alph:
            b = b.as_kind(alph.kind)
        grade, koszul, concat = alph.grade, alph.koszul, alph.concat
        out: dict = {}
        for bk, bc in b.terms.items():
            bg = grade(bk)
            for ks, c in self.terms.items():
                if side == "left":
                    slot, jumped = i, ks[:i]
                    k = concat(bk, ks[slot])
                else:
                    slot, jumped = n - 1 - i, ks[n - i:]
                    k = concat(ks[slot], bk)
                if k is None:
                    continue
                s = 0
                for jk in jumped:
                    s ^= koszul(bg, grade(jk))
                nks = ks[:slot] + (k,) + ks[slot + 1:]
                v = out.get(nks, 0) + (-c if s else c) * bc
                if v:
                    out[nks] = v
                else:
                    out.pop(nks, None)
        return self._new(out)

    def inner(self, left: Element | None = None, right: Element | None = None) -> "Tensor":
        """Inner action ``x * t * y`` on a pair tensor."""
        t = self
        if right is not None:
            t = t.act(1, "right", right)
        if left is not None:
            t = t.act(1, "left", left)
        return t

    def insert(self, i: int, u: Element, side: str = "left") -> "Tensor":
        """``u (x)_i t`` (left) or ``t (x)_i u`` (right), with Koszul sign."""
        n = self.arity
        if not 0 <= i <= n:
            raise NCError("invalid-input", f"insert index {i} out of range")
        if n + 1 > 3:
            raise NCError("arity-overflow", "tensors beyond arity 3 are not supported")
        alph = self.alphabet
        if u.alphabet != alph:
            u = u.as_kind(alph.kind)
        grade, koszul = alph.grade, alph.koszul
        out: dict = {}
        for uk, uc in u.terms.items():
            ug = grade(uk)
            for ks, c in self.terms.items():
                pos = i if side == "left" else n - i
                jumped = ks[:pos] if side == "left" else ks[pos:]
                s = 0
                for jk in jumped:
                    s ^= koszul(ug, grade(jk))
                nks = ks[:pos] + (uk,) + ks[pos:]
                v = out.get(nks, 0) + (-c if s else c) * uc
                if v:
                    out[nks] = v
                else:
                    out.pop(nks, None)
        return self._new(out, n + 1)

    def permute(self, s) -> "Tensor":
        """``sigma_s``: slot ``i`` moves to slot ``s[i]`` (0-based images)."""
        n = self.arity
        s = tuple(s)
        if len(s) != n or sorted(s) != list(range(n)):
            raise NCError("invalid-input", "permutation size does not match arity")
        inv = [0] * n
        for i, j in enumerate(s):
            inv[j] = i
        grade, koszul = self.alphabet.grade, self.alphabet.koszul
        out: dict = {}
        for ks, c in self.terms.items():
            gs = [grade(k) for k in ks]
            t = 0
            for i in range(n):
                for j in range(i + 1, n):
                    if inv[i] > inv[j]:
                        t ^= koszul(gs[inv[i]], gs[inv[j]])
            nks = tuple(ks[inv[j]] for j in range(n))
            v = out.get(nks, 0) + (-c if t else c)
            if v:
                out[nks] = v
            else:
                out.pop(nks, None)
        return self._new(out)

    def flip(self) -> "Tensor":
        """``(u (x) v)° = (-1)^(|u||v|) v (x) u``."""
        return self.permute((1, 0))

    def circ(self) -> Element:
        """Multiply back in reverse order with the Koszul sign."""
        if self.arity != 2:
            raise NCError("invalid-input", "circ needs a pair tensor")
        return self.flip().mult()

    def mult(self) -> Element:
        """Multiplication map: concatenate all slots in order."""
        alph = self.alphabet
        concat = alph.concat
        out: dict = {}
        for ks, c in self.terms.items():
            k = ks[0]
            for nk in ks[1:]:
                k = concat(k, nk)
                if k is None:
                    break
            if k is None:
                continue
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return alph.element(out)

    def slot(self, i: int) -> Element:
        """Sum of the ``i``-th slot entries; only meaningful for pure tensors."""
        out: dict = {}
        for ks, c in self.terms.items():
            out[ks[i]] = out.get(ks[i], 0) + c
        return self.alphabet.element(out)


def tensor(*elems: Element) -> Tensor:
    """Elementary tensor ``x1 (x) x2 (x) ...`` (no signs involved)."""
    alph = elems[0].alphabet
    for e in elems[1:]:
        if e.alphabet != alph:
            e._check(elems[0])
    out: dict = {}
    for combo in _cartesian(*(e.terms.items() for e in elems)):
        c = Fraction(1)
        for _, v in combo:
            c *= v
        ks = tuple(k for k, _ in combo)
        out[ks] = out.get(ks, 0) + c
    return Tensor(alph, len(elems), out)


def cycle_perm(n: int, *cycle: int) -> tuple:
    """0-based image tuple of the cycle ``(c1 c2 ...)`` given 1-based."""
    img = list(range(n))
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        img[a - 1] = b - 1
    return tuple(img)


def permute(s, t: Tensor) -> Tensor:
    return t.permute(s)


def circ(t: Tensor) -> Element:
    return t.circ()


def bimodule_act(i: int, side: str, b: Element, t: Tensor) -> Tensor:
    return t.act(i, side, b)


def tensor_insert(i: int, u: Element, t: Tensor, side: str = "left") -> Tensor:
    return t.insert(i, u, side)


# ---------------------------------------------------------------------------
# cyclic words


def cyclic_key(alph: Alphabet, key: Key):
    """Minimal signed rotation of a word: ``(key, sign)``, or ``None`` if zero."""
    if key[0] < 0:
        return key, 1
    if alph.heads[key[0]] != alph.tails[key[-1]]:
        return None
    n = len(key)
    grade, koszul = alph.grade, alph.koszul
    best = None
    best_sign = 0
    for j in range(n):
        rot = key[j:] + key[:j]
        if best is not None and rot > best:
            continue
        # u v  ~  (-1)^(|u||v|) v u  with u = key[:j]
        s = -1 if j and koszul(grade(key[:j]), grade(key[j:])) else 1
        if best is None or rot < best:
            best, best_sign = rot, s
        elif s != best_sign:
            return None
    return best, best_sign


def cyclic_project(x: Element) -> Element:
    """Canonical representative modulo graded commutators."""
    alph = x.alphabet
    out: dict = {}
    for k, c in x.terms.items():
        r = cyclic_key(alph, k)
        if r is None:
            continue
        rk, s = r
        v = out.get(rk, 0) + (c if s > 0 else -c)
        if v:
            out[rk] = v
        else:
            out.pop(rk, None)
    return x._new(out)


def graded_commutator(x: Element, y: Element) -> Element:
    """``xy - (-1)^(x.y) yx`` summed over homogeneous components."""
    alph = x.alphabet
    out = x._new({})
    for gx, px in x.homogeneous_parts().items():
        for gy, py in y.homogeneous_parts().items():
            s = -1 if alph.koszul(gx, gy) else 1
            out = out + mul(px, py) - mul(py, px).scale(s)
    return out
