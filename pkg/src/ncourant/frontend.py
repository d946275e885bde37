"""Quiver description files, the expression language and canonical rendering.

Expression grammar (``|`` binds tighter than ``+``/``-``, looser than ``*``)::

    expr    := ['-'] term (('+' | '-') term)*
    term    := product ('|' product)*
    product := unary ('*' unary)*
    unary   := '-' unary | atom
    atom    := NUMBER | NAME | 'd(' expr ')' | 'D(' NAME ')' | '(' expr ')'

Names are arrows (``a``, ``a*``, ``a^``, or the aliases ``a.star``,
``a.hat``) and trivial paths ``e<vertex>``.  A ``*`` directly after a
name is read as part of the name when the starred arrow exists and no
operand follows, so ``a**b`` is ``(a*) * b`` and ``a*b`` is ``a * b``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import Element, Tensor, alphabet, tensor
from .errors import NCError
from .quiver import Arrow, GradedQuiver, double

# ---------------------------------------------------------------------------
# quiver files

_VERTICES = re.compile(r"vertices\s*:\s*(.*)$")
_ARROW = re.compile(
    r"arrow\s+(?P<name>[A-Za-z_][A-Za-z0-9_]*[*^]*)\s*:\s*(?P<tail>\S+)\s*->\s*(?P<head>\S+)"
    r"(?:\s+weight\s+(?P<weight>\S+))?\s*$"
)
_DOUBLE = re.compile(r"double\s+weight\s+(\S+)\s*$")


def _perr(line: int, col: int, msg: str, code: str = "parse-error") -> NCError:
    return NCError(code, f"line {line}, column {col}: {msg}")


def _int(tok: str, line: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise _perr(line, col, f"expected an integer, got {tok!r}") from None


def parse_quiver(text: str) -> GradedQuiver:
    vertices = None
    arrows: list[Arrow] = []
    seen: dict = {}
    dbl = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        col = len(body) - len(body.lstrip()) + 1
        m = _VERTICES.match(stripped)
        if m:
            if vertices is not None:
                raise _perr(lineno, col, "vertices declared twice")
            vs = []
            offset = body.index(m.group(1)) + 1 if m.group(1) else col
            for tok in m.group(1).split():
                v = _int(tok, lineno, offset + m.group(1).index(tok))
                if v in vs:
                    raise _perr(lineno, col, f"duplicate vertex {v}")
                vs.append(v)
            vertices = vs
            continue
        m = _ARROW.match(stripped)
        if m:
            if vertices is None:
                raise _perr(lineno, col, "arrow declared before vertices")
            name = m.group("name")
            if name in seen:
                raise _perr(lineno, col + m.start("name"), f"duplicate arrow {name!r}")
            ends = []
            for part in ("tail", "head"):
                c = col + m.start(part)
                v = _int(m.group(part), lineno, c)
                if v not in vertices:
                    raise _perr(lineno, c, f"unknown vertex {v}", "unknown-vertex")
                ends.append(v)
            w = 0
            if m.group("weight") is not None:
                c = col + m.start("weight")
                w = _int(m.group("weight"), lineno, c)
                if w < 0:
                    raise _perr(lineno, c, "negative weight")
            seen[name] = lineno
            arrows.append(Arrow(name, ends[0], ends[1], w))
            continue
        m = _DOUBLE.match(stripped)
        if m:
            if dbl is not None:
                raise _perr(lineno, col, "double directive given twice")
            dbl = (_int(m.group(1), lineno, col + m.start(1)), lineno, col)
            continue
        raise _perr(lineno, col, f"cannot parse {stripped!r}")
    if vertices is None:
        raise _perr(1, 1, "missing vertices declaration")
    q = GradedQuiver(vertices, arrows)
    if dbl is not None:
        n, lineno, col = dbl
        try:
            q = double(q, n)
        except NCError as exc:
            raise _perr(lineno, col, str(exc), exc.code) from None
    return q


def render_quiver(q: GradedQuiver) -> str:
    """Text description; doubled quivers are written with their starred arrows."""
    lines = ["vertices: " + " ".join(str(v) for v in q.vertices)]
    for a in q.arrows:
        lines.append(f"arrow {a.name}: {a.tail} -> {a.head} weight {a.weight}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# expressions

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*(?:\.(?:star|hat)|\^)*)"
    r"|(?P<op>[-+*|()]))"
)


class _Tok:
    __slots__ = ("kind", "text", "col")

    def __init__(self, kind, text, col):
        self.kind, self.text, self.col = kind, text, col

    def __repr__(self):
        return f"{self.kind}:{self.text}@{self.col}"


def _canonical_name(name: str) -> str:
    out = []
    parts = name.split(".")
    out.append(parts[0])
    for p in parts[1:]:
        out.append("*" if p == "star" else "^")
    return "".join(out)


def _tokenize(text: str, q: GradedQuiver) -> list[_Tok]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise NCError("parse-error", f"column {pos + 1}: unexpected character {text[pos]!r}")
        col = m.start(m.lastgroup) + 1
        if m.group("num"):
            toks.append(_Tok("num", m.group("num"), col))
            pos = m.end()
            continue
        if m.group("op"):
            toks.append(_Tok("op", m.group("op"), col))
            pos = m.end()
            continue
        name = _canonical_name(m.group("name"))
        pos = m.end()
        # absorb star/hat suffixes when they name an arrow and no operand follows
        while pos < n and text[pos] in "*^":
            if text[pos] == "^":
                name += "^"
                pos += 1
                continue
            if not q.has_arrow(name + "*"):
                break
            j = pos + 1
            while j < n and text[j].isspace():
                j += 1
            if j < n and (text[j].isalnum() or text[j] in "_("):
                break
            name += "*"
            pos += 1
            while pos < n and text[pos] == "." and text.startswith((".star", ".hat"), pos):
                if text.startswith(".star", pos):
                    name += "*"
                    pos += 5
                else:
                    name += "^"
                    pos += 4
        toks.append(_Tok("name", name, col))
    return toks


class _Parser:
    def __init__(self, text: str, q: GradedQuiver):
        self.q = q
        self.toks = _tokenize(text, q)
        self.i = 0
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, text):
        t = self.take()
        if t is None or t.text != text:
            col = t.col if t else len(self.text) + 1
            raise NCError("parse-error", f"column {col}: expected {text!r}")
        return t

    def parse(self):
        if not self.toks:
            raise NCError("parse-error", "column 1: empty expression")
        v = self.expr()
        t = self.peek()
        if t is not None:
            raise NCError("parse-error", f"column {t.col}: unexpected {t.text!r}")
        return v

    def expr(self):
        t = self.peek()
        if t is not None and t.text == "-":
            self.take()
            v = _neg(self.term())
        else:
            v = self.term()
        while True:
            t = self.peek()
            if t is None or t.text not in "+-" or t.kind != "op":
                return v
            self.take()
            rhs = self.term()
            v = _add(v, rhs if t.text == "+" else _neg(rhs), t.col)

    def term(self):
        first = self.product()
        slots = [first]
        while True:
            t = self.peek()
            if t is None or t.text != "|":
                break
            self.take()
            slots.append(self.product())
        if len(slots) == 1:
            return first
        return _tensor(slots, self.q)

    def product(self):
        v = self.unary()
        while True:
            t = self.peek()
            if t is None or t.text != "*":
                return v
            self.take()
            v = _mul(v, self.unary(), t.col)

    def unary(self):
        t = self.peek()
        if t is not None and t.text == "-" and t.kind == "op":
            self.take()
            return _neg(self.unary())
        return self.atom()

    def atom(self):
        t = self.take()
        if t is None:
            raise NCError("parse-error", f"column {len(self.text) + 1}: unexpected end of input")
        if t.kind == "num":
            return Fraction(t.text)
        if t.kind == "op":
            if t.text == "(":
                v = self.expr()
                self.expect(")")
                return v
            raise NCError("parse-error", f"column {t.col}: unexpected {t.text!r}")
        nxt = self.peek()
        if t.text in ("d", "D") and nxt is not None and nxt.text == "(":
            self.take()
            if t.text == "d":
                from .forms import univ_d

                inner = self.expr()
                self.expect(")")
                if isinstance(inner, Fraction):
                    return alphabet(self.q, "form").zero()
                if isinstance(inner, Tensor) or inner.alphabet.kind != "alg":
                    raise NCError("type-mixing", f"column {t.col}: d() takes a path expression")
                return univ_d(inner)
            arg = self.take()
            if arg is None or arg.kind != "name" or not self.q.has_arrow(arg.text):
                col = arg.col if arg else t.col
                raise NCError("unknown-identifier", f"column {col}: D() takes an arrow name")
            self.expect(")")
            return alphabet(self.q, "poly").letter(f"D({arg.text})")
        return self.name(t)

    def name(self, t):
        q = self.q
        if q.has_arrow(t.text):
            return alphabet(q, "alg").letter(t.text)
        m = re.fullmatch(r"e(-?\d+)", t.text)
        if m and int(m.group(1)) in q.vertices:
            return alphabet(q, "alg").e(int(m.group(1)))
        raise NCError("unknown-identifier", f"column {t.col}: unknown identifier {t.text!r}")


def _kind(v):
    if isinstance(v, Fraction):
        return "scalar"
    if isinstance(v, Tensor):
        return "tensor"
    return v.alphabet.kind


def _unify(x, y, col):
    kx, ky = _kind(x), _kind(y)
    if {kx, ky} == {"form", "poly"}:
        raise NCError("type-mixing", f"column {col}: cannot mix d() and D() letters")
    if kx == "alg" and ky in ("form", "poly"):
        x = x.as_kind(ky)
    elif ky == "alg" and kx in ("form", "poly"):
        y = y.as_kind(kx)
    return x, y


def _neg(v):
    return -v


def _add(x, y, col):
    kx, ky = _kind(x), _kind(y)
    if kx == "scalar" and ky == "scalar":
        return x + y
    if kx == "tensor" or ky == "tensor":
        if kx != ky:
            raise NCError("type-mixing", f"column {col}: cannot add a tensor and a non-tensor")
        x, y = _unify_tensors(x, y, col)
        return x + y
    if kx == "scalar":
        x = y.alphabet.one().scale(x)
    elif ky == "scalar":
        y = x.alphabet.one().scale(y)
    x, y = _unify(x, y, col)
    return x + y


def _unify_tensors(x: Tensor, y: Tensor, col):
    if x.arity != y.arity and x.terms and y.terms:
        raise NCError("type-mixing", f"column {col}: tensors of different arity")
    kx, ky = x.alphabet.kind, y.alphabet.kind
    if {kx, ky} == {"form", "poly"}:
        raise NCError("type-mixing", f"column {col}: cannot mix d() and D() letters")
    if kx == "alg" and ky != "alg":
        x = x.as_kind(ky)
    elif ky == "alg" and kx != "alg":
        y = y.as_kind(kx)
    return x, y


def _mul(x, y, col):
    kx, ky = _kind(x), _kind(y)
    if kx == "scalar" or ky == "scalar":
        return x * y
    if kx == "tensor" or ky == "tensor":
        raise NCError("type-mixing", f"column {col}: use '|' to build tensors")
    x, y = _unify(x, y, col)
    return x * y


def _tensor(slots, q):
    scalar = Fraction(1)
    elems = []
    for s in slots:
        if isinstance(s, Fraction):
            scalar *= s
            elems.append(None)
        elif isinstance(s, Tensor):
            raise NCError("type-mixing", "nested tensors")
        else:
            elems.append(s)
    kinds = {e.alphabet.kind for e in elems if e is not None}
    if {"form", "poly"} <= kinds:
        raise NCError("type-mixing", "cannot mix d() and D() letters")
    kind = "form" if "form" in kinds else "poly" if "poly" in kinds else "alg"
    alph = alphabet(q, kind)
    elems = [alph.one() if e is None else e.as_kind(kind) for e in elems]
    return tensor(*elems).scale(scalar)


def parse_expr(text: str, q: GradedQuiver):
    """Parse to an AlgElem, FormElem, PolyVec or Tensor, typed by letter content."""
    v = _Parser(text, q).parse()
    if isinstance(v, Fraction):
        return alphabet(q, "alg").one().scale(v)
    return v


# ---------------------------------------------------------------------------
# rendering


def _coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _quiver_vertex(alph, vi):
    return alph.quiver.vertices[vi]


def render_word(alph, key) -> str:
    if key[0] < 0:
        return f"e{_quiver_vertex(alph, ~key[0])}"
    return "*".join(alph.names[lid] for lid in key)


def _join(parts) -> str:
    out = ""
    for i, (neg, body) in enumerate(parts):
        if i == 0:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out


def _term(c: Fraction, body: str) -> tuple[bool, str]:
    neg = c < 0
    a = -c if neg else c
    if a == 1:
        return neg, body
    return neg, f"{_coeff(a)}*{body}"


def render(x) -> str:
    """Deterministic canonical text of elements, tensors, classes and reports."""
    from .forms import DRClass
    from .report import CheckReport
    from .doubleder import DoubleDer

    if isinstance(x, CheckReport):
        return x.to_json()
    if isinstance(x, DRClass):
        return render(x.rep)
    if isinstance(x, (int, Fraction)):
        return _coeff(Fraction(x))
    if isinstance(x, DoubleDer):
        if not x.values:
            return "0"
        return "; ".join(f"{n} -> {render(t)}" for n, t in sorted(
            x.values.items(), key=lambda kv: x.quiver.arrow_index(kv[0])))
    if isinstance(x, Element):
        if not x.terms:
            return "0"
        alph = x.alphabet
        return _join([_term(c, render_word(alph, k)) for k, c in x.items()])
    if isinstance(x, Tensor):
        if not x.terms:
            return "0"
        alph = x.alphabet
        return _join(
            [_term(c, " | ".join(render_word(alph, k) for k in ks)) for ks, c in x.items()]
        )
    if isinstance(x, str):
        return x
    raise NCError("invalid-input", f"cannot render {type(x).__name__}")
