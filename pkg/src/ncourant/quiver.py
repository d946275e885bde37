"""Graded quivers, weight-N doubling and the hat extension."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import NCError


@dataclass(frozen=True)
class Arrow:
    name: str
    tail: int
    head: int
    weight: int = 0


class GradedQuiver:
    """A finite quiver whose arrows carry non-negative integer weights.

    Vertices are small integers kept in declaration order; arrows keep
    declaration order too, and that order fixes every later basis order.
    A doubled quiver additionally knows its doubling weight, the star
    partner of every arrow and the sign function ``epsilon``.
    """

    def __init__(
        self,
        vertices: Iterable[int],
        arrows: Iterable[Arrow | tuple],
        star_partner: Optional[dict[str, str]] = None,
        double_weight: Optional[int] = None,
        originals: Optional[Iterable[str]] = None,
    ):
        self.vertices: tuple[int, ...] = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise NCError("invalid-input", "duplicate vertex")
        arrs = []
        for a in arrows:
            if not isinstance(a, Arrow):
                a = Arrow(*a)
            arrs.append(a)
        self.arrows: tuple[Arrow, ...] = tuple(arrs)
        self._by_name = {}
        vset = set(self.vertices)
        for a in self.arrows:
            if a.name in self._by_name:
                raise NCError("invalid-input", f"duplicate arrow name {a.name!r}")
            if a.tail not in vset or a.head not in vset:
                raise NCError("invalid-input", f"arrow {a.name!r} uses an undeclared vertex")
            if a.weight < 0:
                raise NCError("invalid-input", f"arrow {a.name!r} has negative weight")
            self._by_name[a.name] = a
        self.star_partner: dict[str, str] = dict(star_partner or {})
        self.double_weight = double_weight
        if self.star_partner:
            self._check_doubling(set(originals or ()))
            self._originals = frozenset(originals)
        else:
            self._originals = frozenset(a.name for a in self.arrows)
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        self._aindex = {a.name: i for i, a in enumerate(self.arrows)}
        self._cache: dict = {}

    def _check_doubling(self, originals):
        n = self.double_weight
        for name, partner in self.star_partner.items():
            a, b = self.arrow(name), self.arrow(partner)
            if self.star_partner.get(partner) != name:
                raise NCError("invalid-input", f"star partner of {name!r} is not an involution")
            if a.tail != b.head or a.head != b.tail:
                raise NCError("invalid-input", f"{partner!r} does not reverse {name!r}")
            if n is not None and a.weight + b.weight != n:
                raise NCError("invalid-doubling-weight", f"weights of {name!r} and {partner!r}")
        for name in originals:
            if name not in self.star_partner:
                raise NCError("invalid-input", f"original arrow {name!r} has no partner")

    # -- lookup -------------------------------------------------------------

    def arrow(self, name: str) -> Arrow:
        try:
            return self._by_name[name]
        except KeyError:
            raise NCError("unknown-arrow", f"unknown arrow {name!r}") from None

    def has_arrow(self, name: str) -> bool:
        return name in self._by_name

    def arrow_index(self, name: str) -> int:
        return self._aindex[name]

    def vertex_index(self, v: int) -> int:
        return self._vindex[v]

    @property
    def arrow_names(self) -> list[str]:
        return [a.name for a in self.arrows]

    @property
    def is_doubled(self) -> bool:
        return bool(self.star_partner) or (not self.arrows and self.double_weight is not None)

    def star(self, name: str) -> str:
        try:
            return self.star_partner[name]
        except KeyError:
            raise NCError("invalid-quiver", f"arrow {name!r} has no star partner") from None

    def is_original(self, name: str) -> bool:
        return name in self._originals

    def epsilon(self, name: str) -> int:
        self.arrow(name)
        if not self.star_partner:
            raise NCError("invalid-quiver", "epsilon needs a doubled quiver")
        return 1 if name in self._originals else -1

    @property
    def originals(self) -> list[str]:
        return [a.name for a in self.arrows if a.name in self._originals]

    def max_weight(self) -> int:
        return max((a.weight for a in self.arrows), default=0)

    # -- value semantics ----------------------------------------------------

    def _key(self):
        return (
            self.vertices,
            self.arrows,
            tuple(sorted(self.star_partner.items())),
            self.double_weight,
            tuple(sorted(self._originals)) if self.star_partner else (),
        )

    def __eq__(self, other):
        return isinstance(other, GradedQuiver) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        arrs = ", ".join(f"{a.name}:{a.tail}->{a.head}/{a.weight}" for a in self.arrows)
        return f"GradedQuiver(vertices={list(self.vertices)}, arrows=[{arrs}])"

    def cached(self, key, build):
        """Memoize derived structures (alphabets, brackets) on the quiver."""
        try:
            return self._cache[key]
        except KeyError:
            value = self._cache[key] = build()
            return value


def star_name(name: str) -> str:
    return name + "*"


def hat_name(name: str) -> str:
    return name + "^"


def double(q: GradedQuiver, n: int) -> GradedQuiver:
    """Weight-``n`` double: adjoin a reversed arrow ``a*`` of weight ``n - |a|``."""
    if q.star_partner:
        raise NCError("invalid-input", "quiver is already doubled")
    if n < q.max_weight():
        raise NCError("invalid-doubling-weight", f"{n} is below the maximal arrow weight")
    arrows = list(q.arrows)
    partner = {}
    for a in q.arrows:
        s = star_name(a.name)
        if q.has_arrow(s):
            raise NCError("invalid-input", f"name clash for {s!r}")
        arrows.append(Arrow(s, a.head, a.tail, n - a.weight))
        partner[a.name] = s
        partner[s] = a.name
    return GradedQuiver(q.vertices, arrows, partner, double_weight=n, originals=q.arrow_names)


def weight_subquivers(q: GradedQuiver) -> tuple[GradedQuiver, GradedQuiver]:
    """Split into the weight-0 subquiver and the positive-weight subquiver."""
    zero = [a for a in q.arrows if a.weight == 0]
    pos = [a for a in q.arrows if a.weight > 0]
    return GradedQuiver(q.vertices, zero), GradedQuiver(q.vertices, pos)


def hat_extend(q: GradedQuiver) -> GradedQuiver:
    """Adjoin a weight-1 arrow ``a^`` parallel to every (weight-0) arrow ``a``."""
    if q.star_partner:
        raise NCError("invalid-input", "cannot hat-extend a doubled quiver")
    for a in q.arrows:
        if a.weight != 0:
            raise NCError("invalid-input", f"arrow {a.name!r} has nonzero weight")
    arrows = list(q.arrows)
    for a in q.arrows:
        h = hat_name(a.name)
        if q.has_arrow(h):
            raise NCError("invalid-input", f"name clash for {h!r}")
        arrows.append(Arrow(h, a.tail, a.head, 1))
    return GradedQuiver(q.vertices, arrows)


def standard_double(q: GradedQuiver) -> GradedQuiver:
    """The weight-2 double of the hat extension of a weight-0 quiver."""
    return double(hat_extend(q), 2)


# A few quivers used throughout the tests and the CLI examples.

def jordan() -> GradedQuiver:
    return GradedQuiver([1], [Arrow("a", 1, 1, 0)])


def kronecker(k: int = 2) -> GradedQuiver:
    names = "abcdefgh"[:k]
    return GradedQuiver([1, 2], [Arrow(x, 1, 2, 0) for x in names])


def two_loops() -> GradedQuiver:
    return GradedQuiver([1], [Arrow("x", 1, 1, 0), Arrow("y", 1, 1, 0)])
