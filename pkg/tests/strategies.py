"""Hypothesis strategies for random words and elements."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import assume
from hypothesis import strategies as st

from ncourant import alphabet

coeffs = st.builds(Fraction, st.integers(-5, 5).filter(bool), st.integers(1, 4))


@st.composite
def words(draw, alph, max_len=4, max_weight=None, max_degree=None, degree=None):
    """A composable word (leftmost letter first) satisfying the bounds.

    ``degree`` fixes the number of d/D letters exactly; the positions of
    those letters are drawn first and the walk fills in the rest.
    """
    n_letters = len(alph.names)
    lo = degree or 0
    length = draw(st.integers(lo, max(lo, max_len)))
    if length == 0 or n_letters == 0:
        assume(not degree)
        return alph.trivial(draw(st.integers(0, alph.n_vertices - 1)))
    if degree is None:
        marked = None
    else:
        marked = set(draw(st.permutations(range(length)))[:degree])
    key = ()
    for pos in range(length):
        options = [
            i for i in range(n_letters)
            if (marked is None or (alph.degrees[i] == 1) == (pos in marked))
            and (not key or alph.concat(key, (i,)) is not None)
        ]
        assume(options)
        key = key + (draw(st.sampled_from(options)),)
    w, deg = alph.grade(key)
    assume(max_weight is None or w <= max_weight)
    assume(max_degree is None or deg <= max_degree)
    return key


@st.composite
def elements(draw, q, kind="alg", max_terms=3, **bounds):
    alph = alphabet(q, kind)
    n = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(n):
        k = draw(words(alph, **bounds))
        terms[k] = terms.get(k, 0) + draw(coeffs)
    return alph.element({k: c for k, c in terms.items() if c})


@st.composite
def quivers(draw, max_vertices=3, max_arrows=3, max_weight=2, zero_weight=False):
    from ncourant import Arrow, GradedQuiver

    nv = draw(st.integers(1, max_vertices))
    verts = list(range(1, nv + 1))
    na = draw(st.integers(0, max_arrows))
    arrows = []
    for i in range(na):
        w = 0 if zero_weight else draw(st.integers(0, max_weight))
        arrows.append(Arrow(f"x{i}", draw(st.sampled_from(verts)), draw(st.sampled_from(verts)), w))
    return GradedQuiver(verts, arrows)


def random_word(rng, alph, max_len=4, max_weight=None, max_degree=None, degree=None):
    """Seeded counterpart of ``words`` for fixed-size samples; retries until the bounds hold."""
    n_letters = len(alph.names)
    while True:
        lo = degree or 0
        length = rng.randint(lo, max(lo, max_len))
        if length == 0:
            if not degree:
                return alph.trivial(rng.randrange(alph.n_vertices))
            continue
        marked = None if degree is None else set(rng.sample(range(length), degree))
        key = ()
        for pos in range(length):
            options = [
                i for i in range(n_letters)
                if (marked is None or (alph.degrees[i] == 1) == (pos in marked))
                and (not key or alph.concat(key, (i,)) is not None)
            ]
            if not options:
                key = None
                break
            key = key + (rng.choice(options),)
        if key is None:
            continue
        w, deg = alph.grade(key)
        if (max_weight is None or w <= max_weight) and (max_degree is None or deg <= max_degree):
            return key


def random_element(rng, q, kind="alg", max_terms=3, **bounds):
    alph = alphabet(q, kind)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        k = random_word(rng, alph, **bounds)
        terms[k] = terms.get(k, 0) + Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3))
    return alph.element({k: c for k, c in terms.items() if c})
